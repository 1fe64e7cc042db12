#ifndef SRW_RNG_HPP
#define SRW_RNG_HPP

#include <cstdint>

namespace srw {

// splitmix64 finalizer; used both as a hash and as the seed-derivation map.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for trial i of a batch keyed by master_seed. Injective in i for fixed
// master, so concurrent trials never share a stream.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(master_seed ^ splitmix64(index + 0x51ed2701a9b4c2e3ULL));
}

// Counter-based generator: value for cell z of the scenery keyed by seed.
// Extending a window never perturbs already generated cells.
inline std::uint64_t cell_hash(std::uint64_t seed, std::int64_t z) {
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(z) + 0x6a09e667f3bcc909ULL));
}

} // namespace srw

#endif
