#ifndef SRW_SCENERY_HPP
#define SRW_SCENERY_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "srw/rng.hpp"

namespace srw {

using Color = std::uint8_t; // values 1..5

inline constexpr int kNumColors = 5;

// A finite color word over {1..5}.
struct Pattern {
    std::vector<Color> colors;

    Pattern() = default;
    explicit Pattern(std::vector<Color> c) : colors(std::move(c)) {
        if (colors.empty()) throw std::invalid_argument("Pattern: empty");
        for (Color x : colors)
            if (x < 1 || x > kNumColors) throw std::invalid_argument("Pattern: color out of range");
    }

    std::size_t size() const { return colors.size(); }
    Color operator[](std::size_t i) const { return colors[i]; }
    bool operator==(const Pattern&) const = default;
};

// A 5-coloring of an integer interval. A scenery may carry a generator seed,
// in which case cells outside the materialized window are defined too (drawn
// i.i.d. uniform from a counter-based generator keyed by (seed, cell)), and
// the window is conceptually bi-infinite.
class Scenery {
public:
    Scenery(std::int64_t origin, std::vector<Color> colors)
        : origin_(origin), colors_(std::move(colors)) {
        check_colors();
    }

    Scenery(std::int64_t origin, std::vector<Color> colors, std::uint64_t seed)
        : origin_(origin), colors_(std::move(colors)), seed_(seed) {
        check_colors();
    }

    // i.i.d. uniform scenery materialized on [lo, hi], extendable on demand.
    static Scenery iid(std::uint64_t seed, std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw std::invalid_argument("Scenery::iid: lo > hi");
        std::vector<Color> c;
        c.reserve(static_cast<std::size_t>(hi - lo + 1));
        for (std::int64_t z = lo; z <= hi; ++z) c.push_back(iid_color(seed, z));
        return Scenery(lo, std::move(c), seed);
    }

    static Color iid_color(std::uint64_t seed, std::int64_t z) {
        return static_cast<Color>(cell_hash(seed, z) % kNumColors + 1);
    }

    std::int64_t origin_offset() const { return origin_; }
    std::int64_t lo() const { return origin_; }
    std::int64_t hi() const { return origin_ + static_cast<std::int64_t>(colors_.size()) - 1; }
    std::size_t length() const { return colors_.size(); }
    const std::vector<Color>& colors() const { return colors_; }
    bool unbounded() const { return seed_.has_value(); }
    std::optional<std::uint64_t> seed() const { return seed_; }

    Color at(std::int64_t z) const {
        if (z >= lo() && z <= hi()) return colors_[static_cast<std::size_t>(z - origin_)];
        if (seed_) return iid_color(*seed_, z);
        throw std::out_of_range("Scenery::at: index outside stored window");
    }

    Color operator()(std::int64_t z) const { return at(z); }

    // Mirror image about the origin: reflected(z) = original(-z).
    Scenery reflected() const {
        std::vector<Color> c(colors_.rbegin(), colors_.rend());
        Scenery s(-hi(), std::move(c));
        s.reflected_seed_ = seed_;
        if (seed_) s.seed_ = std::nullopt; // cells outside come from reflected lookups
        return s;
    }

    bool has_reflected_seed() const { return reflected_seed_.has_value(); }

    // Lookup valid also outside the window when either seed is present.
    Color at_extended(std::int64_t z) const {
        if (z >= lo() && z <= hi()) return colors_[static_cast<std::size_t>(z - origin_)];
        if (seed_) return iid_color(*seed_, z);
        if (reflected_seed_) return iid_color(*reflected_seed_, -z);
        throw std::out_of_range("Scenery::at_extended: index outside stored window");
    }

    // One line of digits plus the origin offset, e.g. "243245153 @ -4".
    std::string to_line() const {
        std::ostringstream os;
        for (Color c : colors_) os << static_cast<int>(c);
        os << " @ " << origin_;
        return os.str();
    }

    static Scenery from_line(const std::string& line) {
        auto at_pos = line.find('@');
        if (at_pos == std::string::npos) throw std::invalid_argument("Scenery::from_line: missing '@'");
        std::vector<Color> c;
        for (std::size_t i = 0; i < at_pos; ++i) {
            char ch = line[i];
            if (ch == ' ') continue;
            if (ch < '1' || ch > '5') throw std::invalid_argument("Scenery::from_line: bad digit");
            c.push_back(static_cast<Color>(ch - '0'));
        }
        std::int64_t origin = std::stoll(line.substr(at_pos + 1));
        return Scenery(origin, std::move(c));
    }

    bool operator==(const Scenery& o) const {
        return origin_ == o.origin_ && colors_ == o.colors_;
    }

private:
    void check_colors() const {
        if (colors_.empty()) throw std::invalid_argument("Scenery: empty window");
        for (Color x : colors_)
            if (x < 1 || x > kNumColors) throw std::invalid_argument("Scenery: color out of range");
    }

    std::int64_t origin_;
    std::vector<Color> colors_;
    std::optional<std::uint64_t> seed_;
    std::optional<std::uint64_t> reflected_seed_;
};

// Each cell independently uniform on {1..5}; cells live on [0, length).
inline Scenery generate_iid(std::size_t length, std::uint64_t seed) {
    if (length == 0) throw std::invalid_argument("generate_iid: length must be >= 1");
    return Scenery::iid(seed, 0, static_cast<std::int64_t>(length) - 1);
}

inline Pattern window(const Scenery& s, std::int64_t a, std::int64_t b) {
    if (a > b) throw std::invalid_argument("window: a > b");
    if (a < s.lo() || b > s.hi()) throw std::out_of_range("window: outside stored window");
    std::vector<Color> c;
    c.reserve(static_cast<std::size_t>(b - a + 1));
    for (std::int64_t z = a; z <= b; ++z) c.push_back(s.at(z));
    return Pattern(std::move(c));
}

// Equality up to shift and reflection, decided on finite windows: the color
// sequences must be equal or mirror images.
inline bool equivalent(const Scenery& s1, const Scenery& s2) {
    if (s1.length() != s2.length())
        throw std::invalid_argument("equivalent: windows of different length");
    const auto& a = s1.colors();
    const auto& b = s2.colors();
    return a == b || std::equal(a.begin(), a.end(), b.rbegin());
}

} // namespace srw

#endif
