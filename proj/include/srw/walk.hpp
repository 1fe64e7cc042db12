#ifndef SRW_WALK_HPP
#define SRW_WALK_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace srw {

// Closed integer interval [lo, hi].
struct Interval {
    std::int64_t lo = 0;
    std::int64_t hi = 0;

    std::int64_t length() const { return hi - lo + 1; }
    bool contains(std::int64_t x) const { return x >= lo && x <= hi; }
    bool operator==(const Interval&) const = default;
};

// Law of one increment S_{t+1} - S_t, stored on the truncated support
// [-truncation_bound, truncation_bound]. Symmetric by construction.
template <class T>
struct BasicIncrementDistribution {
    double epsilon = 0.0;   // mass of non-unit steps
    double decay_c = 0.0;   // exponential decay rate of the conditional tail
    int truncation_bound = 1;
    std::vector<T> mass;    // index i holds P(step = i - truncation_bound)

    T at(int step) const {
        if (step < -truncation_bound || step > truncation_bound) return T(0);
        return mass[static_cast<std::size_t>(step + truncation_bound)];
    }

    int max_step() const { return truncation_bound; }

    // Largest |step| with positive mass.
    int support_radius() const {
        for (int i = truncation_bound; i >= 0; --i)
            if (at(i) != T(0) || at(-i) != T(0)) return i;
        return 0;
    }

    bool unit_steps_only() const { return support_radius() <= 1; }
};

using IncrementDistribution = BasicIncrementDistribution<double>;

// Checks the four walk conditions plus normalization; throws std::domain_error
// naming the first violated condition.
template <class T>
inline void validate(const BasicIncrementDistribution<T>& d, double tol = 1e-12) {
    double total = 0.0, nonunit = 0.0;
    for (int i = -d.truncation_bound; i <= d.truncation_bound; ++i) {
        double m = static_cast<double>(d.at(i));
        if (m < 0.0) throw std::domain_error("invalid distribution: negative mass");
        total += m;
        if (std::abs(i) != 1) nonunit += m;
    }
    if (std::abs(total - 1.0) > tol)
        throw std::domain_error("invalid distribution: total mass != 1");
    if (std::abs(nonunit - d.epsilon) > tol)
        throw std::domain_error("Condition (1) violated: P(|step| != 1) != epsilon");
    if (d.epsilon > 0.0) {
        for (int i = 2; i <= d.truncation_bound; ++i) {
            double cond = (static_cast<double>(d.at(i)) + static_cast<double>(d.at(-i))) / d.epsilon;
            if (cond > std::exp(-d.decay_c * i) + tol)
                throw std::domain_error(
                    "Condition (2) violated: conditional tail mass at " + std::to_string(i) +
                    " exceeds exp(-c*i)");
        }
    }
    for (int i = 1; i <= d.truncation_bound; ++i)
        if (std::abs(static_cast<double>(d.at(i)) - static_cast<double>(d.at(-i))) > tol)
            throw std::domain_error("Condition (3) violated: asymmetric increment law");
    if (static_cast<double>(d.at(0)) <= 0.0)
        throw std::domain_error("Condition (4) violated: P(step = 0) must be positive");
}

// Steps 0 with probability eps and +-1 with probability (1-eps)/2 each.
template <class T>
inline BasicIncrementDistribution<T> lazy_simple_t(T eps) {
    if (!(eps >= T(0) && eps < T(1)))
        throw std::invalid_argument("lazy_simple: epsilon must lie in [0,1)");
    BasicIncrementDistribution<T> d;
    d.epsilon = static_cast<double>(eps);
    d.decay_c = 1.0; // conditional non-unit mass sits at 0; any rate is consistent
    d.truncation_bound = 1;
    T gamma = (T(1) - eps) / T(2);
    d.mass = {gamma, eps, gamma};
    return d;
}

inline IncrementDistribution lazy_simple(double eps) { return lazy_simple_t<double>(eps); }

namespace detail {

// Geometric-tail family without the condition checks; keeps the arithmetic
// testable separately from feasibility.
inline IncrementDistribution geometric_tail_unchecked(double epsilon, double decay_c,
                                                      double p_zero_frac, int truncation_bound) {
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw std::invalid_argument("geometric_tail: epsilon must lie in [0,1)");
    if (!(p_zero_frac >= 0.0 && p_zero_frac <= 1.0))
        throw std::invalid_argument("geometric_tail: p_zero_frac must lie in [0,1]");
    if (decay_c <= 0.0) throw std::invalid_argument("geometric_tail: decay_c must be positive");
    if (truncation_bound < 1) throw std::invalid_argument("geometric_tail: bound must be >= 1");

    IncrementDistribution d;
    d.epsilon = epsilon;
    d.decay_c = decay_c;
    d.truncation_bound = truncation_bound;
    d.mass.assign(static_cast<std::size_t>(2 * truncation_bound + 1), 0.0);
    auto set = [&](int i, double m) { d.mass[static_cast<std::size_t>(i + truncation_bound)] = m; };

    double gamma = (1.0 - epsilon) / 2.0;
    set(1, gamma);
    set(-1, gamma);
    set(0, epsilon * p_zero_frac);

    double tail_mass = epsilon * (1.0 - p_zero_frac);
    if (tail_mass > 0.0) {
        if (truncation_bound < 2)
            throw std::invalid_argument("geometric_tail: tail mass requires bound >= 2");
        double z = 0.0;
        for (int i = 2; i <= truncation_bound; ++i) z += std::exp(-decay_c * i);
        for (int i = 2; i <= truncation_bound; ++i) {
            double m = tail_mass * std::exp(-decay_c * i) / (2.0 * z);
            set(i, m);
            set(-i, m);
        }
    }
    return d;
}

} // namespace detail

// Non-unit mass epsilon split between 0 and a symmetric geometric tail on
// |i| >= 2 with ratio exp(-decay_c), truncated and renormalized within the
// tail. Rejects parameter combinations that break Conditions (1)-(4).
inline IncrementDistribution geometric_tail(double epsilon, double decay_c, double p_zero_frac,
                                            int truncation_bound) {
    IncrementDistribution d =
        detail::geometric_tail_unchecked(epsilon, decay_c, p_zero_frac, truncation_bound);
    if (epsilon > 0.0) validate(d);
    return d;
}

// One simulated trajectory S_0..S_T.
struct WalkRun {
    std::vector<std::int64_t> positions;
    std::uint64_t seed = 0;

    std::size_t horizon() const { return positions.empty() ? 0 : positions.size() - 1; }
};

// Incremental sampler; lets long trials consume positions without storing them.
class WalkStream {
public:
    WalkStream(const IncrementDistribution& d, std::int64_t start, std::uint64_t seed)
        : pos_(start), rng_(seed) {
        steps_.reserve(d.mass.size());
        std::vector<double> weights;
        for (int i = -d.truncation_bound; i <= d.truncation_bound; ++i) {
            double m = d.at(i);
            if (m > 0.0) {
                steps_.push_back(i);
                weights.push_back(m);
            }
        }
        if (steps_.empty()) throw std::invalid_argument("WalkStream: empty support");
        pick_ = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
    }

    std::int64_t position() const { return pos_; }
    void set_position(std::int64_t p) { pos_ = p; }

    std::int64_t advance() {
        pos_ += steps_[pick_(rng_)];
        return pos_;
    }

private:
    std::int64_t pos_;
    std::mt19937_64 rng_;
    std::vector<int> steps_;
    std::discrete_distribution<std::size_t> pick_;
};

inline WalkRun simulate(const IncrementDistribution& d, std::int64_t start, std::size_t horizon,
                        std::uint64_t seed) {
    WalkRun run;
    run.seed = seed;
    run.positions.reserve(horizon + 1);
    WalkStream w(d, start, seed);
    run.positions.push_back(w.position());
    for (std::size_t t = 0; t < horizon; ++t) run.positions.push_back(w.advance());
    return run;
}

// Distribution of S_t over an integer interval; may be sub-stochastic when
// conditioned on confinement.
template <class T>
struct BasicStateDistribution {
    std::int64_t support_offset = 0;
    std::vector<T> masses;

    static BasicStateDistribution point(std::int64_t x) {
        return {x, {T(1)}};
    }

    T at(std::int64_t x) const {
        std::int64_t i = x - support_offset;
        if (i < 0 || i >= static_cast<std::int64_t>(masses.size())) return T(0);
        return masses[static_cast<std::size_t>(i)];
    }

    T total() const {
        T s(0);
        for (const T& m : masses) s += m;
        return s;
    }

    std::int64_t lo() const { return support_offset; }
    std::int64_t hi() const { return support_offset + static_cast<std::int64_t>(masses.size()) - 1; }

    // Drops zero margins; keeps indexing tight after convolutions.
    void trim() {
        std::size_t a = 0, b = masses.size();
        while (a < b && masses[a] == T(0)) ++a;
        while (b > a && masses[b - 1] == T(0)) --b;
        if (a == b) {
            masses.clear();
            return;
        }
        if (a > 0) support_offset += static_cast<std::int64_t>(a);
        masses = std::vector<T>(masses.begin() + static_cast<std::ptrdiff_t>(a),
                                masses.begin() + static_cast<std::ptrdiff_t>(b));
    }
};

using StateDistribution = BasicStateDistribution<double>;

// One exact forward step. Mass stepping outside `confine` is killed.
template <class T>
inline BasicStateDistribution<T> advance_state(const BasicStateDistribution<T>& s,
                                               const BasicIncrementDistribution<T>& d,
                                               const std::optional<Interval>& confine = std::nullopt) {
    BasicStateDistribution<T> out;
    int b = d.truncation_bound;
    std::int64_t lo = s.lo() - b;
    std::int64_t hi = s.hi() + b;
    if (confine) {
        lo = std::max(lo, confine->lo);
        hi = std::min(hi, confine->hi);
    }
    if (lo > hi || s.masses.empty()) return out;
    out.support_offset = lo;
    out.masses.assign(static_cast<std::size_t>(hi - lo + 1), T(0));
    for (std::size_t i = 0; i < s.masses.size(); ++i) {
        const T& m = s.masses[i];
        if (m == T(0)) continue;
        std::int64_t x = s.lo() + static_cast<std::int64_t>(i);
        for (int step = -b; step <= b; ++step) {
            const T& p = d.at(step);
            if (p == T(0)) continue;
            std::int64_t y = x + step;
            if (y < lo || y > hi) continue;
            out.masses[static_cast<std::size_t>(y - lo)] += m * p;
        }
    }
    return out;
}

// Exact forward dynamic program: t convolutions of the increment law starting
// from start_law, with optional absorbing confinement.
template <class T>
inline BasicStateDistribution<T> state_distribution(const BasicIncrementDistribution<T>& d,
                                                    BasicStateDistribution<T> start_law,
                                                    std::size_t t,
                                                    const std::optional<Interval>& confine = std::nullopt) {
    if (confine && (start_law.lo() < confine->lo || start_law.hi() > confine->hi)) {
        start_law.trim();
        if (start_law.lo() < confine->lo || start_law.hi() > confine->hi)
            throw std::invalid_argument("state_distribution: start law outside confinement");
    }
    for (std::size_t i = 0; i < t; ++i) start_law = advance_state(start_law, d, confine);
    return start_law;
}

// rho(t, x) = P(S_t = x+1) / P(S_t = x) for the walk started at 0. For lazy
// walks this one-step ratio mixes lazy-step parity classes and is NOT bounded
// by (t-x)/(t+x+1): rho(1, 0) equals gamma/eps. The provable decay statement
// is the same-parity two-step ratio below.
template <class T>
inline T decay_ratio(const BasicIncrementDistribution<T>& d, std::size_t t, std::int64_t x) {
    auto dist = state_distribution(d, BasicStateDistribution<T>::point(0), t);
    T den = dist.at(x);
    if (den == T(0)) throw std::domain_error("decay_ratio: P(S_t = x) is zero");
    return dist.at(x + 1) / den;
}

// Same-parity tail decay P(S_t = x+2) / P(S_t = x). Every lazy-step count s
// contributes to both numerator and denominator with the same weight, and the
// per-term binomial ratio is (t-s-x)/(t-s+x+2), so the whole ratio is at most
// (t-x)/(t+x+2) and in particular under the looser (t-x)/(t+x+1) cap.
template <class T>
inline T decay_ratio_two_step(const BasicIncrementDistribution<T>& d, std::size_t t,
                              std::int64_t x) {
    auto dist = state_distribution(d, BasicStateDistribution<T>::point(0), t);
    T den = dist.at(x);
    if (den == T(0)) throw std::domain_error("decay_ratio_two_step: P(S_t = x) is zero");
    return dist.at(x + 2) / den;
}

} // namespace srw

#endif
