#ifndef SRW_PATHS_HPP
#define SRW_PATHS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "srw/walk.hpp"

namespace srw {

// A map R : [0, n] -> Z given by a start point and n increments.
struct PathFunction {
    std::int64_t start = 0;
    std::vector<std::int64_t> steps;

    std::size_t length() const { return steps.size(); }

    std::int64_t position(std::size_t i) const {
        std::int64_t p = start;
        for (std::size_t k = 0; k < i; ++k) p += steps[k];
        return p;
    }
};

struct DeltaPathReport {
    bool is_delta = false;
    std::int64_t nonunit_count = 0;     // |M|
    std::int64_t nonunit_variation = 0; // sum over M of |R(t+1)-R(t)|
};

// delta-path: at most delta*n non-unit steps whose total variation is also
// at most delta*n (non-strict, following the displayed inequalities).
inline DeltaPathReport check_delta_path(const PathFunction& p, double delta) {
    if (p.steps.empty()) throw std::invalid_argument("check_delta_path: path has no steps");
    DeltaPathReport r;
    for (std::int64_t s : p.steps) {
        std::int64_t a = s < 0 ? -s : s;
        if (a != 1) {
            ++r.nonunit_count;
            r.nonunit_variation += a;
        }
    }
    double budget = delta * static_cast<double>(p.steps.size());
    r.is_delta = static_cast<double>(r.nonunit_count) <= budget &&
                 static_cast<double>(r.nonunit_variation) <= budget;
    return r;
}

// (k, delta)-path of length k*n: fewer than delta*n non-unit steps and
// non-unit variation strictly under delta*n.
inline bool check_k_delta_path(const PathFunction& p, double k, double delta, std::int64_t n) {
    auto expect = static_cast<std::int64_t>(std::llround(k * static_cast<double>(n)));
    if (static_cast<std::int64_t>(p.steps.size()) != expect)
        throw std::invalid_argument("check_k_delta_path: path length is not k*n");
    std::int64_t count = 0, variation = 0;
    for (std::int64_t s : p.steps) {
        std::int64_t a = s < 0 ? -s : s;
        if (a != 1) {
            ++count;
            variation += a;
        }
    }
    double budget = delta * static_cast<double>(n);
    return static_cast<double>(count) < budget && static_cast<double>(variation) < budget;
}

inline double binary_entropy(double delta) {
    if (delta <= 0.0 || delta >= 1.0) return 0.0;
    return -delta * std::log2(delta) - (1.0 - delta) * std::log2(1.0 - delta);
}

// Budgets for path-counting checks at one (n, delta).
struct PathBudget {
    double delta = 0.0;
    std::int64_t n = 0;
    double entropy_H = 0.0;

    PathBudget(double d, std::int64_t len) : delta(d), n(len), entropy_H(binary_entropy(d)) {
        if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("PathBudget: need 0 < delta < 1/2");
    }
};

enum class PathBoundVariant { standard, ten_delta };

// Counting bound on delta-paths: 2^{n(1+H(delta)+3*delta)} for the standard
// variant, 2^{10*delta*n(1+H(0.1)+0.3)} for the (10*delta, delta) variant.
inline double path_count_bound(std::int64_t n, double delta, PathBoundVariant variant) {
    if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("path_count_bound: need 0 < delta < 1/2");
    switch (variant) {
        case PathBoundVariant::standard:
            return std::exp2(static_cast<double>(n) * (1.0 + binary_entropy(delta) + 3.0 * delta));
        case PathBoundVariant::ten_delta:
            return std::exp2(10.0 * delta * static_cast<double>(n) * (1.0 + binary_entropy(0.1) + 0.3));
    }
    throw std::logic_error("path_count_bound: unknown variant");
}

// Chernoff envelope for the probability that a length-n window fails the
// delta-path check: one moment term for the non-unit variation, one for the
// non-unit count, both evaluated at the s -> 0+ end of the exponent range.
inline double delta_window_failure_envelope(double eps, double c, std::int64_t n) {
    double m1 = eps * (1.0 + std::exp(-2.0 * c) / (1.0 - std::exp(-c)));
    return std::pow(m1, static_cast<double>(n)) + std::pow(eps, static_cast<double>(n));
}

namespace detail {

template <class Visit>
inline void enumerate_delta_paths_rec(std::size_t depth, std::size_t n, std::int64_t budget_count,
                                      std::int64_t budget_var, int max_jump,
                                      std::vector<std::int64_t>& steps, std::uint64_t& count,
                                      const Visit& visit) {
    if (depth == n) {
        ++count;
        visit(steps);
        return;
    }
    auto push = [&](std::int64_t s, std::int64_t dc, std::int64_t dv) {
        steps.push_back(s);
        enumerate_delta_paths_rec(depth + 1, n, budget_count - dc, budget_var - dv, max_jump, steps,
                                  count, visit);
        steps.pop_back();
    };
    push(+1, 0, 0);
    push(-1, 0, 0);
    if (budget_count >= 1) {
        push(0, 1, 0);
        for (int j = 2; j <= max_jump && j <= budget_var; ++j) {
            push(+j, 1, j);
            push(-j, 1, j);
        }
    }
}

} // namespace detail

// Exhaustively counts distinct step sequences of length n satisfying the
// delta-path definition, non-unit step sizes bounded by max_jump. The visitor,
// when given, sees every step sequence once, in lexicographic placement order.
inline std::uint64_t enumerate_delta_paths(
    std::int64_t n, double delta, std::int64_t start, int max_jump,
    const std::function<void(const PathFunction&)>& visit = nullptr) {
    if (n < 1) throw std::invalid_argument("enumerate_delta_paths: n must be >= 1");
    if (n > 14)
        throw std::invalid_argument("enumerate_delta_paths: n > 14 exceeds the enumeration budget");
    if (max_jump < 0) throw std::invalid_argument("enumerate_delta_paths: max_jump < 0");
    std::int64_t budget = static_cast<std::int64_t>(std::floor(delta * static_cast<double>(n) + 1e-12));
    std::uint64_t count = 0;
    std::vector<std::int64_t> steps;
    steps.reserve(static_cast<std::size_t>(n));
    auto visitor = [&](const std::vector<std::int64_t>& s) {
        if (visit) visit(PathFunction{start, s});
    };
    detail::enumerate_delta_paths_rec(0, static_cast<std::size_t>(n), budget, budget, max_jump,
                                      steps, count, visitor);
    return count;
}

} // namespace srw

#endif
