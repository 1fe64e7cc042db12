#ifndef SRW_RECONSTRUCT_HPP
#define SRW_RECONSTRUCT_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "srw/observe.hpp"
#include "srw/scenery.hpp"
#include "srw/walk.hpp"

namespace srw {

// Exact fraction for the path-budget parameter; interval arithmetic on the
// derived constants stays in integers so rounding is reproducible.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Fraction() = default;
    Fraction(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den <= 0) throw std::invalid_argument("Fraction: denominator must be positive");
        if (num < 0) throw std::invalid_argument("Fraction: negative value");
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    // round-to-nearest of (k * num) / den, half away from zero; k >= 0
    std::int64_t round_scaled(std::int64_t k) const {
        return (2 * k * num + den) / (2 * den);
    }

    // "a/b" or a bare integer
    static Fraction parse(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Fraction(std::stoll(s), 1);
        return Fraction(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

// All derived constants of the single-point algorithm at one scale n.
struct ReconstructionParams {
    std::int64_t n = 0;
    Fraction delta;
    std::int64_t n_star = 0;
    Interval interval_I, interval_K, interval_J, interval_J_minus;
    Pattern pattern_w;
    std::int64_t offset_r = 1;
    std::uint64_t horizon_T = 0;
    bool horizon_capped = false;
};

inline ReconstructionParams derive_params(std::int64_t n, const Fraction& delta,
                                          const Scenery& scenery_window,
                                          std::uint64_t budget_cap) {
    if (n < 1) throw std::invalid_argument("derive_params: n must be >= 1");
    if (63 * delta.num >= delta.den)
        throw std::invalid_argument("derive_params: delta too large, need 63*delta < 1");
    if (scenery_window.lo() > -n || scenery_window.hi() < n)
        throw std::invalid_argument("derive_params: scenery window must cover [-n, n]");

    ReconstructionParams p;
    p.n = n;
    p.delta = delta;
    std::int64_t d1 = delta.round_scaled(n);
    std::int64_t d21 = delta.round_scaled(21 * n);
    std::int64_t d61 = delta.round_scaled(61 * n);
    std::int64_t d90 = delta.round_scaled(90 * n);
    p.n_star = n - d61;
    p.interval_I = {-n, n};
    p.interval_K = {p.n_star - n, p.n_star};
    p.interval_J = {p.n_star - d21, p.n_star + d1};
    p.interval_J_minus = {p.n_star - n - d1, p.n_star - n + d21};
    p.pattern_w = window(scenery_window, p.interval_K.lo, p.interval_K.hi);
    p.offset_r = std::max<std::int64_t>(1, d90);

    double t_exact = std::pow(2.4, 2.0 * static_cast<double>(n));
    if (!std::isfinite(t_exact) || t_exact >= static_cast<double>(budget_cap)) {
        p.horizon_T = budget_cap;
        p.horizon_capped = true;
    } else {
        p.horizon_T = static_cast<std::uint64_t>(std::ceil(t_exact));
    }
    return p;
}

// Stationary distribution of the chain of walk positions at successive
// in-window pattern completions, plus numerical diagnostics.
struct StationaryResult {
    StateDistribution mu;          // probability vector supported in I
    // mass not yet absorbed when a kernel row's DP stopped; rows are
    // renormalized, and large values are expected once the absorption shape
    // has stabilized (quasi-stationary flux), so this is diagnostic only
    double max_row_deficit = 0.0;
    std::size_t power_iterations = 0;
    double residual = 0.0;         // L1 change at the last power step
};

namespace detail {

// One kernel row: distribution of the next completion position starting from
// `from` with the post-match automaton state, by forward DP over
// (position in I, matched-prefix length). Mass that steps outside I is
// re-injected at the boundary for unit-step walks (the walk must re-enter
// through the boundary cell, and no match can span the excursion) and killed
// otherwise; remaining mass past the step cap counts toward the deficit.
struct ChainRowResult {
    std::vector<double> absorbed; // index y + n
    double deficit = 0.0;
};

inline ChainRowResult chain_kernel_row(const ReconstructionParams& params, const Scenery& scenery,
                                       const IncrementDistribution& d, std::int64_t from,
                                       const KmpAutomaton& aut, std::size_t t_max) {
    const std::int64_t n = params.n;
    const std::size_t width = static_cast<std::size_t>(2 * n + 1);
    const std::size_t m = aut.match_length();
    const std::size_t states = m + 1;
    const bool reinject = d.unit_steps_only();
    const int b = d.support_radius();

    std::vector<Color> cell(width);
    for (std::size_t i = 0; i < width; ++i)
        cell[i] = scenery.at_extended(static_cast<std::int64_t>(i) - n);

    std::vector<double> alive(width * states, 0.0), next(width * states, 0.0);
    std::vector<double> absorbed(width, 0.0), shape_snapshot;
    alive[static_cast<std::size_t>(from + n) * states + aut.border_after_match()] = 1.0;
    double alive_total = 1.0, killed = 0.0;

    auto boundary_arrival = [&](std::size_t side_idx) {
        // fresh matcher fed with the boundary cell's color
        return aut.step(0, cell[side_idx]);
    };

    for (std::size_t t = 0; t < t_max && alive_total > 1e-15; ++t) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < width; ++i) {
            std::int64_t x = static_cast<std::int64_t>(i) - n;
            for (std::size_t q = 0; q < states; ++q) {
                double mass = alive[i * states + q];
                if (mass == 0.0) continue;
                for (int step = -b; step <= b; ++step) {
                    double pr = d.at(step);
                    if (pr == 0.0) continue;
                    std::int64_t y = x + step;
                    double moved = mass * pr;
                    if (y < -n || y > n) {
                        if (reinject) {
                            std::size_t j = (y > n) ? width - 1 : 0;
                            next[j * states + boundary_arrival(j)] += moved;
                        } else {
                            killed += moved;
                        }
                        continue;
                    }
                    std::size_t j = static_cast<std::size_t>(y + n);
                    std::size_t q2 = aut.step(q, cell[j]);
                    if (q2 == m)
                        absorbed[j] += moved;
                    else
                        next[j * states + q2] += moved;
                }
            }
        }
        alive.swap(next);
        alive_total = 0.0;
        for (double v : alive) alive_total += v;

        // stop early once the shape of the absorbed mass has settled
        if ((t & 127u) == 127u) {
            double tot = 0.0;
            for (double v : absorbed) tot += v;
            if (tot > 0.0) {
                std::vector<double> shape(absorbed);
                for (double& v : shape) v /= tot;
                if (!shape_snapshot.empty()) {
                    double diff = 0.0;
                    for (std::size_t i = 0; i < width; ++i)
                        diff += std::abs(shape[i] - shape_snapshot[i]);
                    if (diff < 1e-13) {
                        alive_total = 0.0;
                        break;
                    }
                }
                shape_snapshot = std::move(shape);
            }
        }
    }

    ChainRowResult row;
    row.absorbed = std::move(absorbed);
    double total = 0.0;
    for (double v : row.absorbed) total += v;
    row.deficit = 1.0 - total;
    if (total <= 0.0)
        throw std::runtime_error(
            "exact_chain_mu: no completion mass from x=" + std::to_string(from) +
            "; chain numerically reducible");
    for (double& v : row.absorbed) v /= total;
    return row;
}

} // namespace detail

// Builds the completion chain's transition rows lazily over the discovered
// support and power-iterates to the fixed point.
inline StationaryResult exact_chain_mu(const ReconstructionParams& params, const Scenery& scenery,
                                       const IncrementDistribution& d,
                                       std::size_t t_max_factor = 50) {
    const std::int64_t n = params.n;
    if (n > 40) throw std::invalid_argument("exact_chain_mu: n too large for the exact DP (n <= 40)");
    const std::size_t width = static_cast<std::size_t>(2 * n + 1);
    const std::size_t t_max = t_max_factor * static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    KmpAutomaton aut(params.pattern_w);

    std::map<std::int64_t, detail::ChainRowResult> rows;
    double max_deficit = 0.0;
    auto row_of = [&](std::int64_t x) -> const detail::ChainRowResult& {
        auto it = rows.find(x);
        if (it == rows.end()) {
            it = rows.emplace(x, detail::chain_kernel_row(params, scenery, d, x, aut, t_max)).first;
            max_deficit = std::max(max_deficit, it->second.deficit);
        }
        return it->second;
    };

    std::vector<double> mu(width, 0.0), nxt(width, 0.0);
    {
        const auto& r0 = row_of(params.n_star);
        mu = r0.absorbed;
    }

    constexpr double kSupportTol = 1e-14;
    constexpr double kFixTol = 1e-12;
    StationaryResult out;
    for (std::size_t it = 0; it < 20000; ++it) {
        std::fill(nxt.begin(), nxt.end(), 0.0);
        for (std::size_t i = 0; i < width; ++i) {
            if (mu[i] <= kSupportTol) continue;
            const auto& row = row_of(static_cast<std::int64_t>(i) - n);
            for (std::size_t j = 0; j < width; ++j) nxt[j] += mu[i] * row.absorbed[j];
        }
        double tot = 0.0;
        for (double v : nxt) tot += v;
        if (tot <= 0.0) throw std::runtime_error("exact_chain_mu: chain lost all mass");
        for (double& v : nxt) v /= tot;
        // damping kills period-two oscillation without moving the fixed point
        for (std::size_t j = 0; j < width; ++j) nxt[j] = 0.5 * nxt[j] + 0.5 * mu[j];
        double diff = 0.0;
        for (std::size_t j = 0; j < width; ++j) diff += std::abs(nxt[j] - mu[j]);
        mu.swap(nxt);
        out.power_iterations = it + 1;
        out.residual = diff;
        if (diff < kFixTol) break;
    }
    if (out.residual >= kFixTol)
        throw std::runtime_error("exact_chain_mu: power iteration failed to converge");

    out.mu.support_offset = -n;
    out.mu.masses = std::move(mu);
    out.mu.trim();
    out.max_row_deficit = max_deficit;
    return out;
}

// Per-color score record of the single-point estimator.
struct ColorScore {
    std::array<double, kNumColors> p_hat{};      // empirical P(chi_r = e) over stops
    std::array<double, kNumColors> correction{}; // P_mu(xi(S_r) = e, S_r in I)
    std::array<double, kNumColors> q_hat{};
};

struct PointResult {
    bool no_data = false;
    Color estimate = 0;
    ColorScore score;
    std::size_t stops_used = 0;
};

// P_mu(xi(S_r) = e, S_r in I): unconfined r-step evolution of mu, summed over
// the known window's cells of each color.
inline std::array<double, kNumColors> correction_term(const ReconstructionParams& params,
                                                      const Scenery& known,
                                                      const IncrementDistribution& d,
                                                      const StateDistribution& mu) {
    StateDistribution at_r = state_distribution(d, mu, static_cast<std::size_t>(params.offset_r));
    std::array<double, kNumColors> corr{};
    for (std::int64_t x = params.interval_I.lo; x <= params.interval_I.hi; ++x)
        corr[known.at(x) - 1] += at_r.at(x);
    return corr;
}

// (P_mu(S_r = n+1) - P_mu(S_r not in [-n, n+1])) / 2, the estimation-error
// budget under which the argmax is provably correct.
template <class T>
inline T estimation_margin(const BasicIncrementDistribution<T>& d,
                           const BasicStateDistribution<T>& mu, std::size_t r, std::int64_t n) {
    auto at_r = state_distribution(d, mu, r);
    T inside(0);
    for (std::int64_t x = -n; x <= n + 1; ++x) inside += at_r.at(x);
    T outside = at_r.total() - inside;
    return (at_r.at(n + 1) - outside) / T(2);
}

inline PointResult reconstruct_point_from_tallies(const ReconstructionParams& params,
                                                  const Scenery& known,
                                                  const IncrementDistribution& d,
                                                  const StateDistribution& mu,
                                                  const std::array<std::uint64_t, kNumColors>& tally,
                                                  std::uint64_t stop_count) {
    PointResult res;
    res.stops_used = stop_count;
    res.score.correction = correction_term(params, known, d, mu);
    if (stop_count == 0) {
        res.no_data = true;
        return res;
    }
    for (int e = 0; e < kNumColors; ++e) {
        res.score.p_hat[e] = static_cast<double>(tally[e]) / static_cast<double>(stop_count);
        res.score.q_hat[e] = res.score.p_hat[e] - res.score.correction[e];
    }
    int best = 0;
    for (int e = 1; e < kNumColors; ++e)
        if (res.score.q_hat[e] > res.score.q_hat[best]) best = e; // ties: lowest color wins
    res.estimate = static_cast<Color>(best + 1);
    return res;
}

// Full estimator: pattern stops from the observations, colors at offset r
// after each stop, argmax of q_hat.
inline PointResult reconstruct_point(const ReconstructionParams& params, const Scenery& known,
                                     const ObservationStream& chi, const IncrementDistribution& d,
                                     const StateDistribution& mu) {
    std::size_t need = static_cast<std::size_t>(params.offset_r) + params.pattern_w.size();
    if (chi.size() <= need)
        throw std::invalid_argument("reconstruct_point: observation stream too short");
    std::size_t horizon = static_cast<std::size_t>(
        std::min<std::uint64_t>(params.horizon_T, chi.size() - 1 - static_cast<std::size_t>(params.offset_r)));
    StopTimes taus = pattern_stops(chi, params.pattern_w, horizon);
    std::array<std::uint64_t, kNumColors> tally{};
    for (std::size_t t : taus.times) tally[chi[t + static_cast<std::size_t>(params.offset_r)] - 1]++;
    return reconstruct_point_from_tallies(params, known, d, mu, tally, taus.count());
}

// Single-point reconstruction from i.i.d. observation locations.
struct IidPointResult {
    Color estimate = 0;
    bool condition_holds = false; // P(Y = b+1) > P(Y not in [a, b+1])
    std::array<double, kNumColors> q_hat{};
};

inline IidPointResult reconstruct_point_iid(std::int64_t a, std::int64_t b, const Scenery& known,
                                            const StateDistribution& y_law,
                                            const std::vector<Color>& observations) {
    if (a > b) throw std::invalid_argument("reconstruct_point_iid: a > b");
    if (observations.empty()) throw std::invalid_argument("reconstruct_point_iid: no observations");
    IidPointResult res;
    double in_ab1 = 0.0;
    for (std::int64_t y = a; y <= b + 1; ++y) in_ab1 += y_law.at(y);
    res.condition_holds = y_law.at(b + 1) > y_law.total() - in_ab1;

    std::array<double, kNumColors> freq{};
    for (Color c : observations) freq[c - 1] += 1.0;
    for (double& f : freq) f /= static_cast<double>(observations.size());
    std::array<double, kNumColors> corr{};
    for (std::int64_t y = a; y <= b; ++y) corr[known.at(y) - 1] += y_law.at(y);
    int best = 0;
    for (int e = 0; e < kNumColors; ++e) {
        res.q_hat[e] = freq[e] - corr[e];
        if (res.q_hat[e] > res.q_hat[best]) best = e;
    }
    res.estimate = static_cast<Color>(best + 1);
    return res;
}

// Raised when no pattern stop occurred before the horizon; distinct from a
// wrong answer.
struct NoDataError : std::runtime_error {
    std::int64_t n;
    bool mirrored;
    NoDataError(std::int64_t at_n, bool mirror)
        : std::runtime_error("no pattern stop before horizon at n=" + std::to_string(at_n) +
                             (mirror ? " (left end)" : " (right end)")),
          n(at_n), mirrored(mirror) {}
};

// Supplies observations for one extension step; `mirrored` asks for the
// reflected scenery's observations (used for the left end).
using ChiSource = std::function<ObservationStream(const ReconstructionParams&, bool mirrored)>;

// Callback fired after each end-point estimate, with everything a harness
// needs to audit the step.
using WholeStepObserver =
    std::function<void(std::int64_t n, bool mirrored, const ReconstructionParams&,
                       const StationaryResult&, const PointResult&)>;

// Optional memo for the per-window stationary computation, keyed by the
// window serialization; repeated reconstructions over the same (or mostly
// the same) windows skip the dynamic program.
using StationaryCache = std::map<std::string, StationaryResult>;

// Inductive whole-scenery loop: grow [-n, n] to [-target_n, target_n] by
// estimating the right end on the known window and the left end on its
// mirror image (valid by the symmetry of the increment law).
inline Scenery reconstruct_whole(const Scenery& seed_window, std::int64_t n0, std::int64_t target_n,
                                 const ChiSource& source, const IncrementDistribution& d,
                                 const Fraction& delta, std::uint64_t budget_cap,
                                 const WholeStepObserver& observer = nullptr,
                                 StationaryCache* mu_cache = nullptr) {
    if (seed_window.lo() > -n0 || seed_window.hi() < n0)
        throw std::invalid_argument("reconstruct_whole: seed window must cover [-n0, n0]");
    if (target_n < n0) throw std::invalid_argument("reconstruct_whole: target_n < n0");

    std::vector<Color> cur;
    for (std::int64_t z = -n0; z <= n0; ++z) cur.push_back(seed_window.at(z));

    for (std::int64_t n = n0; n < target_n; ++n) {
        Scenery known(-n, cur);

        auto one_end = [&](bool mirrored) -> Color {
            Scenery base = mirrored ? known.reflected() : known;
            ReconstructionParams params = derive_params(n, delta, base, budget_cap);
            StationaryResult st;
            if (mu_cache) {
                std::string key = base.to_line();
                auto it = mu_cache->find(key);
                if (it == mu_cache->end())
                    it = mu_cache->emplace(key, exact_chain_mu(params, base, d)).first;
                st = it->second;
            } else {
                st = exact_chain_mu(params, base, d);
            }
            ObservationStream chi = source(params, mirrored);
            PointResult res = reconstruct_point(params, base, chi, d, st.mu);
            if (observer) observer(n, mirrored, params, st, res);
            if (res.no_data) throw NoDataError(n, mirrored);
            return res.estimate;
        };

        Color right = one_end(false);
        Color left = one_end(true);
        cur.insert(cur.begin(), left);
        cur.push_back(right);
    }
    return Scenery(-target_n, std::move(cur));
}

} // namespace srw

#endif
