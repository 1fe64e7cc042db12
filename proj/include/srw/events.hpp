#ifndef SRW_EVENTS_HPP
#define SRW_EVENTS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "srw/observe.hpp"
#include "srw/paths.hpp"
#include "srw/reconstruct.hpp"
#include "srw/scenery.hpp"
#include "srw/walk.hpp"

namespace srw {

// Per-trial outcome of the guarantee events. A is the reconstruction success
// and is undefined when no stop produced an estimate; G is undefined when the
// error margin is not strictly positive.
struct EventReport {
    std::optional<bool> A;
    bool B = false;
    bool C = false;
    bool D = false;
    bool F = false;
    std::optional<bool> G;
    double margin = 0.0;
    std::uint64_t stops_tau = 0;
    std::uint64_t stops_nu = 0;
    std::uint64_t tau_nu_mismatch = 0; // taus that are not nus
    Color estimate = 0;
    Color truth = 0;
};

// Confinement event: the walk never leaves [-bound, bound] through the
// effective horizon.
inline bool eval_B(const WalkRun& run, std::int64_t bound, std::size_t t_effective) {
    std::size_t last = std::min(t_effective, run.horizon());
    for (std::size_t t = 0; t <= last; ++t) {
        std::int64_t p = run.positions[t];
        if (p < -bound || p > bound) return false;
    }
    return true;
}

inline std::int64_t confinement_bound(double base, double scale_exponent) {
    return static_cast<std::int64_t>(std::ceil(std::pow(base, scale_exponent)));
}

// Enough-stops event: at least threshold in-window pattern stops occurred.
inline bool eval_C(const StopTimes& nu_stops, double threshold) {
    return static_cast<double>(nu_stops.count()) >= threshold;
}

inline bool eval_C(const StopTimes& nu_stops, std::int64_t n, double threshold_base) {
    return eval_C(nu_stops, std::pow(threshold_base, static_cast<double>(n)));
}

// All-windows event: every length-n sub-path through the effective horizon is
// a delta-path. Sliding counts keep this linear in the horizon.
inline bool eval_D(const WalkRun& run, std::int64_t n, double delta, std::size_t t_effective) {
    std::size_t last = std::min(t_effective, run.horizon());
    if (last < static_cast<std::size_t>(n)) return true;
    double budget = delta * static_cast<double>(n);
    std::int64_t count = 0, variation = 0;
    auto step_abs = [&](std::size_t t) {
        std::int64_t s = run.positions[t + 1] - run.positions[t];
        return s < 0 ? -s : s;
    };
    for (std::size_t t = 0; t < last; ++t) {
        std::int64_t a = step_abs(t);
        if (a != 1) {
            ++count;
            variation += a;
        }
        if (t + 1 >= static_cast<std::size_t>(n)) {
            if (static_cast<double>(count) > budget || static_cast<double>(variation) > budget)
                return false;
            std::int64_t b = step_abs(t + 1 - static_cast<std::size_t>(n));
            if (b != 1) {
                --count;
                variation -= b;
            }
        }
    }
    return true;
}

// Localization event: every delta-path inside [-search_bound, search_bound]
// that generates the pattern ends in J and never leaves I. Decided exactly by
// a reachability DP over (step index, position, non-unit count, non-unit
// variation, has-left-I); throws when the state space exceeds the budget.
inline bool eval_F(const Scenery& scenery, const ReconstructionParams& params,
                   std::int64_t search_bound, int max_jump) {
    const std::int64_t n = params.n;
    const Pattern& w = params.pattern_w;
    if (static_cast<std::int64_t>(w.size()) != n + 1)
        throw std::invalid_argument("eval_F: pattern length must be n+1");
    const std::int64_t budget = (params.delta.num * n) / params.delta.den; // floor(delta*n)
    const std::int64_t width = 2 * search_bound + 1;
    const std::int64_t states_per_step = width * (budget + 1) * (budget + 1) * 2;
    if (states_per_step > 50'000'000 || states_per_step * (n + 1) > 400'000'000)
        throw std::runtime_error("eval_F: search budget exceeded");
    if (max_jump > budget) max_jump = static_cast<int>(budget);

    auto color_at = [&](std::int64_t x) -> int {
        if (x < scenery.lo() || x > scenery.hi()) {
            // outside the stored window the cell is unknown; treat as wildcard
            // only if the scenery extends, otherwise unreachable
            return scenery.unbounded() || scenery.has_reflected_seed()
                       ? static_cast<int>(scenery.at_extended(x))
                       : 0;
        }
        return static_cast<int>(scenery.at(x));
    };

    auto idx = [&](std::int64_t p, std::int64_t c, std::int64_t v, int f) {
        return static_cast<std::size_t>((((p + search_bound) * (budget + 1) + c) * (budget + 1) + v) * 2 +
                                        f);
    };
    std::vector<std::uint8_t> cur(static_cast<std::size_t>(states_per_step), 0), nxt;
    for (std::int64_t p = -search_bound; p <= search_bound; ++p)
        if (color_at(p) == w[0]) cur[idx(p, 0, 0, params.interval_I.contains(p) ? 0 : 1)] = 1;

    for (std::int64_t l = 1; l <= n; ++l) {
        nxt.assign(cur.size(), 0);
        for (std::int64_t p = -search_bound; p <= search_bound; ++p) {
            for (std::int64_t c = 0; c <= budget; ++c) {
                for (std::int64_t v = 0; v <= budget; ++v) {
                    for (int f = 0; f < 2; ++f) {
                        if (!cur[idx(p, c, v, f)]) continue;
                        auto move = [&](std::int64_t step, std::int64_t dc, std::int64_t dv) {
                            std::int64_t q = p + step;
                            if (q < -search_bound || q > search_bound) return;
                            if (c + dc > budget || v + dv > budget) return;
                            if (color_at(q) != w[static_cast<std::size_t>(l)]) return;
                            int f2 = (f || !params.interval_I.contains(q)) ? 1 : 0;
                            nxt[idx(q, c + dc, v + dv, f2)] = 1;
                        };
                        move(+1, 0, 0);
                        move(-1, 0, 0);
                        move(0, 1, 0);
                        for (int j = 2; j <= max_jump; ++j) {
                            move(+j, 1, j);
                            move(-j, 1, j);
                        }
                    }
                }
            }
        }
        cur.swap(nxt);
    }

    for (std::int64_t p = -search_bound; p <= search_bound; ++p)
        for (std::int64_t c = 0; c <= budget; ++c)
            for (std::int64_t v = 0; v <= budget; ++v)
                for (int f = 0; f < 2; ++f)
                    if (cur[idx(p, c, v, f)] && (f == 1 || !params.interval_J.contains(p)))
                        return false;
    return true;
}

// Exact law of the color seen r steps after a mu-distributed start,
// unconfined, with cells outside the stored window read from the extension.
inline std::array<double, kNumColors> exact_offset_color_law(const ReconstructionParams& params,
                                                             const Scenery& scenery,
                                                             const IncrementDistribution& d,
                                                             const StateDistribution& mu) {
    StateDistribution at_r = state_distribution(d, mu, static_cast<std::size_t>(params.offset_r));
    std::array<double, kNumColors> law{};
    for (std::int64_t x = at_r.lo(); x <= at_r.hi(); ++x)
        law[scenery.at_extended(x) - 1] += at_r.at(x);
    return law;
}

// Precision event: the in-window-stop empirical color law is within the error
// margin of the exact one. Undefined (nullopt) when the margin is not
// strictly positive; false when there were no in-window stops.
inline std::optional<bool> eval_G(const std::array<double, kNumColors>& nu_empirical,
                                  const std::array<double, kNumColors>& exact_law, double margin,
                                  std::uint64_t nu_count) {
    if (!(margin > 0.0)) return std::nullopt;
    if (nu_count == 0) return false;
    double worst = 0.0;
    for (int e = 0; e < kNumColors; ++e)
        worst = std::max(worst, std::abs(nu_empirical[e] - exact_law[e]));
    return worst < margin;
}

// Inputs a containment trial needs beyond the per-trial seed. F depends only
// on the scenery and parameters, so the caller evaluates it once per profile.
struct TrialContext {
    const Scenery* scenery = nullptr;
    const IncrementDistribution* d = nullptr;
    const ReconstructionParams* params = nullptr;
    const StateDistribution* mu = nullptr;
    std::int64_t bound_B = 0;       // absolute confinement bound
    double threshold_C = 1.0;       // absolute stop-count threshold
    double delta_value = 0.0;       // numeric value of the path budget
    bool f_holds = false;           // precomputed eval_F result
    std::array<double, kNumColors> exact_law{}; // precomputed exact color law
    double margin = 0.0;            // precomputed estimation margin
};

// One full simulated trial: run the walk, collect both stop families,
// evaluate every event and the reconstruction itself.
inline EventReport containment_trial(const TrialContext& ctx, std::uint64_t seed) {
    const auto& params = *ctx.params;
    const std::size_t t_eff = static_cast<std::size_t>(params.horizon_T);
    const std::size_t horizon = t_eff + static_cast<std::size_t>(params.offset_r);

    WalkRun run = simulate(*ctx.d, 0, horizon, seed);
    ObservationStream chi = observe(*ctx.scenery, run);
    StopTimes taus = pattern_stops(chi, params.pattern_w, t_eff);
    StopTimes nus = oracle_stops(run, chi, params.pattern_w, params.n, t_eff);

    EventReport rep;
    rep.stops_tau = taus.count();
    rep.stops_nu = nus.count();
    rep.tau_nu_mismatch = taus.count() - nus.count();
    rep.B = eval_B(run, ctx.bound_B, t_eff);
    rep.C = eval_C(nus, ctx.threshold_C);
    rep.D = eval_D(run, params.n, ctx.delta_value, t_eff);
    rep.F = ctx.f_holds;
    rep.margin = ctx.margin;
    rep.truth = ctx.scenery->at_extended(params.n + 1);

    std::array<double, kNumColors> nu_emp{};
    for (std::size_t t : nus.times)
        nu_emp[chi[t + static_cast<std::size_t>(params.offset_r)] - 1] += 1.0;
    if (!nus.empty())
        for (double& v : nu_emp) v /= static_cast<double>(nus.count());
    rep.G = eval_G(nu_emp, ctx.exact_law, ctx.margin, nus.count());

    std::array<std::uint64_t, kNumColors> tally{};
    for (std::size_t t : taus.times)
        tally[chi[t + static_cast<std::size_t>(params.offset_r)] - 1]++;
    PointResult pr =
        reconstruct_point_from_tallies(params, *ctx.scenery, *ctx.d, *ctx.mu, tally, taus.count());
    if (!pr.no_data) {
        rep.estimate = pr.estimate;
        rep.A = (pr.estimate == rep.truth);
    }
    return rep;
}

// In-window stop positions under the confined re-entry dynamics: on a step
// out of I the walker re-enters at the crossed boundary cell with the matcher
// reset (no occurrence can span an excursion, and a skip-free walk re-enters
// exactly at the boundary). Gives the stop-position law far more stops per
// step than replaying full excursions.
struct ConfinedStopCounts {
    std::vector<std::uint64_t> position_counts; // index x + n
    std::array<std::uint64_t, kNumColors> offset_color_counts{};
    std::uint64_t stop_count = 0;
    std::uint64_t steps_used = 0;
};

inline ConfinedStopCounts confined_stop_positions(const Scenery& scenery,
                                                  const ReconstructionParams& params,
                                                  const IncrementDistribution& d, std::uint64_t seed,
                                                  std::uint64_t max_steps,
                                                  std::uint64_t max_stops = 0,
                                                  bool sample_offset_colors = false) {
    const std::int64_t n = params.n;
    KmpAutomaton aut(params.pattern_w);
    const std::size_t m = aut.match_length();
    WalkStream walk(d, 0, seed);
    // independent stream for the offset-color continuation samples
    WalkStream probe(d, 0, splitmix64(seed ^ 0x9e3779b97f4a7c15ULL));

    ConfinedStopCounts out;
    out.position_counts.assign(static_cast<std::size_t>(2 * n + 1), 0);
    std::size_t q = aut.step(0, scenery.at(0));
    for (std::uint64_t t = 0; t < max_steps; ++t) {
        std::int64_t p = walk.advance();
        if (p < -n || p > n) {
            p = p > n ? n : -n;
            walk.set_position(p);
            q = 0;
        }
        q = aut.step(q, scenery.at(p));
        ++out.steps_used;
        if (q == m) {
            out.position_counts[static_cast<std::size_t>(p + n)]++;
            ++out.stop_count;
            if (sample_offset_colors) {
                // unconfined continuation of length r from the stop position
                probe.set_position(p);
                for (std::int64_t k = 0; k < params.offset_r; ++k) probe.advance();
                out.offset_color_counts[scenery.at_extended(probe.position()) - 1]++;
            }
            q = aut.border_after_match();
            if (max_stops != 0 && out.stop_count >= max_stops) break;
        }
    }
    return out;
}

} // namespace srw

#endif
