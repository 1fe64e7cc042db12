#ifndef SRW_CONFIG_HPP
#define SRW_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "srw/reconstruct.hpp"
#include "srw/walk.hpp"

namespace srw {

// Flat key=value experiment configuration. Unknown keys are errors so config
// drift cannot silently change an experiment.
struct ExperimentConfig {
    std::string profile = "default";

    // walk family
    std::string walk_family = "lazy_simple"; // or "geometric_tail"
    double epsilon = 0.02;
    double decay_c = 3.0;
    double p_zero_frac = 0.5;
    int truncation_bound = 64;

    // algorithm scale
    std::int64_t n = 12;
    Fraction delta{1, 64};
    std::int64_t n0 = 8;
    std::int64_t target_n = 12;

    // batch
    std::uint64_t trials = 100;
    std::uint64_t seed = 1;
    std::uint64_t budget_cap = 1'000'000; // caps the stop-collection horizon T

    // scenery: either a literal window line ("digits @ origin") or an i.i.d.
    // draw from scenery_seed over [-scenery_radius, scenery_radius]
    std::string scenery_line;
    std::uint64_t scenery_seed = 7;
    std::int64_t scenery_radius = 16;

    // event thresholds; when the absolute values are absent they are derived
    // from the bases at the budget-implied effective scale
    double bound_base = 2.45;
    double threshold_base = 1.1;
    double horizon_base = 2.4;
    std::optional<std::int64_t> bound_b;
    std::optional<double> threshold_c;

    // localization search
    std::int64_t search_bound = 0; // 0: derived as n + delta-budget slack
    int max_jump = 8;

    std::string out_path;

    // exponent x with horizon_base^{2x} = budget_cap; the scale at which the
    // exponential thresholds are comparable to the capped horizon
    double effective_exponent() const {
        return std::log(static_cast<double>(budget_cap)) / (2.0 * std::log(horizon_base));
    }

    std::int64_t bound_b_value() const {
        if (bound_b) return *bound_b;
        return static_cast<std::int64_t>(std::ceil(std::pow(bound_base, effective_exponent())));
    }

    double threshold_c_value() const {
        if (threshold_c) return *threshold_c;
        return std::pow(threshold_base, effective_exponent());
    }

    IncrementDistribution make_walk() const {
        if (walk_family == "lazy_simple") return lazy_simple(epsilon);
        if (walk_family == "geometric_tail")
            return geometric_tail(epsilon, decay_c, p_zero_frac, truncation_bound);
        throw std::invalid_argument("config: unknown walk_family '" + walk_family + "'");
    }

    Scenery make_scenery() const {
        if (!scenery_line.empty()) return Scenery::from_line(scenery_line);
        return Scenery::iid(scenery_seed, -scenery_radius, scenery_radius);
    }

    std::int64_t search_bound_value() const {
        if (search_bound > 0) return search_bound;
        return n + std::max<std::int64_t>(1, (delta.num * n) / delta.den);
    }

    void validate() const {
        if (63 * delta.num >= delta.den) throw std::invalid_argument("config: need 63*delta < 1");
        if (n < 1 || n0 < 1 || target_n < n0) throw std::invalid_argument("config: bad n/n0/target_n");
        if (budget_cap < 1) throw std::invalid_argument("config: budget_cap must be >= 1");
        srw::validate(make_walk()); // walk conditions re-checked at load time
    }

    static ExperimentConfig load(std::istream& in);
    static ExperimentConfig load_file(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw std::runtime_error("config: cannot open " + path);
        return load(f);
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace detail

inline ExperimentConfig ExperimentConfig::load(std::istream& in) {
    ExperimentConfig c;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
        std::string key = detail::trim(line.substr(0, eq));
        std::string val = detail::trim(line.substr(eq + 1));

        if (key == "profile") c.profile = val;
        else if (key == "walk_family") c.walk_family = val;
        else if (key == "epsilon") c.epsilon = std::stod(val);
        else if (key == "decay_c") c.decay_c = std::stod(val);
        else if (key == "p_zero_frac") c.p_zero_frac = std::stod(val);
        else if (key == "truncation_bound") c.truncation_bound = std::stoi(val);
        else if (key == "n") c.n = std::stoll(val);
        else if (key == "delta") c.delta = Fraction::parse(val);
        else if (key == "n0") c.n0 = std::stoll(val);
        else if (key == "target_n") c.target_n = std::stoll(val);
        else if (key == "trials") c.trials = std::stoull(val);
        else if (key == "seed") c.seed = std::stoull(val);
        else if (key == "budget_cap") c.budget_cap = std::stoull(val);
        else if (key == "scenery") c.scenery_line = val;
        else if (key == "scenery_seed") c.scenery_seed = std::stoull(val);
        else if (key == "scenery_radius") c.scenery_radius = std::stoll(val);
        else if (key == "bound_base") c.bound_base = std::stod(val);
        else if (key == "threshold_base") c.threshold_base = std::stod(val);
        else if (key == "horizon_base") c.horizon_base = std::stod(val);
        else if (key == "bound_b") c.bound_b = std::stoll(val);
        else if (key == "threshold_c") c.threshold_c = std::stod(val);
        else if (key == "search_bound") c.search_bound = std::stoll(val);
        else if (key == "max_jump") c.max_jump = std::stoi(val);
        else if (key == "out") c.out_path = val;
        else
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" +
                                        key + "'");
    }
    c.validate();
    return c;
}

} // namespace srw

#endif
