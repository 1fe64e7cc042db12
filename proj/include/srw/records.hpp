#ifndef SRW_RECORDS_HPP
#define SRW_RECORDS_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include <json.hpp>

#include "srw/events.hpp"

namespace srw {

inline constexpr int kRecordSchemaVersion = 1;

// FNV-1a digest of the strings that pin a trial's parameters; lets records
// from different profiles be told apart without re-deriving anything.
inline std::uint64_t params_digest(const std::string& profile, const ReconstructionParams& p) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    };
    mix(profile);
    mix(std::to_string(p.n));
    mix(p.delta.str());
    mix(std::to_string(p.n_star));
    mix(std::to_string(p.offset_r));
    mix(std::to_string(p.horizon_T));
    return h;
}

// One trial, one JSON line. work_steps is a deterministic step counter rather
// than wall time so identical (config, seed) pairs produce identical bytes.
struct TrialRecord {
    int schema_version = kRecordSchemaVersion;
    std::uint64_t seed = 0;
    std::uint64_t digest = 0;
    EventReport events;
    std::uint64_t work_steps = 0;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["schema_version"] = schema_version;
        j["seed"] = seed;
        j["params_digest"] = digest;
        j["estimate"] = static_cast<int>(events.estimate);
        j["truth"] = static_cast<int>(events.truth);
        j["success"] = events.A ? nlohmann::json(*events.A) : nlohmann::json(nullptr);
        nlohmann::json ev;
        ev["A"] = events.A ? nlohmann::json(*events.A) : nlohmann::json(nullptr);
        ev["B"] = events.B;
        ev["C"] = events.C;
        ev["D"] = events.D;
        ev["F"] = events.F;
        ev["G"] = events.G ? nlohmann::json(*events.G) : nlohmann::json(nullptr);
        ev["margin"] = events.margin;
        ev["stops_tau"] = events.stops_tau;
        ev["stops_nu"] = events.stops_nu;
        ev["tau_nu_mismatch"] = events.tau_nu_mismatch;
        j["events"] = ev;
        j["work_steps"] = work_steps;
        return j;
    }

    std::string to_line() const { return to_json().dump(); }

    static TrialRecord from_json(const nlohmann::json& j) {
        TrialRecord r;
        r.schema_version = j.at("schema_version").get<int>();
        if (r.schema_version != kRecordSchemaVersion)
            throw std::runtime_error("TrialRecord: unsupported schema version");
        r.seed = j.at("seed").get<std::uint64_t>();
        r.digest = j.at("params_digest").get<std::uint64_t>();
        r.events.estimate = static_cast<Color>(j.at("estimate").get<int>());
        r.events.truth = static_cast<Color>(j.at("truth").get<int>());
        const auto& ev = j.at("events");
        if (!ev.at("A").is_null()) r.events.A = ev.at("A").get<bool>();
        r.events.B = ev.at("B").get<bool>();
        r.events.C = ev.at("C").get<bool>();
        r.events.D = ev.at("D").get<bool>();
        r.events.F = ev.at("F").get<bool>();
        if (!ev.at("G").is_null()) r.events.G = ev.at("G").get<bool>();
        r.events.margin = ev.at("margin").get<double>();
        r.events.stops_tau = ev.at("stops_tau").get<std::uint64_t>();
        r.events.stops_nu = ev.at("stops_nu").get<std::uint64_t>();
        r.events.tau_nu_mismatch = ev.at("tau_nu_mismatch").get<std::uint64_t>();
        r.work_steps = j.at("work_steps").get<std::uint64_t>();
        return r;
    }

    static TrialRecord from_line(const std::string& line) {
        return from_json(nlohmann::json::parse(line));
    }
};

// Streaming batch aggregation: counts only, so merging partial summaries in
// any order gives the same result.
struct BatchSummary {
    std::uint64_t trials = 0;
    std::uint64_t decided = 0; // trials where A is defined
    std::uint64_t success = 0;
    std::uint64_t no_data = 0;
    std::uint64_t b_fail = 0, c_fail = 0, d_fail = 0, f_fail = 0;
    std::uint64_t g_fail = 0, g_undefined = 0;
    std::uint64_t containment_violations = 0; // B..G all true, margin>0, A false

    void add(const EventReport& e) {
        ++trials;
        if (e.A) {
            ++decided;
            if (*e.A) ++success;
        } else {
            ++no_data;
        }
        if (!e.B) ++b_fail;
        if (!e.C) ++c_fail;
        if (!e.D) ++d_fail;
        if (!e.F) ++f_fail;
        if (e.G) {
            if (!*e.G) ++g_fail;
        } else {
            ++g_undefined;
        }
        bool all = e.B && e.C && e.D && e.F && e.G && *e.G && e.margin > 0.0;
        if (all && !(e.A && *e.A)) ++containment_violations;
    }

    void merge(const BatchSummary& o) {
        trials += o.trials;
        decided += o.decided;
        success += o.success;
        no_data += o.no_data;
        b_fail += o.b_fail;
        c_fail += o.c_fail;
        d_fail += o.d_fail;
        f_fail += o.f_fail;
        g_fail += o.g_fail;
        g_undefined += o.g_undefined;
        containment_violations += o.containment_violations;
    }

    double success_rate() const {
        return decided ? static_cast<double>(success) / static_cast<double>(decided) : 0.0;
    }

    // normal-approximation 95% interval for the success rate over decided trials
    std::pair<double, double> success_interval() const {
        if (decided == 0) return {0.0, 0.0};
        double p = success_rate();
        double se = std::sqrt(p * (1.0 - p) / static_cast<double>(decided));
        return {std::max(0.0, p - 1.96 * se), std::min(1.0, p + 1.96 * se)};
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["trials"] = trials;
        j["decided"] = decided;
        j["success"] = success;
        j["no_data"] = no_data;
        j["success_rate"] = success_rate();
        auto [lo, hi] = success_interval();
        j["success_ci95"] = {lo, hi};
        j["fail_counts"] = {{"B", b_fail}, {"C", c_fail}, {"D", d_fail},
                            {"F", f_fail}, {"G", g_fail}, {"G_undefined", g_undefined}};
        j["containment_violations"] = containment_violations;
        return j;
    }
};

} // namespace srw

#endif
