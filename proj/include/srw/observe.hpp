#ifndef SRW_OBSERVE_HPP
#define SRW_OBSERVE_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "srw/scenery.hpp"
#include "srw/walk.hpp"

namespace srw {

// Colors seen at the walker's positions, index-aligned with the run.
struct ObservationStream {
    std::vector<Color> colors;

    std::size_t size() const { return colors.size(); }
    Color operator[](std::size_t t) const { return colors[t]; }
};

// Strictly increasing times at which a stopping rule fired.
struct StopTimes {
    std::vector<std::size_t> times;

    std::size_t count() const { return times.size(); }
    bool empty() const { return times.empty(); }
};

inline ObservationStream observe(const Scenery& s, const WalkRun& run) {
    ObservationStream chi;
    chi.colors.reserve(run.positions.size());
    for (std::int64_t p : run.positions) chi.colors.push_back(s.at_extended(p));
    return chi;
}

// Streaming KMP matcher over the 5-color alphabet. feed() consumes one
// observation and reports whether a full (possibly overlapping) occurrence
// ends at it.
class PatternMatcher {
public:
    explicit PatternMatcher(const Pattern& w) : pattern_(w.colors) {
        std::size_t m = pattern_.size();
        fail_.assign(m + 1, 0);
        for (std::size_t i = 1; i < m; ++i) {
            std::size_t k = fail_[i];
            while (k > 0 && pattern_[i] != pattern_[k]) k = fail_[k];
            fail_[i + 1] = (pattern_[i] == pattern_[k]) ? k + 1 : 0;
        }
    }

    bool feed(Color c) {
        while (state_ > 0 && (state_ == pattern_.size() || pattern_[state_] != c))
            state_ = fail_[state_];
        if (pattern_[state_] == c) ++state_;
        return state_ == pattern_.size();
    }

    void reset() { state_ = 0; }

    // Matcher state right after a full match, i.e. the longest proper border.
    std::size_t state() const { return state_; }
    std::size_t pattern_length() const { return pattern_.size(); }

private:
    std::vector<Color> pattern_;
    std::vector<std::size_t> fail_;
    std::size_t state_ = 0;
};

// Tabulated KMP transitions: state q in [0, m] is the length of the current
// matched prefix; step(q, c) never exceeds m. Used by dynamic programs that
// track match progress alongside walk position.
class KmpAutomaton {
public:
    explicit KmpAutomaton(const Pattern& w) : m_(w.size()) {
        std::vector<std::size_t> fail(m_ + 1, 0);
        for (std::size_t i = 1; i < m_; ++i) {
            std::size_t k = fail[i];
            while (k > 0 && w[i] != w[k]) k = fail[k];
            fail[i + 1] = (w[i] == w[k]) ? k + 1 : 0;
        }
        border_ = fail[m_];
        table_.assign((m_ + 1) * kNumColors, 0);
        for (std::size_t q = 0; q <= m_; ++q) {
            for (int c = 1; c <= kNumColors; ++c) {
                std::size_t k = q;
                while (k > 0 && (k == m_ || w[k] != static_cast<Color>(c))) k = fail[k];
                if (k < m_ && w[k] == static_cast<Color>(c)) ++k;
                table_[q * kNumColors + static_cast<std::size_t>(c - 1)] = k;
            }
        }
    }

    std::size_t step(std::size_t q, Color c) const {
        return table_[q * kNumColors + static_cast<std::size_t>(c - 1)];
    }

    std::size_t match_length() const { return m_; }
    // State to resume from right after a full (overlappable) match.
    std::size_t border_after_match() const { return border_; }

private:
    std::size_t m_;
    std::size_t border_;
    std::vector<std::size_t> table_;
};

// All t <= horizon with chi_{t-n} ... chi_t = w, n+1 = |w|. Overlapping
// occurrences count as distinct stopping times.
inline StopTimes pattern_stops(const ObservationStream& chi, const Pattern& w,
                               std::size_t horizon) {
    if (horizon >= chi.size())
        throw std::invalid_argument("pattern_stops: horizon beyond stream length");
    if (w.size() > horizon + 1)
        throw std::invalid_argument("pattern_stops: pattern longer than horizon");
    StopTimes stops;
    PatternMatcher m(w);
    for (std::size_t t = 0; t <= horizon; ++t)
        if (m.feed(chi[t]) && t + 1 >= w.size()) stops.times.push_back(t);
    return stops;
}

// The subset of pattern stops whose generating window of walk positions
// stayed inside [-n, n]. Simulation-only: needs the latent path.
inline StopTimes oracle_stops(const WalkRun& run, const ObservationStream& chi, const Pattern& w,
                              std::int64_t n, std::size_t horizon) {
    if (run.positions.size() != chi.size())
        throw std::invalid_argument("oracle_stops: run/stream length mismatch");
    StopTimes taus = pattern_stops(chi, w, horizon);
    StopTimes nus;
    // prefix counts of out-of-[-n,n] positions, for O(1) window checks
    std::vector<std::uint32_t> out(run.positions.size() + 1, 0);
    for (std::size_t t = 0; t < run.positions.size(); ++t) {
        std::int64_t p = run.positions[t];
        out[t + 1] = out[t] + ((p < -n || p > n) ? 1u : 0u);
    }
    std::size_t win = w.size(); // n+1 positions per window
    for (std::size_t t : taus.times)
        if (out[t + 1] - out[t + 1 - win] == 0) nus.times.push_back(t);
    return nus;
}

} // namespace srw

#endif
