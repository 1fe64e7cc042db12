#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "srw/observe.hpp"
#include "srw/rng.hpp"

using namespace srw;

namespace {

// Quadratic reference scanner: report every t where the last |w| observations
// equal w, by direct comparison.
std::vector<std::size_t> naive_stops(const ObservationStream& chi, const Pattern& w,
                                     std::size_t horizon) {
    std::vector<std::size_t> out;
    for (std::size_t t = w.size() - 1; t <= horizon; ++t) {
        bool hit = true;
        for (std::size_t k = 0; k < w.size(); ++k) {
            if (chi[t - w.size() + 1 + k] != w[k]) {
                hit = false;
                break;
            }
        }
        if (hit) out.push_back(t);
    }
    return out;
}

} // namespace

TEST_CASE("observation stream reads the scenery along the run") {
    Scenery s(-2, {1, 2, 3, 4, 5});
    WalkRun run;
    run.positions = {0, 1, 0, -1, -2, -1};
    ObservationStream chi = observe(s, run);
    std::vector<Color> expect = {3, 4, 3, 2, 1, 2};
    CHECK(chi.colors == expect);
}

TEST_CASE("streaming matcher finds overlapping occurrences") {
    Pattern w({1, 2, 1});
    ObservationStream chi{{1, 2, 1, 2, 1, 2, 1}};
    StopTimes stops = pattern_stops(chi, w, 6);
    std::vector<std::size_t> expect = {2, 4, 6};
    CHECK(stops.times == expect);
}

TEST_CASE("matcher agrees with the quadratic scanner on random streams") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> color(1, kNumColors);
    std::uniform_int_distribution<int> wlen(1, 6);
    for (int rep = 0; rep < 200; ++rep) {
        std::size_t len = 50 + static_cast<std::size_t>(rng() % 200);
        ObservationStream chi;
        for (std::size_t i = 0; i < len; ++i)
            chi.colors.push_back(static_cast<Color>(color(rng)));
        std::vector<Color> wc;
        int m = wlen(rng);
        // draw the pattern from the stream half the time so hits exist
        if (rep % 2 == 0) {
            std::size_t at = rng() % (len - static_cast<std::size_t>(m));
            for (int k = 0; k < m; ++k) wc.push_back(chi[at + static_cast<std::size_t>(k)]);
        } else {
            for (int k = 0; k < m; ++k) wc.push_back(static_cast<Color>(color(rng)));
        }
        Pattern w(wc);
        StopTimes stops = pattern_stops(chi, w, len - 1);
        CHECK(stops.times == naive_stops(chi, w, len - 1));
    }
}

TEST_CASE("pattern stops validate the horizon") {
    ObservationStream chi{{1, 2, 3}};
    Pattern w({1, 2});
    CHECK_THROWS_AS(pattern_stops(chi, w, 3), std::invalid_argument);
    CHECK_THROWS_AS(pattern_stops(chi, Pattern({1, 2, 3, 4, 5}), 2), std::invalid_argument);
}

TEST_CASE("kmp automaton transitions agree with the streaming matcher") {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> color(1, kNumColors);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<Color> wc;
        int m = 1 + static_cast<int>(rng() % 8);
        for (int k = 0; k < m; ++k) wc.push_back(static_cast<Color>(color(rng)));
        Pattern w(wc);
        KmpAutomaton aut(w);
        PatternMatcher matcher(w);
        std::size_t q = 0;
        for (int t = 0; t < 500; ++t) {
            Color c = static_cast<Color>(color(rng));
            bool full = matcher.feed(c);
            q = aut.step(q, c);
            CHECK((q == aut.match_length()) == full);
            if (full) {
                CHECK(matcher.state() == w.size());
                // resuming from the longest proper border keeps the streams in sync
                q = aut.border_after_match();
                matcher = PatternMatcher(w);
                // replay the border prefix so the matcher matches the automaton state
                for (std::size_t k = w.size() - q; k < w.size(); ++k) matcher.feed(w[k]);
            }
            CHECK(matcher.state() == q);
        }
    }
}

TEST_CASE("oracle stops are the in-window subset of pattern stops") {
    // alternating scenery makes the pattern easy to hit
    Scenery s(-3, {1, 2, 1, 2, 1, 2, 1, 2});
    Pattern w({1, 2, 1});
    WalkRun run;
    // visits: a clean in-window match, then a match whose window strays out
    run.positions = {0, 1, 2, 3, 4, 3, 2};
    ObservationStream chi = observe(s, run);
    std::int64_t n = 3;
    StopTimes taus = pattern_stops(chi, w, 6);
    StopTimes nus = oracle_stops(run, chi, w, n, 6);
    CHECK(taus.count() >= nus.count());
    for (std::size_t t : nus.times) {
        bool confined = true;
        for (std::size_t k = t + 1 - w.size(); k <= t; ++k)
            if (run.positions[k] < -n || run.positions[k] > n) confined = false;
        CHECK(confined);
    }
    // the stray-window match (positions 3,4,3 with 4 outside [-3,3]) is dropped
    CHECK(taus.count() == nus.count() + 1);
}

TEST_CASE("oracle stops on random runs: filter definition holds") {
    auto d = lazy_simple(0.1);
    Scenery s = Scenery::iid(5, -40, 40);
    Pattern w = window(s, -2, 0);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        WalkRun run = simulate(d, 0, 2000, seed);
        ObservationStream chi = observe(s, run);
        std::int64_t n = 8;
        StopTimes taus = pattern_stops(chi, w, 1990);
        StopTimes nus = oracle_stops(run, chi, w, n, 1990);
        std::vector<std::size_t> expect;
        for (std::size_t t : taus.times) {
            bool confined = true;
            for (std::size_t k = t + 1 - w.size(); k <= t; ++k)
                if (run.positions[k] < -n || run.positions[k] > n) confined = false;
            if (confined) expect.push_back(t);
        }
        CHECK(nus.times == expect);
    }
}
