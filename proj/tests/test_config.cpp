#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "srw/config.hpp"
#include "srw/records.hpp"

using namespace srw;

TEST_CASE("config parses flat key=value text with comments") {
    std::istringstream in(
        "# pinned profile\n"
        "profile = desk\n"
        "walk_family = lazy_simple\n"
        "epsilon = 0.02\n"
        "n = 12\n"
        "delta = 1/64\n"
        "trials = 2000\n"
        "seed = 42   ; master\n"
        "budget_cap = 1000000\n");
    ExperimentConfig c = ExperimentConfig::load(in);
    CHECK(c.profile == "desk");
    CHECK(c.epsilon == 0.02);
    CHECK(c.n == 12);
    CHECK(c.delta.num == 1);
    CHECK(c.delta.den == 64);
    CHECK(c.trials == 2000);
    CHECK(c.seed == 42);
    CHECK(c.budget_cap == 1000000);
}

TEST_CASE("unknown keys are errors, not warnings") {
    std::istringstream in("n = 12\nnn = 13\n");
    CHECK_THROWS_WITH(ExperimentConfig::load(in), Catch::Matchers::ContainsSubstring("unknown key"));
}

TEST_CASE("constraints are re-validated at load") {
    std::istringstream big_delta("delta = 1/10\n");
    CHECK_THROWS_AS(ExperimentConfig::load(big_delta), std::invalid_argument);
    std::istringstream bad_walk("walk_family = geometric_tail\nepsilon = 0.1\ndecay_c = 2\np_zero_frac = 0.5\n");
    CHECK_THROWS_AS(ExperimentConfig::load(bad_walk), std::domain_error);
}

TEST_CASE("threshold defaults derive from the bases at the budget-implied scale") {
    ExperimentConfig c;
    c.budget_cap = 1000000;
    // horizon_base^(2x) = budget -> x = ln(1e6) / (2 ln 2.4)
    double x = std::log(1e6) / (2.0 * std::log(2.4));
    CHECK(c.effective_exponent() == Catch::Approx(x));
    CHECK(c.bound_b_value() == static_cast<std::int64_t>(std::ceil(std::pow(2.45, x))));
    CHECK(c.threshold_c_value() == Catch::Approx(std::pow(1.1, x)));
    // explicit overrides win
    c.bound_b = 500;
    c.threshold_c = 3.0;
    CHECK(c.bound_b_value() == 500);
    CHECK(c.threshold_c_value() == 3.0);
}

TEST_CASE("trial records round-trip through the json line format") {
    TrialRecord r;
    r.seed = 77;
    r.digest = 123456789;
    r.events.A = true;
    r.events.B = true;
    r.events.C = false;
    r.events.D = true;
    r.events.F = true;
    r.events.G = std::nullopt;
    r.events.margin = 0.003;
    r.events.stops_tau = 10;
    r.events.stops_nu = 9;
    r.events.tau_nu_mismatch = 1;
    r.events.estimate = 4;
    r.events.truth = 4;
    r.work_steps = 1000017;

    TrialRecord back = TrialRecord::from_line(r.to_line());
    CHECK(back.seed == r.seed);
    CHECK(back.digest == r.digest);
    CHECK(back.events.A == r.events.A);
    CHECK(back.events.G == r.events.G);
    CHECK(back.events.margin == r.events.margin);
    CHECK(back.events.stops_tau == 10);
    CHECK(back.events.tau_nu_mismatch == 1);
    CHECK(back.work_steps == r.work_steps);
    // identical records serialize to identical bytes
    CHECK(back.to_line() == r.to_line());
}

TEST_CASE("summary counts equal the sum over added reports") {
    BatchSummary s;
    EventReport ok;
    ok.A = true;
    ok.B = ok.C = ok.D = ok.F = true;
    ok.G = true;
    ok.margin = 0.01;
    EventReport bad;
    bad.A = false;
    bad.B = true;
    bad.C = false;
    bad.D = true;
    bad.F = true;
    bad.G = false;
    EventReport empty; // no stops: A undefined
    for (int i = 0; i < 3; ++i) s.add(ok);
    for (int i = 0; i < 2; ++i) s.add(bad);
    s.add(empty);
    CHECK(s.trials == 6);
    CHECK(s.decided == 5);
    CHECK(s.success == 3);
    CHECK(s.no_data == 1);
    CHECK(s.c_fail == 3); // 2 bad + 1 empty
    CHECK(s.g_fail == 2);
    CHECK(s.containment_violations == 0);
    CHECK(s.success_rate() == Catch::Approx(0.6));

    BatchSummary a, b;
    a.add(ok);
    b.add(bad);
    b.add(empty);
    a.merge(b);
    CHECK(a.trials == 3);
    CHECK(a.decided == 2);

    // a containment violation: all guards true but the answer wrong
    EventReport viol = ok;
    viol.A = false;
    BatchSummary v;
    v.add(viol);
    CHECK(v.containment_violations == 1);
}

TEST_CASE("fraction round trip through config text") {
    std::istringstream in("delta = 3/256\n");
    ExperimentConfig c = ExperimentConfig::load(in);
    CHECK(c.delta.str() == "3/256");
    CHECK(c.delta.value() == Catch::Approx(3.0 / 256.0));
}
