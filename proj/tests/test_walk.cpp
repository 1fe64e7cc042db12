#include <catch2/catch_amalgamated.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include "srw/rng.hpp"
#include "srw/walk.hpp"

using namespace srw;
using Rational = boost::multiprecision::cpp_rational;

namespace {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

// Independent closed form for the lazy-simple t-step law: condition on the
// number s of zero steps, the rest is a simple-walk binomial. Requires
// (t - s + x) even for a nonzero term.
double lazy_simple_law(double eps, int t, std::int64_t x) {
    double gamma = (1.0 - eps) / 2.0;
    double total = 0.0;
    for (int s = 0; s <= t; ++s) {
        std::int64_t moves = t - s;
        if (std::llabs(x) > moves || ((moves + x) & 1)) continue;
        int up = static_cast<int>((moves + x) / 2);
        total += binom(t, s) * std::pow(eps, s) * binom(static_cast<int>(moves), up) *
                 std::pow(gamma, static_cast<double>(moves));
    }
    return total;
}

} // namespace

TEST_CASE("lazy-simple walk satisfies the increment conditions") {
    CHECK_NOTHROW(validate(lazy_simple(0.3)));
    // the strictly simple walk has no lazy step and fails the positivity condition
    CHECK_THROWS_WITH(validate(lazy_simple(0.0)), Catch::Matchers::ContainsSubstring("Condition (4)"));
    CHECK_THROWS_AS(lazy_simple(1.0), std::invalid_argument);
    auto d = lazy_simple(0.25);
    CHECK(d.at(0) == Catch::Approx(0.25));
    CHECK(d.at(1) == Catch::Approx(0.375));
    CHECK(d.at(-1) == Catch::Approx(0.375));
    CHECK(d.at(2) == 0.0);
    CHECK(d.unit_steps_only());
}

TEST_CASE("validation names the violated condition") {
    // planted asymmetry
    auto d = lazy_simple(0.2);
    d.mass[static_cast<std::size_t>(d.truncation_bound) + 1] += 0.01;
    d.mass[static_cast<std::size_t>(d.truncation_bound) - 1] -= 0.01;
    CHECK_THROWS_WITH(validate(d), Catch::Matchers::ContainsSubstring("Condition (3)"));
}

TEST_CASE("geometric tail masses sum to one") {
    auto d = detail::geometric_tail_unchecked(0.1, 2.0, 0.5, 64);
    double total = 0.0;
    for (int i = -d.truncation_bound; i <= d.truncation_bound; ++i) total += d.at(i);
    CHECK(total == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(d.at(1) == Catch::Approx(0.45));
    CHECK(d.at(-2) == d.at(2));
}

TEST_CASE("geometric tail factory rejects conditional tails above the decay envelope") {
    // with half the non-unit mass on jumps, the conditional tail at 2 is 1/2,
    // far above e^{-2c}
    CHECK_THROWS_WITH(geometric_tail(0.1, 2.0, 0.5, 64),
                      Catch::Matchers::ContainsSubstring("Condition (2)"));
    // pushing almost all non-unit mass to the zero step brings it under
    CHECK_NOTHROW(geometric_tail(0.01, 3.0, 0.9976, 64));
}

TEST_CASE("simulation is deterministic in the seed") {
    auto d = lazy_simple(0.1);
    WalkRun a = simulate(d, 0, 5000, 42);
    WalkRun b = simulate(d, 0, 5000, 42);
    WalkRun c = simulate(d, 0, 5000, 43);
    CHECK(a.positions == b.positions);
    CHECK(a.positions != c.positions);
    CHECK(a.horizon() == 5000);
    CHECK(a.positions[0] == 0);
}

TEST_CASE("simulated steps stay within the distribution support") {
    auto d = geometric_tail(0.02, 3.0, 0.998, 16);
    WalkRun run = simulate(d, 0, 20000, 7);
    for (std::size_t t = 0; t < run.horizon(); ++t) {
        std::int64_t s = run.positions[t + 1] - run.positions[t];
        CHECK(std::llabs(s) <= d.truncation_bound);
        CHECK(d.at(static_cast<int>(s)) > 0.0);
    }
}

TEST_CASE("state distribution matches the conditioned-binomial closed form") {
    for (double eps : {0.0, 0.1, 0.3}) {
        auto d = lazy_simple(eps);
        for (int t = 0; t <= 12; ++t) {
            auto law = state_distribution(d, StateDistribution::point(0), static_cast<std::size_t>(t));
            for (std::int64_t x = -t; x <= t; ++x)
                CHECK_THAT(law.at(x), Catch::Matchers::WithinAbs(lazy_simple_law(eps, t, x), 1e-10));
        }
    }
}

TEST_CASE("confined evolution only loses mass at the boundary") {
    auto d = lazy_simple(0.2);
    Interval box{-3, 3};
    auto law = state_distribution(d, StateDistribution::point(0), 10, box);
    CHECK(law.total() < 1.0);
    CHECK(law.total() > 0.0);
    for (std::int64_t x = law.lo(); x <= law.hi(); ++x) {
        if (x < box.lo || x > box.hi) CHECK(law.at(x) == 0.0);
    }
    // confinement never increases pointwise probability
    auto free_law = state_distribution(d, StateDistribution::point(0), 10);
    for (std::int64_t x = box.lo; x <= box.hi; ++x) CHECK(law.at(x) <= free_law.at(x) + 1e-15);
}

TEST_CASE("starting outside the confinement interval is rejected") {
    auto d = lazy_simple(0.2);
    CHECK_THROWS_AS(state_distribution(d, StateDistribution::point(5), 3, Interval{-3, 3}),
                    std::invalid_argument);
}

TEST_CASE("two-step decay ratio is bounded by (t-x)/(t+x+2)") {
    for (double eps : {0.0, 0.05, 0.2, 0.4}) {
        auto d = lazy_simple(eps);
        for (std::size_t t = 1; t <= 20; ++t) {
            for (std::int64_t x = 0; x < static_cast<std::int64_t>(t); ++x) {
                double tight = static_cast<double>(static_cast<std::int64_t>(t) - x) /
                               static_cast<double>(static_cast<std::int64_t>(t) + x + 2);
                double rho;
                try {
                    rho = decay_ratio_two_step(d, t, x);
                } catch (const std::domain_error&) {
                    continue; // parity-empty cell for the simple walk
                }
                CHECK(rho <= tight + 1e-12);
            }
        }
    }
}

TEST_CASE("one-step decay ratio mixes parity classes and escapes the cap") {
    // rho(1, 0) = P(S_1 = 1) / P(S_1 = 0) = gamma / eps, far above 1/2.
    auto d = lazy_simple(0.2);
    CHECK(decay_ratio(d, 1, 0) == Catch::Approx(2.0));
    // For the simple walk the one-step ratio is zero wherever it is defined.
    auto simple = lazy_simple(0.0);
    CHECK(decay_ratio(simple, 4, 0) == 0.0);
}

TEST_CASE("rational evolution of the simple walk is exact") {
    auto d = lazy_simple_t<Rational>(Rational(0));
    auto law = state_distribution(d, BasicStateDistribution<Rational>::point(0), 6);
    CHECK(law.at(0) == Rational(20, 64));
    CHECK(law.at(2) == Rational(15, 64));
    CHECK(law.at(6) == Rational(1, 64));
    CHECK(law.total() == Rational(1));
}

TEST_CASE("seed derivation separates trials") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(1, 5) == derive_seed(1, 5));
}
