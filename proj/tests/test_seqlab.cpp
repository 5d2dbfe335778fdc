#include <doctest.h>

#include <cmath>
#include <random>

#include "chimlab/errors.hpp"
#include "chimlab/seqlab.hpp"

using namespace chimlab;
using doctest::Approx;

namespace {

// Direct products, summed term by term.
LogProducts brute_products(const ChimneySequence& s, long n) {
    LogProducts out;
    for (long k = 0; k <= n; ++k) {
        out.logA += s.log_a(k);
        out.logB += s.log_b(k);
    }
    return out;
}

Explicit random_explicit(std::mt19937_64& rng, int len) {
    std::uniform_real_distribution<double> gap(0.05, 3.0);
    Explicit e;
    double cur = 0.0;  // ln b_0
    e.log_b.push_back(cur);
    cur -= gap(rng);
    e.log_a.push_back(cur);
    for (int n = 1; n < len; ++n) {
        cur -= gap(rng);
        e.log_b.push_back(cur);
        cur -= gap(rng);
        e.log_a.push_back(cur);
    }
    return e;
}

}  // namespace

TEST_CASE("power sequence values") {
    const auto s = make_sequence(Power{2.0, 0.5});
    CHECK(std::exp(s.log_b(1)) == Approx(0.25));
    CHECK(std::exp(s.log_a(1)) == Approx(0.0625));
    CHECK(s.log_b(0) == 0.0);
    CHECK(s.log_a(0) == Approx(std::log(0.5)));
    // Far beyond double range in linear scale.
    CHECK(s.log_a(500) < -1e300);
    CHECK_THROWS_AS(s.log_a(600), ValidationError);
    CHECK(std::isfinite(s.log_b(500)));
}

TEST_CASE("factorial values match lgamma") {
    const auto s = make_sequence(Factorial{});
    CHECK(s.log_a(2) == Approx(-std::log(720.0)));
    CHECK(s.log_b(1) == Approx(-std::log(6.0)));
    for (long n : {0L, 3L, 17L, 1000L})
        CHECK(s.log_a(n) == Approx(-std::lgamma(2.0 * n + 3.0)).epsilon(1e-12));
}

TEST_CASE("rising factorial matches direct products") {
    const RisingFactorial rf{1, 1, 2};
    const auto s = make_sequence(rf);
    // b_n = a_{n-1} / prod_{i=q+1}^{r} (nr+i), a_n = b_n / prod_{i=p+1}^{r} (nr+i).
    double la = 0.0, lb = 0.0;
    for (long n = 0; n <= 30; ++n) {
        if (n > 0) {
            lb = la;
            for (int i = rf.q + 1; i <= rf.r; ++i) lb -= std::log(static_cast<double>(n * rf.r + i));
        }
        la = lb;
        for (int i = rf.p + 1; i <= rf.r; ++i) la -= std::log(static_cast<double>(n * rf.r + i));
        CHECK(s.log_b(n) == Approx(lb).epsilon(1e-12));
        CHECK(s.log_a(n) == Approx(la).epsilon(1e-12));
    }
}

TEST_CASE("power pair follows the recursion a_n = b_n^p, b_{n+1} = a_n^q") {
    const auto s = make_sequence(PowerPair{2.0, 3.0, 0.5});
    for (long n = 1; n < 12; ++n) {
        CHECK(s.log_a(n) == Approx(2.0 * s.log_b(n)).epsilon(1e-13));
        CHECK(s.log_b(n + 1) == Approx(3.0 * s.log_a(n)).epsilon(1e-13));
    }
}

TEST_CASE("cursor agrees with random access") {
    for (const SequenceSpec& spec : {SequenceSpec{Factorial{}}, SequenceSpec{RisingFactorial{1, 2, 3}},
                                     SequenceSpec{Power{3.0, 0.2}}, SequenceSpec{PowerPair{2.0, 3.0, 0.7}}}) {
        const auto s = make_sequence(spec);
        SequenceCursor c(s);
        for (long n = 0; n < 40; ++n, c.advance()) {
            REQUIRE(c.n() == n);
            CHECK(c.log_a() == Approx(s.log_a(n)).epsilon(1e-12));
            CHECK(c.log_b() == Approx(s.log_b(n)).epsilon(1e-12));
        }
    }
}

TEST_CASE("explicit sequences") {
    SUBCASE("minimal sequence of length one") {
        const auto s = make_sequence(Explicit{{-1.0}, {0.0}});
        CHECK(s.length() == 1);
    }
    SUBCASE("b_0 must be 1") { CHECK_THROWS_AS(make_sequence(Explicit{{-2.0}, {-1.0}}), ValidationError); }
    SUBCASE("interlacing violation b_1 = a_0 is rejected") {
        CHECK_THROWS_AS(make_sequence(Explicit{{-1.0, -3.0}, {0.0, -1.0}}), ValidationError);
    }
    SUBCASE("index beyond length") {
        const auto s = make_sequence(Explicit{{-1.0, -3.0}, {0.0, -2.0}});
        CHECK_THROWS_AS(s.log_a(2), ValidationError);
    }
    SUBCASE("infinite entries are rejected") {
        CHECK_THROWS_AS(make_sequence(Explicit{{-INFINITY}, {0.0}}), ValidationError);
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(make_sequence(Power{1.0, 0.5}), ValidationError);
    CHECK_THROWS_AS(make_sequence(Power{2.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(make_sequence(PowerPair{2.0, 0.5, 0.5}), ValidationError);
    CHECK_THROWS_AS(make_sequence(RisingFactorial{3, 1, 2}), ValidationError);
}

TEST_CASE("log products") {
    const auto pw = make_sequence(Power{2.0, 0.5});
    CHECK(log_products(pw, 1).logA == Approx(5.0 * std::log(0.5)));
    CHECK(log_products(pw, 0).logB == 0.0);
    CHECK(log_products(make_sequence(Factorial{}), 1).logB == Approx(-std::log(6.0)));
    for (const SequenceSpec& spec : {SequenceSpec{Factorial{}}, SequenceSpec{PowerPair{2.0, 3.0, 0.5}}}) {
        const auto s = make_sequence(spec);
        for (long n : {0L, 1L, 5L, 20L}) {
            const auto fast = log_products(s, n), slow = brute_products(s, n);
            CHECK(fast.logA == Approx(slow.logA).epsilon(1e-12));
            CHECK(fast.logB == Approx(slow.logB).epsilon(1e-12));
        }
    }
}

TEST_CASE("exponents of the power family") {
    const auto s = make_sequence(Power{2.0, 0.5});
    const auto e = exponents(s, 1);
    CHECK(e.m == Approx(1.25));
    CHECK(e.M == Approx(1.5));
    CHECK_THROWS_AS(exponents(s, 0), ValidationError);
}

TEST_CASE("exponent limits") {
    SUBCASE("power") {
        const auto est = exponent_limits(make_sequence(Power{2.0, 0.5}), 10, 40);
        CHECK(std::fabs(est.m_hat - 4.0 / 3.0) < 1e-6);
        CHECK(std::fabs(est.M_hat - 5.0 / 3.0) < 1e-6);
        CHECK(est.settled);
    }
    SUBCASE("power pair") {
        const auto est = exponent_limits(make_sequence(PowerPair{2.0, 3.0, 0.5}), 10, 40);
        CHECK(std::fabs(est.m_hat - 1.4) < 1e-6);
        CHECK(std::fabs(est.M_hat - 1.8) < 1e-6);
    }
    SUBCASE("geometric explicit sequence converges to 3/2") {
        const double lc = std::log(0.3);
        Explicit e;
        double cur = 0.0;
        for (int n = 0; n < 400; ++n) {
            e.log_b.push_back(cur);
            cur += lc;
            e.log_a.push_back(cur);
            cur += lc;
        }
        const auto est = exponent_limits(make_sequence(e), 200, 399);
        CHECK(est.m_hat == Approx(1.5).epsilon(5e-3));
        CHECK(est.M_hat == Approx(1.5).epsilon(5e-3));
    }
}

TEST_CASE("closed forms agree with window estimates") {
    for (double p : {1.5, 2.0, 3.0, 7.0}) {
        const auto [m, M] = closed_form_limits(Power{p, 0.3});
        const auto est = exponent_limits(make_sequence(Power{p, 0.3}), 20, 60);
        CHECK(std::fabs(est.m_hat - m) < 1e-3);
        CHECK(std::fabs(est.M_hat - M) < 1e-3);
        CHECK(m < M);
    }
    for (auto [p, q] : {std::pair{2.0, 3.0}, std::pair{1.5, 4.0}, std::pair{5.0, 1.2}}) {
        const auto [m, M] = closed_form_limits(PowerPair{p, q, 0.5});
        const auto est = exponent_limits(make_sequence(PowerPair{p, q, 0.5}), 20, 60);
        CHECK(std::fabs(est.m_hat - m) < 1e-3);
        CHECK(std::fabs(est.M_hat - M) < 1e-3);
        CHECK(m < M);
    }
    const auto f = exponent_limits(make_sequence(Factorial{}), 100000, 1000000);
    CHECK(std::fabs(f.m_hat - 1.5) < 0.02);
    CHECK(std::fabs(f.M_hat - 1.5) < 0.02);
    CHECK(closed_form_limits(Factorial{}) == std::pair{1.5, 1.5});
    CHECK(closed_form_limits(RisingFactorial{1, 1, 2}) == std::pair{1.5, 1.5});
    const auto rf = closed_form_limits(RisingFactorial{1, 2, 3});
    CHECK(rf.first == rf.second);
}

TEST_CASE("rising factorial window estimate matches its closed form") {
    const auto est = exponent_limits(make_sequence(RisingFactorial{1, 1, 2}), 100000, 200000);
    CHECK(std::fabs(est.m_hat - 1.5) < 1e-3);
    CHECK(std::fabs(est.M_hat - 1.5) < 1e-3);
}

TEST_CASE("property: two algebraic forms of the exponents agree on random explicit sequences") {
    std::mt19937_64 rng(20261016);
    for (int trial = 0; trial < 300; ++trial) {
        const auto s = make_sequence(random_explicit(rng, 12));
        for (long n = 1; n < 12; ++n) {
            const auto f = exponent_forms(s, n);
            CHECK(f.m_first == Approx(f.m_second).epsilon(1e-12));
            CHECK(f.M_first == Approx(f.M_second).epsilon(1e-12));
        }
    }
}

TEST_CASE("property: m_n <= M_n, and both lie in [1, 2] when the hypotheses hold") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = make_sequence(random_explicit(rng, 10));
        const bool ok = validate_hypotheses(s, 9).pass;
        for (long n = 1; n < 10; ++n) {
            const auto e = exponents(s, n);
            CHECK(e.m <= e.M + 1e-12);
            if (ok) {
                CHECK(e.m >= 1.0 - 1e-12);
                CHECK(e.M <= 2.0 + 1e-12);
            }
        }
    }
    for (long n = 1; n < 50; ++n) {
        const auto e = exponents(make_sequence(Power{2.5, 0.4}), n);
        CHECK(e.m >= 1.0);
        CHECK(e.M <= 2.0);
        CHECK(e.m <= e.M);
    }
}

TEST_CASE("factorial exponents approach 3/2 monotonically over decades") {
    const auto s = make_sequence(Factorial{});
    double prev_m = INFINITY, prev_M = INFINITY;
    for (long n : {1000L, 10000L, 100000L, 1000000L}) {
        const auto e = exponents(s, n);
        CHECK(std::fabs(e.m - 1.5) < prev_m);
        CHECK(std::fabs(e.M - 1.5) < prev_M);
        prev_m = std::fabs(e.m - 1.5);
        prev_M = std::fabs(e.M - 1.5);
    }
    CHECK(prev_m < 0.01);
    CHECK(prev_M < 0.01);
}

TEST_CASE("validate_hypotheses") {
    const auto r = validate_hypotheses(make_sequence(Power{2.0, 0.5}), 10);
    CHECK(r.pass);
    CHECK(r.c_est == Approx(0.5));
    const auto f = validate_hypotheses(make_sequence(Factorial{}), 100);
    CHECK(f.pass);
    CHECK(f.root_seq.back() < f.root_seq.front());
}

TEST_CASE("phi and its inverse") {
    CHECK(phi(2.0, 1.0) == Approx(5.0 / 3.0));
    CHECK(phi(2.0, 2.0) == Approx(4.0 / 3.0));
    CHECK(phi(2.0, 1.5) == Approx(1.0 + 2.0 / 4.5));
    CHECK(invert_phi(2.0, 5.0 / 3.0) == Approx(1.0));
    CHECK(invert_phi(2.0, 4.0 / 3.0) == Approx(2.0));
    CHECK(invert_phi(2.0, 4.0 / 3.0, PhiBranch::Increasing) == Approx(2.0));
    CHECK(invert_phi(2.0, 1.5) == Approx(4.0 / 3.0));
    CHECK_THROWS_AS(invert_phi(2.0, 1.9), ValidationError);
    CHECK_THROWS_AS(phi(2.0, 4.5), ValidationError);
}

TEST_CASE("property: phi endpoints, continuity and round trips") {
    for (double p : {1.1, 2.0, 3.0, 10.0}) {
        const double M = power_limits(p).second;
        CHECK(phi(p, 1.0) == Approx(M).epsilon(1e-15));
        CHECK(phi(p, p * p) == Approx(M).epsilon(1e-15));
        CHECK(std::fabs(phi(p, p - 1e-8) - phi(p, p + 1e-8)) < 1e-6);
        for (double u = 0.0; u <= 1.0; u += 0.125) {
            const double s = power_limits(p).first + u * (M - power_limits(p).first);
            CHECK(phi(p, invert_phi(p, s)) == Approx(s).epsilon(1e-13));
            CHECK(phi(p, invert_phi(p, s, PhiBranch::Increasing)) == Approx(s).epsilon(1e-13));
        }
    }
}

TEST_CASE("power pair inverse design") {
    const PowerPair pp = power_pair_for_interval(0.35, 0.55);
    CHECK(pp.p == Approx(0.55 / 0.35));
    CHECK(pp.q == Approx(0.65 / 0.45));
    const auto [m, M] = closed_form_limits(pp);
    CHECK(m == Approx(1.35).epsilon(1e-12));
    CHECK(M == Approx(1.55).epsilon(1e-12));
    // Convergence is geometric with ratio 1/(pq), about 0.44 here.
    const auto est = exponent_limits(make_sequence(pp), 20, 60);
    CHECK(std::fabs(est.m_hat - 1.35) < 1e-6);
    CHECK(std::fabs(est.M_hat - 1.55) < 1e-6);
}

TEST_CASE("sequence specs round-trip through JSON") {
    for (const SequenceSpec& spec : {SequenceSpec{Factorial{}}, SequenceSpec{RisingFactorial{1, 2, 3}},
                                     SequenceSpec{Power{2.0, 0.4}}, SequenceSpec{PowerPair{2.0, 3.0, 0.5}},
                                     SequenceSpec{Explicit{{-1.0, -3.0}, {0.0, -2.0}}}}) {
        nlohmann::json j = spec;
        const SequenceSpec back = j.get<SequenceSpec>();
        CHECK(nlohmann::json(back) == j);
    }
    CHECK_THROWS(nlohmann::json({{"kind", "nope"}}).get<SequenceSpec>());
}
