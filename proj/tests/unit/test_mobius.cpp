#include <doctest.h>

#include "ietlab/mobius.hpp"
#include "oracle/rational_oracle.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

using namespace ietlab;

TEST_CASE("sieve values") {
    MobiusTable mu(100000);
    CHECK(mu(1) == 1);
    CHECK(mu(2) == -1);
    CHECK(mu(6) == 1);
    CHECK(mu(12) == 0);
    CHECK(mu(30) == -1);
    CHECK(mu(99991) == -1);  // prime
    for (long n = 1; n <= 3000; ++n) REQUIRE(mu(n) == oracle::mobius_by_trial_division(n));
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> pick(1, 316);
    for (int i = 0; i < 2000; ++i) {
        long a = pick(rng), b = pick(rng);
        if (std::gcd(a, b) == 1) CHECK(mu(a * b) == mu(a) * mu(b));
    }
    CHECK(mu.mertens(1) == 1);
    CHECK(mu.mertens(10) == -1);
    CHECK(mu.mertens(1000) == 2);
    CHECK_THROWS(MobiusTable(0));
}

TEST_CASE("Mertens average at one million") {
    MobiusTable mu(1000000);
    CHECK(mu.mertens(1000000) == 212);
    CHECK(std::fabs(mu.mertens(1000000) / 1e6) < 1e-3);
}

TEST_CASE("observables") {
    CHECK(Observable::parse("centered2").part == 2);
    CHECK(Observable::parse("root3").kind == Observable::Kind::SymbolRootOfUnity);
    CHECK_THROWS(Observable::parse("centered4"));
    Observable c1 = Observable::parse("centered1");
    CHECK(observable_value(c1, 1, 0.3, 0.2).real() == doctest::Approx(0.7));
    CHECK(observable_value(c1, 2, 0.3, 0.2).real() == doctest::Approx(-0.3));
    CHECK(std::abs(observable_value(Observable::parse("root3"), 2, 0.3, 0.2)) == doctest::Approx(1.0));
    // mean zero along an orbit of a uniquely ergodic map
    IETState state(ParamPoint::parse("1/sqrt(7)", "1/sqrt(11)"));
    auto f = observable_sequence(state, Real::parse("1/sqrt(3)"), c1, 20000);
    std::complex<double> mean = std::accumulate(f.begin(), f.end(), std::complex<double>(0)) / 20000.0;
    CHECK(std::abs(mean) < 5e-3);
}

TEST_CASE("disjointness series") {
    MobiusTable mu(10000);
    std::vector<std::complex<double>> ones(10000, 1.0);
    auto s = disjointness_series(mu, ones, {1, 100, 10000});
    REQUIRE(s.size() == 3);
    CHECK(s[0].value.real() == doctest::Approx(1.0));
    CHECK(s[1].value.real() == doctest::Approx(mu.mertens(100) / 100.0));
    CHECK(s[2].value.real() == doctest::Approx(mu.mertens(10000) / 10000.0));
    std::vector<std::complex<double>> f{{0.25, 0.5}};
    CHECK(disjointness_series(mu, f, {1})[0].value == std::complex<double>(0.25, 0.5));
    CHECK_THROWS(disjointness_series(mu, ones, {20000}));

    IETState state(ParamPoint::parse("1/sqrt(7)", "1/sqrt(11)"));
    auto series = disjointness_series(mu, state, Real::parse("1/sqrt(3)"), Observable::parse("centered1"), {100, 10000});
    CHECK(std::abs(series[1].value) < 0.1);
}

TEST_CASE("exponential sums") {
    MobiusTable mu(20000);
    CHECK(mu_exponential_sum(mu, 0.0, 20000).real() == doctest::Approx(mu.mertens(20000)));
    CHECK(mu_exponential_sum(mu, 0.3, 0) == std::complex<double>(0));
    // mu(1) e(theta) - e(2 theta) - e(3 theta)
    std::complex<double> direct = std::polar(1.0, 2 * std::numbers::pi * 0.1) -
                                  std::polar(1.0, 2 * std::numbers::pi * 0.2) -
                                  std::polar(1.0, 2 * std::numbers::pi * 0.3);
    CHECK(std::abs(mu_exponential_sum(mu, 0.1, 3) - direct) < 1e-12);
    CHECK(mu_exponential_max(mu, 20000, 512, 2) < 0.05 * 20000);
}

TEST_CASE("Parseval inequality") {
    MobiusTable mu(2000);
    std::vector<std::complex<double>> zero(500, 0.0);
    auto z = parseval_check(mu, zero, 2048);
    CHECK(z.lhs == 0);
    CHECK(z.rhs == 0);
    CHECK(z.ok);

    std::vector<std::complex<double>> single{{0.6, -0.8}};
    auto one = parseval_check(mu, single, 8);
    CHECK(one.lhs == doctest::Approx(1.0));
    CHECK(one.rhs == doctest::Approx(1.0));

    IETState state(ParamPoint::parse("1/sqrt(7)", "1/sqrt(11)"));
    auto f = observable_sequence(state, Real::parse("1/sqrt(3)"), Observable::parse("root3"), 1000);
    auto r = parseval_check(mu, f, 1 << 12, 1e-6, 2);
    CHECK(r.ok);
    CHECK(r.rhs_double == doctest::Approx(r.rhs).epsilon(0.05));
    CHECK_THROWS(parseval_check(mu, f, 1000));
}

TEST_CASE("Dirichlet kernel norms") {
    CHECK(dirichlet_l1(1) == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(sine_integral_pi() == doctest::Approx(1.8519370519824658).epsilon(1e-12));
    double prev = 0;
    for (long k : {1L, 2L, 5L, 10L, 50L, 100L}) {
        double v = dirichlet_l1(k);
        CHECK(v > prev);
        prev = v;
    }
    // reference values from independent quadrature
    CHECK(dirichlet_l1(10) == doctest::Approx(12.3236).epsilon(1e-4));
    CHECK(dirichlet_l1(100) == doctest::Approx(17.969).epsilon(1e-4));
}

TEST_CASE("claim constants") {
    ClaimReport r = verify_claim_constants(200, 9);
    CHECK(r.c_lower == doctest::Approx(8 / std::numbers::pi));
    CHECK(12 * r.c_lower == doctest::Approx(30.558).epsilon(1e-4));
    CHECK(r.eps_is_tau_over_4);
    CHECK(r.x_c_exceeds_24_12);
    CHECK(r.log_x_c > 12 * std::log(24.0));
    CHECK(r.f_at_x_c < 0);
    CHECK(claim_f(r.log_root, r.c_lower) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(r.log_root > r.log_x_c);
    CHECK(r.amgm_failures == 0);
    CHECK(r.ok());
    CHECK(amgm_chain_holds({3, 5, 2, 7}, 210));
    CHECK_THROWS(amgm_chain_holds({3, 5, 2, 7}, 200));
    CHECK(amgm_chain_holds({1, 1, 1}, 1));
    CHECK(amgm_chain_holds({1}, 5));
}
