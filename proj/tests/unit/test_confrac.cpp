#include <doctest.h>

#include "ietlab/confrac.hpp"
#include "oracle/rational_oracle.hpp"

#include <cmath>
#include <random>

using namespace ietlab;

namespace {

std::vector<std::pair<int, long>> as_pairs(const Srcf& s) {
    std::vector<std::pair<int, long>> out;
    for (const auto& t : s) out.push_back({t.eps, t.a});
    return out;
}

Srcf random_canonical_srcf(std::mt19937_64& rng, std::size_t len) {
    std::uniform_int_distribution<long> digit(2, 9);
    std::bernoulli_distribution minus(0.4), run(0.3);
    Srcf s{{1, digit(rng)}};
    while (s.size() < len) {
        if (run(rng)) {
            // a run of (-1)/2 terms closed by a larger term
            std::size_t l = 1 + rng() % 3;
            for (std::size_t i = 0; i < l && s.size() < len; ++i) s.push_back({-1, 2});
            if (s.size() < len) s.push_back({minus(rng) ? -1 : 1, digit(rng) + 1});
        } else {
            s.push_back({minus(rng) ? -1 : 1, digit(rng)});
        }
    }
    return s;
}

}  // namespace

TEST_CASE("convergents") {
    auto cv = convergents({2, 2, 2});
    REQUIRE(cv.size() == 4);
    CHECK(cv[0].p == 0);
    CHECK(cv[0].q == 1);
    CHECK(cv[1].p == 1);
    CHECK(cv[1].q == 2);
    CHECK(cv[2].p == 2);
    CHECK(cv[2].q == 5);
    CHECK(cv[3].p == 5);
    CHECK(cv[3].q == 12);
    CHECK(convergents({}).size() == 1);
    CHECK_THROWS(convergents({1, 2}, 3));
}

TEST_CASE("determinant identity") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> digit(1, 1000);
    for (int trial = 0; trial < 20; ++trial) {
        Digits d(40);
        for (auto& x : d) x = digit(rng);
        auto cv = convergents(d);
        // p_{-1} = 1, q_{-1} = 0 gives the n = -1 case
        CHECK(cv[0].p * 0 - 1 * cv[0].q == -1);
        for (std::size_t n = 0; n + 1 < cv.size(); ++n) {
            mpz_class det = cv[n + 1].p * cv[n].q - cv[n].p * cv[n + 1].q;
            CHECK(det == (n % 2 == 0 ? 1 : -1));
            CHECK(gcd(cv[n + 1].p, cv[n + 1].q) == 1);
        }
    }
}

TEST_CASE("cylinders") {
    Cylinder c = cylinder({2, 2});
    CHECK(c.length == mpq_class(1, 35));
    CHECK(c.first == mpq_class(2, 5));
    CHECK(c.second == mpq_class(3, 7));
    Cylinder one = cylinder({1});
    CHECK(one.first == 1);
    CHECK(one.second == mpq_class(1, 2));
    CHECK(one.length == mpq_class(1, 2));
    mpq_class total = 0;
    for (long a = 1; a <= 50; ++a) total += cylinder({a}).length;
    CHECK(total == 1 - mpq_class(1, 51));

    std::mt19937_64 rng(4);
    std::uniform_int_distribution<long> digit(1, 30);
    for (int trial = 0; trial < 200; ++trial) {
        Digits d(1 + rng() % 6);
        for (auto& x : d) x = digit(rng);
        Cylinder outer = cylinder(d);
        CHECK(outer.hi() - outer.lo() == outer.length);
        d.push_back(digit(rng));
        Cylinder inner = cylinder(d);
        CHECK(inner.lo() >= outer.lo());
        CHECK(inner.hi() <= outer.hi());
        mpq_class v = oracle::rcf_value(d);
        CHECK(v >= inner.lo());
        CHECK(v <= inner.hi());
    }
}

TEST_CASE("rcf_expand") {
    auto golden = rcf_expand(Real::parse("(sqrt(5)-1)/2"), 60);
    CHECK_FALSE(golden.truncated_at);
    CHECK(golden.digits == Digits(60, 1));

    auto rational = rcf_expand(Real::parse("3/8"), 10);
    CHECK(rational.terminated);
    CHECK(rational.digits == Digits{2, 1, 2});

    auto inv5 = rcf_expand(Real::parse("1/sqrt(5)"), 30);
    REQUIRE(inv5.digits.size() == 30);
    CHECK(inv5.digits[0] == 2);
    for (std::size_t k = 1; k < 30; ++k) CHECK(inv5.digits[k] == 4);

    // a non-exact Real equal to a rational cannot be certified past its last digit
    Real third(Real::Evaluator([](int bits) { return Ball(1L, bits) / Ball(3L, bits); }), "1/3 as balls");
    PrecisionPolicy small{128, 512, 2};
    auto stuck = rcf_expand(third, 5, small);
    REQUIRE(stuck.truncated_at);
    CHECK(*stuck.truncated_at == 0);

    CHECK_THROWS_AS(rcf_expand(Real::parse("sqrt(2)"), 5), DomainViolation);
}

TEST_CASE("srcf evaluation") {
    Srcf fours{{1, 2}};
    for (int i = 0; i < 39; ++i) fours.push_back({1, 4});
    Ball v = srcf_eval(fours, 40, 256);
    CHECK(std::fabs(v.mid_double() - 1 / std::sqrt(5.0)) < 1e-10);
    CHECK(srcf_value({{1, 3}, {-1, 3}}) == mpq_class(3, 8));
    CHECK(srcf_value({{1, 2}}) == mpq_class(1, 2));
    CHECK(srcf_eval({{1, 3}, {-1, 3}}, 2, 128).contains(mpq_class(3, 8)));
    CHECK_THROWS_AS(srcf_value({{1, 1}, {-1, 1}, {1, 7}}, 2), DivisionByZeroTail);
    CHECK_THROWS_AS(srcf_eval({{1, 1}, {1, -1}}, 2, 128), DivisionByZeroTail);
}

TEST_CASE("srcf_of_expansion") {
    Srcf plus = srcf_of_expansion(std::vector<ExpansionTriple>(5, {2, 2, 1}));
    CHECK(plus == Srcf{{1, 2}, {1, 4}, {1, 4}, {1, 4}, {1, 4}, {1, 4}});
    Srcf minus = srcf_of_expansion(std::vector<ExpansionTriple>(4, {2, 2, -1}));
    CHECK(minus == Srcf{{1, 2}, {1, 4}, {-1, 4}, {-1, 4}, {-1, 4}});

    ParamPoint p = ParamPoint::parse("1/sqrt(5)", "0.3");
    ExpansionSeq seq = full_expansion(p, 30);
    REQUIRE(seq.triples.size() == 30);
    Srcf s = srcf_of_expansion(seq);
    double target = ((1 - p.alpha) / (1 + p.beta)).approx();
    CHECK(std::fabs(srcf_eval(s, s.size(), 256).mid_double() - target) < 1e-8);
}

TEST_CASE("singularization identity on random rationals") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> num(-1000, 1000), den(1, 100);
    for (int trial = 0; trial < 1000; ++trial) {
        mpq_class a(num(rng), den(rng)), b(2 * 100 + (num(rng) + 1000) * 4 / 10, 100), x((num(rng) + 1000) / 2, 1001);
        a.canonicalize();
        b.canonicalize();
        x.canonicalize();
        mpq_class lhs = a - 1 / (b + x);
        CHECK(singularized_value(a, b, x) == lhs);
    }
}

TEST_CASE("srcf_to_rcf named rules") {
    CHECK(srcf_to_rcf({{1, 3}, {-1, 3}}).digits == Digits{2, 1, 2});
    CHECK(srcf_to_rcf({{1, 3}, {1, 5}, {1, 2}}).digits == Digits{3, 5, 2});
    auto run = srcf_to_rcf({{1, 3}, {-1, 2}, {-1, 2}, {-1, 3}});
    CHECK(run.digits == Digits{2, 3, 2});
    CHECK_FALSE(run.open_run);
    CHECK(rcf_value(run.digits) == srcf_value({{1, 3}, {-1, 2}, {-1, 2}, {-1, 3}}));
    auto open = srcf_to_rcf({{1, 3}, {-1, 2}});
    CHECK(open.open_run);
    CHECK(rcf_value(open.digits) == mpq_class(2, 5));
    CHECK_THROWS_AS(srcf_to_rcf({{-1, 3}}), DomainViolation);
}

TEST_CASE("srcf_to_rcf preserves value and matches rcf_expand") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        Srcf s = random_canonical_srcf(rng, 20);
        mpq_class value = oracle::srcf_value(as_pairs(s));
        CHECK(srcf_value(s) == value);
        RcfConversion r = srcf_to_rcf(s);
        CHECK(oracle::rcf_value(r.digits) == value);
        auto expanded = rcf_expand(Real(value), 1000);
        CHECK(expanded.terminated);
        CHECK(expanded.digits == r.digits);
        CHECK(r.digits == oracle::rcf_digits(value));
    }
}

TEST_CASE("window product check") {
    const double lambda = std::sqrt(40.0 / 3.0);
    auto forty = window_product_check(Digits(30, 40), lambda, 4);
    CHECK(forty.ok);
    for (auto s : forty.window_sizes) CHECK(s == 1);
    CHECK(forty.ok_from == 0);

    Digits alt;
    for (int i = 0; i < 30; ++i) alt.push_back(i % 2 ? 40 : 1);
    auto a = window_product_check(alt, lambda, 4);
    CHECK(a.ok);
    std::size_t largest = 0;
    for (auto s : a.window_sizes) largest = std::max(largest, s);
    CHECK(largest == 2);
    CHECK_FALSE(window_product_check(alt, lambda, 1).ok);

    auto ones = window_product_check(Digits(30, 1), 1.01, 10);
    CHECK_FALSE(ones.ok);
    CHECK(ones.failed_at == 2u);
    CHECK(ones.ok_from == 30);
}

TEST_CASE("khintchine running means") {
    for (const auto& [n, g] : khintchine_running(Digits(20, 2))) CHECK(g == doctest::Approx(2.0));
    auto single = khintchine_running({5});
    CHECK(single.at(0).second == doctest::Approx(5.0));
    std::mt19937_64 rng(7);
    Digits d(200000);
    for (auto& x : d) x = sample_gauss_kuzmin(rng);
    CHECK(khintchine_running(d).back().second == doctest::Approx(2.68545).epsilon(0.03));
    for (const auto& [n, g] : khintchine_running(Digits(10, 40))) CHECK(g >= std::sqrt(40.0 / 3.0));
}
