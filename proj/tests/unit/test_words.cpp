#include <doctest.h>

#include "ietlab/words.hpp"

#include <random>
#include <set>

using namespace ietlab;

TEST_CASE("length substitution examples") {
    CHECK(substitute(kDefaultInit, {2, 2, 1}) == LengthTriple{8, 7, 6});
    CHECK(substitute(kDefaultInit, {1, 1, -1}) == LengthTriple{4, 5, 6});
    LengthTriple l = substitute(kDefaultInit, {2, 2, 1});
    CHECK(l.c == l.a - kDefaultInit.a);
}

TEST_CASE("word substitution matches concatenation") {
    WordTriple w{"12", "3", "123"};
    WordTriple plus = substitute(w, {2, 2, 1});
    CHECK(plus.A == "12" "123" "3" "12");
    CHECK(plus.B == "12" "123" "3" "3");
    CHECK(plus.C == "12" "123" "3");
    CHECK(plus.lengths() == substitute(w.lengths(), {2, 2, 1}));
    WordTriple minus = substitute(w, {1, 1, -1});
    CHECK(minus.A == "123" "3");
    CHECK(minus.B == "123" "12");
    CHECK(minus.C == "123" "3" "12");
}

TEST_CASE("string and length modes agree") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<long> digit(1, 4);
    for (int trial = 0; trial < 50; ++trial) {
        WordTriple w{"12", "3", "123"};
        LengthTriple l = w.lengths();
        for (int k = 0; k < 5; ++k) {
            ExpansionTriple t{digit(rng), digit(rng), rng() % 2 ? 1 : -1};
            w = substitute(w, t);
            l = substitute(l, t);
            REQUIRE(w.lengths() == l);
        }
    }
}

TEST_CASE("block decomposition reproduces lengths with at most four blocks") {
    for (long n = 1; n <= 5; ++n)
        for (long m = 1; m <= 5; ++m)
            for (int eps : {1, -1}) {
                ExpansionTriple t{n, m, eps};
                LengthTriple prev{7, 6, 11};
                LengthTriple next = substitute(prev, t);
                const mpz_class* len[3] = {&prev.a, &prev.b, &prev.c};
                const mpz_class* out[3] = {&next.a, &next.b, &next.c};
                for (int w = 0; w < 3; ++w) {
                    auto blocks = decompose(w, t);
                    CHECK(blocks.size() <= 4);
                    mpz_class total = 0;
                    for (const auto& b : blocks) total += b.power * *len[b.word];
                    CHECK(total == *out[w]);
                }
            }
}

TEST_CASE("invariants hold from k = 1 exhaustively to depth 4") {
    CHECK_FALSE(kDefaultInit.satisfies_invariants());  // c_0 = 3 > 2 b_0
    std::set<std::tuple<long, long, long>> level{{2, 1, 3}};
    for (int depth = 1; depth <= 4; ++depth) {
        std::set<std::tuple<long, long, long>> next;
        for (auto [a, b, c] : level)
            for (long n = 1; n <= 5; ++n)
                for (long m = 1; m <= 5; ++m)
                    for (int eps : {1, -1}) {
                        LengthTriple prev{a, b, c};
                        LengthTriple l = substitute(prev, {n, m, eps});
                        REQUIRE(l.satisfies_invariants());
                        bool minus_case = l.c == l.a - prev.a && l.c == l.b - prev.b;
                        bool plus_case = l.c == l.a + prev.a && l.c == l.b + prev.b;
                        REQUIRE((minus_case || plus_case));
                        next.insert({l.a.get_si(), l.b.get_si(), l.c.get_si()});
                    }
        level = std::move(next);
    }
    CHECK(level.size() > 1000);
}

TEST_CASE("growth verdicts") {
    std::vector<ExpansionTriple> twos(12, {2, 2, 1});
    auto v = verify_growth(twos);
    REQUIRE(v.size() == 12);
    for (std::size_t k = 2; k <= 12; ++k) {
        CHECK(v[k - 1].ok);
        CHECK(v[k - 1].min_ratio >= 2.0);
    }
    std::vector<ExpansionTriple> forties(10, {20, 20, -1});
    for (const auto& g : verify_growth(forties))
        if (g.k >= 2) CHECK(g.min_ratio >= 20.0);
    auto single = verify_growth({{3, 4, 1}}, LengthTriple{1, 2, 1});
    CHECK(single.size() == 1);
    CHECK(single[0].k == 1);
}

TEST_CASE("beta expansion check") {
    std::vector<ExpansionTriple> forty(10, {20, 20, 1});
    CHECK(beta_expansion_check(forty, kDefaultInit, 1, 19));
    std::vector<ExpansionTriple> four(10, {2, 2, -1});
    CHECK_FALSE(beta_expansion_check(four, kDefaultInit, 1, 20));
    // s = depth: the only window is based at k = 0
    CHECK(beta_expansion_check(forty, kDefaultInit, 10, 2));
    CHECK_FALSE(beta_expansion_check(forty, kDefaultInit, 10, 1e6));
    CHECK_THROWS(beta_expansion_check(forty, kDefaultInit, 11, 2));
}
