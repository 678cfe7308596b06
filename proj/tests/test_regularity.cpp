#include "mfzeta/regularity.hpp"
#include "mfzeta/verify.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <set>

using namespace mfzeta;
using systems::q;

namespace {
const double log32 = std::log(2.0) / std::log(3.0);
const double log53 = std::log(3.0) / std::log(5.0);
}  // namespace

TEST(Regularity, BetaFormula) {
    auto beta = systems::beta();
    for (long K = 1; K <= 12; ++K)
        for (long k2 = 0; k2 <= K; ++k2) {
            auto rc = regularity_of(beta, {K - k2, k2});
            EXPECT_NEAR(rc.alpha_float, 1 - double(k2) / K * log32, 1e-13);
        }
}

TEST(Regularity, BetaZeroEndpoint) {
    auto rc = regularity_of(systems::beta0(), {0, 7});
    EXPECT_NEAR(rc.alpha_float, std::log2(3.0) - 1, 1e-13);
    EXPECT_EQ(rc.key.vec, (ExponentVector{0, 1}));
    EXPECT_EQ(rc.K, 7);
}

TEST(Regularity, MonofractalIsConstant) {
    auto mono = systems::monofractal();
    for (const auto& k : primitive_vectors(2, 8)) EXPECT_NEAR(regularity_of(mono, k).alpha_float, log32, 1e-13);
    EXPECT_TRUE(is_monofractal(mono));
    EXPECT_FALSE(is_monofractal(systems::beta()));
}

TEST(Regularity, ScaleInvariant) {
    // alpha(k) = alpha(nk), exactly
    for (const auto& ifs : {systems::beta(), systems::trident(), systems::fibrec()}) {
        for (const auto& k : primitive_vectors(ifs.N(), 4)) {
            auto a = regularity_of(ifs, k);
            for (long n = 2; n <= 4; ++n) {
                ExponentVector nk = k;
                for (auto& x : nk) x *= n;
                auto b = regularity_of(ifs, nk);
                EXPECT_TRUE(equal(a.alpha_exact, b.alpha_exact));
                EXPECT_EQ(a.key.vec, b.key.vec);
            }
        }
    }
}

TEST(Regularity, KeyStrings) {
    EXPECT_EQ(RegularityKey::vector({1, 2}).str(), "(1,2)");
    EXPECT_EQ(RegularityKey::collapsed({2, 1}).str(), "c(2,1)");
    EXPECT_EQ(RegularityKey::fraction(2, 4).str(), "1/2");
    EXPECT_EQ(RegularityKey::fraction(3, 3).str(), "1");
    EXPECT_EQ(RegularityKey::infinite().str(), "inf");
}

TEST(PrimitiveVectors, SmallCases) {
    auto a = primitive_vectors(2, 2);
    EXPECT_EQ(std::set<ExponentVector>(a.begin(), a.end()), (std::set<ExponentVector>{{0, 1}, {1, 0}, {1, 1}}));
    auto b = primitive_vectors(2, 3);
    EXPECT_EQ(std::set<ExponentVector>(b.begin(), b.end()),
              (std::set<ExponentVector>{{0, 1}, {1, 0}, {1, 1}, {1, 2}, {2, 1}}));
    auto c = primitive_vectors(3, 1);
    EXPECT_EQ(std::set<ExponentVector>(c.begin(), c.end()), (std::set<ExponentVector>{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}));
}

TEST(PrimitiveVectors, CountIsTotientSum) {
    // pairs with gcd 1 and sum <= K: 1 + sum_{n<=K} phi(n)
    auto phi = [](long n) {
        long r = 0;
        for (long i = 1; i <= n; ++i) r += std::gcd(i, n) == 1;
        return r;
    };
    long want = 1;
    for (long n = 1; n <= 64; ++n) want += phi(n);
    EXPECT_EQ(long(primitive_vectors(2, 64).size()), want);
    for (const auto& v : primitive_vectors(3, 9)) EXPECT_EQ(vector_gcd(v), 1);
}

TEST(HypothesisH, Examples) {
    EXPECT_TRUE(check_hypothesis_H(systems::beta0(), 20).holds);
    EXPECT_TRUE(check_hypothesis_H(systems::beta(), 20).holds);
    auto mono = check_hypothesis_H(systems::monofractal(), 6);
    EXPECT_FALSE(mono.holds);
    EXPECT_FALSE(mono.collisions.empty());
    auto fibrec = check_hypothesis_H(systems::fibrec(), 4);
    EXPECT_FALSE(fibrec.holds);
    bool pair_seen = false;
    for (const auto& [a, b] : fibrec.collisions) {
        std::set<ExponentVector> s{a, b};
        pair_seen = pair_seen || s == std::set<ExponentVector>{{1, 0, 0}, {0, 1, 0}};
    }
    EXPECT_TRUE(pair_seen);
    EXPECT_FALSE(check_hypothesis_H(systems::trident(), 4).holds);
}

TEST(Collapsed, TridentFormula) {
    auto tri = systems::trident();
    for (long K = 1; K <= 10; ++K)
        for (long k2 = 0; k2 <= K; ++k2) {
            auto rc = collapsed_regularity(tri, {K - k2, k2});
            EXPECT_NEAR(rc.alpha_float, 1 - double(k2) / K * log53, 1e-13);
        }
    EXPECT_NEAR(collapsed_regularity(tri, {1, 0}).alpha_float, 1.0, 1e-15);
    EXPECT_NEAR(collapsed_regularity(tri, {0, 1}).alpha_float, 1 - log53, 1e-13);
    EXPECT_NEAR(1 - log53, 0.3174, 1e-4);
}

TEST(Collapsed, VectorCollapse) {
    auto c = collapse_probabilities(systems::trident());
    EXPECT_EQ(collapse_vector(c, {2, 1, 3}), (ExponentVector{5, 1}));
}

TEST(EqualityLadder, DetectsEqualAndDistinct) {
    LogRatio a{factorize(q("1/4")), factorize(q("1/8"))};  // 2/3
    LogRatio b{factorize(q("1/16")), factorize(q("1/64"))};
    LogRatio c{factorize(q("1/3")), factorize(q("1/5"))};
    EXPECT_TRUE(equal(a, b));
    EXPECT_FALSE(equal(a, c));
    EXPECT_EQ(compare(a, c), a.value() < c.value() ? -1 : 1);
    EXPECT_TRUE(near_equal(1.0, 1.0 + 1e-12));
    EXPECT_FALSE(near_equal(1.0, 1.0 + 1e-6));
}

TEST(EqualityLadder, PythagoreanComma) {
    // 3^12 / 2^19 sits just above 1, so the numerators are tiny logs
    LogRatio x{factorize(ExactRational(mpz_class("531441"), mpz_class("524288"))), factorize(q("1/2"))};
    LogRatio y{factorize(ExactRational(mpz_class("531441"), mpz_class("524288")).pow(2)), factorize(q("1/4"))};
    EXPECT_TRUE(equal(x, y));
    LogRatio z{factorize(ExactRational(mpz_class("531442"), mpz_class("524288"))), factorize(q("1/2"))};
    EXPECT_FALSE(equal(x, z));
}
