#include "mfzeta/oracle.hpp"
#include "mfzeta/verify.hpp"
#include "mfzeta/zeta.hpp"

#include <gtest/gtest.h>

using namespace mfzeta;
using systems::q;

namespace {

const double log32 = std::log(2.0) / std::log(3.0);

mpz_class pw(long b, long e) { return detail::zpow(b, e); }

// multiplicities of an oracle sequence indexed by n with length base^n
std::map<long, mpz_class> by_power(const AlphaLengthSequence& s, const ExactRational& base) {
    std::map<long, mpz_class> out;
    for (const auto& t : s.terms) {
        ExactRational l = base;
        long n = 1;
        while (l > t.length) {
            l *= base;
            ++n;
        }
        EXPECT_EQ(l, t.length) << "length " << t.length.str() << " is not a power of " << base.str();
        out[n] = t.multiplicity;
    }
    return out;
}

}  // namespace

TEST(Polynomial, Arithmetic) {
    auto p = detail::poly({1, -1, -1});
    auto d = detail::poly({1, -1});
    auto [qq, r] = (p * d).divmod(d);
    EXPECT_EQ(qq, p);
    EXPECT_TRUE(r.is_zero());
    EXPECT_EQ(gcd(p * d, d * d), d.monic());
    EXPECT_EQ(p.str(), "1 - z - z^2");
}

TEST(Polynomial, Roots) {
    auto p = detail::poly({-6, 11, -6, 1});  // (z-1)(z-2)(z-3)
    auto rr = p.rational_roots();
    ASSERT_EQ(rr.size(), 3u);
    EXPECT_EQ(rr[0], 1);
    EXPECT_EQ(rr[2], 3);
    auto half = Polynomial({mpq_class(1), mpq_class(-2)});
    ASSERT_EQ(half.rational_roots().size(), 1u);
    EXPECT_EQ(half.rational_roots()[0], mpq_class(1, 2));
    auto cr = detail::poly({1, -1, -1}).complex_roots();
    ASSERT_EQ(cr.size(), 2u);
    double phi = (1 + std::sqrt(5.0)) / 2;
    std::vector<double> re{cr[0].real(), cr[1].real()};
    std::sort(re.begin(), re.end());
    EXPECT_NEAR(re[0], -phi, 1e-14);
    EXPECT_NEAR(re[1], 1 / phi, 1e-14);
    EXPECT_TRUE(detail::poly({1, 1}).rational_roots() == std::vector<mpq_class>{mpq_class(-1)});
}

TEST(RationalZeta, Normalises) {
    // (z - z^2) / (1 - z)^2 should reduce to z / (1 - z)
    auto rz = RationalZeta::make(detail::poly({0, 1, -1}), detail::poly({1, -2, 1}), q("1/3"), "t");
    EXPECT_EQ(rz.den, detail::poly({1, -1}));
    EXPECT_EQ(rz.num, detail::poly({0, 1}));
    EXPECT_THROW(RationalZeta::make(detail::poly({1}), detail::poly({0, 1}), q("1/2"), "t"), std::domain_error);
    EXPECT_THROW(RationalZeta::make(detail::poly({1}), detail::poly({1}), q("3/2"), "t"), std::domain_error);
}

TEST(ClosedForms, StringsAndSigma1) {
    auto cs = closed_form_zeta(StringSpec{StringFamily::cantor});
    EXPECT_NEAR(cs(1.0).real(), 1.0, 1e-14);
    auto fs = closed_form_zeta(StringSpec{StringFamily::fibonacci});
    EXPECT_NEAR(fs(2.0).real(), 16.0 / 11.0, 1e-14);
    auto s1 = closed_form_zeta(AtomicMeasureSpec::sigma1(), RegularityKey::fraction(1, 2));
    EXPECT_NEAR(s1(1.0).real(), 0.125, 1e-15);
    EXPECT_EQ(s1.base, q("1/9"));
    EXPECT_EQ(s1.num, detail::poly({0, 1}));
    EXPECT_EQ(s1.den, detail::poly({1, -1}));
    auto lvl = closed_form_zeta(AtomicMeasureSpec::sigma1(), RegularityKey::one_plus_log(3));
    EXPECT_TRUE(lvl.entire());
    EXPECT_NEAR(lvl(1.0).real(), 1.0 / 27, 1e-15);
    EXPECT_THROW(closed_form_zeta(AtomicMeasureSpec::sigma1(), RegularityKey::fraction(3, 2)), std::invalid_argument);
}

TEST(ClosedForms, Sigma2) {
    auto z = closed_form_zeta(AtomicMeasureSpec::sigma2(), RegularityKey::fraction(1, 1));
    EXPECT_EQ(z.num, detail::poly({0, 3}));
    EXPECT_EQ(z.den, detail::poly({1, -2}));
    EXPECT_EQ(z.base, q("1/3"));
    EXPECT_EQ(z.at_zero(), ExactRational(-3));
    auto w = closed_form_zeta(AtomicMeasureSpec::sigma2(), RegularityKey::fraction(2, 3));
    EXPECT_EQ(w.at_zero().to_double(), 2.0 / (1 - 4.0));
}

// Every atomic closed form against the oracle's alpha-lengths.
TEST(ClosedForms, AtomicMatchesOracle) {
    struct Case {
        AtomicMeasureSpec spec;
        RegularityKey key;
        long depth;
    };
    std::vector<Case> cases{{AtomicMeasureSpec::sigma1(), RegularityKey::fraction(1, 3), 9},
                            {AtomicMeasureSpec::sigma2(), RegularityKey::fraction(1, 1), 6},
                            {AtomicMeasureSpec::sigma2(), RegularityKey::fraction(1, 2), 6},
                            {AtomicMeasureSpec::sigma2(), RegularityKey::fraction(2, 3), 6},
                            {AtomicMeasureSpec::generalized(3), RegularityKey::fraction(1, 1), 4},
                            {AtomicMeasureSpec::generalized(3), RegularityKey::fraction(1, 2), 4},
                            {AtomicMeasureSpec::generalized(4), RegularityKey::fraction(1, 1), 3}};
    for (const auto& c : cases) {
        auto rz = closed_form_zeta(c.spec, c.key);
        auto ser = atomic_series(c.spec, c.key);
        EXPECT_EQ(ser.base_length, rz.base);
        auto got = by_power(empirical_alpha_lengths(c.spec, c.key, c.depth), rz.base);
        ASSERT_FALSE(got.empty()) << c.spec.name() << " " << c.key.str();
        for (const auto& [n, m] : got) {
            EXPECT_EQ(multiplicity(ser, n), m) << c.spec.name() << " " << c.key.str() << " n=" << n;
        }
        // the series law and the rational form expand alike
        cplx s(1.3, 0.7);
        EXPECT_NEAR(std::abs(partial_sum(ser, s, 400) - rz(s)), 0, 1e-10);
    }
}

TEST(ClosedForms, GeneralizedAlphaOne) {
    for (long m : {2, 3, 5}) {
        auto spec = AtomicMeasureSpec::generalized(m);
        auto z = closed_form_zeta(spec, RegularityKey::fraction(1, 1));
        EXPECT_EQ(z.base, ExactRational(1, 2 * m - 1));
        EXPECT_EQ(z.den, detail::poly({1, -m}));
        EXPECT_EQ(z.num, detail::poly({0, 2 * m - 1}));
    }
}

TEST(Multinomial, BetaCentralBinomial) {
    auto z = multinomial_zeta(systems::beta(), {1, 1});
    EXPECT_EQ(z.base_length, q("1/9"));
    for (long n = 1; n <= 30; ++n) EXPECT_EQ(multiplicity(z, n), binomial(2 * n, n));
    auto got = by_power(empirical_alpha_lengths(systems::beta(), RegularityKey::vector({1, 1}), 10), q("1/9"));
    for (const auto& [n, m] : got) EXPECT_EQ(multiplicity(z, n), m);
}

TEST(Multinomial, GeneralKeysMatchOracle) {
    auto beta0 = systems::beta0();
    for (const auto& k : primitive_vectors(2, 4)) {
        auto z = multinomial_zeta(beta0, k);
        auto got = by_power(empirical_alpha_lengths(beta0, RegularityKey::vector(k), 12), z.base_length);
        EXPECT_EQ(long(got.size()), 12 / vector_sum(k));
        for (const auto& [n, m] : got) EXPECT_EQ(multiplicity(z, n), m);
    }
}

TEST(Multinomial, RefusesWithoutH) {
    EXPECT_THROW(multinomial_zeta(systems::trident(), {1, 1, 0}), std::invalid_argument);
}

TEST(Collapsed, TridentLaw) {
    auto tri = systems::trident();
    for (const auto& kp : primitive_vectors(2, 4)) {
        auto z = collapsed_zeta(tri, kp);
        long K = vector_sum(kp);
        EXPECT_EQ(z.base_length, ExactRational(1, 5).pow(K));
        for (long n = 1; n <= 5; ++n)
            EXPECT_EQ(multiplicity(z, n), binomial(n * K, n * kp[1]) * pw(2, n * kp[0]));
        auto got = by_power(empirical_alpha_lengths(tri, RegularityKey::collapsed(kp), 8), z.base_length);
        for (const auto& [n, m] : got) EXPECT_EQ(multiplicity(z, n), m);
    }
}

TEST(UnitVector, GeometricSeries) {
    auto beta = systems::beta();
    auto rz = closed_form_zeta(beta, {1, 0});
    EXPECT_NEAR(rz(2.0).real(), (1.0 / 9) / (1 - 1.0 / 9), 1e-15);
    auto z = multinomial_zeta(beta, {1, 0});
    for (long n = 1; n <= 10; ++n) EXPECT_EQ(multiplicity(z, n), 1);
    EXPECT_NEAR(std::abs(eval_series(z, 2.0).value - rz(2.0)), 0, 1e-12);
}

TEST(FibRecovery, AlphaOneClass) {
    auto rz = closed_form_zeta(systems::fibrec(), {1, 0, 0});
    EXPECT_EQ(rz.base, q("1/2"));
    EXPECT_EQ(rz.num, detail::poly({0, 1, 1}));
    EXPECT_EQ(rz.den, detail::poly({1, -1, -1}));
    // also reachable from the other alpha = 1 representative
    auto rz2 = closed_form_zeta(systems::fibrec(), {0, 1, 0});
    EXPECT_EQ(rz2.num, rz.num);
    EXPECT_THROW(closed_form_zeta(systems::fibrec(), {1, 1, 1}), std::invalid_argument);
}

TEST(FloorSum, FibonacciNumbers) {
    auto z = string_series(StringSpec{StringFamily::fibonacci});
    for (long n = 1; n <= 30; ++n) EXPECT_EQ(multiplicity(z, n), fibonacci(n + 1)) << n;
}

TEST(Series, EvalMatchesLongPartialSum) {
    auto z = multinomial_zeta(systems::beta(), {1, 1});
    auto v = eval_series(z, 0.8);
    EXPECT_LE(v.tail_bound, 1e-12);
    auto brute = partial_sum(z, 0.8, 10000);
    EXPECT_NEAR(v.value.real(), brute.real(), 1e-10);
    auto c = eval_series(z, cplx(0.9, 5));
    EXPECT_NEAR(std::abs(c.value - partial_sum(z, cplx(0.9, 5), 10000)), 0, 1e-10);
}

TEST(Series, DivergesLeftOfAbscissa) {
    auto z = multinomial_zeta(systems::beta(), {1, 1});
    EXPECT_THROW(eval_series(z, 0.5), DivergenceError);
    EXPECT_THROW(eval_series(z, log32 + 1e-7, 1e-12, 1000), DivergenceError);
}

TEST(Abscissa, RootTestConverges) {
    auto beta = systems::beta();
    auto z = multinomial_zeta(beta, {1, 1});
    EXPECT_NEAR(abscissa_root_test(z, 2000).value, log32, 0.01);
    EXPECT_NEAR(abscissa_closed(beta, {1, 1}).value, log32, 1e-14);

    for (long K = 1; K <= 4; ++K)
        for (long k1 = 1; k1 <= K; ++k1) {
            SeriesZeta s;
            s.base_length = ExactRational(1, 3).pow(K);
            s.law = GeometricLaw{q("1/2"), pw(2, k1)};
            EXPECT_NEAR(abscissa_root_test(s, 2000).value, double(k1) / K * log32, 0.01);
        }

    SeriesZeta one;
    one.base_length = q("1/3");
    one.law = GeometricLaw{q("1"), mpz_class(1)};
    EXPECT_EQ(abscissa_root_test(one, 2000).value, 0);
}

TEST(Abscissa, ClosedSolvesItsEquation) {
    for (const auto& ifs : {systems::beta(), systems::beta0(), systems::fibrec()})
        for (const auto& k : primitive_vectors(ifs.N(), 5))
            EXPECT_LE(std::abs(abscissa_residual(ifs, k, abscissa_closed(ifs, k).value)), 1e-12);
    auto tri = systems::trident();
    for (const auto& kp : primitive_vectors(2, 6))
        EXPECT_LE(std::abs(abscissa_residual_collapsed(tri, kp, abscissa_closed_collapsed(tri, kp).value)), 1e-12);
}
