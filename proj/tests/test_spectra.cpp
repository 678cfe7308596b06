#include "mfzeta/spectra.hpp"
#include "mfzeta/verify.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mfzeta;
using systems::q;

namespace {

const double log32 = std::log(2.0) / std::log(3.0);
const double log53 = std::log(3.0) / std::log(5.0);

double entropy2(double p) { return -(p * std::log2(p) + (1 - p) * std::log2(1 - p)); }

}  // namespace

TEST(Moran, Examples) {
    EXPECT_NEAR(moran_dimension({1.0 / 3, 1.0 / 3}), 0.6309297536, 1e-10);
    EXPECT_NEAR(moran_dimension({1.0 / 3, 1.0 / 3}), log32, 1e-12);
    EXPECT_NEAR(moran_dimension({0.2, 0.2, 0.2}), log53, 1e-12);
    EXPECT_NEAR(moran_dimension({0.5, 0.5}), 1.0, 1e-12);
    // 2^-s + 4^-s = 1 at s = log2(phi)
    EXPECT_NEAR(moran_dimension({0.5, 0.25}), std::log2((1 + std::sqrt(5.0)) / 2), 1e-12);
}

TEST(Besicovitch, Examples) {
    EXPECT_NEAR(besicovitch_dimension({1.0 / 3, 1.0 / 3}, {0.5, 0.5}), log32, 1e-13);
    EXPECT_NEAR(besicovitch_dimension({0.5, 0.5}, {0.25, 0.75}), entropy2(0.25), 1e-13);
    EXPECT_NEAR(besicovitch_dimension({0.5, 0.5}, {0.25, 0.75}), 0.8113, 1e-4);
    for (int N = 2; N <= 6; ++N)
        EXPECT_NEAR(besicovitch_dimension(std::vector<double>(N, 1.0 / N), std::vector<double>(N, 1.0 / N)), 1.0,
                    1e-14);
}

TEST(Legendre, BExamples) {
    for (double qq : {-5.0, -1.0, 0.0, 0.5, 2.0, 7.5}) EXPECT_NEAR(solve_b({0.5, 0.5}, {0.5, 0.5}, qq), 1 - qq, 1e-12);
    EXPECT_NEAR(solve_b({1.0 / 3, 2.0 / 3}, {1.0 / 3, 1.0 / 3}, 0), log32, 1e-12);
    EXPECT_NEAR(solve_b({1.0 / 3, 2.0 / 3}, {0.5, 0.5}, 1), 0, 1e-12);
}

TEST(Legendre, ResidualsOnGrid) {
    for (const auto& ifs : {systems::beta(), systems::beta0(), systems::trident(), systems::fibrec()}) {
        auto L = legendre_transform(ifs, default_q_grid());
        for (double r : L.residuals) EXPECT_LE(r, 1e-12);
        ASSERT_EQ(L.q_grid.size(), 321u);
        // b decreasing, t = -b' inside [t_min, t_max]
        auto tr = t_range(ifs);
        for (std::size_t i = 1; i < L.q_grid.size(); ++i) EXPECT_LT(L.b_values[i], L.b_values[i - 1]);
        for (double t : L.t_values) {
            EXPECT_GE(t, tr.t_min - 1e-9);
            EXPECT_LE(t, tr.t_max + 1e-9);
        }
    }
    EXPECT_TRUE(legendre_transform(systems::monofractal(), default_q_grid()).degenerate);
}

TEST(Legendre, ThreadsDoNotChangeResults) {
    auto a = legendre_transform(systems::trident(), default_q_grid(), 1e-4, 1);
    auto b = legendre_transform(systems::trident(), default_q_grid(), 1e-4, 4);
    EXPECT_EQ(a.b_values, b.b_values);
    EXPECT_EQ(a.b_star_values, b.b_star_values);
}

TEST(TRange, BetaZero) {
    auto r = t_range(systems::beta0());
    EXPECT_NEAR(r.t_min, std::log2(3.0) - 1, 1e-14);
    EXPECT_NEAR(r.t_max, std::log2(3.0), 1e-14);
}

TEST(Envelope, Collinear) {
    auto e = concave_envelope(std::vector<std::pair<double, double>>{{0, 0}, {1, 1}, {2, 2}, {3, 3}});
    EXPECT_EQ(e.breakpoints.size(), 2u);
    for (double t = 0; t <= 3; t += 0.25) EXPECT_NEAR(e(t), t, 1e-15);
    EXPECT_THROW(e(3.5), std::out_of_range);
    EXPECT_THROW(concave_envelope(std::vector<std::pair<double, double>>{{0, 1}}), std::invalid_argument);
}

TEST(Envelope, IsConcaveAndDominates) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::pair<double, double>> pts;
        for (int i = 0; i < 40; ++i) pts.emplace_back(u(rng), u(rng));
        auto e = concave_envelope(pts);
        for (const auto& [x, y] : pts) EXPECT_GE(e(x) + 1e-12, y);
        for (std::size_t i = 2; i < e.breakpoints.size(); ++i) {
            auto [x0, y0] = e.breakpoints[i - 2];
            auto [x1, y1] = e.breakpoints[i - 1];
            auto [x2, y2] = e.breakpoints[i];
            EXPECT_GT((y1 - y0) / (x1 - x0), (y2 - y1) / (x2 - x1));
        }
    }
}

TEST(Sweep, PointwiseValues) {
    SpectrumOptions opt;
    opt.K_max = 8;
    auto b0 = spectrum_sweep(systems::beta0(), opt);
    auto b = spectrum_sweep(systems::beta(), opt);
    auto at = [](const SpectrumResult& r, const RegularityKey& k) {
        for (const auto& p : r.points)
            if (p.key == k) return p;
        ADD_FAILURE() << "missing " << k.str();
        return SpectrumPoint{};
    };
    EXPECT_NEAR(at(b0, RegularityKey::vector({1, 1})).f, 1.0, 1e-12);
    EXPECT_NEAR(at(b, RegularityKey::vector({1, 1})).f, log32, 1e-12);
    EXPECT_NEAR(at(b, RegularityKey::vector({1, 1})).f, 0.63093, 1e-5);
    // binary entropy form at rational alpha
    for (const auto& p : b0.points) {
        double x = double(p.key.vec[0]) / vector_sum(p.key.vec);
        double h = (x == 0 || x == 1) ? 0 : entropy2(x);
        EXPECT_NEAR(p.f, h, 1e-12) << p.key.str();
    }
    EXPECT_EQ(b.method, SpectrumMethod::distinct_regularity);
}

TEST(Sweep, BetaPointCount) {
    SpectrumOptions opt;
    auto r = spectrum_sweep(systems::beta(), opt);
    EXPECT_EQ(r.points.size(), primitive_vectors(2, 64).size());
}

TEST(Sweep, MonofractalSinglePoint) {
    SpectrumOptions opt;
    opt.K_max = 10;
    auto r = spectrum_sweep(systems::monofractal(), opt);
    ASSERT_EQ(r.points.size(), 1u);
    EXPECT_NEAR(r.points[0].alpha, log32, 1e-13);
    EXPECT_NEAR(r.points[0].f, log32, 1e-13);
    EXPECT_FALSE(r.warnings.empty());
    EXPECT_EQ(r.method, SpectrumMethod::monofractal);
}

TEST(Sweep, TridentMaximum) {
    SpectrumOptions opt;
    opt.K_max = 30;
    auto r = spectrum_sweep(systems::trident(), opt);
    EXPECT_EQ(r.method, SpectrumMethod::collapsed);
    double best = -1;
    RegularityKey arg;
    for (const auto& p : r.points)
        if (p.f > best) {
            best = p.f;
            arg = p.key;
        }
    EXPECT_NEAR(best, log53, 1e-9);
    EXPECT_EQ(arg, RegularityKey::collapsed({2, 1}));
    EXPECT_NEAR(best, 0.68261, 1e-5);
}

TEST(Sweep, FibRecoveryFallsBackToOracle) {
    SpectrumOptions opt;
    opt.K_max = 6;
    opt.fallback_depth = 10;
    auto r = spectrum_sweep(systems::fibrec(), opt);
    EXPECT_EQ(r.method, SpectrumMethod::oracle_fallback);
    EXPECT_FALSE(r.warnings.empty());
    EXPECT_FALSE(r.points.empty());
}

TEST(Sweep, AtomicFamilies) {
    SpectrumOptions opt;
    opt.K_max = 12;
    auto s1 = spectrum_sweep(AtomicMeasureSpec::sigma1(), opt);
    for (const auto& p : s1.points) EXPECT_EQ(p.f, 0);
    auto s2 = spectrum_sweep(AtomicMeasureSpec::sigma2(), opt);
    for (const auto& p : s2.points) EXPECT_NEAR(p.f, p.alpha * log32, 1e-12);
    auto g5 = spectrum_sweep(AtomicMeasureSpec::generalized(5), opt);
    for (const auto& p : g5.points) EXPECT_NEAR(p.f, p.alpha * std::log(5.0) / std::log(9.0), 1e-12);
}

TEST(Sweep, Deterministic) {
    SpectrumOptions a, b;
    a.K_max = b.K_max = 20;
    b.threads = 4;
    auto x = spectrum_sweep(systems::trident(), a);
    auto y = spectrum_sweep(systems::trident(), b);
    ASSERT_EQ(x.points.size(), y.points.size());
    for (std::size_t i = 0; i < x.points.size(); ++i) {
        EXPECT_EQ(x.points[i].alpha, y.points[i].alpha);
        EXPECT_EQ(x.points[i].f, y.points[i].f);
    }
}

TEST(InformationDimension, BetaZero) {
    // the hull meets the diagonal at the entropy of p in base 2
    SpectrumOptions opt;
    auto r = spectrum_sweep(systems::beta0(), opt);
    double want = entropy2(1.0 / 3);
    EXPECT_NEAR(information_dimension(concave_envelope(r.points)), want, 5e-3);
}
