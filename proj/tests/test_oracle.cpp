#include "mfzeta/oracle.hpp"
#include "mfzeta/verify.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace mfzeta;
using systems::q;

namespace {

const IntervalRecord* find_k(const std::vector<IntervalRecord>& v, const ExponentVector& k) {
    for (const auto& r : v)
        if (r.k == k) return &r;
    return nullptr;
}

}  // namespace

TEST(Oracle, BetaStageFive) {
    auto st = enumerate_stage(systems::beta(), 5);
    EXPECT_EQ(st.intervals.size(), 6u);
    auto* r = find_k(st.intervals, {3, 2});
    ASSERT_NE(r, nullptr);
    EXPECT_EQ(r->count, 10);
    EXPECT_EQ(r->mass, q("1/27") * q("4/9"));
    EXPECT_EQ(r->length, q("1/243"));
}

TEST(Oracle, StageOneIsTheMaps) {
    for (const auto& ifs : {systems::beta0(), systems::trident(), systems::fibrec()}) {
        auto st = enumerate_stage(ifs, 1);
        ASSERT_EQ(st.intervals.size(), ifs.N());
        for (std::size_t i = 0; i < ifs.N(); ++i) {
            ExponentVector e(ifs.N(), 0);
            e[i] = 1;
            auto* r = find_k(st.intervals, e);
            ASSERT_NE(r, nullptr);
            EXPECT_EQ(r->mass, ifs.probs()[i]);
            EXPECT_EQ(r->length, ifs.ratios()[i]);
            EXPECT_EQ(r->count, 1);
        }
    }
}

TEST(Oracle, TridentStageTwo) {
    auto st = enumerate_stage(systems::trident(), 2);
    EXPECT_EQ(st.intervals.size(), 6u);
    mpz_class total = 0;
    for (const auto& r : st.intervals) total += r.count;
    EXPECT_EQ(total, 9);
}

// Word-by-word enumeration independently of the aggregated records.
TEST(Oracle, AggregatesMatchWords) {
    for (const auto& ifs : {systems::beta(), systems::trident(), systems::fibrec()}) {
        const long K = 6;
        std::map<std::pair<long, ExponentVector>, mpz_class> by_k;
        std::map<long, mpq_class> mass_at;
        for_each_word(ifs, K, [&](const std::vector<int>& w, const ExponentVector& c, const mpq_class&,
                                  const mpq_class& len, const mpq_class& mass) {
            by_k[{long(w.size()), c}] += 1;
            mass_at[long(w.size())] += mass;
            EXPECT_EQ(ExactRational(len), detail::power_product(ifs.ratios(), c));
        });
        for (long n = 1; n <= K; ++n) {
            EXPECT_EQ(mass_at[n], 1);
            auto st = enumerate_stage(ifs, n);
            ExactRational m(0);
            for (const auto& r : st.intervals) {
                EXPECT_EQ((by_k[{n, r.k}]), r.count);
                m += r.mass * ExactRational(mpq_class(r.count));
            }
            EXPECT_EQ(m, ExactRational(1));
        }
    }
}

// Intervals plus gaps of a stage tile [0,1].
TEST(Oracle, GapsTileTheUnitInterval) {
    for (const auto& ifs : {systems::beta(), systems::trident(), systems::fibrec(), systems::beta0()}) {
        for (long n = 1; n <= 7; ++n) {
            ExactRational total(0);
            for (const auto& r : enumerate_stage(ifs, n).all()) total += r.length * ExactRational(mpq_class(r.count));
            EXPECT_EQ(total, ExactRational(1)) << n;
        }
    }
}

TEST(Oracle, BudgetIsEnforced) {
    EXPECT_THROW(enumerate_stage(systems::trident(), 12, 10), BudgetExceeded);
    EXPECT_THROW(for_each_word(systems::trident(), 30, [](auto&&...) {}), BudgetExceeded);
}

TEST(Oracle, GroupingMergesMultiples) {
    auto recs = enumerate_stage(systems::beta(), 3).all();
    auto more = enumerate_stage(systems::beta(), 6).all();
    recs.insert(recs.end(), more.begin(), more.end());
    auto g = group_by_regularity(recs);
    ASSERT_TRUE(g.count(RegularityKey::vector({1, 2})));
    // k=(1,2) at stage 3 and k=(2,4) at stage 6 share one group
    const auto& grp = g.at(RegularityKey::vector({1, 2}));
    EXPECT_EQ(grp.lengths.size(), 2u);
    EXPECT_TRUE(g.count(RegularityKey::infinite()));
}

TEST(Oracle, TridentEqualRegularitiesMerge) {
    auto g = group_by_regularity(enumerate_stage(systems::trident(), 2).all());
    // (2,0,0), (1,0,1), (0,0,2) all have mass 1/25 and length 1/25
    int hits = 0;
    for (const auto& [k, grp] : g) {
        if (!grp.alpha_exact) continue;
        if (near_equal(grp.alpha_float, 1.0)) {
            ++hits;
            EXPECT_EQ(grp.lengths.at(q("1/25")), 4);
        }
    }
    EXPECT_EQ(hits, 1);
}

TEST(Oracle, AtomicStageOne) {
    auto s1 = atomic_stage(AtomicMeasureSpec::sigma1(), 1);
    auto g1 = group_by_regularity(s1);
    bool seen = false;
    for (const auto& r : s1)
        if (!r.gap && r.k == ExponentVector{1}) {
            EXPECT_EQ(r.mass, q("1/3"));
            seen = true;
        }
    EXPECT_TRUE(seen);
    EXPECT_TRUE(g1.count(RegularityKey::fraction(1, 1)));

    auto s2 = atomic_stage(AtomicMeasureSpec::sigma2(), 1);
    bool last = false;
    for (const auto& r : s2)
        if (r.k == ExponentVector{2}) {
            EXPECT_EQ(r.mass, q("1/3"));
            last = true;
        }
    EXPECT_TRUE(last);
}

TEST(Oracle, AtomicMassIsConserved) {
    for (const auto& spec : {AtomicMeasureSpec::sigma1(), AtomicMeasureSpec::sigma2(),
                             AtomicMeasureSpec::generalized(3)}) {
        for (long n = 1; n <= 5; ++n) {
            ExactRational m(0);
            for (const auto& r : atomic_stage(spec, n)) m += r.mass * ExactRational(mpq_class(r.count));
            EXPECT_EQ(m, atomic_total_mass(spec)) << spec.name() << " n=" << n;
        }
    }
}

TEST(Oracle, EmpiricalAlphaLengths) {
    auto a = empirical_alpha_lengths(AtomicMeasureSpec::sigma1(), RegularityKey::fraction(1, 2), 8);
    ASSERT_EQ(a.terms.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(a.terms[i].length, ExactRational(1, 9).pow(long(i) + 1));
        EXPECT_EQ(a.terms[i].multiplicity, 1);
    }

    auto b = empirical_alpha_lengths(AtomicMeasureSpec::sigma2(), RegularityKey::fraction(1, 1), 4);
    std::vector<long> want{3, 6, 12, 24};
    ASSERT_EQ(b.terms.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(b.terms[i].length, ExactRational(1, 3).pow(long(i) + 1));
        EXPECT_EQ(b.terms[i].multiplicity, want[i]);
    }

    auto c = empirical_alpha_lengths(systems::beta(), RegularityKey::vector({1, 1}), 8);
    std::vector<long> central{2, 6, 20, 70};
    ASSERT_EQ(c.terms.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(c.terms[i].length, ExactRational(1, 9).pow(long(i) + 1));
        EXPECT_EQ(c.terms[i].multiplicity, central[i]);
    }
}

TEST(Oracle, GapRecordsHaveInfiniteKey) {
    auto g = group_by_regularity(enumerate_stage(systems::beta(), 2).all());
    ASSERT_TRUE(g.count(RegularityKey::infinite()));
    EXPECT_FALSE(g.at(RegularityKey::infinite()).alpha_exact.has_value());
    EXPECT_EQ(RegularityKey::infinite().str(), "inf");
}
