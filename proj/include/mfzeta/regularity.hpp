#pragma once

#include "mfzeta/ifs.hpp"
#include "mfzeta/log_ratio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

namespace mfzeta {

using ExponentVector = std::vector<long>;

enum class KeyKind { vector, collapsed, fraction, one_plus_log, value, infinite };

struct RegularityKey {
    KeyKind kind = KeyKind::infinite;
    ExponentVector vec;  // vector, collapsed
    long num = 0, den = 1;  // fraction
    long level = 0;  // one_plus_log: 1 + log_{3^level} 2
    std::string repr;  // value

    static RegularityKey vector(ExponentVector v) { return {KeyKind::vector, std::move(v), 0, 1, 0, {}}; }
    static RegularityKey collapsed(ExponentVector v) { return {KeyKind::collapsed, std::move(v), 0, 1, 0, {}}; }
    static RegularityKey fraction(long p, long q) {
        long g = std::gcd(p, q);
        if (g == 0) g = 1;
        if (q < 0) g = -g;
        return {KeyKind::fraction, {}, p / g, q / g, 0, {}};
    }
    static RegularityKey one_plus_log(long n) { return {KeyKind::one_plus_log, {}, 0, 1, n, {}}; }
    static RegularityKey value(std::string r) { return {KeyKind::value, {}, 0, 1, 0, std::move(r)}; }
    static RegularityKey infinite() { return {}; }

    std::string str() const {
        auto join = [](const ExponentVector& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
            return s;
        };
        switch (kind) {
            case KeyKind::vector: return "(" + join(vec) + ")";
            case KeyKind::collapsed: return "c(" + join(vec) + ")";
            case KeyKind::fraction:
                return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
            case KeyKind::one_plus_log: return "1+log_{3^" + std::to_string(level) + "}2";
            case KeyKind::value: return repr;
            default: return "inf";
        }
    }

    friend bool operator<(const RegularityKey& a, const RegularityKey& b) {
        return std::tie(a.kind, a.vec, a.num, a.den, a.level, a.repr) <
               std::tie(b.kind, b.vec, b.num, b.den, b.level, b.repr);
    }
    friend bool operator==(const RegularityKey& a, const RegularityKey& b) {
        return std::tie(a.kind, a.vec, a.num, a.den, a.level, a.repr) ==
               std::tie(b.kind, b.vec, b.num, b.den, b.level, b.repr);
    }
    friend bool operator!=(const RegularityKey& a, const RegularityKey& b) { return !(a == b); }
};

inline long vector_gcd(const ExponentVector& k) {
    long g = 0;
    for (long x : k) g = std::gcd(g, x);
    return g;
}

inline ExponentVector primitive_of(const ExponentVector& k) {
    long g = vector_gcd(k);
    ExponentVector r = k;
    if (g > 1)
        for (auto& x : r) x /= g;
    return r;
}

inline long vector_sum(const ExponentVector& k) { return std::accumulate(k.begin(), k.end(), 0L); }

// Order used to pick a class representative: smaller total first, then lexicographic.
inline bool representative_less(const ExponentVector& a, const ExponentVector& b) {
    long sa = vector_sum(a), sb = vector_sum(b);
    return sa != sb ? sa < sb : a < b;
}

struct RegularityClass {
    RegularityKey key;
    LogRatio alpha_exact;
    double alpha_float = 0;
    long K = 0;
};

inline RegularityClass regularity_of(const WeightedIFS& ifs, const ExponentVector& k) {
    if (k.size() != ifs.N()) throw std::invalid_argument("exponent vector has wrong length");
    if (std::any_of(k.begin(), k.end(), [](long x) { return x < 0; }))
        throw std::invalid_argument("exponent vector has a negative entry");
    if (vector_sum(k) == 0) throw std::invalid_argument("regularity_of requires k != 0");
    RegularityClass c;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] == 0) continue;  // 0 log 0 = 0
        c.alpha_exact.num += ifs.prob_factors()[i].scaled(k[i]);
        c.alpha_exact.den += ifs.ratio_factors()[i].scaled(k[i]);
    }
    c.alpha_float = c.alpha_exact.value();
    c.K = vector_sum(k);
    c.key = RegularityKey::vector(primitive_of(k));
    return c;
}

inline std::vector<ExponentVector> primitive_vectors(std::size_t N, long K_max) {
    if (N < 2 || K_max < 1) throw std::invalid_argument("primitive_vectors needs N >= 2, K_max >= 1");
    std::vector<ExponentVector> out;
    ExponentVector cur(N, 0);
    auto rec = [&](auto&& self, std::size_t i, long left) -> void {
        if (i == N) {
            if (vector_sum(cur) >= 1 && vector_gcd(cur) == 1) out.push_back(cur);
            return;
        }
        for (long v = 0; v <= left; ++v) {
            cur[i] = v;
            self(self, i + 1, left - v);
        }
        cur[i] = 0;
    };
    rec(rec, 0, K_max);
    return out;
}

inline bool near_equal(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

struct HypothesisReport {
    bool holds = true;
    long K_max = 0;
    std::size_t vectors_checked = 0;
    std::vector<std::pair<ExponentVector, ExponentVector>> collisions;
    std::vector<std::pair<ExponentVector, ExponentVector>> ambiguous;
};

inline HypothesisReport check_hypothesis_H(const WeightedIFS& ifs, long K_max,
                                           const PrecisionLadder& ladder = {}) {
    HypothesisReport rep;
    rep.K_max = K_max;
    auto vecs = primitive_vectors(ifs.N(), K_max);
    rep.vectors_checked = vecs.size();
    std::vector<RegularityClass> cls;
    cls.reserve(vecs.size());
    for (const auto& v : vecs) cls.push_back(regularity_of(ifs, v));
    std::vector<std::size_t> idx(cls.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return cls[a].alpha_float < cls[b].alpha_float; });
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i + 1;
        while (j < idx.size() && near_equal(cls[idx[j - 1]].alpha_float, cls[idx[j]].alpha_float)) ++j;
        // Cluster [i, j): split into exact classes by the ladder.
        std::vector<std::size_t> reps;
        for (std::size_t t = i; t < j; ++t) {
            const auto& c = cls[idx[t]];
            bool placed = false;
            for (std::size_t r : reps) {
                try {
                    if (equal(cls[r].alpha_exact, c.alpha_exact, ladder)) {
                        rep.collisions.emplace_back(cls[r].key.vec, c.key.vec);
                        placed = true;
                        break;
                    }
                } catch (const RegularityAmbiguity&) {
                    rep.ambiguous.emplace_back(cls[r].key.vec, c.key.vec);
                }
            }
            if (!placed) reps.push_back(idx[t]);
        }
        i = j;
    }
    auto by_vec = [](const auto& a, const auto& b) { return a < b; };
    std::sort(rep.collisions.begin(), rep.collisions.end(), by_vec);
    std::sort(rep.ambiguous.begin(), rep.ambiguous.end(), by_vec);
    rep.holds = rep.collisions.empty() && rep.ambiguous.empty();
    return rep;
}

inline ExponentVector collapse_vector(const CollapsedProbabilities& c, const ExponentVector& k) {
    ExponentVector kp(c.w, 0);
    for (std::size_t i = 0; i < k.size(); ++i) kp[c.class_of[i]] += k[i];
    return kp;
}

// alpha(k') = (1/K) log_r(prod p'_q^{k'_q}) for a single-ratio system.
inline RegularityClass collapsed_regularity(const WeightedIFS& ifs, const ExponentVector& kprime) {
    if (!ifs.single_ratio()) throw std::invalid_argument("collapsed regularity needs all ratios equal");
    auto c = collapse_probabilities(ifs);
    if (kprime.size() != c.w) throw std::invalid_argument("collapsed vector has wrong length");
    if (std::any_of(kprime.begin(), kprime.end(), [](long x) { return x < 0; }) || vector_sum(kprime) == 0)
        throw std::invalid_argument("collapsed vector must be nonnegative and nonzero");
    auto ind = check_rational_independence(c.distinct);
    if (!ind.independent) throw std::invalid_argument("distinct probabilities are rationally dependent");
    RegularityClass rc;
    rc.K = vector_sum(kprime);
    for (std::size_t q = 0; q < c.w; ++q)
        if (kprime[q]) rc.alpha_exact.num += factorize(c.distinct[q]).scaled(kprime[q]);
    rc.alpha_exact.den = ifs.ratio_factors()[0].scaled(rc.K);
    rc.alpha_float = rc.alpha_exact.value();
    rc.key = RegularityKey::collapsed(primitive_of(kprime));
    return rc;
}

// p_i = r_i^D for one common D, decided exactly.
inline bool is_monofractal(const WeightedIFS& ifs, const PrecisionLadder& ladder = {}) {
    LogRatio first{ifs.prob_factors()[0], ifs.ratio_factors()[0]};
    for (std::size_t i = 1; i < ifs.N(); ++i)
        if (!equal(first, LogRatio{ifs.prob_factors()[i], ifs.ratio_factors()[i]}, ladder)) return false;
    return true;
}

}  // namespace mfzeta
