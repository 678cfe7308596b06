#pragma once

#include "mfzeta/ifs.hpp"
#include "mfzeta/log_ratio.hpp"
#include "mfzeta/regularity.hpp"

#include <map>
#include <optional>
#include <unordered_map>
#include <variant>

namespace mfzeta {

struct IntervalRecord {
    long stage = 0;
    ExponentVector k;  // exponent vector (IFS), {cell index} (atomic), parent vector (gap)
    mpz_class count = 1;
    ExactRational mass, length;
    bool atomic = false;
    bool gap = false;  // zero mass
    long gap_level = 0;  // IFS gaps: construction level that created them
};

struct StageRecords {
    std::vector<IntervalRecord> intervals;
    std::vector<IntervalRecord> gaps;

    std::vector<IntervalRecord> all() const {
        auto r = intervals;
        r.insert(r.end(), gaps.begin(), gaps.end());
        return r;
    }
};

inline constexpr double default_record_budget = 1e7;

namespace detail {

template <class F>
void for_each_composition(std::size_t N, long K, F&& f) {
    ExponentVector cur(N, 0);
    auto rec = [&](auto&& self, std::size_t i, long left) -> void {
        if (i + 1 == N) {
            cur[i] = left;
            f(cur);
            return;
        }
        for (long v = 0; v <= left; ++v) {
            cur[i] = v;
            self(self, i + 1, left - v);
        }
    };
    rec(rec, 0, K);
}

inline ExactRational power_product(const std::vector<ExactRational>& base, const ExponentVector& k) {
    ExactRational r = 1;
    for (std::size_t i = 0; i < k.size(); ++i)
        if (k[i]) r *= base[i].pow(k[i]);
    return r;
}

}  // namespace detail

inline StageRecords enumerate_stage(const WeightedIFS& ifs, long K, double budget = default_record_budget) {
    if (K < 1) throw std::invalid_argument("stage must be positive");
    mpz_class n_records = binomial(K + long(ifs.N()) - 1, long(ifs.N()) - 1);
    if (n_records.get_d() > budget)
        throw BudgetExceeded("stage " + std::to_string(K) + " needs " + n_records.get_str() +
                             " aggregated records");
    StageRecords out;
    detail::for_each_composition(ifs.N(), K, [&](const ExponentVector& k) {
        IntervalRecord r;
        r.stage = K;
        r.k = k;
        r.count = multinomial(k);
        r.mass = detail::power_product(ifs.probs(), k);
        r.length = detail::power_product(ifs.ratios(), k);
        out.intervals.push_back(std::move(r));
    });
    if (ifs.gap().sign() > 0) {
        for (long j = 1; j <= K; ++j) {
            auto emit = [&](const ExponentVector& parent) {
                IntervalRecord g;
                g.stage = K;
                g.k = parent;
                g.count = multinomial(parent) * long(ifs.N() - 1);
                g.mass = 0;
                g.length = detail::power_product(ifs.ratios(), parent) * ifs.gap();
                g.gap = true;
                g.gap_level = j;
                out.gaps.push_back(std::move(g));
            };
            if (j == 1) emit(ExponentVector(ifs.N(), 0));
            else detail::for_each_composition(ifs.N(), j - 1, emit);
        }
    }
    return out;
}

// Every word of length K, visited depth-first with exact left endpoint, length and mass.
// The callback sees each prefix, so one pass to depth K covers all stages <= K.
template <class F>
void for_each_word(const WeightedIFS& ifs, long K, F&& visit, double budget = default_record_budget) {
    if (std::pow(double(ifs.N()), double(K)) > budget)
        throw BudgetExceeded("word enumeration of depth " + std::to_string(K) + " exceeds budget");
    std::vector<int> word;
    ExponentVector counts(ifs.N(), 0);
    auto rec = [&](auto&& self, const mpq_class& left, const mpq_class& len, const mpq_class& mass) -> void {
        if (!word.empty()) visit(word, counts, left, len, mass);
        if (long(word.size()) == K) return;
        for (std::size_t i = 0; i < ifs.N(); ++i) {
            word.push_back(int(i));
            ++counts[i];
            mpq_class l = left + len * ifs.offsets()[i].raw();
            self(self, l, mpq_class(len * ifs.ratios()[i].raw()), mpq_class(mass * ifs.probs()[i].raw()));
            --counts[i];
            word.pop_back();
        }
    };
    rec(rec, mpq_class(0), mpq_class(1), mpq_class(1));
}

inline ExactRational atomic_total_mass(const AtomicMeasureSpec& spec) {
    return spec.is_sigma1() ? ExactRational(1, 2) : ExactRational(1);
}

// Cells [a b^-n, (a+1) b^-n), last one closed. Masses are exact: atoms down to level
// n + guard are placed individually and everything finer is summed in closed form.
inline std::vector<IntervalRecord> atomic_stage(const AtomicMeasureSpec& spec, long n,
                                                double budget = default_record_budget, long guard = 2) {
    if (n < 1) throw std::invalid_argument("stage must be positive");
    const long b = spec.base();
    const double cells_d = std::pow(double(b), double(n));
    if (cells_d > budget)
        throw BudgetExceeded("atomic stage " + std::to_string(n) + " has " + std::to_string(cells_d) + " cells");
    const long J = n + guard;
    mpz_class bz(b), cells;
    mpz_pow_ui(cells.get_mpz_t(), bz.get_mpz_t(), static_cast<unsigned long>(n));
    const long C = cells.get_si();
    std::map<long, ExactRational> mass;  // cell index -> mass
    auto bpow = [&](long e) {
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), bz.get_mpz_t(), static_cast<unsigned long>(e));
        return r;
    };
    // Cell holding position P / b^j.
    auto cell_of = [&](const mpz_class& P, long j) -> long {
        mpz_class idx = j <= n ? mpz_class(P * bpow(n - j)) : mpz_class(P / bpow(j - n));
        long a = idx.get_si();
        return a >= C ? C - 1 : a;
    };
    if (spec.is_sigma1()) {
        // atom 3^-i at position 3^-i
        for (long i = 1; i <= J; ++i) mass[cell_of(1, i)] += ExactRational(mpz_class(1), bpow(i));
        // atoms i > J all sit in (0, 3^-(J+1)] inside cell 0; their total is 3^-J / 2
        mass[0] += ExactRational(mpz_class(1), bpow(J) * 2);
    } else {
        const long m = spec.m;
        // level j: (m-1) m^{j-1} atoms of weight b^-j at (m^j + t) b^-j
        for (long j = 1; j <= J; ++j) {
            mpz_class mj;
            mpz_class mz(m);
            mpz_pow_ui(mj.get_mpz_t(), mz.get_mpz_t(), static_cast<unsigned long>(j));
            mpz_class natoms = mj / m * (m - 1);
            std::map<long, long> per_cell;
            if (j <= n) {
                for (mpz_class t = 0; t < natoms; ++t) ++per_cell[cell_of(mj + t, j)];
            } else {
                // consecutive atoms share cells of width b^{j-n} in position units
                mpz_class w = bpow(j - n);
                mpz_class t = 0;
                while (t < natoms) {
                    mpz_class P = mj + t;
                    long a = cell_of(P, j);
                    mpz_class next_start = mpz_class(a + 1) * w;  // first P of the next cell
                    mpz_class take = next_start - P;
                    if (take > natoms - t) take = natoms - t;
                    per_cell[a] += take.get_si();
                    t += take;
                }
            }
            ExactRational wgt(mpz_class(1), bpow(j));
            for (const auto& [a, c] : per_cell) mass[a] += wgt * ExactRational(c);
        }
        // levels > J tile [0, m^J b^-J) with mass equal to length
        mpz_class mJ;
        mpz_class mz(m);
        mpz_pow_ui(mJ.get_mpz_t(), mz.get_mpz_t(), static_cast<unsigned long>(J));
        ExactRational tail_end(mJ, bpow(J));
        ExactRational width(mpz_class(1), cells);
        mpz_class full = mJ / bpow(J - n);
        for (long a = 0; a < full.get_si(); ++a) mass[a] += width;
        ExactRational rest = tail_end - ExactRational(full) * width;
        if (rest.sign() > 0) mass[full.get_si()] += rest;
    }
    std::vector<IntervalRecord> out;
    ExactRational width(mpz_class(1), cells);
    long nonzero = 0;
    for (const auto& [a, ms] : mass) {
        if (ms.is_zero()) continue;
        IntervalRecord r;
        r.stage = n;
        r.k = {a};
        r.mass = ms;
        r.length = width;
        r.atomic = true;
        out.push_back(std::move(r));
        ++nonzero;
    }
    if (C > nonzero) {
        IntervalRecord z;
        z.stage = n;
        z.count = C - nonzero;
        z.mass = 0;
        z.length = width;
        z.atomic = true;
        z.gap = true;
        out.push_back(std::move(z));
    }
    return out;
}

struct LengthTerm {
    ExactRational length;
    mpz_class multiplicity;
};

struct AlphaLengthSequence {
    RegularityKey key;
    std::vector<LengthTerm> terms;  // strictly decreasing lengths
};

struct RegularityGroup {
    RegularityKey key;
    std::optional<LogRatio> alpha_exact;  // empty for the infinite group
    double alpha_float = std::numeric_limits<double>::infinity();
    std::map<ExactRational, mpz_class> lengths;
    std::vector<RegularityKey> aliases;  // every candidate key merged into this group

    AlphaLengthSequence sequence() const {
        AlphaLengthSequence s{key, {}};
        for (auto it = lengths.rbegin(); it != lengths.rend(); ++it) s.terms.push_back({it->first, it->second});
        return s;
    }
};

using GroupedRegularities = std::map<RegularityKey, RegularityGroup>;

// Candidate key of a single record before ladder merging.
inline RegularityKey candidate_key(const IntervalRecord& r, const LogRatio& lr) {
    if (!r.atomic) return RegularityKey::vector(primitive_of(r.k));
    // proportional exponent vectors give a rational regularity
    const auto& L = lr.den.entries();
    const auto& M = lr.num.entries();
    if (!L.empty()) {
        const auto& [p0, e0] = *L.begin();
        long me = lr.num.exponent(p0);
        bool prop = M.size() <= L.size();
        for (const auto& [p, e] : L)
            if (lr.num.exponent(p) * e0 != me * e) prop = false;
        for (const auto& [p, e] : M)
            if (lr.den.exponent(p) == 0) prop = false;
        if (prop) return RegularityKey::fraction(me, e0);
    }
    // sigma1 leftmost cell: mass = length / 2 with length = 3^-n
    if (L.size() == 1 && L.begin()->first == 3 && r.mass * ExactRational(2) == r.length)
        return RegularityKey::one_plus_log(-L.begin()->second);
    return RegularityKey::value("log(" + r.mass.str() + ")/log(" + r.length.str() + ")");
}

inline GroupedRegularities group_by_regularity(const std::vector<IntervalRecord>& records,
                                               const PrecisionLadder& ladder = {}) {
    std::vector<RegularityGroup> groups;
    std::map<RegularityKey, std::size_t> by_candidate;
    std::multimap<double, std::size_t> by_alpha;
    std::optional<std::size_t> inf_group;
    auto add_length = [](RegularityGroup& g, const IntervalRecord& r) { g.lengths[r.length] += r.count; };
    for (const auto& r : records) {
        if (r.gap || r.mass.is_zero()) {
            if (!inf_group) {
                groups.push_back({RegularityKey::infinite(), std::nullopt,
                                  std::numeric_limits<double>::infinity(), {}, {RegularityKey::infinite()}});
                inf_group = groups.size() - 1;
            }
            add_length(groups[*inf_group], r);
            continue;
        }
        LogRatio lr{factorize(r.mass), factorize(r.length)};
        RegularityKey cand = candidate_key(r, lr);
        if (auto it = by_candidate.find(cand); it != by_candidate.end()) {
            add_length(groups[it->second], r);
            continue;
        }
        double a = lr.value();
        double tol = 1e-9 * std::max(1.0, std::abs(a));
        std::optional<std::size_t> hit;
        for (auto it = by_alpha.lower_bound(a - tol); it != by_alpha.end() && it->first <= a + tol; ++it) {
            if (equal(*groups[it->second].alpha_exact, lr, ladder)) {
                hit = it->second;
                break;
            }
        }
        if (!hit) {
            groups.push_back({cand, lr, a, {}, {}});
            hit = groups.size() - 1;
            by_alpha.emplace(a, *hit);
        }
        auto& g = groups[*hit];
        g.aliases.push_back(cand);
        if (cand.kind == KeyKind::vector && g.key.kind == KeyKind::vector &&
            representative_less(cand.vec, g.key.vec))
            g.key = cand;
        by_candidate.emplace(cand, *hit);
        add_length(g, r);
    }
    GroupedRegularities out;
    for (auto& g : groups) {
        std::sort(g.aliases.begin(), g.aliases.end());
        out.emplace(g.key, std::move(g));
    }
    return out;
}

using MeasureSource = std::variant<WeightedIFS, AtomicMeasureSpec>;

inline std::vector<IntervalRecord> stage_records(const MeasureSource& src, long n, double budget) {
    if (auto* ifs = std::get_if<WeightedIFS>(&src)) return enumerate_stage(*ifs, n, budget).all();
    return atomic_stage(std::get<AtomicMeasureSpec>(src), n, budget);
}

// All records of stages 1..depth attaining the regularity named by key.
inline AlphaLengthSequence empirical_alpha_lengths(const MeasureSource& src, const RegularityKey& key, long depth,
                                                   double budget = default_record_budget,
                                                   const PrecisionLadder& ladder = {}) {
    std::optional<LogRatio> target;
    if (key.kind == KeyKind::vector) {
        target = regularity_of(std::get<WeightedIFS>(src), key.vec).alpha_exact;
    } else if (key.kind == KeyKind::collapsed) {
        target = collapsed_regularity(std::get<WeightedIFS>(src), key.vec).alpha_exact;
    }
    std::map<ExactRational, mpz_class> acc;
    for (long n = 1; n <= depth; ++n) {
        auto groups = group_by_regularity(stage_records(src, n, budget), ladder);
        for (const auto& [k, g] : groups) {
            bool match;
            if (target) {
                match = g.alpha_exact && equal(*g.alpha_exact, *target, ladder);
            } else {
                match = std::find(g.aliases.begin(), g.aliases.end(), key) != g.aliases.end() || g.key == key;
            }
            if (!match) continue;
            for (const auto& [len, c] : g.lengths) acc[len] += c;
        }
    }
    AlphaLengthSequence s{key, {}};
    for (auto it = acc.rbegin(); it != acc.rend(); ++it) s.terms.push_back({it->first, it->second});
    return s;
}

}  // namespace mfzeta
