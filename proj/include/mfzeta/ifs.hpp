#pragma once

#include "mfzeta/errors.hpp"
#include "mfzeta/rational.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mfzeta {

enum class Placement { chain_with_gaps };

// Maps S_i(x) = offset_i + r_i x on [0,1]. S_1 starts at 0, S_N ends at 1 and the
// slack 1 - sum r is split evenly between the N-1 gaps.
class WeightedIFS {
public:
    WeightedIFS(std::vector<ExactRational> ratios, std::vector<ExactRational> probs)
        : ratios_(std::move(ratios)), probs_(std::move(probs)) {
        if (ratios_.size() != probs_.size())
            throw ConfigError("probs", "expected " + std::to_string(ratios_.size()) +
                                           " probabilities, got " + std::to_string(probs_.size()));
        if (ratios_.size() < 2) throw ConfigError("ratios", "need at least 2 maps");
        ExactRational rs = 0, ps = 0;
        for (std::size_t i = 0; i < ratios_.size(); ++i) {
            const auto& r = ratios_[i];
            if (r.sign() <= 0 || r >= ExactRational(1))
                throw ConfigError("ratios[" + std::to_string(i) + "]", "ratio " + r.str() + " not in (0,1)");
            const auto& p = probs_[i];
            if (p.sign() <= 0 || p > ExactRational(1))
                throw ConfigError("probs[" + std::to_string(i) + "]", "probability " + p.str() + " not in (0,1]");
            rs += r;
            ps += p;
        }
        if (rs > ExactRational(1)) throw ConfigError("ratios", "ratios sum to " + rs.str() + " > 1");
        if (ps != ExactRational(1)) throw ConfigError("probs", "probabilities sum to " + ps.str());
        for (const auto& r : ratios_) ratio_f_.push_back(factorize(r));
        for (const auto& p : probs_) prob_f_.push_back(factorize(p));
        ExactRational gap = (ExactRational(1) - rs) / ExactRational(long(ratios_.size()) - 1);
        ExactRational at = 0;
        for (const auto& r : ratios_) {
            offsets_.push_back(at);
            at += r + gap;
        }
        gap_ = gap;
    }

    std::size_t N() const { return ratios_.size(); }
    const std::vector<ExactRational>& ratios() const { return ratios_; }
    const std::vector<ExactRational>& probs() const { return probs_; }
    const std::vector<PrimeExponentVector>& ratio_factors() const { return ratio_f_; }
    const std::vector<PrimeExponentVector>& prob_factors() const { return prob_f_; }
    const std::vector<ExactRational>& offsets() const { return offsets_; }
    const ExactRational& gap() const { return gap_; }
    Placement placement() const { return Placement::chain_with_gaps; }

    bool single_ratio() const {
        return std::all_of(ratios_.begin(), ratios_.end(), [&](const auto& r) { return r == ratios_[0]; });
    }
    std::vector<double> ratios_d() const {
        std::vector<double> v;
        for (const auto& r : ratios_) v.push_back(r.to_double());
        return v;
    }
    std::vector<double> probs_d() const {
        std::vector<double> v;
        for (const auto& p : probs_) v.push_back(p.to_double());
        return v;
    }

private:
    std::vector<ExactRational> ratios_, probs_;
    std::vector<PrimeExponentVector> ratio_f_, prob_f_;
    std::vector<ExactRational> offsets_;
    ExactRational gap_;
};

enum class AtomicFamily { sigma1, sigma2, generalized };

struct AtomicMeasureSpec {
    AtomicFamily family = AtomicFamily::sigma1;
    long m = 2;

    static AtomicMeasureSpec sigma1() { return {AtomicFamily::sigma1, 2}; }
    static AtomicMeasureSpec sigma2() { return {AtomicFamily::sigma2, 2}; }
    static AtomicMeasureSpec generalized(long m) {
        if (m < 2) throw ConfigError("m", "generalized family needs m >= 2, got " + std::to_string(m));
        return {AtomicFamily::generalized, m};
    }

    bool is_sigma1() const { return family == AtomicFamily::sigma1; }
    // Partition base: cells at stage n have length base^-n.
    long base() const { return is_sigma1() ? 3 : 2 * m - 1; }
    ExactRational lambda() const { return ExactRational(1, base()); }
    std::string name() const {
        switch (family) {
            case AtomicFamily::sigma1: return "sigma1";
            case AtomicFamily::sigma2: return "sigma2";
            default: return "generalized(m=" + std::to_string(m) + ")";
        }
    }
};

enum class StringFamily { cantor, fibonacci };

struct StringSpec {
    StringFamily family = StringFamily::cantor;
    std::string name() const { return family == StringFamily::cantor ? "cantor" : "fibonacci"; }
};

using System = std::variant<WeightedIFS, AtomicMeasureSpec, StringSpec>;

struct CollapsedProbabilities {
    std::size_t w = 0;
    std::vector<ExactRational> distinct;  // strictly increasing
    std::vector<long> multiplicities;
    std::vector<std::size_t> class_of;    // map index i -> q with p_i = distinct[q]
};

inline CollapsedProbabilities collapse_probabilities(const WeightedIFS& ifs) {
    CollapsedProbabilities c;
    c.distinct = ifs.probs();
    std::sort(c.distinct.begin(), c.distinct.end());
    c.distinct.erase(std::unique(c.distinct.begin(), c.distinct.end()), c.distinct.end());
    c.w = c.distinct.size();
    c.multiplicities.assign(c.w, 0);
    for (const auto& p : ifs.probs()) {
        auto q = static_cast<std::size_t>(std::lower_bound(c.distinct.begin(), c.distinct.end(), p) -
                                          c.distinct.begin());
        c.class_of.push_back(q);
        ++c.multiplicities[q];
    }
    return c;
}

struct IndependenceResult {
    bool independent = true;
    std::vector<mpz_class> witness;  // prod v_i^{a_i} = 1 when dependent
};

inline IndependenceResult check_rational_independence(const std::vector<ExactRational>& values) {
    std::vector<PrimeExponentVector> f;
    std::vector<mpz_class> primes;
    for (const auto& v : values) {
        f.push_back(factorize(v));
        for (const auto& [p, e] : f.back().entries()) primes.push_back(p);
    }
    std::sort(primes.begin(), primes.end(), MpzLess{});
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    const std::size_t n = values.size(), m = primes.size();
    // Rows [exponents | identity], eliminated over Q; a zero exponent part leaves a relation.
    std::vector<std::vector<mpq_class>> rows(n, std::vector<mpq_class>(m + n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) rows[i][j] = f[i].exponent(primes[j]);
        rows[i][m + i] = 1;
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m && rank < n; ++col) {
        std::size_t piv = rank;
        while (piv < n && rows[piv][col] == 0) ++piv;
        if (piv == n) continue;
        std::swap(rows[piv], rows[rank]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == rank || rows[i][col] == 0) continue;
            mpq_class fct = rows[i][col] / rows[rank][col];
            for (std::size_t j = 0; j < m + n; ++j) rows[i][j] -= fct * rows[rank][j];
        }
        ++rank;
    }
    IndependenceResult res;
    if (rank == n) return res;
    res.independent = false;
    const auto& rel = rows[rank];
    mpz_class l = 1;
    for (std::size_t j = m; j < m + n; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), rel[j].get_den_mpz_t());
    mpz_class g = 0;
    for (std::size_t j = m; j < m + n; ++j) {
        mpq_class t = rel[j] * l;
        res.witness.push_back(t.get_num());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.get_num_mpz_t());
    }
    int s = 0;
    for (auto& a : res.witness) {
        a /= g;
        if (s == 0 && a != 0) s = sgn(a);
    }
    if (s < 0)
        for (auto& a : res.witness) a = -a;
    return res;
}

}  // namespace mfzeta
