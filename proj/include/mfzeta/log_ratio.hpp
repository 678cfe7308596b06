#pragma once

#include "mfzeta/errors.hpp"
#include "mfzeta/interval.hpp"
#include "mfzeta/rational.hpp"

#include <cmath>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace mfzeta {

struct PrecisionLadder {
    std::vector<long> bits{64, 256, 1024};
};

// The real number <num, log p> / <den, log p>, kept symbolic.
struct LogRatio {
    PrimeExponentVector num;
    PrimeExponentVector den;

    static long double log_sum(const PrimeExponentVector& v) {
        long double s = 0;
        for (const auto& [p, e] : v.entries()) s += e * std::log(static_cast<long double>(p.get_d()));
        return s;
    }
    double value() const { return static_cast<double>(log_sum(num) / log_sum(den)); }

    static int log_sign(const PrimeExponentVector& v) {
        ExactRational x = v.reconstruct();
        return x > ExactRational(1) ? 1 : (x < ExactRational(1) ? -1 : 0);
    }
};

namespace detail {

inline const Interval& cached_log(const mpz_class& p, long bits) {
    thread_local std::map<std::pair<long, std::string>, Interval> cache;
    auto key = std::make_pair(bits, p.get_str(16));
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, Interval::log_of(p, bits)).first;
    return it->second;
}

inline Interval log_interval(const PrimeExponentVector& v, long bits) {
    Interval s(bits);
    for (const auto& [p, e] : v.entries()) s += cached_log(p, bits).scaled(e);
    return s;
}

// Symmetric part of sum_{p,q} (a1_p b2_q - a2_p b1_q) L_p L_q vanishes identically.
inline bool cross_form_vanishes(const LogRatio& x, const LogRatio& y) {
    std::set<mpz_class, MpzLess> primes;
    for (const auto* v : {&x.num, &x.den, &y.num, &y.den})
        for (const auto& [p, e] : v->entries()) primes.insert(p);
    std::vector<mpz_class> ps(primes.begin(), primes.end());
    auto c = [&](const mpz_class& p, const mpz_class& q) {
        mpz_class r = mpz_class(x.num.exponent(p)) * y.den.exponent(q) -
                      mpz_class(y.num.exponent(p)) * x.den.exponent(q);
        return r;
    };
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i; j < ps.size(); ++j) {
            mpz_class s = i == j ? c(ps[i], ps[i]) : mpz_class(c(ps[i], ps[j]) + c(ps[j], ps[i]));
            if (s != 0) return false;
        }
    return true;
}

}  // namespace detail

// Exact three-way comparison of two log ratios. Throws RegularityAmbiguity when
// the top rung of the ladder still cannot separate them.
inline int compare(const LogRatio& x, const LogRatio& y, const PrecisionLadder& ladder = {}) {
    if (detail::cross_form_vanishes(x, y)) return 0;
    int sx = LogRatio::log_sign(x.den), sy = LogRatio::log_sign(y.den);
    if (sx == 0 || sy == 0) throw std::domain_error("log ratio with zero denominator");
    for (long bits : ladder.bits) {
        Interval a1 = detail::log_interval(x.num, bits), b1 = detail::log_interval(x.den, bits);
        Interval a2 = detail::log_interval(y.num, bits), b2 = detail::log_interval(y.den, bits);
        Interval q = a1 * b2 - a2 * b1;
        int s = q.certain_sign();
        if (s != 0) return s * sx * sy;
    }
    throw RegularityAmbiguity("regularity values indistinguishable at " +
                              std::to_string(ladder.bits.empty() ? 0 : ladder.bits.back()) +
                              " bits: " + x.num.str() + "/" + x.den.str() + " vs " + y.num.str() +
                              "/" + y.den.str());
}

inline bool equal(const LogRatio& x, const LogRatio& y, const PrecisionLadder& ladder = {}) {
    return compare(x, y, ladder) == 0;
}

}  // namespace mfzeta
