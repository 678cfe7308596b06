#pragma once

#include "mfzeta/errors.hpp"
#include "mfzeta/ifs.hpp"
#include "mfzeta/oracle.hpp"
#include "mfzeta/polynomial.hpp"
#include "mfzeta/regularity.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <variant>

namespace mfzeta {

using cplx = std::complex<double>;

// zeta(s) = num(z) / den(z) with z = base^s.
struct RationalZeta {
    Polynomial num, den;
    ExactRational base;
    std::string label;

    // gcd removed, den content-free over Z with positive constant term.
    static RationalZeta make(Polynomial num, Polynomial den, ExactRational base, std::string label) {
        if (den.is_zero()) throw std::domain_error("zero denominator polynomial");
        if (base.sign() <= 0 || base >= ExactRational(1)) throw std::domain_error("base must lie in (0,1)");
        Polynomial g = gcd(num, den);
        if (g.degree() > 0) {
            num = num.divmod(g).first;
            den = den.divmod(g).first;
        }
        if (den.coeff(0) == 0) throw std::domain_error("denominator vanishes at z = 0");
        mpq_class f = den.primitive_factor();
        if (sgn(den.coeff(0)) < 0) f = -f;
        return {num.scaled(f), den.scaled(f), std::move(base), std::move(label)};
    }

    bool entire() const { return den.degree() == 0; }
    double log_base() const { return std::log(base.to_double()); }
    cplx z_of(cplx s) const { return std::exp(s * log_base()); }
    cplx operator()(cplx s) const {
        cplx z = z_of(s);
        return num(z) / den(z);
    }
    bool pole_at_zero() const { return den(mpq_class(1)) == 0; }
    // zeta(0), i.e. the value at z = 1, when 0 is not a pole.
    ExactRational at_zero() const {
        mpq_class d = den(mpq_class(1));
        if (d == 0) throw std::domain_error("0 is a pole of " + label);
        return ExactRational(mpq_class(num(mpq_class(1)) / d));
    }
    std::string str() const { return "(" + num.str() + ") / (" + den.str() + "), z = (" + base.str() + ")^s"; }
};

struct MultinomialLaw { ExponentVector k; };                   // m_n = (nK)! / prod (n k_i)!
struct CollapsedLaw { ExponentVector kprime; std::vector<long> c; };  // times prod c_q^{n k'_q}
struct FloorSumLaw { long M = 1, k3 = 0; };                   // three-map floor-sum count
struct GeometricLaw { ExactRational coefficient; mpz_class ratio; };  // m_n = coefficient * ratio^n
struct ExplicitLaw { std::vector<mpz_class> m; };             // m_1..m_L, zero afterwards

using MultiplicityLaw = std::variant<MultinomialLaw, CollapsedLaw, FloorSumLaw, GeometricLaw, ExplicitLaw>;

// sum_{n>=1} m_n (base_length^n)^s
struct SeriesZeta {
    ExactRational base_length;
    MultiplicityLaw law;
    long K = 1;
    std::string label;
};

namespace detail {

inline long double lfact(long n) { return std::lgamma(static_cast<long double>(n) + 1.0L); }

inline long double xlogx(long double x) { return x == 0 ? 0.0L : x * std::log(x); }

}  // namespace detail

inline mpz_class multiplicity(const SeriesZeta& z, long n) {
    if (n < 1) throw std::invalid_argument("multiplicity index starts at 1");
    return std::visit(
        [n](const auto& law) -> mpz_class {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, MultinomialLaw>) {
                ExponentVector nk;
                for (long x : law.k) nk.push_back(n * x);
                return multinomial(nk);
            } else if constexpr (std::is_same_v<T, CollapsedLaw>) {
                ExponentVector nk;
                mpz_class r = 1;
                for (std::size_t q = 0; q < law.kprime.size(); ++q) {
                    nk.push_back(n * law.kprime[q]);
                    mpz_class t;
                    mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(law.c[q]),
                                  static_cast<unsigned long>(n * law.kprime[q]));
                    r *= t;
                }
                return multinomial(nk) * r;
            } else if constexpr (std::is_same_v<T, FloorSumLaw>) {
                const long nM = n * law.M, h = nM / 2, c = n * law.k3;
                mpz_class s = 0;
                for (long i = 0; i <= h; ++i) {
                    long a = nM - 2 * h + 2 * i, b = h - i;
                    long top = (nM + 2 * c + 1) / 2 + i;
                    if (a + b + c != top) throw std::logic_error("floor-sum law bookkeeping");
                    s += multinomial({a, b, c});
                }
                return s;
            } else if constexpr (std::is_same_v<T, GeometricLaw>) {
                mpz_class p;
                mpz_pow_ui(p.get_mpz_t(), law.ratio.get_mpz_t(), static_cast<unsigned long>(n));
                mpq_class v = law.coefficient.raw() * mpq_class(p);
                if (v.get_den() != 1) throw std::domain_error("geometric law is not integral at n=" + std::to_string(n));
                return v.get_num();
            } else {
                return n <= long(law.m.size()) ? law.m[n - 1] : mpz_class(0);
            }
        },
        z.law);
}

// log m_n in floating point (log-gamma for the multinomial families).
inline long double log_multiplicity(const SeriesZeta& z, long n) {
    return std::visit(
        [&](const auto& law) -> long double {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, MultinomialLaw>) {
                long K = vector_sum(law.k);
                long double r = detail::lfact(n * K);
                for (long x : law.k) r -= detail::lfact(n * x);
                return r;
            } else if constexpr (std::is_same_v<T, CollapsedLaw>) {
                long K = vector_sum(law.kprime);
                long double r = detail::lfact(n * K);
                for (std::size_t q = 0; q < law.kprime.size(); ++q)
                    r += -detail::lfact(n * law.kprime[q]) +
                         static_cast<long double>(n * law.kprime[q]) * std::log(static_cast<long double>(law.c[q]));
                return r;
            } else if constexpr (std::is_same_v<T, FloorSumLaw>) {
                // log-sum-exp over the floor-sum terms
                const long nM = n * law.M, h = nM / 2, c = n * law.k3;
                long double mx = -std::numeric_limits<long double>::infinity();
                std::vector<long double> t;
                for (long i = 0; i <= h; ++i) {
                    long a = nM - 2 * h + 2 * i, b = h - i;
                    long double v = detail::lfact(a + b + c) - detail::lfact(a) - detail::lfact(b) - detail::lfact(c);
                    t.push_back(v);
                    mx = std::max(mx, v);
                }
                long double s = 0;
                for (auto v : t) s += std::exp(v - mx);
                return mx + std::log(s);
            } else if constexpr (std::is_same_v<T, GeometricLaw>) {
                return std::log(static_cast<long double>(law.coefficient.to_double())) +
                       n * std::log(static_cast<long double>(law.ratio.get_d()));
            } else {
                if (n > long(law.m.size()) || law.m[n - 1] == 0) return -std::numeric_limits<long double>::infinity();
                return std::log(static_cast<long double>(law.m[n - 1].get_d()));
            }
        },
        z.law);
}

// m_n <= C rho^n for every n >= 1. finite = true when the law has finitely many terms.
struct GrowthBound {
    long double log_C = 0;
    long double log_rho = 0;
    bool finite = false;
    std::size_t terms = 0;
};

inline GrowthBound growth_bound(const SeriesZeta& z) {
    return std::visit(
        [](const auto& law) -> GrowthBound {
            using T = std::decay_t<decltype(law)>;
            GrowthBound g;
            if constexpr (std::is_same_v<T, MultinomialLaw>) {
                long K = vector_sum(law.k);
                g.log_rho = detail::xlogx(K);
                for (long x : law.k) g.log_rho -= detail::xlogx(x);
            } else if constexpr (std::is_same_v<T, CollapsedLaw>) {
                long K = vector_sum(law.kprime);
                g.log_rho = detail::xlogx(K);
                for (std::size_t q = 0; q < law.kprime.size(); ++q)
                    g.log_rho += -detail::xlogx(law.kprime[q]) +
                                 law.kprime[q] * std::log(static_cast<long double>(law.c[q]));
            } else if constexpr (std::is_same_v<T, FloorSumLaw>) {
                // compositions of nM into 1s and 2s (<= phi^{nM}) times the placements of nk3 threes
                const long double phi = (1.0L + std::sqrt(5.0L)) / 2.0L;
                g.log_rho = law.M * std::log(phi) + detail::xlogx(law.M + law.k3) - detail::xlogx(law.M) -
                            detail::xlogx(law.k3);
            } else if constexpr (std::is_same_v<T, GeometricLaw>) {
                g.log_C = std::log(static_cast<long double>(law.coefficient.to_double()));
                g.log_rho = std::log(static_cast<long double>(law.ratio.get_d()));
            } else {
                g.finite = true;
                g.terms = law.m.size();
                long double mx = 0;
                for (const auto& v : law.m) mx = std::max(mx, static_cast<long double>(v.get_d()));
                g.log_C = mx > 0 ? std::log(mx) : 0;
            }
            return g;
        },
        z.law);
}

struct SeriesValue {
    cplx value;
    double tail_bound = 0;
    long terms = 0;
};

namespace detail {

struct NeumaierSum {
    long double s = 0, c = 0;
    void add(long double x) {
        long double t = s + x;
        if (std::abs(s) >= std::abs(x)) c += (s - t) + x;
        else c += (x - t) + s;
        s = t;
    }
    long double value() const { return s + c; }
};

inline cplx term(const SeriesZeta& z, long n, cplx s) {
    long double lm = log_multiplicity(z, n);
    if (std::isinf(lm)) return 0;
    long double ll = std::log(static_cast<long double>(z.base_length.to_double()));
    long double mag = lm + n * ll * static_cast<long double>(s.real());
    long double ph = n * ll * static_cast<long double>(s.imag());
    long double e = std::exp(mag);
    return cplx(static_cast<double>(e * std::cos(ph)), static_cast<double>(e * std::sin(ph)));
}

}  // namespace detail

inline cplx partial_sum(const SeriesZeta& z, cplx s, long N) {
    detail::NeumaierSum re, im;
    for (long n = 1; n <= N; ++n) {
        cplx t = detail::term(z, n, s);
        re.add(t.real());
        im.add(t.imag());
    }
    return {static_cast<double>(re.value()), static_cast<double>(im.value())};
}

// Partial sum plus a tail bound C q^{N+1}/(1-q), q = rho * l^{Re s}.
inline SeriesValue eval_series(const SeriesZeta& z, cplx s, double tail_tol = 1e-12, long max_terms = 10000000) {
    GrowthBound g = growth_bound(z);
    SeriesValue out;
    if (g.finite) {
        out.terms = long(g.terms);
        out.value = partial_sum(z, s, out.terms);
        return out;
    }
    long double ll = std::log(static_cast<long double>(z.base_length.to_double()));
    long double log_q = g.log_rho + ll * static_cast<long double>(s.real());
    if (log_q >= -1e-9L)
        throw DivergenceError("Re(s) = " + std::to_string(s.real()) + " is not right of the dominating abscissa " +
                              std::to_string(static_cast<double>(g.log_rho / -ll)) + " for " + z.label);
    long double q = std::exp(log_q);
    // smallest N with C q^{N+1} / (1 - q) <= tol
    long double need = (std::log(static_cast<long double>(tail_tol)) + std::log1p(-q) - g.log_C) / log_q - 1.0L;
    long N = std::max(1L, static_cast<long>(std::ceil(need)));
    if (N > max_terms)
        throw DivergenceError("s too close to the abscissa: " + std::to_string(N) + " terms needed for " + z.label);
    out.terms = N;
    out.value = partial_sum(z, s, N);
    out.tail_bound = static_cast<double>(std::exp(g.log_C + (N + 1) * log_q) / (1.0L - q));
    return out;
}

enum class AbscissaMethod { closed_form, root_test };

struct AbscissaResult {
    double value = 0;
    std::string exact_description;
    AbscissaMethod method = AbscissaMethod::closed_form;
};

inline std::string vec_str(const ExponentVector& k) { return RegularityKey::vector(k).str(); }

// Besicovitch dimension of E(k/K): sum (k_i/K) log(k_i/K) / sum (k_i/K) log r_i.
inline AbscissaResult abscissa_closed(const WeightedIFS& ifs, const ExponentVector& k) {
    long K = vector_sum(k);
    if (K == 0) throw std::invalid_argument("k must be nonzero");
    long double num = 0, den = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        long double x = static_cast<long double>(k[i]) / K;
        num += detail::xlogx(x);
        den += x * std::log(static_cast<long double>(ifs.ratios()[i].to_double()));
    }
    AbscissaResult r;
    r.value = static_cast<double>(num / den);
    if (r.value == 0) r.value = 0;  // no negative zero
    r.exact_description = "sum (k_i/K) log(k_i/K) / sum (k_i/K) log r_i, k=" + vec_str(k);
    return r;
}

inline AbscissaResult abscissa_closed_collapsed(const WeightedIFS& ifs, const ExponentVector& kprime) {
    auto c = collapse_probabilities(ifs);
    long K = vector_sum(kprime);
    long double lg = detail::xlogx(K);
    for (std::size_t q = 0; q < kprime.size(); ++q)
        lg += -detail::xlogx(kprime[q]) + kprime[q] * std::log(static_cast<long double>(c.multiplicities[q]));
    AbscissaResult r;
    r.value = static_cast<double>(lg / (K * -std::log(static_cast<long double>(ifs.ratios()[0].to_double()))));
    if (r.value == 0) r.value = 0;
    r.exact_description = "log_{r^K}(prod k'^k' / (prod c^k' K^K)), k'=" + vec_str(kprime);
    return r;
}

// (prod r_i^{k_i})^sigma K^K / prod k_i^{k_i} - 1
inline double abscissa_residual(const WeightedIFS& ifs, const ExponentVector& k, double sigma) {
    long K = vector_sum(k);
    long double lg = detail::xlogx(K), ll = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        lg -= detail::xlogx(k[i]);
        ll += k[i] * std::log(static_cast<long double>(ifs.ratios()[i].to_double()));
    }
    return static_cast<double>(std::expm1(lg + sigma * ll));
}

// Same equation for the collapsed law: r^{K sigma} K^K prod c^{k'} / prod k'^{k'} - 1
inline double abscissa_residual_collapsed(const WeightedIFS& ifs, const ExponentVector& kprime, double sigma) {
    auto c = collapse_probabilities(ifs);
    long K = vector_sum(kprime);
    long double lg = detail::xlogx(K);
    for (std::size_t q = 0; q < kprime.size(); ++q)
        lg += -detail::xlogx(kprime[q]) + kprime[q] * std::log(static_cast<long double>(c.multiplicities[q]));
    long double ll = K * std::log(static_cast<long double>(ifs.ratios()[0].to_double()));
    return static_cast<double>(std::expm1(lg + sigma * ll));
}

// sigma_hat = log m_n / (n log(1 / base_length)); error O(log n / n).
inline AbscissaResult abscissa_root_test(const SeriesZeta& z, long n) {
    if (n < 10) throw std::invalid_argument("root test needs n >= 10");
    if (auto* ex = std::get_if<ExplicitLaw>(&z.law); ex && n > long(ex->m.size()))
        throw std::invalid_argument("multiplicity law has no term " + std::to_string(n));
    long double lm = log_multiplicity(z, n);
    AbscissaResult r;
    r.method = AbscissaMethod::root_test;
    long double ll = -std::log(static_cast<long double>(z.base_length.to_double()));
    r.value = std::isinf(lm) ? 0.0 : static_cast<double>(lm / (n * ll));
    r.exact_description = "log(m_" + std::to_string(n) + ") / (" + std::to_string(n) + " log(1/l))";
    return r;
}

// Requires the class of k to be exactly {n k}; (H) is checked up to K_check first.
inline SeriesZeta multinomial_zeta(const WeightedIFS& ifs, const ExponentVector& k, long K_check = 12,
                                   const PrecisionLadder& ladder = {}) {
    auto rc = regularity_of(ifs, k);
    const ExponentVector& pk = rc.key.vec;
    auto h = check_hypothesis_H(ifs, std::max(K_check, vector_sum(pk)), ladder);
    if (!h.holds) throw std::invalid_argument("hypothesis (H) fails; no multinomial law for " + vec_str(pk));
    SeriesZeta z;
    z.base_length = detail::power_product(ifs.ratios(), pk);
    z.law = MultinomialLaw{pk};
    z.K = vector_sum(pk);
    z.label = "multinomial " + vec_str(pk);
    return z;
}

inline SeriesZeta collapsed_zeta(const WeightedIFS& ifs, const ExponentVector& kprime) {
    auto rc = collapsed_regularity(ifs, kprime);
    SeriesZeta z;
    z.law = CollapsedLaw{rc.key.vec, collapse_probabilities(ifs).multiplicities};
    z.K = vector_sum(rc.key.vec);
    z.base_length = ifs.ratios()[0].pow(z.K);
    z.label = "collapsed " + rc.key.str();
    return z;
}

namespace detail {

inline Polynomial poly(std::initializer_list<long> c) {
    std::vector<mpq_class> v;
    for (long x : c) v.emplace_back(x);
    return Polynomial(std::move(v));
}

inline mpz_class zpow(long b, long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(b), static_cast<unsigned long>(e));
    return r;
}

}  // namespace detail

inline RationalZeta closed_form_zeta(const StringSpec& s) {
    using detail::poly;
    if (s.family == StringFamily::cantor)
        return RationalZeta::make(poly({0, 1}), poly({1, -2}), ExactRational(1, 3), "cantor string");
    return RationalZeta::make(poly({1}), poly({1, -1, -1}), ExactRational(1, 2), "fibonacci string");
}

inline RationalZeta closed_form_zeta(const AtomicMeasureSpec& spec, const RegularityKey& key) {
    using detail::poly;
    if (spec.is_sigma1()) {
        if (key.kind == KeyKind::one_plus_log) {
            if (key.level < 1) throw std::invalid_argument("level must be positive");
            return RationalZeta::make(Polynomial::monomial(1, std::size_t(key.level)), poly({1}), ExactRational(1, 3),
                                      "sigma1 " + key.str());
        }
        if (key.kind != KeyKind::fraction || key.num < 1 || key.num > key.den)
            throw std::invalid_argument("regularity " + key.str() + " is not attained by sigma1");
        return RationalZeta::make(poly({0, 1}), poly({1, -1}), ExactRational(1, 3).pow(key.den),
                                  "sigma1 " + key.str());
    }
    if (key.kind != KeyKind::fraction || key.num < 1 || key.num > key.den)
        throw std::invalid_argument("regularity " + key.str() + " is not attained by " + spec.name());
    const long m = spec.m;
    const ExactRational lam = spec.lambda();
    if (key.num == key.den) {
        // (2m-1) m^{n-1} cells of regularity 1 at stage n
        std::vector<mpq_class> num{0, mpq_class(2 * m - 1)};
        std::vector<mpq_class> den{1, mpq_class(-m)};
        return RationalZeta::make(Polynomial(num), Polynomial(den), lam, spec.name() + " 1");
    }
    // (m-1) m^{k1 n - 1} single-atom cells of length lambda^{K n}
    const long k1 = key.num, K = key.den;
    mpz_class mk = detail::zpow(m, k1);
    std::vector<mpq_class> num{0, mpq_class((m - 1) * detail::zpow(m, k1 - 1))};
    std::vector<mpq_class> den{1, mpq_class(-mk)};
    return RationalZeta::make(Polynomial(num), Polynomial(den), lam.pow(K), spec.name() + " " + key.str());
}

// Closed form for an IFS regularity class when the class is every word over a subset S of the
// maps whose ratios are integer powers of one base b: zeta = 1/(1 - sum_{i in S} z^{d_i}) - 1.
// This covers unit vectors under (H) and the alpha = 1 class of the Fibonacci-recovery system.
inline RationalZeta closed_form_zeta(const WeightedIFS& ifs, const ExponentVector& key,
                                     const PrecisionLadder& ladder = {}) {
    auto rc = regularity_of(ifs, key);
    std::vector<LogRatio> unit;
    for (std::size_t i = 0; i < ifs.N(); ++i) unit.push_back({ifs.prob_factors()[i], ifs.ratio_factors()[i]});
    std::vector<std::size_t> S;
    bool is_max = true, is_min = true;
    for (std::size_t i = 0; i < ifs.N(); ++i) {
        int c = compare(unit[i], rc.alpha_exact, ladder);
        if (c == 0) S.push_back(i);
        if (c > 0) is_max = false;
        if (c < 0) is_min = false;
    }
    for (std::size_t i = 0; i < key.size(); ++i)
        if (key[i] > 0 && std::find(S.begin(), S.end(), i) == S.end())
            throw std::invalid_argument("class " + vec_str(key) + " mixes maps of different regularity; no lattice form");
    if (!is_max && !is_min)
        throw std::invalid_argument("class " + vec_str(key) + " is interior; no lattice form");
    // common base: every ratio vector is d_i times one primitive vector u
    ExponentVector d;
    const auto& v0 = ifs.ratio_factors()[S[0]];
    long g0 = 0;
    for (const auto& [p, e] : v0.entries()) g0 = std::gcd(g0, std::abs(e));
    PrimeExponentVector u;
    for (const auto& [p, e] : v0.entries()) u.add(p, e / g0);
    for (std::size_t i : S) {
        const auto& v = ifs.ratio_factors()[i];
        const auto& [p0, e0] = *u.entries().begin();
        long e = v.exponent(p0);
        if (e % e0 != 0 || !(u.scaled(e / e0) == v) || e / e0 <= 0)
            throw std::invalid_argument("ratios of class " + vec_str(key) + " are not powers of one base");
        d.push_back(e / e0);
    }
    long g = 0;
    for (long x : d) g = std::gcd(g, x);
    for (auto& x : d) x /= g;
    ExactRational b = u.reconstruct().pow(g);
    long deg = *std::max_element(d.begin(), d.end());
    std::vector<mpq_class> den(std::size_t(deg) + 1), num(std::size_t(deg) + 1);
    den[0] = 1;
    for (long x : d) {
        den[std::size_t(x)] -= 1;
        num[std::size_t(x)] += 1;
    }
    return RationalZeta::make(Polynomial(num), Polynomial(den), b, "ifs class " + vec_str(primitive_of(key)));
}

// Series with the same lengths as the closed forms above, for direct counting.
inline SeriesZeta atomic_series(const AtomicMeasureSpec& spec, const RegularityKey& key) {
    SeriesZeta z;
    z.label = spec.name() + " " + key.str();
    if (spec.is_sigma1()) {
        if (key.kind == KeyKind::one_plus_log) {
            z.base_length = ExactRational(1, 3).pow(key.level);
            z.law = ExplicitLaw{{mpz_class(1)}};
            return z;
        }
        if (key.kind != KeyKind::fraction || key.num < 1 || key.num > key.den)
            throw std::invalid_argument("regularity " + key.str() + " is not attained by sigma1");
        z.base_length = ExactRational(1, 3).pow(key.den);
        z.K = key.den;
        z.law = GeometricLaw{ExactRational(1), mpz_class(1)};
        return z;
    }
    if (key.kind != KeyKind::fraction || key.num < 1 || key.num > key.den)
        throw std::invalid_argument("regularity " + key.str() + " is not attained by " + spec.name());
    const long m = spec.m;
    if (key.num == key.den) {
        z.base_length = spec.lambda();
        z.law = GeometricLaw{ExactRational(2 * m - 1, m), mpz_class(m)};
        return z;
    }
    z.base_length = spec.lambda().pow(key.den);
    z.K = key.den;
    z.law = GeometricLaw{ExactRational(m - 1, m), detail::zpow(m, key.num)};
    return z;
}

// Lengths of the string without the unit term of the Fibonacci string.
inline SeriesZeta string_series(const StringSpec& s) {
    SeriesZeta z;
    z.label = s.name() + " string";
    if (s.family == StringFamily::cantor) {
        z.base_length = ExactRational(1, 3);
        z.law = GeometricLaw{ExactRational(1, 2), mpz_class(2)};
    } else {
        z.base_length = ExactRational(1, 2);
        z.law = FloorSumLaw{1, 0};
    }
    return z;
}

}  // namespace mfzeta
