#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mfzeta {

// Canonical rational: gcd(|num|, den) = 1 and den > 0 hold after every operation.
class ExactRational {
public:
    ExactRational() = default;
    ExactRational(long v) : q_(v) {}
    ExactRational(long num, long den) : q_(num, den) {
        if (den == 0) throw std::domain_error("zero denominator");
        q_.canonicalize();
    }
    explicit ExactRational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
    ExactRational(const mpz_class& num, const mpz_class& den) {
        if (den == 0) throw std::domain_error("zero denominator");
        q_.get_num() = num;
        q_.get_den() = den;
        q_.canonicalize();
    }

    // Accepts "p/q", "p", with an optional leading sign on p.
    static ExactRational parse(std::string_view text) {
        auto digits = [](std::string_view s, bool allow_sign) {
            if (s.empty()) return false;
            std::size_t i = 0;
            if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
            if (i == s.size()) return false;
            for (; i < s.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
            return true;
        };
        auto slash = text.find('/');
        std::string_view num = text.substr(0, slash);
        std::string_view den = slash == std::string_view::npos ? std::string_view("1")
                                                               : text.substr(slash + 1);
        if (!digits(num, true) || !digits(den, false))
            throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
        std::string n(num);
        if (!n.empty() && n[0] == '+') n.erase(0, 1);
        mpz_class zn(n, 10), zd(std::string(den), 10);
        if (zd == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        return ExactRational(zn, zd);
    }

    const mpq_class& raw() const { return q_; }
    const mpz_class& num() const { return q_.get_num(); }
    const mpz_class& den() const { return q_.get_den(); }
    int sign() const { return sgn(q_); }
    bool is_zero() const { return sgn(q_) == 0; }
    double to_double() const { return q_.get_d(); }

    std::string str() const {
        if (q_.get_den() == 1) return q_.get_num().get_str();
        return q_.get_num().get_str() + "/" + q_.get_den().get_str();
    }

    ExactRational pow(long e) const {
        if (e == 0) return ExactRational(1);
        if (e < 0) {
            if (is_zero()) throw std::domain_error("zero to a negative power");
            return ExactRational(1) / pow(-e);
        }
        mpz_class n, d;
        mpz_pow_ui(n.get_mpz_t(), num().get_mpz_t(), static_cast<unsigned long>(e));
        mpz_pow_ui(d.get_mpz_t(), den().get_mpz_t(), static_cast<unsigned long>(e));
        return ExactRational(n, d);
    }

    ExactRational& operator+=(const ExactRational& o) { q_ += o.q_; return *this; }
    ExactRational& operator-=(const ExactRational& o) { q_ -= o.q_; return *this; }
    ExactRational& operator*=(const ExactRational& o) { q_ *= o.q_; return *this; }
    ExactRational& operator/=(const ExactRational& o) {
        if (o.is_zero()) throw std::domain_error("division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend ExactRational operator+(ExactRational a, const ExactRational& b) { return a += b; }
    friend ExactRational operator-(ExactRational a, const ExactRational& b) { return a -= b; }
    friend ExactRational operator*(ExactRational a, const ExactRational& b) { return a *= b; }
    friend ExactRational operator/(ExactRational a, const ExactRational& b) { return a /= b; }
    friend ExactRational operator-(const ExactRational& a) { return ExactRational(mpq_class(-a.q_)); }

    friend bool operator==(const ExactRational& a, const ExactRational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const ExactRational& a, const ExactRational& b) { return a.q_ != b.q_; }
    friend bool operator<(const ExactRational& a, const ExactRational& b) { return a.q_ < b.q_; }
    friend bool operator>(const ExactRational& a, const ExactRational& b) { return a.q_ > b.q_; }
    friend bool operator<=(const ExactRational& a, const ExactRational& b) { return a.q_ <= b.q_; }
    friend bool operator>=(const ExactRational& a, const ExactRational& b) { return a.q_ >= b.q_; }

private:
    mpq_class q_{0};
};

struct MpzLess {
    bool operator()(const mpz_class& a, const mpz_class& b) const { return cmp(a, b) < 0; }
};

// prime -> exponent; zero exponents are never stored.
class PrimeExponentVector {
public:
    using Map = std::map<mpz_class, long, MpzLess>;

    PrimeExponentVector() = default;

    void add(const mpz_class& prime, long e) {
        if (e == 0) return;
        auto [it, inserted] = exps_.try_emplace(prime, 0);
        it->second += e;
        if (it->second == 0) exps_.erase(it);
    }

    PrimeExponentVector& operator+=(const PrimeExponentVector& o) {
        for (const auto& [p, e] : o.exps_) add(p, e);
        return *this;
    }
    PrimeExponentVector scaled(long c) const {
        PrimeExponentVector r;
        if (c == 0) return r;
        for (const auto& [p, e] : exps_) r.exps_.emplace(p, e * c);
        return r;
    }
    friend PrimeExponentVector operator+(PrimeExponentVector a, const PrimeExponentVector& b) {
        return a += b;
    }

    const Map& entries() const { return exps_; }
    bool empty() const { return exps_.empty(); }
    long exponent(const mpz_class& p) const {
        auto it = exps_.find(p);
        return it == exps_.end() ? 0 : it->second;
    }

    ExactRational reconstruct() const {
        mpz_class n = 1, d = 1;
        for (const auto& [p, e] : exps_) {
            mpz_class t;
            mpz_pow_ui(t.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e > 0 ? e : -e));
            if (e > 0) n *= t; else d *= t;
        }
        return ExactRational(n, d);
    }

    std::string str() const {
        std::string s = "{";
        bool first = true;
        for (const auto& [p, e] : exps_) {
            if (!first) s += ", ";
            first = false;
            s += p.get_str() + ":" + std::to_string(e);
        }
        return s + "}";
    }

    friend bool operator==(const PrimeExponentVector& a, const PrimeExponentVector& b) {
        if (a.exps_.size() != b.exps_.size()) return false;
        auto i = a.exps_.begin();
        auto j = b.exps_.begin();
        for (; i != a.exps_.end(); ++i, ++j)
            if (i->first != j->first || i->second != j->second) return false;
        return true;
    }

private:
    Map exps_;
};

namespace detail {

inline mpz_class pollard_brent(const mpz_class& n) {
    if (n % 2 == 0) return 2;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0x9e3779b9UL);
    for (unsigned long c = 1;; ++c) {
        mpz_class y = rng.get_z_range(n), x, g = 1, q = 1, ys;
        auto f = [&](const mpz_class& v) {
            mpz_class r = v * v + c;
            return mpz_class(r % n);
        };
        long r = 1;
        const long m = 128;
        do {
            x = y;
            for (long i = 0; i < r; ++i) y = f(y);
            long k = 0;
            do {
                ys = y;
                for (long i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    mpz_class diff = abs(x - y);
                    q = (q * diff) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                mpz_class diff = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void factor_into(mpz_class n, long sign, PrimeExponentVector& out) {
    if (n == 1) return;
    auto strip = [&](unsigned long p) {
        long e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            n /= p;
            ++e;
        }
        if (e) out.add(mpz_class(p), sign * e);
    };
    strip(2);
    strip(3);
    for (unsigned long p = 5; p <= 1000000UL; p += 6) {
        if (mpz_class(p) * p > n) break;
        strip(p);
        strip(p + 2);
    }
    if (n == 1) return;
    std::vector<mpz_class> pending{n};
    while (!pending.empty()) {
        mpz_class m = pending.back();
        pending.pop_back();
        if (m == 1) continue;
        if (mpz_cmp_ui(m.get_mpz_t(), 1000000UL) <= 0 ||
            mpz_probab_prime_p(m.get_mpz_t(), 40) > 0) {
            out.add(m, sign);
            continue;
        }
        mpz_class d = pollard_brent(m);
        pending.push_back(d);
        pending.push_back(m / d);
    }
}

}  // namespace detail

inline PrimeExponentVector factorize(const ExactRational& x) {
    if (x.sign() <= 0) throw std::domain_error("factorize requires x > 0, got " + x.str());
    PrimeExponentVector v;
    detail::factor_into(x.num(), 1, v);
    detail::factor_into(x.den(), -1, v);
    return v;
}

inline mpz_class binomial(long n, long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

inline mpz_class multinomial(const std::vector<long>& k) {
    mpz_class r = 1;
    long total = 0;
    for (long ki : k) {
        total += ki;
        r *= binomial(total, ki);
    }
    return r;
}

}  // namespace mfzeta
