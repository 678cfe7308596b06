#pragma once

#include "mfzeta/rational.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace mfzeta {

// Dense polynomial over Q in one variable; c[i] multiplies z^i, no trailing zeros.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<mpq_class> c) : c_(std::move(c)) { trim(); }
    static Polynomial constant(const mpq_class& v) { return Polynomial({v}); }
    static Polynomial monomial(const mpq_class& v, std::size_t deg) {
        std::vector<mpq_class> c(deg + 1);
        c[deg] = v;
        return Polynomial(std::move(c));
    }

    int degree() const { return c_.empty() ? -1 : int(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<mpq_class>& coeffs() const { return c_; }
    mpq_class coeff(std::size_t i) const { return i < c_.size() ? c_[i] : mpq_class(0); }
    mpq_class lead() const { return c_.empty() ? mpq_class(0) : c_.back(); }

    mpq_class operator()(const mpq_class& z) const {
        mpq_class r = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * z + *it;
        return r;
    }
    std::complex<double> operator()(std::complex<double> z) const {
        std::complex<double> r = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * z + it->get_d();
        return r;
    }

    Polynomial derivative() const {
        std::vector<mpq_class> d;
        for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * long(i));
        return Polynomial(std::move(d));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<mpq_class> c(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
        return Polynomial(std::move(c));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        std::vector<mpq_class> c(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<mpq_class> c(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(c));
    }
    Polynomial scaled(const mpq_class& v) const {
        auto c = c_;
        for (auto& x : c) x *= v;
        return Polynomial(std::move(c));
    }

    // Euclidean division: *this = q * d + r.
    std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
        if (d.is_zero()) throw std::domain_error("polynomial division by zero");
        std::vector<mpq_class> r = c_;
        std::vector<mpq_class> q(c_.size() >= d.c_.size() ? c_.size() - d.c_.size() + 1 : 0);
        for (int i = int(r.size()) - 1; i >= d.degree(); --i) {
            if (r[i] == 0) continue;
            mpq_class f = r[i] / d.lead();
            q[i - d.degree()] = f;
            for (int j = 0; j <= d.degree(); ++j) r[i - d.degree() + j] -= f * d.c_[j];
        }
        return {Polynomial(std::move(q)), Polynomial(std::move(r))};
    }

    Polynomial monic() const { return is_zero() ? *this : scaled(1 / lead()); }

    friend Polynomial gcd(Polynomial a, Polynomial b) {
        while (!b.is_zero()) {
            auto r = a.divmod(b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    // Integer coefficients with gcd 1; returns the factor f with primitive = f * this.
    mpq_class primitive_factor() const {
        mpz_class l = 1, g = 0;
        for (const auto& x : c_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
        for (const auto& x : c_) {
            mpq_class t = x * l;
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.get_num_mpz_t());
        }
        if (g == 0) return 1;
        return mpq_class(l) / mpq_class(g);
    }

    // Rational roots from the rational root theorem (with multiplicity once each).
    std::vector<mpq_class> rational_roots() const {
        std::vector<mpq_class> out;
        if (degree() < 1) return out;
        Polynomial p = scaled(primitive_factor());
        std::size_t low = 0;
        while (p.coeff(low) == 0) ++low;
        if (low > 0) out.push_back(0);
        auto divisors = [](const mpz_class& v) {
            std::vector<mpz_class> d{1};
            mpz_class a = abs(v);
            if (a == 0) return d;
            const auto f = factorize(ExactRational(a, 1));
            for (const auto& [pr, e] : f.entries()) {
                std::vector<mpz_class> nd;
                for (const auto& x : d) {
                    mpz_class pw = 1;
                    for (long i = 0; i <= e; ++i) {
                        nd.push_back(x * pw);
                        pw *= pr;
                    }
                }
                d = std::move(nd);
            }
            return d;
        };
        auto nums = divisors(p.coeff(low).get_num());
        auto dens = divisors(p.lead().get_num());
        std::vector<mpq_class> seen;
        for (const auto& a : nums)
            for (const auto& b : dens)
                for (int s : {1, -1}) {
                    mpq_class cand(a * s, b);
                    cand.canonicalize();
                    bool dup = false;
                    for (const auto& x : seen) dup = dup || x == cand;
                    if (dup) continue;
                    seen.push_back(cand);
                    if (p(cand) == 0) out.push_back(cand);
                }
        std::sort(out.begin(), out.end());
        return out;
    }

    // All complex roots (with multiplicity): companion eigenvalues, then Newton polish.
    std::vector<std::complex<double>> complex_roots() const {
        std::vector<std::complex<double>> out;
        int d = degree();
        if (d < 1) return out;
        Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
        double ld = lead().get_d();
        for (int i = 0; i < d; ++i) comp(0, i) = -c_[d - 1 - i].get_d() / ld;
        for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
        Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
        Polynomial dp = derivative();
        for (int i = 0; i < d; ++i) {
            std::complex<double> z = es.eigenvalues()[i];
            for (int it = 0; it < 3; ++it) {
                std::complex<double> f = (*this)(z), fp = dp(z);
                if (std::abs(fp) == 0) break;
                std::complex<double> step = f / fp;
                z -= step;
                if (std::abs(step) <= 1e-17 * std::max(1.0, std::abs(z))) break;
            }
            out.push_back(z);
        }
        return out;
    }

    std::string str(const std::string& var = "z") const {
        if (is_zero()) return "0";
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            mpq_class a = abs(c_[i]);
            std::string term;
            if (i == 0 || a != 1) term = a.get_str();
            if (i > 0) term += (term.empty() ? "" : "*") + var + (i > 1 ? "^" + std::to_string(i) : "");
            if (s.empty()) s = (sgn(c_[i]) < 0 ? "-" : "") + term;
            else s += (sgn(c_[i]) < 0 ? " - " : " + ") + term;
        }
        return s;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<mpq_class> c_;
};

}  // namespace mfzeta
