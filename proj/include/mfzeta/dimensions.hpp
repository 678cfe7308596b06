#pragma once

#include "mfzeta/oracle.hpp"
#include "mfzeta/zeta.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace mfzeta {

// Poles omega of zeta with base^omega = root_z:
//   omega = real_part + i * period * (t + phase_shift), t in Z.
struct DimensionLattice {
    double real_part = 0;
    std::string real_part_exact;
    double period = 0;
    double phase_shift = 0;
    std::optional<cplx> residue;  // empty for repeated roots
    cplx root_z;
    std::optional<ExactRational> root_exact;
    int multiplicity = 1;
    std::vector<cplx> poles;  // |Im| <= band

    bool simple() const { return multiplicity == 1; }
    cplx pole(double t) const { return {real_part, period * (t + phase_shift)}; }
};

namespace detail {

inline std::vector<std::pair<cplx, int>> roots_with_multiplicity(const Polynomial& den,
                                                                 std::vector<std::optional<mpq_class>>& exact) {
    // g_0 = den, g_{i+1} = gcd(g_i, g_i'); a_i = g_{i-1}/g_i holds the roots of multiplicity >= i
    std::vector<Polynomial> g{den};
    while (g.back().degree() > 0) g.push_back(gcd(g.back(), g.back().derivative()));
    std::vector<Polynomial> a;
    for (std::size_t i = 1; i < g.size(); ++i) a.push_back(g[i - 1].divmod(g[i]).first);
    a.push_back(Polynomial::constant(1));
    std::vector<std::pair<cplx, int>> out;
    exact.clear();
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        Polynomial level = a[i].divmod(a[i + 1]).first;
        if (level.degree() < 1) continue;
        int mult = int(i) + 1;
        Polynomial rest = level;
        for (const auto& r : level.rational_roots()) {
            out.emplace_back(cplx(r.get_d(), 0), mult);
            exact.emplace_back(r);
            rest = rest.divmod(Polynomial({-r, mpq_class(1)})).first;
        }
        for (auto z : rest.complex_roots()) {
            out.emplace_back(z, mult);
            exact.emplace_back(std::nullopt);
        }
    }
    return out;
}

inline double frac01(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0 - 1e-13 || f < 1e-13) f = 0;
    return f;
}

}  // namespace detail

inline cplx residue_of(const RationalZeta& rz, const DimensionLattice& lat) {
    if (!lat.simple()) throw std::invalid_argument("residue requested at a non-simple lattice");
    cplx r = lat.root_z;
    return rz.num(r) / (rz.den.derivative()(r) * r * rz.log_base());
}

inline std::vector<DimensionLattice> pole_lattices(const RationalZeta& rz, double band) {
    if (rz.entire()) throw std::invalid_argument(rz.label + " has constant denominator; no poles");
    std::vector<std::optional<mpq_class>> exact;
    auto roots = detail::roots_with_multiplicity(rz.den, exact);
    const double lb = rz.log_base();
    const double period = 2 * std::numbers::pi / std::abs(lb);
    std::vector<DimensionLattice> out;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        auto [z, mult] = roots[i];
        DimensionLattice L;
        L.root_z = z;
        L.multiplicity = mult;
        L.period = period;
        if (exact[i]) {
            L.root_exact = ExactRational(*exact[i]);
            // exact |root| keeps the real part (and its sign) free of eigenvalue noise
            ExactRational a = L.root_exact->sign() < 0 ? -*L.root_exact : *L.root_exact;
            L.real_part = (std::log(a.num().get_d()) - std::log(a.den().get_d())) / lb;
            L.real_part_exact = "log(" + (ExactRational(1) / a).str() + ")/log(" + (ExactRational(1) / rz.base).str() + ")";
        } else {
            L.real_part = std::log(std::abs(z)) / lb;
            L.real_part_exact = "log|z0|/log(" + rz.base.str() + "), z0 root of " + rz.den.str();
        }
        if (L.real_part == 0) L.real_part = 0;
        L.phase_shift = detail::frac01(-std::arg(z) / (2 * std::numbers::pi));
        if (L.simple()) L.residue = residue_of(rz, L);
        long tmax = static_cast<long>(std::floor(band / period)) + 1;
        for (long t = -tmax; t <= tmax; ++t) {
            cplx w = L.pole(double(t));
            if (std::abs(w.imag()) <= band) L.poles.push_back(w);
        }
        out.push_back(std::move(L));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.real_part != b.real_part) return a.real_part > b.real_part;
        return a.phase_shift < b.phase_shift;
    });
    return out;
}

// (1/2 pi i) * contour integral of zeta around omega: trapezoid rule on a small circle.
inline cplx residue_numeric(const RationalZeta& rz, cplx omega, double radius, int points = 64) {
    cplx acc = 0;
    for (int j = 0; j < points; ++j) {
        double th = 2 * std::numbers::pi * (j + 0.5) / points;
        cplx d = radius * std::exp(cplx(0, th));
        acc += rz(omega + d) * d;
    }
    return acc / double(points);
}

// Safe contour radius: a fraction of the distance to the nearest other pole.
inline double residue_radius(const std::vector<DimensionLattice>& lats, const DimensionLattice& L) {
    double r = L.period;
    for (const auto& o : lats) {
        double dr = std::abs(o.real_part - L.real_part);
        if (&o != &L && dr > 0) r = std::min(r, dr);
        if (&o != &L && dr == 0) {
            double ds = std::abs(o.phase_shift - L.phase_shift);
            ds = std::min(ds, 1 - ds) * L.period;
            if (ds > 0) r = std::min(r, ds);
        }
    }
    return 0.05 * r;
}

struct TapestryEntry {
    ExactRational alpha;
    DimensionLattice lattice;
};

struct Tapestry {
    std::vector<TapestryEntry> entries;  // ascending alpha
    double band = 0;
};

inline Tapestry build_tapestry(const AtomicMeasureSpec& spec, long K_max, double band) {
    if (K_max < 1) throw std::invalid_argument("K_max must be >= 1");
    Tapestry t;
    t.band = band;
    std::map<ExactRational, TapestryEntry> by_alpha;
    for (long K = 1; K <= K_max; ++K)
        for (long k1 = 1; k1 <= K; ++k1) {
            if (std::gcd(k1, K) != 1) continue;
            auto rz = closed_form_zeta(spec, RegularityKey::fraction(k1, K));
            auto lats = pole_lattices(rz, band);
            by_alpha.emplace(ExactRational(k1, K), TapestryEntry{ExactRational(k1, K), lats.front()});
        }
    for (auto& [a, e] : by_alpha) t.entries.push_back(std::move(e));
    return t;
}

// N(x) = #{lengths l with 1/l <= x}, multiplicities included.
inline mpz_class counting_direct(const AlphaLengthSequence& seq, double x) {
    if (!(x > 0)) throw std::invalid_argument("x must be positive");
    mpq_class xq(x);
    mpz_class n = 0;
    for (const auto& t : seq.terms)
        if (t.length.raw() * xq >= 1) n += t.multiplicity;
    return n;
}

// First terms of a series law: all lengths >= min_length.
inline AlphaLengthSequence series_lengths(const SeriesZeta& z, const ExactRational& min_length,
                                          RegularityKey key = {}) {
    AlphaLengthSequence s{std::move(key), {}};
    ExactRational l = z.base_length;
    for (long n = 1; l >= min_length; ++n, l *= z.base_length) {
        mpz_class m = multiplicity(z, n);
        if (m != 0) s.terms.push_back({l, m});
    }
    return s;
}

struct CountingResult {
    double x = 0;
    std::optional<mpz_class> direct;
    double explicit_value = 0;
    long truncation_Z = 0;
    double constant_term = 0;  // zeta(0), or the Laurent constant when 0 is a pole
    double jump_distance = 0;  // distance of log_{1/b} x to the nearest integer
    bool near_jump = false;
    double error_estimate = 0;
};

// Laurent constant of zeta at s = 0 when z = 1 is a simple root of den.
inline ExactRational laurent_constant_at_zero(const RationalZeta& rz) {
    const mpq_class one(1);
    Polynomial d1 = rz.den.derivative(), d2 = d1.derivative(), n1 = rz.num.derivative();
    mpq_class N = rz.num(one), Np = n1(one), Dp = d1(one), Dpp = d2(one);
    if (Dp == 0) throw std::invalid_argument("0 is not a simple pole");
    return ExactRational(mpq_class(Np / Dp - N / (2 * Dp) - N * Dpp / (2 * Dp * Dp)));
}

// Symmetric truncation of sum over poles of res * x^omega / omega (index |t + shift| <= Z + 1/2),
// with the residue of x^s zeta(s) / s at 0 added in closed form.
inline CountingResult counting_explicit(const RationalZeta& rz, double x, long Z, double jump_guard = 0.02) {
    if (!(x > 1)) throw std::invalid_argument("explicit counting needs x > 1");
    if (Z < 100) throw std::invalid_argument("truncation Z must be >= 100");
    auto lats = pole_lattices(rz, 0);
    CountingResult res;
    res.x = x;
    res.truncation_Z = Z;
    const double L = std::log(x);
    const double u = L / -rz.log_base();
    res.jump_distance = std::abs(u - std::round(u));
    res.near_jump = res.jump_distance < jump_guard;
    detail::NeumaierSum re, im;
    bool zero_is_pole = false;
    for (const auto& lat : lats) {
        if (!lat.simple()) throw std::invalid_argument("explicit formula needs simple poles");
        const cplx R = *lat.residue;
        const double lim = Z + 0.5;
        long t0 = static_cast<long>(std::ceil(-lim - lat.phase_shift));
        long t1 = static_cast<long>(std::floor(lim - lat.phase_shift));
        // increasing |index| so that conjugate terms meet
        std::vector<long> order;
        for (long t = t0; t <= t1; ++t) order.push_back(t);
        std::stable_sort(order.begin(), order.end(), [&](long a, long b) {
            return std::abs(a + lat.phase_shift) < std::abs(b + lat.phase_shift);
        });
        for (long t : order) {
            cplx w = lat.pole(double(t));
            if (w == cplx(0, 0)) {
                zero_is_pole = true;
                re.add((R * L).real());
                im.add((R * L).imag());
                continue;
            }
            cplx term = R * std::exp(w * L) / w;
            re.add(term.real());
            im.add(term.imag());
        }
        res.error_estimate += std::abs(R) * std::exp(lat.real_part * L) /
                              (lat.period * Z * std::max(std::abs(std::sin(std::numbers::pi * u)), 1e-300));
    }
    if (zero_is_pole) res.constant_term = laurent_constant_at_zero(rz).to_double();
    else res.constant_term = rz.at_zero().to_double();
    re.add(res.constant_term);
    res.explicit_value = static_cast<double>(re.value());
    return res;
}

}  // namespace mfzeta
