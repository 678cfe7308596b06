#pragma once

#include "mfzeta/dimensions.hpp"
#include "mfzeta/oracle.hpp"
#include "mfzeta/parallel.hpp"
#include "mfzeta/regularity.hpp"
#include "mfzeta/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace mfzeta {

inline double moran_dimension(const std::vector<double>& ratios) {
    if (ratios.size() < 2) throw std::invalid_argument("need at least two ratios");
    auto g = [&](long double s) {
        long double t = -1;
        for (double r : ratios) t += std::pow(static_cast<long double>(r), s);
        return t;
    };
    long double lo = 0, hi = 1;
    while (g(hi) > 0) hi *= 2;  // sum r > 1 is outside the contract but still has one root
    for (int i = 0; i < 200 && hi - lo > 1e-19L; ++i) {
        long double mid = (lo + hi) / 2;
        (g(mid) > 0 ? lo : hi) = mid;
    }
    return static_cast<double>((lo + hi) / 2);
}

// sum q_i log q_i / sum q_i log r_i, with 0 log 0 = 0.
inline double besicovitch_dimension(const std::vector<double>& ratios, const std::vector<double>& q) {
    if (ratios.size() != q.size()) throw std::invalid_argument("size mismatch");
    long double num = 0, den = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        num += detail::xlogx(q[i]);
        den += static_cast<long double>(q[i]) * std::log(static_cast<long double>(ratios[i]));
    }
    return static_cast<double>(num / den);
}

// b(q): the root of sum p_i^q r_i^b = 1.
inline double solve_b(const std::vector<double>& probs, const std::vector<double>& ratios, double q) {
    std::vector<long double> lp, lr;
    for (double p : probs) lp.push_back(std::log(static_cast<long double>(p)));
    for (double r : ratios) lr.push_back(std::log(static_cast<long double>(r)));
    // log sum exp(q log p_i + b log r_i), strictly decreasing in b
    auto G = [&](long double b) {
        long double mx = -INFINITY;
        for (std::size_t i = 0; i < lp.size(); ++i) mx = std::max(mx, q * lp[i] + b * lr[i]);
        long double s = 0;
        for (std::size_t i = 0; i < lp.size(); ++i) s += std::exp(q * lp[i] + b * lr[i] - mx);
        return mx + std::log(s);
    };
    long double lo = -1, hi = 1;
    while (G(lo) < 0) lo *= 2;
    while (G(hi) > 0) hi *= 2;
    for (int i = 0; i < 200 && hi - lo > 1e-18L * std::max(1.0L, std::abs(lo)); ++i) {
        long double mid = (lo + hi) / 2;
        (G(mid) > 0 ? lo : hi) = mid;
    }
    long double b = (lo + hi) / 2;
    for (int it = 0; it < 3; ++it) {
        long double f = -1, fp = 0;
        for (std::size_t i = 0; i < lp.size(); ++i) {
            long double t = std::exp(q * lp[i] + b * lr[i]);
            f += t;
            fp += t * lr[i];
        }
        if (fp == 0) break;
        b -= f / fp;
    }
    return static_cast<double>(b);
}

inline double b_residual(const std::vector<double>& probs, const std::vector<double>& ratios, double q, double b) {
    long double s = -1;
    for (std::size_t i = 0; i < probs.size(); ++i)
        s += std::exp(q * std::log(static_cast<long double>(probs[i])) + b * std::log(static_cast<long double>(ratios[i])));
    return static_cast<double>(std::abs(s));
}

struct TRange {
    double t_min = 0, t_max = 0;
};

inline TRange t_range(const WeightedIFS& ifs) {
    TRange r{INFINITY, -INFINITY};
    for (std::size_t i = 0; i < ifs.N(); ++i) {
        double t = LogRatio{ifs.prob_factors()[i], ifs.ratio_factors()[i]}.value();
        r.t_min = std::min(r.t_min, t);
        r.t_max = std::max(r.t_max, t);
    }
    return r;
}

inline std::vector<double> default_q_grid(double lo = -8, double hi = 8, double step = 0.05) {
    std::vector<double> g;
    long n = std::lround((hi - lo) / step);
    for (long i = 0; i <= n; ++i) {
        double q = lo + i * step;
        if (std::abs(q) < 1e-12) q = 0;
        g.push_back(q);
    }
    return g;
}

struct LegendrePipeline {
    std::vector<double> q_grid, b_values, b_prime_values, t_values, b_star_values, residuals;
    bool degenerate = false;  // t_min = t_max: collapses to the single point D
    double h = 1e-4;
};

inline LegendrePipeline legendre_transform(const WeightedIFS& ifs, const std::vector<double>& q_grid,
                                           double h = 1e-4, int threads = 1) {
    LegendrePipeline L;
    L.q_grid = q_grid;
    L.h = h;
    const auto p = ifs.probs_d(), r = ifs.ratios_d();
    const std::size_t n = q_grid.size();
    L.b_values.resize(n);
    L.b_prime_values.resize(n);
    L.t_values.resize(n);
    L.b_star_values.resize(n);
    L.residuals.resize(n);
    L.degenerate = is_monofractal(ifs);
    const double D = moran_dimension(r);
    parallel_for(n, threads, [&](std::size_t i) {
        double q = q_grid[i];
        double b = solve_b(p, r, q);
        L.b_values[i] = b;
        L.residuals[i] = b_residual(p, r, q, b);
        double bp = (solve_b(p, r, q + h) - solve_b(p, r, q - h)) / (2 * h);
        if (L.degenerate) bp = -D;
        L.b_prime_values[i] = bp;
        L.t_values[i] = -bp;
        L.b_star_values[i] = L.degenerate ? D : -bp * q + b;
    });
    return L;
}

struct SpectrumPoint {
    double alpha = 0;
    std::string alpha_exact;
    double f = 0;
    std::string f_exact;
    RegularityKey key;
};

enum class SpectrumMethod { distinct_regularity, collapsed, monofractal, atomic, oracle_fallback };

inline std::string method_name(SpectrumMethod m) {
    switch (m) {
        case SpectrumMethod::distinct_regularity: return "distinct_regularity";
        case SpectrumMethod::collapsed: return "collapsed";
        case SpectrumMethod::monofractal: return "monofractal";
        case SpectrumMethod::atomic: return "atomic";
        default: return "oracle_fallback";
    }
}

struct SpectrumOptions {
    long K_max = 64;
    int threads = 1;
    long fallback_depth = 40;
    PrecisionLadder ladder;
};

struct SpectrumResult {
    std::vector<SpectrumPoint> points;  // ascending alpha
    SpectrumMethod method = SpectrumMethod::distinct_regularity;
    std::vector<std::string> warnings;
    std::optional<HypothesisReport> hypothesis;
};

namespace detail {

inline std::string ratio_text(const LogRatio& lr) {
    return "log(" + lr.num.reconstruct().str() + ")/log(" + lr.den.reconstruct().str() + ")";
}

inline void sort_points(std::vector<SpectrumPoint>& pts) {
    std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        if (a.alpha != b.alpha) return a.alpha < b.alpha;
        return a.key < b.key;
    });
}

// Root test on the smallest complete alpha-length of an oracle group.
inline double fallback_abscissa(const RegularityGroup& g, const ExactRational& complete_above) {
    const LengthTerm* last = nullptr;
    auto seq = g.sequence();
    for (const auto& t : seq.terms)
        if (t.length > complete_above) last = &t;
    if (!last) return 0;
    long double lm = std::log(static_cast<long double>(last->multiplicity.get_d()));
    long double ll = -std::log(static_cast<long double>(last->length.to_double()));
    return ll > 0 ? std::max(0.0, static_cast<double>(lm / ll)) : 0.0;
}

}  // namespace detail

inline SpectrumResult spectrum_sweep(const AtomicMeasureSpec& spec, const SpectrumOptions& opt) {
    SpectrumResult res;
    res.method = SpectrumMethod::atomic;
    for (long K = 1; K <= opt.K_max; ++K)
        for (long k1 = 1; k1 <= K; ++k1) {
            if (std::gcd(k1, K) != 1) continue;
            auto key = RegularityKey::fraction(k1, K);
            auto rz = closed_form_zeta(spec, key);
            auto lats = pole_lattices(rz, 0);
            SpectrumPoint p;
            p.alpha = double(k1) / double(K);
            p.alpha_exact = key.str();
            p.f = std::max(0.0, lats.front().real_part);
            p.f_exact = spec.is_sigma1() ? "0" : "(" + key.str() + ")*log(" + std::to_string(spec.m) + ")/log(" +
                                                     std::to_string(spec.base()) + ")";
            p.key = key;
            res.points.push_back(std::move(p));
        }
    if (spec.is_sigma1()) {
        for (long n = 1; n <= opt.K_max; ++n) {
            SpectrumPoint p;
            p.alpha = 1 + std::log(2.0) / (n * std::log(3.0));
            p.alpha_exact = RegularityKey::one_plus_log(n).str();
            p.f = 0;
            p.f_exact = "0 (entire)";
            p.key = RegularityKey::one_plus_log(n);
            res.points.push_back(std::move(p));
        }
    }
    detail::sort_points(res.points);
    return res;
}

inline SpectrumResult spectrum_sweep(const WeightedIFS& ifs, const SpectrumOptions& opt) {
    SpectrumResult res;
    if (is_monofractal(ifs, opt.ladder)) {
        res.method = SpectrumMethod::monofractal;
        double D = moran_dimension(ifs.ratios_d());
        SpectrumPoint p;
        p.alpha = LogRatio{ifs.prob_factors()[0], ifs.ratio_factors()[0]}.value();
        p.alpha_exact = detail::ratio_text(LogRatio{ifs.prob_factors()[0], ifs.ratio_factors()[0]});
        p.f = D;
        p.f_exact = "Moran dimension";
        p.key = RegularityKey::vector(ExponentVector(ifs.N(), 0));
        p.key.vec[0] = 1;
        res.points.push_back(p);
        res.warnings.push_back("monofractal: every regularity equals D; spectrum is the single point (D, D)");
        return res;
    }
    res.hypothesis = check_hypothesis_H(ifs, opt.K_max, opt.ladder);
    if (res.hypothesis->holds) {
        res.method = SpectrumMethod::distinct_regularity;
        auto vecs = primitive_vectors(ifs.N(), opt.K_max);
        res.points.resize(vecs.size());
        parallel_for(vecs.size(), opt.threads, [&](std::size_t i) {
            auto rc = regularity_of(ifs, vecs[i]);
            auto ab = abscissa_closed(ifs, vecs[i]);
            res.points[i] = {rc.alpha_float, detail::ratio_text(rc.alpha_exact), ab.value, ab.exact_description, rc.key};
        });
        detail::sort_points(res.points);
        return res;
    }
    auto c = collapse_probabilities(ifs);
    if (ifs.single_ratio() && c.w >= 2 && check_rational_independence(c.distinct).independent) {
        res.method = SpectrumMethod::collapsed;
        res.warnings.push_back("hypothesis (H) fails; using the single-ratio collapsed classification");
        auto vecs = primitive_vectors(c.w, opt.K_max);
        res.points.resize(vecs.size());
        parallel_for(vecs.size(), opt.threads, [&](std::size_t i) {
            auto rc = collapsed_regularity(ifs, vecs[i]);
            auto ab = abscissa_closed_collapsed(ifs, vecs[i]);
            res.points[i] = {rc.alpha_float, detail::ratio_text(rc.alpha_exact), ab.value, ab.exact_description, rc.key};
        });
        detail::sort_points(res.points);
        return res;
    }
    res.method = SpectrumMethod::oracle_fallback;
    res.warnings.push_back("hypothesis (H) fails and no collapse applies; abscissae estimated by the root test on "
                           "oracle groups up to stage " + std::to_string(opt.fallback_depth));
    // lengths above r_max^{depth+1} cannot come from deeper stages
    ExactRational rmax = *std::max_element(ifs.ratios().begin(), ifs.ratios().end());
    ExactRational complete = rmax.pow(opt.fallback_depth + 1);
    std::map<RegularityKey, RegularityGroup> merged;
    std::vector<GroupedRegularities> stages(std::size_t(opt.fallback_depth));
    parallel_for(stages.size(), opt.threads, [&](std::size_t i) {
        stages[i] = group_by_regularity(enumerate_stage(ifs, long(i) + 1).intervals, opt.ladder);
    });
    // merge stage groups by exact regularity
    std::vector<RegularityGroup> all;
    for (auto& st : stages)
        for (auto& [k, g] : st) {
            bool hit = false;
            for (auto& a : all)
                if (near_equal(a.alpha_float, g.alpha_float) && equal(*a.alpha_exact, *g.alpha_exact, opt.ladder)) {
                    for (const auto& [len, m] : g.lengths) a.lengths[len] += m;
                    if (representative_less(g.key.vec, a.key.vec)) a.key = g.key;
                    hit = true;
                    break;
                }
            if (!hit) all.push_back(g);
        }
    for (const auto& g : all) {
        SpectrumPoint p;
        p.alpha = g.alpha_float;
        p.alpha_exact = detail::ratio_text(*g.alpha_exact);
        p.f = detail::fallback_abscissa(g, complete);
        p.f_exact = "root-test estimate";
        p.key = g.key;
        if (vector_sum(g.key.vec) <= opt.K_max) res.points.push_back(std::move(p));
    }
    detail::sort_points(res.points);
    return res;
}

inline SpectrumResult spectrum_sweep(const System& sys, const SpectrumOptions& opt) {
    if (auto* ifs = std::get_if<WeightedIFS>(&sys)) return spectrum_sweep(*ifs, opt);
    if (auto* a = std::get_if<AtomicMeasureSpec>(&sys)) return spectrum_sweep(*a, opt);
    throw std::invalid_argument("fractal strings carry no measure; use zeta or count");
}

struct EnvelopeFunction {
    std::vector<std::pair<double, double>> breakpoints;  // hull vertices, ascending alpha

    double min_alpha() const { return breakpoints.front().first; }
    double max_alpha() const { return breakpoints.back().first; }

    double operator()(double t) const {
        if (t < min_alpha() || t > max_alpha())
            throw std::out_of_range("envelope evaluated outside [" + std::to_string(min_alpha()) + ", " +
                                    std::to_string(max_alpha()) + "]");
        if (breakpoints.size() == 1) return breakpoints[0].second;
        auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t,
                                   [](double v, const auto& bp) { return v < bp.first; });
        if (it == breakpoints.end()) return breakpoints.back().second;
        if (it == breakpoints.begin()) return breakpoints.front().second;
        auto [x1, y1] = *it;
        auto [x0, y0] = *(it - 1);
        return y0 + (y1 - y0) * (t - x0) / (x1 - x0);
    }
    double slope_left() const {
        auto [x0, y0] = breakpoints[0];
        auto [x1, y1] = breakpoints[1];
        return (y1 - y0) / (x1 - x0);
    }
    double slope_right() const {
        auto n = breakpoints.size();
        auto [x0, y0] = breakpoints[n - 2];
        auto [x1, y1] = breakpoints[n - 1];
        return (y1 - y0) / (x1 - x0);
    }
};

// Upper concave hull (monotone chain); duplicate alphas keep the largest f.
inline EnvelopeFunction concave_envelope(std::vector<std::pair<double, double>> pts) {
    if (pts.size() < 2) throw std::invalid_argument("concave envelope needs at least 2 points");
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<double, double>> u;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i + 1 < pts.size() && pts[i + 1].first == pts[i].first) continue;  // keep max f of a tie
        auto p = pts[i];
        while (u.size() >= 2) {
            auto [ax, ay] = u[u.size() - 2];
            auto [bx, by] = u[u.size() - 1];
            double cross = (bx - ax) * (p.second - ay) - (by - ay) * (p.first - ax);
            if (cross >= 0) u.pop_back();
            else break;
        }
        u.push_back(p);
    }
    EnvelopeFunction e;
    e.breakpoints = std::move(u);
    if (e.breakpoints.size() < 2) throw std::invalid_argument("all points share one alpha");
    return e;
}

inline EnvelopeFunction concave_envelope(const std::vector<SpectrumPoint>& pts) {
    std::vector<std::pair<double, double>> v;
    for (const auto& p : pts) v.emplace_back(p.alpha, p.f);
    return concave_envelope(std::move(v));
}

// Information dimension as the point where the hull meets the diagonal. Bisection on
// hull(t) - t when it changes sign, otherwise on the hull slope crossing 1 (tangency).
inline double information_dimension(const EnvelopeFunction& e) {
    double lo = e.min_alpha(), hi = e.max_alpha();
    auto g = [&](double t) { return e(t) - t; };
    if (g(lo) * g(hi) < 0) {
        for (int i = 0; i < 200; ++i) {
            double mid = (lo + hi) / 2;
            ((g(lo) < 0) == (g(mid) < 0) ? lo : hi) = mid;
        }
        return (lo + hi) / 2;
    }
    auto slope = [&](double t) {
        double h = 1e-9 * std::max(1.0, hi - lo);
        double a = std::max(lo, t - h), b = std::min(hi, t + h);
        return (e(b) - e(a)) / (b - a);
    };
    for (int i = 0; i < 200; ++i) {
        double mid = (lo + hi) / 2;
        (slope(mid) > 1 ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
}

}  // namespace mfzeta
