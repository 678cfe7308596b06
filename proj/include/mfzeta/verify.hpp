#pragma once

#include "mfzeta/dimensions.hpp"
#include "mfzeta/io.hpp"
#include "mfzeta/oracle.hpp"
#include "mfzeta/parallel.hpp"
#include "mfzeta/spectra.hpp"
#include "mfzeta/zeta.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace mfzeta {

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<Check> checks;
    std::vector<std::string> notes;  // reported, not asserted
    double seconds = 0;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return !checks.empty();
    }
    void check(std::string name, bool ok, std::string detail = {}) {
        checks.push_back({std::move(name), ok, std::move(detail)});
    }
};

struct VerifyOptions {
    long oracle_K = 12;
    long collapsed_K = 10;
    long K_max = 64;
    long Z = 20000;
    double jump_guard = 0.02;
    int samples = 25;
    std::uint64_t seed = 0x6d667a657461ULL;
    int threads = 1;
    PrecisionLadder ladder;
};

struct VerifyReport {
    std::string suite;
    std::vector<CriterionResult> criteria;

    bool passed() const {
        for (const auto& c : criteria)
            if (!c.passed()) return false;
        return true;
    }
    // Everything except timings; must not depend on the thread count.
    nlohmann::json body() const {
        auto arr = nlohmann::json::array();
        for (const auto& c : criteria) {
            auto checks = nlohmann::json::array();
            for (const auto& k : c.checks) checks.push_back({{"name", k.name}, {"passed", k.passed}, {"detail", k.detail}});
            arr.push_back({{"id", c.id}, {"title", c.title}, {"passed", c.passed()}, {"checks", checks}, {"notes", c.notes}});
        }
        return {{"suite", suite}, {"passed", passed()}, {"criteria", arr}};
    }
    nlohmann::json full() const {
        auto j = body();
        auto t = nlohmann::json::object();
        for (const auto& c : criteria) t["c" + std::to_string(c.id)] = c.seconds;
        j["seconds"] = t;
        return j;
    }
};

namespace systems {

inline ExactRational q(const char* s) { return ExactRational::parse(s); }
inline WeightedIFS beta() { return WeightedIFS({q("1/3"), q("1/3")}, {q("1/3"), q("2/3")}); }
inline WeightedIFS beta0() { return WeightedIFS({q("1/2"), q("1/2")}, {q("1/3"), q("2/3")}); }
inline WeightedIFS trident() { return WeightedIFS({q("1/5"), q("1/5"), q("1/5")}, {q("1/5"), q("3/5"), q("1/5")}); }
inline WeightedIFS monofractal() { return WeightedIFS({q("1/3"), q("1/3")}, {q("1/2"), q("1/2")}); }
inline WeightedIFS fibrec() { return WeightedIFS({q("1/2"), q("1/4"), q("1/10")}, {q("1/2"), q("1/4"), q("1/4")}); }

}  // namespace systems

namespace detail {

template <class F>
double timed(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::string cmp_text(double got, double want) {
    return "got " + fmt(got) + ", want " + fmt(want) + ", |diff| " + fmt(std::abs(got - want));
}

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace detail

// Log-uniform x in [lo, hi] at least `guard` (in units of log_{1/b}) away from every jump.
inline std::vector<double> off_jump_samples(double log_inv_base, int n, double guard, std::uint64_t seed,
                                            double lo = 2, double hi = 1e6) {
    std::mt19937_64 gen(seed);
    std::vector<double> xs;
    const double a = std::log(lo), b = std::log(hi);
    while (int(xs.size()) < n) {
        double u = double(gen() >> 11) * 0x1.0p-53;
        double x = std::exp(a + u * (b - a));
        double v = std::log(x) / log_inv_base;
        if (std::abs(v - std::round(v)) < guard) continue;
        xs.push_back(x);
    }
    return xs;
}

// round(explicit) == direct at every sample; `unit` adds terms of length 1 missing from the series.
inline Check counting_check(const std::string& name, const RationalZeta& rz, const SeriesZeta& series,
                            const VerifyOptions& opt, std::uint64_t salt, long unit = 0) {
    auto xs = off_jump_samples(-rz.log_base(), opt.samples, opt.jump_guard, opt.seed ^ salt);
    std::vector<CountingResult> res(xs.size());
    std::vector<mpz_class> direct(xs.size());
    parallel_for(xs.size(), opt.threads, [&](std::size_t i) {
        res[i] = counting_explicit(rz, xs[i], opt.Z, opt.jump_guard);
        auto seq = series_lengths(series, ExactRational(mpq_class(1) / mpq_class(xs[i])));
        direct[i] = counting_direct(seq, xs[i]) + unit;
    });
    int ok = 0;
    double worst = 0;
    std::size_t wi = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double d = direct[i].get_d();
        double err = std::abs(res[i].explicit_value - d);
        if (std::llround(res[i].explicit_value) == std::llround(d)) ++ok;
        if (err >= worst) {
            worst = err;
            wi = i;
        }
    }
    std::string detail = std::to_string(ok) + "/" + std::to_string(xs.size()) + " rounded correctly; worst x=" +
                         fmt(xs[wi]) + " direct=" + direct[wi].get_str() + " explicit=" + fmt(res[wi].explicit_value) +
                         " estimate=" + fmt(res[wi].error_estimate);
    return {name, ok == int(xs.size()), detail};
}

inline mpz_class fibonacci(long n) {
    mpz_class a = 0, b = 1;
    for (long i = 0; i < n; ++i) {
        mpz_class t = a + b;
        a = b;
        b = t;
    }
    return a;
}

// 1. Cantor string
inline CriterionResult criterion_1(const VerifyOptions& opt) {
    CriterionResult c{1, "Cantor string: dimension, poles, explicit counting", {}, {}, 0};
    const double D = std::log(2.0) / std::log(3.0);
    double md = moran_dimension({1.0 / 3, 1.0 / 3});
    c.check("moran_dimension(1/3,1/3) = log_3 2 within 1e-12", detail::close(md, D, 1e-12), detail::cmp_text(md, D));
    auto rz = closed_form_zeta(StringSpec{StringFamily::cantor});
    auto lats = pole_lattices(rz, 50);
    c.check("one pole lattice", lats.size() == 1, std::to_string(lats.size()) + " lattices");
    if (!lats.empty()) {
        const auto& L = lats[0];
        const double P = 2 * std::numbers::pi / std::log(3.0);
        c.check("real part log_3 2 within 1e-12", detail::close(L.real_part, D, 1e-12), detail::cmp_text(L.real_part, D));
        c.check("period 2 pi / log 3 within 1e-12", detail::close(L.period, P, 1e-12), detail::cmp_text(L.period, P));
        c.check("shift 0", L.phase_shift == 0, fmt(L.phase_shift));
        double want = 1 / (2 * std::log(3.0));
        cplx num = residue_numeric(rz, L.pole(0), residue_radius(lats, L));
        c.check("residue 1/(2 log 3), contour check within 1e-10",
                std::abs(*L.residue - want) <= 1e-10 && std::abs(num - want) <= 1e-10,
                "closed " + fmt(L.residue->real()) + ", contour " + fmt(num.real()));
    }
    auto z0 = rz.at_zero();
    c.check("constant term zeta(0) = -1", z0 == ExactRational(-1), z0.str());
    Check cnt;
    double t = detail::timed([&] { cnt = counting_check("explicit N_CS rounds to direct count", rz,
                                                        string_series(StringSpec{StringFamily::cantor}), opt, 1); });
    cnt.name += " (" + std::to_string(opt.samples) + " off-jump x in [2,1e6], Z=" + std::to_string(opt.Z) + ")";
    c.checks.push_back(cnt);
    c.check("counting runtime < 10 s", t < 10.0, "timed separately");
    return c;
}

// 2. Fibonacci string
inline CriterionResult criterion_2(const VerifyOptions& opt) {
    CriterionResult c{2, "Fibonacci string: pole lines and floor-sum multiplicities", {}, {}, 0};
    const double phi = (1 + std::sqrt(5.0)) / 2, D = std::log2(phi);
    auto rz = closed_form_zeta(StringSpec{StringFamily::fibonacci});
    auto lats = pole_lattices(rz, 50);
    c.check("two pole lattices", lats.size() == 2, std::to_string(lats.size()) + " lattices");
    if (lats.size() == 2) {
        c.check("real parts +-log_2 phi within 1e-12",
                detail::close(lats[0].real_part, D, 1e-12) && detail::close(lats[1].real_part, -D, 1e-12),
                fmt(lats[0].real_part) + ", " + fmt(lats[1].real_part));
        c.check("positive line unshifted, negative line shifted by half a period",
                detail::close(lats[0].phase_shift, 0, 1e-12) && detail::close(lats[1].phase_shift, 0.5, 1e-12),
                fmt(lats[0].phase_shift) + ", " + fmt(lats[1].phase_shift));
        const double P = 2 * std::numbers::pi / std::log(2.0);
        c.check("period 2 pi / log 2", detail::close(lats[0].period, P, 1e-12), detail::cmp_text(lats[0].period, P));
    }
    SeriesZeta fs{ExactRational(1, 2), FloorSumLaw{1, 0}, 1, "floor-sum"};
    long bad = 0;
    for (long n = 1; n <= 30; ++n)
        if (multiplicity(fs, n) != fibonacci(n + 1)) ++bad;
    c.check("floor-sum multiplicity = F_{n+1} exactly for n <= 30", bad == 0, std::to_string(bad) + " mismatches");
    // the same numbers straight from the IFS oracle of the three-map system
    auto fibrec = systems::fibrec();
    const long depth = std::min<long>(opt.oracle_K, 12);
    auto seq = empirical_alpha_lengths(fibrec, RegularityKey::vector({1, 0, 0}), depth, default_record_budget, opt.ladder);
    long checked = 0, wrong = 0;
    for (const auto& t : seq.terms) {
        long n = 0;
        for (ExactRational l = t.length; l < ExactRational(1); l *= ExactRational(2)) ++n;
        if (n > depth) continue;
        ++checked;
        if (t.multiplicity != fibonacci(n + 1)) ++wrong;
    }
    c.check("oracle alpha=1 multiplicities of the three-map system = F_{n+1}, n <= " + std::to_string(depth),
            checked == depth && wrong == 0,
            std::to_string(checked) + " lengths checked, " + std::to_string(wrong) + " wrong");
    auto rr = closed_form_zeta(fibrec, {1, 0, 0}, opt.ladder);
    c.check("alpha=1 closed form is (z + z^2)/(1 - z - z^2), z = 2^-s",
            rr.num == detail::poly({0, 1, 1}) && rr.den == detail::poly({1, -1, -1}) && rr.base == ExactRational(1, 2),
            rr.str());
    return c;
}

// 3. Oracle identities
inline CriterionResult criterion_3(const VerifyOptions& opt) {
    CriterionResult c{3, "Oracle: multinomial counts, collapsed identity, mass conservation", {}, {}, 0};
    struct Sys {
        std::string name;
        WeightedIFS ifs;
    };
    std::vector<Sys> sys{{"beta", systems::beta()}, {"beta0", systems::beta0()}, {"trident", systems::trident()}};
    const long K = opt.oracle_K;
    std::vector<std::vector<Check>> out(sys.size());
    parallel_for(sys.size(), opt.threads, [&](std::size_t s) {
        const auto& ifs = sys[s].ifs;
        // brute force over words: per stage, exponent vector -> word count, and total mass
        std::vector<std::map<ExponentVector, mpz_class>> words(std::size_t(K) + 1);
        std::vector<mpq_class> wmass(std::size_t(K) + 1);
        for_each_word(ifs, K, [&](const std::vector<int>& w, const ExponentVector& k, const mpq_class&,
                                  const mpq_class&, const mpq_class& mass) {
            words[w.size()][k] += 1;
            wmass[w.size()] += mass;
        });
        long count_bad = 0, mass_bad = 0, length_bad = 0, record_mass_bad = 0;
        for (long j = 1; j <= K; ++j) {
            auto st = enumerate_stage(ifs, j);
            ExactRational m = 0, l = 0;
            for (const auto& r : st.intervals) {
                auto it = words[j].find(r.k);
                mpz_class wc = it == words[j].end() ? mpz_class(0) : it->second;
                if (r.count != wc || r.count != multinomial(r.k)) ++count_bad;
                m += r.mass * ExactRational(r.count);
                l += r.length * ExactRational(r.count);
            }
            for (const auto& g : st.gaps) l += g.length * ExactRational(g.count);
            if (st.intervals.size() != words[j].size()) ++count_bad;
            if (m != ExactRational(1)) ++record_mass_bad;
            if (wmass[j] != 1) ++mass_bad;
            if (l != ExactRational(1)) ++length_bad;
        }
        const std::string tag = sys[s].name + ", K <= " + std::to_string(K);
        out[s].push_back({"stage counts = multinomial = word counts (" + tag + ")", count_bad == 0,
                          std::to_string(count_bad) + " mismatches"});
        out[s].push_back({"mass conservation exact (" + tag + ")", mass_bad == 0 && record_mass_bad == 0,
                          std::to_string(mass_bad + record_mass_bad) + " stages off"});
        out[s].push_back({"intervals plus gaps tile [0,1] exactly (" + tag + ")", length_bad == 0,
                          std::to_string(length_bad) + " stages off"});
    });
    for (auto& v : out)
        for (auto& k : v) c.checks.push_back(std::move(k));
    // collapsed multiplicity identity on the trident
    auto tri = systems::trident();
    auto col = collapse_probabilities(tri);
    long bad = 0;
    const long KC = std::min(opt.collapsed_K, K);
    for (long j = 1; j <= KC; ++j) {
        std::map<ExponentVector, mpz_class> agg;
        for (const auto& r : enumerate_stage(tri, j).intervals) agg[collapse_vector(col, r.k)] += r.count;
        for (const auto& [kp, cnt] : agg) {
            mpz_class want = multinomial(kp);
            for (std::size_t q = 0; q < kp.size(); ++q) {
                mpz_class t;
                mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(col.multiplicities[q]),
                              static_cast<unsigned long>(kp[q]));
                want *= t;
            }
            if (cnt != want) ++bad;
        }
    }
    c.check("collapsed identity multinomial(K;k') prod c^k' exact (trident, K <= " + std::to_string(KC) + ")", bad == 0,
            std::to_string(bad) + " mismatches");
    // atomic families conserve their total mass
    long abad = 0;
    for (auto spec : {AtomicMeasureSpec::sigma1(), AtomicMeasureSpec::sigma2(), AtomicMeasureSpec::generalized(3)}) {
        long nmax = spec.base() == 3 ? 8 : 6;
        for (long n = 1; n <= nmax; ++n) {
            ExactRational m = 0;
            for (const auto& r : atomic_stage(spec, n)) m += r.mass;
            if (m != atomic_total_mass(spec)) ++abad;
        }
    }
    c.check("atomic stage masses sum to the total mass exactly", abad == 0, std::to_string(abad) + " stages off");
    return c;
}

// 4. Abscissa agreement
inline CriterionResult criterion_4(const VerifyOptions& opt) {
    CriterionResult c{4, "Abscissa: root test vs closed form, closed form residual", {}, {}, 0};
    auto keys = primitive_vectors(2, 5);
    keys.resize(10);
    struct Row {
        double worst_gap = 0, worst_res = 0;
    };
    auto run = [&](const std::string& name, auto&& series_of, auto&& closed_of, auto&& residual_of) {
        Row r;
        std::vector<double> gap(keys.size()), res(keys.size());
        parallel_for(keys.size(), opt.threads, [&](std::size_t i) {
            double a = abscissa_root_test(series_of(keys[i]), 2000).value;
            double b = closed_of(keys[i]).value;
            gap[i] = std::abs(a - b);
            res[i] = std::abs(residual_of(keys[i], b));
        });
        for (std::size_t i = 0; i < keys.size(); ++i) {
            r.worst_gap = std::max(r.worst_gap, gap[i]);
            r.worst_res = std::max(r.worst_res, res[i]);
        }
        c.check(name + ": |root test(n=2000) - closed| <= 0.01 on 10 keys", r.worst_gap <= 0.01, "max " + fmt(r.worst_gap));
        c.check(name + ": defining-equation residual <= 1e-12", r.worst_res <= 1e-12, "max " + fmt(r.worst_res));
    };
    const std::vector<std::pair<std::string, WeightedIFS>> sys{{"beta", systems::beta()}, {"beta0", systems::beta0()}};
    for (const auto& entry : sys) {
        const WeightedIFS& ifs = entry.second;
        run(
            entry.first, [&](const ExponentVector& k) { return multinomial_zeta(ifs, k, 12, opt.ladder); },
            [&](const ExponentVector& k) { return abscissa_closed(ifs, k); },
            [&](const ExponentVector& k, double s) { return abscissa_residual(ifs, k, s); });
    }
    auto tri = systems::trident();
    run(
        "trident (collapsed)", [&](const ExponentVector& k) { return collapsed_zeta(tri, k); },
        [&](const ExponentVector& k) { return abscissa_closed_collapsed(tri, k); },
        [&](const ExponentVector& k, double s) { return abscissa_residual_collapsed(tri, k, s); });
    return c;
}

// 5. Binomial spectrum
inline CriterionResult criterion_5(const VerifyOptions& opt) {
    CriterionResult c{5, "Binomial spectrum: hull vs closed f_g, pointwise entropy form", {}, {}, 0};
    auto ifs = systems::beta0();
    SpectrumOptions so{opt.K_max, opt.threads, 40, opt.ladder};
    auto sw = spectrum_sweep(ifs, so);
    c.check("sweep uses the distinct-regularity formulas", sw.method == SpectrumMethod::distinct_regularity,
            method_name(sw.method));
    auto tr = t_range(ifs);
    auto fg = [&](double t) {
        double x = (tr.t_max - t) / (tr.t_max - tr.t_min);
        return -(detail::xlogx(x) + detail::xlogx(1 - x)) / std::log(2.0L);
    };
    auto env = concave_envelope(sw.points);
    double sup = 0;
    const int M = 2000;
    const double a = tr.t_min + 0.05, b = tr.t_max - 0.05;
    for (int i = 0; i <= M; ++i) {
        double t = a + (b - a) * i / M;
        sup = std::max(sup, std::abs(env(t) - double(fg(t))));
    }
    c.check("sup |hull - f_g| <= 5e-3 on [t_min+0.05, t_max-0.05], K_max=" + std::to_string(opt.K_max), sup <= 5e-3,
            "sup " + fmt(sup));
    double worst = 0;
    for (const auto& p : sw.points) worst = std::max(worst, std::abs(p.f - double(fg(p.alpha))));
    c.check("f(alpha) = binary entropy form at every sweep point within 1e-12", worst <= 1e-12, "max " + fmt(worst));
    // the Cantor-supported binomial measure obeys the log_3 version
    auto beta = systems::beta();
    auto sb = spectrum_sweep(beta, so);
    const long double L32 = std::log(2.0L) / std::log(3.0L);
    double wb = 0;
    for (const auto& p : sb.points) {
        long double x = (1 - p.alpha) / L32;
        long double f = -(detail::xlogx(x) + detail::xlogx(1 - x)) / std::log(3.0L);
        wb = std::max(wb, std::abs(p.f - double(f)));
    }
    c.check("Cantor-supported binomial: f(alpha) = -x log_3 x - (1-x) log_3(1-x) within 1e-12", wb <= 1e-12,
            "max " + fmt(wb));
    double top = 0;
    for (const auto& p : sw.points) top = std::max(top, p.f);
    c.check("max f = 1 = dimension of the support", detail::close(top, 1.0, 1e-9), fmt(top));
    return c;
}

// 6. Trident
inline CriterionResult criterion_6(const VerifyOptions& opt) {
    CriterionResult c{6, "Trident: maximum log_5 3 at k'=(2,1), infinite endpoint slopes", {}, {}, 0};
    auto tri = systems::trident();
    SpectrumOptions so{opt.K_max, opt.threads, 40, opt.ladder};
    auto sw = spectrum_sweep(tri, so);
    c.check("sweep uses the collapsed classification", sw.method == SpectrumMethod::collapsed, method_name(sw.method));
    const double want = std::log(3.0) / std::log(5.0);
    const SpectrumPoint* best = &sw.points.front();
    for (const auto& p : sw.points)
        if (p.f > best->f) best = &p;
    c.check("max f = log_5 3 within 1e-9", detail::close(best->f, want, 1e-9), detail::cmp_text(best->f, want));
    c.check("maximum attained at k' = (2,1)", best->key == RegularityKey::collapsed({2, 1}), best->key.str());
    const long double l53 = std::log(3.0L) / std::log(5.0L), l52 = std::log(2.0L) / std::log(5.0L);
    double worst = 0;
    for (const auto& p : sw.points) {
        long double x = (1 - p.alpha) / l53;
        long double g = -(detail::xlogx(x) + detail::xlogx(1 - x)) / std::log(5.0L) + (1 - x) * l52;
        worst = std::max(worst, std::abs(p.f - double(g)));
    }
    c.check("f(alpha) = -x log_5 x - (1-x) log_5(1-x) + (1-x) log_5 2 within 1e-12", worst <= 1e-12, "max " + fmt(worst));
    auto env = concave_envelope(sw.points);
    double sl = env.slope_left(), sr = env.slope_right();
    c.check("hull endpoint slopes exceed 10 in magnitude at K_max=" + std::to_string(opt.K_max),
            std::abs(sl) > 10 && std::abs(sr) > 10, "left " + fmt(sl) + ", right " + fmt(sr));
    return c;
}

// 7. sigma1
inline CriterionResult criterion_7(const VerifyOptions& opt) {
    CriterionResult c{7, "sigma1: zero spectrum, residues, exact and explicit counting", {}, {}, 0};
    auto s1 = AtomicMeasureSpec::sigma1();
    auto sw = spectrum_sweep(s1, SpectrumOptions{20, opt.threads, 40, opt.ladder});
    long nonzero = 0, fractions = 0;
    for (const auto& p : sw.points)
        if (p.key.kind == KeyKind::fraction) {
            ++fractions;
            if (p.f != 0) ++nonzero;
        }
    c.check("f(k1/K) = 0 for all K <= 20", nonzero == 0 && fractions > 0,
            std::to_string(fractions) + " keys, " + std::to_string(nonzero) + " nonzero");
    double worst = 0, spread = 0;
    for (long K = 1; K <= 20; ++K) {
        auto rz = closed_form_zeta(s1, RegularityKey::fraction(1, K));
        auto lats = pole_lattices(rz, 0);
        const auto& L = lats.front();
        const double want = 1 / (K * std::log(3.0));
        double r = residue_radius(lats, L);
        cplx base = residue_numeric(rz, L.pole(0), r);
        worst = std::max({worst, std::abs(*L.residue - want), std::abs(base - want)});
        for (long t : {1L, 2L, -1L, -2L}) spread = std::max(spread, std::abs(residue_numeric(rz, L.pole(double(t)), r) - base));
    }
    c.check("residues = 1/(K log 3) within 1e-10, closed and contour, K <= 20", worst <= 1e-10, "max " + fmt(worst));
    c.check("contour residues constant along the lattice within 1e-9", spread <= 1e-9, "max " + fmt(spread));
    // counting_direct against floor(log_{3^K} x), exactly, including the jump points themselves
    long bad = 0, tried = 0;
    for (long K = 1; K <= 6; ++K) {
        auto ser = atomic_series(s1, RegularityKey::fraction(1, K));
        std::vector<double> xs = off_jump_samples(K * std::log(3.0), opt.samples, 0, opt.seed ^ 70 ^ K, 1.5, 1e9);
        for (long j = 1; K * j <= 18; ++j) {
            double p = std::pow(3.0, double(K * j));
            xs.insert(xs.end(), {p, p - 0.5, p + 0.5});
        }
        for (double x : xs) {
            mpz_class fx(std::floor(x)), pw = 1, base;
            mpz_ui_pow_ui(base.get_mpz_t(), 3, static_cast<unsigned long>(K));
            long M = 0;
            while (pw * base <= fx) {
                pw *= base;
                ++M;
            }
            auto seq = series_lengths(ser, ExactRational(mpq_class(1) / mpq_class(x)));
            ++tried;
            if (counting_direct(seq, x) != M) ++bad;
        }
    }
    c.check("counting_direct = floor(log_{3^K} x) exactly", bad == 0,
            std::to_string(tried) + " points, " + std::to_string(bad) + " wrong");
    // the closed-form lengths are the oracle's lengths
    long obad = 0;
    const std::vector<std::tuple<long, long, long>> probes{{1, 2, 8}, {1, 1, 8}, {2, 3, 9}};
    for (auto [k1, K, depth] : probes) {
        auto key = RegularityKey::fraction(k1, K);
        auto emp = empirical_alpha_lengths(s1, key, depth, default_record_budget, opt.ladder);
        auto want = series_lengths(atomic_series(s1, key), ExactRational(1, 3).pow(depth));
        bool same = emp.terms.size() == want.terms.size();
        for (std::size_t i = 0; same && i < emp.terms.size(); ++i)
            same = emp.terms[i].length == want.terms[i].length && emp.terms[i].multiplicity == want.terms[i].multiplicity;
        if (!same) ++obad;
    }
    c.check("oracle alpha-lengths match the closed-form lengths (keys 1/2, 1, 2/3)", obad == 0,
            std::to_string(obad) + " keys differ");
    for (long K : {1L, 2L, 3L, 5L}) {
        auto key = RegularityKey::fraction(1, K);
        c.checks.push_back(counting_check("explicit counting rounds to direct, key " + key.str() + ", Z=" +
                                              std::to_string(opt.Z),
                                          closed_form_zeta(s1, key), atomic_series(s1, key), opt, 700 + K));
    }
    return c;
}

// 8. sigma2 and the generalized family
inline CriterionResult criterion_8(const VerifyOptions& opt) {
    CriterionResult c{8, "sigma2 and generalized sigma(m): linear spectrum, tapestry, counting", {}, {}, 0};
    std::vector<AtomicMeasureSpec> specs{AtomicMeasureSpec::sigma2(), AtomicMeasureSpec::generalized(2),
                                         AtomicMeasureSpec::generalized(3), AtomicMeasureSpec::generalized(5)};
    for (const auto& spec : specs) {
        const long m = spec.m, B = spec.base();
        const std::string nm = spec.name();
        const double lm = std::log(double(m)) / std::log(double(B));
        auto sw = spectrum_sweep(spec, SpectrumOptions{opt.K_max, opt.threads, 40, opt.ladder});
        double worst = 0;
        long exact_bad = 0;
        for (const auto& p : sw.points) {
            worst = std::max(worst, std::abs(p.f - double(p.key.num) / double(p.key.den) * lm));
            auto rz = closed_form_zeta(spec, p.key);
            auto L = pole_lattices(rz, 0).front();
            // exact: base lambda^K and root m^-k1, so Re = log(m^k1)/log((2m-1)^K)
            ExactRational root(mpz_class(1), detail::zpow(m, p.key.num));
            if (!(rz.base == spec.lambda().pow(p.key.den)) || !L.root_exact || !(*L.root_exact == root)) ++exact_bad;
        }
        c.check(nm + ": f(k1/K) = (k1/K) log_{1/lambda} m within 1e-12 (K <= " + std::to_string(opt.K_max) + ")",
                worst <= 1e-12, "max " + fmt(worst));
        c.check(nm + ": exact pole data base lambda^K, root m^-k1", exact_bad == 0, std::to_string(exact_bad) + " keys off");
        auto tap = build_tapestry(spec, 12, 50);
        double tw = 0;
        for (const auto& e : tap.entries) tw = std::max(tw, std::abs(e.lattice.real_part - e.alpha.to_double() * lm));
        c.check(nm + ": tapestry real parts = f(alpha) within 1e-12", tw <= 1e-12, "max " + fmt(tw));
        // residues and constant terms
        double rw = 0;
        long cbad = 0;
        for (auto key : {RegularityKey::fraction(1, 1), RegularityKey::fraction(1, 2), RegularityKey::fraction(2, 3),
                         RegularityKey::fraction(3, 7)}) {
            auto rz = closed_form_zeta(spec, key);
            auto lats = pole_lattices(rz, 0);
            const auto& L = lats.front();
            double want = key.num == key.den ? (2.0 * m - 1) / (m * std::log(double(B)))
                                             : (m - 1.0) / (m * key.den * std::log(double(B)));
            cplx num = residue_numeric(rz, L.pole(1), residue_radius(lats, L));
            rw = std::max({rw, std::abs(*L.residue - want), std::abs(num - want)});
            mpz_class cn = (m - 1) * detail::zpow(m, key.num - 1), cd = 1 - detail::zpow(m, key.num);
            ExactRational c0 = key.num == key.den ? ExactRational(2 * m - 1, 1 - m) : ExactRational(cn, cd);
            if (!(rz.at_zero() == c0)) ++cbad;
        }
        c.check(nm + ": residues within 1e-10 of the closed values", rw <= 1e-10, "max " + fmt(rw));
        c.check(nm + ": constant terms zeta(0) exact", cbad == 0, std::to_string(cbad) + " keys off");
        // closed-form multiplicities against the atomic oracle
        long depth = B == 3 ? 8 : B == 5 ? 6 : 5;
        long obad = 0;
        for (auto key : {RegularityKey::fraction(1, 1), RegularityKey::fraction(1, 2), RegularityKey::fraction(2, 3)}) {
            auto emp = empirical_alpha_lengths(spec, key, depth, default_record_budget, opt.ladder);
            auto want = series_lengths(atomic_series(spec, key), spec.lambda().pow(depth));
            bool same = emp.terms.size() == want.terms.size();
            for (std::size_t i = 0; same && i < emp.terms.size(); ++i)
                same = emp.terms[i].length == want.terms[i].length &&
                       emp.terms[i].multiplicity == want.terms[i].multiplicity;
            if (!same) ++obad;
        }
        c.check(nm + ": oracle alpha-lengths match the closed-form laws to stage " + std::to_string(depth), obad == 0,
                std::to_string(obad) + " keys differ");
        for (auto key : {RegularityKey::fraction(1, 1), RegularityKey::fraction(1, 2), RegularityKey::fraction(2, 3)}) {
            c.checks.push_back(counting_check(nm + ": explicit counting rounds to direct, key " + key.str(),
                                              closed_form_zeta(spec, key), atomic_series(spec, key), opt,
                                              std::uint64_t(800 + 10 * m + key.num * 3 + key.den)));
        }
    }
    return c;
}

// 9. Legendre pipeline
inline CriterionResult criterion_9(const VerifyOptions& opt) {
    CriterionResult c{9, "Legendre pipeline: b(q) residuals, hull vs b* on the binomial measure", {}, {}, 0};
    auto grid = default_q_grid();
    std::vector<std::pair<std::string, WeightedIFS>> sys{{"beta", systems::beta()},
                                                        {"beta0", systems::beta0()},
                                                        {"trident", systems::trident()},
                                                        {"monofractal", systems::monofractal()},
                                                        {"fibrec", systems::fibrec()}};
    for (const auto& [name, ifs] : sys) {
        auto L = legendre_transform(ifs, grid, 1e-4, opt.threads);
        double r = *std::max_element(L.residuals.begin(), L.residuals.end());
        c.check(name + ": |sum p^q r^b(q) - 1| <= 1e-12 on the q-grid", r <= 1e-12, "max " + fmt(r));
        auto tr = t_range(ifs);
        if (tr.t_min < tr.t_max) {
            bool dec = true;
            for (std::size_t i = 1; i < L.b_values.size(); ++i) dec = dec && L.b_values[i] < L.b_values[i - 1];
            c.check(name + ": b strictly decreasing on the grid", dec);
        } else {
            c.check(name + ": degenerate pipeline collapses to D", L.degenerate, L.degenerate ? "degenerate" : "not flagged");
        }
    }
    auto b0 = systems::beta0();
    auto L = legendre_transform(b0, grid, 1e-4, opt.threads);
    auto sw = spectrum_sweep(b0, SpectrumOptions{opt.K_max, opt.threads, 40, opt.ladder});
    auto env = concave_envelope(sw.points);
    auto tr = t_range(b0);
    double inner = 0, full = 0;
    for (std::size_t i = 0; i < L.q_grid.size(); ++i) {
        double t = L.t_values[i];
        if (t < env.min_alpha() || t > env.max_alpha()) continue;
        double d = std::abs(env(t) - L.b_star_values[i]);
        full = std::max(full, d);
        if (t >= tr.t_min + 0.05 && t <= tr.t_max - 0.05) inner = std::max(inner, d);
    }
    c.check("beta0: |hull(-b'(q)) - b*(-b'(q))| <= 5e-3, q in [-8,8], t at least 0.05 from t_min/t_max", inner <= 5e-3,
            "max " + fmt(inner));
    c.notes.push_back("beta0 without the 0.05 margin: max " + fmt(full) + " (the K_max hull is a chord near the ends)");
    double D0 = L.b_values[std::size_t(std::find(grid.begin(), grid.end(), 0.0) - grid.begin())];
    c.check("beta0: b(0) = 1 = b*(-b'(0))", detail::close(D0, 1.0, 1e-12), fmt(D0));
    // exploratory: the same comparison on the trident
    auto tri = systems::trident();
    auto Lt = legendre_transform(tri, grid, 1e-4, opt.threads);
    auto et = concave_envelope(spectrum_sweep(tri, SpectrumOptions{opt.K_max, opt.threads, 40, opt.ladder}).points);
    auto tt = t_range(tri);
    double tw = 0;
    for (std::size_t i = 0; i < Lt.q_grid.size(); ++i) {
        double t = Lt.t_values[i];
        if (t >= tt.t_min + 0.05 && t <= tt.t_max - 0.05) tw = std::max(tw, std::abs(et(t) - Lt.b_star_values[i]));
    }
    c.notes.push_back("trident (exploratory): max |hull - b*| = " + fmt(tw));
    return c;
}

inline const std::map<std::string, std::vector<int>>& suites() {
    static const std::map<std::string, std::vector<int>> s{{"oracle", {3}},
                                                          {"zeta", {1, 2, 4}},
                                                          {"spectra", {5, 6, 9}},
                                                          {"counting", {7, 8}},
                                                          {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9}}};
    return s;
}

inline CriterionResult run_criterion(int id, const VerifyOptions& opt) {
    static const std::function<CriterionResult(const VerifyOptions&)> table[] = {
        criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
        criterion_6, criterion_7, criterion_8, criterion_9};
    if (id < 1 || id > 9) throw std::invalid_argument("no criterion " + std::to_string(id));
    CriterionResult r;
    double t = detail::timed([&] {
        try {
            r = table[id - 1](opt);
        } catch (const std::exception& e) {
            r.id = id;
            r.title = "criterion " + std::to_string(id);
            r.check("completed without error", false, e.what());
        }
    });
    r.seconds = t;
    return r;
}

inline VerifyReport run_suite(const std::string& suite, const VerifyOptions& opt) {
    auto it = suites().find(suite);
    if (it == suites().end()) throw std::invalid_argument("unknown suite '" + suite + "'");
    VerifyReport rep;
    rep.suite = suite;
    for (int id : it->second) rep.criteria.push_back(run_criterion(id, opt));
    return rep;
}

}  // namespace mfzeta
