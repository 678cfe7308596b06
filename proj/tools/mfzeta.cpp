#include "mfzeta/mfzeta.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace mfzeta;
using nlohmann::json;

namespace {

struct Globals {
    int threads = 0;
    std::string precision = "64,256,1024";
};

PrecisionLadder ladder_from(const std::string& text) {
    PrecisionLadder L;
    L.bits.clear();
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        long b = std::stol(part);
        if (b < 32) throw std::invalid_argument("precision rungs must be >= 32 bits");
        if (!L.bits.empty() && b <= L.bits.back()) throw std::invalid_argument("precision rungs must increase");
        L.bits.push_back(b);
    }
    if (L.bits.empty()) throw std::invalid_argument("empty precision ladder");
    return L;
}

std::string system_name(const System& sys) {
    if (auto* a = std::get_if<AtomicMeasureSpec>(&sys)) return a->name();
    if (auto* s = std::get_if<StringSpec>(&sys)) return s->name() + " string";
    return "ifs(N=" + std::to_string(std::get<WeightedIFS>(sys).N()) + ")";
}

// Writes every file, then the manifest listing them.
void emit(const std::string& dir, RunManifest man, const std::vector<std::pair<std::string, std::string>>& files) {
    fs::create_directories(dir);
    for (const auto& [name, text] : files) {
        write_file((fs::path(dir) / name).string(), text);
        man.outputs.push_back((fs::path(dir) / name).string());
    }
    write_file((fs::path(dir) / "manifest.json").string(), man.to_json().dump(2) + "\n");
}

struct SpectrumArgs {
    std::string config, out = ".";
    long kmax = 64, fallback_depth = 40;
};

int cmd_spectrum(const SpectrumArgs& a, const Globals& g) {
    auto sys = load_system(a.config);
    SpectrumOptions opt;
    opt.K_max = a.kmax;
    opt.threads = resolve_threads(g.threads);
    opt.fallback_depth = a.fallback_depth;
    opt.ladder = ladder_from(g.precision);
    auto res = spectrum_sweep(sys, opt);
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
    std::vector<std::pair<double, double>> hull;
    if (res.points.size() >= 2) {
        hull = concave_envelope(res.points).breakpoints;
    } else {
        for (const auto& p : res.points) hull.emplace_back(p.alpha, p.f);
    }
    std::vector<std::pair<std::string, std::string>> files{{"spectrum.csv", spectrum_csv(res).str("manifest.json")},
                                                           {"envelope.csv", envelope_csv(hull).str("manifest.json")}};
    if (auto* ifs = std::get_if<WeightedIFS>(&sys))
        files.emplace_back("legendre.csv",
                           legendre_csv(legendre_transform(*ifs, default_q_grid(), 1e-4, opt.threads)).str("manifest.json"));
    RunManifest man;
    man.command = "spectrum";
    man.config = a.config;
    man.parameters = {{"kmax", a.kmax},
                      {"fallback_depth", a.fallback_depth},
                      {"precision_bits", opt.ladder.bits},
                      {"method", method_name(res.method)},
                      {"points", res.points.size()},
                      {"warnings", res.warnings}};
    emit(a.out, man, files);
    std::cout << system_name(sys) << ": " << res.points.size() << " points (" << method_name(res.method) << "), "
              << hull.size() << " hull vertices -> " << a.out << "\n";
    return 0;
}

struct ZetaArgs {
    std::string config, alpha, s = "1";
    std::optional<long> terms;
    double tol = 1e-12;
};

json series_json(const SeriesZeta& z, std::complex<double> s, const ZetaArgs& a) {
    json j{{"mode", "series"}, {"form", z.label}, {"base_length", z.base_length.str()}};
    if (a.terms) {
        auto g = growth_bound(z);
        long double ll = std::log(static_cast<long double>(z.base_length.to_double()));
        long double lq = g.log_rho + ll * s.real();
        if (!g.finite && lq >= 0)
            throw DivergenceError("Re(s) = " + fmt(s.real()) + " is in the divergence region of " + z.label);
        j["value"] = to_json(partial_sum(z, s, *a.terms));
        j["terms"] = *a.terms;
        j["tail_bound"] = g.finite ? 0.0 : double(std::exp(g.log_C + (*a.terms + 1) * lq) / (1 - std::exp(lq)));
    } else {
        auto v = eval_series(z, s, a.tol);
        j["value"] = to_json(v.value);
        j["terms"] = v.terms;
        j["tail_bound"] = v.tail_bound;
    }
    return j;
}

json rational_json(const RationalZeta& rz, std::complex<double> s) {
    return {{"mode", "rational"}, {"form", rz.str()}, {"value", to_json(rz(s))}, {"tail_bound", 0.0}};
}

int cmd_zeta(const ZetaArgs& a, const Globals& g) {
    auto sys = load_system(a.config);
    auto s = parse_complex(a.s);
    auto ladder = ladder_from(g.precision);
    json out;
    if (auto* str = std::get_if<StringSpec>(&sys)) {
        out = rational_json(closed_form_zeta(*str), s);
    } else {
        if (a.alpha.empty()) throw std::invalid_argument("--alpha is required for measures");
        auto key = parse_key(sys, a.alpha);
        out["key"] = key.str();
        if (auto* at = std::get_if<AtomicMeasureSpec>(&sys)) {
            out.update(rational_json(closed_form_zeta(*at, key), s));
        } else {
            const auto& ifs = std::get<WeightedIFS>(sys);
            std::optional<RationalZeta> rz;
            if (key.kind == KeyKind::vector) {
                try {
                    rz = closed_form_zeta(ifs, key.vec, ladder);
                } catch (const std::invalid_argument&) {
                }
            }
            if (rz) out.update(rational_json(*rz, s));
            else if (key.kind == KeyKind::collapsed) out.update(series_json(collapsed_zeta(ifs, key.vec), s, a));
            else out.update(series_json(multinomial_zeta(ifs, key.vec, 12, ladder), s, a));
        }
    }
    out["system"] = system_name(sys);
    out["s"] = to_json(s);
    std::cout << out.dump(2) << "\n";
    return 0;
}

struct TapestryArgs {
    std::string config, out = ".";
    long kmax = 64;
    double band = 50;
    bool poles = false;
};

int cmd_tapestry(const TapestryArgs& a, const Globals&) {
    auto sys = load_system(a.config);
    json arr;
    std::size_t n = 0;
    if (auto* at = std::get_if<AtomicMeasureSpec>(&sys)) {
        auto t = build_tapestry(*at, a.kmax, a.band);
        arr = tapestry_json(t);
        n = t.entries.size();
    } else if (auto* str = std::get_if<StringSpec>(&sys)) {
        arr = json::array();
        for (const auto& L : pole_lattices(closed_form_zeta(*str), a.band)) {
            cplx res = L.residue.value_or(cplx(NAN, NAN));
            auto poles = json::array();
            for (auto w : L.poles) poles.push_back(to_json(w));
            arr.push_back({{"alpha", nullptr}, {"real_part", L.real_part}, {"period", L.period},
                           {"shift", L.phase_shift}, {"residue_re", res.real()}, {"residue_im", res.imag()},
                           {"poles", poles}});
            ++n;
        }
    } else {
        throw std::invalid_argument("tapestry needs an atomic measure or a fractal string");
    }
    if (!a.poles)
        for (auto& e : arr) e.erase("poles");
    RunManifest man;
    man.command = "tapestry";
    man.config = a.config;
    man.parameters = {{"kmax", a.kmax}, {"band", a.band}, {"poles", a.poles}};
    emit(a.out, man, {{"tapestry.json", arr.dump(1) + "\n"}});
    std::cout << system_name(sys) << ": " << n << " lattices -> " << a.out << "\n";
    return 0;
}

struct CountArgs {
    std::string config, alpha, out = ".";
    std::vector<double> xs;
    int samples = 25;
    std::uint64_t seed = 0x6d667a657461ULL;
    long trunc = 20000;
    double jump_guard = 0.02;
};

int cmd_count(const CountArgs& a, const Globals& g) {
    auto sys = load_system(a.config);
    auto ladder = ladder_from(g.precision);
    RationalZeta rz;
    std::function<mpz_class(double)> direct;
    if (auto* str = std::get_if<StringSpec>(&sys)) {
        rz = closed_form_zeta(*str);
        auto ser = string_series(*str);
        long unit = str->family == StringFamily::fibonacci ? 1 : 0;
        direct = [ser, unit](double x) -> mpz_class {
            return counting_direct(series_lengths(ser, ExactRational(mpq_class(1) / mpq_class(x))), x) + unit;
        };
    } else {
        if (a.alpha.empty()) throw std::invalid_argument("--alpha is required for measures");
        auto key = parse_key(sys, a.alpha);
        if (auto* at = std::get_if<AtomicMeasureSpec>(&sys)) {
            rz = closed_form_zeta(*at, key);
            auto ser = atomic_series(*at, key);
            direct = [ser](double x) -> mpz_class {
                return counting_direct(series_lengths(ser, ExactRational(mpq_class(1) / mpq_class(x))), x);
            };
        } else {
            const auto& ifs = std::get<WeightedIFS>(sys);
            if (key.kind != KeyKind::vector) throw std::invalid_argument("count needs an exponent-vector key");
            rz = closed_form_zeta(ifs, key.vec, ladder);
            // every length >= 1/x appears by stage log x / log(1/r_max)
            const auto rd = ifs.ratios_d();
            double rmax = *std::max_element(rd.begin(), rd.end());
            direct = [ifs, key, rmax, ladder](double x) -> mpz_class {
                long depth = long(std::floor(std::log(x) / -std::log(rmax))) + 1;
                return counting_direct(empirical_alpha_lengths(ifs, key, depth, default_record_budget, ladder), x);
            };
        }
    }
    auto xs = a.xs.empty() ? off_jump_samples(-rz.log_base(), a.samples, a.jump_guard, a.seed) : a.xs;
    const int threads = resolve_threads(g.threads);
    std::vector<CountingResult> res(xs.size());
    std::vector<mpz_class> d(xs.size());
    parallel_for(xs.size(), threads, [&](std::size_t i) {
        res[i] = counting_explicit(rz, xs[i], a.trunc, a.jump_guard);
        d[i] = direct(xs[i]);
    });
    CsvWriter w({"x", "direct", "explicit", "error", "error_estimate", "near_jump"});
    int jumps = 0, wrong = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double err = res[i].explicit_value - d[i].get_d();
        if (res[i].near_jump) ++jumps;
        else if (std::llround(res[i].explicit_value) != std::llround(d[i].get_d())) ++wrong;
        w.row({fmt(xs[i]), d[i].get_str(), fmt(res[i].explicit_value), fmt(err), fmt(res[i].error_estimate),
               res[i].near_jump ? "1" : "0"});
    }
    if (jumps)
        std::cerr << "warning: " << jumps << " x within the jump guard; the explicit sum tends to the midpoint there\n";
    RunManifest man;
    man.command = "count";
    man.config = a.config;
    man.parameters = {{"alpha", a.alpha}, {"trunc", a.trunc}, {"jump_guard", a.jump_guard},
                      {"samples", xs.size()}, {"seed", a.seed}, {"form", rz.str()}};
    emit(a.out, man, {{"counting.csv", w.str("manifest.json")}});
    std::cout << rz.label << ": " << xs.size() - jumps - wrong << "/" << xs.size() - jumps
              << " off-jump points round to the direct count -> " << a.out << "\n";
    return 0;
}

struct OracleArgs {
    std::string config, out = ".";
    long stage = 4;
};

int cmd_oracle(const OracleArgs& a, const Globals& g) {
    auto sys = load_system(a.config);
    std::vector<IntervalRecord> recs;
    if (auto* ifs = std::get_if<WeightedIFS>(&sys)) recs = enumerate_stage(*ifs, a.stage).all();
    else if (auto* at = std::get_if<AtomicMeasureSpec>(&sys)) recs = atomic_stage(*at, a.stage);
    else throw std::invalid_argument("fractal strings have no partition oracle");
    RunManifest man;
    man.command = "oracle";
    man.config = a.config;
    man.parameters = {{"stage", a.stage}};
    emit(a.out, man, {{"oracle.csv", oracle_csv(recs, ladder_from(g.precision)).str("manifest.json")}});
    std::cout << system_name(sys) << ": " << recs.size() << " records at stage " << a.stage << " -> " << a.out << "\n";
    return 0;
}

struct VerifyArgs {
    std::string suite = "all", budget, out;
    long kmax = 64, trunc = 20000;
    double jump_guard = 0.02;
};

int cmd_verify(const VerifyArgs& a, const Globals& g) {
    VerifyOptions opt;
    opt.threads = resolve_threads(g.threads);
    opt.ladder = ladder_from(g.precision);
    opt.K_max = a.kmax;
    opt.Z = a.trunc;
    opt.jump_guard = a.jump_guard;
    if (!a.budget.empty()) {
        if (a.budget.rfind("K=", 0) != 0) throw std::invalid_argument("--budget expects K=<stage>");
        opt.oracle_K = std::stol(a.budget.substr(2));
        if (opt.oracle_K < 1) throw std::invalid_argument("--budget stage must be positive");
        opt.collapsed_K = std::min(opt.collapsed_K, opt.oracle_K);
    }
    auto rep = run_suite(a.suite, opt);
    auto j = rep.full();
    if (!a.out.empty()) write_file(a.out, j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Partition zeta functions, multifractal spectra and complex dimensions"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--threads", g.threads, "worker threads (default: MFZETA_THREADS or 1)");
    app.add_option("--precision-bits", g.precision, "interval precision ladder for regularity equality")
        ->capture_default_str();

    int rc = 0;
    std::function<int()> run;

    SpectrumArgs sa;
    auto* sp = app.add_subcommand("spectrum", "abscissa-of-convergence spectrum, concave envelope, Legendre table");
    sp->add_option("--config", sa.config)->required()->check(CLI::ExistingFile);
    sp->add_option("--kmax", sa.kmax)->capture_default_str()->check(CLI::PositiveNumber);
    sp->add_option("--fallback-depth", sa.fallback_depth)->capture_default_str()->check(CLI::PositiveNumber);
    sp->add_option("--out", sa.out)->capture_default_str();
    sp->callback([&] { run = [&] { return cmd_spectrum(sa, g); }; });

    ZetaArgs za;
    auto* zp = app.add_subcommand("zeta", "evaluate a partition or geometric zeta function");
    zp->add_option("--config", za.config)->required()->check(CLI::ExistingFile);
    zp->add_option("--alpha", za.alpha, "regularity key, e.g. 1/2, (1,1), c(2,1)");
    zp->add_option("--s", za.s, "point s: 0.8, 0.8+2i or 0.8,2")->capture_default_str();
    auto* terms = zp->add_option("--terms", za.terms, "fixed number of series terms");
    zp->add_option("--tol", za.tol, "tail tolerance")->capture_default_str()->excludes(terms);
    zp->callback([&] { run = [&] { return cmd_zeta(za, g); }; });

    TapestryArgs ta;
    auto* tp = app.add_subcommand("tapestry", "pole lattices for every regularity");
    tp->add_option("--config", ta.config)->required()->check(CLI::ExistingFile);
    tp->add_option("--kmax", ta.kmax)->capture_default_str()->check(CLI::PositiveNumber);
    tp->add_option("--band", ta.band)->capture_default_str()->check(CLI::NonNegativeNumber);
    tp->add_flag("--poles", ta.poles, "list the poles with |Im| <= band");
    tp->add_option("--out", ta.out)->capture_default_str();
    tp->callback([&] { run = [&] { return cmd_tapestry(ta, g); }; });

    CountArgs ca;
    auto* cp = app.add_subcommand("count", "counting function of alpha-lengths, direct and explicit");
    cp->add_option("--config", ca.config)->required()->check(CLI::ExistingFile);
    cp->add_option("--alpha", ca.alpha);
    cp->add_option("--x", ca.xs, "evaluation points (default: off-jump log-uniform samples)")
        ->check(CLI::PositiveNumber);
    cp->add_option("--samples", ca.samples)->capture_default_str()->check(CLI::PositiveNumber);
    cp->add_option("--seed", ca.seed)->capture_default_str();
    cp->add_option("--trunc", ca.trunc, "truncation Z")->capture_default_str()->check(CLI::Range(100L, 100000000L));
    cp->add_option("--jump-guard", ca.jump_guard)->capture_default_str()->check(CLI::Range(0.0, 0.5));
    cp->add_option("--out", ca.out)->capture_default_str();
    cp->callback([&] { run = [&] { return cmd_count(ca, g); }; });

    OracleArgs oa;
    auto* op = app.add_subcommand("oracle", "dump the exact partition records of one stage");
    op->add_option("--config", oa.config)->required()->check(CLI::ExistingFile);
    op->add_option("--stage", oa.stage)->capture_default_str()->check(CLI::PositiveNumber);
    op->add_option("--out", oa.out)->capture_default_str();
    op->callback([&] { run = [&] { return cmd_oracle(oa, g); }; });

    VerifyArgs va;
    auto* vp = app.add_subcommand("verify", "run the verification suites");
    vp->add_option("--suite", va.suite)->capture_default_str()->check(CLI::IsMember({"oracle", "zeta", "spectra", "counting", "all"}));
    vp->add_option("--budget", va.budget, "oracle stage budget, e.g. K=10");
    vp->add_option("--kmax", va.kmax)->capture_default_str()->check(CLI::PositiveNumber);
    vp->add_option("--trunc", va.trunc)->capture_default_str()->check(CLI::Range(100L, 100000000L));
    vp->add_option("--jump-guard", va.jump_guard)->capture_default_str()->check(CLI::Range(0.0, 0.5));
    vp->add_option("--out", va.out, "also write the report here");
    vp->callback([&] { run = [&] { return cmd_verify(va, g); }; });

    CLI11_PARSE(app, argc, argv);
    try {
        rc = run();
    } catch (const ConfigError& e) {
        std::cerr << "config error at " << e.what() << "\n";
        rc = 2;
    } catch (const RegularityAmbiguity& e) {
        std::cerr << "ambiguous regularity: " << e.what() << "\n";
        rc = 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = 2;
    }
    return rc;
}
