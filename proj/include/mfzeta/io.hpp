#pragma once

#include "mfzeta/dimensions.hpp"
#include "mfzeta/oracle.hpp"
#include "mfzeta/spectra.hpp"
#include "mfzeta/zeta.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <complex>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfzeta {

inline constexpr const char* tool_version = "0.1.0";

// Shortest decimal that reads back to the same double.
inline std::string fmt(double v) {
    if (v == 0) return "0";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw std::runtime_error("to_chars failed");
    return std::string(buf, end);
}

inline nlohmann::json to_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

    void row(std::vector<std::string> cells) {
        if (cells.size() != header_.size()) throw std::logic_error("csv row width mismatch");
        rows_.push_back(std::move(cells));
    }

    // Body only: header plus rows. This is what must stay byte-identical between runs.
    std::string body() const {
        std::string s = line(header_);
        for (const auto& r : rows_) s += line(r);
        return s;
    }
    std::string str(const std::string& manifest_name) const { return body() + "# manifest: " + manifest_name + "\n"; }
    std::size_t size() const { return rows_.size(); }

private:
    static std::string quote(const std::string& c) {
        if (c.find_first_of(",\"\n") == std::string::npos) return c;
        std::string q = "\"";
        for (char ch : c) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    }
    static std::string line(const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + quote(cells[i]);
        return s + "\n";
    }
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline std::string utc_timestamp() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct RunManifest {
    std::string command;
    std::string config;
    nlohmann::json parameters = nlohmann::json::object();
    std::string version = tool_version;
    std::string timestamp = utc_timestamp();
    std::vector<std::string> outputs;

    nlohmann::json to_json() const {
        return {{"command", command}, {"config", config},      {"parameters", parameters},
                {"version", version}, {"timestamp", timestamp}, {"outputs", outputs}};
    }
};

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path);
}

inline CsvWriter oracle_csv(const std::vector<IntervalRecord>& records, const PrecisionLadder& ladder = {}) {
    CsvWriter w({"stage", "k", "count", "mass", "length", "regularity", "key"});
    auto groups = group_by_regularity(records, ladder);
    auto key_of = [&](const IntervalRecord& r) -> std::string {
        if (r.gap || r.mass.is_zero()) return RegularityKey::infinite().str();
        LogRatio lr{factorize(r.mass), factorize(r.length)};
        // the merged group this record landed in
        for (const auto& [k, g] : groups)
            if (g.alpha_exact && near_equal(g.alpha_float, lr.value()) && equal(*g.alpha_exact, lr, ladder))
                return k.str();
        return candidate_key(r, lr).str();
    };
    for (const auto& r : records) {
        std::string kv;
        for (std::size_t i = 0; i < r.k.size(); ++i) kv += (i ? " " : "") + std::to_string(r.k[i]);
        if (r.gap) kv = "gap@" + std::to_string(r.gap_level) + (kv.empty() ? "" : ":" + kv);
        double a = (r.gap || r.mass.is_zero()) ? std::numeric_limits<double>::infinity()
                                               : LogRatio{factorize(r.mass), factorize(r.length)}.value();
        w.row({std::to_string(r.stage), kv, r.count.get_str(), r.mass.str(), r.length.str(),
               std::isinf(a) ? "inf" : fmt(a), key_of(r)});
    }
    return w;
}

inline CsvWriter spectrum_csv(const SpectrumResult& r) {
    CsvWriter w({"alpha", "f", "key", "alpha_exact", "f_exact"});
    for (const auto& p : r.points) w.row({fmt(p.alpha), fmt(p.f), p.key.str(), p.alpha_exact, p.f_exact});
    return w;
}

inline CsvWriter envelope_csv(const std::vector<std::pair<double, double>>& breakpoints) {
    CsvWriter w({"alpha", "f"});
    for (const auto& [a, f] : breakpoints) w.row({fmt(a), fmt(f)});
    return w;
}

inline CsvWriter legendre_csv(const LegendrePipeline& L) {
    CsvWriter w({"q", "b", "b_prime", "t", "b_star", "residual"});
    for (std::size_t i = 0; i < L.q_grid.size(); ++i)
        w.row({fmt(L.q_grid[i]), fmt(L.b_values[i]), fmt(L.b_prime_values[i]), fmt(L.t_values[i]),
               fmt(L.b_star_values[i]), fmt(L.residuals[i])});
    return w;
}

inline nlohmann::json tapestry_json(const Tapestry& t) {
    auto arr = nlohmann::json::array();
    for (const auto& e : t.entries) {
        const auto& L = e.lattice;
        cplx res = L.residue.value_or(cplx(NAN, NAN));
        auto poles = nlohmann::json::array();
        for (auto w : L.poles) poles.push_back(to_json(w));
        arr.push_back({{"alpha", e.alpha.to_double()},
                       {"alpha_exact", e.alpha.str()},
                       {"real_part", L.real_part},
                       {"period", L.period},
                       {"shift", L.phase_shift},
                       {"residue_re", res.real()},
                       {"residue_im", res.imag()},
                       {"poles", poles}});
    }
    return arr;
}

}  // namespace mfzeta
