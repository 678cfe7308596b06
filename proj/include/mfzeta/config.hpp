#pragma once

#include "mfzeta/errors.hpp"
#include "mfzeta/ifs.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace mfzeta {

namespace detail {

inline ExactRational rational_field(const nlohmann::json& v, const std::string& path) {
    if (v.is_number_integer()) return ExactRational(v.get<long>());
    if (v.is_string()) {
        try {
            return ExactRational::parse(v.get<std::string>());
        } catch (const std::exception& e) {
            throw ConfigError(path, e.what());
        }
    }
    throw ConfigError(path, "expected a rational string \"p/q\" or an integer");
}

inline std::vector<ExactRational> rational_list(const nlohmann::json& doc, const std::string& key) {
    if (!doc.contains(key)) throw ConfigError(key, "missing");
    const auto& arr = doc.at(key);
    if (!arr.is_array()) throw ConfigError(key, "expected an array");
    std::vector<ExactRational> out;
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(rational_field(arr[i], key + "[" + std::to_string(i) + "]"));
    return out;
}

inline std::string string_field(const nlohmann::json& doc, const std::string& key) {
    if (!doc.contains(key)) throw ConfigError(key, "missing");
    if (!doc.at(key).is_string()) throw ConfigError(key, "expected a string");
    return doc.at(key).get<std::string>();
}

}  // namespace detail

inline System parse_system(const std::string& config_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(config_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("$", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("$", "expected an object");
    const std::string type = detail::string_field(doc, "type");
    if (type == "ifs") {
        return WeightedIFS(detail::rational_list(doc, "ratios"), detail::rational_list(doc, "probs"));
    }
    if (type == "atomic") {
        const std::string fam = detail::string_field(doc, "family");
        bool has_m = doc.contains("m");
        if (fam == "generalized") {
            if (!has_m) throw ConfigError("m", "missing (required for family generalized)");
            if (!doc.at("m").is_number_integer()) throw ConfigError("m", "expected an integer");
            return AtomicMeasureSpec::generalized(doc.at("m").get<long>());
        }
        if (has_m) throw ConfigError("m", "only applies to family generalized");
        if (fam == "sigma1") return AtomicMeasureSpec::sigma1();
        if (fam == "sigma2") return AtomicMeasureSpec::sigma2();
        throw ConfigError("family", "unknown atomic family '" + fam + "'");
    }
    if (type == "string") {
        const std::string fam = detail::string_field(doc, "family");
        if (fam == "cantor") return StringSpec{StringFamily::cantor};
        if (fam == "fibonacci") return StringSpec{StringFamily::fibonacci};
        throw ConfigError("family", "unknown string family '" + fam + "'");
    }
    throw ConfigError("type", "unknown system type '" + type + "'");
}

inline System load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("$", "cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_system(ss.str());
}

}  // namespace mfzeta
