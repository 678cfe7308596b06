#pragma once

#include "mfzeta/ifs.hpp"
#include "mfzeta/regularity.hpp"

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfzeta {

namespace detail {

inline std::string strip(std::string s) {
    std::string out;
    for (char c : s)
        if (c != ' ' && c != '\t') out += c;
    return out;
}

inline double to_number(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw std::invalid_argument("cannot read " + what + " from '" + s + "'");
    return v;
}

inline ExponentVector to_vector(std::string s) {
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
    ExponentVector v;
    std::size_t at = 0;
    while (at <= s.size()) {
        std::size_t comma = s.find(',', at);
        std::string part = s.substr(at, comma == std::string::npos ? std::string::npos : comma - at);
        double x = to_number(part, "exponent");
        if (x < 0 || x != double(long(x))) throw std::invalid_argument("exponents must be nonnegative integers");
        v.push_back(long(x));
        if (comma == std::string::npos) break;
        at = comma + 1;
    }
    return v;
}

}  // namespace detail

// "0.8", "0.8+2i", "0.8-2.5i", "2i" or "re,im".
inline std::complex<double> parse_complex(const std::string& text) {
    std::string s = detail::strip(text);
    if (s.empty()) throw std::invalid_argument("empty complex number");
    if (auto c = s.find(','); c != std::string::npos)
        return {detail::to_number(s.substr(0, c), "real part"), detail::to_number(s.substr(c + 1), "imaginary part")};
    if (s.back() != 'i') return {detail::to_number(s, "real part"), 0};
    s.pop_back();
    // split at the last sign that is not an exponent sign
    std::size_t cut = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;)
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            cut = i;
            break;
        }
    auto imag = [](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return detail::to_number(t, "imaginary part");
    };
    if (cut == std::string::npos) return {0, imag(s)};
    return {detail::to_number(s.substr(0, cut), "real part"), imag(s.substr(cut))};
}

// Regularity keys as written on the command line:
//   IFS:    "(1,2)" or "1,2" for an exponent vector, "c(2,1)" for a collapsed vector
//   atomic: "k1/K", "1", or "1+log:n" for the sigma1 level-n value
inline RegularityKey parse_key(const System& sys, const std::string& text) {
    std::string s = detail::strip(text);
    if (s.empty()) throw std::invalid_argument("empty regularity key");
    if (std::holds_alternative<WeightedIFS>(sys)) {
        const auto& ifs = std::get<WeightedIFS>(sys);
        if (s.rfind("c(", 0) == 0) return RegularityKey::collapsed(primitive_of(detail::to_vector(s.substr(1))));
        auto v = detail::to_vector(s);
        if (v.size() != ifs.N())
            throw std::invalid_argument("key " + s + " needs " + std::to_string(ifs.N()) + " entries");
        if (vector_sum(v) == 0) throw std::invalid_argument("key must be nonzero");
        return RegularityKey::vector(primitive_of(v));
    }
    if (std::holds_alternative<AtomicMeasureSpec>(sys)) {
        if (s.rfind("1+log:", 0) == 0) {
            double n = detail::to_number(s.substr(6), "level");
            if (n < 1 || n != double(long(n))) throw std::invalid_argument("level must be a positive integer");
            return RegularityKey::one_plus_log(long(n));
        }
        auto q = ExactRational::parse(s);
        if (!q.num().fits_slong_p() || !q.den().fits_slong_p()) throw std::invalid_argument("key too large");
        return RegularityKey::fraction(q.num().get_si(), q.den().get_si());
    }
    throw std::invalid_argument("fractal strings take no regularity key");
}

}  // namespace mfzeta
