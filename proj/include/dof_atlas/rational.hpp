#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dofatlas {

/// Exact rational scalar used for all region arithmetic. Coefficients in
/// this toolkit are ratios of small integers (antenna counts), so a 64-bit
/// numerator/denominator never comes close to overflow.
using Rational = boost::rational<std::int64_t>;

/// Canonical "p/q" form: q > 0, gcd(p,q) = 1 (boost::rational maintains
/// both). Integers render as "p/1" so output is byte-stable.
inline std::string to_canonical_string(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Parses "p/q" or a bare integer "p". Throws std::invalid_argument on
/// anything else (including q == 0).
inline Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const std::int64_t p = std::stoll(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return Rational(p);
        }
        const std::int64_t p = std::stoll(text.substr(0, slash), &used);
        if (used != slash) throw std::invalid_argument(text);
        const std::string den = text.substr(slash + 1);
        const std::int64_t q = std::stoll(den, &used);
        if (used != den.size()) throw std::invalid_argument(text);
        if (q == 0) throw std::invalid_argument(text);
        return Rational(p, q);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational: '" + text + "'");
    }
}

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace dofatlas
