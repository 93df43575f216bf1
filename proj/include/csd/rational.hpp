#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

#include "csd/errors.hpp"

namespace csd {

using Rational = boost::rational<long long>;

/** Exact rational extended by one shared symbolic infinitesimal:
 * value = q + k * eps with eps -> 0+. The total order is lexicographic
 * (q first, then k), which is the limit order for every sufficiently small
 * positive eps. Arithmetic is exact; nothing here touches floating point.
 * Houses the "a+" / "a-" exponent notation: "a+" = a + eps, "a--" = a minus
 * two ticks, with tick sizes chosen per corpus entry. */
struct ExtendedRational {
    Rational q{0};
    Rational k{0};

    ExtendedRational() = default;
    ExtendedRational(Rational q_, Rational k_ = Rational(0)) : q(q_), k(k_) {}
    ExtendedRational(long long num, long long den, Rational k_ = Rational(0))
        : q(num, den), k(k_) {}

    friend ExtendedRational operator+(const ExtendedRational& a, const ExtendedRational& b) {
        return {a.q + b.q, a.k + b.k};
    }
    friend ExtendedRational operator-(const ExtendedRational& a, const ExtendedRational& b) {
        return {a.q - b.q, a.k - b.k};
    }
    ExtendedRational operator-() const { return {-q, -k}; }
    friend ExtendedRational operator*(const Rational& c, const ExtendedRational& a) {
        return {c * a.q, c * a.k};
    }

    friend bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
        return a.q == b.q && a.k == b.k;
    }
    friend bool operator!=(const ExtendedRational& a, const ExtendedRational& b) { return !(a == b); }
    friend bool operator<(const ExtendedRational& a, const ExtendedRational& b) {
        return a.q < b.q || (a.q == b.q && a.k < b.k);
    }
    friend bool operator>(const ExtendedRational& a, const ExtendedRational& b) { return b < a; }
    friend bool operator<=(const ExtendedRational& a, const ExtendedRational& b) { return !(b < a); }
    friend bool operator>=(const ExtendedRational& a, const ExtendedRational& b) { return !(a < b); }

    bool positive() const { return q > 0 || (q == 0 && k > 0); }
    bool nonnegative() const { return q > 0 || (q == 0 && k >= 0); }
};

inline ExtendedRational max_with_zero(const ExtendedRational& x) {
    return x > ExtendedRational{} ? x : ExtendedRational{};
}

inline std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << r.numerator() << '/' << r.denominator();
    return os.str();
}

// Render as "p/q", "p/q+kε" or "p/q-kε"; a fractional k prints as "a/b".
inline std::string to_string(const ExtendedRational& x) {
    std::string s = to_string(x.q);
    if (x.k != Rational(0)) {
        const Rational a = x.k > Rational(0) ? x.k : -x.k;
        s += x.k > Rational(0) ? '+' : '-';
        if (a.denominator() == 1)
            s += std::to_string(a.numerator());
        else
            s += to_string(a);
        s += "\xce\xb5";  // UTF-8 epsilon
    }
    return s;
}

namespace detail {

inline Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(std::stoll(text));
        return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    } catch (const std::exception&) {
        throw ConfigError("cannot parse rational: '" + text + "'");
    }
}

}  // namespace detail

// Parse "p/q", "p/q+kε", "p/q-kε" (accepts "eps" for the epsilon glyph).
inline ExtendedRational parse_extended_rational(std::string text) {
    // strip the epsilon marker
    bool has_eps = false;
    for (const std::string glyph : {std::string("\xce\xb5"), std::string("eps")}) {
        const auto pos = text.rfind(glyph);
        if (pos != std::string::npos && pos + glyph.size() == text.size()) {
            has_eps = true;
            text.resize(pos);
            break;
        }
    }
    if (!has_eps) return {detail::parse_rational(text)};

    // split at the last top-level '+'/'-' separating q from k
    for (size_t i = text.size(); i-- > 1;) {
        if (text[i] == '+' || text[i] == '-') {
            const Rational q = detail::parse_rational(text.substr(0, i));
            std::string kpart = text.substr(i + 1);
            if (kpart.empty()) throw ConfigError("missing epsilon coefficient");
            Rational k = detail::parse_rational(kpart);
            if (text[i] == '-') k = -k;
            return {q, k};
        }
    }
    // pure epsilon multiple, "kε"
    return {Rational(0), detail::parse_rational(text)};
}

}  // namespace csd
