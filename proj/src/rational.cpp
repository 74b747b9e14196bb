#include "graphbell/rational.hpp"

#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "graphbell/errors.hpp"

namespace graphbell {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw InputError("PARSE", "rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    if (num == 0) den = 1;
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
}

Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
}

Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num * b.num, a.den * b.den);
}

Rational parse_rational(const std::string& text) {
    auto bad = [&]() -> InputError {
        return InputError("PARSE", "cannot parse rational '" + text + "'");
    };
    if (text.empty()) throw bad();

    auto parse_int = [&](const std::string& s) -> std::int64_t {
        if (s.empty()) throw bad();
        std::size_t pos = 0;
        std::int64_t v;
        try {
            v = std::stoll(s, &pos);
        } catch (const std::exception&) {
            throw bad();
        }
        if (pos != s.size()) throw bad();
        return v;
    };

    auto slash = text.find('/');
    if (slash != std::string::npos) {
        return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    }

    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string whole = text.substr(0, dot);
        std::string frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 15) throw bad();
        bool neg = !whole.empty() && whole[0] == '-';
        std::int64_t w = whole.empty() || whole == "-" ? 0 : parse_int(whole);
        std::int64_t f = parse_int(frac);
        if (f < 0) throw bad();
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < frac.size(); i++) scale *= 10;
        std::int64_t n = (neg ? -1 : 1) * ((w < 0 ? -w : w) * scale + f);
        return Rational(n, scale);
    }

    return Rational(parse_int(text));
}

}  // namespace graphbell
