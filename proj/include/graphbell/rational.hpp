#pragma once
// Exact rational arithmetic for the stabilizer mixing coefficients. The
// constraint "c_{1,k} + sum of matching c_{2,j} = 1" must hold exactly, not
// to rounding, so these are int64 fractions. Magnitudes stay tiny (digit
// numerators, denominators bounded by the vertex count).

#include <cstdint>
#include <string>

namespace graphbell {

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1);  // normalizes, den > 0

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;  // "p/q" or "p"

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
};

// Accepts "p", "p/q", and plain decimals like "0.25" (parsed exactly).
// Throws InputError("PARSE", ...) on anything else.
Rational parse_rational(const std::string& text);

}  // namespace graphbell
