#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>

#include "ellfib/exact_linalg.hpp"

namespace ellfib {

/// Exponent pair (power of s, power of t).
struct Monomial {
    std::uint32_t s = 0;
    std::uint32_t t = 0;

    std::uint32_t total_degree() const { return s + t; }
    friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// Sparse bivariate polynomial in s, t with rational coefficients. Only
/// nonzero coefficients are stored.
class BivariatePoly {
public:
    BivariatePoly() = default;
    static BivariatePoly constant(const Rational& c);
    static BivariatePoly s();
    static BivariatePoly t();
    static BivariatePoly monomial(const Rational& c, std::uint32_t s_exp, std::uint32_t t_exp);

    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, Rational>& terms() const { return terms_; }
    Rational coefficient(Monomial m) const;

    BivariatePoly& operator+=(const BivariatePoly& rhs);
    BivariatePoly& operator-=(const BivariatePoly& rhs);
    BivariatePoly operator-() const;
    BivariatePoly pow(unsigned exponent) const;

    friend BivariatePoly operator+(BivariatePoly lhs, const BivariatePoly& rhs) { return lhs += rhs; }
    friend BivariatePoly operator-(BivariatePoly lhs, const BivariatePoly& rhs) { return lhs -= rhs; }
    friend BivariatePoly operator*(const BivariatePoly& lhs, const BivariatePoly& rhs);
    friend BivariatePoly operator*(const Rational& c, const BivariatePoly& p);
    friend bool operator==(const BivariatePoly&, const BivariatePoly&) = default;

    /// Infix form accepted back by the input parser, e.g. "4*s^3 + 27*s^2".
    /// Terms appear by decreasing total degree, then decreasing power of s.
    std::string to_string() const;

private:
    void add_term(Monomial m, const Rational& c);

    std::map<Monomial, Rational> terms_;
};

}  // namespace ellfib
