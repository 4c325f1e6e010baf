#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pellabel/rat.hpp"

namespace pellabel {

// Dense univariate polynomial over the rationals.
// Coefficient i is the coefficient of x^i; the top coefficient is nonzero.
class RatPoly {
  public:
    static constexpr int kZeroDeg = -1;

    RatPoly() = default;
    explicit RatPoly(const Rat& c);

    static RatPoly from_coeffs(std::vector<Rat> coeffs);
    static RatPoly monomial(const Rat& c, int deg);
    static RatPoly variable();

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }

    const Rat& coeff(int i) const;          // 0 outside the stored range
    const Rat& leading_coeff() const;        // throws on the zero polynomial
    const std::vector<Rat>& coeffs() const { return c_; }

    RatPoly operator-() const;
    RatPoly& operator+=(const RatPoly& o);
    RatPoly& operator-=(const RatPoly& o);
    RatPoly& operator*=(const RatPoly& o);
    RatPoly& operator*=(const Rat& s);

    friend RatPoly operator+(RatPoly a, const RatPoly& b) { return a += b; }
    friend RatPoly operator-(RatPoly a, const RatPoly& b) { return a -= b; }
    friend RatPoly operator*(RatPoly a, const RatPoly& b) { return a *= b; }
    friend RatPoly operator*(RatPoly a, const Rat& s) { return a *= s; }
    friend RatPoly operator*(const Rat& s, RatPoly a) { return a *= s; }

    bool operator==(const RatPoly& o) const { return c_ == o.c_; }

    // Quotient and remainder with deg(rem) < deg(div); throws on zero divisor.
    static std::pair<RatPoly, RatPoly> divrem(const RatPoly& num, const RatPoly& div);

    RatPoly derivative() const;
    RatPoly compose(const RatPoly& inner) const;
    RatPoly monic() const;                   // throws on the zero polynomial

    Rat eval(const Rat& x) const;
    std::complex<double> eval(std::complex<double> x) const;

    std::string str() const;

  private:
    void trim();
    std::vector<Rat> c_;
};

// Monic gcd; gcd(0, 0) = 0.
RatPoly poly_gcd(const RatPoly& a, const RatPoly& b);

// Monic product of the distinct irreducible factors of f.
RatPoly squarefree_part(const RatPoly& f);

// Chebyshev polynomial of the first kind, T_n(cos t) = cos(n t).
RatPoly chebyshev_T(int n);

// Exact square root of f if f is the square of a rational polynomial.
std::optional<RatPoly> sqrt_exact(const RatPoly& f);

// Parses sums of terms in x with +, -, *, ^, parentheses, rational literals
// (including a/b), and implicit multiplication ("6x^4", "2(x+1)").
RatPoly parse_poly(const std::string& text);

// Coefficient list for serialization, index = degree, rationals as "num/den".
// The zero polynomial becomes {"0"}.
std::vector<std::string> coeff_strings(const RatPoly& f);
RatPoly poly_from_coeff_strings(const std::vector<std::string>& coeffs);

}  // namespace pellabel
