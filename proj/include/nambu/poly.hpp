#pragma once

#include "nambu/errors.hpp"
#include "nambu/scalars.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace nambu {

// Hard cap on ambient dimension for the polynomial backend; raises a
// StructuralError past it.  Every structure in scope is far below.
inline constexpr int kMaxVars = 16;

/// Exponent vector of one monomial, fixed-width for cheap comparison.
struct Monomial {
    std::array<std::uint8_t, kMaxVars> e{};

    int degree() const {
        int d = 0;
        for (auto v : e) d += v;
        return d;
    }
    bool operator==(const Monomial&) const = default;
    bool operator<(const Monomial& o) const { return e < o.e; }
};

/// Sparse multivariate polynomial with exact rational coefficients over
/// variables x1..xn.  Terms are kept sorted by monomial, no zero terms.
class ExactPoly {
public:
    struct Term {
        Monomial m;
        Rat c;
        bool operator==(const Term&) const = default;
    };

    explicit ExactPoly(int n = 0) : n_(n) { check_n(n); }

    static ExactPoly constant(int n, Rat c);
    static ExactPoly variable(int n, int index);  // 1-based
    static ExactPoly monomial(int n, const Monomial& m, Rat c);

    int n() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rat constant_value() const;  // requires is_constant()
    int total_degree() const;
    const std::vector<Term>& terms() const { return terms_; }

    ExactPoly operator-() const;
    ExactPoly& operator+=(const ExactPoly& o);
    ExactPoly& operator-=(const ExactPoly& o);
    friend ExactPoly operator+(ExactPoly a, const ExactPoly& b) { return a += b; }
    friend ExactPoly operator-(ExactPoly a, const ExactPoly& b) { return a -= b; }
    friend ExactPoly operator*(const ExactPoly& a, const ExactPoly& b);
    ExactPoly& operator*=(const ExactPoly& o) { return *this = *this * o; }
    ExactPoly& operator*=(const Rat& s);
    friend ExactPoly operator*(ExactPoly a, const Rat& s) { return a *= s; }
    friend ExactPoly operator*(const Rat& s, ExactPoly a) { return a *= s; }

    bool operator==(const ExactPoly& o) const { return n_ == o.n_ && terms_ == o.terms_; }

    ExactPoly derivative(int var) const;  // d/dx_var, 1-based

    Rat eval(const std::vector<Rat>& x) const;
    double eval(const std::vector<double>& x) const;

    /// Substitutes x_i -> images[i-1]; images are polynomials over m variables.
    ExactPoly substitute(const std::vector<ExactPoly>& images) const;

    /// Reinterprets over a larger variable count (new trailing variables).
    ExactPoly extended(int new_n) const;

    /// Deterministic canonical text form, parseable by parse_poly.
    std::string to_string() const;

    /// Raw term insertion used by builders; merges and prunes zeros.
    void add_term(const Monomial& m, const Rat& c);

private:
    static void check_n(int n) {
        if (n < 0 || n > kMaxVars)
            throw StructuralError("ExactPoly: dimension out of range");
    }
    void normalize();

    int n_;
    std::vector<Term> terms_;
};

/// Parses the canonical polynomial grammar: rational or decimal literals,
/// variables x1..xn, '+', '-', '*', '^', parentheses.  Throws ParseError with
/// a character position on malformed input.
ExactPoly parse_poly(const std::string& text, int n);

}  // namespace nambu
