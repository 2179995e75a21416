#pragma once

#include "derham/rational.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace derham {

/// Multivariate polynomial with exact rational coefficients.
///
/// Terms are keyed by exponent vectors of length `nvars()`; zero coefficients
/// are never stored, so structural equality is polynomial equality.
class Polynomial {
public:
    using Exponents = std::vector<int>;

    explicit Polynomial(int nvars = 0) : nvars_(nvars) {}

    static Polynomial constant(int nvars, const Rational& c);
    static Polynomial variable(int nvars, int index);
    static Polynomial monomial(Exponents exponents, const Rational& c);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    /// Total degree; -1 for the zero polynomial.
    int degree() const;
    /// Largest exponent of a single variable.
    int degree_in(int var) const;
    const std::map<Exponents, Rational>& terms() const { return terms_; }

    void add_term(const Exponents& e, const Rational& c);

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Rational& c);
    Polynomial operator-() const;
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    Polynomial pow(int e) const;
    Polynomial derivative(int var) const;

    /// Replace variable i by `images[i]`; all images share one variable count,
    /// which becomes the variable count of the result.
    Polynomial substitute(std::span<const Polynomial> images) const;

    /// Integrate variable `var` over [0, 1]; the variable is kept but absent.
    Polynomial integrate_unit(int var) const;
    /// Set variable `var` to a value; the variable is kept but absent.
    Polynomial set_variable(int var, const Rational& value) const;

    /// Change the variable count. Shrinking requires the dropped variables
    /// to be absent.
    Polynomial resized(int nvars) const;

    Rational evaluate(std::span<const Rational> x) const;
    double evaluate(std::span<const double> x) const;

    /// Exact integral over the reference simplex {t_i >= 0, sum t_i <= 1} in
    /// the first `dim` variables (Dirichlet moment formula).
    Rational integrate_reference_simplex(int dim) const;

    std::string to_string() const;

private:
    int nvars_ = 0;
    std::map<Exponents, Rational> terms_;
};

/// Double-precision copy of a polynomial for hot evaluation loops.
class CompiledPolynomial {
public:
    CompiledPolynomial() = default;
    explicit CompiledPolynomial(const Polynomial& p);
    double operator()(std::span<const double> x) const;
    /// Value and gradient with respect to the first `dim` variables.
    double value_and_gradient(std::span<const double> x, std::span<double> grad) const;
    bool is_zero() const { return coeffs_.empty(); }

private:
    int nvars_ = 0;
    std::vector<int> exps_;  // row-major, nvars_ per term
    std::vector<double> coeffs_;
    int max_exp_ = 0;
};

/// Parse the textual monomial format "c*x1^2*x3" (1-based variables).
Polynomial parse_polynomial(const std::string& text, int nvars);

}  // namespace derham
