#pragma once

#include "derham/polynomial.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace derham {

/// Strictly increasing index set I ⊆ {0..dim-1} encoded as a bitmask.
using IndexSet = std::uint32_t;

inline int index_count(IndexSet s) { return std::popcount(s); }

/// Sign of dx_I ∧ dx_J relative to dx_{I∪J}; 0 when the sets overlap.
int wedge_sign(IndexSet a, IndexSet b);

/// All index sets of size k in {0..dim-1}, in increasing bitmask order.
std::vector<IndexSet> index_sets(int dim, int k);

/// Differential k-form on a coordinate patch of R^dim with polynomial
/// coefficients.
///
/// Coefficients may carry extra trailing variables (nvars() > dim()). Those
/// act as parameters: `exterior_d` only differentiates the first dim()
/// variables and no dx exists for them. Flow times, kernel variables and
/// similar symbolic quantities live there.
class PolyForm {
public:
    PolyForm() = default;
    PolyForm(int dim, int degree, int nvars = -1);

    static PolyForm function(const Polynomial& f, int dim);
    static PolyForm basis(int dim, IndexSet set, const Polynomial& coeff);
    /// dx_i as a 1-form.
    static PolyForm dx(int dim, int i, int nvars = -1);

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<IndexSet, Polynomial>& terms() const { return terms_; }
    Polynomial coefficient(IndexSet set) const;
    /// Largest total degree among coefficients (-1 for the zero form).
    int coefficient_degree() const;

    void add(IndexSet set, const Polynomial& coeff);

    PolyForm& operator+=(const PolyForm& o);
    PolyForm& operator-=(const PolyForm& o);
    PolyForm& operator*=(const Rational& c);
    friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
    friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
    friend PolyForm operator*(PolyForm a, const Rational& c) { return a *= c; }
    friend PolyForm operator*(const Rational& c, PolyForm a) { return a *= c; }
    /// Multiply every coefficient by a function.
    friend PolyForm operator*(const Polynomial& f, const PolyForm& w);
    friend bool operator==(const PolyForm& a, const PolyForm& b) {
        return a.dim_ == b.dim_ && a.degree_ == b.degree_ && a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    /// Apply a coefficient-wise polynomial transformation.
    template <class F>
    PolyForm map_coefficients(F&& f) const {
        PolyForm r(dim_, degree_, -2);
        bool first = true;
        for (const auto& [s, c] : terms_) {
            Polynomial m = f(c);
            if (first) {
                r.nvars_ = m.nvars();
                first = false;
            }
            r.add(s, m);
        }
        if (first) r.nvars_ = f(Polynomial(nvars_)).nvars();
        return r;
    }

    PolyForm resized(int nvars) const;

    /// Textual form: terms "c*x1^2*dx1^dx2" joined by " + " (1-based indices).
    std::string to_string() const;

private:
    int dim_ = 0;
    int degree_ = 0;
    int nvars_ = 0;
    std::map<IndexSet, Polynomial> terms_;
};

PolyForm parse_poly_form(const std::string& text, int dim, int degree);

/// Vector field with polynomial components (may carry parameters like PolyForm).
struct VectorFieldPoly {
    int dim = 0;
    std::vector<Polynomial> components;

    static VectorFieldPoly constant(int dim, const std::vector<Rational>& v, int nvars = -1);
    /// Affine field x ↦ A x + b.
    static VectorFieldPoly affine(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b);
    int nvars() const { return components.empty() ? dim : components.front().nvars(); }
};

/// Polynomial map from R^source_dim (plus parameters) into R^target_dim.
///
/// `components[i]` is the i-th target coordinate as a polynomial in the
/// source variables. Variables at index >= source_dim are parameters.
struct PolynomialMap {
    int source_dim = 0;
    std::vector<Polynomial> components;

    int target_dim() const { return static_cast<int>(components.size()); }
    int nvars() const { return components.empty() ? source_dim : components.front().nvars(); }
};

/// Affine map x ↦ M y + b with exact entries (M is target × source).
struct AffineMap {
    std::vector<std::vector<Rational>> matrix;
    std::vector<Rational> offset;

    int source_dim() const { return matrix.empty() ? 0 : static_cast<int>(matrix.front().size()); }
    int target_dim() const { return static_cast<int>(matrix.size()); }
    PolynomialMap to_polynomial_map(int nvars = -1) const;
    static AffineMap identity(int dim);
    static AffineMap translation(const std::vector<Rational>& v);
    AffineMap compose(const AffineMap& inner) const;  // this ∘ inner
};

PolyForm wedge(const PolyForm& a, const PolyForm& b);
PolyForm exterior_d(const PolyForm& w);
PolyForm interior_product(const VectorFieldPoly& x, const PolyForm& w);
PolyForm lie_derivative(const VectorFieldPoly& x, const PolyForm& w);

/// Pullback along a polynomial map. The form's parameters must be carried by
/// the map: components must cover all of w.nvars() variables, i.e. the map
/// has one image per form variable (spatial images first, then parameter
/// images). Use `pullback(AffineMap, …)` for the ordinary case.
PolyForm pullback(const PolynomialMap& map, const PolyForm& w);
PolyForm pullback(const AffineMap& map, const PolyForm& w);

/// Append `count` parameter variables to every coefficient.
PolyForm add_parameters(const PolyForm& w, int count);

}  // namespace derham
