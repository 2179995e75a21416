#pragma once

#include "derham/complex.hpp"
#include "derham/poly_form.hpp"

#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>

namespace derham {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Affine map from the barycentric chart of `face` to that of `parent`.
/// Coordinates of an m-simplex (v_0 < … < v_m) are t_1..t_m = λ_{v_1}..λ_{v_m};
/// λ_{v_0} = 1 - Σ t.
AffineMap face_embedding(const Simplex& face, const Simplex& parent);

/// Trace of a form written in the chart of `parent` onto `face`.
PolyForm face_trace(const PolyForm& w, const Simplex& parent, const Simplex& face);

/// Barycentric coordinate λ_{v_i} of an m-simplex as a polynomial in t.
Polynomial barycentric_coordinate(int m, int i, int nvars = -1);

/// Form on a finite complex: one polynomial form per maximal simplex,
/// written in that simplex's barycentric chart. Missing pieces are zero.
class PiecewiseForm {
public:
    PiecewiseForm() = default;
    PiecewiseForm(std::shared_ptr<const SimplicialComplex> complex, int degree);

    const SimplicialComplex& complex() const { return *complex_; }
    std::shared_ptr<const SimplicialComplex> complex_ptr() const { return complex_; }
    int degree() const { return degree_; }
    const std::map<Simplex, PolyForm>& pieces() const { return pieces_; }

    /// Piece on a maximal simplex (zero form when unset).
    PolyForm piece(const Simplex& s) const;
    void set_piece(const Simplex& s, const PolyForm& w);
    /// Trace on any simplex of the complex, taken from the first maximal
    /// simplex containing it.
    PolyForm trace(const Simplex& s) const;

    PiecewiseForm& operator+=(const PiecewiseForm& o);
    PiecewiseForm& operator-=(const PiecewiseForm& o);
    PiecewiseForm& operator*=(const Rational& c);
    friend PiecewiseForm operator+(PiecewiseForm a, const PiecewiseForm& b) { return a += b; }
    friend PiecewiseForm operator-(PiecewiseForm a, const PiecewiseForm& b) { return a -= b; }
    friend PiecewiseForm operator*(const Rational& c, PiecewiseForm a) { return a *= c; }
    friend bool operator==(const PiecewiseForm& a, const PiecewiseForm& b);

    bool is_zero() const;
    int coefficient_degree() const;

private:
    std::shared_ptr<const SimplicialComplex> complex_;
    int degree_ = 0;
    std::map<Simplex, PolyForm> pieces_;
    std::vector<Simplex> maximal_;
};

struct CompatibilityReport {
    bool compatible = true;
    std::string detail;  // first failing face, when any
};

/// Exact check that traces from all maximal simplices agree on shared faces.
CompatibilityReport check_compatibility(const PiecewiseForm& w);

PiecewiseForm exterior_d(const PiecewiseForm& w);
PiecewiseForm wedge(const PiecewiseForm& a, const PiecewiseForm& b);

/// Restriction to the closure of one face; the result lives on that closure.
PiecewiseForm restrict_to_face(const PiecewiseForm& w, const Simplex& face);
/// Restriction to a subcomplex whose simplices all belong to w's complex.
PiecewiseForm restrict_to_subcomplex(const PiecewiseForm& w, std::shared_ptr<const SimplicialComplex> sub);

/// Gram matrix of the k-fold wedge basis dt_I in the unit-edge chart of an
/// m-simplex: |ω|^2 = cᵀ G_k c for coefficient vector c over index_sets(m,k).
const std::vector<std::vector<double>>& wedge_gram(int m, int k);

/// Volume of the unit-edge regular m-simplex: √(m+1)/(m!·√(2^m)).
double unit_simplex_volume(int m);

/// Pointwise Euclidean norm of a polynomial form of an m-simplex chart at t.
double pointwise_norm(const PolyForm& w, std::span<const double> t);

struct NormOptions {
    /// Simplex quadrature degree; defaults to 2·(coefficient degree)+2.
    std::optional<int> quad_degree;
};

double lp_norm(const PiecewiseForm& w, double p, const NormOptions& opt = {});
double sobolev_norm(const PiecewiseForm& w, double p, const NormOptions& opt = {});

}  // namespace derham
