#pragma once

#include "derham/piecewise_form.hpp"

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <vector>

namespace derham {

/// ω̃(x, s) = (1 − s)·ω(x) on σ × [0, 1] for each maximal σ; the last
/// variable of every piece is s.
struct PrismForm {
    std::shared_ptr<const SimplicialComplex> complex;
    int degree = 0;
    std::map<Simplex, PolyForm> pieces;
};

PrismForm extend_cylinder(const PiecewiseForm& w);
/// Restriction to the slice s = value (drops ds terms).
PiecewiseForm prism_slice(const PrismForm& w, const Rational& value);
PrismForm exterior_d(const PrismForm& w);
/// Product metric: unit-edge simplices times the unit interval.
double prism_lp_norm(const PrismForm& w, double p, int quad_degree = 12);
double prism_sobolev_norm(const PrismForm& w, double p, int quad_degree = 12);

/// Polynomial form on U = (a-simplex) × [0, 1]^q, carried into the t chart
/// of an m-simplex by `map` (u ↦ t, with Jacobian m × (a + q), row-major).
struct ChartedPiece {
    int simplex_dim = 0;
    int cube_dim = 0;
    PolyForm form;
    std::function<void(std::span<const double>, std::span<double>, std::span<double>)> map;
};

/// Form on one simplex assembled from charted pieces with disjoint images.
struct ChartedForm {
    Simplex simplex;
    int degree = 0;
    std::vector<ChartedPiece> pieces;
};

/// Extension result on a complex: one charted form per maximal simplex.
struct ExtendedForm {
    std::shared_ptr<const SimplicialComplex> complex;
    int degree = 0;
    std::map<Simplex, ChartedForm> forms;
};

double extended_lp_norm(const ExtendedForm& w, double p, int quad_degree = 12);
double extended_sobolev_norm(const ExtendedForm& w, double p, int quad_degree = 12);

struct ExtensionReport {
    ExtendedForm form;
    double input_norm = 0;   // ‖ω‖_{p,p} on the source
    double output_norm = 0;  // ‖ω̃‖_{p,p} on the target
    std::vector<double> step_norms;  // ‖·‖_{p,p} after each dimension step
    double trace_error = 0;  // largest coefficient gap between ω̃ on the source and ω
    bool inequality_holds = false;
};

/// Collar extension into an n-simplex Δ: on the cone over each facet F,
/// x = b + (1 − s/2)(y − b) with y ∈ F, b the barycenter, and
/// ω̃ = (1 − s)·ω(y); ω̃ vanishes on the inner copy scaled by 1/2.
/// `w` lives on the boundary complex of Δ.
ExtensionReport extend_from_boundary(const PiecewiseForm& w, double p, int quad_degree = 12);

/// Dimension-by-dimension collar extension from the skeleton carrying `w`
/// to the whole of `k`.
ExtensionReport extend_from_skeleton(const PiecewiseForm& w, std::shared_ptr<const SimplicialComplex> k, double p,
                                     int quad_degree = 12);

/// Smallest and largest singular value of the collar map (y, s) ↦ x of an
/// n-simplex, in the unit-edge metrics.
std::pair<double, double> collar_lipschitz_constants(int n);

/// Top-degree form on the geodesic cap |u| ≤ a of S^k around the north pole
/// (u normal coordinates), extended to the sphere: coefficients are carried
/// radially out of the cap and cut off by a smooth bump β with β = 1 on the
/// cap and β = 0 on the antipodal cap B′ of the same radius.
struct SphereForm {
    int dim = 0;
    double cap_radius = 0;
    std::function<double(std::span<const double>)> coefficient;  // of du_1∧…∧du_k
    double support_radius() const;  // π − a
};

SphereForm extend_by_zero_sphere(const PolyForm& w, double cap_radius);

}  // namespace derham
