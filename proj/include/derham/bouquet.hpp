#pragma once

#include "derham/global_regularize.hpp"

#include <array>
#include <functional>
#include <vector>

namespace derham {

/// 1-bouquet: m segments of radius 1 through the origin of ℝ², leaf i along
/// the angle α_i ∈ [0, π) with coordinate t ∈ [−1, 1].
struct BouquetModel {
    std::vector<double> angles;
    int leaves() const { return static_cast<int>(angles.size()); }
};

/// α_i = iπ/m.
BouquetModel make_bouquet(int leaves);
/// Throws invalid_argument unless the angles are distinct and lie in [0, π).
void validate_bouquet(const BouquetModel& model);
/// The 2m rays of the bouquet, ascending in [0, 2π).
std::vector<double> bouquet_ray_angles(const BouquetModel& model);

/// Form of degree 0 or 1 on a bouquet: on every leaf one polynomial piece
/// (one variable t) for t ≤ 0 and one for t ≥ 0.
struct BouquetForm {
    BouquetModel model;
    int degree = 0;
    std::vector<std::array<PolyForm, 2>> halves;
};

BouquetForm zero_bouquet_form(const BouquetModel& model, int degree);
/// Throws invalid_argument for a bad presentation or 0-form values that
/// disagree at the center.
void check_bouquet_form(const BouquetForm& w);
/// d of a 0-form; throws for 1-forms (top degree).
BouquetForm exterior_d(const BouquetForm& w);
/// (Σ_leaves ∫ |ω|^p + |dω|^p dt)^{1/p}.
double bouquet_sobolev_norm(const BouquetForm& w, double p);

/// π^*ω for the fold retraction π of the plane onto a star of rays: a point
/// at radius r in the half sector next to ray a, at angle |θ − θ_a| = sΔ with
/// Δ half the sector angle, goes to radius r(1 − s) on a. `ray_coefficient`
/// gives ω along ray a in the outward coordinate ρ.
FormField fold_extension(std::vector<double> ray_angles, int degree,
                         std::function<double(int ray, double rho)> ray_coefficient);
FormField fold_extension(const BouquetForm& w);

/// Pullback of a plane field to leaf i as a field on t ∈ (−1, 1).
FormField restrict_to_leaf(const FormField& f, const BouquetModel& model, int leaf);

struct BouquetExtension {
    FormField field;            // (1 − s)·ρ_a^*ω on each half sector
    double input_norm = 0;      // ‖ω‖_{p,p} on the bouquet
    double output_norm = 0;     // ‖ω̃‖_{p,p} on B₁, infinite when divergent
    bool output_finite = true;
    double trace_error = 0;     // largest gap between ω̃ on the leaves and ω
    bool inequality_holds = false;
};

/// Collar extension into the complement of the bouquet in B₁: on the half
/// sector next to ray a, ω̃ = (1 − s)·ρ_a^*ω with ρ_a the radial projection
/// onto a, so ω̃ vanishes on the bisectors.
BouquetExtension extend_bouquet(const BouquetForm& w, double p);

struct BouquetRegularization {
    std::vector<FormField> regularized;  // res 𝓡ω per leaf
    std::vector<FormField> homotopy;     // res 𝓐ω per leaf
    double residual_norm = 0;            // ‖res 𝓡ω − ω − d res 𝓐ω − res 𝓐dω‖_p over the leaves
    bool reduced_to_segment = false;     // m = 1: plain localized operators on the leaf
};

/// 𝓡ω = res R_ε π^*ω and 𝓐ω = res A_ε π^*ω with R_ε, A_ε the localized
/// operators on B₁ ⊂ ℝ². `opt` supplies profile, ε and point counts; the
/// kernel dimension is set here.
BouquetRegularization bouquet_star_regularize(const BouquetForm& w, const LocalOptions& opt, double p = 2.0);

}  // namespace derham
