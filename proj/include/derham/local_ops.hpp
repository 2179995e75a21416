#pragma once

#include "derham/kernel.hpp"
#include "derham/poly_form.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace derham {

/// Numerically evaluated k-form on (part of) R^n. Coefficients are returned
/// over index_sets(dim, degree) in the dx frame.
///
/// `singular_points` (n = 1) and `singular_rays` (n = 2, angles of rays from
/// the origin) describe where the field may fail to be smooth; quadrature
/// splits there.
struct FormField {
    int dim = 0;
    int degree = 0;
    std::function<void(std::span<const double>, std::span<double>)> eval;
    std::vector<double> singular_points;
    std::vector<double> singular_rays;

    int coefficient_count() const;
    std::vector<double> operator()(std::span<const double> x) const;
};

FormField form_field(const PolyForm& w);
FormField zero_field(int dim, int degree);
/// Exterior derivative by fourth-order differences; one-sided next to
/// singular points in one dimension, with the step shrinking towards the
/// unit sphere.
FormField numeric_d(const FormField& f, double step = 1e-3);
FormField operator+(const FormField& a, const FormField& b);
FormField operator-(const FormField& a, const FormField& b);

/// Radial ball diffeomorphism h(x) = x/√(1+|x|²) of R^n onto the open unit
/// ball, and its inverse.
std::vector<double> ball_h(std::span<const double> x);
std::vector<double> ball_h_inv(std::span<const double> y);
/// Jacobian of h at x (row-major n×n).
std::vector<double> ball_dh(std::span<const double> x);
/// Jacobian of h⁻¹ at y, |y| < 1.
std::vector<double> ball_dh_inv(std::span<const double> y);

/// 𝔰_w(x) = h(h⁻¹x + w) for |x| < 1, x otherwise; with its Jacobian.
std::vector<double> localized_flow(std::span<const double> w, std::span<const double> x,
                                   std::vector<double>* jacobian = nullptr);

/// Coefficients of F^*ω at a point, given ω's coefficients at F(x) and DF(x).
std::vector<double> pullback_coefficients(int dim, int degree, std::span<const double> omega_at_image,
                                          std::span<const double> jacobian);
/// Same for F: R^source_dim → R^target_dim with DF target_dim × source_dim.
std::vector<double> pullback_coefficients(int target_dim, int source_dim, int degree, std::span<const double> omega_at_image,
                                          std::span<const double> jacobian);
/// ι_Y on a coefficient vector.
std::vector<double> interior_coefficients(int dim, int degree, std::span<const double> beta, std::span<const double> y);

/// 𝔰_w^* ω as a field.
FormField localized_flow_pullback(const FormField& f, std::vector<double> w);

struct LocalOptions {
    KernelSpec kernel;
    int v_points = 10;  // Gauss points per v-piece (per axis in tensor mode)
    int t_points = 8;   // Gauss points per t-piece
    bool ray_aware = true;
};

/// R_ε ω(x) = ∫ f(v) (𝔰_{εv}^* ω)(x) dv.
std::vector<double> regularize_local_at(const FormField& f, const LocalOptions& opt, std::span<const double> x);
/// A_ε ω(x) = ∫ f(v) ∫₀¹ ι_{Y}(𝔰_{tεv}^* ω)(x) dt dv, Y(x) = Dh(h⁻¹x)·εv.
std::vector<double> homotopy_local_at(const FormField& f, const LocalOptions& opt, std::span<const double> x);

FormField regularize_local(const FormField& f, const LocalOptions& opt);
FormField homotopy_local(const FormField& f, const LocalOptions& opt);

/// Quadrature on the unit ball of R^n for n = 1, 2, 3 (points row-major).
struct BallRule {
    int dim = 0;
    std::vector<double> points;
    std::vector<double> weights;
};
BallRule ball_rule(int dim, int radial_points, int angular_points, double radius = 1.0);

/// L_p norm (p may be infinite) of a field over a ball, Euclidean pointwise norm.
double field_lp_norm(const FormField& f, double p, const BallRule& rule);

struct SupBoundResult {
    double sup_regularized = 0;  // ‖res_F R_ε ω‖_∞ on F = B_r
    double lp_input = 0;         // ‖ω‖_p on B₁
    double constant = 0;         // mes(supp f_ε)^{(p-1)/p}·sup f_ε
    bool holds = false;
};

/// ‖res_F R_ε ω‖_∞ ≤ mes(supp f_ε)^{(p−1)/p}·sup f_ε·‖ω‖_p on F = B_r.
SupBoundResult sup_bound_check(const PolyForm& w, const LocalOptions& opt, double p, double r = 0.8);

struct NormScanRow {
    double eps = 0;
    double c_hat = 0;  // max ‖R_ε ω‖_{p,p} / ‖ω‖_{p,p}
    double m_hat = 0;  // max ‖A_ε ω‖_{p,p} / ‖ω‖_{p,p}
};

/// Empirical operator norms of the localized R_ε and A_ε on Ω_{p,p}(B₁).
/// The first row is the ε = 0 limit (identity and zero operators).
std::vector<NormScanRow> operator_norm_scan(const std::vector<PolyForm>& samples, const std::vector<double>& eps_grid,
                                            double p, const LocalOptions& base);

}  // namespace derham
