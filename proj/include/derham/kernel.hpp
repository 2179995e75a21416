#pragma once

#include "derham/rational.hpp"

#include <span>
#include <vector>

namespace derham {

/// Mollifier kernel f_ε(v) = ε^{-n} f(v/ε).
///  - Polynomial: f(v) = Π_i (15/16)(1 - v_i^2)^2 on the cube [-1, 1]^n.
///  - Smooth: f(v) = c·exp(-1/(1 - |v|^2)) on the unit ball, c normalizing.
struct KernelSpec {
    enum class Profile { Polynomial, Smooth };
    int dim = 1;
    Profile profile = Profile::Polynomial;
    double eps = 0.1;
    double normalization = 15.0 / 16.0;  // per coordinate (polynomial) or c (smooth)
};

KernelSpec make_kernel(int dim, KernelSpec::Profile profile, double eps);

/// Unscaled density f(v) (ε = 1).
double kernel_density(const KernelSpec& k, std::span<const double> v);
/// Scaled density f_ε(v).
double kernel_density_scaled(const KernelSpec& k, std::span<const double> v);

/// sup f_ε.
double kernel_sup(const KernelSpec& k);
/// Lebesgue measure of supp f_ε.
double kernel_support_measure(const KernelSpec& k);
/// The support is a cube of half-width ε (polynomial) or a ball of radius ε.
bool kernel_support_is_cube(const KernelSpec& k);

/// Moment ∫ v^a f(v) dv of the unscaled density. Exact for the polynomial
/// profile; for the smooth profile the double value is converted exactly.
Rational kernel_moment(const KernelSpec& k, const std::vector<int>& exponents);

/// One-dimensional even moment of the polynomial profile factor:
/// ∫_{-1}^{1} v^j (15/16)(1 - v^2)^2 dv.
Rational polynomial_profile_moment(int j);

/// Tensor-product quadrature of the unscaled density on its support:
/// nodes (row-major, dim per node) with weights already multiplied by f.
struct KernelQuadrature {
    int dim = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};
KernelQuadrature kernel_quadrature(const KernelSpec& k, int points_per_axis);

}  // namespace derham
