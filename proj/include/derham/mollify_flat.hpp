#pragma once

#include "derham/kernel.hpp"
#include "derham/poly_form.hpp"

#include <functional>
#include <span>
#include <vector>

namespace derham {

/// Replace every monomial v^a in the trailing `k.dim` variables of the
/// coefficients by ε^{|a|}·∫ v^a f(v) dv and drop those variables.
PolyForm integrate_kernel_variables(const PolyForm& w, const KernelSpec& k, const Rational& eps);

/// R_ε ω = ∫ s_{εv}^* ω f(v) dv, exact for polynomial coefficients.
PolyForm regularize_flat(const PolyForm& w, const KernelSpec& k, const Rational& eps);
PolyForm regularize_flat(const PolyForm& w, const KernelSpec& k);

/// A_ε ω = ∫ Q_{εv} ω f(v) dv, so that R_ε ω − ω = d A_ε ω + A_ε dω.
PolyForm homotopy_flat(const PolyForm& w, const KernelSpec& k, const Rational& eps);
PolyForm homotopy_flat(const PolyForm& w, const KernelSpec& k);

/// R_ε ω − ω − d A_ε ω − A_ε dω.
PolyForm flat_homotopy_residual(const PolyForm& w, const KernelSpec& k, const Rational& eps);

using ScalarField = std::function<double(std::span<const double>)>;

/// (g ∗ f_ε)(x) by quadrature. In one dimension the integral is split at
/// the given kinks of g; otherwise a tensor rule with `points` per axis is
/// used.
double mollify_scalar(const ScalarField& g, const KernelSpec& k, std::span<const double> x,
                      const std::vector<double>& kinks = {}, int points = 40);

}  // namespace derham
