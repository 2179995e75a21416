#pragma once

#include "derham/piecewise_form.hpp"

#include <memory>
#include <vector>

namespace derham {

/// Exact k-cochain: one value per k-simplex, ordered as complex->simplices(k).
struct Cochain {
    std::shared_ptr<const SimplicialComplex> complex;
    int degree = 0;
    std::vector<Rational> values;

    Cochain() = default;
    Cochain(std::shared_ptr<const SimplicialComplex> k, int degree);
    static Cochain indicator(std::shared_ptr<const SimplicialComplex> k, const Simplex& s);
    Rational operator()(const Simplex& s) const;
    bool is_zero() const;
    friend bool operator==(const Cochain& a, const Cochain& b) { return a.degree == b.degree && a.values == b.values; }
};

/// Real k-cochain, used where the de Rham map leaves the rationals.
struct RealCochain {
    std::shared_ptr<const SimplicialComplex> complex;
    int degree = 0;
    std::vector<double> values;
};

/// ‖c‖_p = (Σ|c(σ)|^p)^{1/p}; p may be infinite.
double cochain_norm(const std::vector<double>& values, double p);
double cochain_norm(const Cochain& c, double p);

/// (δc)(σ) = Σ_i (−1)^i c(∂_iσ).
Cochain coboundary(const Cochain& c);

/// 𝒲(χ_σ) = k!Σ(−1)^i t_i dt_0∧…∧d̂t_i∧…∧dt_k on the cofaces of σ.
PiecewiseForm whitney_basis(std::shared_ptr<const SimplicialComplex> k, const Simplex& s);
PiecewiseForm whitney(const Cochain& c);
/// 𝒲̃ = (√(2^k)/√(k+1))·𝒲 on a real cochain.
PiecewiseForm whitney_normalized(const RealCochain& c);

/// ∫_σ ω with orientation given by the sorted vertex chart (exact).
Cochain integrate_cochain(const PiecewiseForm& w);
/// 𝓘: the integral measured against the unit-edge volume of σ, i.e.
/// √(k+1)/√(2^k) times the oriented integral.
RealCochain derham_map(const PiecewiseForm& w, int k);
/// √(k+1)/√(2^k).
double derham_scale(int k);

/// d(𝒲c) − 𝒲(δc).
PiecewiseForm whitney_chain_map_residual(const Cochain& c);

struct WhitneyBoundReport {
    double lhs = 0;   // ‖𝒲c‖^p in the Sobolev graph norm
    double rhs = 0;   // N·C·binom(n+1,k+1)^{p−1}·‖c‖^p
    double star_multiplicity = 0;  // N: most maximal simplices sharing a k-simplex
    double basis_constant = 0;     // C: largest ‖𝒲χ_σ‖^p on one maximal simplex
    bool holds = false;
};
WhitneyBoundReport whitney_bound_check(const Cochain& c, double p);

}  // namespace derham
