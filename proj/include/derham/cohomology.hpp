#pragma once

#include "derham/exact_linalg.hpp"
#include "derham/global_regularize.hpp"
#include "derham/whitney.hpp"

#include <optional>
#include <string>
#include <vector>

namespace derham {

/// Matrix of δ^k: rows are (k+1)-simplices, columns k-simplices.
RationalMatrix coboundary_matrix(const SimplicialComplex& k, int degree);

struct CohomologyResult {
    int betti = 0;
    std::vector<Cochain> representatives;  // closed cochains spanning H^k
};

/// H^k(C*_p(K)); on a finite complex the ℓ_p norms are equivalent, so p only
/// selects the norm reported elsewhere.
CohomologyResult cochain_cohomology(std::shared_ptr<const SimplicialComplex> k, int degree, double p = 2.0);
std::vector<int> betti_numbers(std::shared_ptr<const SimplicialComplex> k);

/// H^k of the span of Whitney forms, ranks computed on piecewise polynomial
/// coefficients (no use of δ).
int whitney_subcomplex_cohomology(std::shared_ptr<const SimplicialComplex> k, int degree);

int euler_characteristic_from_betti(const std::vector<int>& betti);

struct DerhamIsoReport {
    std::vector<int> cochain_betti;
    std::vector<int> whitney_betti;
    bool dims_agree = false;
    bool pairing_nonsingular = false;
    bool regularization_checked = false;
    bool regularization_ok = false;
    double regularization_residual = 0;  // largest ‖𝓡Ω − Ω − d𝓐Ω − 𝓐dΩ‖_p over representatives
    std::string notice;
};

/// (i) Betti numbers agree; (ii) 𝓘𝒲 maps representatives to independent
/// classes; (iii) optionally, 𝓡 preserves the class of each Whitney
/// representative up to d𝓐 + 𝓐d within `tolerance`.
DerhamIsoReport derham_iso_check(std::shared_ptr<const SimplicialComplex> k, double p,
                                 const std::optional<GlobalOptions>& regularization, double tolerance = 1e-4);

struct ExactnessWitness {
    PiecewiseForm eta;
    double residual = 0;     // ‖dη − Ω‖_p
    double constant = 0;     // ‖η‖_p / ‖Ω‖_p (0 for Ω = 0)
    int polynomial_degree = 0;
};

/// η with dη = Ω for closed Ω with vanishing simplex integrals, built simplex
/// by simplex up the skeleta: on each j-simplex a polynomial (k−1)-form that
/// matches the traces already fixed on its facets and has the prescribed d.
/// The degree starts at coefficient degree + 2 and rises to `max_degree`.
ExactnessWitness exactness_witness(const PiecewiseForm& omega, double p = 2.0, double tolerance = 1e-8,
                                   std::optional<int> max_degree = std::nullopt);

}  // namespace derham
