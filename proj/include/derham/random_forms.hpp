#pragma once

#include "derham/whitney.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace derham {

/// Seeded source of exact random data. Draws use raw 64-bit output so that
/// sequences do not depend on the standard library's distributions.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}
    /// Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi);
    /// p/q with |p| ≤ max_num, 1 ≤ q ≤ max_den.
    Rational rational(int max_num = 9, int max_den = 7);
    /// Uniform double in [lo, hi).
    double real(double lo, double hi);

private:
    std::mt19937_64 engine_;
};

/// Polynomial in nvars variables with up to `terms` random terms of total degree ≤ max_degree.
Polynomial random_polynomial(RandomSource& rng, int nvars, int max_degree, int terms = 3);
/// k-form on ℝ^dim with random polynomial coefficients on a random subset of basis sets.
PolyForm random_form(RandomSource& rng, int dim, int degree, int max_poly_degree, int terms = 3);
std::vector<Rational> random_vector(RandomSource& rng, int dim);
Cochain random_cochain(RandomSource& rng, std::shared_ptr<const SimplicialComplex> k, int degree);

/// Compatible piecewise k-form Σ r·λ_v·λ_w·𝒲(χ_σ) over random vertices and
/// k-simplices, minus its Whitney interpolant, so every k-simplex integral
/// vanishes.
PiecewiseForm random_kernel_form(RandomSource& rng, std::shared_ptr<const SimplicialComplex> k, int degree, int terms = 4);

/// Thirty fixed forms on ℝ^dim used by the operator-norm scan: the constant
/// function, dx_1, and seeded polynomial forms of every degree.
std::vector<PolyForm> default_sample_forms(int dim = 2);

}  // namespace derham
