#include "derham/suites.hpp"

#include "derham/homotopy.hpp"
#include "derham/mollify_flat.hpp"
#include "derham/random_forms.hpp"

namespace derham {

SuiteReport cartan_suite(int cases, std::uint64_t seed) {
    RandomSource rng(seed);
    SuiteReport report{cases, seed, 0, std::nullopt};
    for (int i = 0; i < cases; ++i) {
        const int dim = 1 + i % 4;
        const int degree = static_cast<int>(rng.integer(0, dim));
        const PolyForm w = random_form(rng, dim, degree, 4);
        const auto v = random_vector(rng, dim);
        const PolyForm residual = verify_cartan_identity(v, w);
        if (residual.is_zero()) continue;
        ++report.failures;
        if (!report.first_failure) {
            SuiteFailure f{i, w.to_string(), {}, residual.to_string()};
            for (const auto& c : v) f.parameters.push_back(to_string(c));
            report.first_failure = f;
        }
    }
    return report;
}

SuiteReport flat_homotopy_suite(int cases, std::uint64_t seed) {
    RandomSource rng(seed);
    SuiteReport report{cases, seed, 0, std::nullopt};
    for (int i = 0; i < cases; ++i) {
        const int dim = 1 + i % 3;
        const int degree = static_cast<int>(rng.integer(0, dim));
        const PolyForm w = random_form(rng, dim, degree, 3);
        const Rational eps = make_rational(rng.integer(1, 4), rng.integer(5, 10));
        const KernelSpec k = make_kernel(dim, KernelSpec::Profile::Polynomial, to_double(eps));
        const PolyForm residual = flat_homotopy_residual(w, k, eps);
        if (residual.is_zero()) continue;
        ++report.failures;
        if (!report.first_failure) report.first_failure = SuiteFailure{i, w.to_string(), {to_string(eps)}, residual.to_string()};
    }
    return report;
}

}  // namespace derham
