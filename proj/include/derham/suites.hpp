#pragma once

#include "derham/poly_form.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace derham {

/// First failing case of a randomized exact suite.
struct SuiteFailure {
    int index = 0;
    std::string form;
    std::vector<std::string> parameters;  // v, or ε
    std::string residual;
};

struct SuiteReport {
    int cases = 0;
    std::uint64_t seed = 0;
    int failures = 0;
    std::optional<SuiteFailure> first_failure;
};

/// s_v^*ω − ω − Q_v dω − dQ_vω = 0 for seeded forms on ℝ^n, n = 1..4 in
/// turn, form degree ≤ n, coefficient degree ≤ 4 and random rational v.
SuiteReport cartan_suite(int cases, std::uint64_t seed);

/// R_εω − ω − dA_εω − A_εdω = 0 for the polynomial kernel on ℝ^n,
/// n = 1..3 in turn, coefficient degree ≤ 3 and random rational ε.
SuiteReport flat_homotopy_suite(int cases, std::uint64_t seed);

}  // namespace derham
