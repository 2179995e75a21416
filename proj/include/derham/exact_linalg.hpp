#pragma once

#include "derham/rational.hpp"

#include <optional>
#include <vector>

namespace derham {

/// Dense row-major matrix over the rationals.
using RationalMatrix = std::vector<std::vector<Rational>>;

struct RrefResult {
    RationalMatrix reduced;
    std::vector<int> pivots;  // pivot column of each nonzero row
};

/// Reduced row echelon form by exact elimination with first-nonzero pivoting.
RrefResult rref(RationalMatrix m, std::size_t cols);
std::size_t rank(const RationalMatrix& m, std::size_t cols);
/// Basis of {x : m x = 0}, one vector per free column.
std::vector<std::vector<Rational>> nullspace(const RationalMatrix& m, std::size_t cols);
/// A solution of a x = b with free variables set to zero; empty when inconsistent.
std::optional<std::vector<Rational>> solve(const RationalMatrix& a, const std::vector<Rational>& b, std::size_t cols);

}  // namespace derham
