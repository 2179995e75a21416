#pragma once

#include <functional>
#include <vector>

namespace derham {

struct QuadratureRule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss–Legendre rule with n points on [a, b]; exact to degree 2n-1.
QuadratureRule1D gauss_legendre(int n, double a = 0.0, double b = 1.0);

/// Rule on the reference simplex {t_i >= 0, Σ t_i <= 1} in dimension dim,
/// with points stored row-major (dim per point).
struct SimplexRule {
    int dim = 0;
    std::vector<double> points;
    std::vector<double> weights;
    int size() const { return static_cast<int>(weights.size()); }
    const double* point(int i) const { return points.data() + static_cast<std::size_t>(i) * dim; }
};

/// Collapsed-coordinate rule exact for polynomials of total degree <= degree.
SimplexRule simplex_rule(int dim, int degree);

/// Adaptive composite Gauss–Legendre on [a, b] split at the given
/// breakpoints; a piece is bisected until it agrees with its halves to `tol`.
double integrate_1d(const std::function<double(double)>& f, double a, double b, std::vector<double> breakpoints = {},
                    double tol = 1e-12, int order = 10, int max_level = 12);

}  // namespace derham
