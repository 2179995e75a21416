#include "derham/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace derham {

namespace {

// Nodes and weights on [-1, 1].
const QuadratureRule1D& legendre_reference(int n) {
    static std::mutex mutex;
    static std::map<int, QuadratureRule1D> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    QuadratureRule1D r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes[i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    // ascending order
    std::reverse(r.nodes.begin(), r.nodes.end());
    std::reverse(r.weights.begin(), r.weights.end());
    return cache.emplace(n, std::move(r)).first->second;
}

}  // namespace

QuadratureRule1D gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("quadrature needs at least one point");
    const auto& ref = legendre_reference(n);
    QuadratureRule1D r;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
        r.nodes.push_back(mid + half * ref.nodes[i]);
        r.weights.push_back(half * ref.weights[i]);
    }
    return r;
}

SimplexRule simplex_rule(int dim, int degree) {
    if (dim < 0) throw std::invalid_argument("negative simplex dimension");
    SimplexRule rule;
    rule.dim = dim;
    if (dim == 0) {
        rule.weights = {1.0};
        return rule;
    }
    // Collapsed coordinates t_1 = u_1, t_2 = (1-u_1)u_2, …; the Jacobian adds
    // up to dim-1 to the degree in u_1.
    const int m = std::max(1, (std::max(degree, 0) + dim) / 2 + 1);
    const auto g = gauss_legendre(m, 0.0, 1.0);
    std::vector<int> idx(dim, 0);
    while (true) {
        double w = 1.0, remaining = 1.0;
        for (int i = 0; i < dim; ++i) {
            const double u = g.nodes[idx[i]];
            rule.points.push_back(remaining * u);
            w *= g.weights[idx[i]] * remaining;
            remaining *= (1.0 - u);
        }
        rule.weights.push_back(w);
        int k = 0;
        while (k < dim && ++idx[k] == m) idx[k++] = 0;
        if (k == dim) break;
    }
    return rule;
}

double integrate_1d(const std::function<double(double)>& f, double a, double b, std::vector<double> breakpoints,
                    double tol, int order, int max_level) {
    if (b < a) return -integrate_1d(f, b, a, std::move(breakpoints), tol, order, max_level);
    std::vector<double> cuts{a};
    std::sort(breakpoints.begin(), breakpoints.end());
    for (double c : breakpoints)
        if (c > a && c < b && c - cuts.back() > 1e-15 * (1.0 + std::abs(c))) cuts.push_back(c);
    cuts.push_back(b);
    const auto& ref = legendre_reference(order);
    auto gauss = [&](double lo, double hi) {
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        double s = 0.0;
        for (int i = 0; i < order; ++i) s += ref.weights[i] * f(mid + half * ref.nodes[i]);
        return half * s;
    };
    std::function<double(double, double, double, int, double)> refine = [&](double lo, double hi, double whole,
                                                                            int level, double piece_tol) {
        const double mid = 0.5 * (lo + hi);
        const double left = gauss(lo, mid), right = gauss(mid, hi);
        if (level >= max_level || std::abs(left + right - whole) <= piece_tol) return left + right;
        return refine(lo, mid, left, level + 1, 0.5 * piece_tol) + refine(mid, hi, right, level + 1, 0.5 * piece_tol);
    };
    double total = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const double lo = cuts[i - 1], hi = cuts[i];
        if (hi <= lo) continue;
        const double share = tol * (hi - lo) / (b - a);
        total += refine(lo, hi, gauss(lo, hi), 0, share);
    }
    return total;
}

}  // namespace derham
