#include "derham/kernel.hpp"

#include "derham/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace derham {

namespace {

double bump(double r2) { return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; }

// ∫_0^1 r^m exp(-1/(1-r^2)) dr
double radial_integral(int m) {
    return integrate_1d([m](double r) { return std::pow(r, m) * bump(r * r); }, 0.0, 1.0, {}, 1e-15, 20, 14);
}

double sphere_area(int n) { return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n); }

}  // namespace

KernelSpec make_kernel(int dim, KernelSpec::Profile profile, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("kernel scale must be positive");
    if (dim < 1) throw std::invalid_argument("kernel dimension must be positive");
    KernelSpec k;
    k.dim = dim;
    k.profile = profile;
    k.eps = eps;
    if (profile == KernelSpec::Profile::Smooth) k.normalization = 1.0 / (sphere_area(dim) * radial_integral(dim - 1));
    return k;
}

double kernel_density(const KernelSpec& k, std::span<const double> v) {
    if (k.profile == KernelSpec::Profile::Polynomial) {
        double f = 1.0;
        for (int i = 0; i < k.dim; ++i) {
            const double x = v[i];
            if (std::abs(x) >= 1.0) return 0.0;
            const double s = 1.0 - x * x;
            f *= k.normalization * s * s;
        }
        return f;
    }
    double r2 = 0.0;
    for (int i = 0; i < k.dim; ++i) r2 += v[i] * v[i];
    return k.normalization * bump(r2);
}

double kernel_density_scaled(const KernelSpec& k, std::span<const double> v) {
    std::vector<double> u(k.dim);
    for (int i = 0; i < k.dim; ++i) u[i] = v[i] / k.eps;
    return kernel_density(k, u) / std::pow(k.eps, k.dim);
}

double kernel_sup(const KernelSpec& k) {
    const double top = k.profile == KernelSpec::Profile::Polynomial ? std::pow(k.normalization, k.dim)
                                                                     : k.normalization * std::exp(-1.0);
    return top / std::pow(k.eps, k.dim);
}

double kernel_support_measure(const KernelSpec& k) {
    if (k.profile == KernelSpec::Profile::Polynomial) return std::pow(2.0 * k.eps, k.dim);
    return std::pow(k.eps, k.dim) * std::pow(std::numbers::pi, 0.5 * k.dim) / std::tgamma(0.5 * k.dim + 1.0);
}

bool kernel_support_is_cube(const KernelSpec& k) { return k.profile == KernelSpec::Profile::Polynomial; }

Rational polynomial_profile_moment(int j) {
    if (j < 0) throw std::invalid_argument("negative moment order");
    if (j % 2) return 0;
    return Rational(15, 8) * (Rational(1, j + 1) - Rational(2, j + 3) + Rational(1, j + 5));
}

Rational kernel_moment(const KernelSpec& k, const std::vector<int>& exponents) {
    if (static_cast<int>(exponents.size()) != k.dim) throw std::invalid_argument("moment exponent length mismatch");
    if (k.profile == KernelSpec::Profile::Polynomial) {
        Rational m = 1;
        for (int a : exponents) m *= polynomial_profile_moment(a);
        return m;
    }
    int total = 0;
    double log_gamma_sum = 0.0;
    for (int a : exponents) {
        if (a % 2) return 0;
        total += a;
        log_gamma_sum += std::lgamma(0.5 * (a + 1));
    }
    const double sphere = 2.0 * std::exp(log_gamma_sum - std::lgamma(0.5 * (total + k.dim)));
    return from_double(k.normalization * radial_integral(total + k.dim - 1) * sphere);
}

KernelQuadrature kernel_quadrature(const KernelSpec& k, int points_per_axis) {
    const auto g = gauss_legendre(points_per_axis, -1.0, 1.0);
    KernelQuadrature q;
    q.dim = k.dim;
    std::vector<int> idx(k.dim, 0);
    std::vector<double> v(k.dim);
    while (true) {
        double w = 1.0;
        for (int i = 0; i < k.dim; ++i) {
            v[i] = g.nodes[idx[i]];
            w *= g.weights[idx[i]];
        }
        const double f = kernel_density(k, v);
        if (f > 0.0) {
            q.nodes.insert(q.nodes.end(), v.begin(), v.end());
            q.weights.push_back(w * f);
        }
        int a = 0;
        while (a < k.dim && ++idx[a] == points_per_axis) idx[a++] = 0;
        if (a == k.dim) break;
    }
    return q;
}

}  // namespace derham
