#include "derham/mollify_flat.hpp"

#include "derham/homotopy.hpp"
#include "derham/quadrature.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace derham {

PolyForm integrate_kernel_variables(const PolyForm& w, const KernelSpec& k, const Rational& eps) {
    const int n = k.dim;
    const int base = w.nvars() - n;
    if (base < w.dim()) throw std::invalid_argument("form carries no kernel variables");
    std::map<std::vector<int>, Rational> cache;
    auto moment = [&](const std::vector<int>& a) {
        auto it = cache.find(a);
        if (it != cache.end()) return it->second;
        Rational m = kernel_moment(k, a);
        int total = 0;
        for (int x : a) total += x;
        for (int i = 0; i < total; ++i) m *= eps;
        cache.emplace(a, m);
        return m;
    };
    return w.map_coefficients([&](const Polynomial& c) {
        Polynomial r(base);
        for (const auto& [e, q] : c.terms()) {
            std::vector<int> a(e.begin() + base, e.end());
            const Rational m = moment(a);
            if (m == 0) continue;
            r.add_term(Polynomial::Exponents(e.begin(), e.begin() + base), q * m);
        }
        return r;
    });
}

namespace {

// Translation x ↦ x + εv with v appended as kernel variables.
PolynomialMap kernel_shift(const PolyForm& w, int n, const Rational& eps) {
    const int total = w.nvars() + n;
    PolynomialMap f{w.dim(), {}};
    for (int i = 0; i < w.nvars(); ++i) {
        Polynomial c = Polynomial::variable(total, i);
        if (i < w.dim()) c += Polynomial::variable(total, w.nvars() + i) * eps;
        f.components.push_back(c);
    }
    for (int i = 0; i < n; ++i) f.components.push_back(Polynomial::variable(total, w.nvars() + i));
    return f;
}

void require_dim(const PolyForm& w, const KernelSpec& k) {
    if (w.dim() != k.dim) throw std::invalid_argument("kernel dimension differs from form dimension");
}

}  // namespace

PolyForm regularize_flat(const PolyForm& w, const KernelSpec& k, const Rational& eps) {
    require_dim(w, k);
    const PolyForm moved = pullback(kernel_shift(w, k.dim, eps), add_parameters(w, k.dim));
    return integrate_kernel_variables(moved, k, 1);
}

PolyForm regularize_flat(const PolyForm& w, const KernelSpec& k) { return regularize_flat(w, k, from_double(k.eps)); }

PolyForm homotopy_flat(const PolyForm& w, const KernelSpec& k, const Rational& eps) {
    require_dim(w, k);
    const PolyForm lifted = add_parameters(w, k.dim);
    std::vector<Polynomial> v;
    for (int i = 0; i < k.dim; ++i) v.push_back(Polynomial::variable(lifted.nvars(), w.nvars() + i) * eps);
    return integrate_kernel_variables(cartan_Q(v, lifted), k, 1);
}

PolyForm homotopy_flat(const PolyForm& w, const KernelSpec& k) { return homotopy_flat(w, k, from_double(k.eps)); }

PolyForm flat_homotopy_residual(const PolyForm& w, const KernelSpec& k, const Rational& eps) {
    PolyForm r = regularize_flat(w, k, eps) - w;
    if (w.degree() > 0) r -= exterior_d(homotopy_flat(w, k, eps));
    if (w.degree() < w.dim()) r -= homotopy_flat(exterior_d(w), k, eps);
    return r;
}

double mollify_scalar(const ScalarField& g, const KernelSpec& k, std::span<const double> x,
                      const std::vector<double>& kinks, int points) {
    const int n = k.dim;
    if (n == 1) {
        // ∫ g(x - y) f_ε(y) dy over y ∈ [-ε, ε]; g kinks at z give y = x - z.
        std::vector<double> br;
        for (double z : kinks) br.push_back(x[0] - z);
        br.push_back(0.0);
        auto integrand = [&](double y) {
            const double v = y;
            const double arg = x[0] - y;
            return g(std::span<const double>(&arg, 1)) * kernel_density_scaled(k, std::span<const double>(&v, 1));
        };
        return integrate_1d(integrand, -k.eps, k.eps, br, 1e-14, 12, 16);
    }
    const auto q = kernel_quadrature(k, points);
    std::vector<double> y(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < q.weights.size(); ++i) {
        for (int j = 0; j < n; ++j) y[j] = x[j] - k.eps * q.nodes[i * n + j];
        sum += q.weights[i] * g(y);
    }
    return sum;
}

}  // namespace derham
