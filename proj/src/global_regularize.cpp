#include "derham/global_regularize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace derham {

namespace {

double radius(const std::vector<double>& y) {
    double s = 0.0;
    for (double v : y) s += v * v;
    return std::sqrt(s);
}

// Lattice points i/N of the standard m-simplex chart (t_i ≥ 0, Σt ≤ 1).
std::vector<std::vector<double>> lattice(int m) {
    const int n = m == 1 ? 40 : m == 2 ? 12 : 6;
    std::vector<std::vector<double>> out;
    std::vector<int> idx(m, 0);
    while (true) {
        int sum = 0;
        for (int v : idx) sum += v;
        if (sum <= n) {
            std::vector<double> t(m);
            for (int i = 0; i < m; ++i) t[i] = static_cast<double>(idx[i]) / n;
            out.push_back(t);
        }
        int a = 0;
        while (a < m && ++idx[a] > n) idx[a++] = 0;
        if (a == m) break;
    }
    return out;
}

double max_difference(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

GlobalField zero_global(std::shared_ptr<const SimplicialComplex> k, int degree) {
    GlobalField g;
    g.complex = std::move(k);
    g.degree = degree;
    g.eval = [](const Simplex&, std::span<const double>, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); };
    return g;
}

GlobalField hold(GlobalField g, std::shared_ptr<const void> owner) {
    auto inner = g.eval;
    g.eval = [inner, owner](const Simplex& s, std::span<const double> t, std::span<double> out) { inner(s, t, out); };
    return g;
}

LocalOptions star_options(const StarChart& chart, const GlobalOptions& opt, double eps) {
    LocalOptions o;
    o.kernel = make_kernel(chart.dim(), opt.profile, eps);
    o.v_points = opt.v_points;
    o.t_points = opt.t_points;
    o.ray_aware = true;
    return o;
}

}  // namespace

double star_eps(const StarChart& chart, double eps, KernelSpec::Profile profile, int max_halvings) {
    const int n = chart.dim();
    const double gap = 0.5 * (1.0 - chart.sigma_prime_radius());
    if (!(gap > 0.0)) throw std::domain_error("subdivided star is not inside the unit ball of its chart");
    const BallRule xs = ball_rule(n, 20, 32, 1.0);
    std::vector<std::vector<double>> vs;
    const bool cube = kernel_support_is_cube(make_kernel(n, profile, eps));
    std::vector<int> idx(n, -1);
    while (true) {
        std::vector<double> v(idx.begin(), idx.end());
        const double r = radius(v);
        if (r > 0.0) {
            if (!cube)
                for (double& c : v) c /= r;
            vs.push_back(v);
        }
        int a = 0;
        while (a < n && ++idx[a] > 1) idx[a++] = -1;
        if (a == n) break;
    }
    for (int halving = 0; halving <= max_halvings; ++halving, eps *= 0.5) {
        double worst = 0.0;
        std::vector<double> w(n);
        for (std::size_t q = 0; q < xs.weights.size(); ++q) {
            const std::span<const double> x(xs.points.data() + q * n, n);
            for (const auto& v : vs) {
                for (int i = 0; i < n; ++i) w[i] = eps * v[i];
                const auto moved = localized_flow(w, x);
                double d = 0.0;
                for (int i = 0; i < n; ++i) d += (moved[i] - x[i]) * (moved[i] - x[i]);
                worst = std::max(worst, std::sqrt(d));
            }
        }
        if (worst < gap) return eps;
    }
    throw std::domain_error("support containment fails after the allowed number of halvings");
}

bool check_locality(const GlobalField& omega, const StarChart& chart, const LocalOptions& opt) {
    constexpr double kTol = 1e-12;
    const GlobalField r = apply_star_regularize(omega, chart, opt);
    const GlobalField a = apply_star_homotopy(omega, chart, opt);
    const auto star = chart.simplices();
    const double inner = chart.sigma_prime_radius();
    const double keep = 0.5 * (1.0 + inner);
    // Ω cut off outside φ⁻¹(B_keep): values on φ⁻¹(Σ') must not see the difference.
    GlobalField masked = omega;
    const StarChart* c = &chart;
    masked.eval = [omega, c, star, keep](const Simplex& s, std::span<const double> t, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        if (std::find(star.begin(), star.end(), s) == star.end()) return;
        if (radius(c->forward(s, t, nullptr)) >= keep) return;
        omega.eval(s, t, out);
    };
    const GlobalField rm = apply_star_regularize(masked, chart, opt);
    const GlobalField am = apply_star_homotopy(masked, chart, opt);
    for (const auto& s : omega.complex->maximal_simplices()) {
        const int m = static_cast<int>(s.size()) - 1;
        if (m == 0) continue;
        const bool member = std::find(star.begin(), star.end(), s) != star.end();
        for (const auto& t : lattice(m)) {
            const double rad = member ? radius(chart.forward(s, t, nullptr)) : 2.0;
            if (rad >= 1.0) {
                if (max_difference(r(s, t), omega(s, t)) > kTol) return false;
                if (omega.degree > 0 && max_difference(a(s, t), std::vector<double>(a(s, t).size(), 0.0)) > kTol)
                    return false;
            } else if (rad <= inner) {
                if (max_difference(r(s, t), rm(s, t)) > kTol) return false;
                if (max_difference(a(s, t), am(s, t)) > kTol) return false;
            }
        }
    }
    return true;
}

GlobalResult global_regularize(const PiecewiseForm& omega, const GlobalOptions& opt,
                               const std::vector<std::unique_ptr<StarChart>>* charts) {
    const auto complex = omega.complex_ptr();
    std::shared_ptr<const std::vector<std::unique_ptr<StarChart>>> owned;
    if (!charts) {
        owned = std::make_shared<std::vector<std::unique_ptr<StarChart>>>(make_star_charts(*complex));
        charts = owned.get();
    }
    const int n = complex->dim();
    std::vector<const StarChart*> order;
    for (const auto& c : *charts) {
        for (const auto& s : c->simplices())
            if (static_cast<int>(s.size()) - 1 != n) throw std::invalid_argument("chart simplices differ from the complex dimension");
        order.push_back(c.get());
    }
    std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->center() < b->center(); });
    for (int v : complex->vertices()) {
        if (!std::any_of(order.begin(), order.end(), [v](auto* c) { return c->center() == v; }))
            throw std::invalid_argument("missing chart for vertex " + std::to_string(v));
    }

    GlobalResult res;
    std::vector<LocalOptions> local;
    for (const auto* c : order) {
        res.eps_schedule.push_back(star_eps(*c, opt.eps, opt.profile, opt.max_halvings));
        local.push_back(star_options(*c, opt, res.eps_schedule.back()));
    }
    const std::size_t count = order.size();

    auto big_r = [&](GlobalField g, std::size_t upto) {
        for (std::size_t i = upto; i-- > 0;) g = apply_star_regularize(g, *order[i], local[i]);
        return g;
    };
    auto big_a = [&](const GlobalField& g) {
        GlobalField sum = zero_global(complex, std::max(g.degree - 1, 0));
        if (g.degree == 0) return sum;
        for (std::size_t i = 0; i < count; ++i) sum = sum + big_r(apply_star_homotopy(g, *order[i], local[i]), i);
        return sum;
    };

    const GlobalField base = global_field(omega);
    const bool has_d = omega.degree() < n;
    const GlobalField d_base = has_d ? global_field(exterior_d(omega)) : zero_global(complex, n);
    res.regularized = big_r(base, count);
    res.homotopy = big_a(base);

    GlobalField residual = res.regularized - base;
    if (omega.degree() > 0) residual = residual - global_numeric_d(res.homotopy);
    if (has_d) residual = residual - big_a(d_base);
    res.residual_norm = global_lp_norm(residual, opt.p, opt.quad_degree);
    res.commutation_norm =
        has_d ? global_lp_norm(global_numeric_d(res.regularized) - big_r(d_base, count), opt.p, opt.quad_degree) : 0.0;

    if (opt.compare_orders) {
        GlobalField rev = base;
        for (std::size_t i = 0; i < count; ++i) rev = apply_star_regularize(rev, *order[i], local[i]);
        res.order_difference = global_lp_norm(rev - res.regularized, opt.p, opt.quad_degree);
    }

    res.locality_ok = true;
    for (std::size_t i = 0; i < count; ++i) res.locality_ok = res.locality_ok && check_locality(base, *order[i], local[i]);

    constexpr double kStep = 1e-2;
    for (const auto* c : order) {
        const FormField pushed = c->push(res.regularized);
        std::vector<double> y(c->dim(), 0.0);
        const double mid = pushed(y)[0];
        y[0] = kStep;
        const double plus = pushed(y)[0];
        y[0] = -kStep;
        const double minus = pushed(y)[0];
        res.smoothness_samples.push_back({double(c->center()), mid, (plus - 2 * mid + minus) / (kStep * kStep)});
    }
    if (owned) {
        res.regularized = hold(res.regularized, owned);
        res.homotopy = hold(res.homotopy, owned);
    }
    return res;
}

}  // namespace derham
