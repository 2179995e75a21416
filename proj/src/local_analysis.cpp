#include "derham/local_ops.hpp"
#include "derham/parallel.hpp"
#include "derham/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace derham {

BallRule ball_rule(int dim, int radial_points, int angular_points, double radius) {
    BallRule r;
    r.dim = dim;
    if (dim == 1) {
        for (double side : {-1.0, 1.0}) {
            const auto g = gauss_legendre(radial_points, 0.0, radius);
            for (int i = 0; i < radial_points; ++i) {
                r.points.push_back(side * g.nodes[i]);
                r.weights.push_back(g.weights[i]);
            }
        }
        return r;
    }
    const auto g = gauss_legendre(radial_points, 0.0, radius);
    if (dim == 2) {
        for (int i = 0; i < radial_points; ++i) {
            for (int j = 0; j < angular_points; ++j) {
                const double th = 2.0 * std::numbers::pi * (j + 0.5) / angular_points;
                r.points.push_back(g.nodes[i] * std::cos(th));
                r.points.push_back(g.nodes[i] * std::sin(th));
                r.weights.push_back(g.weights[i] * g.nodes[i] * 2.0 * std::numbers::pi / angular_points);
            }
        }
        return r;
    }
    if (dim == 3) {
        const auto gc = gauss_legendre(angular_points, -1.0, 1.0);
        const int nth = 2 * angular_points;
        for (int i = 0; i < radial_points; ++i) {
            for (int a = 0; a < angular_points; ++a) {
                const double ct = gc.nodes[a], st = std::sqrt(1.0 - ct * ct);
                for (int j = 0; j < nth; ++j) {
                    const double ph = 2.0 * std::numbers::pi * (j + 0.5) / nth;
                    r.points.push_back(g.nodes[i] * st * std::cos(ph));
                    r.points.push_back(g.nodes[i] * st * std::sin(ph));
                    r.points.push_back(g.nodes[i] * ct);
                    r.weights.push_back(g.weights[i] * g.nodes[i] * g.nodes[i] * gc.weights[a] * 2.0 * std::numbers::pi / nth);
                }
            }
        }
        return r;
    }
    throw std::invalid_argument("ball quadrature is available for dimensions 1 to 3");
}

namespace {

std::vector<double> field_norms_at_nodes(const FormField& f, const BallRule& rule) {
    const int n = rule.dim;
    const std::size_t count = rule.weights.size();
    std::vector<double> out(count);
    parallel_for(count, [&](std::size_t q) {
        const auto c = f(std::span<const double>(rule.points.data() + q * n, n));
        double s = 0.0;
        for (double x : c) s += x * x;
        out[q] = std::sqrt(s);
    });
    return out;
}

double lp_from_nodes(const std::vector<double>& norms, const BallRule& rule, double p) {
    if (std::isinf(p)) return norms.empty() ? 0.0 : *std::max_element(norms.begin(), norms.end());
    double s = 0.0;
    for (std::size_t q = 0; q < norms.size(); ++q) s += rule.weights[q] * std::pow(norms[q], p);
    return std::pow(s, 1.0 / p);
}

double graph(double a, double b, double p) {
    if (std::isinf(p)) return std::max(a, b);
    return std::pow(std::pow(a, p) + std::pow(b, p), 1.0 / p);
}

}  // namespace

double field_lp_norm(const FormField& f, double p, const BallRule& rule) {
    if (!(p >= 1.0)) throw std::invalid_argument("p must be at least 1");
    return lp_from_nodes(field_norms_at_nodes(f, rule), rule, p);
}

SupBoundResult sup_bound_check(const PolyForm& w, const LocalOptions& opt, double p, double r) {
    if (!(p >= 1.0)) throw std::invalid_argument("p must be at least 1");
    const int n = w.dim();
    const FormField f = form_field(w);
    const BallRule inner = ball_rule(n, 8, 16, r);
    const BallRule whole = ball_rule(n, 24, 48, 1.0);
    SupBoundResult res;
    res.sup_regularized = field_lp_norm(regularize_local(f, opt), std::numeric_limits<double>::infinity(), inner);
    res.lp_input = field_lp_norm(f, p, whole);
    const double exponent = std::isinf(p) ? 1.0 : (p - 1.0) / p;
    res.constant = std::pow(kernel_support_measure(opt.kernel), exponent) * kernel_sup(opt.kernel);
    res.holds = res.sup_regularized <= res.constant * res.lp_input;
    return res;
}

std::vector<NormScanRow> operator_norm_scan(const std::vector<PolyForm>& samples, const std::vector<double>& eps_grid,
                                            double p, const LocalOptions& base) {
    if (samples.empty()) throw std::invalid_argument("operator norm scan needs at least one sample form");
    const int n = samples.front().dim();
    const BallRule rule = ball_rule(n, 8, 16, 1.0);
    std::vector<NormScanRow> rows{{0.0, 1.0, 0.0}};
    std::vector<double> input_norms;
    std::vector<FormField> fields, dfields;
    for (const auto& w : samples) {
        if (w.dim() != n) throw std::invalid_argument("sample forms differ in dimension");
        fields.push_back(form_field(w));
        dfields.push_back(w.degree() < n ? form_field(exterior_d(w)) : zero_field(n, n));
        const double a = field_lp_norm(fields.back(), p, rule);
        const double b = w.degree() < n ? field_lp_norm(dfields.back(), p, rule) : 0.0;
        input_norms.push_back(graph(a, b, p));
    }
    for (double eps : eps_grid) {
        LocalOptions opt = base;
        opt.kernel = make_kernel(n, base.kernel.profile, eps);
        NormScanRow row{eps, 0.0, 0.0};
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (input_norms[i] == 0.0) continue;
            const bool top = samples[i].degree() == n;
            const FormField rw = regularize_local(fields[i], opt);
            const double r_norm = graph(field_lp_norm(rw, p, rule),
                                        top ? 0.0 : field_lp_norm(regularize_local(dfields[i], opt), p, rule), p);
            row.c_hat = std::max(row.c_hat, r_norm / input_norms[i]);
            if (samples[i].degree() == 0) continue;
            const FormField aw = homotopy_local(fields[i], opt);
            // d A ω = R ω − ω − A dω (chain homotopy identity, verified separately)
            FormField daw = rw - fields[i];
            if (!top) daw = daw - homotopy_local(dfields[i], opt);
            const double a_norm = graph(field_lp_norm(aw, p, rule), field_lp_norm(daw, p, rule), p);
            row.m_hat = std::max(row.m_hat, a_norm / input_norms[i]);
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace derham
