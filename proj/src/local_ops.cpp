#include "derham/local_ops.hpp"

#include "derham/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace derham {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct IndexTable {
    std::vector<IndexSet> sets;
    std::vector<int> position;  // indexed by bitmask
};

const IndexTable& index_table(int n, int k) {
    static thread_local std::vector<std::vector<IndexTable>> cache;
    if (static_cast<int>(cache.size()) <= n) cache.resize(n + 1);
    auto& row = cache[n];
    if (row.empty()) {
        for (int d = 0; d <= n; ++d) {
            IndexTable t;
            t.sets = index_sets(n, d);
            t.position.assign(std::size_t(1) << n, -1);
            for (int i = 0; i < static_cast<int>(t.sets.size()); ++i) t.position[t.sets[i]] = i;
            row.push_back(std::move(t));
        }
    }
    return row[k];
}

double small_det(std::vector<double> a, int n) {
    if (n == 0) return 1.0;
    if (n == 1) return a[0];
    if (n == 2) return a[0] * a[3] - a[1] * a[2];
    double d = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
        if (a[piv * n + c] == 0.0) return 0.0;
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(a[piv * n + j], a[c * n + j]);
            d = -d;
        }
        d *= a[c * n + c];
        for (int r = c + 1; r < n; ++r) {
            const double f = a[r * n + c] / a[c * n + c];
            for (int j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
        }
    }
    return d;
}

std::vector<double> matmul(std::span<const double> a, std::span<const double> b, int n) {
    std::vector<double> r(n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) r[i * n + j] += a[i * n + k] * b[k * n + j];
    return r;
}

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

}  // namespace

int FormField::coefficient_count() const { return static_cast<int>(index_table(dim, degree).sets.size()); }

std::vector<double> FormField::operator()(std::span<const double> x) const {
    std::vector<double> out(coefficient_count());
    eval(x, out);
    return out;
}

FormField form_field(const PolyForm& w) {
    if (w.nvars() != w.dim()) throw std::invalid_argument("field needs a form without parameters");
    FormField f;
    f.dim = w.dim();
    f.degree = w.degree();
    std::vector<CompiledPolynomial> coeffs;
    for (IndexSet s : index_sets(w.dim(), w.degree())) coeffs.emplace_back(w.coefficient(s));
    f.eval = [coeffs](std::span<const double> x, std::span<double> out) {
        for (std::size_t i = 0; i < coeffs.size(); ++i) out[i] = coeffs[i].is_zero() ? 0.0 : coeffs[i](x);
    };
    return f;
}

FormField zero_field(int dim, int degree) {
    FormField f;
    f.dim = dim;
    f.degree = degree;
    f.eval = [](std::span<const double>, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); };
    return f;
}

FormField numeric_d(const FormField& f, double step) {
    if (f.degree >= f.dim) return zero_field(f.dim, f.dim);
    FormField r;
    r.dim = f.dim;
    r.degree = f.degree + 1;
    r.singular_points = f.singular_points;
    r.singular_rays = f.singular_rays;
    r.eval = [f, step](std::span<const double> x, std::span<double> out) {
        const int n = f.dim;
        const auto& src = index_table(n, f.degree);
        const auto& dst = index_table(n, f.degree + 1);
        std::fill(out.begin(), out.end(), 0.0);
        std::vector<double> y(x.begin(), x.end());
        std::vector<double> deriv(src.sets.size());
        std::vector<double> tmp(src.sets.size());
        // Localized operators steepen towards the unit sphere: shrink h there.
        double h = step;
        const double r = std::sqrt(norm2(x));
        if (r < 1.0) h = std::max(std::min(step, (1.0 - r) / 50.0), 1e-7);
        for (int j = 0; j < n; ++j) {
            std::fill(deriv.begin(), deriv.end(), 0.0);
            // In one dimension the stencil stays on one side of singular points.
            double dir = 0.0;
            if (n == 1)
                for (double z : f.singular_points)
                    if (std::abs(z - x[0]) < 2.0 * h) dir = x[0] >= z ? 1.0 : -1.0;
            if (dir == 0.0) {
                const double offsets[4] = {2.0, 1.0, -1.0, -2.0};
                const double weights[4] = {-1.0, 8.0, -8.0, 1.0};
                for (int s = 0; s < 4; ++s) {
                    y[j] = x[j] + offsets[s] * h;
                    f.eval(y, tmp);
                    for (std::size_t i = 0; i < tmp.size(); ++i) deriv[i] += weights[s] * tmp[i];
                }
            } else {
                const double weights[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
                for (int s = 0; s < 5; ++s) {
                    y[j] = x[j] + dir * s * h;
                    f.eval(y, tmp);
                    for (std::size_t i = 0; i < tmp.size(); ++i) deriv[i] += dir * weights[s] * tmp[i];
                }
            }
            y[j] = x[j];
            for (std::size_t i = 0; i < src.sets.size(); ++i) {
                const IndexSet s = src.sets[i];
                const int sign = wedge_sign(IndexSet(1) << j, s);
                if (sign == 0) continue;
                out[dst.position[s | (IndexSet(1) << j)]] += sign * deriv[i] / (12.0 * h);
            }
        }
    };
    return r;
}

namespace {

FormField combine(const FormField& a, const FormField& b, double sb) {
    if (a.dim != b.dim || a.degree != b.degree) throw std::invalid_argument("fields differ in dimension or degree");
    FormField r;
    r.dim = a.dim;
    r.degree = a.degree;
    r.singular_points = a.singular_points;
    r.singular_points.insert(r.singular_points.end(), b.singular_points.begin(), b.singular_points.end());
    r.singular_rays = a.singular_rays;
    r.singular_rays.insert(r.singular_rays.end(), b.singular_rays.begin(), b.singular_rays.end());
    r.eval = [a, b, sb](std::span<const double> x, std::span<double> out) {
        std::vector<double> tmp(out.size());
        a.eval(x, out);
        b.eval(x, tmp);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += sb * tmp[i];
    };
    return r;
}

}  // namespace

FormField operator+(const FormField& a, const FormField& b) { return combine(a, b, 1.0); }
FormField operator-(const FormField& a, const FormField& b) { return combine(a, b, -1.0); }

std::vector<double> ball_h(std::span<const double> x) {
    const double s = 1.0 / std::sqrt(1.0 + norm2(x));
    std::vector<double> y(x.begin(), x.end());
    for (double& v : y) v *= s;
    return y;
}

std::vector<double> ball_h_inv(std::span<const double> y) {
    const double q = 1.0 - norm2(y);
    if (q <= 0.0) throw std::domain_error("point outside the open unit ball");
    const double s = 1.0 / std::sqrt(q);
    std::vector<double> x(y.begin(), y.end());
    for (double& v : x) v *= s;
    return x;
}

std::vector<double> ball_dh(std::span<const double> x) {
    const int n = static_cast<int>(x.size());
    const double s = 1.0 + norm2(x);
    const double rs = 1.0 / std::sqrt(s);
    std::vector<double> j(n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) j[a * n + b] = ((a == b ? 1.0 : 0.0) - x[a] * x[b] / s) * rs;
    return j;
}

std::vector<double> ball_dh_inv(std::span<const double> y) {
    const int n = static_cast<int>(y.size());
    const double q = 1.0 - norm2(y);
    if (q <= 0.0) throw std::domain_error("point outside the open unit ball");
    const double rq = 1.0 / std::sqrt(q);
    std::vector<double> j(n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) j[a * n + b] = ((a == b ? 1.0 : 0.0) + y[a] * y[b] / q) * rq;
    return j;
}

std::vector<double> localized_flow(std::span<const double> w, std::span<const double> x, std::vector<double>* jacobian) {
    const int n = static_cast<int>(x.size());
    if (norm2(x) >= 1.0) {
        if (jacobian) {
            jacobian->assign(n * n, 0.0);
            for (int i = 0; i < n; ++i) (*jacobian)[i * n + i] = 1.0;
        }
        return std::vector<double>(x.begin(), x.end());
    }
    std::vector<double> z = ball_h_inv(x);
    for (int i = 0; i < n; ++i) z[i] += w[i];
    if (jacobian) *jacobian = matmul(ball_dh(z), ball_dh_inv(x), n);
    return ball_h(z);
}

std::vector<double> pullback_coefficients(int target_dim, int source_dim, int degree, std::span<const double> omega,
                                          std::span<const double> jac) {
    if (degree == 0) return {omega[0]};
    const auto& t = index_table(target_dim, degree);
    const auto& src = index_table(source_dim, degree);
    std::vector<double> out(src.sets.size(), 0.0);
    std::vector<double> minor(degree * degree);
    std::vector<int> rows(degree), cols(degree);
    for (std::size_t a = 0; a < t.sets.size(); ++a) {
        if (omega[a] == 0.0) continue;
        int r = 0;
        for (int i = 0; i < target_dim; ++i)
            if (t.sets[a] >> i & 1) rows[r++] = i;
        for (std::size_t b = 0; b < src.sets.size(); ++b) {
            int c = 0;
            for (int i = 0; i < source_dim; ++i)
                if (src.sets[b] >> i & 1) cols[c++] = i;
            for (int p = 0; p < degree; ++p)
                for (int q = 0; q < degree; ++q) minor[p * degree + q] = jac[rows[p] * source_dim + cols[q]];
            out[b] += omega[a] * small_det(minor, degree);
        }
    }
    return out;
}

std::vector<double> pullback_coefficients(int dim, int degree, std::span<const double> omega, std::span<const double> jac) {
    return pullback_coefficients(dim, dim, degree, omega, jac);
}

std::vector<double> interior_coefficients(int dim, int degree, std::span<const double> beta, std::span<const double> y) {
    if (degree == 0) throw std::invalid_argument("interior product of a 0-form");
    const auto& src = index_table(dim, degree);
    const auto& dst = index_table(dim, degree - 1);
    std::vector<double> out(dst.sets.size(), 0.0);
    for (std::size_t a = 0; a < src.sets.size(); ++a) {
        if (beta[a] == 0.0) continue;
        int position = 0;
        for (int i = 0; i < dim; ++i) {
            if (!(src.sets[a] >> i & 1)) continue;
            const double term = beta[a] * y[i];
            out[dst.position[src.sets[a] & ~(IndexSet(1) << i)]] += (position % 2) ? -term : term;
            ++position;
        }
    }
    return out;
}

FormField localized_flow_pullback(const FormField& f, std::vector<double> w) {
    FormField r = f;
    r.eval = [f, w](std::span<const double> x, std::span<double> out) {
        std::vector<double> jac;
        const auto p = localized_flow(w, x, &jac);
        const auto om = f(p);
        const auto c = pullback_coefficients(f.dim, f.degree, om, jac);
        std::copy(c.begin(), c.end(), out.begin());
    };
    return r;
}

namespace {

struct VRule {
    std::vector<double> nodes;  // row-major
    std::vector<double> weights;
};

// Gauss rule on [a, b] split at interior breakpoints.
void split_gauss(double a, double b, std::vector<double> cuts, int m, std::vector<double>& nodes, std::vector<double>& weights) {
    std::sort(cuts.begin(), cuts.end());
    double lo = a;
    cuts.push_back(b);
    for (double c : cuts) {
        if (c <= lo || c > b) continue;
        if (c - lo > 1e-14) {
            const auto g = gauss_legendre(m, lo, c);
            nodes.insert(nodes.end(), g.nodes.begin(), g.nodes.end());
            weights.insert(weights.end(), g.weights.begin(), g.weights.end());
        }
        lo = c;
    }
}

// Intersection of the ray c + r·e (r ≥ 0) with the kernel support.
bool ray_interval(bool cube, double cx, double cy, double ex, double ey, double& r0, double& r1) {
    if (cube) {
        double lo = 0.0, hi = 1e300;
        const double c[2] = {cx, cy}, e[2] = {ex, ey};
        for (int i = 0; i < 2; ++i) {
            if (std::abs(e[i]) < 1e-300) {
                if (c[i] < -1.0 || c[i] > 1.0) return false;
                continue;
            }
            double t0 = (-1.0 - c[i]) / e[i], t1 = (1.0 - c[i]) / e[i];
            if (t0 > t1) std::swap(t0, t1);
            lo = std::max(lo, t0);
            hi = std::min(hi, t1);
        }
        r0 = lo;
        r1 = hi;
        return hi > lo;
    }
    const double b = cx * ex + cy * ey;
    const double cc = cx * cx + cy * cy - 1.0;
    const double disc = b * b - cc;
    if (disc <= 0.0) return false;
    const double s = std::sqrt(disc);
    r0 = std::max(0.0, -b - s);
    r1 = -b + s;
    return r1 > r0;
}

double wrap(double a) {
    a = std::fmod(a, kTwoPi);
    return a < 0 ? a + kTwoPi : a;
}

VRule v_rule(const FormField& f, const LocalOptions& opt, std::span<const double> yx) {
    const KernelSpec& k = opt.kernel;
    const int n = k.dim;
    VRule r;
    const bool cube = kernel_support_is_cube(k);
    if (n == 1) {
        std::vector<double> cuts;
        if (opt.ray_aware) {
            for (double z : f.singular_points) {
                if (std::abs(z) >= 1.0) continue;
                cuts.push_back((z / std::sqrt(1.0 - z * z) - yx[0]) / k.eps);
            }
        }
        split_gauss(-1.0, 1.0, cuts, opt.v_points, r.nodes, r.weights);
        return r;
    }
    if (n == 2 && opt.ray_aware) {
        const double cx = -yx[0] / k.eps, cy = -yx[1] / k.eps;
        // Angular range seen from c.
        double phi_lo = 0.0, phi_hi = kTwoPi;
        const bool inside = cube ? (std::abs(cx) < 1.0 && std::abs(cy) < 1.0) : (cx * cx + cy * cy < 1.0);
        std::vector<double> cuts;
        if (!inside) {
            const double base = std::atan2(-cy, -cx);
            double lo = 0.0, hi = 0.0;
            if (cube) {
                const double corners[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
                lo = 1e9;
                hi = -1e9;
                for (auto& q : corners) {
                    double rel = std::atan2(q[1] - cy, q[0] - cx) - base;
                    rel = std::remainder(rel, kTwoPi);
                    lo = std::min(lo, rel);
                    hi = std::max(hi, rel);
                }
            } else {
                const double half = std::asin(std::min(1.0, 1.0 / std::hypot(cx, cy)));
                lo = -half;
                hi = half;
            }
            phi_lo = base + lo;
            phi_hi = base + hi;
        }
        auto add_cut = [&](double angle) {
            double rel = wrap(angle - phi_lo);
            if (rel > 0.0 && rel < phi_hi - phi_lo) cuts.push_back(phi_lo + rel);
        };
        for (double a : f.singular_rays) add_cut(a);
        if (cube) {
            const double corners[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
            for (auto& q : corners) add_cut(std::atan2(q[1] - cy, q[0] - cx));
        }
        std::vector<double> phis, wphis;
        split_gauss(phi_lo, phi_hi, cuts, opt.v_points, phis, wphis);
        for (std::size_t i = 0; i < phis.size(); ++i) {
            const double ex = std::cos(phis[i]), ey = std::sin(phis[i]);
            double r0, r1;
            if (!ray_interval(cube, cx, cy, ex, ey, r0, r1)) continue;
            const auto g = gauss_legendre(opt.v_points, r0, r1);
            for (int j = 0; j < opt.v_points; ++j) {
                r.nodes.push_back(cx + g.nodes[j] * ex);
                r.nodes.push_back(cy + g.nodes[j] * ey);
                r.weights.push_back(wphis[i] * g.weights[j] * g.nodes[j]);
            }
        }
        return r;
    }
    const auto g = gauss_legendre(opt.v_points, -1.0, 1.0);
    std::vector<int> idx(n, 0);
    while (true) {
        double w = 1.0;
        for (int i = 0; i < n; ++i) {
            r.nodes.push_back(g.nodes[idx[i]]);
            w *= g.weights[idx[i]];
        }
        r.weights.push_back(w);
        int a = 0;
        while (a < n && ++idx[a] == opt.v_points) idx[a++] = 0;
        if (a == n) break;
    }
    return r;
}

// Times in (0, 1) where h⁻¹x + t·w meets the field's singular set.
std::vector<double> t_cuts(const FormField& f, std::span<const double> yx, std::span<const double> w) {
    std::vector<double> cuts;
    if (f.dim == 1) {
        if (w[0] == 0.0) return cuts;
        for (double z : f.singular_points) {
            if (std::abs(z) >= 1.0) continue;
            cuts.push_back((z / std::sqrt(1.0 - z * z) - yx[0]) / w[0]);
        }
    } else if (f.dim == 2) {
        for (double a : f.singular_rays) {
            const double ex = std::cos(a), ey = std::sin(a);
            const double den = w[0] * ey - w[1] * ex;
            if (std::abs(den) < 1e-300) continue;
            const double t = -(yx[0] * ey - yx[1] * ex) / den;
            const double along = (yx[0] + t * w[0]) * ex + (yx[1] + t * w[1]) * ey;
            if (along > 0.0) cuts.push_back(t);
        }
    }
    return cuts;
}

}  // namespace

std::vector<double> regularize_local_at(const FormField& f, const LocalOptions& opt, std::span<const double> x) {
    const int n = f.dim;
    if (opt.kernel.dim != n) throw std::invalid_argument("kernel dimension differs from field dimension");
    if (norm2(x) >= 1.0) return f(x);
    const auto yx = ball_h_inv(x);
    const auto dinv = ball_dh_inv(x);
    const auto rule = v_rule(f, opt, yx);
    std::vector<double> out(f.coefficient_count(), 0.0);
    std::vector<double> z(n);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const std::span<const double> v(rule.nodes.data() + q * n, n);
        const double weight = rule.weights[q] * kernel_density(opt.kernel, v);
        if (weight == 0.0) continue;
        for (int i = 0; i < n; ++i) z[i] = yx[i] + opt.kernel.eps * v[i];
        const auto jac = matmul(ball_dh(z), dinv, n);
        const auto c = pullback_coefficients(n, f.degree, f(ball_h(z)), jac);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += weight * c[i];
    }
    return out;
}

std::vector<double> homotopy_local_at(const FormField& f, const LocalOptions& opt, std::span<const double> x) {
    const int n = f.dim;
    if (opt.kernel.dim != n) throw std::invalid_argument("kernel dimension differs from field dimension");
    const int out_count = static_cast<int>(index_table(n, std::max(f.degree - 1, 0)).sets.size());
    std::vector<double> out(out_count, 0.0);
    if (f.degree == 0 || norm2(x) >= 1.0) return out;
    const auto yx = ball_h_inv(x);
    const auto dinv = ball_dh_inv(x);
    const auto dh = ball_dh(yx);
    const auto rule = v_rule(f, opt, yx);
    std::vector<double> z(n), w(n), y(n), acc(f.coefficient_count());
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const std::span<const double> v(rule.nodes.data() + q * n, n);
        const double weight = rule.weights[q] * kernel_density(opt.kernel, v);
        if (weight == 0.0) continue;
        for (int i = 0; i < n; ++i) w[i] = opt.kernel.eps * v[i];
        std::vector<double> ts, wts;
        split_gauss(0.0, 1.0, opt.ray_aware ? t_cuts(f, yx, w) : std::vector<double>{}, opt.t_points, ts, wts);
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t j = 0; j < ts.size(); ++j) {
            for (int i = 0; i < n; ++i) z[i] = yx[i] + ts[j] * w[i];
            const auto jac = matmul(ball_dh(z), dinv, n);
            const auto c = pullback_coefficients(n, f.degree, f(ball_h(z)), jac);
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += wts[j] * c[i];
        }
        for (int a = 0; a < n; ++a) {
            y[a] = 0.0;
            for (int b = 0; b < n; ++b) y[a] += dh[a * n + b] * w[b];
        }
        const auto c = interior_coefficients(n, f.degree, acc, y);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += weight * c[i];
    }
    return out;
}

FormField regularize_local(const FormField& f, const LocalOptions& opt) {
    FormField r = f;
    r.eval = [f, opt](std::span<const double> x, std::span<double> out) {
        const auto c = regularize_local_at(f, opt, x);
        std::copy(c.begin(), c.end(), out.begin());
    };
    return r;
}

FormField homotopy_local(const FormField& f, const LocalOptions& opt) {
    if (f.degree == 0) return zero_field(f.dim, 0);
    FormField r = f;
    r.degree = f.degree - 1;
    r.eval = [f, opt](std::span<const double> x, std::span<double> out) {
        const auto c = homotopy_local_at(f, opt, x);
        std::copy(c.begin(), c.end(), out.begin());
    };
    return r;
}

}  // namespace derham
