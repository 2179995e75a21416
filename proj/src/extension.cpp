#include "derham/extension.hpp"
#include "derham/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace derham {

namespace {

Eigen::MatrixXd chart_metric(int m) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Constant(m, m, 0.5);
    g.diagonal().setOnes();
    return g;
}

// Λ^k of a symmetric matrix over index_sets(n, k).
Eigen::MatrixXd compound(const Eigen::MatrixXd& a, int k) {
    const int n = static_cast<int>(a.rows());
    const auto sets = index_sets(n, k);
    Eigen::MatrixXd c(sets.size(), sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::size_t j = 0; j < sets.size(); ++j) {
            std::vector<int> ri, cj;
            for (int b = 0; b < n; ++b) {
                if (sets[i] >> b & 1) ri.push_back(b);
                if (sets[j] >> b & 1) cj.push_back(b);
            }
            Eigen::MatrixXd minor(k, k);
            for (int r = 0; r < k; ++r)
                for (int s = 0; s < k; ++s) minor(r, s) = a(ri[r], cj[s]);
            c(i, j) = k == 0 ? 1.0 : minor.determinant();
        }
    }
    return c;
}

struct Node {
    std::vector<double> u;
    double w;
};

std::vector<Node> reference_nodes(int a, int q, int degree) {
    std::vector<Node> nodes;
    if (a == 0) {
        nodes.push_back({{}, 1.0});
    } else {
        const auto rule = simplex_rule(a, degree);
        for (int i = 0; i < rule.size(); ++i) nodes.push_back({std::vector<double>(rule.point(i), rule.point(i) + a), rule.weights[i]});
    }
    const auto g = gauss_legendre(degree / 2 + 1, 0.0, 1.0);
    for (int c = 0; c < q; ++c) {
        std::vector<Node> next;
        for (const auto& nd : nodes)
            for (std::size_t i = 0; i < g.nodes.size(); ++i) {
                Node m = nd;
                m.u.push_back(g.nodes[i]);
                m.w *= g.weights[i];
                next.push_back(std::move(m));
            }
        nodes = std::move(next);
    }
    return nodes;
}

// ∫ |α|^p over the image of a charted piece, α = piece.form (or its d).
double piece_power(const ChartedPiece& piece, const Eigen::MatrixXd& target_metric, double p, int degree, bool derivative) {
    const int d = piece.simplex_dim + piece.cube_dim;
    const int m = static_cast<int>(target_metric.rows());
    if (d != m) return 0.0;  // lower-dimensional pieces carry no volume
    const PolyForm form = derivative ? exterior_d(piece.form) : piece.form;
    if (form.degree() > d || form.is_zero()) return 0.0;
    const auto sets = index_sets(d, form.degree());
    std::vector<CompiledPolynomial> coeffs;
    for (IndexSet s : sets) coeffs.emplace_back(form.coefficient(s));
    double total = 0.0;
    std::vector<double> t(m), jac(m * d);
    for (const auto& nd : reference_nodes(piece.simplex_dim, piece.cube_dim, degree)) {
        piece.map(nd.u, t, jac);
        const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> j(jac.data(), m, d);
        const Eigen::MatrixXd gu = j.transpose() * target_metric * j;
        const double vol = std::sqrt(std::max(gu.determinant(), 0.0));
        const Eigen::MatrixXd lam = compound(gu.inverse(), form.degree());
        Eigen::VectorXd c(sets.size());
        for (std::size_t i = 0; i < sets.size(); ++i) c(i) = coeffs[i].is_zero() ? 0.0 : coeffs[i](nd.u);
        const double sq = std::max(c.dot(lam * c), 0.0);
        total += nd.w * vol * std::pow(std::sqrt(sq), p);
    }
    return total;
}

double charted_power(const ChartedForm& f, double p, int degree, bool derivative) {
    const Eigen::MatrixXd g = chart_metric(static_cast<int>(f.simplex.size()) - 1);
    double s = 0.0;
    for (const auto& piece : f.pieces) s += piece_power(piece, g, p, degree, derivative);
    return s;
}

void require_finite_p(double p) {
    if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("p must be finite and at least 1");
}

ChartedPiece identity_piece(const PolyForm& w) {
    const int m = w.dim();
    ChartedPiece piece{m, 0, w, {}};
    piece.map = [m](std::span<const double> u, std::span<double> t, std::span<double> jac) {
        std::copy(u.begin(), u.end(), t.begin());
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) jac[a * m + b] = a == b ? 1.0 : 0.0;
    };
    return piece;
}

// (1 − s)·w with s appended as the last variable and form direction.
PolyForm cylinder_form(const PolyForm& w) {
    const int n = w.dim() + 1;
    PolyForm out(n, w.degree());
    const Polynomial fade = Polynomial::constant(n, 1) - Polynomial::variable(n, n - 1);
    for (const auto& [set, poly] : w.terms()) out.add(set, poly.resized(n) * fade);
    return out;
}

// Restriction to last variable = value, dropping the matching direction.
PolyForm slice_last(const PolyForm& piece, const Rational& value) {
    const int m = piece.dim() - 1;
    PolyForm slice(m, piece.degree());
    for (const auto& [set, poly] : piece.terms())
        if (!(set >> m & 1)) slice.add(set, poly.set_variable(m, value).resized(m));
    return slice;
}

// Collar piece on the cone over facet `face` of `tau`, built from a piece of the facet.
ChartedPiece collar_piece(const ChartedPiece& old, const Simplex& tau, const Simplex& face) {
    const int j = static_cast<int>(tau.size()) - 1;
    const int f = j - 1;
    auto position = [&](int v) { return static_cast<int>(std::find(tau.begin(), tau.end(), v) - tau.begin()); };
    // x = A t_F + c in the chart of tau.
    std::vector<double> a(j * std::max(f, 0), 0.0), c(j, 0.0);
    const int p0 = position(face[0]);
    if (p0 > 0) c[p0 - 1] = 1.0;
    for (int i = 1; i <= f; ++i) {
        const int pi = position(face[i]);
        if (pi > 0) a[(pi - 1) * f + (i - 1)] += 1.0;
        if (p0 > 0) a[(p0 - 1) * f + (i - 1)] -= 1.0;
    }
    ChartedPiece piece{old.simplex_dim, old.cube_dim + 1, cylinder_form(old.form), {}};
    const auto inner = old.map;
    const int du = old.simplex_dim + old.cube_dim;
    piece.map = [inner, a, c, j, f, du](std::span<const double> u, std::span<double> t, std::span<double> jac) {
        const double s = u[du];
        std::vector<double> tf(f), jf(f * du);
        inner(u.subspan(0, du), tf, jf);
        const double b = 1.0 / (j + 1);
        const double r = 1.0 - 0.5 * s;
        for (int row = 0; row < j; ++row) {
            double x = c[row];
            for (int i = 0; i < f; ++i) x += a[row * f + i] * tf[i];
            t[row] = b + r * (x - b);
            for (int col = 0; col < du; ++col) {
                double v = 0.0;
                for (int i = 0; i < f; ++i) v += a[row * f + i] * jf[i * du + col];
                jac[row * (du + 1) + col] = r * v;
            }
            jac[row * (du + 1) + du] = -0.5 * (x - b);
        }
    };
    return piece;
}

}  // namespace

PrismForm extend_cylinder(const PiecewiseForm& w) {
    PrismForm out{w.complex_ptr(), w.degree(), {}};
    for (const auto& [s, piece] : w.pieces()) out.pieces[s] = cylinder_form(piece);
    return out;
}

PiecewiseForm prism_slice(const PrismForm& w, const Rational& value) {
    PiecewiseForm out(w.complex, w.degree);
    for (const auto& [s, piece] : w.pieces) out.set_piece(s, slice_last(piece, value));
    return out;
}

PrismForm exterior_d(const PrismForm& w) {
    PrismForm out{w.complex, w.degree + 1, {}};
    for (const auto& [s, piece] : w.pieces) out.pieces[s] = exterior_d(piece);
    return out;
}

namespace {

double prism_power(const PrismForm& w, double p, int degree) {
    double total = 0.0;
    for (const auto& [s, piece] : w.pieces) {
        const int m = piece.dim() - 1;
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m + 1, m + 1);
        g.topLeftCorner(m, m) = chart_metric(m);
        g(m, m) = 1.0;
        ChartedPiece cp = identity_piece(piece);
        cp.simplex_dim = m;
        cp.cube_dim = 1;
        total += piece_power(cp, g, p, degree, false);
    }
    return total;
}

}  // namespace

double prism_lp_norm(const PrismForm& w, double p, int quad_degree) {
    require_finite_p(p);
    return std::pow(prism_power(w, p, quad_degree), 1.0 / p);
}

double prism_sobolev_norm(const PrismForm& w, double p, int quad_degree) {
    require_finite_p(p);
    return std::pow(prism_power(w, p, quad_degree) + prism_power(exterior_d(w), p, quad_degree), 1.0 / p);
}

double extended_lp_norm(const ExtendedForm& w, double p, int quad_degree) {
    require_finite_p(p);
    double s = 0.0;
    for (const auto& [simplex, f] : w.forms) s += charted_power(f, p, quad_degree, false);
    return std::pow(s, 1.0 / p);
}

double extended_sobolev_norm(const ExtendedForm& w, double p, int quad_degree) {
    require_finite_p(p);
    double s = 0.0;
    for (const auto& [simplex, f] : w.forms)
        s += charted_power(f, p, quad_degree, false) + charted_power(f, p, quad_degree, true);
    return std::pow(s, 1.0 / p);
}

ExtensionReport extend_from_skeleton(const PiecewiseForm& w, std::shared_ptr<const SimplicialComplex> k, double p,
                                     int quad_degree) {
    require_finite_p(p);
    const auto& src = w.complex();
    const int m = src.dim();
    for (int d = 0; d <= std::min(m, k->dim()); ++d)
        if (src.count(d) != k->count(d) || !std::all_of(k->simplices(d).begin(), k->simplices(d).end(),
                                                       [&](const Simplex& s) { return src.contains(s); }))
            throw std::invalid_argument("form does not live on a skeleton of the target complex");
    if (!check_compatibility(w).compatible) throw std::invalid_argument("incompatible traces: " + check_compatibility(w).detail);

    ExtensionReport rep;
    rep.input_norm = sobolev_norm(w, p, NormOptions{quad_degree});
    std::map<Simplex, ChartedForm> current;
    for (int d = 0; d <= m; ++d)
        for (const auto& s : k->simplices(d)) {
            current[s] = ChartedForm{s, w.degree(), {}};
            if (d >= w.degree()) current[s].pieces.push_back(identity_piece(w.trace(s)));
        }
    for (int j = m + 1; j <= k->dim(); ++j) {
        double step = 0.0;
        for (const auto& tau : k->simplices(j)) {
            ChartedForm f{tau, w.degree(), {}};
            for (const auto& face : faces_of(tau, j - 1)) {
                for (const auto& old : current.at(face).pieces) {
                    ChartedPiece piece = collar_piece(old, tau, face);
                    // At s = 0 the tangential part must reproduce the facet piece.
                    const PolyForm at_zero = slice_last(piece.form, 0);
                    for (const auto& nd : reference_nodes(old.simplex_dim, old.cube_dim, 4)) {
                        for (IndexSet s : index_sets(old.form.dim(), w.degree())) {
                            const double x = at_zero.coefficient(s).evaluate(std::span<const double>(nd.u));
                            const double y = old.form.coefficient(s).evaluate(std::span<const double>(nd.u));
                            rep.trace_error = std::max(rep.trace_error, std::abs(x - y));
                        }
                    }
                    f.pieces.push_back(std::move(piece));
                }
            }
            step += charted_power(f, p, quad_degree, false) + charted_power(f, p, quad_degree, true);
            current[tau] = std::move(f);
        }
        rep.step_norms.push_back(std::pow(step, 1.0 / p));
    }
    rep.form.complex = k;
    rep.form.degree = w.degree();
    for (const auto& s : k->maximal_simplices()) rep.form.forms[s] = current.at(s);
    rep.output_norm = extended_sobolev_norm(rep.form, p, quad_degree);
    rep.inequality_holds = rep.output_norm <= rep.input_norm;
    return rep;
}

ExtensionReport extend_from_boundary(const PiecewiseForm& w, double p, int quad_degree) {
    const auto& b = w.complex();
    const Simplex delta = b.vertices();
    const int n = static_cast<int>(delta.size()) - 1;
    const auto maximal = b.maximal_simplices();
    if (n < 1 || static_cast<int>(maximal.size()) != n + 1 ||
        !std::all_of(maximal.begin(), maximal.end(), [n](const Simplex& s) { return static_cast<int>(s.size()) == n; }))
        throw std::invalid_argument("form does not live on the boundary of a simplex");
    ComplexDescription desc;
    desc.maximal_simplices = {delta};
    return extend_from_skeleton(w, std::make_shared<const SimplicialComplex>(desc), p, quad_degree);
}

std::pair<double, double> collar_lipschitz_constants(int n) {
    if (n < 1) throw std::invalid_argument("simplex dimension must be positive");
    Simplex tau, face;
    for (int i = 0; i <= n; ++i) tau.push_back(i);
    face.assign(tau.begin() + 1, tau.end());
    const ChartedPiece base = identity_piece(PolyForm(n - 1, 0));
    const ChartedPiece piece = collar_piece(base, tau, face);
    Eigen::MatrixXd product = Eigen::MatrixXd::Zero(n, n);
    if (n > 1) product.topLeftCorner(n - 1, n - 1) = chart_metric(n - 1);
    product(n - 1, n - 1) = 1.0;
    const Eigen::MatrixXd target = chart_metric(n);
    double lo = 1e300, hi = 0.0;
    std::vector<double> t(n), jac(n * n);
    for (const auto& nd : reference_nodes(n - 1, 1, 8)) {
        piece.map(nd.u, t, jac);
        const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> j(jac.data(), n, n);
        const Eigen::MatrixXd m = product.inverse() * j.transpose() * target * j;
        const Eigen::VectorXcd ev = m.eigenvalues();
        for (int i = 0; i < n; ++i) {
            lo = std::min(lo, std::sqrt(ev(i).real()));
            hi = std::max(hi, std::sqrt(ev(i).real()));
        }
    }
    return {lo, hi};
}

double SphereForm::support_radius() const { return std::numbers::pi - cap_radius; }

SphereForm extend_by_zero_sphere(const PolyForm& w, double cap_radius) {
    if (w.degree() != w.dim()) throw std::invalid_argument("extension by zero needs a top-degree form");
    if (!(cap_radius > 0.0 && cap_radius < 0.5 * std::numbers::pi))
        throw std::invalid_argument("cap radius must lie in (0, π/2)");
    const int k = w.dim();
    const CompiledPolynomial coeff(w.coefficient((IndexSet(1) << k) - 1));
    const double a = cap_radius, outer = std::numbers::pi - cap_radius;
    SphereForm out;
    out.dim = k;
    out.cap_radius = a;
    out.coefficient = [coeff, a, outer, k](std::span<const double> u) {
        double r = 0.0;
        for (double v : u) r += v * v;
        r = std::sqrt(r);
        if (r >= outer) return 0.0;
        std::vector<double> inside(u.begin(), u.end());
        if (r > a)
            for (double& v : inside) v *= a / r;
        auto smooth = [](double x) { return x <= 0.0 ? 0.0 : std::exp(-1.0 / x); };
        const double x = (r - a) / (outer - a);
        const double beta = r <= a ? 1.0 : smooth(1.0 - x) / (smooth(1.0 - x) + smooth(x));
        const double value = coeff.is_zero() ? 0.0 : coeff(std::span<const double>(inside.data(), k));
        return beta * value;
    };
    return out;
}

}  // namespace derham
