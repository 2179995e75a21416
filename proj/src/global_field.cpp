#include "derham/global_regularize.hpp"
#include "derham/parallel.hpp"
#include "derham/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace derham {

namespace {

int simplex_dim(const Simplex& s) { return static_cast<int>(s.size()) - 1; }

std::map<Simplex, std::vector<double>> merge_kinks(const std::map<Simplex, std::vector<double>>& a,
                                                   const std::map<Simplex, std::vector<double>>& b) {
    auto out = a;
    for (const auto& [s, ks] : b) {
        auto& dst = out[s];
        dst.insert(dst.end(), ks.begin(), ks.end());
        std::sort(dst.begin(), dst.end());
        dst.erase(std::unique(dst.begin(), dst.end()), dst.end());
    }
    return out;
}

GlobalField combine(const GlobalField& a, const GlobalField& b, double sign) {
    if (a.complex != b.complex || a.degree != b.degree) throw std::invalid_argument("fields live on different spaces");
    GlobalField r;
    r.complex = a.complex;
    r.degree = a.degree;
    r.kinks = merge_kinks(a.kinks, b.kinks);
    r.eval = [a, b, sign](const Simplex& s, std::span<const double> t, std::span<double> out) {
        const auto cb = b(s, t);
        a.eval(s, t, out);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += sign * cb[i];
    };
    return r;
}

bool in_star(const StarChart& chart, const Simplex& s) {
    const auto ss = chart.simplices();
    return std::find(ss.begin(), ss.end(), s) != ss.end();
}

double radius(const std::vector<double>& y) {
    double s = 0.0;
    for (double v : y) s += v * v;
    return std::sqrt(s);
}

// Kinks of g plus preimages of ∂B₁ on the star's edges.
std::map<Simplex, std::vector<double>> star_kinks(const GlobalField& g, const StarChart& chart) {
    std::map<Simplex, std::vector<double>> extra;
    for (const auto& s : chart.simplices()) {
        if (s.size() != 2) continue;
        // u is the fraction of the edge walked from the center.
        const bool forward = s[0] == chart.center();
        auto rad = [&](double u) { return radius(chart.forward(s, std::vector<double>{forward ? u : 1.0 - u}, nullptr)); };
        if (rad(1.0) <= 1.0) continue;
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            (rad(mid) < 1.0 ? lo : hi) = mid;
        }
        const double u = 0.5 * (lo + hi);
        extra[s].push_back(forward ? u : 1.0 - u);
    }
    return merge_kinks(g.kinks, extra);
}

}  // namespace

std::vector<double> GlobalField::operator()(const Simplex& s, std::span<const double> t) const {
    std::vector<double> out(index_sets(simplex_dim(s), degree).size(), 0.0);
    eval(s, t, out);
    return out;
}

GlobalField global_field(const PiecewiseForm& w) {
    GlobalField g;
    g.complex = w.complex_ptr();
    g.degree = w.degree();
    auto compiled = std::make_shared<std::map<Simplex, std::vector<CompiledPolynomial>>>();
    for (const auto& [s, piece] : w.pieces()) {
        auto& row = (*compiled)[s];
        for (IndexSet set : index_sets(piece.dim(), piece.degree())) row.emplace_back(piece.coefficient(set));
    }
    g.eval = [compiled](const Simplex& s, std::span<const double> t, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        const auto it = compiled->find(s);
        if (it == compiled->end()) return;
        for (std::size_t i = 0; i < it->second.size(); ++i)
            if (!it->second[i].is_zero()) out[i] = it->second[i](t);
    };
    return g;
}

GlobalField operator+(const GlobalField& a, const GlobalField& b) { return combine(a, b, 1.0); }
GlobalField operator-(const GlobalField& a, const GlobalField& b) { return combine(a, b, -1.0); }

namespace {

// Fourth-order derivative of c(t + s·e_j) at s = 0 with stencils kept inside
// the simplex and off kinks.
std::vector<double> partial(const GlobalField& g, const Simplex& s, std::span<const double> t, int j, double h,
                            const std::vector<double>& kinks) {
    const int m = simplex_dim(s);
    double sum = 0.0;
    for (double v : t) sum += v;
    const double back_room = t[j], fwd_room = 1.0 - sum;
    auto kink_free = [&](double a, double b) {
        for (double k : kinks)
            if (k > t[j] + a && k < t[j] + b) return false;
        return true;
    };
    std::vector<double> p(t.begin(), t.end());
    auto at = [&](double step) {
        p[j] = t[j] + step;
        return g(s, std::span<const double>(p.data(), m));
    };
    for (int attempt = 0; attempt < 30; ++attempt, h *= 0.5) {
        if (back_room >= 2 * h && fwd_room >= 2 * h && kink_free(-2 * h, 2 * h)) {
            const auto a = at(-2 * h), b = at(-h), c = at(h), d = at(2 * h);
            std::vector<double> r(a.size());
            for (std::size_t i = 0; i < r.size(); ++i) r[i] = (a[i] - 8 * b[i] + 8 * c[i] - d[i]) / (12 * h);
            return r;
        }
        for (double dir : {1.0, -1.0}) {
            const double room = dir > 0 ? fwd_room : back_room;
            if (room < 4 * h || !(dir > 0 ? kink_free(0.0, 4 * h) : kink_free(-4 * h, 0.0))) continue;
            std::vector<std::vector<double>> f;
            for (int q = 0; q <= 4; ++q) f.push_back(at(dir * q * h));
            std::vector<double> r(f[0].size());
            for (std::size_t i = 0; i < r.size(); ++i)
                r[i] = dir * (-25 * f[0][i] + 48 * f[1][i] - 36 * f[2][i] + 16 * f[3][i] - 3 * f[4][i]) / (12 * h);
            return r;
        }
    }
    throw std::domain_error("no finite-difference stencil fits at this point");
}

}  // namespace

GlobalField global_numeric_d(const GlobalField& g, double step) {
    GlobalField r;
    r.complex = g.complex;
    r.degree = g.degree + 1;
    r.kinks = g.kinks;
    r.eval = [g, step](const Simplex& s, std::span<const double> t, std::span<double> out) {
        const int m = simplex_dim(s);
        std::fill(out.begin(), out.end(), 0.0);
        if (g.degree + 1 > m) return;
        const auto src = index_sets(m, g.degree);
        const auto dst = index_sets(m, g.degree + 1);
        const auto kit = g.kinks.find(s);
        const std::vector<double> no_kinks;
        const auto& kinks = kit == g.kinks.end() ? no_kinks : kit->second;
        for (int j = 0; j < m; ++j) {
            const auto dj = partial(g, s, t, j, step, m == 1 ? kinks : no_kinks);
            const IndexSet bit = IndexSet(1) << j;
            for (std::size_t a = 0; a < src.size(); ++a) {
                if (dj[a] == 0.0 || (src[a] & bit)) continue;
                const IndexSet target = src[a] | bit;
                const auto pos = std::find(dst.begin(), dst.end(), target) - dst.begin();
                out[pos] += wedge_sign(bit, src[a]) * dj[a];
            }
        }
    };
    return r;
}

double global_lp_norm(const GlobalField& g, double p, int degree) {
    if (!(p >= 1.0)) throw std::invalid_argument("p must be at least 1");
    struct Node {
        Simplex s;
        std::vector<double> t;
        double w;
    };
    std::vector<Node> nodes;
    const int per_piece = degree / 2 + 1;
    for (const auto& s : g.complex->maximal_simplices()) {
        const int m = simplex_dim(s);
        if (m == 0) {
            nodes.push_back({s, {}, 1.0});
            continue;
        }
        const double jac = unit_simplex_volume(m) * std::tgamma(m + 1.0);
        if (m == 1) {
            std::vector<double> cuts{0.0};
            if (const auto it = g.kinks.find(s); it != g.kinks.end())
                for (double k : it->second)
                    if (k > 0.0 && k < 1.0) cuts.push_back(k);
            cuts.push_back(1.0);
            std::sort(cuts.begin(), cuts.end());
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                if (cuts[i + 1] - cuts[i] < 1e-14) continue;
                const auto r = gauss_legendre(per_piece, cuts[i], cuts[i + 1]);
                for (int q = 0; q < per_piece; ++q) nodes.push_back({s, {r.nodes[q]}, jac * r.weights[q]});
            }
            continue;
        }
        const auto rule = simplex_rule(m, degree);
        for (int q = 0; q < rule.size(); ++q)
            nodes.push_back({s, std::vector<double>(rule.point(q), rule.point(q) + m), jac * rule.weights[q]});
    }
    std::vector<double> norms(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t i) {
        const int m = simplex_dim(nodes[i].s);
        const auto c = g(nodes[i].s, nodes[i].t);
        const auto& gram = wedge_gram(m, g.degree);
        double q = 0.0;
        for (std::size_t a = 0; a < c.size(); ++a)
            for (std::size_t b = 0; b < c.size(); ++b) q += c[a] * gram[a][b] * c[b];
        norms[i] = std::sqrt(std::max(q, 0.0));
    });
    if (std::isinf(p)) return norms.empty() ? 0.0 : *std::max_element(norms.begin(), norms.end());
    double total = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) total += nodes[i].w * std::pow(norms[i], p);
    return std::pow(total, 1.0 / p);
}

FormField push_to_chart(const GlobalField& g, const StarChart& chart) {
    FormField f;
    f.dim = chart.dim();
    f.degree = g.degree;
    f.singular_points = chart.singular_points();
    f.singular_rays = chart.singular_rays();
    if (chart.dim() == 1) {
        for (const auto& s : chart.simplices()) {
            const auto it = g.kinks.find(s);
            if (it == g.kinks.end()) continue;
            for (double k : it->second)
                if (k > 0.0 && k < 1.0) f.singular_points.push_back(chart.forward(s, std::vector<double>{k}, nullptr)[0]);
        }
    }
    const int n = f.dim;
    const int degree = g.degree;
    const StarChart* c = &chart;
    f.eval = [g, c, n, degree](std::span<const double> y, std::span<double> out) {
        std::vector<double> jac;
        const auto pt = c->inverse(y, &jac);
        if (!pt) {
            std::fill(out.begin(), out.end(), 0.0);
            return;
        }
        const int m = simplex_dim(pt->simplex);
        const auto r = pullback_coefficients(m, n, degree, g(pt->simplex, pt->t), jac);
        std::copy(r.begin(), r.end(), out.begin());
    };
    return f;
}

FormField StarChart::push(const GlobalField& g) const { return push_to_chart(g, *this); }

GlobalField apply_star_regularize(const GlobalField& g, const StarChart& chart, const LocalOptions& opt) {
    GlobalField r;
    r.complex = g.complex;
    r.degree = g.degree;
    r.kinks = star_kinks(g, chart);
    const FormField f = chart.push(g);
    const StarChart* c = &chart;
    r.eval = [g, f, c, opt](const Simplex& s, std::span<const double> t, std::span<double> out) {
        if (!in_star(*c, s)) return g.eval(s, t, out);
        std::vector<double> jac;
        const auto y = c->forward(s, t, &jac);
        if (radius(y) >= 1.0) return g.eval(s, t, out);
        const auto local = regularize_local_at(f, opt, y);
        const auto back = pullback_coefficients(c->dim(), simplex_dim(s), g.degree, local, jac);
        std::copy(back.begin(), back.end(), out.begin());
    };
    return r;
}

GlobalField apply_star_homotopy(const GlobalField& g, const StarChart& chart, const LocalOptions& opt) {
    GlobalField r;
    r.complex = g.complex;
    r.degree = std::max(g.degree - 1, 0);
    r.kinks = star_kinks(g, chart);
    if (g.degree == 0) {
        r.eval = [](const Simplex&, std::span<const double>, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); };
        return r;
    }
    const FormField f = chart.push(g);
    const StarChart* c = &chart;
    const int degree = r.degree;
    r.eval = [f, c, opt, degree](const Simplex& s, std::span<const double> t, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        if (!in_star(*c, s)) return;
        std::vector<double> jac;
        const auto y = c->forward(s, t, &jac);
        if (radius(y) >= 1.0) return;
        const auto local = homotopy_local_at(f, opt, y);
        const auto back = pullback_coefficients(c->dim(), simplex_dim(s), degree, local, jac);
        std::copy(back.begin(), back.end(), out.begin());
    };
    return r;
}

}  // namespace derham
