#include "derham/bouquet.hpp"

#include "derham/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace derham {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double a) {
    a = std::fmod(a, kTwoPi);
    return a < 0 ? a + kTwoPi : a;
}

double leaf_coefficient(const BouquetForm& w, int leaf, double t, int half) {
    const PolyForm& piece = w.halves[leaf][half];
    const double x[1] = {t};
    return piece.coefficient(index_sets(1, w.degree)[0]).evaluate(std::span<const double>(x, 1));
}

// Ray r of the bouquet: leaf r mod m, on the negative side for r ≥ m.
struct Ray {
    int leaf;
    double side;
    double angle;
};

std::vector<Ray> rays(const BouquetModel& model) {
    std::vector<Ray> out;
    for (int i = 0; i < model.leaves(); ++i) {
        out.push_back({i, 1.0, model.angles[i]});
        out.push_back({i, -1.0, model.angles[i] + kPi});
    }
    std::sort(out.begin(), out.end(), [](const Ray& a, const Ray& b) { return a.angle < b.angle; });
    return out;
}

// ω along a ray in the outward coordinate ρ (t = side·ρ).
double ray_value(const BouquetForm& w, const Ray& r, double rho) {
    const double c = leaf_coefficient(w, r.leaf, r.side * rho, r.side > 0 ? 1 : 0);
    return w.degree == 1 ? r.side * c : c;
}

// Position of a plane point relative to a star of rays (ascending angles):
// the nearest ray, the angular fraction s ∈ [0, 1] towards the bisector,
// the side σ (+1 when θ > θ_ray) and the half sector angle Δ.
struct SectorPoint {
    int ray = 0;
    double r = 0, s = 0, sigma = 1, half = 0;
};

SectorPoint locate(const std::vector<double>& angles, std::span<const double> y) {
    SectorPoint p;
    p.r = std::hypot(y[0], y[1]);
    const double theta = wrap(std::atan2(y[1], y[0]));
    const std::size_t n = angles.size();
    std::size_t k = n - 1;
    for (std::size_t i = 0; i < n; ++i)
        if (angles[i] <= theta) k = i;
    const double lo = angles[k];
    const double hi = k + 1 < n ? angles[k + 1] : angles[0] + kTwoPi;
    double rel = theta - lo;
    if (rel < 0.0) rel += kTwoPi;
    p.half = 0.5 * (hi - lo);
    if (rel <= p.half) {
        p.ray = static_cast<int>(k);
        p.s = rel / p.half;
        p.sigma = 1.0;
    } else {
        p.ray = static_cast<int>((k + 1) % n);
        p.s = (2.0 * p.half - rel) / p.half;
        p.sigma = -1.0;
    }
    return p;
}

}  // namespace

BouquetModel make_bouquet(int leaves) {
    if (leaves < 1) throw std::invalid_argument("a bouquet needs at least one leaf");
    BouquetModel m;
    for (int i = 0; i < leaves; ++i) m.angles.push_back(i * kPi / leaves);
    return m;
}

void validate_bouquet(const BouquetModel& model) {
    if (model.angles.empty()) throw std::invalid_argument("a bouquet needs at least one leaf");
    auto sorted = model.angles;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (!(sorted[i] >= 0.0 && sorted[i] < kPi)) throw std::invalid_argument("leaf angles must lie in [0, π)");
        if (i > 0 && sorted[i] - sorted[i - 1] < 1e-9) throw std::invalid_argument("leaves must be distinct");
    }
}

std::vector<double> bouquet_ray_angles(const BouquetModel& model) {
    std::vector<double> out;
    for (const auto& r : rays(model)) out.push_back(r.angle);
    return out;
}

BouquetForm zero_bouquet_form(const BouquetModel& model, int degree) {
    BouquetForm w;
    w.model = model;
    w.degree = degree;
    for (int i = 0; i < model.leaves(); ++i) w.halves.push_back({PolyForm(1, degree), PolyForm(1, degree)});
    return w;
}

void check_bouquet_form(const BouquetForm& w) {
    validate_bouquet(w.model);
    if (w.degree != 0 && w.degree != 1) throw std::invalid_argument("bouquet forms have degree 0 or 1");
    if (static_cast<int>(w.halves.size()) != w.model.leaves()) throw std::invalid_argument("one pair of pieces per leaf");
    for (const auto& pair : w.halves)
        for (const auto& piece : pair)
            if (piece.dim() != 1 || piece.degree() != w.degree || piece.nvars() != 1)
                throw std::invalid_argument("leaf pieces must be forms on the line");
    if (w.degree == 0) {
        const double center = leaf_coefficient(w, 0, 0.0, 1);
        for (int i = 0; i < w.model.leaves(); ++i) {
            const double x[1] = {0.0};
            for (const auto& piece : w.halves[i])
                if (std::abs(piece.coefficient(0).evaluate(std::span<const double>(x, 1)) - center) > 1e-12)
                    throw std::invalid_argument("0-form values disagree at the center");
        }
    }
}

BouquetForm exterior_d(const BouquetForm& w) {
    if (w.degree != 0) throw std::invalid_argument("1-forms on a 1-bouquet have top degree");
    BouquetForm r = zero_bouquet_form(w.model, 1);
    for (int i = 0; i < w.model.leaves(); ++i)
        for (int h = 0; h < 2; ++h) r.halves[i][h] = exterior_d(w.halves[i][h]);
    return r;
}

double bouquet_sobolev_norm(const BouquetForm& w, double p) {
    const auto g = gauss_legendre(24, 0.0, 1.0);
    const BouquetForm dw = w.degree == 0 ? exterior_d(w) : zero_bouquet_form(w.model, 1);
    double total = 0.0;
    for (int i = 0; i < w.model.leaves(); ++i)
        for (double side : {-1.0, 1.0})
            for (std::size_t q = 0; q < g.nodes.size(); ++q) {
                const double t = side * g.nodes[q];
                const int half = side > 0 ? 1 : 0;
                total += g.weights[q] * std::pow(std::abs(leaf_coefficient(w, i, t, half)), p);
                if (w.degree == 0) total += g.weights[q] * std::pow(std::abs(leaf_coefficient(dw, i, t, half)), p);
            }
    return std::pow(total, 1.0 / p);
}

FormField fold_extension(std::vector<double> ray_angles, int degree,
                         std::function<double(int ray, double rho)> ray_coefficient) {
    if (ray_angles.empty()) throw std::invalid_argument("no rays");
    if (degree != 0 && degree != 1) throw std::invalid_argument("fold extension of forms of degree 0 or 1");
    FormField f;
    f.dim = 2;
    f.degree = degree;
    for (std::size_t i = 0; i < ray_angles.size(); ++i) {
        const double next = i + 1 < ray_angles.size() ? ray_angles[i + 1] : ray_angles[0] + kTwoPi;
        f.singular_rays.push_back(ray_angles[i]);
        f.singular_rays.push_back(wrap(0.5 * (ray_angles[i] + next)));
    }
    f.eval = [angles = std::move(ray_angles), degree, coeff = std::move(ray_coefficient)](std::span<const double> y,
                                                                                          std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        const SectorPoint p = locate(angles, y);
        if (p.r == 0.0) {
            if (degree == 0) out[0] = coeff(0, 0.0);
            return;
        }
        const double r = p.r, s = p.s;
        const double c = coeff(p.ray, r * (1.0 - s));
        if (degree == 0) {
            out[0] = c;
            return;
        }
        // ∇ρ = (1 − s)ŷ − (σ/Δ)·(−y₂, y₁)/r.
        out[0] = c * ((1.0 - s) * y[0] / r + p.sigma / p.half * y[1] / r);
        out[1] = c * ((1.0 - s) * y[1] / r - p.sigma / p.half * y[0] / r);
    };
    return f;
}

FormField fold_extension(const BouquetForm& w) {
    check_bouquet_form(w);
    const auto rs = rays(w.model);
    std::vector<double> angles;
    for (const auto& r : rs) angles.push_back(r.angle);
    return fold_extension(angles, w.degree, [w, rs](int ray, double rho) {
        return rho <= 1.0 ? ray_value(w, rs[ray], rho) : 0.0;
    });
}

FormField restrict_to_leaf(const FormField& f, const BouquetModel& model, int leaf) {
    if (f.dim != 2 || f.degree > 1) throw std::invalid_argument("restriction needs a plane field of degree 0 or 1");
    FormField r;
    r.dim = 1;
    r.degree = f.degree;
    r.singular_points = {0.0};
    const double ex = std::cos(model.angles[leaf]), ey = std::sin(model.angles[leaf]);
    r.eval = [f, ex, ey](std::span<const double> t, std::span<double> out) {
        const double y[2] = {t[0] * ex, t[0] * ey};
        const auto c = f(std::span<const double>(y, 2));
        out[0] = f.degree == 0 ? c[0] : c[0] * ex + c[1] * ey;
    };
    return r;
}

namespace {

// Leaf i of a bouquet form as a field on t ∈ (−1, 1).
FormField leaf_field(const BouquetForm& w, int leaf) {
    FormField f;
    f.dim = 1;
    f.degree = w.degree;
    f.singular_points = {0.0};
    f.eval = [w, leaf](std::span<const double> t, std::span<double> out) {
        out[0] = leaf_coefficient(w, leaf, t[0], t[0] >= 0.0 ? 1 : 0);
    };
    return f;
}

// L_p norm of a difference of leaf fields, split at the center.
double leaves_lp_norm(const std::vector<FormField>& fields, double p) {
    constexpr int kPieces = 4;
    constexpr int kPoints = 12;
    double total = 0.0;
    for (const auto& f : fields)
        for (int piece = 0; piece < kPieces; ++piece) {
            const double a = -1.0 + 2.0 * piece / kPieces;
            const auto g = gauss_legendre(kPoints, a, a + 2.0 / kPieces);
            for (int q = 0; q < kPoints; ++q) {
                const double t[1] = {g.nodes[q]};
                total += g.weights[q] * std::pow(std::abs(f(std::span<const double>(t, 1))[0]), p);
            }
        }
    return std::pow(total, 1.0 / p);
}

}  // namespace

BouquetExtension extend_bouquet(const BouquetForm& w, double p) {
    check_bouquet_form(w);
    if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("p must be finite and at least 1");
    const auto rs = rays(w.model);
    std::vector<double> angles;
    for (const auto& r : rs) angles.push_back(r.angle);
    const int degree = w.degree;

    BouquetExtension ext;
    ext.field.dim = 2;
    ext.field.degree = degree;
    ext.field.singular_rays = fold_extension(angles, degree, [](int, double) { return 0.0; }).singular_rays;
    ext.field.eval = [w, rs, angles, degree](std::span<const double> y, std::span<double> out) {
        std::fill(out.begin(), out.end(), 0.0);
        const SectorPoint pt = locate(angles, y);
        if (pt.r == 0.0 || pt.r > 1.0) {
            if (pt.r == 0.0 && degree == 0) out[0] = ray_value(w, rs[0], 0.0);
            return;
        }
        const double c = (1.0 - pt.s) * ray_value(w, rs[pt.ray], pt.r);
        if (degree == 0) {
            out[0] = c;
        } else {
            out[0] = c * y[0] / pt.r;
            out[1] = c * y[1] / pt.r;
        }
    };

    ext.input_norm = bouquet_sobolev_norm(w, p);

    // Per half sector with angle Δ: |ω̃| = (1 − s)|u(r)|, and |dω̃| is
    // √((u/(rΔ))² + ((1 − s)u′)²) for 0-forms and |u|/(rΔ) for 1-forms.
    const BouquetForm dw = degree == 0 ? exterior_d(w) : zero_bouquet_form(w.model, 1);
    constexpr int kLevels = 60;
    constexpr int kPoints = 12;
    const double r0 = std::ldexp(1.0, -kLevels);
    const auto gs = gauss_legendre(kPoints, 0.0, 1.0);
    double total = 0.0;
    for (std::size_t a = 0; a < rs.size(); ++a) {
        const double u0 = ray_value(w, rs[a], 0.0);
        const double next = a + 1 < rs.size() ? angles[a + 1] : angles[0] + kTwoPi;
        const double prev = a > 0 ? angles[a - 1] : angles.back() - kTwoPi;
        for (double half : {0.5 * (next - angles[a]), 0.5 * (angles[a] - prev)}) {
            if (std::abs(u0) > 1e-14) {
                if (p >= 2.0) ext.output_finite = false;
                else total += half * std::pow(std::abs(u0) / half, p) * std::pow(r0, 2.0 - p) / (2.0 - p);
            }
            for (int level = 0; level < kLevels; ++level) {
                const auto gr = gauss_legendre(kPoints, std::ldexp(1.0, -level - 1), std::ldexp(1.0, -level));
                for (int i = 0; i < kPoints; ++i) {
                    const double r = gr.nodes[i];
                    const double u = ray_value(w, rs[a], r);
                    const double du = degree == 0 ? ray_value(dw, rs[a], r) : 0.0;
                    for (int j = 0; j < kPoints; ++j) {
                        const double s = gs.nodes[j];
                        const double value = (1.0 - s) * std::abs(u);
                        const double grad = degree == 0 ? std::hypot(u / (r * half), (1.0 - s) * du) : std::abs(u) / (r * half);
                        total += gr.weights[i] * gs.weights[j] * r * half * (std::pow(value, p) + std::pow(grad, p));
                    }
                }
            }
        }
    }
    ext.output_norm = ext.output_finite ? std::pow(total, 1.0 / p) : std::numeric_limits<double>::infinity();

    for (int leaf = 0; leaf < w.model.leaves(); ++leaf) {
        const FormField on_leaf = restrict_to_leaf(ext.field, w.model, leaf);
        for (int i = -20; i <= 20; ++i) {
            if (i == 0) continue;
            const double t[1] = {i / 20.0};
            const double got = on_leaf(std::span<const double>(t, 1))[0];
            const double want = leaf_coefficient(w, leaf, t[0], i > 0 ? 1 : 0);
            ext.trace_error = std::max(ext.trace_error, std::abs(got - want));
        }
    }
    ext.inequality_holds = ext.output_finite && ext.output_norm <= ext.input_norm;
    return ext;
}

BouquetRegularization bouquet_star_regularize(const BouquetForm& w, const LocalOptions& opt, double p) {
    check_bouquet_form(w);
    const int m = w.model.leaves();
    BouquetRegularization out;
    out.reduced_to_segment = m == 1;
    LocalOptions local = opt;
    local.kernel = make_kernel(m == 1 ? 1 : 2, opt.kernel.profile, opt.kernel.eps);

    std::vector<FormField> residuals;
    if (m == 1) {
        const FormField f = leaf_field(w, 0);
        out.regularized.push_back(regularize_local(f, local));
        out.homotopy.push_back(homotopy_local(f, local));
        FormField r = out.regularized[0] - f;
        if (w.degree == 0) r = r - homotopy_local(leaf_field(exterior_d(w), 0), local);
        else r = r - numeric_d(out.homotopy[0]);
        residuals.push_back(r);
    } else {
        const FormField big = fold_extension(w);
        const FormField reg = regularize_local(big, local);
        const FormField hom = homotopy_local(big, local);
        const FormField hom_d = w.degree == 0 ? homotopy_local(fold_extension(exterior_d(w)), local) : FormField{};
        for (int leaf = 0; leaf < m; ++leaf) {
            out.regularized.push_back(restrict_to_leaf(reg, w.model, leaf));
            out.homotopy.push_back(restrict_to_leaf(hom, w.model, leaf));
            FormField r = out.regularized.back() - leaf_field(w, leaf);
            if (w.degree == 0) r = r - restrict_to_leaf(hom_d, w.model, leaf);
            else r = r - numeric_d(out.homotopy.back());
            residuals.push_back(r);
        }
    }
    out.residual_norm = leaves_lp_norm(residuals, p);
    return out;
}

namespace {

// Star of a vertex of degree 2m in a 1-complex: edge j (ascending other
// vertex) lies on leaf j/2, on the negative side for even j, scaled so that
// each edge covers radius [0, 1.4] of its ray.
class BouquetChart final : public StarChart {
public:
    static constexpr double kScale = 1.4;

    BouquetChart(int center, std::vector<Simplex> edges) : center_(center), edges_(std::move(edges)) {
        model_ = make_bouquet(static_cast<int>(edges_.size()) / 2);
        for (std::size_t j = 0; j < edges_.size(); ++j)
            edge_angle_.push_back(model_.angles[j / 2] + (j % 2 == 0 ? kPi : 0.0));
        std::vector<std::size_t> order(edges_.size());
        for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return edge_angle_[a] < edge_angle_[b]; });
        for (auto j : order) {
            ray_edge_.push_back(j);
            ray_angle_.push_back(edge_angle_[j]);
        }
    }

    int dim() const override { return 2; }
    int center() const override { return center_; }
    std::vector<Simplex> simplices() const override { return edges_; }

    std::vector<double> forward(const Simplex& s, std::span<const double> t, std::vector<double>* jac) const override {
        const std::size_t j = edge_index(s);
        const double dudt = s[0] == center_ ? 1.0 : -1.0;
        const double u = s[0] == center_ ? t[0] : 1.0 - t[0];
        const double ex = std::cos(edge_angle_[j]), ey = std::sin(edge_angle_[j]);
        if (jac) *jac = {kScale * dudt * ex, kScale * dudt * ey};
        return {kScale * u * ex, kScale * u * ey};
    }

    std::optional<ChartPoint> inverse(std::span<const double> y, std::vector<double>* jac) const override {
        const double r = std::hypot(y[0], y[1]);
        if (r > kScale) return std::nullopt;
        std::size_t j = 0;
        if (r > 0.0) {
            const double theta = wrap(std::atan2(y[1], y[0]));
            bool found = false;
            for (std::size_t i = 0; i < edges_.size() && !found; ++i) {
                const double gap = std::abs(std::remainder(theta - edge_angle_[i], kTwoPi));
                if (gap * r < 1e-12) {
                    j = i;
                    found = true;
                }
            }
            if (!found) return std::nullopt;
        }
        const Simplex& s = edges_[j];
        const double dudt = s[0] == center_ ? 1.0 : -1.0;
        const double u = r / kScale;
        const double ex = std::cos(edge_angle_[j]), ey = std::sin(edge_angle_[j]);
        if (jac) *jac = {dudt * ex / kScale, dudt * ey / kScale};
        return ChartPoint{s, {s[0] == center_ ? u : 1.0 - u}};
    }

    double sigma_prime_radius() const override { return 0.5 * kScale; }
    double chart_radius() const override { return kScale; }
    std::vector<double> singular_rays() const override {
        return fold_extension(ray_angle_, 0, [](int, double) { return 0.0; }).singular_rays;
    }

    // Fold extension of the field restricted to the star.
    FormField push(const GlobalField& g) const override {
        const int degree = g.degree;
        auto coeff = [g, this, degree](int ray, double rho) {
            const double u = rho / kScale;
            if (u > 1.0) return 0.0;
            const Simplex& s = edges_[ray_edge_[ray]];
            const bool out_edge = s[0] == center_;
            const double t[1] = {out_edge ? u : 1.0 - u};
            const double c = g(s, std::span<const double>(t, 1))[0];
            return degree == 0 ? c : c * (out_edge ? 1.0 : -1.0) / kScale;
        };
        return fold_extension(ray_angle_, degree, coeff);
    }

private:
    std::size_t edge_index(const Simplex& s) const {
        const auto it = std::find(edges_.begin(), edges_.end(), s);
        if (it == edges_.end()) throw std::out_of_range("simplex is not in the star");
        return static_cast<std::size_t>(it - edges_.begin());
    }

    int center_;
    std::vector<Simplex> edges_;
    BouquetModel model_;
    std::vector<double> edge_angle_;
    std::vector<std::size_t> ray_edge_;
    std::vector<double> ray_angle_;
};

}  // namespace

std::unique_ptr<StarChart> make_bouquet_chart(const SimplicialComplex& k, int vertex) {
    std::vector<int> nbrs;
    for (const auto& s : k.maximal_simplices()) {
        if (!std::binary_search(s.begin(), s.end(), vertex)) continue;
        if (s.size() != 2) throw std::invalid_argument("star of vertex " + std::to_string(vertex) + " is not a bouquet");
        nbrs.push_back(s[0] == vertex ? s[1] : s[0]);
    }
    if (nbrs.empty() || nbrs.size() % 2 != 0)
        throw std::invalid_argument("star of vertex " + std::to_string(vertex) + " is not a bouquet");
    std::sort(nbrs.begin(), nbrs.end());
    std::vector<Simplex> edges;
    for (int o : nbrs) edges.push_back(vertex < o ? Simplex{vertex, o} : Simplex{o, vertex});
    return std::make_unique<BouquetChart>(vertex, std::move(edges));
}

}  // namespace derham
