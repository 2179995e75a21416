#include "derham/piecewise_form.hpp"

#include "derham/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace derham {

AffineMap face_embedding(const Simplex& face, const Simplex& parent) {
    if (!is_face(face, parent)) throw std::invalid_argument("not a face of the given simplex");
    const int j = static_cast<int>(face.size()) - 1;
    const int m = static_cast<int>(parent.size()) - 1;
    AffineMap a;
    a.matrix.assign(m, std::vector<Rational>(j, 0));
    a.offset.assign(m, 0);
    for (int i = 1; i <= m; ++i) {
        const auto it = std::find(face.begin(), face.end(), parent[i]);
        if (it == face.end()) continue;
        const int pos = static_cast<int>(it - face.begin());
        if (pos == 0) {
            a.offset[i - 1] = 1;
            for (int c = 0; c < j; ++c) a.matrix[i - 1][c] = -1;
        } else {
            a.matrix[i - 1][pos - 1] = 1;
        }
    }
    return a;
}

PolyForm face_trace(const PolyForm& w, const Simplex& parent, const Simplex& face) {
    if (w.dim() != static_cast<int>(parent.size()) - 1) throw std::invalid_argument("form chart differs from simplex");
    if (w.degree() > static_cast<int>(face.size()) - 1)
        return PolyForm(static_cast<int>(face.size()) - 1, static_cast<int>(face.size()) - 1,
                        w.nvars() - w.dim() + static_cast<int>(face.size()) - 1);
    return pullback(face_embedding(face, parent), w);
}

Polynomial barycentric_coordinate(int m, int i, int nvars) {
    if (nvars < 0) nvars = m;
    if (i > 0) return Polynomial::variable(nvars, i - 1);
    Polynomial p = Polynomial::constant(nvars, 1);
    for (int j = 0; j < m; ++j) p -= Polynomial::variable(nvars, j);
    return p;
}

PiecewiseForm::PiecewiseForm(std::shared_ptr<const SimplicialComplex> complex, int degree)
    : complex_(std::move(complex)), degree_(degree) {
    if (!complex_) throw std::invalid_argument("piecewise form needs a complex");
    if (degree < 0) throw std::invalid_argument("negative form degree");
    maximal_ = complex_->maximal_simplices();
}

PolyForm PiecewiseForm::piece(const Simplex& s) const {
    auto it = pieces_.find(s);
    if (it != pieces_.end()) return it->second;
    const int m = static_cast<int>(s.size()) - 1;
    return PolyForm(m, std::min(degree_, m));
}

void PiecewiseForm::set_piece(const Simplex& s, const PolyForm& w) {
    if (std::find(maximal_.begin(), maximal_.end(), s) == maximal_.end())
        throw std::invalid_argument("pieces live on maximal simplices only");
    const int m = static_cast<int>(s.size()) - 1;
    if (w.dim() != m || w.degree() != degree_ || w.nvars() != m)
        throw std::invalid_argument("piece does not match the simplex chart or form degree");
    if (w.is_zero())
        pieces_.erase(s);
    else
        pieces_[s] = w;
}

PolyForm PiecewiseForm::trace(const Simplex& s) const {
    if (!complex_->contains(s)) throw std::invalid_argument("unknown simplex");
    const int m = static_cast<int>(s.size()) - 1;
    for (const auto& top : maximal_) {
        if (!is_face(s, top)) continue;
        auto it = pieces_.find(top);
        if (it == pieces_.end()) break;
        return face_trace(it->second, top, s);
    }
    return PolyForm(m, std::min(degree_, m));
}

namespace {
void require_same(const PiecewiseForm& a, const PiecewiseForm& b) {
    if (&a.complex() != &b.complex() && a.complex().maximal_simplices() != b.complex().maximal_simplices())
        throw std::invalid_argument("piecewise forms live on different complexes");
    if (a.degree() != b.degree()) throw std::invalid_argument("piecewise forms differ in degree");
}
}  // namespace

PiecewiseForm& PiecewiseForm::operator+=(const PiecewiseForm& o) {
    require_same(*this, o);
    for (const auto& [s, w] : o.pieces_) set_piece(s, piece(s) + w);
    return *this;
}

PiecewiseForm& PiecewiseForm::operator-=(const PiecewiseForm& o) {
    require_same(*this, o);
    for (const auto& [s, w] : o.pieces_) set_piece(s, piece(s) - w);
    return *this;
}

PiecewiseForm& PiecewiseForm::operator*=(const Rational& c) {
    if (c == 0) pieces_.clear();
    for (auto& [s, w] : pieces_) w *= c;
    return *this;
}

bool operator==(const PiecewiseForm& a, const PiecewiseForm& b) {
    return a.degree_ == b.degree_ && a.pieces_ == b.pieces_;
}

bool PiecewiseForm::is_zero() const { return pieces_.empty(); }

int PiecewiseForm::coefficient_degree() const {
    int d = -1;
    for (const auto& [s, w] : pieces_) d = std::max(d, w.coefficient_degree());
    return d;
}

CompatibilityReport check_compatibility(const PiecewiseForm& w) {
    const auto& k = w.complex();
    const auto tops = k.maximal_simplices();
    for (int dim = w.degree(); dim <= k.dim(); ++dim) {
        for (const auto& s : k.simplices(dim)) {
            std::optional<PolyForm> first;
            for (const auto& top : tops) {
                if (top.size() == s.size() || !is_face(s, top)) continue;
                PolyForm tr = face_trace(w.piece(top), top, s);
                if (!first) {
                    first = tr;
                } else if (!(tr == *first)) {
                    std::string name;
                    for (int v : s) name += (name.empty() ? "" : ",") + std::to_string(v);
                    return {false, "traces disagree on face [" + name + "]"};
                }
            }
        }
    }
    return {};
}

PiecewiseForm exterior_d(const PiecewiseForm& w) {
    PiecewiseForm r(w.complex_ptr(), w.degree() + 1);
    for (const auto& [s, p] : w.pieces())
        if (p.degree() < p.dim()) r.set_piece(s, exterior_d(p));
    return r;
}

PiecewiseForm wedge(const PiecewiseForm& a, const PiecewiseForm& b) {
    if (&a.complex() != &b.complex()) throw std::invalid_argument("piecewise forms live on different complexes");
    PiecewiseForm r(a.complex_ptr(), a.degree() + b.degree());
    for (const auto& [s, p] : a.pieces()) {
        auto it = b.pieces().find(s);
        if (it == b.pieces().end()) continue;
        if (p.degree() + it->second.degree() > p.dim()) continue;
        r.set_piece(s, wedge(p, it->second));
    }
    return r;
}

PiecewiseForm restrict_to_subcomplex(const PiecewiseForm& w, std::shared_ptr<const SimplicialComplex> sub) {
    PiecewiseForm r(sub, w.degree());
    for (const auto& s : sub->maximal_simplices()) {
        if (!w.complex().contains(s)) throw std::invalid_argument("subcomplex simplex not in the complex");
        if (static_cast<int>(s.size()) - 1 < w.degree()) continue;
        r.set_piece(s, w.trace(s));
    }
    return r;
}

PiecewiseForm restrict_to_face(const PiecewiseForm& w, const Simplex& face) {
    if (!w.complex().contains(face)) throw std::invalid_argument("unknown face");
    auto closure = std::make_shared<const SimplicialComplex>(ComplexDescription{{}, {face}, {}, {}});
    return restrict_to_subcomplex(w, closure);
}

namespace {

double det(std::vector<std::vector<double>> a) {
    const int n = static_cast<int>(a.size());
    double d = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (a[piv][c] == 0.0) return 0.0;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            d = -d;
        }
        d *= a[c][c];
        for (int r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (int j = c; j < n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    return d;
}

}  // namespace

const std::vector<std::vector<double>>& wedge_gram(int m, int k) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::vector<std::vector<double>>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find({m, k});
    if (it != cache.end()) return it->second;
    // Inverse Gram matrix of the chart: G = (I + 11ᵀ)/2, G⁻¹ = 2(I - 11ᵀ/(m+1)).
    std::vector<std::vector<double>> ginv(m, std::vector<double>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) ginv[i][j] = 2.0 * ((i == j ? 1.0 : 0.0) - 1.0 / (m + 1));
    const auto sets = index_sets(m, k);
    std::vector<std::vector<double>> g(sets.size(), std::vector<double>(sets.size()));
    for (std::size_t a = 0; a < sets.size(); ++a) {
        for (std::size_t b = 0; b < sets.size(); ++b) {
            std::vector<int> ia, ib;
            for (int i = 0; i < m; ++i) {
                if (sets[a] >> i & 1) ia.push_back(i);
                if (sets[b] >> i & 1) ib.push_back(i);
            }
            std::vector<std::vector<double>> minor(k, std::vector<double>(k));
            for (int r = 0; r < k; ++r)
                for (int c = 0; c < k; ++c) minor[r][c] = ginv[ia[r]][ib[c]];
            g[a][b] = k == 0 ? 1.0 : det(minor);
        }
    }
    return cache.emplace(std::make_pair(m, k), std::move(g)).first->second;
}

double unit_simplex_volume(int m) {
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    return std::sqrt(m + 1.0) / (f * std::pow(2.0, 0.5 * m));
}

namespace {

struct CompiledForm {
    int m = 0;
    std::vector<CompiledPolynomial> coeffs;  // over index_sets(m, k)
    const std::vector<std::vector<double>>* gram = nullptr;

    explicit CompiledForm(const PolyForm& w) : m(w.dim()) {
        for (IndexSet s : index_sets(w.dim(), w.degree())) coeffs.emplace_back(w.coefficient(s));
        gram = &wedge_gram(w.dim(), w.degree());
    }
    double norm(std::span<const double> t) const {
        std::vector<double> c(coeffs.size());
        for (std::size_t i = 0; i < coeffs.size(); ++i) c[i] = coeffs[i].is_zero() ? 0.0 : coeffs[i](t);
        double q = 0.0;
        for (std::size_t a = 0; a < c.size(); ++a) {
            if (c[a] == 0.0) continue;
            for (std::size_t b = 0; b < c.size(); ++b) q += c[a] * (*gram)[a][b] * c[b];
        }
        return std::sqrt(std::max(q, 0.0));
    }
};

double piece_integral(const PolyForm& w, double p, int degree) {
    const int m = w.dim();
    CompiledForm f(w);
    const auto rule = simplex_rule(m, degree);
    const double jac = unit_simplex_volume(m) * std::tgamma(m + 1.0);
    double sum = 0.0;
    for (int q = 0; q < rule.size(); ++q)
        sum += rule.weights[q] * std::pow(f.norm(std::span<const double>(rule.point(q), m)), p);
    return jac * sum;
}

double piece_sup(const PolyForm& w, int degree) {
    const int m = w.dim();
    CompiledForm f(w);
    const auto rule = simplex_rule(m, degree);
    double best = 0.0;
    for (int q = 0; q < rule.size(); ++q) best = std::max(best, f.norm(std::span<const double>(rule.point(q), m)));
    std::vector<double> t(m, 0.0);
    best = std::max(best, f.norm(t));
    for (int i = 0; i < m; ++i) {
        std::fill(t.begin(), t.end(), 0.0);
        t[i] = 1.0;
        best = std::max(best, f.norm(t));
    }
    return best;
}

}  // namespace

double pointwise_norm(const PolyForm& w, std::span<const double> t) { return CompiledForm(w).norm(t); }

double lp_norm(const PiecewiseForm& w, double p, const NormOptions& opt) {
    if (!(p >= 1.0)) throw std::invalid_argument("p must be at least 1");
    double total = 0.0;
    for (const auto& [s, piece] : w.pieces()) {
        const int degree = opt.quad_degree.value_or(2 * std::max(piece.coefficient_degree(), 0) + 2);
        if (std::isinf(p))
            total = std::max(total, piece_sup(piece, degree));
        else
            total += piece_integral(piece, p, degree);
    }
    return std::isinf(p) ? total : std::pow(total, 1.0 / p);
}

double sobolev_norm(const PiecewiseForm& w, double p, const NormOptions& opt) {
    const double a = lp_norm(w, p, opt);
    const double b = lp_norm(exterior_d(w), p, opt);
    if (std::isinf(p)) return std::max(a, b);
    return std::pow(std::pow(a, p) + std::pow(b, p), 1.0 / p);
}

}  // namespace derham
