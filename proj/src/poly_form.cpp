#include "derham/poly_form.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace derham {

int wedge_sign(IndexSet a, IndexSet b) {
    if (a & b) return 0;
    // Count pairs (i in a, j in b) with i > j: each is one transposition.
    int inversions = 0;
    for (IndexSet rest = b; rest; rest &= rest - 1) {
        const int j = std::countr_zero(rest);
        inversions += std::popcount(a >> (j + 1));
    }
    return (inversions % 2) ? -1 : 1;
}

std::vector<IndexSet> index_sets(int dim, int k) {
    std::vector<IndexSet> out;
    if (k < 0 || k > dim) return out;
    for (IndexSet s = 0; s < (IndexSet(1) << dim); ++s)
        if (std::popcount(s) == k) out.push_back(s);
    return out;
}

PolyForm::PolyForm(int dim, int degree, int nvars) : dim_(dim), degree_(degree), nvars_(nvars < 0 ? dim : nvars) {
    if (dim < 0 || dim > 30) throw std::invalid_argument("form dimension out of range");
    if (degree < 0 || degree > dim) throw std::invalid_argument("form degree must lie in [0, dim]");
    if (nvars_ < dim_) throw std::invalid_argument("coefficient variables must include the coordinates");
}

PolyForm PolyForm::function(const Polynomial& f, int dim) {
    PolyForm w(dim, 0, f.nvars());
    w.add(0, f);
    return w;
}

PolyForm PolyForm::basis(int dim, IndexSet set, const Polynomial& coeff) {
    PolyForm w(dim, index_count(set), coeff.nvars());
    w.add(set, coeff);
    return w;
}

PolyForm PolyForm::dx(int dim, int i, int nvars) {
    if (nvars < 0) nvars = dim;
    return basis(dim, IndexSet(1) << i, Polynomial::constant(nvars, 1));
}

Polynomial PolyForm::coefficient(IndexSet set) const {
    auto it = terms_.find(set);
    return it == terms_.end() ? Polynomial(nvars_) : it->second;
}

int PolyForm::coefficient_degree() const {
    int d = -1;
    for (const auto& [s, c] : terms_) d = std::max(d, c.degree());
    return d;
}

void PolyForm::add(IndexSet set, const Polynomial& coeff) {
    if (index_count(set) != degree_) throw std::invalid_argument("index set size differs from form degree");
    if (set >> dim_) throw std::invalid_argument("index set exceeds form dimension");
    if (coeff.nvars() != nvars_) throw std::invalid_argument("coefficient variable count mismatch");
    if (coeff.is_zero()) return;
    auto it = terms_.find(set);
    if (it == terms_.end()) {
        terms_.emplace(set, coeff);
    } else {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

namespace {
void require_compatible(const PolyForm& a, const PolyForm& b) {
    if (a.dim() != b.dim() || a.degree() != b.degree() || a.nvars() != b.nvars())
        throw std::invalid_argument("forms differ in dimension, degree or variables");
}
}  // namespace

PolyForm& PolyForm::operator+=(const PolyForm& o) {
    require_compatible(*this, o);
    for (const auto& [s, c] : o.terms_) add(s, c);
    return *this;
}

PolyForm& PolyForm::operator-=(const PolyForm& o) {
    require_compatible(*this, o);
    for (const auto& [s, c] : o.terms_) add(s, -c);
    return *this;
}

PolyForm& PolyForm::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [s, p] : terms_) p *= c;
    return *this;
}

PolyForm operator*(const Polynomial& f, const PolyForm& w) {
    PolyForm r(w.dim(), w.degree(), w.nvars());
    for (const auto& [s, c] : w.terms()) r.add(s, f * c);
    return r;
}

PolyForm PolyForm::resized(int nvars) const {
    PolyForm r(dim_, degree_, nvars);
    for (const auto& [s, c] : terms_) r.add(s, c.resized(nvars));
    return r;
}

std::string PolyForm::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [s, c] : terms_) {
        for (const auto& [e, q] : c.terms()) {
            if (!first) os << " + ";
            first = false;
            os << q.str();
            for (int i = 0; i < nvars_; ++i) {
                if (e[i] == 0) continue;
                os << "*x" << (i + 1);
                if (e[i] > 1) os << "^" << e[i];
            }
            if (s != 0) {
                os << "*";
                bool first_dx = true;
                for (int i = 0; i < dim_; ++i) {
                    if (!(s >> i & 1)) continue;
                    if (!first_dx) os << "^";
                    first_dx = false;
                    os << "dx" << (i + 1);
                }
            }
        }
    }
    return os.str();
}

PolyForm parse_poly_form(const std::string& text, int dim, int degree) {
    PolyForm w(dim, degree);
    std::stringstream terms(text);
    std::string term;
    while (std::getline(terms, term, '+')) {
        // Split off the trailing "dx..." factor, if any.
        IndexSet set = 0;
        int sign = 1;
        std::string poly_part = term;
        const auto pos = term.find("dx");
        if (pos != std::string::npos) {
            std::string dx_part = term.substr(pos);
            poly_part = term.substr(0, pos);
            while (!poly_part.empty() && (poly_part.back() == '*' || std::isspace(static_cast<unsigned char>(poly_part.back()))))
                poly_part.pop_back();
            if (poly_part.empty()) poly_part = "1";
            if (poly_part == "-") poly_part = "-1";
            std::stringstream chain(dx_part);
            std::string f;
            while (std::getline(chain, f, '^')) {
                auto a = f.find_first_not_of(" \t");
                auto b = f.find_last_not_of(" \t");
                f = f.substr(a, b - a + 1);
                if (f.rfind("dx", 0) != 0) throw std::invalid_argument("bad differential factor: " + f);
                const int i = std::stoi(f.substr(2)) - 1;
                if (i < 0 || i >= dim) throw std::invalid_argument("differential index out of range: " + f);
                if (set >> i & 1) throw std::invalid_argument("repeated differential in term: " + term);
                sign *= wedge_sign(set, IndexSet(1) << i);
                set |= IndexSet(1) << i;
            }
        }
        Polynomial c = parse_polynomial(poly_part, dim);
        if (c.is_zero()) continue;
        w.add(set, c * Rational(sign));
    }
    return w;
}

VectorFieldPoly VectorFieldPoly::constant(int dim, const std::vector<Rational>& v, int nvars) {
    if (static_cast<int>(v.size()) != dim) throw std::invalid_argument("vector length differs from dimension");
    if (nvars < 0) nvars = dim;
    VectorFieldPoly x{dim, {}};
    for (const auto& c : v) x.components.push_back(Polynomial::constant(nvars, c));
    return x;
}

VectorFieldPoly VectorFieldPoly::affine(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b) {
    const int dim = static_cast<int>(b.size());
    VectorFieldPoly x{dim, {}};
    for (int i = 0; i < dim; ++i) {
        Polynomial p = Polynomial::constant(dim, b[i]);
        for (int j = 0; j < dim; ++j) p += Polynomial::variable(dim, j) * a[i][j];
        x.components.push_back(p);
    }
    return x;
}

PolynomialMap AffineMap::to_polynomial_map(int nvars) const {
    const int m = source_dim();
    if (nvars < 0) nvars = m;
    PolynomialMap f{m, {}};
    for (int i = 0; i < target_dim(); ++i) {
        Polynomial p = Polynomial::constant(nvars, offset[i]);
        for (int j = 0; j < m; ++j) p += Polynomial::variable(nvars, j) * matrix[i][j];
        f.components.push_back(p);
    }
    return f;
}

AffineMap AffineMap::identity(int dim) {
    AffineMap a;
    a.matrix.assign(dim, std::vector<Rational>(dim, 0));
    for (int i = 0; i < dim; ++i) a.matrix[i][i] = 1;
    a.offset.assign(dim, 0);
    return a;
}

AffineMap AffineMap::translation(const std::vector<Rational>& v) {
    AffineMap a = identity(static_cast<int>(v.size()));
    a.offset = v;
    return a;
}

AffineMap AffineMap::compose(const AffineMap& inner) const {
    if (source_dim() != inner.target_dim()) throw std::invalid_argument("affine composition dimension mismatch");
    AffineMap r;
    const int n = target_dim(), k = inner.source_dim(), m = source_dim();
    r.matrix.assign(n, std::vector<Rational>(k, 0));
    r.offset = offset;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int l = 0; l < k; ++l) r.matrix[i][l] += matrix[i][j] * inner.matrix[j][l];
            r.offset[i] += matrix[i][j] * inner.offset[j];
        }
    }
    return r;
}

PolyForm wedge(const PolyForm& a, const PolyForm& b) {
    if (a.dim() != b.dim() || a.nvars() != b.nvars())
        throw std::invalid_argument("wedge of forms on different spaces");
    if (a.degree() + b.degree() > a.dim()) return PolyForm(a.dim(), a.dim(), a.nvars());
    PolyForm r(a.dim(), a.degree() + b.degree(), a.nvars());
    for (const auto& [sa, ca] : a.terms()) {
        for (const auto& [sb, cb] : b.terms()) {
            const int sign = wedge_sign(sa, sb);
            if (sign == 0) continue;
            r.add(sa | sb, (ca * cb) * Rational(sign));
        }
    }
    return r;
}

PolyForm exterior_d(const PolyForm& w) {
    if (w.degree() == w.dim()) return PolyForm(w.dim(), w.dim(), w.nvars());
    PolyForm r(w.dim(), w.degree() + 1, w.nvars());
    for (const auto& [s, c] : w.terms()) {
        for (int j = 0; j < w.dim(); ++j) {
            const IndexSet dj = IndexSet(1) << j;
            const int sign = wedge_sign(dj, s);
            if (sign == 0) continue;
            Polynomial dc = c.derivative(j);
            if (dc.is_zero()) continue;
            r.add(s | dj, dc * Rational(sign));
        }
    }
    return r;
}

PolyForm interior_product(const VectorFieldPoly& x, const PolyForm& w) {
    if (w.degree() == 0) throw std::invalid_argument("interior product of a 0-form");
    if (x.dim != w.dim() || static_cast<int>(x.components.size()) != w.dim())
        throw std::invalid_argument("vector field dimension differs from form dimension");
    if (x.nvars() != w.nvars()) throw std::invalid_argument("vector field and form use different variables");
    PolyForm r(w.dim(), w.degree() - 1, w.nvars());
    for (const auto& [s, c] : w.terms()) {
        int position = 0;
        for (int i = 0; i < w.dim(); ++i) {
            if (!(s >> i & 1)) continue;
            const Polynomial& xi = x.components[i];
            if (!xi.is_zero()) {
                Polynomial term = xi * c;
                if (position % 2) term = -term;
                r.add(s & ~(IndexSet(1) << i), term);
            }
            ++position;
        }
    }
    return r;
}

PolyForm lie_derivative(const VectorFieldPoly& x, const PolyForm& w) {
    PolyForm result(w.dim(), w.degree(), w.nvars());
    if (w.degree() > 0) result += exterior_d(interior_product(x, w));
    if (w.degree() < w.dim()) result += interior_product(x, exterior_d(w));
    return result;
}

PolyForm pullback(const PolynomialMap& map, const PolyForm& w) {
    if (map.target_dim() != w.nvars())
        throw std::invalid_argument("pullback map must provide an image for every form variable");
    const int m = map.source_dim;
    const int out_vars = map.nvars();
    if (m > out_vars) throw std::invalid_argument("map source dimension exceeds its variables");
    if (w.degree() > m) return PolyForm(m, m, out_vars);
    // dF_i as 1-forms on the source
    std::vector<PolyForm> dfs;
    for (int i = 0; i < w.dim() && w.degree() > 0; ++i) {
        PolyForm df(m, 1, out_vars);
        for (int j = 0; j < m; ++j) df.add(IndexSet(1) << j, map.components[i].derivative(j));
        dfs.push_back(df);
    }
    PolyForm r(m, w.degree(), out_vars);
    for (const auto& [s, c] : w.terms()) {
        PolyForm term = PolyForm::function(c.substitute(map.components), m);
        for (int i = 0; i < w.dim(); ++i)
            if (s >> i & 1) term = wedge(term, dfs[i]);
        r += term;
    }
    return r;
}

PolyForm pullback(const AffineMap& map, const PolyForm& w) {
    if (map.target_dim() != w.dim()) throw std::invalid_argument("affine map target differs from form dimension");
    const int params = w.nvars() - w.dim();
    const int m = map.source_dim();
    PolynomialMap f = map.to_polynomial_map(m + params);
    for (int p = 0; p < params; ++p) f.components.push_back(Polynomial::variable(m + params, m + p));
    return pullback(f, w);
}

PolyForm add_parameters(const PolyForm& w, int count) { return w.resized(w.nvars() + count); }

}  // namespace derham
