#include "derham/homotopy.hpp"

#include <stdexcept>

namespace derham {

namespace {

using Matrix = std::vector<std::vector<Rational>>;

Matrix multiply(const Matrix& a, const Matrix& b) {
    const std::size_t n = a.size();
    Matrix r(n, std::vector<Rational>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

bool is_zero(const Matrix& a) {
    for (const auto& row : a)
        for (const auto& x : row)
            if (x != 0) return false;
    return true;
}

// Drop the last variable, which must be absent.
PolyForm drop_last(const PolyForm& w) { return w.resized(w.nvars() - 1); }

}  // namespace

bool is_nilpotent(const Matrix& a) {
    Matrix p = a;
    for (std::size_t i = 1; i < a.size(); ++i) p = multiply(p, a);
    return is_zero(p);
}

FlowSpec FlowSpec::translation(std::vector<Rational> v) {
    FlowSpec f;
    f.kind = Kind::Translation;
    f.dim = static_cast<int>(v.size());
    f.vector = std::move(v);
    return f;
}

FlowSpec FlowSpec::scaling(int dim) {
    FlowSpec f;
    f.kind = Kind::Scaling;
    f.dim = dim;
    return f;
}

FlowSpec FlowSpec::affine(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
    FlowSpec f;
    f.kind = Kind::Affine;
    f.dim = static_cast<int>(b.size());
    for (const auto& row : a)
        if (row.size() != b.size()) throw std::invalid_argument("affine field matrix must be square");
    if (a.size() != b.size()) throw std::invalid_argument("affine field matrix must be square");
    f.matrix = std::move(a);
    f.vector = std::move(b);
    return f;
}

PolynomialMap flow_map(const FlowSpec& flow, int nvars) {
    const int n = flow.dim;
    const int out = nvars + 1;
    const Polynomial t = Polynomial::variable(out, nvars);
    PolynomialMap f{n, {}};
    for (int i = 0; i < n; ++i) {
        const Polynomial xi = Polynomial::variable(out, i);
        switch (flow.kind) {
            case FlowSpec::Kind::Translation:
                f.components.push_back(xi + t * flow.vector[i]);
                break;
            case FlowSpec::Kind::Scaling:
                f.components.push_back(t * xi);
                break;
            case FlowSpec::Kind::Affine:
                f.components.push_back(Polynomial(out));
                break;
        }
    }
    if (flow.kind == FlowSpec::Kind::Affine) {
        if (!is_nilpotent(flow.matrix))
            throw std::domain_error("affine flow is polynomial in time only for nilpotent linear part");
        // e^{tA}x + Σ_{k≥1} t^k A^{k-1} b / k!
        Matrix power(n, std::vector<Rational>(n, 0));
        for (int i = 0; i < n; ++i) power[i][i] = 1;  // A^0
        Rational fact = 1;
        Polynomial tk = Polynomial::constant(out, 1);
        for (int k = 0; k <= n; ++k) {
            for (int i = 0; i < n; ++i) {
                Polynomial lin(out);
                for (int j = 0; j < n; ++j)
                    if (power[i][j] != 0) lin += Polynomial::variable(out, j) * power[i][j];
                f.components[i] += tk * lin * (1 / fact);
                Rational bterm = 0;
                for (int j = 0; j < n; ++j) bterm += power[i][j] * flow.vector[j];
                if (bterm != 0) f.components[i] += tk * t * (bterm / (fact * (k + 1)));
            }
            power = multiply(power, flow.matrix);
            fact *= (k + 1);
            tk = tk * t;
        }
    }
    for (int p = n; p < nvars; ++p) f.components.push_back(Polynomial::variable(out, p));
    return f;
}

PolyForm flow_pullback_symbolic(const FlowSpec& flow, const PolyForm& w) {
    if (flow.dim != w.dim()) throw std::invalid_argument("flow dimension differs from form dimension");
    PolynomialMap f = flow_map(flow, w.nvars());
    f.components.push_back(Polynomial::variable(w.nvars() + 1, w.nvars()));
    return pullback(f, add_parameters(w, 1));
}

PolyForm flow_pullback(const FlowSpec& flow, const Rational& t, const PolyForm& w) {
    const PolyForm sym = flow_pullback_symbolic(flow, w);
    const int tv = w.nvars();
    return drop_last(sym.map_coefficients([&](const Polynomial& c) { return c.set_variable(tv, t); }));
}

PolyForm cartan_Q(const std::vector<Polynomial>& v, const PolyForm& w) {
    if (static_cast<int>(v.size()) != w.dim()) throw std::invalid_argument("vector length differs from dimension");
    if (w.degree() == 0) return PolyForm(w.dim(), 0, w.nvars());
    const int n = w.nvars() + 1;
    const int tv = w.nvars();
    const Polynomial t = Polynomial::variable(n, tv);
    PolynomialMap shift{w.dim(), {}};
    VectorFieldPoly field{w.dim(), {}};
    for (int i = 0; i < w.dim(); ++i) {
        const Polynomial vi = v[i].resized(n);
        shift.components.push_back(Polynomial::variable(n, i) + t * vi);
        field.components.push_back(vi);
    }
    for (int p = w.dim(); p < n; ++p) shift.components.push_back(Polynomial::variable(n, p));
    const PolyForm moved = pullback(shift, add_parameters(w, 1));
    const PolyForm contracted = interior_product(field, moved);
    return drop_last(contracted.map_coefficients([&](const Polynomial& c) { return c.integrate_unit(tv); }));
}

PolyForm cartan_Q(const std::vector<Rational>& v, const PolyForm& w) {
    std::vector<Polynomial> pv;
    for (const auto& c : v) pv.push_back(Polynomial::constant(w.nvars(), c));
    return cartan_Q(pv, w);
}

PolyForm verify_cartan_identity(const std::vector<Rational>& v, const PolyForm& w) {
    PolyForm lhs = pullback(AffineMap::translation(v), w) - w;
    if (w.degree() < w.dim()) lhs -= cartan_Q(v, exterior_d(w));
    if (w.degree() > 0) lhs -= exterior_d(cartan_Q(v, w));
    return lhs;
}

LieFlowResult lie_flow_check(const VectorFieldPoly& x, const PolyForm& w) {
    const int n = w.dim();
    if (x.dim != n || static_cast<int>(x.components.size()) != n)
        throw std::invalid_argument("field dimension differs from form dimension");
    Matrix a(n, std::vector<Rational>(n, 0));
    std::vector<Rational> b(n, 0);
    for (int i = 0; i < n; ++i) {
        for (const auto& [e, c] : x.components[i].terms()) {
            int deg = 0, var = -1;
            for (int j = 0; j < static_cast<int>(e.size()); ++j) {
                if (e[j] == 0) continue;
                if (j >= n) throw std::domain_error("field depends on parameters");
                deg += e[j];
                var = j;
            }
            if (deg > 1) throw std::domain_error("field is not affine");
            if (deg == 0)
                b[i] += c;
            else
                a[i][var] += c;
        }
    }
    LieFlowResult r;
    PolyForm moved;
    const PolyForm base = w.resized(std::max(w.nvars(), n));
    if (is_nilpotent(a)) {
        moved = flow_pullback_symbolic(FlowSpec::affine(a, b), base);
        r.method = "exact-flow";
    } else {
        // x ↦ x + t X(x): agrees with the flow to first order in t.
        const int nv = base.nvars() + 1;
        const Polynomial t = Polynomial::variable(nv, base.nvars());
        PolynomialMap jet{n, {}};
        for (int i = 0; i < n; ++i) jet.components.push_back(Polynomial::variable(nv, i) + t * x.components[i].resized(nv));
        for (int p = n; p < nv; ++p) jet.components.push_back(Polynomial::variable(nv, p));
        moved = pullback(jet, add_parameters(base, 1));
        r.method = "first-order-jet";
    }
    const int tv = base.nvars();
    PolyForm deriv = moved.map_coefficients([&](const Polynomial& c) { return c.derivative(tv).set_variable(tv, 0); });
    VectorFieldPoly xr{n, {}};
    for (const auto& c : x.components) xr.components.push_back(c.resized(base.nvars()));
    r.residual = drop_last(deriv) - lie_derivative(xr, base);
    return r;
}

PolyForm poincare_primitive(const PolyForm& w) {
    if (w.degree() == 0) throw std::invalid_argument("primitive needs a form of degree at least one");
    if (w.degree() < w.dim() && !exterior_d(w).is_zero()) throw std::invalid_argument("form is not closed");
    const int k = w.degree();
    const int n = w.nvars() + 1;
    const int tv = w.nvars();
    const Polynomial t = Polynomial::variable(n, tv);
    std::vector<Polynomial> scale;
    for (int i = 0; i < w.nvars(); ++i)
        scale.push_back(i < w.dim() ? t * Polynomial::variable(n, i) : Polynomial::variable(n, i));
    VectorFieldPoly radial{w.dim(), {}};
    for (int i = 0; i < w.dim(); ++i) radial.components.push_back(Polynomial::variable(w.nvars(), i));
    const Polynomial tk = t.pow(k - 1);
    PolyForm eta(w.dim(), k - 1, w.nvars());
    for (const auto& [s, c] : w.terms()) {
        const Polynomial radial_coeff = (c.substitute(scale) * tk).integrate_unit(tv).resized(w.nvars());
        eta += interior_product(radial, PolyForm::basis(w.dim(), s, radial_coeff));
    }
    return eta;
}

}  // namespace derham
