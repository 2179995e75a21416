#include "derham/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace derham {

Cochain::Cochain(std::shared_ptr<const SimplicialComplex> k, int deg) : complex(std::move(k)), degree(deg) {
    if (deg < 0) throw std::invalid_argument("cochain degree must be nonnegative");
    values.assign(deg <= complex->dim() ? complex->count(deg) : 0, Rational(0));
}

Cochain Cochain::indicator(std::shared_ptr<const SimplicialComplex> k, const Simplex& s) {
    Cochain c(k, static_cast<int>(s.size()) - 1);
    const int i = k->index_of(s);
    if (i < 0) throw std::out_of_range("simplex is not in the complex");
    c.values[i] = 1;
    return c;
}

Rational Cochain::operator()(const Simplex& s) const {
    if (static_cast<int>(s.size()) != degree + 1) throw std::invalid_argument("simplex dimension differs from cochain degree");
    const int i = complex->index_of(s);
    if (i < 0) throw std::out_of_range("simplex is not in the complex");
    return values[i];
}

bool Cochain::is_zero() const {
    return std::all_of(values.begin(), values.end(), [](const Rational& v) { return v == 0; });
}

double cochain_norm(const std::vector<double>& values, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("p must be at least 1");
    double acc = 0.0;
    for (double v : values) acc = std::isinf(p) ? std::max(acc, std::abs(v)) : acc + std::pow(std::abs(v), p);
    return std::isinf(p) ? acc : std::pow(acc, 1.0 / p);
}

double cochain_norm(const Cochain& c, double p) {
    std::vector<double> v;
    for (const auto& q : c.values) v.push_back(to_double(q));
    return cochain_norm(v, p);
}

Cochain coboundary(const Cochain& c) {
    Cochain r(c.complex, c.degree + 1);
    if (c.degree + 1 > c.complex->dim()) return r;
    const auto& up = c.complex->simplices(c.degree + 1);
    for (std::size_t j = 0; j < up.size(); ++j) {
        Rational sum = 0;
        for (const auto& [face, sign] : boundary_faces(up[j])) sum += sign * c(face);
        r.values[j] = sum;
    }
    return r;
}

PiecewiseForm whitney_basis(std::shared_ptr<const SimplicialComplex> k, const Simplex& s) {
    if (!k->contains(s)) throw std::out_of_range("simplex is not in the complex");
    const int deg = static_cast<int>(s.size()) - 1;
    PiecewiseForm out(k, deg);
    for (const auto& tau : k->maximal_simplices()) {
        if (!is_face(s, tau)) continue;
        const int m = static_cast<int>(tau.size()) - 1;
        std::vector<int> pos;
        for (int v : s) pos.push_back(static_cast<int>(std::find(tau.begin(), tau.end(), v) - tau.begin()));
        std::vector<PolyForm> dl;
        std::vector<Polynomial> lam;
        for (int p : pos) {
            lam.push_back(barycentric_coordinate(m, p));
            dl.push_back(exterior_d(PolyForm::function(lam.back(), m)));
        }
        PolyForm piece(m, deg);
        for (int i = 0; i <= deg; ++i) {
            PolyForm term = PolyForm::function(Polynomial::constant(m, 1), m);
            for (int j = 0; j <= deg; ++j)
                if (j != i) term = wedge(term, dl[j]);
            term = lam[i] * term;
            if (i % 2) term *= Rational(-1);
            piece += term;
        }
        piece *= Rational(factorial(deg));
        out.set_piece(tau, piece);
    }
    return out;
}

PiecewiseForm whitney(const Cochain& c) {
    PiecewiseForm out(c.complex, c.degree);
    if (c.degree > c.complex->dim()) return out;
    const auto& sims = c.complex->simplices(c.degree);
    for (std::size_t i = 0; i < sims.size(); ++i) {
        if (c.values[i] == 0) continue;
        PiecewiseForm b = whitney_basis(c.complex, sims[i]);
        b *= c.values[i];
        out += b;
    }
    return out;
}

double derham_scale(int k) { return std::sqrt(k + 1.0) / std::sqrt(std::pow(2.0, k)); }

PiecewiseForm whitney_normalized(const RealCochain& c) {
    Cochain exact(c.complex, c.degree);
    const double factor = 1.0 / derham_scale(c.degree);
    for (std::size_t i = 0; i < c.values.size(); ++i) exact.values[i] = from_double(c.values[i] * factor);
    return whitney(exact);
}

Cochain integrate_cochain(const PiecewiseForm& w) {
    Cochain c(w.complex_ptr(), w.degree());
    if (w.degree() > w.complex().dim()) return c;
    const auto& sims = w.complex().simplices(w.degree());
    const int k = w.degree();
    const IndexSet top = (IndexSet(1) << k) - 1;
    for (std::size_t i = 0; i < sims.size(); ++i) {
        const PolyForm tr = w.trace(sims[i]);
        c.values[i] = tr.coefficient(top).integrate_reference_simplex(k);
    }
    return c;
}

RealCochain derham_map(const PiecewiseForm& w, int k) {
    if (w.degree() != k) throw std::invalid_argument("form degree differs from the requested cochain degree");
    const Cochain exact = integrate_cochain(w);
    RealCochain r{exact.complex, k, {}};
    const double scale = derham_scale(k);
    for (const auto& v : exact.values) r.values.push_back(scale * to_double(v));
    return r;
}

PiecewiseForm whitney_chain_map_residual(const Cochain& c) {
    if (c.degree >= c.complex->dim()) return PiecewiseForm(c.complex, c.degree + 1);
    return exterior_d(whitney(c)) - whitney(coboundary(c));
}

WhitneyBoundReport whitney_bound_check(const Cochain& c, double p) {
    if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("p must be finite and at least 1");
    WhitneyBoundReport r;
    const auto& k = *c.complex;
    const auto tops = k.maximal_simplices();
    const auto& sims = k.simplices(c.degree);
    for (const auto& s : sims) {
        const PiecewiseForm b = whitney_basis(c.complex, s);
        int cofaces = 0;
        for (const auto& tau : tops) {
            if (!is_face(s, tau)) continue;
            ++cofaces;
            PiecewiseForm single(c.complex, c.degree);
            single.set_piece(tau, b.piece(tau));
            r.basis_constant = std::max(r.basis_constant, std::pow(sobolev_norm(single, p), p));
        }
        r.star_multiplicity = std::max(r.star_multiplicity, double(cofaces));
    }
    r.lhs = std::pow(sobolev_norm(whitney(c), p), p);
    const double faces = to_double(Rational(binomial(k.dim() + 1, c.degree + 1)));
    r.rhs = r.star_multiplicity * r.basis_constant * std::pow(faces, p - 1.0) * std::pow(cochain_norm(c, p), p);
    r.holds = r.lhs <= r.rhs * (1.0 + 1e-12);
    return r;
}

}  // namespace derham
