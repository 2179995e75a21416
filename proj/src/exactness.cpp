#include "derham/cohomology.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

namespace derham {

namespace {

std::vector<Polynomial::Exponents> monomials(int nvars, int max_degree) {
    std::vector<Polynomial::Exponents> out;
    Polynomial::Exponents e(nvars, 0);
    while (true) {
        int total = 0;
        for (int v : e) total += v;
        if (total <= max_degree) out.push_back(e);
        int a = 0;
        while (a < nvars && ++e[a] > max_degree) e[a++] = 0;
        if (a == nvars) break;
    }
    return out;
}

using RowKey = std::tuple<int, IndexSet, Polynomial::Exponents>;

void collect(const PolyForm& w, int block, std::map<RowKey, Rational>& out) {
    for (const auto& [set, poly] : w.terms())
        for (const auto& [e, c] : poly.terms()) out[RowKey{block, set, e}] += c;
}

// Polynomial (k−1)-form η on the j-simplex tau with dη = target and given
// traces on each facet; empty when no solution of this degree exists.
std::optional<PolyForm> solve_on_simplex(const Simplex& tau, const PolyForm& target, const std::vector<Simplex>& facets,
                                         const std::vector<PolyForm>& facet_data, int form_degree, int poly_degree) {
    const int j = static_cast<int>(tau.size()) - 1;
    std::vector<PolyForm> basis;
    for (IndexSet set : index_sets(j, form_degree))
        for (const auto& e : monomials(j, poly_degree)) basis.push_back(PolyForm::basis(j, set, Polynomial::monomial(e, 1)));
    std::vector<std::map<RowKey, Rational>> columns(basis.size());
    std::map<RowKey, std::size_t> rows;
    for (std::size_t b = 0; b < basis.size(); ++b) {
        if (form_degree < j) collect(exterior_d(basis[b]), 0, columns[b]);
        for (std::size_t f = 0; f < facets.size(); ++f) collect(face_trace(basis[b], tau, facets[f]), int(f) + 1, columns[b]);
        for (const auto& [key, c] : columns[b]) rows.emplace(key, 0);
    }
    std::map<RowKey, Rational> rhs;
    collect(target, 0, rhs);
    for (std::size_t f = 0; f < facets.size(); ++f) collect(facet_data[f], int(f) + 1, rhs);
    for (const auto& [key, c] : rhs) rows.emplace(key, 0);
    std::size_t next = 0;
    for (auto& [key, i] : rows) i = next++;
    RationalMatrix a(rows.size(), std::vector<Rational>(basis.size(), Rational(0)));
    std::vector<Rational> b(rows.size(), Rational(0));
    for (std::size_t c = 0; c < basis.size(); ++c)
        for (const auto& [key, v] : columns[c]) a[rows.at(key)][c] = v;
    for (const auto& [key, v] : rhs) b[rows.at(key)] = v;
    const auto x = solve(a, b, basis.size());
    if (!x) return std::nullopt;
    PolyForm eta(j, form_degree);
    for (std::size_t c = 0; c < basis.size(); ++c)
        if ((*x)[c] != 0) eta += basis[c] * (*x)[c];
    return eta;
}

}  // namespace

ExactnessWitness exactness_witness(const PiecewiseForm& omega, double p, double tolerance, std::optional<int> max_degree) {
    const int k = omega.degree();
    const auto complex = omega.complex_ptr();
    if (k == 0) {
        if (!omega.is_zero()) throw std::domain_error("a nonzero 0-form is not exact");
        return {PiecewiseForm(complex, 0), 0.0, 0.0, 0};
    }
    if (k < complex->dim() && !exterior_d(omega).is_zero()) throw std::invalid_argument("form is not closed");
    for (const auto& v : integrate_cochain(omega).values)
        if (std::abs(to_double(v)) > 1e-10) throw std::domain_error("form has a nonzero simplex integral");

    const int start = std::max(omega.coefficient_degree(), 0) + 2;
    const int cap = max_degree.value_or(start + 3);
    for (int degree = start; degree <= cap; ++degree) {
        std::map<Simplex, PolyForm> eta;
        for (const auto& s : complex->simplices(k - 1)) eta[s] = PolyForm(k - 1, k - 1);
        bool ok = true;
        for (int j = k; j <= complex->dim() && ok; ++j) {
            for (const auto& tau : complex->simplices(j)) {
                const auto facets = faces_of(tau, j - 1);
                std::vector<PolyForm> data;
                for (const auto& f : facets) data.push_back(eta.at(f));
                auto piece = solve_on_simplex(tau, omega.trace(tau), facets, data, k - 1, degree);
                if (!piece) {
                    ok = false;
                    break;
                }
                eta[tau] = *piece;
            }
        }
        if (!ok) continue;
        ExactnessWitness w;
        w.eta = PiecewiseForm(complex, k - 1);
        for (const auto& s : complex->maximal_simplices())
            if (static_cast<int>(s.size()) >= k) w.eta.set_piece(s, eta.at(s));
        w.polynomial_degree = degree;
        w.residual = lp_norm(exterior_d(w.eta) - omega, p);
        const double base = lp_norm(omega, p);
        w.constant = base > 0.0 ? lp_norm(w.eta, p) / base : 0.0;
        if (w.residual > tolerance) throw std::domain_error("exactness witness residual above tolerance");
        return w;
    }
    throw std::domain_error("no primitive found up to the polynomial degree cap");
}

}  // namespace derham
