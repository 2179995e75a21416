#include "derham/random_forms.hpp"

#include <stdexcept>

namespace derham {

std::int64_t RandomSource::integer(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("empty integer range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
}

Rational RandomSource::rational(int max_num, int max_den) {
    const auto p = integer(-max_num, max_num);
    const auto q = integer(1, max_den);
    return make_rational(p, q);
}

double RandomSource::real(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

Polynomial random_polynomial(RandomSource& rng, int nvars, int max_degree, int terms) {
    Polynomial p(nvars);
    for (int t = 0; t < terms; ++t) {
        Polynomial::Exponents e(nvars, 0);
        int budget = static_cast<int>(rng.integer(0, max_degree));
        for (int i = 0; i < nvars && budget > 0; ++i) {
            const int take = static_cast<int>(rng.integer(0, budget));
            e[i] = take;
            budget -= take;
        }
        p.add_term(e, rng.rational());
    }
    return p;
}

PolyForm random_form(RandomSource& rng, int dim, int degree, int max_poly_degree, int terms) {
    PolyForm w(dim, degree);
    for (IndexSet s : index_sets(dim, degree))
        if (rng.integer(0, 3) > 0) w.add(s, random_polynomial(rng, dim, max_poly_degree, terms));
    return w;
}

std::vector<Rational> random_vector(RandomSource& rng, int dim) {
    std::vector<Rational> v;
    for (int i = 0; i < dim; ++i) v.push_back(rng.rational());
    return v;
}

Cochain random_cochain(RandomSource& rng, std::shared_ptr<const SimplicialComplex> k, int degree) {
    Cochain c(std::move(k), degree);
    for (auto& v : c.values) v = rng.rational();
    return c;
}

PiecewiseForm random_kernel_form(RandomSource& rng, std::shared_ptr<const SimplicialComplex> k, int degree, int terms) {
    PiecewiseForm theta(k, degree);
    const auto& verts = k->simplices(0);
    const auto& sims = k->simplices(degree);
    for (int t = 0; t < terms; ++t) {
        const auto& v = verts[rng.integer(0, static_cast<std::int64_t>(verts.size()) - 1)];
        const auto& w = verts[rng.integer(0, static_cast<std::int64_t>(verts.size()) - 1)];
        const auto& s = sims[rng.integer(0, static_cast<std::int64_t>(sims.size()) - 1)];
        PiecewiseForm term = wedge(wedge(whitney_basis(k, v), whitney_basis(k, w)), whitney_basis(k, s));
        term *= rng.rational();
        theta += term;
    }
    return theta - whitney(integrate_cochain(theta));
}

std::vector<PolyForm> default_sample_forms(int dim) {
    std::vector<PolyForm> out;
    out.push_back(PolyForm::function(Polynomial::constant(dim, 1), dim));
    out.push_back(PolyForm::dx(dim, 0));
    RandomSource rng(20240601);
    int degree = 0;
    while (out.size() < 30) {
        PolyForm w = random_form(rng, dim, degree, 3);
        if (!w.is_zero()) out.push_back(w);
        degree = (degree + 1) % (dim + 1);
    }
    return out;
}

}  // namespace derham
