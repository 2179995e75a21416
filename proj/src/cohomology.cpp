#include "derham/cohomology.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace derham {

namespace {

using CoefficientKey = std::tuple<Simplex, IndexSet, Polynomial::Exponents>;

// Rows: coefficient vectors of piecewise forms over a shared key set.
RationalMatrix vectorize(const std::vector<PiecewiseForm>& forms, std::size_t& cols) {
    std::map<CoefficientKey, std::size_t> index;
    for (const auto& f : forms)
        for (const auto& [s, piece] : f.pieces())
            for (const auto& [set, poly] : piece.terms())
                for (const auto& [e, c] : poly.terms()) index.emplace(CoefficientKey{s, set, e}, 0);
    std::size_t next = 0;
    for (auto& [key, i] : index) i = next++;
    cols = next;
    RationalMatrix m;
    for (const auto& f : forms) {
        std::vector<Rational> row(cols, Rational(0));
        for (const auto& [s, piece] : f.pieces())
            for (const auto& [set, poly] : piece.terms())
                for (const auto& [e, c] : poly.terms()) row[index.at(CoefficientKey{s, set, e})] = c;
        m.push_back(std::move(row));
    }
    return m;
}

// Rows spanning im δ^{k−1} inside C^k.
RationalMatrix image_rows(const SimplicialComplex& k, int degree) {
    RationalMatrix rows;
    if (degree == 0) return rows;
    const RationalMatrix d = coboundary_matrix(k, degree - 1);
    const std::size_t cols = k.count(degree - 1);
    for (std::size_t j = 0; j < cols; ++j) {
        std::vector<Rational> r(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) r[i] = d[i][j];
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace

RationalMatrix coboundary_matrix(const SimplicialComplex& k, int degree) {
    if (degree < 0 || degree >= k.dim()) return {};
    const auto& up = k.simplices(degree + 1);
    RationalMatrix m(up.size(), std::vector<Rational>(k.count(degree), Rational(0)));
    for (std::size_t i = 0; i < up.size(); ++i)
        for (const auto& [face, sign] : boundary_faces(up[i])) m[i][k.index_of(face)] = sign;
    return m;
}

CohomologyResult cochain_cohomology(std::shared_ptr<const SimplicialComplex> k, int degree, double p) {
    if (degree < 0 || degree > k->dim()) throw std::out_of_range("cohomology degree out of range");
    if (!(p >= 1.0)) throw std::invalid_argument("p must be at least 1");
    const std::size_t n = k->count(degree);
    const RationalMatrix d = coboundary_matrix(*k, degree);
    const auto kernel = nullspace(d, n);
    RationalMatrix span = image_rows(*k, degree);
    std::size_t r = rank(span, n);
    CohomologyResult res;
    for (const auto& v : kernel) {
        span.push_back(v);
        const std::size_t r2 = rank(span, n);
        if (r2 == r) {
            span.pop_back();
            continue;
        }
        r = r2;
        Cochain c(k, degree);
        c.values = v;
        res.representatives.push_back(std::move(c));
    }
    res.betti = static_cast<int>(res.representatives.size());
    return res;
}

std::vector<int> betti_numbers(std::shared_ptr<const SimplicialComplex> k) {
    std::vector<int> b;
    for (int d = 0; d <= k->dim(); ++d) {
        const std::size_t n = k->count(d);
        const std::size_t rk = d < k->dim() ? rank(coboundary_matrix(*k, d), n) : 0;
        const std::size_t rk_prev = d > 0 ? rank(coboundary_matrix(*k, d - 1), k->count(d - 1)) : 0;
        b.push_back(static_cast<int>(n - rk - rk_prev));
    }
    return b;
}

int whitney_subcomplex_cohomology(std::shared_ptr<const SimplicialComplex> k, int degree) {
    if (degree < 0 || degree > k->dim()) throw std::out_of_range("cohomology degree out of range");
    auto basis = [&](int d) {
        std::vector<PiecewiseForm> forms;
        for (const auto& s : k->simplices(d)) forms.push_back(whitney_basis(k, s));
        return forms;
    };
    auto d_rank = [&](int d) -> std::size_t {
        if (d < 0 || d >= k->dim()) return 0;
        std::vector<PiecewiseForm> images;
        for (const auto& f : basis(d)) images.push_back(exterior_d(f));
        std::size_t cols = 0;
        const auto m = vectorize(images, cols);
        return rank(m, cols);
    };
    std::size_t cols = 0;
    const auto space = vectorize(basis(degree), cols);
    const std::size_t dim = rank(space, cols);
    return static_cast<int>(dim - d_rank(degree) - d_rank(degree - 1));
}

int euler_characteristic_from_betti(const std::vector<int>& betti) {
    int chi = 0;
    for (std::size_t i = 0; i < betti.size(); ++i) chi += (i % 2 ? -1 : 1) * betti[i];
    return chi;
}

DerhamIsoReport derham_iso_check(std::shared_ptr<const SimplicialComplex> k, double p,
                                 const std::optional<GlobalOptions>& regularization, double tolerance) {
    DerhamIsoReport rep;
    rep.cochain_betti = betti_numbers(k);
    for (int d = 0; d <= k->dim(); ++d) rep.whitney_betti.push_back(whitney_subcomplex_cohomology(k, d));
    rep.dims_agree = rep.cochain_betti == rep.whitney_betti;

    rep.pairing_nonsingular = true;
    std::vector<PiecewiseForm> closed_reps;
    for (int d = 0; d <= k->dim(); ++d) {
        const auto h = cochain_cohomology(k, d, p);
        const std::size_t n = k->count(d);
        RationalMatrix rows = image_rows(*k, d);
        const std::size_t base = rank(rows, n);
        for (const auto& c : h.representatives) {
            const PiecewiseForm w = whitney(c);
            closed_reps.push_back(w);
            rows.push_back(integrate_cochain(w).values);
        }
        if (rank(rows, n) != base + h.representatives.size()) rep.pairing_nonsingular = false;
    }

    if (!regularization) {
        rep.notice = "regularization leg not requested";
        return rep;
    }
    std::vector<std::unique_ptr<StarChart>> charts;
    try {
        charts = make_star_charts(*k);
    } catch (const std::exception& e) {
        rep.notice = std::string("regularization leg skipped: ") + e.what();
        return rep;
    }
    GlobalOptions opt = *regularization;
    opt.p = p;
    rep.regularization_checked = true;
    rep.regularization_ok = true;
    for (const auto& w : closed_reps) {
        const GlobalResult g = global_regularize(w, opt, &charts);
        rep.regularization_residual = std::max(rep.regularization_residual, g.residual_norm);
        rep.regularization_ok = rep.regularization_ok && g.locality_ok && g.residual_norm <= tolerance;
    }
    return rep;
}

}  // namespace derham
