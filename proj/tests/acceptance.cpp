// One PASS/FAIL line per acceptance criterion; exit status counts failures.
#include "derham/bouquet.hpp"
#include "derham/cohomology.hpp"
#include "derham/extension.hpp"
#include "derham/mollify_flat.hpp"
#include "derham/random_forms.hpp"
#include "derham/suites.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace derham;

namespace {

constexpr double kSplitTol = 1e-12;
constexpr double kCylinderTol = 1e-10;
// same simplex rule on both sides; the s-integral is exact
constexpr int kCylinderQuad = 20;
constexpr double kGlobalTol = 1e-4;
constexpr double kWitnessTol = 1e-8;
constexpr double kCHatCap = 1.1;
constexpr double kMHatRatio = 0.5;

struct Outcome {
    bool pass = false;
    std::string detail;
    double budget = 0;  // seconds, 0 for none
};

std::shared_ptr<const SimplicialComplex> make(const std::vector<Simplex>& tops) {
    ComplexDescription d;
    d.maximal_simplices = tops;
    return std::make_shared<const SimplicialComplex>(d);
}

std::shared_ptr<const SimplicialComplex> circle() { return make({{0, 1}, {1, 2}, {0, 2}}); }
std::shared_ptr<const SimplicialComplex> sphere() { return make({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}); }

std::shared_ptr<const SimplicialComplex> torus7() {
    std::vector<Simplex> tops;
    for (int i = 0; i < 7; ++i) {
        Simplex a{i, (i + 1) % 7, (i + 3) % 7}, b{i, (i + 2) % 7, (i + 3) % 7};
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        tops.push_back(a);
        tops.push_back(b);
    }
    return make(tops);
}

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(4);
    s << x;
    return s.str();
}

Outcome suite_outcome(const SuiteReport& r, double budget) {
    std::string d = std::to_string(r.cases) + " cases, " + std::to_string(r.failures) + " failures";
    if (r.first_failure) d += ", first: " + r.first_failure->form;
    return {r.failures == 0, d, budget};
}

Outcome criterion1() { return suite_outcome(cartan_suite(200, 1), 10); }

Outcome criterion2() { return suite_outcome(flat_homotopy_suite(100, 2), 60); }

Outcome criterion3() {
    const KernelSpec k = make_kernel(1, KernelSpec::Profile::Polynomial, 0.1);
    bool ok = true;
    for (const Rational eps : {make_rational(1, 10), make_rational(1, 3), make_rational(2, 7)}) {
        const PolyForm x2dx = PolyForm::basis(1, 1, Polynomial::monomial({2}, 1));
        ok = ok && regularize_flat(x2dx, k, eps) - x2dx == PolyForm::dx(1, 0) * (eps * eps / 7);
    }
    return {ok, "eps in {1/10, 1/3, 2/7}"};
}

Outcome criterion4() {
    bool ok = true;
    std::string d;
    for (int k = 0; k <= 3; ++k) {
        Simplex s;
        for (int i = 0; i <= k; ++i) s.push_back(i);
        const RealCochain c = derham_map(whitney_basis(make({s}), s), k);
        const double want = std::sqrt(k + 1.0) / std::sqrt(std::pow(2.0, k));
        const double gap = std::abs(c.values[0] - want);
        ok = ok && gap <= kSplitTol;
        d += "k=" + std::to_string(k) + " gap " + fmt(gap) + (k < 3 ? ", " : "");
    }
    return {ok, d};
}

Outcome criterion5() {
    int checked = 0, bad = 0;
    for (const auto& k : {circle(), sphere(), torus7()})
        for (int d = 0; d <= k->dim(); ++d)
            for (const auto& s : k->simplices(d)) {
                ++checked;
                if (!whitney_chain_map_residual(Cochain::indicator(k, s)).is_zero()) ++bad;
            }
    return {bad == 0, std::to_string(checked) + " basis cochains, " + std::to_string(bad) + " nonzero residuals"};
}

Outcome criterion6() {
    const std::vector<std::pair<std::shared_ptr<const SimplicialComplex>, std::vector<int>>> cases{
        {circle(), {1, 1}}, {sphere(), {1, 0, 1}}, {torus7(), {1, 2, 1}}};
    bool ok = true;
    std::string d;
    for (const auto& [k, want] : cases) {
        const auto cochain = betti_numbers(k);
        std::vector<int> whit;
        for (int i = 0; i <= k->dim(); ++i) whit.push_back(whitney_subcomplex_cohomology(k, i));
        ok = ok && cochain == want && whit == want;
        d += "(";
        for (std::size_t i = 0; i < whit.size(); ++i) d += std::to_string(whit[i]) + (i + 1 < whit.size() ? "," : ")");
        d += " ";
    }
    return {ok, d, 30};
}

Outcome criterion7() {
    LocalOptions base;
    base.kernel = make_kernel(2, KernelSpec::Profile::Polynomial, 0.4);
    const auto rows = operator_norm_scan(default_sample_forms(2), {0.4, 0.2, 0.1, 0.05}, 2.0, base);
    bool ok = rows.size() == 5;
    for (std::size_t i = 2; ok && i < rows.size(); ++i) ok = rows[i].c_hat <= rows[i - 1].c_hat && rows[i].m_hat <= rows[i - 1].m_hat;
    ok = ok && rows.back().c_hat <= kCHatCap && rows.back().m_hat <= kMHatRatio * rows[1].m_hat;
    return {ok, "C(0.05)=" + fmt(rows.back().c_hat) + " M(0.4)=" + fmt(rows[1].m_hat) + " M(0.05)=" + fmt(rows.back().m_hat)};
}

Outcome criterion8() {
    int checked = 0, bad = 0;
    double worst = 0;
    for (int n = 1; n <= 2; ++n)
        for (double eps : {0.2, 0.1})
            for (double p : {1.0, 2.0, 4.0}) {
                LocalOptions opt;
                opt.kernel = make_kernel(n, KernelSpec::Profile::Polynomial, eps);
                for (const auto& w : default_sample_forms(n)) {
                    const SupBoundResult r = sup_bound_check(w, opt, p);
                    ++checked;
                    if (!r.holds) ++bad;
                    worst = std::max(worst, r.sup_regularized / (r.constant * r.lp_input));
                }
            }
    return {bad == 0, std::to_string(checked) + " cases, worst lhs/rhs " + fmt(worst)};
}

Outcome criterion9() {
    bool ok = true;
    std::string d;
    const auto tri = make({{0, 1, 2}});
    const std::vector<PiecewiseForm> forms{whitney_basis(tri, {0}) + whitney_basis(tri, {2}), whitney_basis(tri, {0, 1}),
                                           whitney_basis(tri, {0, 2}) - make_rational(2) * whitney_basis(tri, {1, 2}),
                                           whitney_basis(tri, {0, 1, 2})};
    NormOptions quad;
    quad.quad_degree = kCylinderQuad;
    double worst_gap = 0;
    for (double p : {1.0, 2.0, 4.0})
        for (const auto& w : forms) {
            const double lhs = std::pow(prism_lp_norm(extend_cylinder(w), p, kCylinderQuad), p);
            const double rhs = std::pow(lp_norm(w, p, quad), p) / (p + 1);
            worst_gap = std::max(worst_gap, std::abs(lhs - rhs));
        }
    ok = worst_gap <= kCylinderTol;
    d += "cylinder gap " + fmt(worst_gap);

    int instances = 0, violations = 0;
    auto record = [&](const std::string& name, double in, double out) {
        ++instances;
        if (!(out <= in)) {
            ++violations;
            d += "; " + name + " " + fmt(in) + " -> " + fmt(out);
        }
    };
    const auto boundary = circle();
    const auto skel = make({{0, 1}, {1, 2}, {0, 2}});
    for (double p : {1.0, 2.0, 4.0}) {
        const std::string ps = " p=" + fmt(p);
        const ExtensionReport b0 = extend_from_boundary(whitney_basis(boundary, {0}), p);
        record("boundary 0-form" + ps, b0.input_norm, b0.output_norm);
        const ExtensionReport b1 = extend_from_boundary(whitney_basis(boundary, {0, 1}), p);
        record("boundary 1-form" + ps, b1.input_norm, b1.output_norm);
        const ExtensionReport s1 = extend_from_skeleton(whitney_basis(skel, {1, 2}), make({{0, 1, 2}}), p);
        record("skeleton 1-form" + ps, s1.input_norm, s1.output_norm);
        BouquetForm one = zero_bouquet_form(make_bouquet(2), 0);
        for (auto& h : one.halves) h = {PolyForm::function(Polynomial::constant(1, 1), 1), PolyForm::function(Polynomial::constant(1, 1), 1)};
        const BouquetExtension e = extend_bouquet(one, p);
        record("bouquet constant" + ps, e.input_norm, e.output_finite ? e.output_norm : INFINITY);
    }
    ok = ok && violations == 0;
    d += "; " + std::to_string(instances - violations) + "/" + std::to_string(instances) + " extensions within norm";
    return {ok, d};
}

Outcome criterion10() {
    const auto k = circle();
    GlobalOptions opt;
    opt.quad_degree = 20;
    opt.p = 2.0;
    double worst = 0;
    bool local = true;
    for (int deg = 0; deg <= 1; ++deg)
        for (const auto& s : k->simplices(deg)) {
            const GlobalResult r = global_regularize(whitney_basis(k, s), opt);
            worst = std::max(worst, r.residual_norm);
            local = local && r.locality_ok;
        }
    const GlobalResult mix = global_regularize(whitney_basis(k, {0, 1}) + make_rational(-3, 2) * whitney_basis(k, {1, 2}), opt);
    worst = std::max(worst, mix.residual_norm);
    local = local && mix.locality_ok;
    return {worst <= kGlobalTol && local, "worst residual " + fmt(worst) + (local ? ", locality ok" : ", locality violated")};
}

Outcome criterion11() {
    RandomSource rng(11);
    const std::vector<std::shared_ptr<const SimplicialComplex>> ks{circle(), sphere(), torus7(), make({{0, 1, 2}, {0, 2, 3}})};
    double worst = 0;
    bool ok = true;
    for (int i = 0; i < 20; ++i) {
        const auto& k = ks[i % ks.size()];
        const int degree = 1 + (i / static_cast<int>(ks.size())) % k->dim();
        const PiecewiseForm omega = exterior_d(random_kernel_form(rng, k, degree - 1));
        ok = ok && integrate_cochain(omega).is_zero();
        const ExactnessWitness w = exactness_witness(omega, 2.0, kWitnessTol);
        worst = std::max(worst, w.residual);
    }
    return {ok && worst <= kWitnessTol, "20 forms, worst residual " + fmt(worst)};
}

}  // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,  criterion5, criterion6,
                                                         criterion7, criterion8, criterion9, criterion10, criterion11};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (o.budget > 0 && secs > o.budget) {
            o.pass = false;
            o.detail += "; over " + fmt(o.budget) + " s budget";
        }
        failures += o.pass ? 0 : 1;
        std::printf("criterion %zu: %s (%.2f s) %s\n", i + 1, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
