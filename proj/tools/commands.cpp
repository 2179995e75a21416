#include "commands.hpp"

#include "derham/cohomology.hpp"
#include "derham/io.hpp"
#include "derham/mollify_flat.hpp"
#include "derham/random_forms.hpp"
#include "derham/suites.hpp"

#include <cmath>
#include <iomanip>
#include <stdexcept>

namespace derham::cli {

namespace {

std::shared_ptr<const SimplicialComplex> load_complex(const Flags& f) {
    if (f.complex.empty()) throw std::invalid_argument("--complex is required");
    return complex_from_json(read_json_file(f.complex));
}

Json suite_json(const SuiteReport& r) {
    Json j;
    j["cases"] = r.cases;
    j["seed"] = r.seed;
    j["failures"] = r.failures;
    if (r.first_failure) {
        const auto& c = *r.first_failure;
        j["counterexample"] = Json{{"case", c.index}, {"form", c.form}, {"parameters", c.parameters}, {"residual", c.residual}};
    }
    return j;
}

std::shared_ptr<const SimplicialComplex> built_in(const std::vector<Simplex>& tops) {
    ComplexDescription d;
    d.maximal_simplices = tops;
    return std::make_shared<const SimplicialComplex>(d);
}

std::shared_ptr<const SimplicialComplex> torus7() {
    std::vector<Simplex> tops;
    for (int i = 0; i < 7; ++i) {
        Simplex a{i, (i + 1) % 7, (i + 3) % 7}, b{i, (i + 2) % 7, (i + 3) % 7};
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        tops.push_back(a);
        tops.push_back(b);
    }
    return built_in(tops);
}

}  // namespace

int check_geometry(const Flags& f, std::ostream& out) {
    const auto k = load_complex(f);
    const GeometryReport g = derham::check_geometry(*k, f.L);
    Json j;
    j["star_bound"] = g.star_bound;
    j["connected"] = g.connected;
    j["L_witness"] = g.L_witness;
    if (f.L) j["within_L"] = g.within_L;
    out << dump_json(j);
    return (g.connected && g.within_L) ? kSuccess : kVerificationFailure;
}

int verify_cartan(const Flags& f, std::ostream& out) {
    const SuiteReport r = cartan_suite(f.cases, f.seed);
    Json j = suite_json(r);
    if (!f.seed_given) j["seed_defaulted"] = true;
    out << dump_json(j);
    return r.failures == 0 ? kSuccess : kVerificationFailure;
}

int cohomology(const Flags& f, std::ostream& out) {
    const auto k = load_complex(f);
    const auto betti = betti_numbers(k);
    Json j;
    j["betti"] = betti;
    Json checks;
    checks["euler_characteristic"] = k->euler_characteristic();
    checks["euler_matches"] = euler_characteristic_from_betti(betti) == k->euler_characteristic();
    bool ok = checks["euler_matches"].get<bool>();
    if (f.verify_derham) {
        std::optional<GlobalOptions> reg;
        if (k->dim() <= 2) {
            GlobalOptions g;
            if (f.eps) g.eps = *f.eps;
            if (f.quad_degree) g.quad_degree = *f.quad_degree;
            g.p = f.p;
            reg = g;
        }
        const DerhamIsoReport r = derham_iso_check(k, f.p, reg, f.tolerance);
        checks["whitney_betti"] = r.whitney_betti;
        checks["dims_agree"] = r.dims_agree;
        checks["pairing_nonsingular"] = r.pairing_nonsingular;
        if (r.regularization_checked) {
            checks["regularization_ok"] = r.regularization_ok;
            checks["regularization_residual"] = r.regularization_residual;
        }
        if (!r.notice.empty()) checks["notice"] = r.notice;
        ok = ok && r.dims_agree && r.pairing_nonsingular && (!r.regularization_checked || r.regularization_ok);
    }
    j["checks"] = checks;
    out << dump_json(j);
    return ok ? kSuccess : kVerificationFailure;
}

int whitney(const Flags& f, std::ostream& out) {
    const auto k = load_complex(f);
    if (f.cochain.empty()) throw std::invalid_argument("--cochain is required");
    const Cochain c = cochain_from_json(read_json_file(f.cochain), k);
    out << dump_json(form_to_json(derham::whitney(c)));
    return kSuccess;
}

int derham_map(const Flags& f, std::ostream& out) {
    const auto k = load_complex(f);
    if (f.form.empty()) throw std::invalid_argument("--form is required");
    const PiecewiseForm w = form_from_json(read_json_file(f.form), k);
    const auto compat = check_compatibility(w);
    if (!compat.compatible) throw std::invalid_argument("form traces disagree: " + compat.detail);
    Json j = real_cochain_to_json(derham::derham_map(w, w.degree()));
    j["integrals"] = cochain_to_json(integrate_cochain(w))["values"];
    out << dump_json(j);
    return kSuccess;
}

int regularize(const Flags& f, std::ostream& out) {
    const auto k = load_complex(f);
    if (f.form.empty()) throw std::invalid_argument("--form is required");
    const PiecewiseForm w = form_from_json(read_json_file(f.form), k);
    GlobalOptions g;
    if (f.eps) g.eps = *f.eps;
    if (f.quad_degree) g.quad_degree = *f.quad_degree;
    g.p = f.p;
    g.compare_orders = f.compare_orders;
    const GlobalResult r = global_regularize(w, g);
    Json j;
    j["residual_norms"] = Json{{"homotopy", r.residual_norm}, {"commutation", r.commutation_norm}};
    j["eps_schedule"] = r.eps_schedule;
    Json samples = Json::array();
    for (const auto& s : r.smoothness_samples)
        samples.push_back(Json{{"vertex", static_cast<int>(s[0])}, {"value", s[1]}, {"second_difference", s[2]}});
    j["smoothness_samples"] = samples;
    j["locality_ok"] = r.locality_ok;
    if (r.order_difference) j["order_difference"] = *r.order_difference;
    j["tolerance"] = f.tolerance;
    out << dump_json(j);
    return (r.locality_ok && r.residual_norm <= f.tolerance) ? kSuccess : kVerificationFailure;
}

int norms(const Flags& f, std::ostream& out) {
    if (f.dim < 1 || f.dim > 3) throw std::invalid_argument("--dim must be 1, 2 or 3");
    LocalOptions base;
    base.kernel = make_kernel(f.dim, KernelSpec::Profile::Polynomial, f.eps_grid.empty() ? 0.1 : f.eps_grid.front());
    const auto rows = operator_norm_scan(default_sample_forms(f.dim), f.eps_grid, f.p, base);
    out << "eps,c_hat,m_hat\n" << std::setprecision(17);
    for (const auto& r : rows) out << r.eps << "," << r.c_hat << "," << r.m_hat << "\n";
    return kSuccess;
}

int verify_all(const Flags& f, std::ostream& out) {
    Json checks;
    checks["cartan"] = cartan_suite(50, f.seed).failures == 0;
    checks["flat_homotopy"] = flat_homotopy_suite(20, f.seed).failures == 0;

    const KernelSpec k1 = make_kernel(1, KernelSpec::Profile::Polynomial, 0.1);
    const Rational eps = make_rational(1, 10);
    const PolyForm x2dx = PolyForm::basis(1, 1, Polynomial::monomial({2}, 1));
    checks["kernel_moment"] = regularize_flat(x2dx, k1, eps) - x2dx == PolyForm::dx(1, 0) * (eps * eps / 7);

    bool split = true;
    for (int d = 0; d <= 3; ++d) {
        Simplex s;
        for (int i = 0; i <= d; ++i) s.push_back(i);
        const auto k = built_in({s});
        const RealCochain c = derham::derham_map(whitney_basis(k, s), d);
        split = split && std::abs(c.values[0] - derham_scale(d)) <= 1e-12;
    }
    checks["whitney_split"] = split;

    const auto circle = built_in({{0, 1}, {1, 2}, {0, 2}});
    const auto sphere = built_in({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
    const auto torus = torus7();
    bool chain = true;
    for (const auto& k : {circle, sphere, torus})
        for (int d = 0; d <= k->dim(); ++d)
            for (const auto& s : k->simplices(d)) chain = chain && whitney_chain_map_residual(Cochain::indicator(k, s)).is_zero();
    checks["chain_map"] = chain;
    checks["betti"] = betti_numbers(circle) == std::vector<int>{1, 1} && betti_numbers(sphere) == std::vector<int>{1, 0, 1} &&
                      betti_numbers(torus) == std::vector<int>{1, 2, 1};

    int failures = 0;
    for (const auto& [name, ok] : checks.items()) failures += ok.get<bool>() ? 0 : 1;
    Json j;
    j["seed"] = f.seed;
    j["checks"] = checks;
    j["failures"] = failures;
    out << dump_json(j);
    return failures == 0 ? kSuccess : kVerificationFailure;
}

}  // namespace derham::cli
