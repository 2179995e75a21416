#include "derham/local_ops.hpp"
#include "derham/mollify_flat.hpp"
#include "derham/random_forms.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace derham;

namespace {

constexpr double kExact = 1e-12;
constexpr double kQuad = 1e-9;
constexpr double kHomotopy = 1e-6;
// tensor Gauss on the cube resolves the steep bump edge only to this level at 24 points
constexpr double kKernelMass = 1e-4;

Rational q(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }

double max_abs(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

TEST_CASE("polynomial kernel moments") {
    // ∫ v^j (15/16)(1 − v²)² dv over [−1, 1] by the beta integral
    CHECK(polynomial_profile_moment(0) == q(1));
    CHECK(polynomial_profile_moment(1) == q(0));
    CHECK(polynomial_profile_moment(2) == q(1, 7));
    CHECK(polynomial_profile_moment(4) == q(1, 21));
    const KernelSpec k = make_kernel(2, KernelSpec::Profile::Polynomial, 0.1);
    CHECK(kernel_moment(k, {2, 2}) == q(1, 49));
    CHECK(kernel_sup(k) == Catch::Approx(std::pow(15.0 / 16.0, 2) / 0.01).epsilon(kExact));
    CHECK(kernel_support_measure(k) == Catch::Approx(0.04).epsilon(kExact));
    CHECK(kernel_support_is_cube(k));
}

TEST_CASE("smooth kernel is a probability density") {
    for (int n = 1; n <= 3; ++n) {
        const KernelSpec k = make_kernel(n, KernelSpec::Profile::Smooth, 0.2);
        auto mass = [&](int points) {
            double total = 0;
            for (double w : kernel_quadrature(k, points).weights) total += w;
            return total;
        };
        INFO("n = " << n);
        const double coarse = std::abs(mass(24) - 1.0), fine = std::abs(mass(48) - 1.0);
        CHECK(coarse <= kKernelMass);
        CHECK(fine <= coarse);
        CHECK_FALSE(kernel_support_is_cube(k));
    }
}

TEST_CASE("flat regularization is exact") {
    const KernelSpec k1 = make_kernel(1, KernelSpec::Profile::Polynomial, 0.1);
    const Rational eps = q(1, 10);
    const Polynomial x = Polynomial::variable(1, 0);
    const PolyForm f4 = PolyForm::function(x.pow(4), 1);
    // (x + εv)^4 averaged: x^4 + 6x²ε²/7 + ε⁴/21
    const Polynomial want = x.pow(4) + x.pow(2) * (6 * eps * eps / 7) + Polynomial::constant(1, eps * eps * eps * eps / 21);
    CHECK(regularize_flat(f4, k1, eps) == PolyForm::function(want, 1));
    RandomSource rng(2);
    for (int dim = 1; dim <= 3; ++dim) {
        const KernelSpec k = make_kernel(dim, KernelSpec::Profile::Polynomial, 0.1);
        for (int deg = 0; deg <= dim; ++deg) {
            const PolyForm w = random_form(rng, dim, deg, 3);
            CHECK(flat_homotopy_residual(w, k, eps).is_zero());
            if (deg < dim) CHECK(exterior_d(regularize_flat(w, k, eps)) == regularize_flat(exterior_d(w), k, eps));
        }
    }
}

TEST_CASE("scalar mollification across a kink") {
    const KernelSpec k = make_kernel(1, KernelSpec::Profile::Polynomial, 0.1);
    const double x0[1] = {0.0};
    // ε ∫ |v| f(v) dv = ε·5/16
    const double v = mollify_scalar([](std::span<const double> y) { return std::abs(y[0]); }, k, x0, {0.0});
    CHECK(v == Catch::Approx(0.1 * 5.0 / 16.0).epsilon(kQuad));
}

TEST_CASE("ball diffeomorphism and localized flow") {
    const double x[2] = {0.3, -1.7};
    const auto y = ball_h(x);
    const auto back = ball_h_inv(y);
    CHECK(back[0] == Catch::Approx(0.3).epsilon(kExact));
    CHECK(back[1] == Catch::Approx(-1.7).epsilon(kExact));
    const double w[2] = {0.2, 0.1}, u[2] = {-0.05, 0.3}, wu[2] = {0.15, 0.4};
    const double p[2] = {0.4, 0.5};
    const auto once = localized_flow(wu, p);
    const auto inner = localized_flow(u, p);
    const auto twice = localized_flow(w, inner);
    CHECK(std::hypot(once[0] - twice[0], once[1] - twice[1]) <= kExact);
    const double out[2] = {1.2, 0.0};
    CHECK(localized_flow(w, out) == std::vector<double>{1.2, 0.0});
    const double area[1] = {1.0}, jac[4] = {2.0, 0.0, 0.0, 3.0};
    CHECK(pullback_coefficients(2, 2, area, jac)[0] == Catch::Approx(6.0).epsilon(kExact));
}

TEST_CASE("localized operators satisfy the homotopy identity") {
    LocalOptions opt;
    opt.kernel = make_kernel(1, KernelSpec::Profile::Polynomial, 0.1);
    opt.v_points = 20;
    const Polynomial x = Polynomial::variable(1, 0);
    const FormField f = form_field(PolyForm::function(x.pow(3) - x, 1));
    const FormField one = form_field(PolyForm::function(Polynomial::constant(1, 1), 1));
    const FormField residual = regularize_local(f, opt) - f - homotopy_local(numeric_d(f), opt);
    for (double t : {-0.7, -0.2, 0.0, 0.35, 0.8}) {
        const double pt[1] = {t};
        CHECK(max_abs(residual(pt)) <= kHomotopy);
        CHECK(regularize_local_at(one, opt, pt)[0] == Catch::Approx(1.0).epsilon(kQuad));
    }
}

TEST_CASE("sup bound and operator norm scan") {
    LocalOptions opt;
    opt.kernel = make_kernel(2, KernelSpec::Profile::Polynomial, 0.2);
    const PolyForm w = PolyForm::function(Polynomial::variable(2, 0) + Polynomial::constant(2, 1), 2);
    CHECK(sup_bound_check(w, opt, 2.0).holds);
    LocalOptions base;
    base.kernel = make_kernel(1, KernelSpec::Profile::Polynomial, 0.1);
    const auto rows = operator_norm_scan(default_sample_forms(1), {0.4, 0.2, 0.1}, 2.0, base);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].c_hat == 1.0);
    CHECK(rows[0].m_hat == 0.0);
    for (std::size_t i = 2; i < rows.size(); ++i) {
        CHECK(rows[i].c_hat <= rows[i - 1].c_hat);
        CHECK(rows[i].m_hat <= rows[i - 1].m_hat);
    }
}
