#include "derham/bouquet.hpp"
#include "derham/extension.hpp"
#include "derham/io.hpp"
#include "derham/random_forms.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace derham;

namespace {

constexpr double kExact = 1e-12;
constexpr double kGlobal = 1e-6;
constexpr double kBouquet = 1e-5;

std::shared_ptr<const SimplicialComplex> make(const std::vector<Simplex>& tops) {
    ComplexDescription d;
    d.maximal_simplices = tops;
    return std::make_shared<const SimplicialComplex>(d);
}

Polynomial t1() { return Polynomial::variable(1, 0); }

PiecewiseForm edge_form(std::shared_ptr<const SimplicialComplex> k) {
    PiecewiseForm w(k, 1);
    w.set_piece({0, 1}, PolyForm::dx(1, 0));
    return w;
}

}  // namespace

TEST_CASE("global regularization on a circle") {
    const auto circle = make({{0, 1}, {1, 2}, {0, 2}});
    GlobalOptions opt;
    const GlobalResult one = global_regularize(edge_form(circle), opt);
    CHECK(one.residual_norm <= kGlobal);
    CHECK(one.locality_ok);
    CHECK(one.eps_schedule.size() == 3);
    CHECK_FALSE(one.order_difference.has_value());
    opt.compare_orders = true;
    const GlobalResult zero = global_regularize(whitney_basis(circle, {1}), opt);
    CHECK(zero.residual_norm <= kGlobal);
    CHECK(zero.commutation_norm <= kGlobal);
    REQUIRE(zero.order_difference.has_value());
    CHECK(std::isfinite(*zero.order_difference));
}

TEST_CASE("star charts") {
    const auto eight = make({{0, 1}, {1, 2}, {0, 2}, {0, 3}, {3, 4}, {0, 4}});
    const auto charts = make_star_charts(*eight);
    REQUIRE(charts.size() == 5);
    CHECK(charts[0]->dim() == 2);
    CHECK(charts[1]->dim() == 1);
    CHECK_THROWS_AS(make_star_charts(*make({{0, 1}, {0, 2}, {0, 3}})), std::invalid_argument);
    for (const auto& c : charts)
        for (const auto& s : c->simplices()) {
            const std::vector<double> t{0.3};
            const auto y = c->forward(s, t, nullptr);
            const auto back = c->inverse(y, nullptr);
            REQUIRE(back.has_value());
            CHECK(back->simplex == s);
            CHECK(std::abs(back->t[0] - 0.3) <= kExact);
        }
}

TEST_CASE("bouquet model and fold extension") {
    const BouquetModel b = make_bouquet(2);
    CHECK(b.angles[1] == Catch::Approx(std::numbers::pi / 2).epsilon(kExact));
    CHECK(bouquet_ray_angles(b).size() == 4);
    CHECK_THROWS_AS(validate_bouquet(BouquetModel{{0.0, 0.0}}), std::invalid_argument);
    BouquetForm w = zero_bouquet_form(b, 0);
    w.halves[0] = {PolyForm::function(t1(), 1), PolyForm::function(t1(), 1)};
    w.halves[1] = {PolyForm::function(t1() * t1(), 1), PolyForm::function(t1() * t1() * make_rational(3), 1)};
    check_bouquet_form(w);
    const FormField ext = fold_extension(w);
    for (int leaf = 0; leaf < 2; ++leaf) {
        const FormField r = restrict_to_leaf(ext, b, leaf);
        for (double t : {-0.6, -0.1, 0.2, 0.9}) {
            const double pt[1] = {t};
            const double want = leaf == 0 ? t : (t < 0 ? t * t : 3 * t * t);
            CHECK(std::abs(r(pt)[0] - want) <= kExact);
        }
    }
    BouquetForm bad = w;
    bad.halves[1][0] = PolyForm::function(Polynomial::constant(1, 1), 1);
    CHECK_THROWS_AS(check_bouquet_form(bad), std::invalid_argument);
}

TEST_CASE("bouquet regularization homotopy") {
    LocalOptions opt;
    opt.kernel.eps = 0.1;
    opt.v_points = 20;
    BouquetForm w = zero_bouquet_form(make_bouquet(2), 0);
    w.halves[0] = {PolyForm::function(t1(), 1), PolyForm::function(t1(), 1)};
    w.halves[1] = {PolyForm::function(t1() * t1(), 1), PolyForm::function(t1() * t1(), 1)};
    const BouquetRegularization r = bouquet_star_regularize(w, opt);
    CHECK_FALSE(r.reduced_to_segment);
    CHECK(r.residual_norm <= kBouquet);
    BouquetForm seg = zero_bouquet_form(make_bouquet(1), 1);
    seg.halves[0] = {PolyForm::dx(1, 0), PolyForm::dx(1, 0)};
    const BouquetRegularization s = bouquet_star_regularize(seg, opt);
    CHECK(s.reduced_to_segment);
    CHECK(s.residual_norm <= kBouquet);
}

TEST_CASE("cylinder extension") {
    const auto edge = make({{0, 1}});
    const PiecewiseForm one = whitney_basis(edge, {0}) + whitney_basis(edge, {1});
    const PrismForm c = extend_cylinder(one);
    CHECK(prism_slice(c, make_rational(0)) == one);
    CHECK(prism_slice(c, make_rational(1)).is_zero());
    CHECK(prism_slice(exterior_d(c), make_rational(0)) == exterior_d(one));
    // ∫₀¹ (1 − s)^p ds = 1/(p + 1) on a unit edge
    for (double p : {1.0, 2.0, 3.0}) CHECK(prism_lp_norm(c, p) == Catch::Approx(std::pow(1.0 / (p + 1), 1.0 / p)).epsilon(1e-10));
}

TEST_CASE("collar and sphere extensions") {
    const auto [lo, hi] = collar_lipschitz_constants(2);
    CHECK(lo > 0);
    CHECK(lo <= hi);
    const auto boundary = make({{0, 1}, {1, 2}, {0, 2}});
    const ExtensionReport r = extend_from_boundary(whitney_basis(boundary, {0}), 2.0);
    CHECK(r.trace_error <= kExact);
    const PolyForm area = PolyForm::basis(2, 3, Polynomial::constant(2, 1) + Polynomial::variable(2, 0));
    const SphereForm s = extend_by_zero_sphere(area, 0.5);
    const double in[2] = {0.2, 0.1}, far[2] = {2.7, 0.0};
    CHECK(s.coefficient(in) == Catch::Approx(1.2).epsilon(kExact));
    CHECK(s.coefficient(far) == 0.0);
    CHECK(s.support_radius() == Catch::Approx(std::numbers::pi - 0.5).epsilon(kExact));
}

TEST_CASE("json round trips") {
    const auto square = make({{0, 1, 2}, {0, 2, 3}});
    CHECK(complex_from_json(complex_to_json(*square))->simplices(2) == square->simplices(2));
    RandomSource rng(4);
    const Cochain c = random_cochain(rng, square, 1);
    CHECK(cochain_from_json(cochain_to_json(c), square) == c);
    const PiecewiseForm w = whitney(c);
    CHECK(form_from_json(form_to_json(w), square) == w);
    CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), std::invalid_argument);
}
