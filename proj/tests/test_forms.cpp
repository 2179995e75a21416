#include "derham/homotopy.hpp"
#include "derham/random_forms.hpp"

#include <catch_amalgamated.hpp>

using namespace derham;

namespace {

Polynomial x(int n, int i) { return Polynomial::variable(n, i); }
Rational q(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }

}  // namespace

TEST_CASE("polynomial arithmetic and calculus") {
    const Polynomial p = x(2, 0) * x(2, 0) + x(2, 1) * q(3);
    CHECK(p.degree() == 2);
    CHECK(p.derivative(0) == x(2, 0) * q(2));
    const std::vector<Rational> at{q(2), q(1, 3)};
    CHECK(p.evaluate(std::span<const Rational>(at)) == q(5));
    CHECK(Polynomial::constant(2, 1).integrate_reference_simplex(2) == q(1, 2));
    CHECK(x(2, 0).integrate_reference_simplex(2) == q(1, 6));
    CHECK((x(1, 0) * x(1, 0)).integrate_unit(0) == Polynomial::constant(1, q(1, 3)));
    CHECK(parse_polynomial(p.to_string(), 2) == p);
}

TEST_CASE("compiled polynomial gradient") {
    const Polynomial p = x(2, 0) * x(2, 0) * x(2, 1) - x(2, 1);
    const CompiledPolynomial c(p);
    const double pt[2] = {1.5, -2.0};
    double g[2];
    CHECK(c.value_and_gradient(pt, g) == Catch::Approx(-2.5).epsilon(1e-14));
    CHECK(g[0] == Catch::Approx(-6.0).epsilon(1e-14));
    CHECK(g[1] == Catch::Approx(1.25).epsilon(1e-14));
}

TEST_CASE("wedge and exterior derivative") {
    const PolyForm dx1 = PolyForm::dx(2, 0), dx2 = PolyForm::dx(2, 1);
    CHECK(wedge(dx1, dx2) == wedge(dx2, dx1) * q(-1));
    // d(x1 x2 dx1) = x1 dx2∧dx1 = −x1 dx1∧dx2
    const PolyForm w = PolyForm::basis(2, 1, x(2, 0) * x(2, 1));
    CHECK(exterior_d(w) == PolyForm::basis(2, 3, x(2, 0) * q(-1)));
    RandomSource rng(11);
    for (int dim = 1; dim <= 4; ++dim)
        for (int k = 0; k + 2 <= dim; ++k) CHECK(exterior_d(exterior_d(random_form(rng, dim, k, 4))).is_zero());
    CHECK(parse_poly_form(w.to_string(), 2, 1) == w);
}

TEST_CASE("interior product and Lie derivative") {
    const PolyForm area = wedge(PolyForm::dx(2, 0), PolyForm::dx(2, 1));
    const VectorFieldPoly e1 = VectorFieldPoly::constant(2, {q(1), q(0)});
    CHECK(interior_product(e1, area) == PolyForm::dx(2, 1));
    // 𝓛_X of dx1∧dx2 for X = (x1, 0) is div X · area = area
    const VectorFieldPoly xf = VectorFieldPoly::affine({{q(1), q(0)}, {q(0), q(0)}}, {q(0), q(0)});
    CHECK(lie_derivative(xf, area) == area);
}

TEST_CASE("Cartan homotopy for translations") {
    const PolyForm f = PolyForm::function(x(1, 0) * x(1, 0), 1);
    const PolyForm moved = pullback(AffineMap::translation({q(1)}), f);
    CHECK(moved == PolyForm::function(x(1, 0) * x(1, 0) + x(1, 0) * q(2) + Polynomial::constant(1, 1), 1));
    CHECK(cartan_Q(std::vector<Rational>{q(3), q(5)}, PolyForm::dx(2, 0)) == PolyForm::function(Polynomial::constant(2, 3), 2));
    RandomSource rng(5);
    for (int dim = 1; dim <= 3; ++dim)
        for (int k = 0; k <= dim; ++k)
            CHECK(verify_cartan_identity(random_vector(rng, dim), random_form(rng, dim, k, 3)).is_zero());
}

TEST_CASE("flows and Poincare primitive") {
    RandomSource rng(9);
    const PolyForm w = random_form(rng, 3, 1, 3);
    CHECK(lie_flow_check(VectorFieldPoly::affine({{q(0), q(1), q(0)}, {q(0), q(0), q(2)}, {q(0), q(0), q(0)}}, {q(1), q(0), q(-1)}), w)
              .residual.is_zero());
    CHECK(lie_flow_check(VectorFieldPoly::affine({{q(1), q(0), q(0)}, {q(0), q(1), q(0)}, {q(0), q(0), q(1)}}, {q(0), q(0), q(0)}), w)
              .residual.is_zero());
    const PolyForm closed = exterior_d(random_form(rng, 3, 1, 3));
    CHECK(exterior_d(poincare_primitive(closed)) == closed);
    CHECK_THROWS_AS(poincare_primitive(PolyForm::basis(2, 1, x(2, 1))), std::invalid_argument);
    CHECK(is_nilpotent({{q(0), q(1)}, {q(0), q(0)}}));
    CHECK_FALSE(is_nilpotent({{q(1), q(0)}, {q(0), q(0)}}));
}
