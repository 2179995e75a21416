#include "derham/cohomology.hpp"
#include "derham/random_forms.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace derham;

namespace {

std::shared_ptr<const SimplicialComplex> make(const std::vector<Simplex>& tops) {
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
    return make(tops);
}

const auto kCircle = make({{0, 1}, {1, 2}, {0, 2}});
const auto kSphere = make({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});

}  // namespace

TEST_CASE("face closure and counts") {
    const auto tri = make({{0, 1, 2}});
    CHECK(tri->count(0) == 3);
    CHECK(tri->count(1) == 3);
    CHECK(tri->count(2) == 1);
    CHECK(tri->euler_characteristic() == 1);
    CHECK(kSphere->euler_characteristic() == 2);
    CHECK(torus7()->euler_characteristic() == 0);
    const auto b = boundary_faces({0, 1, 2});
    REQUIRE(b.size() == 3);
    CHECK(b[0] == std::pair<Simplex, int>{{1, 2}, 1});
    CHECK(b[1] == std::pair<Simplex, int>{{0, 2}, -1});
    CHECK(b[2] == std::pair<Simplex, int>{{0, 1}, 1});
    CHECK(is_face({0, 2}, {0, 1, 2}));
    CHECK_FALSE(is_face({0, 3}, {0, 1, 2}));
}

TEST_CASE("subdivision, skeleton and star") {
    const auto tri = make({{0, 1, 2}});
    const Subdivision sd = barycentric_subdivision(*tri);
    CHECK(sd.complex.count(0) == 7);
    CHECK(sd.complex.count(1) == 12);
    CHECK(sd.complex.count(2) == 6);
    const auto tet1 = std::make_shared<const SimplicialComplex>(skeleton(*make({{0, 1, 2, 3}}), 1));
    CHECK(betti_numbers(tet1) == std::vector<int>{1, 3});
    const StarResult st = star(*kSphere, 0);
    CHECK(st.star.count(2) == 3);
}

TEST_CASE("geometry report") {
    const GeometryReport g = check_geometry(*kCircle);
    CHECK(g.connected);
    CHECK(g.star_bound >= 2);
    CHECK_FALSE(check_geometry(*make({{0, 1}, {2, 3}})).connected);
    CHECK(skeleton_distance_upper_bound(*kCircle, 0, 2) == 1.0);
}

TEST_CASE("coboundary and Whitney chain map") {
    RandomSource rng(3);
    for (const auto& k : {kCircle, kSphere, torus7()})
        for (int d = 0; d + 1 <= k->dim(); ++d) {
            const Cochain c = random_cochain(rng, k, d);
            if (d + 2 <= k->dim()) CHECK(coboundary(coboundary(c)).is_zero());
            CHECK(whitney_chain_map_residual(c).is_zero());
            CHECK(integrate_cochain(whitney(c)) == c);
        }
    CHECK(cochain_norm(std::vector<double>{3, -4}, 2) == Catch::Approx(5.0).epsilon(1e-15));
    CHECK(cochain_norm(std::vector<double>{3, -4}, kInfinity) == 4.0);
}

TEST_CASE("de Rham map normalization") {
    CHECK(derham_scale(0) == 1.0);
    CHECK(derham_scale(1) == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(derham_scale(2) == Catch::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
    const auto tri = make({{0, 1, 2}});
    const RealCochain r = derham_map(whitney_basis(tri, {0, 1, 2}), 2);
    CHECK(r.values[0] == Catch::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
}

TEST_CASE("Betti numbers from cochains and Whitney forms") {
    CHECK(betti_numbers(kCircle) == std::vector<int>{1, 1});
    CHECK(betti_numbers(kSphere) == std::vector<int>{1, 0, 1});
    CHECK(betti_numbers(torus7()) == std::vector<int>{1, 2, 1});
    for (int d = 0; d <= 2; ++d) CHECK(whitney_subcomplex_cohomology(torus7(), d) == betti_numbers(torus7())[d]);
    const DerhamIsoReport r = derham_iso_check(kSphere, 2.0, std::nullopt);
    CHECK(r.dims_agree);
    CHECK(r.pairing_nonsingular);
}

TEST_CASE("exactness witness") {
    RandomSource rng(17);
    const auto disk = make({{0, 1, 2}, {0, 2, 3}});
    const PiecewiseForm omega = exterior_d(random_kernel_form(rng, disk, 1));
    const ExactnessWitness w = exactness_witness(omega, 2.0);
    CHECK(w.residual <= 1e-8);
    CHECK(exterior_d(w.eta) == omega);
}
