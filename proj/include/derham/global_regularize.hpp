#pragma once

#include "derham/local_ops.hpp"
#include "derham/piecewise_form.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace derham {

/// Point of a maximal simplex in its barycentric chart t_1..t_m.
struct ChartPoint {
    Simplex simplex;
    std::vector<double> t;
};

struct GlobalField;

/// Bi-Lipschitz chart φ of a vertex star onto a neighbourhood U of the
/// closed unit ball, or of a bouquet star onto its leaves in U. Jacobians are
/// row-major.
class StarChart {
public:
    virtual ~StarChart() = default;
    virtual int dim() const = 0;
    virtual int center() const = 0;
    /// Maximal simplices of the star.
    virtual std::vector<Simplex> simplices() const = 0;
    /// φ on a star simplex; `jac` receives dy/dt (n × m).
    virtual std::vector<double> forward(const Simplex& s, std::span<const double> t, std::vector<double>* jac) const = 0;
    /// φ⁻¹; `jac` receives dt/dy (m × n). Empty outside U.
    virtual std::optional<ChartPoint> inverse(std::span<const double> y, std::vector<double>* jac) const = 0;
    /// Radius of a ball containing φ(Σ'), Σ' the star in the barycentric subdivision.
    virtual double sigma_prime_radius() const = 0;
    /// Radius of the ball contained in U.
    virtual double chart_radius() const = 0;
    virtual std::vector<double> singular_points() const { return {}; }
    virtual std::vector<double> singular_rays() const { return {}; }
    /// Field carried into the chart; defaults to push_to_chart.
    virtual FormField push(const GlobalField& g) const;
};

/// Star of a vertex of degree two in a 1-complex, unfolded along arclength
/// and scaled so that the star fills (-1.4, 1.4).
std::unique_ptr<StarChart> make_segment_chart(const SimplicialComplex& k, int vertex);
/// Star of an interior vertex of a 2-complex whose link is a cycle: mapped
/// piecewise affinely onto a regular polygon, then radially onto the disk
/// of radius 1.4.
std::unique_ptr<StarChart> make_disk_chart(const SimplicialComplex& k, int vertex);
/// Star of a vertex of even degree 2m ≥ 4 in a 1-complex as a bouquet of m
/// segments in the plane (see bouquet.hpp).
std::unique_ptr<StarChart> make_bouquet_chart(const SimplicialComplex& k, int vertex);
/// Charts for every vertex (dimensions 1 and 2); throws when a star is
/// neither a ball nor a bouquet and no chart can be built.
std::vector<std::unique_ptr<StarChart>> make_star_charts(const SimplicialComplex& k);

/// Numerically evaluated form on a complex: coefficients over
/// index_sets(m, degree) in the t chart of a maximal simplex.
struct GlobalField {
    std::shared_ptr<const SimplicialComplex> complex;
    int degree = 0;
    std::function<void(const Simplex&, std::span<const double>, std::span<double>)> eval;
    /// Interior parameters (1-simplices only) where the field is not smooth.
    std::map<Simplex, std::vector<double>> kinks;

    std::vector<double> operator()(const Simplex& s, std::span<const double> t) const;
};

GlobalField global_field(const PiecewiseForm& w);
GlobalField operator+(const GlobalField& a, const GlobalField& b);
GlobalField operator-(const GlobalField& a, const GlobalField& b);
/// Exterior derivative by finite differences in the t chart; stencils stay
/// inside the simplex and on one side of known kinks.
GlobalField global_numeric_d(const GlobalField& g, double step = 1e-4);

/// L_p norm over the complex with the unit-edge metric; pieces of 1-simplices
/// are split at kinks. `degree` is the simplex quadrature degree.
double global_lp_norm(const GlobalField& g, double p, int degree);

/// Field pulled into a star chart through φ⁻¹.
FormField push_to_chart(const GlobalField& g, const StarChart& chart);

/// 𝓡_i G: the localized regularization in chart i, equal to G off φ_i⁻¹(B₁).
GlobalField apply_star_regularize(const GlobalField& g, const StarChart& chart, const LocalOptions& opt);
/// 𝓐_i G: the localized homotopy in chart i, zero off φ_i⁻¹(B₁).
GlobalField apply_star_homotopy(const GlobalField& g, const StarChart& chart, const LocalOptions& opt);

struct GlobalOptions {
    double eps = 0.1;
    KernelSpec::Profile profile = KernelSpec::Profile::Polynomial;
    int v_points = 10;
    int t_points = 10;
    int quad_degree = 20;
    double p = 2.0;
    int max_halvings = 12;
    bool compare_orders = false;  // also compose the stars in descending order
};

struct GlobalResult {
    GlobalField regularized;  // 𝓡Ω
    GlobalField homotopy;     // 𝓐Ω
    std::vector<double> eps_schedule;  // per star, ascending vertex order
    double residual_norm = 0;  // ‖𝓡Ω − Ω − d𝓐Ω − 𝓐dΩ‖_p
    double commutation_norm = 0;  // ‖d𝓡Ω − 𝓡dΩ‖_p
    bool locality_ok = false;
    std::optional<double> order_difference;  // ‖𝓡Ω (descending) − 𝓡Ω (ascending)‖_p when requested
    std::vector<std::vector<double>> smoothness_samples;  // (vertex, value, second difference)
};

/// ε_i for a star: start at eps and halve until the largest displacement of
/// 𝔰_{εv} on B₁ is below half the gap between φ(Σ') and ∂B₁.
double star_eps(const StarChart& chart, double eps, KernelSpec::Profile profile, int max_halvings);

/// Per-operator locality: 𝓡_iΩ = Ω and 𝓐_iΩ = 0 at sample points of K outside φ_i⁻¹(B₁).
bool check_locality(const GlobalField& omega, const StarChart& chart, const LocalOptions& opt);

GlobalResult global_regularize(const PiecewiseForm& omega, const GlobalOptions& opt,
                               const std::vector<std::unique_ptr<StarChart>>* charts = nullptr);

}  // namespace derham
