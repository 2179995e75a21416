#pragma once

#include "derham/poly_form.hpp"

#include <string>
#include <vector>

namespace derham {

/// Flow of an explicitly integrable field.
///  - translation: x ↦ x + t·v
///  - scaling: x ↦ t·x
///  - affine: flow of x ↦ A x + b with A nilpotent, x ↦ e^{tA}x + (∫₀ᵗ e^{sA} ds) b
struct FlowSpec {
    enum class Kind { Translation, Scaling, Affine };
    Kind kind = Kind::Translation;
    int dim = 0;
    std::vector<Rational> vector;               // translation v, or b for affine
    std::vector<std::vector<Rational>> matrix;  // A for affine

    static FlowSpec translation(std::vector<Rational> v);
    static FlowSpec scaling(int dim);
    static FlowSpec affine(std::vector<std::vector<Rational>> a, std::vector<Rational> b);
};

/// Flow map at a symbolic time: the result has nvars + 1 variables, time last.
/// Components cover every form variable (parameters map to themselves).
PolynomialMap flow_map(const FlowSpec& flow, int nvars);

/// φ_t^* ω with t left symbolic as a trailing parameter variable.
PolyForm flow_pullback_symbolic(const FlowSpec& flow, const PolyForm& w);
PolyForm flow_pullback(const FlowSpec& flow, const Rational& t, const PolyForm& w);

/// Q_v ω = ∫₀¹ ι_v(s_{tv}^* ω) dt. Components of v may depend on the form's
/// parameter variables.
PolyForm cartan_Q(const std::vector<Polynomial>& v, const PolyForm& w);
PolyForm cartan_Q(const std::vector<Rational>& v, const PolyForm& w);

/// s_v^* ω − ω − Q_v dω − d Q_v ω.
PolyForm verify_cartan_identity(const std::vector<Rational>& v, const PolyForm& w);

struct LieFlowResult {
    PolyForm residual;
    /// "exact-flow" when the flow is polynomial in t, "first-order-jet"
    /// when only the t-linear part of the flow enters (diagonal or general
    /// linear parts); d/dt at t = 0 depends on nothing else.
    std::string method;
};

/// d/dt|₀ φ_t^* ω − 𝓛_X ω for an affine field X.
LieFlowResult lie_flow_check(const VectorFieldPoly& x, const PolyForm& w);

/// η = ∫₀¹ t^{k-1} ι_x(ω(t x)) dt for closed ω of degree k ≥ 1; dη = ω.
PolyForm poincare_primitive(const PolyForm& w);

/// True when A^dim = 0.
bool is_nilpotent(const std::vector<std::vector<Rational>>& a);

}  // namespace derham
