#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace derham {

/// Vertex tuple, strictly increasing.
using Simplex = std::vector<int>;

struct ComplexDescription {
    std::vector<int> vertices;  // may be empty: taken from the simplices
    std::vector<Simplex> maximal_simplices;
    std::map<std::pair<int, int>, double> edge_lengths;
    std::optional<double> L;
};

struct GeometryReport {
    int star_bound = 0;
    double min_edge = 1.0;
    double max_edge = 1.0;
    bool connected = true;
    double L_witness = 1.0;
    /// Set when an L was supplied: every edge length lies in [1/L, L].
    bool within_L = true;
};

/// Finite simplicial complex with face closure and optional edge lengths.
/// Immutable after construction.
class SimplicialComplex {
public:
    SimplicialComplex() = default;
    explicit SimplicialComplex(const ComplexDescription& desc);

    int dim() const { return static_cast<int>(simplices_.size()) - 1; }
    const std::vector<int>& vertices() const { return vertices_; }
    /// Simplices of dimension k in lexicographic order (empty for k > dim).
    const std::vector<Simplex>& simplices(int k) const;
    int count(int k) const { return static_cast<int>(simplices(k).size()); }
    /// Position of a simplex inside simplices(k); -1 when absent.
    int index_of(const Simplex& s) const;
    bool contains(const Simplex& s) const { return index_of(s) >= 0; }
    /// Simplices not a proper face of any other.
    std::vector<Simplex> maximal_simplices() const;
    double edge_length(int a, int b) const;
    const std::map<std::pair<int, int>, double>& edge_lengths() const { return edge_lengths_; }
    std::optional<double> declared_L() const { return L_; }
    int euler_characteristic() const;

    ComplexDescription description() const;

private:
    std::vector<int> vertices_;
    std::vector<std::vector<Simplex>> simplices_;
    std::map<Simplex, int> index_;
    std::map<std::pair<int, int>, double> edge_lengths_;
    std::optional<double> L_;
};

/// All faces of `s` of dimension k (sorted tuples).
std::vector<Simplex> faces_of(const Simplex& s, int k);
/// Codimension-one faces with the incidence sign (-1)^i of removing vertex i.
std::vector<std::pair<Simplex, int>> boundary_faces(const Simplex& s);
/// True when every vertex of `face` occurs in `s`.
bool is_face(const Simplex& face, const Simplex& s);

GeometryReport check_geometry(const SimplicialComplex& k, std::optional<double> L = std::nullopt);

struct StarResult {
    SimplicialComplex star;
    /// For each dimension, index in the ambient complex of each star simplex.
    std::vector<std::vector<int>> inclusion;
};

StarResult star(const SimplicialComplex& k, int v);

/// Vertex ids of the subdivision are assigned in order of (dimension, index)
/// of the barycentered simplex; `barycenter_of[id]` records that simplex.
struct Subdivision {
    SimplicialComplex complex;
    std::vector<Simplex> barycenter_of;
};

Subdivision barycentric_subdivision(const SimplicialComplex& k);

SimplicialComplex skeleton(const SimplicialComplex& k, int m);

/// Point of |K| given by a simplex and barycentric weights (one per vertex).
struct ComplexPoint {
    Simplex simplex;
    std::vector<double> weights;
};

/// Length of a piecewise-linear path, each segment measured inside one
/// unit-edge regular simplex.
double pl_path_length(const SimplicialComplex& k, const std::vector<ComplexPoint>& path);

/// Shortest edge-path distance between vertices in the 1-skeleton (unit
/// edges). This is an upper bound for the path metric; -1 when disconnected.
double skeleton_distance_upper_bound(const SimplicialComplex& k, int a, int b);

}  // namespace derham
