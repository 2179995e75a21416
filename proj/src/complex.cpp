#include "derham/complex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace derham {

namespace {

std::pair<int, int> edge_key(int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); }

}  // namespace

std::vector<Simplex> faces_of(const Simplex& s, int k) {
    std::vector<Simplex> out;
    const int n = static_cast<int>(s.size());
    if (k < 0 || k >= n) return out;
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + k + 1, true);
    do {
        Simplex f;
        for (int i = 0; i < n; ++i)
            if (pick[i]) f.push_back(s[i]);
        out.push_back(f);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<Simplex, int>> boundary_faces(const Simplex& s) {
    std::vector<std::pair<Simplex, int>> out;
    if (s.size() < 2) return out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        Simplex f = s;
        f.erase(f.begin() + static_cast<long>(i));
        out.emplace_back(f, i % 2 ? -1 : 1);
    }
    return out;
}

bool is_face(const Simplex& face, const Simplex& s) { return std::includes(s.begin(), s.end(), face.begin(), face.end()); }

SimplicialComplex::SimplicialComplex(const ComplexDescription& desc) : L_(desc.L) {
    std::set<int> verts(desc.vertices.begin(), desc.vertices.end());
    if (verts.size() != desc.vertices.size()) throw std::invalid_argument("duplicate vertex id");
    std::set<Simplex> all;
    int top = verts.empty() ? -1 : 0;
    for (Simplex s : desc.maximal_simplices) {
        if (s.empty()) throw std::invalid_argument("empty simplex");
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw std::invalid_argument("duplicate vertex inside a simplex");
        if (s.size() > 31) throw std::invalid_argument("simplex dimension too large");
        top = std::max(top, static_cast<int>(s.size()) - 1);
        for (int k = 0; k < static_cast<int>(s.size()); ++k)
            for (auto& f : faces_of(s, k)) all.insert(f);
        for (int v : s) verts.insert(v);
    }
    for (int v : verts) all.insert(Simplex{v});
    vertices_.assign(verts.begin(), verts.end());
    simplices_.assign(top + 1, {});
    for (const auto& s : all) simplices_[s.size() - 1].push_back(s);  // std::set order is lexicographic
    for (auto& level : simplices_)
        for (int i = 0; i < static_cast<int>(level.size()); ++i) index_[level[i]] = i;
    for (const auto& [e, len] : desc.edge_lengths) {
        if (!(len > 0)) throw std::invalid_argument("edge length must be positive");
        const auto key = edge_key(e.first, e.second);
        if (!contains(Simplex{key.first, key.second})) throw std::invalid_argument("edge length given for a non-edge");
        edge_lengths_[key] = len;
    }
}

const std::vector<Simplex>& SimplicialComplex::simplices(int k) const {
    static const std::vector<Simplex> empty;
    if (k < 0 || k >= static_cast<int>(simplices_.size())) return empty;
    return simplices_[k];
}

int SimplicialComplex::index_of(const Simplex& s) const {
    auto it = index_.find(s);
    return it == index_.end() ? -1 : it->second;
}

std::vector<Simplex> SimplicialComplex::maximal_simplices() const {
    std::set<Simplex> covered;
    for (int k = 1; k <= dim(); ++k)
        for (const auto& s : simplices_[k])
            for (auto& f : boundary_faces(s)) covered.insert(f.first);
    std::vector<Simplex> out;
    for (int k = 0; k <= dim(); ++k)
        for (const auto& s : simplices_[k])
            if (!covered.count(s)) out.push_back(s);
    return out;
}

double SimplicialComplex::edge_length(int a, int b) const {
    auto it = edge_lengths_.find(edge_key(a, b));
    return it == edge_lengths_.end() ? 1.0 : it->second;
}

int SimplicialComplex::euler_characteristic() const {
    int chi = 0;
    for (int k = 0; k <= dim(); ++k) chi += (k % 2 ? -1 : 1) * count(k);
    return chi;
}

ComplexDescription SimplicialComplex::description() const {
    ComplexDescription d;
    d.vertices = vertices_;
    d.maximal_simplices = maximal_simplices();
    d.edge_lengths = edge_lengths_;
    d.L = L_;
    return d;
}

GeometryReport check_geometry(const SimplicialComplex& k, std::optional<double> L) {
    GeometryReport r;
    std::map<int, int> degree;
    for (int v : k.vertices()) degree[v] = 0;
    bool first = true;
    for (const auto& e : k.simplices(1)) {
        ++degree[e[0]];
        ++degree[e[1]];
        const double len = k.edge_length(e[0], e[1]);
        if (first) {
            r.min_edge = r.max_edge = len;
            first = false;
        } else {
            r.min_edge = std::min(r.min_edge, len);
            r.max_edge = std::max(r.max_edge, len);
        }
    }
    for (const auto& [v, d] : degree) r.star_bound = std::max(r.star_bound, d);
    r.L_witness = std::max({1.0, r.max_edge, 1.0 / r.min_edge});
    if (!L) L = k.declared_L();
    if (L) r.within_L = r.L_witness <= *L;

    // connectivity through the 1-skeleton
    const auto& verts = k.vertices();
    if (!verts.empty()) {
        std::map<int, std::vector<int>> adj;
        for (const auto& e : k.simplices(1)) {
            adj[e[0]].push_back(e[1]);
            adj[e[1]].push_back(e[0]);
        }
        std::set<int> seen{verts.front()};
        std::vector<int> stack{verts.front()};
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int w : adj[v])
                if (seen.insert(w).second) stack.push_back(w);
        }
        r.connected = seen.size() == verts.size();
    }
    return r;
}

StarResult star(const SimplicialComplex& k, int v) {
    if (!k.contains(Simplex{v})) throw std::invalid_argument("unknown vertex " + std::to_string(v));
    ComplexDescription d;
    for (int dim = 0; dim <= k.dim(); ++dim)
        for (const auto& s : k.simplices(dim))
            if (std::binary_search(s.begin(), s.end(), v)) d.maximal_simplices.push_back(s);
    // Keep only lengths of edges inside the star.
    d.edge_lengths = k.edge_lengths();
    SimplicialComplex probe(ComplexDescription{{}, d.maximal_simplices, {}, {}});
    for (auto it = d.edge_lengths.begin(); it != d.edge_lengths.end();) {
        if (!probe.contains(Simplex{it->first.first, it->first.second}))
            it = d.edge_lengths.erase(it);
        else
            ++it;
    }
    d.L = k.declared_L();
    StarResult r{SimplicialComplex(d), {}};
    for (int dim = 0; dim <= r.star.dim(); ++dim) {
        std::vector<int> inc;
        for (const auto& s : r.star.simplices(dim)) inc.push_back(k.index_of(s));
        r.inclusion.push_back(inc);
    }
    return r;
}

Subdivision barycentric_subdivision(const SimplicialComplex& k) {
    Subdivision out;
    std::map<Simplex, int> id;
    for (int dim = 0; dim <= k.dim(); ++dim) {
        for (const auto& s : k.simplices(dim)) {
            id[s] = static_cast<int>(out.barycenter_of.size());
            out.barycenter_of.push_back(s);
        }
    }
    // Maximal chains σ_0 ⊂ σ_1 ⊂ … ⊂ σ_m of each maximal simplex σ_m.
    ComplexDescription d;
    for (int i = 0; i < static_cast<int>(out.barycenter_of.size()); ++i) d.vertices.push_back(i);
    for (const auto& top : k.maximal_simplices()) {
        std::vector<int> order(top.size());
        std::iota(order.begin(), order.end(), 0);
        do {
            Simplex chain;
            Simplex cur;
            for (int idx : order) {
                cur.push_back(top[idx]);
                Simplex sorted = cur;
                std::sort(sorted.begin(), sorted.end());
                chain.push_back(id.at(sorted));
            }
            std::sort(chain.begin(), chain.end());
            d.maximal_simplices.push_back(chain);
        } while (std::next_permutation(order.begin(), order.end()));
    }
    out.complex = SimplicialComplex(d);
    return out;
}

SimplicialComplex skeleton(const SimplicialComplex& k, int m) {
    if (m < 0 || m > k.dim()) throw std::out_of_range("skeleton dimension out of range");
    ComplexDescription d;
    d.vertices = k.vertices();
    for (int dim = 0; dim <= m; ++dim)
        for (const auto& s : k.simplices(dim)) d.maximal_simplices.push_back(s);
    d.edge_lengths = k.edge_lengths();
    d.L = k.declared_L();
    return SimplicialComplex(d);
}

namespace {

// Express a point as weights over `target` (a simplex containing point.simplex).
std::vector<double> weights_on(const ComplexPoint& p, const Simplex& target) {
    std::vector<double> w(target.size(), 0.0);
    for (std::size_t i = 0; i < p.simplex.size(); ++i) {
        auto it = std::find(target.begin(), target.end(), p.simplex[i]);
        if (it == target.end()) {
            if (std::abs(p.weights[i]) > 1e-14) return {};
            continue;
        }
        w[it - target.begin()] += p.weights[i];
    }
    return w;
}

void validate(const SimplicialComplex& k, const ComplexPoint& p) {
    if (!k.contains(p.simplex)) throw std::invalid_argument("path point lies in an unknown simplex");
    if (p.weights.size() != p.simplex.size()) throw std::invalid_argument("path point weight count mismatch");
    double s = 0;
    for (double w : p.weights) {
        if (w < -1e-12) throw std::invalid_argument("negative barycentric weight");
        s += w;
    }
    if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("barycentric weights must sum to one");
}

}  // namespace

double pl_path_length(const SimplicialComplex& k, const std::vector<ComplexPoint>& path) {
    double total = 0.0;
    for (const auto& p : path) validate(k, p);
    for (std::size_t i = 1; i < path.size(); ++i) {
        // Smallest simplex containing both supports.
        Simplex u = path[i - 1].simplex;
        u.insert(u.end(), path[i].simplex.begin(), path[i].simplex.end());
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        if (!k.contains(u)) throw std::invalid_argument("path segment is not contained in a single simplex");
        const auto a = weights_on(path[i - 1], u);
        const auto b = weights_on(path[i], u);
        // In the unit-edge regular simplex |x|^2 = 1/2 Σ δ_i^2 for Σ δ_i = 0.
        double q = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) q += (a[j] - b[j]) * (a[j] - b[j]);
        total += std::sqrt(0.5 * q);
    }
    return total;
}

double skeleton_distance_upper_bound(const SimplicialComplex& k, int a, int b) {
    if (!k.contains(Simplex{a}) || !k.contains(Simplex{b})) throw std::invalid_argument("unknown vertex");
    std::map<int, std::vector<int>> adj;
    for (const auto& e : k.simplices(1)) {
        adj[e[0]].push_back(e[1]);
        adj[e[1]].push_back(e[0]);
    }
    std::map<int, int> dist{{a, 0}};
    std::queue<int> q;
    q.push(a);
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        if (v == b) return dist[v];
        for (int w : adj[v])
            if (!dist.count(w)) {
                dist[w] = dist[v] + 1;
                q.push(w);
            }
    }
    return -1.0;
}

}  // namespace derham
