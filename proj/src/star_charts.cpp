#include "derham/global_regularize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace derham {

namespace {

constexpr double kChartRadius = 1.4;

class SegmentChart final : public StarChart {
public:
    SegmentChart(int center, Simplex neg, Simplex pos) : center_(center), edges_{std::move(neg), std::move(pos)} {}

    int dim() const override { return 1; }
    int center() const override { return center_; }
    std::vector<Simplex> simplices() const override { return {edges_[0], edges_[1]}; }

    std::vector<double> forward(const Simplex& s, std::span<const double> t, std::vector<double>* jac) const override {
        const int side = side_of(s);
        const double sign = side == 0 ? -1.0 : 1.0;
        const bool starts = s[0] == center_;
        const double dist = starts ? t[0] : 1.0 - t[0];
        if (jac) *jac = {sign * kChartRadius * (starts ? 1.0 : -1.0)};
        return {sign * kChartRadius * dist};
    }

    std::optional<ChartPoint> inverse(std::span<const double> y, std::vector<double>* jac) const override {
        if (std::abs(y[0]) >= kChartRadius) return std::nullopt;
        const int side = y[0] < 0.0 ? 0 : 1;
        const Simplex& s = edges_[side];
        const double sign = side == 0 ? -1.0 : 1.0;
        const bool starts = s[0] == center_;
        const double dist = sign * y[0] / kChartRadius;
        if (jac) *jac = {1.0 / (sign * kChartRadius * (starts ? 1.0 : -1.0))};
        return ChartPoint{s, {starts ? dist : 1.0 - dist}};
    }

    double sigma_prime_radius() const override { return 0.5 * kChartRadius; }
    double chart_radius() const override { return kChartRadius; }
    std::vector<double> singular_points() const override { return {0.0}; }

private:
    int side_of(const Simplex& s) const {
        if (s == edges_[0]) return 0;
        if (s == edges_[1]) return 1;
        throw std::invalid_argument("simplex is not in this star");
    }
    int center_;
    Simplex edges_[2];
};

class DiskChart final : public StarChart {
public:
    DiskChart(int center, std::vector<int> ring) : center_(center), ring_(std::move(ring)) {
        d_ = static_cast<int>(ring_.size());
        step_ = 2.0 * std::numbers::pi / d_;
        cos_half_ = std::cos(0.5 * step_);
        for (int j = 0; j < d_; ++j) {
            Simplex tri{center_, ring_[j], ring_[(j + 1) % d_]};
            std::sort(tri.begin(), tri.end());
            triangles_.push_back(tri);
        }
        // φ(Σ'): boundary runs through edge midpoints and triangle centroids.
        sigma_radius_ = 0.0;
        for (int j = 0; j < d_; ++j) {
            const double a0 = j * step_, a1 = (j + 1) * step_;
            const double m0[2] = {0.5 * kChartRadius * std::cos(a0), 0.5 * kChartRadius * std::sin(a0)};
            const double m1[2] = {0.5 * kChartRadius * std::cos(a1), 0.5 * kChartRadius * std::sin(a1)};
            const double c[2] = {kChartRadius * (std::cos(a0) + std::cos(a1)) / 3.0,
                                 kChartRadius * (std::sin(a0) + std::sin(a1)) / 3.0};
            for (int s = 0; s <= 200; ++s) {
                const double u = s / 200.0;
                for (const double* from : {m0, m1}) {
                    const double p[2] = {from[0] + u * (c[0] - from[0]), from[1] + u * (c[1] - from[1])};
                    const auto y = normalize(p);
                    sigma_radius_ = std::max(sigma_radius_, std::hypot(y[0], y[1]));
                }
            }
        }
    }

    int dim() const override { return 2; }
    int center() const override { return center_; }
    std::vector<Simplex> simplices() const override { return triangles_; }

    std::vector<double> forward(const Simplex& s, std::span<const double> t, std::vector<double>* jac) const override {
        const int j = triangle_index(s);
        const double lam[3] = {1.0 - t[0] - t[1], t[0], t[1]};
        double p[2] = {0.0, 0.0};
        double dp[2][2];  // dp/dt
        double pos[3][2];
        for (int i = 0; i < 3; ++i) vertex_position(j, s[i], pos[i]);
        for (int i = 0; i < 3; ++i) {
            p[0] += lam[i] * pos[i][0];
            p[1] += lam[i] * pos[i][1];
        }
        for (int a = 0; a < 2; ++a)
            for (int c = 0; c < 2; ++c) dp[a][c] = pos[c + 1][a] - pos[0][a];
        const auto y = normalize(p);
        if (jac) {
            double dn[2][2];
            normalize_jacobian(p, j, dn);
            jac->assign(4, 0.0);
            for (int a = 0; a < 2; ++a)
                for (int c = 0; c < 2; ++c) (*jac)[a * 2 + c] = dn[a][0] * dp[0][c] + dn[a][1] * dp[1][c];
        }
        return y;
    }

    std::optional<ChartPoint> inverse(std::span<const double> y, std::vector<double>* jac) const override {
        const double r = std::hypot(y[0], y[1]);
        if (r >= kChartRadius) return std::nullopt;
        double theta = std::atan2(y[1], y[0]);
        if (theta < 0) theta += 2.0 * std::numbers::pi;
        const int j = std::min(d_ - 1, static_cast<int>(theta / step_));
        const double g = r > 0.0 ? std::cos(theta - (j + 0.5) * step_) / cos_half_ : 1.0;
        const double p[2] = {y[0] / g, y[1] / g};
        const Simplex& s = triangles_[j];
        double pos[3][2];
        for (int i = 0; i < 3; ++i) vertex_position(j, s[i], pos[i]);
        double dp[2][2];
        for (int a = 0; a < 2; ++a)
            for (int c = 0; c < 2; ++c) dp[a][c] = pos[c + 1][a] - pos[0][a];
        const double det = dp[0][0] * dp[1][1] - dp[0][1] * dp[1][0];
        const double inv[2][2] = {{dp[1][1] / det, -dp[0][1] / det}, {-dp[1][0] / det, dp[0][0] / det}};
        const double q[2] = {p[0] - pos[0][0], p[1] - pos[0][1]};
        ChartPoint out{s, {inv[0][0] * q[0] + inv[0][1] * q[1], inv[1][0] * q[0] + inv[1][1] * q[1]}};
        if (jac) {
            double dn[2][2];
            normalize_jacobian(p, j, dn);
            const double dd = dn[0][0] * dn[1][1] - dn[0][1] * dn[1][0];
            const double dm[2][2] = {{dn[1][1] / dd, -dn[0][1] / dd}, {-dn[1][0] / dd, dn[0][0] / dd}};
            jac->assign(4, 0.0);
            for (int a = 0; a < 2; ++a)
                for (int c = 0; c < 2; ++c) (*jac)[a * 2 + c] = inv[a][0] * dm[0][c] + inv[a][1] * dm[1][c];
        }
        return out;
    }

    double sigma_prime_radius() const override { return sigma_radius_; }
    double chart_radius() const override { return kChartRadius; }
    std::vector<double> singular_rays() const override {
        std::vector<double> rays;
        for (int j = 0; j < d_; ++j) rays.push_back(j * step_);
        return rays;
    }

private:
    int triangle_index(const Simplex& s) const {
        for (int j = 0; j < d_; ++j)
            if (triangles_[j] == s) return j;
        throw std::invalid_argument("simplex is not in this star");
    }

    void vertex_position(int j, int v, double out[2]) const {
        if (v == center_) {
            out[0] = out[1] = 0.0;
            return;
        }
        const int idx = v == ring_[j] ? j : j + 1;
        out[0] = kChartRadius * std::cos(idx * step_);
        out[1] = kChartRadius * std::sin(idx * step_);
    }

    std::vector<double> normalize(const double p[2]) const {
        const double r = std::hypot(p[0], p[1]);
        if (r == 0.0) return {0.0, 0.0};
        double theta = std::atan2(p[1], p[0]);
        if (theta < 0) theta += 2.0 * std::numbers::pi;
        const int j = std::min(d_ - 1, static_cast<int>(theta / step_));
        const double g = std::cos(theta - (j + 0.5) * step_) / cos_half_;
        return {p[0] * g, p[1] * g};
    }

    // D(p ↦ p·g(θ)) within sector j.
    void normalize_jacobian(const double p[2], int j, double out[2][2]) const {
        const double r2 = p[0] * p[0] + p[1] * p[1];
        const double theta = r2 > 0.0 ? std::atan2(p[1], p[0]) : (j + 0.5) * step_;
        const double rel = theta - (j + 0.5) * step_;
        const double g = std::cos(rel) / cos_half_;
        const double gp = -std::sin(rel) / cos_half_;
        const double grad[2] = {r2 > 0.0 ? -p[1] / r2 : 0.0, r2 > 0.0 ? p[0] / r2 : 0.0};
        for (int a = 0; a < 2; ++a)
            for (int c = 0; c < 2; ++c) out[a][c] = (a == c ? g : 0.0) + p[a] * gp * grad[c];
    }

    int center_;
    std::vector<int> ring_;
    std::vector<Simplex> triangles_;
    int d_ = 0;
    double step_ = 0.0;
    double cos_half_ = 1.0;
    double sigma_radius_ = 0.0;
};

}  // namespace

std::unique_ptr<StarChart> make_segment_chart(const SimplicialComplex& k, int vertex) {
    std::vector<int> nbrs;
    for (const auto& e : k.simplices(1))
        if (e[0] == vertex || e[1] == vertex) nbrs.push_back(e[0] == vertex ? e[1] : e[0]);
    if (nbrs.size() != 2) throw std::invalid_argument("star of vertex " + std::to_string(vertex) + " is not a segment");
    for (const auto& s : k.maximal_simplices())
        if (s.size() != 2 && std::binary_search(s.begin(), s.end(), vertex))
            throw std::invalid_argument("star of vertex " + std::to_string(vertex) + " is not a segment");
    std::sort(nbrs.begin(), nbrs.end());
    auto edge = [&](int other) { return vertex < other ? Simplex{vertex, other} : Simplex{other, vertex}; };
    return std::make_unique<SegmentChart>(vertex, edge(nbrs[0]), edge(nbrs[1]));
}

std::unique_ptr<StarChart> make_disk_chart(const SimplicialComplex& k, int vertex) {
    std::map<int, std::vector<int>> link;
    for (const auto& s : k.maximal_simplices()) {
        if (!std::binary_search(s.begin(), s.end(), vertex)) continue;
        if (s.size() != 3) throw std::invalid_argument("star of vertex " + std::to_string(vertex) + " is not a disk");
        std::vector<int> other;
        for (int v : s)
            if (v != vertex) other.push_back(v);
        link[other[0]].push_back(other[1]);
        link[other[1]].push_back(other[0]);
    }
    if (link.size() < 3) throw std::invalid_argument("star of vertex " + std::to_string(vertex) + " is not a disk");
    for (const auto& [v, n] : link)
        if (n.size() != 2) throw std::invalid_argument("star of vertex " + std::to_string(vertex) + " is not a disk");
    std::vector<int> ring{link.begin()->first};
    int prev = -1, cur = ring.front();
    int next = std::min(link[cur][0], link[cur][1]);
    while (next != ring.front()) {
        ring.push_back(next);
        prev = cur;
        cur = next;
        next = link[cur][0] == prev ? link[cur][1] : link[cur][0];
    }
    if (ring.size() != link.size()) throw std::invalid_argument("link of vertex " + std::to_string(vertex) + " is not a cycle");
    auto chart = std::make_unique<DiskChart>(vertex, ring);
    if (chart->sigma_prime_radius() >= 1.0) throw std::domain_error("chart does not place the subdivided star inside B1");
    return chart;
}

std::vector<std::unique_ptr<StarChart>> make_star_charts(const SimplicialComplex& k) {
    std::vector<std::unique_ptr<StarChart>> charts;
    for (int v : k.vertices()) {
        if (k.dim() == 1) {
            std::size_t degree = 0;
            for (const auto& e : k.simplices(1)) degree += (e[0] == v || e[1] == v) ? 1 : 0;
            if (degree == 2)
                charts.push_back(make_segment_chart(k, v));
            else
                charts.push_back(make_bouquet_chart(k, v));
        }
        else if (k.dim() == 2)
            charts.push_back(make_disk_chart(k, v));
        else
            throw std::invalid_argument("charts in dimension " + std::to_string(k.dim()) + " must be supplied by the caller");
    }
    return charts;
}

}  // namespace derham
