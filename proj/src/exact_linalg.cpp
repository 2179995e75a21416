#include "derham/exact_linalg.hpp"

#include <stdexcept>

namespace derham {

RrefResult rref(RationalMatrix m, std::size_t cols) {
    for (const auto& row : m)
        if (row.size() != cols) throw std::invalid_argument("matrix rows differ in length");
    RrefResult res;
    std::size_t lead = 0;
    for (std::size_t c = 0; c < cols && lead < m.size(); ++c) {
        std::size_t p = lead;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[lead]);
        const Rational inv = 1 / m[lead][c];
        for (std::size_t j = c; j < cols; ++j) m[lead][j] *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == lead || m[r][c] == 0) continue;
            const Rational f = m[r][c];
            for (std::size_t j = c; j < cols; ++j)
                if (m[lead][j] != 0) m[r][j] -= f * m[lead][j];
        }
        res.pivots.push_back(static_cast<int>(c));
        ++lead;
    }
    m.resize(lead);
    res.reduced = std::move(m);
    return res;
}

std::size_t rank(const RationalMatrix& m, std::size_t cols) { return rref(m, cols).pivots.size(); }

std::vector<std::vector<Rational>> nullspace(const RationalMatrix& m, std::size_t cols) {
    const auto r = rref(m, cols);
    std::vector<bool> pivot(cols, false);
    for (int c : r.pivots) pivot[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (pivot[f]) continue;
        std::vector<Rational> v(cols, Rational(0));
        v[f] = 1;
        for (std::size_t i = 0; i < r.pivots.size(); ++i) v[r.pivots[i]] = -r.reduced[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<Rational>> solve(const RationalMatrix& a, const std::vector<Rational>& b, std::size_t cols) {
    if (a.size() != b.size()) throw std::invalid_argument("right-hand side length differs from row count");
    RationalMatrix aug = a;
    for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
    const auto r = rref(std::move(aug), cols + 1);
    if (!r.pivots.empty() && r.pivots.back() == static_cast<int>(cols)) return std::nullopt;
    std::vector<Rational> x(cols, Rational(0));
    for (std::size_t i = 0; i < r.pivots.size(); ++i) x[r.pivots[i]] = r.reduced[i][cols];
    return x;
}

}  // namespace derham
