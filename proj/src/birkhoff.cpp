#include "qck/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace qck {

namespace {

// Kuhn's augmenting-path matching over the support graph, rows and columns
// visited in ascending index order so the result is deterministic.
bool find_matching(const std::vector<std::vector<bool>>& support,
                   std::vector<std::size_t>& row_to_col) {
    const std::size_t n = support.size();
    std::vector<std::size_t> col_to_row(n, n);
    row_to_col.assign(n, n);

    std::vector<bool> visited;
    std::function<bool(std::size_t)> augment = [&](std::size_t row) {
        for (std::size_t col = 0; col < n; ++col) {
            if (!support[row][col] || visited[col]) continue;
            visited[col] = true;
            if (col_to_row[col] == n || augment(col_to_row[col])) {
                row_to_col[row] = col;
                col_to_row[col] = row;
                return true;
            }
        }
        return false;
    };

    for (std::size_t row = 0; row < n; ++row) {
        visited.assign(n, false);
        if (!augment(row)) return false;
    }
    return true;
}

// Removes affinely dependent terms until k fits the Marcus-Ree bound. The
// permutation matrices span an ((n-1)^2 + 1)-dimensional affine space, so
// any longer list carries a dependence that can be shifted away without
// leaving the simplex of weights.
void caratheodory_reduce(BirkhoffDecomposition& dec) {
    const std::size_t n = dec.n;
    const std::size_t bound = birkhoff_term_bound(n);
    while (dec.terms.size() > bound) {
        const std::size_t k = dec.terms.size();
        const std::size_t rows = n * n + 1;
        // columns: flattened permutation matrices plus an all-ones row
        std::vector<std::vector<double>> a(rows, std::vector<double>(k, 0.0));
        for (std::size_t t = 0; t < k; ++t) {
            for (std::size_t i = 0; i < n; ++i)
                a[i * n + dec.terms[t].permutation[i]][t] = 1.0;
            a[n * n][t] = 1.0;
        }
        // Gaussian elimination to find a kernel vector.
        std::vector<std::size_t> pivot_col;
        std::size_t r = 0;
        std::vector<bool> is_pivot(k, false);
        for (std::size_t c = 0; c < k && r < rows; ++c) {
            std::size_t sel = r;
            double best = 0.0;
            for (std::size_t i = r; i < rows; ++i)
                if (std::abs(a[i][c]) > best) {
                    best = std::abs(a[i][c]);
                    sel = i;
                }
            if (best < 1e-9) continue;
            std::swap(a[r], a[sel]);
            for (std::size_t i = 0; i < rows; ++i) {
                if (i == r || a[i][c] == 0.0) continue;
                double f = a[i][c] / a[r][c];
                for (std::size_t j = c; j < k; ++j) a[i][j] -= f * a[r][j];
            }
            pivot_col.push_back(c);
            is_pivot[c] = true;
            ++r;
        }
        std::size_t free_col = k;
        for (std::size_t c = 0; c < k; ++c)
            if (!is_pivot[c]) {
                free_col = c;
                break;
            }
        if (free_col == k) return;  // numerically independent; bound already met in theory

        std::vector<double> mu(k, 0.0);
        mu[free_col] = 1.0;
        for (std::size_t p = pivot_col.size(); p-- > 0;) {
            std::size_t c = pivot_col[p];
            mu[c] = -a[p][free_col] / a[p][c];
        }
        bool has_positive = false;
        for (double v : mu) has_positive |= v > 0.0;
        if (!has_positive)
            for (double& v : mu) v = -v;

        double step = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < k; ++t)
            if (mu[t] > 1e-15) step = std::min(step, dec.terms[t].weight / mu[t]);
        std::vector<BirkhoffTerm> kept;
        bool removed = false;
        for (std::size_t t = 0; t < k; ++t) {
            double w = dec.terms[t].weight - step * mu[t];
            if (!removed && w <= 1e-13) {
                removed = true;
                continue;
            }
            dec.terms[t].weight = std::max(w, 0.0);
            kept.push_back(std::move(dec.terms[t]));
        }
        if (!removed) return;  // numerical guard; should not happen
        dec.terms = std::move(kept);
    }
}

}  // namespace

std::size_t birkhoff_term_bound(std::size_t n) { return (n - 1) * (n - 1) + 1; }

bool is_doubly_stochastic(const DoubleMatrix& m, double tau) {
    const std::size_t n = m.size();
    if (n == 0) return false;
    for (const auto& row : m) {
        if (row.size() != n) return false;
        for (double v : row)
            if (v < -tau || !std::isfinite(v)) return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0, col = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row += m[i][j];
            col += m[j][i];
        }
        if (std::abs(row - 1.0) > tau || std::abs(col - 1.0) > tau) return false;
    }
    return true;
}

BirkhoffDecomposition birkhoff_decompose(const DoubleMatrix& m, double tau) {
    const std::size_t n = m.size();
    if (!is_doubly_stochastic(m, tau))
        throw std::invalid_argument("matrix is not doubly stochastic within tolerance");

    DoubleMatrix residual = m;
    BirkhoffDecomposition dec;
    dec.n = n;

    const double stop = static_cast<double>(n) * tau;
    double total = 0.0;
    for (std::size_t iter = 0; iter <= n * n; ++iter) {
        double max_entry = 0.0;
        for (const auto& row : residual)
            for (double v : row) max_entry = std::max(max_entry, v);
        if (max_entry <= stop || total >= 1.0 - stop) break;

        std::vector<std::vector<bool>> support(n, std::vector<bool>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) support[i][j] = residual[i][j] > tau;

        std::vector<std::size_t> pi;
        if (!find_matching(support, pi))
            throw std::runtime_error(
                "no perfect matching on the positive support; input is farther than the "
                "tolerance from the Birkhoff polytope");

        double lambda = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) lambda = std::min(lambda, residual[i][pi[i]]);
        for (std::size_t i = 0; i < n; ++i) {
            residual[i][pi[i]] -= lambda;
            if (residual[i][pi[i]] < 0.0) residual[i][pi[i]] = 0.0;
        }
        dec.terms.push_back({lambda, std::move(pi)});
        total += lambda;
    }

    // Merge any repeated permutation (possible only through tolerance slack).
    std::vector<BirkhoffTerm> merged;
    for (auto& term : dec.terms) {
        bool found = false;
        for (auto& existing : merged)
            if (existing.permutation == term.permutation) {
                existing.weight += term.weight;
                found = true;
                break;
            }
        if (!found) merged.push_back(std::move(term));
    }
    dec.terms = std::move(merged);

    caratheodory_reduce(dec);

    double sum = 0.0;
    for (const auto& t : dec.terms) sum += t.weight;
    if (sum <= 0.0) throw std::runtime_error("decomposition lost all weight");
    for (auto& t : dec.terms) t.weight /= sum;
    return dec;
}

DoubleMatrix reconstruct(const BirkhoffDecomposition& dec) {
    DoubleMatrix m(dec.n, std::vector<double>(dec.n, 0.0));
    for (const auto& term : dec.terms) {
        // Pi = sum_j e_j e_{pi(j)}^T expanded over the canonical basis.
        for (std::size_t j = 0; j < dec.n; ++j) m[j][term.permutation[j]] += term.weight;
    }
    return m;
}

}  // namespace qck
