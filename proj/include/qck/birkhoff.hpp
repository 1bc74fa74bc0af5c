#pragma once

#include <cstddef>
#include <vector>

namespace qck {

using DoubleMatrix = std::vector<std::vector<double>>;

struct BirkhoffTerm {
    double weight;                    // > 0
    std::vector<std::size_t> permutation;  // images, 0-based: row i pairs with column pi[i]
};

struct BirkhoffDecomposition {
    std::size_t n = 0;
    std::vector<BirkhoffTerm> terms;  // pairwise distinct permutations, weights sum to 1
};

bool is_doubly_stochastic(const DoubleMatrix& m, double tau);

// Greedy Birkhoff-von Neumann decomposition: repeatedly match the positive
// support, subtract the minimum matched entry, zero it, repeat. A trailing
// Caratheodory reduction keeps the term count within (n-1)^2 + 1.
// Throws when m is not doubly stochastic within tau, or when the support
// admits no perfect matching (input too far from the Birkhoff polytope).
BirkhoffDecomposition birkhoff_decompose(const DoubleMatrix& m, double tau = 1e-9);

// Sum of weight * permutation matrix, each permutation expanded over the
// canonical basis dyads.
DoubleMatrix reconstruct(const BirkhoffDecomposition& dec);

// Marcus-Ree term bound (n-1)^2 + 1.
std::size_t birkhoff_term_bound(std::size_t n);

}  // namespace qck
