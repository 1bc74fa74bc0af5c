#pragma once

#include <map>
#include <string>
#include <vector>

#include "qck/cloud.hpp"
#include "qck/linalg.hpp"

namespace qck {

// Module-wide default tolerances; every operation takes an override.
constexpr double kNormTol = 1e-12;
constexpr double kOrthonormalTol = 1e-10;
constexpr double kDoublyStochasticTol = 1e-9;

using StateVec = std::vector<Complex>;

// Conjugate-linear in the first argument.
Complex inner(const StateVec& a, const StateVec& b);
double norm(const StateVec& v);

// Per-atom vectors of one shared dimension, claimed as a faithful orthogonal
// representation of a cloud.
struct VectorRepresentation {
    std::map<AtomId, StateVec> vectors;
};

// Vector file format: "atom: c1 c2 ... cd" with decimal, a/b rational or
// a+bi complex components; '#' comments and blank lines ignored.
VectorRepresentation parse_vectors(const std::string& text);
VectorRepresentation load_vector_file(const std::string& path);

Complex parse_complex(const std::string& token);

// Whitespace-separated rows of complex entries, one row per line.
Matrix load_matrix_file(const std::string& path);
Matrix parse_matrix(const std::string& text);

struct ForReport {
    struct PairValue {
        AtomId a;
        AtomId b;
        double value;
    };
    // Same-context pairs with |<u|v>| above tau.
    std::vector<PairValue> orthogonality_failures;
    // Distinct atoms with |<u|v>| / (|u||v|) above 1 - tau.
    std::vector<PairValue> collinearity_failures;
    // Strict mode only: non-adjacent pairs that happen to be orthogonal.
    std::vector<PairValue> accidental_orthogonalities;
    bool pass = false;
};

ForReport verify_for(const QuantumCloud& cloud, const VectorRepresentation& rep,
                     double tau = kOrthonormalTol, bool strict = false);

// Squared overlaps of a unit state with a complete orthonormal basis.
std::vector<double> born_probabilities(const StateVec& psi, const std::vector<StateVec>& basis,
                                       double tol = kOrthonormalTol);

// P[i][j] = |<e_i|f_j>|^2 for two complete orthonormal bases; doubly
// stochastic within kDoublyStochasticTol.
std::vector<std::vector<double>> transition_matrix(const std::vector<StateVec>& basis_a,
                                                   const std::vector<StateVec>& basis_b,
                                                   double tol = kOrthonormalTol);

// Trace(E R F R) for rank-1 projectors E, F and a positive diagonal R with
// Trace(R^2) = n and Trace(E R^2) = 1. R = identity reduces to Trace(E F).
double trace_form_probability(const Matrix& projector_e, const Matrix& projector_f,
                              const Matrix& r_diagonal);

struct OperatorTerm {
    double coefficient;
    std::vector<Matrix> factors;  // one per party, combined by tensor product
};

// B = sum_k c_k (O_k1 x O_k2 x ...); Hermitian when the factors are.
Matrix assemble_operator(const std::vector<OperatorTerm>& terms);

struct QuantumBound {
    double min_eigenvalue;
    double max_eigenvalue;
};

// Extreme eigenvalues of a Hermitian operator, with the eigenpair residual
// verified to ||Bv - lambda v|| <= 1e-9 ||v||.
QuantumBound quantum_bound(const Matrix& b);

}  // namespace qck
