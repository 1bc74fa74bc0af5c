#pragma once

#include <string>
#include <vector>

#include "qck/cloud.hpp"
#include "qck/rational.hpp"
#include "qck/states.hpp"

namespace qck {

enum class TermRepresentation { probability, expectation };

// One coordinate of a correlation polytope: a single atom or a product of
// distinct atoms, evaluated per two-valued state either as 0/1 probabilities
// or as +/-1 expectations (products multiply factor values either way).
struct ObservableTerm {
    std::vector<AtomId> factors;
    TermRepresentation representation = TermRepresentation::probability;
    std::string display;

    static ObservableTerm single(AtomId atom, TermRepresentation rep);
    static ObservableTerm product(std::vector<AtomId> atoms, TermRepresentation rep);
};

// Canonical form: coprime integer coefficients, sense fixed to <=.
struct LinearInequality {
    std::vector<Int> coeffs;
    Int bound;
    bool operator==(const LinearInequality&) const = default;
};

// Canonical form: coprime integers, leading nonzero coefficient positive.
struct LinearEquality {
    std::vector<Int> coeffs;
    Int rhs;
    bool operator==(const LinearEquality&) const = default;
};

struct Polytope {
    std::vector<ObservableTerm> terms;               // coordinate labels (optional)
    std::vector<std::vector<Rational>> vertices;
    std::size_t duplicate_vertices_removed = 0;

    bool facets_computed = false;
    std::vector<LinearInequality> facets;            // sorted canonically
    std::vector<LinearEquality> equalities;          // affine hull, reduced

    std::size_t dimension() const { return vertices.empty() ? 0 : vertices.front().size(); }
};

// One vertex per state, evaluated on the given terms; duplicate coordinate
// tuples are removed (first occurrence kept) and counted.
Polytope vertices_from_states(const StateList& states, std::vector<ObservableTerm> terms);

// Deterministic local assignments of +/-1 outcomes for every (party,
// setting). Coordinates: per-party singles (when included) followed by all
// cross-party products, parties labelled A, B, C, ...
Polytope bell_vertices(const std::vector<int>& settings_per_party, TermRepresentation rep,
                       bool include_singles);

// Exact facet enumeration by the double description method. Lower-dimensional
// hulls additionally yield the affine-hull equalities; facet coefficient
// vectors are reduced modulo those equalities to the sparsest representative.
Polytope facet_enumeration(Polytope polytope);

// The reverse conversion; input must carry computed facets/equalities of a
// bounded polytope. Output vertices are sorted lexicographically.
std::vector<std::vector<Rational>> vertex_enumeration(const Polytope& polytope);

struct MembershipReport {
    struct Violation {
        std::size_t facet_index;
        Rational amount;  // a.x - bound > 0
    };
    bool inside = true;
    std::vector<Violation> violated_facets;
    std::vector<std::size_t> violated_equalities;
};

MembershipReport check_point(const Polytope& polytope, const std::vector<Rational>& point);

std::string inequality_text(const LinearInequality& f, const std::vector<ObservableTerm>& terms);
std::string equality_text(const LinearEquality& e, const std::vector<ObservableTerm>& terms);

}  // namespace qck
