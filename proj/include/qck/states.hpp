#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qck/cloud.hpp"

namespace qck {

// exclusive: exactly one atom true per context. nonexclusive: no per-context
// constraint at all.
enum class StateMode { exclusive, nonexclusive };

// Complete, duplicate-free list of two-valued states in canonical order:
// lexicographic over atoms in cloud order, value 1 before 0.
class StateList {
public:
    StateList(QuantumCloud cloud, StateMode mode, std::vector<std::uint8_t> flat,
              std::size_t count);

    const QuantumCloud& cloud() const { return cloud_; }
    StateMode mode() const { return mode_; }
    std::size_t size() const { return count_; }

    int value(std::size_t state, std::size_t atom_index) const {
        return flat_[state * cloud_.atom_count() + atom_index];
    }
    int value(std::size_t state, const AtomId& id) const {
        return value(state, cloud_.atom_index(id));
    }
    std::span<const std::uint8_t> row(std::size_t state) const {
        return {flat_.data() + state * cloud_.atom_count(), cloud_.atom_count()};
    }

private:
    QuantumCloud cloud_;
    StateMode mode_;
    std::size_t count_;
    std::vector<std::uint8_t> flat_;
};

// Exclusive mode enumerates by backtracking with unit propagation; the
// result does not depend on thread count or platform. Nonexclusive mode
// walks all 2^n assignments and refuses clouds with more than 20 atoms.
StateList enumerate_states(const QuantumCloud& cloud, StateMode mode);

struct SeparabilityReport {
    bool separating = true;
    // Equivalence classes (size >= 2) of atoms no state tells apart.
    std::vector<std::vector<AtomId>> classes;
};

SeparabilityReport is_separating(const StateList& states);

// Per-atom sets of 1-based state indices assigning the atom value 1.
struct PartitionLogic {
    std::vector<std::vector<int>> labels;  // indexed like cloud.atoms()
    std::string label_text(std::size_t atom_index) const;
};

// Requires an exclusive-mode state list.
PartitionLogic partition_logic(const StateList& states);

enum class TerminalVerdict { TIFS, TITS, BOTH_VALUES_OCCUR, NO_STATE_ON_SOURCE };

std::string to_string(TerminalVerdict v);

struct TerminalClassification {
    AtomId source;
    AtomId target;
    TerminalVerdict verdict;
    // Counts among the states assigning the source value 1.
    std::size_t target_one_count = 0;
    std::size_t target_zero_count = 0;
};

TerminalClassification classify_terminals(const StateList& states, const AtomId& source,
                                          const AtomId& target);

struct Propagation {
    bool contradiction = false;
    std::string detail;                // reason, when contradictory
    std::map<AtomId, int> closure;     // fixed point, including the inputs
};

// Closes a partial assignment under the two unit-propagation rules: a 1
// forces 0 on its context mates, and a context with all but one atom 0
// forces the last one to 1. Reports a contradiction if a context acquires
// two 1s or all 0s.
Propagation propagate_partial(const QuantumCloud& cloud,
                              const std::map<AtomId, int>& assignment);

}  // namespace qck
