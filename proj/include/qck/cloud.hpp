#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qck {

using AtomId = std::string;

struct Atom {
    AtomId id;
    std::optional<std::string> display_label;
};

// An ordered list of at least two distinct atoms. Two contexts in one cloud
// never carry the same atom set.
struct Context {
    std::string name;
    std::vector<AtomId> atoms;
};

// A finite hypergraph of measurement contexts intertwined by shared atoms.
// Immutable after construction; safe to share across threads.
class QuantumCloud {
public:
    QuantumCloud() = default;

    // Atom order is first appearance across the context list. Throws
    // std::invalid_argument on contexts shorter than two atoms, repeated
    // atoms within a context, or repeated atom sets.
    static QuantumCloud from_contexts(std::vector<Context> contexts);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<Context>& contexts() const { return contexts_; }

    std::size_t atom_count() const { return atoms_.size(); }
    std::size_t context_count() const { return contexts_.size(); }

    bool has_atom(const AtomId& id) const { return index_.count(id) != 0; }
    std::size_t atom_index(const AtomId& id) const;

    // Indices of the contexts containing the given atom (the intertwine map).
    const std::vector<std::size_t>& contexts_of(std::size_t atom_index) const;

    bool operator==(const QuantumCloud& other) const;

private:
    std::vector<Atom> atoms_;
    std::vector<Context> contexts_;
    std::map<AtomId, std::size_t> index_;
    std::vector<std::vector<std::size_t>> atom_contexts_;
};

struct ParseError : std::runtime_error {
    ParseError(int line_number, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_number) + ": " + what),
          line(line_number) {}
    int line;
};

// Line-oriented cloud format: "NAME: atom atom ...", '#' comments, blank
// lines ignored, LF or CRLF. Unnamed contexts (": a b c") are auto-named
// C1, C2, ... by position.
QuantumCloud parse_cloud(const std::string& text);
QuantumCloud load_cloud_file(const std::string& path);

// Emits contexts in stored order, atoms space-separated, one per line.
std::string serialize_cloud(const QuantumCloud& cloud);

struct SharedPairWarning {
    std::string context_a;
    std::string context_b;
    std::vector<AtomId> shared;
};

struct ValidationReport {
    std::vector<AtomId> isolated_atoms;  // empty by construction
    std::vector<SharedPairWarning> shared_pairs;
    std::vector<std::vector<AtomId>> components;
};

// Structural diagnostics: connected components and context pairs sharing two
// or more atoms (which any vector realization would force to coincide).
// Pure; reports, never throws.
ValidationReport validate_cloud(const QuantumCloud& cloud);

struct MergeResult {
    QuantumCloud cloud;
    std::size_t deduplicated_contexts = 0;
};

// Fuses cloud b onto cloud a. identify maps b atom ids injectively onto a
// atom ids; unmapped b atoms keep their ids and must not collide with a.
// Contexts whose atom sets coincide after fusion are dropped and counted.
MergeResult merge_clouds(const QuantumCloud& a, const QuantumCloud& b,
                         const std::map<AtomId, AtomId>& identify);

}  // namespace qck
