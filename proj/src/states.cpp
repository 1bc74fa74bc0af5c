#include "qck/states.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace qck {

namespace {

// Watches per-context counts of assigned values and propagates the two unit
// rules through a trail that supports backtracking.
class Propagator {
public:
    explicit Propagator(const QuantumCloud& cloud) : cloud_(cloud) {
        const auto n = cloud.atom_count();
        values_.assign(n, -1);
        ctx_atoms_.reserve(cloud.context_count());
        for (const auto& ctx : cloud.contexts()) {
            std::vector<std::size_t> idx;
            idx.reserve(ctx.atoms.size());
            for (const auto& id : ctx.atoms) idx.push_back(cloud.atom_index(id));
            ctx_atoms_.push_back(std::move(idx));
        }
        ones_.assign(cloud.context_count(), 0);
        zeros_.assign(cloud.context_count(), 0);
    }

    // Assigns and propagates to a fixed point. Returns false on
    // contradiction; the trail keeps whatever got assigned so undo_to()
    // still restores cleanly.
    bool assign(std::size_t atom, int v) {
        std::deque<std::pair<std::size_t, int>> queue{{atom, v}};
        while (!queue.empty()) {
            auto [a, val] = queue.front();
            queue.pop_front();
            if (values_[a] != -1) {
                if (values_[a] != val) {
                    conflict_ = "atom '" + cloud_.atoms()[a].id + "' forced to both 0 and 1";
                    return false;
                }
                continue;
            }
            values_[a] = static_cast<std::int8_t>(val);
            trail_.push_back(a);
            // Counters first, checks second: undo_to() reverses every
            // increment of a trailed atom, so the two must never diverge,
            // even when a conflict aborts this call midway.
            for (std::size_t c : cloud_.contexts_of(a)) {
                if (val == 1)
                    ++ones_[c];
                else
                    ++zeros_[c];
            }
            for (std::size_t c : cloud_.contexts_of(a)) {
                const auto& members = ctx_atoms_[c];
                if (val == 1) {
                    if (ones_[c] > 1) {
                        conflict_ = "context '" + cloud_.contexts()[c].name + "' has two atoms set to 1";
                        return false;
                    }
                    for (std::size_t m : members)
                        if (values_[m] == -1) queue.emplace_back(m, 0);
                } else {
                    if (static_cast<std::size_t>(zeros_[c]) == members.size()) {
                        conflict_ = "context '" + cloud_.contexts()[c].name + "' has all atoms set to 0";
                        return false;
                    }
                    if (static_cast<std::size_t>(zeros_[c]) == members.size() - 1 && ones_[c] == 0) {
                        for (std::size_t m : members)
                            if (values_[m] == -1) queue.emplace_back(m, 1);
                    }
                }
            }
        }
        return true;
    }

    std::size_t mark() const { return trail_.size(); }

    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            std::size_t a = trail_.back();
            trail_.pop_back();
            int v = values_[a];
            values_[a] = -1;
            for (std::size_t c : cloud_.contexts_of(a)) {
                if (v == 1)
                    --ones_[c];
                else
                    --zeros_[c];
            }
        }
    }

    int value(std::size_t a) const { return values_[a]; }
    std::size_t assigned_count() const { return trail_.size(); }
    const std::string& conflict() const { return conflict_; }

private:
    const QuantumCloud& cloud_;
    std::vector<std::int8_t> values_;
    std::vector<std::vector<std::size_t>> ctx_atoms_;
    std::vector<int> ones_, zeros_;
    std::vector<std::size_t> trail_;
    std::string conflict_;
};

void enumerate_exclusive(Propagator& prop, std::size_t n, std::size_t next,
                         std::vector<std::uint8_t>& flat, std::size_t& count) {
    if (prop.assigned_count() == n) {
        for (std::size_t a = 0; a < n; ++a)
            flat.push_back(static_cast<std::uint8_t>(prop.value(a)));
        ++count;
        return;
    }
    std::size_t atom = next;
    while (prop.value(atom) != -1) ++atom;
    for (int v : {1, 0}) {
        auto m = prop.mark();
        if (prop.assign(atom, v)) enumerate_exclusive(prop, n, atom + 1, flat, count);
        prop.undo_to(m);
    }
}

}  // namespace

StateList::StateList(QuantumCloud cloud, StateMode mode, std::vector<std::uint8_t> flat,
                     std::size_t count)
    : cloud_(std::move(cloud)), mode_(mode), count_(count), flat_(std::move(flat)) {}

StateList enumerate_states(const QuantumCloud& cloud, StateMode mode) {
    const std::size_t n = cloud.atom_count();
    std::vector<std::uint8_t> flat;
    std::size_t count = 0;

    if (mode == StateMode::exclusive) {
        Propagator prop(cloud);
        enumerate_exclusive(prop, n, 0, flat, count);
    } else {
        if (n > 20)
            throw std::invalid_argument(
                "nonexclusive enumeration over " + std::to_string(n) +
                " atoms would produce 2^" + std::to_string(n) + " states; limit is 20");
        flat.reserve((std::size_t{1} << n) * n);
        for (std::uint64_t mask = (std::uint64_t{1} << n); mask-- > 0;) {
            for (std::size_t a = 0; a < n; ++a)
                flat.push_back(static_cast<std::uint8_t>((mask >> (n - 1 - a)) & 1));
            ++count;
        }
    }
    return StateList(cloud, mode, std::move(flat), count);
}

SeparabilityReport is_separating(const StateList& states) {
    const auto& cloud = states.cloud();
    const std::size_t n = cloud.atom_count();
    SeparabilityReport report;

    // Group atoms by their full value column across all states.
    std::map<std::vector<std::uint8_t>, std::vector<std::size_t>> columns;
    for (std::size_t a = 0; a < n; ++a) {
        std::vector<std::uint8_t> col(states.size());
        for (std::size_t s = 0; s < states.size(); ++s)
            col[s] = static_cast<std::uint8_t>(states.value(s, a));
        columns[std::move(col)].push_back(a);
    }
    std::vector<std::vector<std::size_t>> classes;
    for (auto& [col, members] : columns)
        if (members.size() >= 2) classes.push_back(members);
    std::sort(classes.begin(), classes.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    for (const auto& cls : classes) {
        std::vector<AtomId> ids;
        for (auto a : cls) ids.push_back(cloud.atoms()[a].id);
        report.classes.push_back(std::move(ids));
    }
    report.separating = report.classes.empty();
    return report;
}

std::string PartitionLogic::label_text(std::size_t atom_index) const {
    std::ostringstream out;
    out << "{";
    const auto& ids = labels.at(atom_index);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out << ",";
        out << ids[i];
    }
    out << "}";
    return out.str();
}

PartitionLogic partition_logic(const StateList& states) {
    if (states.mode() != StateMode::exclusive)
        throw std::invalid_argument("partition logic requires exclusive-mode states");
    PartitionLogic logic;
    logic.labels.resize(states.cloud().atom_count());
    for (std::size_t s = 0; s < states.size(); ++s)
        for (std::size_t a = 0; a < states.cloud().atom_count(); ++a)
            if (states.value(s, a) == 1) logic.labels[a].push_back(static_cast<int>(s) + 1);
    return logic;
}

std::string to_string(TerminalVerdict v) {
    switch (v) {
        case TerminalVerdict::TIFS: return "TIFS";
        case TerminalVerdict::TITS: return "TITS";
        case TerminalVerdict::BOTH_VALUES_OCCUR: return "BOTH_VALUES_OCCUR";
        case TerminalVerdict::NO_STATE_ON_SOURCE: return "NO_STATE_ON_SOURCE";
    }
    return "?";
}

TerminalClassification classify_terminals(const StateList& states, const AtomId& source,
                                          const AtomId& target) {
    if (source == target) throw std::invalid_argument("source and target must differ");
    const std::size_t si = states.cloud().atom_index(source);
    const std::size_t ti = states.cloud().atom_index(target);

    TerminalClassification result{source, target, TerminalVerdict::NO_STATE_ON_SOURCE, 0, 0};
    for (std::size_t s = 0; s < states.size(); ++s) {
        if (states.value(s, si) != 1) continue;
        if (states.value(s, ti) == 1)
            ++result.target_one_count;
        else
            ++result.target_zero_count;
    }
    if (result.target_one_count + result.target_zero_count == 0)
        result.verdict = TerminalVerdict::NO_STATE_ON_SOURCE;
    else if (result.target_one_count == 0)
        result.verdict = TerminalVerdict::TIFS;
    else if (result.target_zero_count == 0)
        result.verdict = TerminalVerdict::TITS;
    else
        result.verdict = TerminalVerdict::BOTH_VALUES_OCCUR;
    return result;
}

Propagation propagate_partial(const QuantumCloud& cloud,
                              const std::map<AtomId, int>& assignment) {
    Propagation result;
    Propagator prop(cloud);
    for (const auto& [id, v] : assignment) {
        if (v != 0 && v != 1)
            throw std::invalid_argument("assignment values must be 0 or 1");
        if (!prop.assign(cloud.atom_index(id), v)) {
            result.contradiction = true;
            result.detail = prop.conflict();
            return result;
        }
    }
    for (std::size_t a = 0; a < cloud.atom_count(); ++a)
        if (prop.value(a) != -1) result.closure[cloud.atoms()[a].id] = prop.value(a);
    return result;
}

}  // namespace qck
