#include "qck/cloud.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace qck {

namespace {

bool valid_atom_token(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        unsigned char u = static_cast<unsigned char>(c);
        if (!(std::isalnum(u) || c == '_' || c == '{' || c == '}' || c == ',' || c == '\''))
            return false;
    }
    return true;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

QuantumCloud QuantumCloud::from_contexts(std::vector<Context> contexts) {
    QuantumCloud cloud;
    std::set<std::set<AtomId>> seen;
    for (const auto& ctx : contexts) {
        if (ctx.atoms.size() < 2)
            throw std::invalid_argument("context '" + ctx.name + "' has fewer than two atoms");
        std::set<AtomId> as(ctx.atoms.begin(), ctx.atoms.end());
        if (as.size() != ctx.atoms.size())
            throw std::invalid_argument("context '" + ctx.name + "' repeats an atom");
        if (!seen.insert(as).second)
            throw std::invalid_argument("context '" + ctx.name +
                                        "' duplicates the atom set of an earlier context");
        for (const auto& id : ctx.atoms) {
            if (!cloud.index_.count(id)) {
                cloud.index_.emplace(id, cloud.atoms_.size());
                cloud.atoms_.push_back({id, std::nullopt});
            }
        }
    }
    cloud.contexts_ = std::move(contexts);
    cloud.atom_contexts_.resize(cloud.atoms_.size());
    for (std::size_t c = 0; c < cloud.contexts_.size(); ++c)
        for (const auto& id : cloud.contexts_[c].atoms)
            cloud.atom_contexts_[cloud.index_.at(id)].push_back(c);
    return cloud;
}

std::size_t QuantumCloud::atom_index(const AtomId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::invalid_argument("unknown atom '" + id + "'");
    return it->second;
}

const std::vector<std::size_t>& QuantumCloud::contexts_of(std::size_t atom_index) const {
    return atom_contexts_.at(atom_index);
}

bool QuantumCloud::operator==(const QuantumCloud& other) const {
    if (atoms_.size() != other.atoms_.size() || contexts_.size() != other.contexts_.size())
        return false;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i].id != other.atoms_[i].id) return false;
    for (std::size_t c = 0; c < contexts_.size(); ++c)
        if (contexts_[c].name != other.contexts_[c].name ||
            contexts_[c].atoms != other.contexts_[c].atoms)
            return false;
    return true;
}

QuantumCloud parse_cloud(const std::string& text) {
    std::vector<Context> contexts;
    std::set<std::set<AtomId>> seen;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    int position = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;

        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw ParseError(line_no, "expected 'NAME: atom atom ...'");
        ++position;
        std::string name = trim(line.substr(0, colon));
        if (name.empty()) name = "C" + std::to_string(position);

        Context ctx{name, {}};
        std::istringstream rest(line.substr(colon + 1));
        std::string token;
        std::set<AtomId> in_context;
        while (rest >> token) {
            if (!valid_atom_token(token))
                throw ParseError(line_no, "invalid atom token '" + token + "'");
            if (!in_context.insert(token).second)
                throw ParseError(line_no, "atom '" + token + "' repeated within context");
            ctx.atoms.push_back(token);
        }
        if (ctx.atoms.size() < 2)
            throw ParseError(line_no, "context needs at least two atoms");
        if (!seen.insert(in_context).second)
            throw ParseError(line_no, "context duplicates an earlier atom set");
        contexts.push_back(std::move(ctx));
    }
    return QuantumCloud::from_contexts(std::move(contexts));
}

QuantumCloud load_cloud_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_cloud(buf.str());
}

std::string serialize_cloud(const QuantumCloud& cloud) {
    std::ostringstream out;
    for (const auto& ctx : cloud.contexts()) {
        out << ctx.name << ":";
        for (const auto& id : ctx.atoms) out << " " << id;
        out << "\n";
    }
    return out.str();
}

ValidationReport validate_cloud(const QuantumCloud& cloud) {
    ValidationReport report;
    const auto n = cloud.atom_count();

    // Union-find over atoms joined by shared contexts.
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& ctx : cloud.contexts()) {
        std::size_t root = find(cloud.atom_index(ctx.atoms[0]));
        for (const auto& id : ctx.atoms) parent[find(cloud.atom_index(id))] = root;
    }
    std::map<std::size_t, std::vector<AtomId>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(cloud.atoms()[i].id);
    for (auto& [root, members] : groups) report.components.push_back(std::move(members));
    std::sort(report.components.begin(), report.components.end(),
              [&](const auto& a, const auto& b) {
                  return cloud.atom_index(a.front()) < cloud.atom_index(b.front());
              });

    const auto& ctxs = cloud.contexts();
    for (std::size_t i = 0; i < ctxs.size(); ++i) {
        std::set<AtomId> si(ctxs[i].atoms.begin(), ctxs[i].atoms.end());
        for (std::size_t j = i + 1; j < ctxs.size(); ++j) {
            std::vector<AtomId> shared;
            for (const auto& id : ctxs[j].atoms)
                if (si.count(id)) shared.push_back(id);
            if (shared.size() >= 2)
                report.shared_pairs.push_back({ctxs[i].name, ctxs[j].name, std::move(shared)});
        }
    }
    return report;
}

MergeResult merge_clouds(const QuantumCloud& a, const QuantumCloud& b,
                         const std::map<AtomId, AtomId>& identify) {
    std::set<AtomId> targets;
    for (const auto& [from, to] : identify) {
        if (!b.has_atom(from)) throw std::invalid_argument("unknown atom '" + from + "' in b");
        if (!a.has_atom(to)) throw std::invalid_argument("unknown atom '" + to + "' in a");
        if (!targets.insert(to).second)
            throw std::invalid_argument("identification maps two atoms of b onto '" + to + "'");
    }
    for (const auto& atom : b.atoms()) {
        if (!identify.count(atom.id) && a.has_atom(atom.id))
            throw std::invalid_argument("atom '" + atom.id +
                                        "' of b collides with a; identify it explicitly");
    }

    auto rename = [&](const AtomId& id) {
        auto it = identify.find(id);
        return it == identify.end() ? id : it->second;
    };

    std::vector<Context> merged = a.contexts();
    std::set<std::set<AtomId>> seen;
    for (const auto& ctx : merged) seen.insert({ctx.atoms.begin(), ctx.atoms.end()});

    std::size_t dropped = 0;
    for (const auto& ctx : b.contexts()) {
        Context remapped{ctx.name, {}};
        for (const auto& id : ctx.atoms) remapped.atoms.push_back(rename(id));
        std::set<AtomId> as(remapped.atoms.begin(), remapped.atoms.end());
        if (as.size() != remapped.atoms.size())
            throw std::invalid_argument("identification collapses context '" + ctx.name +
                                        "' onto fewer atoms");
        if (!seen.insert(as).second) {
            ++dropped;
            continue;
        }
        merged.push_back(std::move(remapped));
    }
    return {QuantumCloud::from_contexts(std::move(merged)), dropped};
}

}  // namespace qck
