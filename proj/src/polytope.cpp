#include "qck/polytope.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace qck {

namespace {

using IntVec = std::vector<Int>;

Int dot(const IntVec& a, const IntVec& b) {
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

struct Ray {
    IntVec x;
    boost::dynamic_bitset<> tight;  // one bit per input row, set when row.x == 0
};

struct ConeGenerators {
    std::vector<IntVec> lineality;
    std::vector<Ray> rays;
};

// Double description with lineality handling: computes minimal generators
// (lineality basis plus extreme rays) of the cone { x : row.x >= 0 } cut out
// by the given integer rows.
ConeGenerators dual_cone_generators(const std::vector<IntVec>& rows, std::size_t dim) {
    ConeGenerators cone;
    for (std::size_t i = 0; i < dim; ++i) {
        IntVec e(dim, 0);
        e[i] = 1;
        cone.lineality.push_back(std::move(e));
    }

    const std::size_t m = rows.size();
    for (std::size_t k = 0; k < m; ++k) {
        const IntVec& h = rows[k];

        std::size_t pivot = cone.lineality.size();
        for (std::size_t i = 0; i < cone.lineality.size(); ++i) {
            if (dot(h, cone.lineality[i]) != 0) {
                pivot = i;
                break;
            }
        }

        if (pivot < cone.lineality.size()) {
            // Split one lineality direction into a ray; project the rest
            // (and all existing rays) into the hyperplane of h.
            IntVec l = std::move(cone.lineality[pivot]);
            cone.lineality.erase(cone.lineality.begin() + pivot);
            Int hl = dot(h, l);
            if (hl < 0) {
                for (auto& v : l) v = -v;
                hl = -hl;
            }
            for (auto& l2 : cone.lineality) {
                Int hl2 = dot(h, l2);
                if (hl2 == 0) continue;
                for (std::size_t i = 0; i < dim; ++i) l2[i] = hl * l2[i] - hl2 * l[i];
                normalize_gcd(l2);
            }
            for (auto& r : cone.rays) {
                Int hr = dot(h, r.x);
                if (hr != 0) {
                    for (std::size_t i = 0; i < dim; ++i) r.x[i] = hl * r.x[i] - hr * l[i];
                    normalize_gcd(r.x);
                }
                r.tight.set(k);
            }
            Ray nr;
            nr.x = std::move(l);
            nr.tight.resize(m);
            for (std::size_t i = 0; i < k; ++i) nr.tight.set(i);
            cone.rays.push_back(std::move(nr));
            continue;
        }

        // h vanishes on the lineality space: split rays by sign.
        std::vector<std::size_t> pos, neg;
        std::vector<Int> val(cone.rays.size());
        for (std::size_t i = 0; i < cone.rays.size(); ++i) {
            val[i] = dot(h, cone.rays[i].x);
            if (val[i] > 0)
                pos.push_back(i);
            else if (val[i] < 0)
                neg.push_back(i);
            else
                cone.rays[i].tight.set(k);
        }
        if (neg.empty()) continue;

        std::vector<Ray> created;
        for (std::size_t p : pos) {
            for (std::size_t q : neg) {
                auto common = cone.rays[p].tight & cone.rays[q].tight;
                bool adjacent = true;
                for (std::size_t r = 0; r < cone.rays.size(); ++r) {
                    if (r == p || r == q) continue;
                    if (common.is_subset_of(cone.rays[r].tight)) {
                        adjacent = false;
                        break;
                    }
                }
                if (!adjacent) continue;
                Ray nr;
                nr.x.resize(dim);
                // val[p] * neg - val[q] * pos lands exactly on the hyperplane.
                for (std::size_t i = 0; i < dim; ++i)
                    nr.x[i] = val[p] * cone.rays[q].x[i] - val[q] * cone.rays[p].x[i];
                normalize_gcd(nr.x);
                nr.tight = common;
                nr.tight.set(k);
                created.push_back(std::move(nr));
            }
        }
        std::vector<Ray> kept;
        kept.reserve(cone.rays.size() - neg.size() + created.size());
        for (std::size_t i = 0; i < cone.rays.size(); ++i)
            if (val[i] >= 0) kept.push_back(std::move(cone.rays[i]));
        for (auto& r : created) kept.push_back(std::move(r));
        cone.rays = std::move(kept);
    }
    return cone;
}

// Reduced integer row echelon form of the equality system (coeffs | rhs),
// pivots in the coefficient columns only. Unique for a given row space.
std::vector<IntVec> equality_rref(std::vector<IntVec> rows, std::size_t d) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < d && rank < rows.size(); ++col) {
        std::size_t sel = rank;
        while (sel < rows.size() && rows[sel][col] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[rank], rows[sel]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            Int a = rows[rank][col], b = rows[r][col];
            for (std::size_t i = 0; i <= d; ++i) rows[r][i] = a * rows[r][i] - b * rows[rank][i];
            normalize_gcd(rows[r]);
        }
        normalize_gcd(rows[rank]);
        if (rows[rank][col] < 0)
            for (auto& v : rows[rank]) v = -v;
        ++rank;
    }
    rows.resize(rank);
    std::sort(rows.begin(), rows.end(), [d](const IntVec& a, const IntVec& b) {
        auto lead = [d](const IntVec& v) {
            for (std::size_t i = 0; i < d; ++i)
                if (v[i] != 0) return i;
            return d;
        };
        return lead(a) < lead(b);
    });
    return rows;
}

// Solves the m x m rational system A t = rhs; returns false when singular.
bool solve_square(std::vector<std::vector<Rational>> a, std::vector<Rational> rhs,
                  std::vector<Rational>& t) {
    const std::size_t m = rhs.size();
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t sel = col;
        while (sel < m && a[sel][col] == 0) ++sel;
        if (sel == m) return false;
        std::swap(a[col], a[sel]);
        std::swap(rhs[col], rhs[sel]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rational f = a[r][col] / a[col][col];
            for (std::size_t i = col; i < m; ++i) a[r][i] -= f * a[col][i];
            rhs[r] -= f * rhs[col];
        }
    }
    t.resize(m);
    for (std::size_t i = 0; i < m; ++i) t[i] = rhs[i] / a[i][i];
    return true;
}

std::size_t support_size(const IntVec& coeffs, std::size_t d) {
    std::size_t s = 0;
    for (std::size_t i = 0; i < d; ++i)
        if (coeffs[i] != 0) ++s;
    return s;
}

bool lex_less(const IntVec& a, const IntVec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// A facet inequality of a lower-dimensional hull is only unique modulo the
// affine-hull equalities; pick the sparsest representative (ties broken
// lexicographically) so output is canonical.
IntVec reduce_modulo_equalities(IntVec f, const std::vector<IntVec>& eqs, std::size_t d) {
    normalize_gcd(f);
    if (eqs.empty()) return f;
    const std::size_t m = eqs.size();

    IntVec best = f;
    std::size_t best_support = support_size(f, d);

    // Iterate all m-subsets of the d coefficient columns.
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    if (m > d) return best;
    while (true) {
        std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m));
        std::vector<Rational> rhs(m);
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t c = 0; c < m; ++c) a[r][c] = Rational(eqs[c][idx[r]]);
            rhs[r] = -Rational(f[idx[r]]);
        }
        std::vector<Rational> t;
        if (solve_square(std::move(a), std::move(rhs), t)) {
            std::vector<Rational> cand(d + 1);
            for (std::size_t i = 0; i <= d; ++i) {
                cand[i] = Rational(f[i]);
                for (std::size_t c = 0; c < m; ++c) cand[i] += t[c] * Rational(eqs[c][i]);
            }
            IntVec candidate = clear_denominators(cand);
            std::size_t s = support_size(candidate, d);
            if (s < best_support || (s == best_support && lex_less(candidate, best))) {
                best = candidate;
                best_support = s;
            }
        }
        // next combination
        std::size_t pos = m;
        bool done = true;
        while (pos-- > 0) {
            if (idx[pos] != pos + d - m) {
                ++idx[pos];
                for (std::size_t j = pos + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
                done = false;
                break;
            }
        }
        if (done) break;
    }
    return best;
}

IntVec row_from_vertex(const std::vector<Rational>& v) {
    std::vector<Rational> row(v.size() + 1);
    row[0] = 1;
    for (std::size_t i = 0; i < v.size(); ++i) row[i + 1] = v[i];
    return clear_denominators(row);
}

Rational eval_term(const ObservableTerm& term, const StateList& states, std::size_t s) {
    Rational v = 1;
    for (const auto& id : term.factors) {
        int bit = states.value(s, id);
        Rational f = term.representation == TermRepresentation::probability
                         ? Rational(bit)
                         : Rational(2 * bit - 1);
        v *= f;
    }
    return v;
}

void dedupe_vertices(Polytope& p) {
    std::set<std::vector<Rational>> seen;
    std::vector<std::vector<Rational>> unique;
    for (auto& v : p.vertices) {
        if (seen.insert(v).second)
            unique.push_back(std::move(v));
        else
            ++p.duplicate_vertices_removed;
    }
    p.vertices = std::move(unique);
}

std::string coefficient_piece(const Int& c, const std::string& name, bool first) {
    std::ostringstream out;
    Int a = c < 0 ? -c : c;
    if (first)
        out << (c < 0 ? "-" : "");
    else
        out << (c < 0 ? " - " : " + ");
    if (a != 1) out << a.str() << " ";
    out << name;
    return out.str();
}

std::string linear_text(const std::vector<Int>& coeffs, const Int& rhs, const char* rel,
                        const std::vector<ObservableTerm>& terms) {
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == 0) continue;
        std::string name = i < terms.size() && !terms[i].display.empty()
                               ? terms[i].display
                               : "x" + std::to_string(i + 1);
        out << coefficient_piece(coeffs[i], name, first);
        first = false;
    }
    if (first) out << "0";
    out << " " << rel << " " << rhs.str();
    return out.str();
}

}  // namespace

ObservableTerm ObservableTerm::single(AtomId atom, TermRepresentation rep) {
    ObservableTerm t;
    t.display = (rep == TermRepresentation::probability ? "P(" : "E(") + atom + ")";
    t.factors = {std::move(atom)};
    t.representation = rep;
    return t;
}

ObservableTerm ObservableTerm::product(std::vector<AtomId> atoms, TermRepresentation rep) {
    ObservableTerm t;
    std::string joined;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i) joined += "*";
        joined += atoms[i];
    }
    t.display = (rep == TermRepresentation::probability ? "P(" : "E(") + joined + ")";
    t.factors = std::move(atoms);
    t.representation = rep;
    return t;
}

Polytope vertices_from_states(const StateList& states, std::vector<ObservableTerm> terms) {
    if (states.size() == 0) throw std::invalid_argument("state list is empty");
    for (const auto& term : terms) {
        if (term.factors.empty()) throw std::invalid_argument("term without factors");
        std::set<AtomId> distinct(term.factors.begin(), term.factors.end());
        if (distinct.size() != term.factors.size())
            throw std::invalid_argument("product factors must be distinct atoms");
        for (const auto& id : term.factors) states.cloud().atom_index(id);  // throws on unknown
    }
    Polytope p;
    p.terms = std::move(terms);
    p.vertices.reserve(states.size());
    for (std::size_t s = 0; s < states.size(); ++s) {
        std::vector<Rational> v(p.terms.size());
        for (std::size_t i = 0; i < p.terms.size(); ++i) v[i] = eval_term(p.terms[i], states, s);
        p.vertices.push_back(std::move(v));
    }
    dedupe_vertices(p);
    return p;
}

Polytope bell_vertices(const std::vector<int>& settings_per_party, TermRepresentation rep,
                       bool include_singles) {
    if (settings_per_party.empty()) throw std::invalid_argument("no parties");
    for (int s : settings_per_party)
        if (s <= 0) throw std::invalid_argument("every party needs at least one setting");
    const std::size_t parties = settings_per_party.size();
    std::size_t total = 0;
    for (int s : settings_per_party) total += static_cast<std::size_t>(s);
    if (total > 24) throw std::invalid_argument("too many settings");

    auto label = [&](std::size_t party, int setting) {
        return std::string(1, static_cast<char>('A' + party)) + std::to_string(setting + 1);
    };

    Polytope p;
    std::vector<std::pair<std::size_t, int>> singles;  // (party, setting)
    for (std::size_t pa = 0; pa < parties; ++pa)
        for (int s = 0; s < settings_per_party[pa]; ++s) singles.emplace_back(pa, s);

    if (include_singles)
        for (auto [pa, s] : singles) {
            ObservableTerm t;
            t.representation = rep;
            t.display = (rep == TermRepresentation::probability ? "P(" : "E(") + label(pa, s) + ")";
            t.factors = {label(pa, s)};
            p.terms.push_back(std::move(t));
        }

    // Full cross-party correlators: one setting chosen per party.
    std::vector<std::vector<int>> tuples;
    if (parties >= 2) {
        std::vector<int> choice(parties, 0);
        while (true) {
            tuples.push_back(choice);
            std::size_t pa = parties;
            while (pa-- > 0) {
                if (++choice[pa] < settings_per_party[pa]) break;
                choice[pa] = 0;
                if (pa == 0) goto tuples_done;
            }
        }
    }
tuples_done:
    for (const auto& tuple : tuples) {
        ObservableTerm t;
        t.representation = rep;
        std::string joined;
        for (std::size_t pa = 0; pa < parties; ++pa) {
            if (pa) joined += "*";
            joined += label(pa, tuple[pa]);
            t.factors.push_back(label(pa, tuple[pa]));
        }
        t.display = (rep == TermRepresentation::probability ? "P(" : "E(") + joined + ")";
        p.terms.push_back(std::move(t));
    }

    // Deterministic assignments, +1 branch first.
    std::map<std::pair<std::size_t, int>, std::size_t> bit_of;
    for (std::size_t i = 0; i < singles.size(); ++i) bit_of[singles[i]] = i;

    for (std::uint64_t mask = (std::uint64_t{1} << total); mask-- > 0;) {
        auto sign = [&](std::size_t pa, int s) {
            return (mask >> (total - 1 - bit_of[{pa, s}])) & 1 ? 1 : -1;
        };
        auto coord = [&](int sgn) {
            return rep == TermRepresentation::probability ? Rational(sgn > 0 ? 1 : 0)
                                                          : Rational(sgn);
        };
        std::vector<Rational> v;
        v.reserve(p.terms.size());
        if (include_singles)
            for (auto [pa, s] : singles) v.push_back(coord(sign(pa, s)));
        for (const auto& tuple : tuples) {
            if (rep == TermRepresentation::probability) {
                int all = 1;
                for (std::size_t pa = 0; pa < parties; ++pa) all &= sign(pa, tuple[pa]) > 0;
                v.push_back(Rational(all));
            } else {
                int prod = 1;
                for (std::size_t pa = 0; pa < parties; ++pa) prod *= sign(pa, tuple[pa]);
                v.push_back(Rational(prod));
            }
        }
        p.vertices.push_back(std::move(v));
    }
    dedupe_vertices(p);
    return p;
}

Polytope facet_enumeration(Polytope polytope) {
    if (polytope.vertices.empty()) throw std::invalid_argument("no vertices");
    dedupe_vertices(polytope);
    const std::size_t d = polytope.dimension();
    for (const auto& v : polytope.vertices)
        if (v.size() != d) throw std::invalid_argument("inconsistent vertex dimensions");

    std::vector<IntVec> rows;
    rows.reserve(polytope.vertices.size());
    for (const auto& v : polytope.vertices) rows.push_back(row_from_vertex(v));

    ConeGenerators cone = dual_cone_generators(rows, d + 1);

    // Lineality directions w satisfy w0 + w.x = 0 on every vertex: affine
    // hull equalities  w' . x = -w0.
    std::vector<IntVec> eq_rows;
    for (const auto& l : cone.lineality) {
        IntVec row(d + 1);
        for (std::size_t i = 0; i < d; ++i) row[i] = l[i + 1];
        row[d] = -l[0];
        eq_rows.push_back(std::move(row));
    }
    eq_rows = equality_rref(std::move(eq_rows), d);

    polytope.equalities.clear();
    for (const auto& e : eq_rows) {
        LinearEquality eq;
        eq.coeffs.assign(e.begin(), e.begin() + d);
        eq.rhs = e[d];
        polytope.equalities.push_back(std::move(eq));
    }

    // Extreme rays w with a nonempty tight set are facets  (-w') . x <= w0.
    std::vector<IntVec> facet_vectors;
    for (const auto& ray : cone.rays) {
        if (!ray.tight.any()) continue;  // interior direction of a 0-dim hull
        IntVec f(d + 1);
        for (std::size_t i = 0; i < d; ++i) f[i] = -ray.x[i + 1];
        f[d] = ray.x[0];
        facet_vectors.push_back(reduce_modulo_equalities(std::move(f), eq_rows, d));
    }
    std::sort(facet_vectors.begin(), facet_vectors.end(), lex_less);
    facet_vectors.erase(std::unique(facet_vectors.begin(), facet_vectors.end()),
                        facet_vectors.end());

    polytope.facets.clear();
    for (const auto& f : facet_vectors) {
        LinearInequality ineq;
        ineq.coeffs.assign(f.begin(), f.begin() + d);
        ineq.bound = f[d];
        polytope.facets.push_back(std::move(ineq));
    }
    polytope.facets_computed = true;

    // Exact soundness check; cheap at the scales this library targets.
    for (const auto& v : polytope.vertices) {
        for (const auto& f : polytope.facets) {
            Rational lhs = 0;
            for (std::size_t i = 0; i < d; ++i) lhs += Rational(f.coeffs[i]) * v[i];
            if (lhs > Rational(f.bound)) throw std::logic_error("hull facet violated by a vertex");
        }
        for (const auto& e : polytope.equalities) {
            Rational lhs = 0;
            for (std::size_t i = 0; i < d; ++i) lhs += Rational(e.coeffs[i]) * v[i];
            if (lhs != Rational(e.rhs)) throw std::logic_error("hull equality violated by a vertex");
        }
    }
    return polytope;
}

std::vector<std::vector<Rational>> vertex_enumeration(const Polytope& polytope) {
    if (!polytope.facets_computed) throw std::invalid_argument("facets not computed");
    const std::size_t d = polytope.dimension() ? polytope.dimension()
                                               : (polytope.facets.empty()
                                                      ? polytope.equalities.front().coeffs.size()
                                                      : polytope.facets.front().coeffs.size());

    // Homogenize over (t, x): facets become bound*t - a.x >= 0, equalities
    // contribute both signs, and t >= 0 closes the cone.
    std::vector<IntVec> rows;
    for (const auto& f : polytope.facets) {
        IntVec row(d + 1);
        row[0] = f.bound;
        for (std::size_t i = 0; i < d; ++i) row[i + 1] = -f.coeffs[i];
        rows.push_back(std::move(row));
    }
    for (const auto& e : polytope.equalities) {
        IntVec row(d + 1);
        row[0] = e.rhs;
        for (std::size_t i = 0; i < d; ++i) row[i + 1] = -e.coeffs[i];
        rows.push_back(row);
        for (auto& v : row) v = -v;
        rows.push_back(std::move(row));
    }
    IntVec tpos(d + 1, 0);
    tpos[0] = 1;
    rows.push_back(std::move(tpos));

    ConeGenerators cone = dual_cone_generators(rows, d + 1);
    if (!cone.lineality.empty())
        throw std::invalid_argument("input halfspaces do not bound a polytope");

    std::vector<std::vector<Rational>> vertices;
    for (const auto& ray : cone.rays) {
        if (ray.x[0] == 0) throw std::invalid_argument("polyhedron is unbounded");
        std::vector<Rational> v(d);
        for (std::size_t i = 0; i < d; ++i) v[i] = Rational(ray.x[i + 1], ray.x[0]);
        vertices.push_back(std::move(v));
    }
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    return vertices;
}

MembershipReport check_point(const Polytope& polytope, const std::vector<Rational>& point) {
    if (!polytope.facets_computed) throw std::invalid_argument("facets not computed");
    if (point.size() != polytope.dimension())
        throw std::invalid_argument("point dimension mismatch");
    MembershipReport report;
    for (std::size_t k = 0; k < polytope.facets.size(); ++k) {
        const auto& f = polytope.facets[k];
        Rational lhs = 0;
        for (std::size_t i = 0; i < point.size(); ++i) lhs += Rational(f.coeffs[i]) * point[i];
        if (lhs > Rational(f.bound)) report.violated_facets.push_back({k, lhs - Rational(f.bound)});
    }
    for (std::size_t k = 0; k < polytope.equalities.size(); ++k) {
        const auto& e = polytope.equalities[k];
        Rational lhs = 0;
        for (std::size_t i = 0; i < point.size(); ++i) lhs += Rational(e.coeffs[i]) * point[i];
        if (lhs != Rational(e.rhs)) report.violated_equalities.push_back(k);
    }
    report.inside = report.violated_facets.empty() && report.violated_equalities.empty();
    return report;
}

std::string inequality_text(const LinearInequality& f, const std::vector<ObservableTerm>& terms) {
    return linear_text(f.coeffs, f.bound, "<=", terms);
}

std::string equality_text(const LinearEquality& e, const std::vector<ObservableTerm>& terms) {
    return linear_text(e.coeffs, e.rhs, "=", terms);
}

}  // namespace qck
