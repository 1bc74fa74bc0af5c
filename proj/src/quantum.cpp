#include "qck/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qck/rational.hpp"

namespace qck {

Complex inner(const StateVec& a, const StateVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector dimension mismatch");
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double norm(const StateVec& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

Complex parse_complex(const std::string& token) {
    if (token.empty()) throw std::invalid_argument("empty component");

    // Split an a+bi / a-bi form at a sign that is neither leading nor part
    // of an exponent.
    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i < token.size(); ++i) {
        if ((token[i] == '+' || token[i] == '-') && token[i - 1] != 'e' && token[i - 1] != 'E')
            split = i;  // keep the last such sign: mantissa exponents come first
    }

    auto parse_real = [](const std::string& s) -> double {
        if (s.find('/') != std::string::npos)
            return parse_rational(s).convert_to<double>();
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("malformed number '" + s + "'");
        return v;
    };
    auto parse_imag_part = [&](std::string s) -> double {
        // strip trailing 'i'; bare "i" / "+i" / "-i" mean unit magnitude
        s.pop_back();
        if (s.empty() || s == "+") return 1.0;
        if (s == "-") return -1.0;
        return parse_real(s);
    };

    if (token.back() == 'i') {
        if (split == std::string::npos) return Complex(0.0, parse_imag_part(token));
        return Complex(parse_real(token.substr(0, split)), parse_imag_part(token.substr(split)));
    }
    return Complex(parse_real(token), 0.0);
}

namespace {

std::vector<std::string> content_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        auto b = raw.find_first_not_of(" \t");
        if (b == std::string::npos || raw[b] == '#') continue;
        lines.push_back(raw);
    }
    return lines;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

bool orthonormal_within(const std::vector<StateVec>& basis, double tol) {
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i; j < basis.size(); ++j) {
            double expected = i == j ? 1.0 : 0.0;
            if (std::abs(inner(basis[i], basis[j]) - Complex(expected)) > tol) return false;
        }
    return true;
}

void check_projector(const Matrix& p, const char* name) {
    if (p.rows() != p.cols()) throw std::invalid_argument(std::string(name) + " is not square");
    if (p.hermiticity_residual() > 1e-10)
        throw std::invalid_argument(std::string(name) + " is not Hermitian");
    Matrix sq = p * p;
    double idem = 0.0;
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j)
            idem = std::max(idem, std::abs(sq.at(i, j) - p.at(i, j)));
    if (idem > 1e-10) throw std::invalid_argument(std::string(name) + " is not idempotent");
    if (std::abs(trace(p) - Complex(1.0)) > 1e-10)
        throw std::invalid_argument(std::string(name) + " is not rank-1 (trace != 1)");
}

}  // namespace

VectorRepresentation parse_vectors(const std::string& text) {
    VectorRepresentation rep;
    int line_no = 0;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        auto b = raw.find_first_not_of(" \t");
        if (b == std::string::npos || raw[b] == '#') continue;
        auto colon = raw.find(':');
        if (colon == std::string::npos) throw ParseError(line_no, "expected 'atom: c1 c2 ...'");
        std::string id = raw.substr(b, colon - b);
        while (!id.empty() && (id.back() == ' ' || id.back() == '\t')) id.pop_back();
        if (id.empty()) throw ParseError(line_no, "missing atom id");
        if (rep.vectors.count(id)) throw ParseError(line_no, "atom '" + id + "' listed twice");
        StateVec v;
        std::istringstream rest(raw.substr(colon + 1));
        std::string token;
        while (rest >> token) {
            try {
                v.push_back(parse_complex(token));
            } catch (const std::invalid_argument& e) {
                throw ParseError(line_no, e.what());
            }
        }
        if (v.empty()) throw ParseError(line_no, "vector has no components");
        rep.vectors.emplace(std::move(id), std::move(v));
    }
    return rep;
}

VectorRepresentation load_vector_file(const std::string& path) {
    return parse_vectors(slurp(path));
}

Matrix parse_matrix(const std::string& text) {
    auto lines = content_lines(text);
    if (lines.empty()) throw std::invalid_argument("empty matrix");
    std::vector<std::vector<Complex>> rows;
    for (const auto& line : lines) {
        std::istringstream in(line);
        std::string token;
        std::vector<Complex> row;
        while (in >> token) row.push_back(parse_complex(token));
        rows.push_back(std::move(row));
    }
    for (const auto& row : rows)
        if (row.size() != rows.front().size())
            throw std::invalid_argument("ragged matrix rows");
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m.at(i, j) = rows[i][j];
    return m;
}

Matrix load_matrix_file(const std::string& path) { return parse_matrix(slurp(path)); }

ForReport verify_for(const QuantumCloud& cloud, const VectorRepresentation& rep, double tau,
                     bool strict) {
    const std::size_t n = cloud.atom_count();
    std::vector<const StateVec*> vec(n);
    std::size_t dim = 0;
    for (std::size_t a = 0; a < n; ++a) {
        auto it = rep.vectors.find(cloud.atoms()[a].id);
        if (it == rep.vectors.end())
            throw std::invalid_argument("no vector for atom '" + cloud.atoms()[a].id + "'");
        if (dim == 0) dim = it->second.size();
        if (it->second.size() != dim)
            throw std::invalid_argument("vector dimension mismatch at atom '" +
                                        cloud.atoms()[a].id + "'");
        vec[a] = &it->second;
    }

    // adjacency: atoms sharing at least one context
    std::vector<std::vector<bool>> adjacent(n, std::vector<bool>(n, false));
    for (const auto& ctx : cloud.contexts())
        for (std::size_t i = 0; i < ctx.atoms.size(); ++i)
            for (std::size_t j = i + 1; j < ctx.atoms.size(); ++j) {
                auto a = cloud.atom_index(ctx.atoms[i]);
                auto b = cloud.atom_index(ctx.atoms[j]);
                adjacent[a][b] = adjacent[b][a] = true;
            }

    ForReport report;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            double overlap = std::abs(inner(*vec[a], *vec[b]));
            double cosine = overlap / (norm(*vec[a]) * norm(*vec[b]));
            const auto& ida = cloud.atoms()[a].id;
            const auto& idb = cloud.atoms()[b].id;
            if (adjacent[a][b]) {
                if (overlap > tau) report.orthogonality_failures.push_back({ida, idb, overlap});
            } else if (strict && overlap <= tau) {
                report.accidental_orthogonalities.push_back({ida, idb, overlap});
            }
            if (cosine > 1.0 - tau) report.collinearity_failures.push_back({ida, idb, cosine});
        }
    }
    report.pass = report.orthogonality_failures.empty() && report.collinearity_failures.empty();
    return report;
}

std::vector<double> born_probabilities(const StateVec& psi, const std::vector<StateVec>& basis,
                                       double tol) {
    if (basis.empty()) throw std::invalid_argument("empty basis");
    const std::size_t d = psi.size();
    for (const auto& e : basis)
        if (e.size() != d) throw std::invalid_argument("basis dimension mismatch");
    if (basis.size() != d)
        throw std::invalid_argument("basis must be complete (one vector per dimension)");
    if (std::abs(norm(psi) - 1.0) > tol) throw std::invalid_argument("state vector is not unit");
    if (!orthonormal_within(basis, tol)) throw std::invalid_argument("basis is not orthonormal");

    std::vector<double> p(basis.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        p[i] = std::norm(inner(psi, basis[i]));
        sum += p[i];
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw std::runtime_error("probabilities do not sum to 1 within tolerance");
    return p;
}

std::vector<std::vector<double>> transition_matrix(const std::vector<StateVec>& basis_a,
                                                   const std::vector<StateVec>& basis_b,
                                                   double tol) {
    const std::size_t n = basis_a.size();
    if (n == 0 || basis_b.size() != n || basis_a.front().size() != n)
        throw std::invalid_argument("need two complete bases of equal dimension");
    if (!orthonormal_within(basis_a, tol) || !orthonormal_within(basis_b, tol))
        throw std::invalid_argument("basis is not orthonormal");

    std::vector<std::vector<double>> p(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p[i][j] = std::norm(inner(basis_a[i], basis_b[j]));

    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0, col = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row += p[i][j];
            col += p[j][i];
        }
        if (std::abs(row - 1.0) > kDoublyStochasticTol || std::abs(col - 1.0) > kDoublyStochasticTol)
            throw std::runtime_error("transition matrix is not doubly stochastic within tolerance");
    }
    return p;
}

double trace_form_probability(const Matrix& projector_e, const Matrix& projector_f,
                              const Matrix& r_diagonal) {
    check_projector(projector_e, "E");
    check_projector(projector_f, "F");
    const std::size_t n = projector_e.rows();
    if (projector_f.rows() != n || r_diagonal.rows() != n || r_diagonal.cols() != n)
        throw std::invalid_argument("dimension mismatch");

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) {
                if (r_diagonal.at(i, i).imag() != 0.0 || r_diagonal.at(i, i).real() <= 0.0)
                    throw std::invalid_argument("R must have positive real diagonal entries");
            } else if (std::abs(r_diagonal.at(i, j)) > 1e-12) {
                throw std::invalid_argument("R is not diagonal");
            }
        }
    double tr_r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr_r2 += std::norm(r_diagonal.at(i, i));
    if (std::abs(tr_r2 - static_cast<double>(n)) > 1e-9)
        throw std::invalid_argument("trace(R^2) must equal the dimension");
    Complex tr_er2 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        tr_er2 += projector_e.at(i, i) * r_diagonal.at(i, i) * r_diagonal.at(i, i);
    if (std::abs(tr_er2 - Complex(1.0)) > 1e-9)
        throw std::invalid_argument("trace(E R^2) must equal 1");

    Complex t = trace(projector_e * r_diagonal * projector_f * r_diagonal);
    if (std::abs(t.imag()) > 1e-10) throw std::runtime_error("trace form is not real");
    return t.real();
}

Matrix assemble_operator(const std::vector<OperatorTerm>& terms) {
    if (terms.empty()) throw std::invalid_argument("no terms");
    Matrix sum;
    bool have_shape = false;
    std::vector<std::size_t> party_dims;
    for (const auto& term : terms) {
        if (term.factors.empty()) throw std::invalid_argument("term without factors");
        std::vector<std::size_t> dims;
        for (const auto& f : term.factors) {
            if (f.rows() != f.cols()) throw std::invalid_argument("factor is not square");
            dims.push_back(f.rows());
        }
        if (!have_shape) {
            party_dims = dims;
        } else if (dims != party_dims) {
            throw std::invalid_argument("party dimensions differ between terms");
        }
        Matrix prod = term.factors.front();
        for (std::size_t i = 1; i < term.factors.size(); ++i) prod = kron(prod, term.factors[i]);
        prod *= Complex(term.coefficient);
        if (!have_shape) {
            sum = std::move(prod);
            have_shape = true;
        } else {
            sum += prod;
        }
    }
    if (sum.hermiticity_residual() > 1e-12 * std::max(1.0, sum.max_abs()))
        throw std::runtime_error("assembled operator is not Hermitian");
    return sum;
}

QuantumBound quantum_bound(const Matrix& b) {
    if (b.rows() != b.cols()) throw std::invalid_argument("operator is not square");
    if (b.hermiticity_residual() > 1e-12 * std::max(1.0, b.max_abs()))
        throw std::invalid_argument("operator is not Hermitian");

    EigenSystem eig = hermitian_eigen(b);
    auto residual = [&](std::size_t k) {
        const auto& v = eig.vectors[k];
        double r = 0.0, nv = 0.0;
        for (std::size_t i = 0; i < b.rows(); ++i) {
            Complex bv = 0.0;
            for (std::size_t j = 0; j < b.cols(); ++j) bv += b.at(i, j) * v[j];
            r += std::norm(bv - eig.values[k] * v[i]);
            nv += std::norm(v[i]);
        }
        return std::sqrt(r) / std::sqrt(nv);
    };
    if (residual(0) > 1e-9 || residual(eig.values.size() - 1) > 1e-9)
        throw std::runtime_error("eigenpair residual above tolerance");
    return {eig.values.front(), eig.values.back()};
}

}  // namespace qck
