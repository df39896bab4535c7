#include "ldtlab/harness/io.hpp"

#include "ldtlab/errors.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace ldtlab::harness {

namespace {

std::vector<std::uint64_t> split_ints(const std::string& s, char sep) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) {
        if (tok.empty()) throw ConfigError("oracle file: empty field in '" + s + "'");
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(tok, &used);
        } catch (const std::exception&) {
            throw ConfigError("oracle file: bad integer '" + tok + "'");
        }
        if (used != tok.size()) throw ConfigError("oracle file: bad integer '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

Point to_point(const std::vector<std::uint64_t>& v, const Space& S) {
    if (v.size() != S.m()) throw ConfigError("oracle file: point arity");
    Point p(S.m());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] >= S.q()) throw ConfigError("oracle file: coordinate out of range");
        p[i] = static_cast<Elem>(v[i]);
    }
    return p;
}

void write_point(std::ostream& os, const Point& p) {
    for (std::size_t i = 0; i < p.dim(); ++i) os << (i ? "," : "") << p[i];
}

} // namespace

void write_table(std::ostream& os, const PointsTable& f) {
    os << f.q << ' ' << f.m << ' ' << f.d << '\n';
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        if (f.values[i] == kBot) throw PreconditionError("write_table: table has bot entries");
        os << f.values[i] << ((i + 1) % f.q == 0 ? '\n' : ' ');
    }
}

PointsTable read_table(std::istream& is) {
    long long q = 0, m = 0, d = 0;
    if (!(is >> q >> m >> d)) throw ConfigError("table file: bad header");
    if (q < 2 || m < 1 || d < 0) throw ConfigError("table file: bad parameters");
    std::optional<Space> Sp;
    try {
        Sp.emplace(static_cast<std::uint32_t>(q), static_cast<std::size_t>(m));
    } catch (const NotPrime& e) {
        throw ConfigError(std::string("table file: ") + e.what());
    }
    const Space& S = *Sp;
    std::vector<Elem> v(S.num_points());
    for (auto& x : v) {
        long long t;
        if (!(is >> t)) throw ConfigError("table file: expected q^m values");
        if (t < 0 || t >= q) throw ConfigError("table file: value out of range");
        x = static_cast<Elem>(t);
    }
    std::string extra;
    if (is >> extra) throw ConfigError("table file: trailing data");
    try {
        return make_table(S, static_cast<unsigned>(d), std::move(v));
    } catch (const PreconditionError& e) {
        throw ConfigError(std::string("table file: ") + e.what());
    }
}

PointsTable load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open table " + path);
    return read_table(in);
}

void save_table(const std::string& path, const PointsTable& f) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    write_table(out, f);
}

void write_oracle(std::ostream& os, const Space& S, const LinesOracle& O) {
    for (std::uint64_t id = 0; id < S.num_lines(); ++id) {
        Line l = S.line_at(id);
        write_point(os, l.base);
        os << ';';
        write_point(os, l.dir);
        os << ';';
        if (O.is_bot(id)) {
            os << "BOT\n";
            continue;
        }
        auto c = O.coeffs(id);
        for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
        os << '\n';
    }
}

LinesOracle read_oracle(std::istream& is, const Space& S, unsigned d) {
    LinesOracle O(S, d, OracleFraming::supplied);
    std::vector<std::uint8_t> seen(S.num_lines(), 0);
    std::string line;
    std::uint64_t count = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto a = line.find(';'), b = line.find(';', a + 1);
        if (a == std::string::npos || b == std::string::npos) throw ConfigError("oracle file: need base;dir;entry");
        Point base = to_point(split_ints(line.substr(0, a), ','), S);
        Point dir = to_point(split_ints(line.substr(a + 1, b - a - 1), ','), S);
        if (dir.is_zero()) throw ConfigError("oracle file: zero direction");
        // Re-express the entry in the canonical parameterization.
        Line l = S.canonical_line(base, dir);
        const std::uint64_t id = S.line_id(l);
        if (seen[id]++) throw ConfigError("oracle file: line listed twice");
        ++count;
        const std::string entry = line.substr(b + 1);
        if (entry == "BOT") {
            O.set_bot(id);
            continue;
        }
        auto c = split_ints(entry, ',');
        std::vector<Elem> ce;
        for (auto x : c) {
            if (x >= S.q()) throw ConfigError("oracle file: coefficient out of range");
            ce.push_back(static_cast<Elem>(x));
        }
        UniPoly P(ce);
        if (P.degree() > static_cast<int>(d)) throw ConfigError("oracle file: entry degree above d");
        // P(t) on base + t dir; the canonical line is base' + s dir' with
        // base = base' + t0 dir' and dir = lambda dir'.
        const Elem t0 = *S.param_of(l, base);
        const auto& F = S.field();
        Elem lambda = 0;
        for (std::size_t i = 0; i < S.m(); ++i)
            if (l.dir[i]) {
                lambda = F.mul(dir[i], F.inv(l.dir[i]));
                break;
            }
        // s = t0 + lambda t, so t = (s - t0) / lambda.
        const Elem il = F.inv(lambda);
        O.set(id, compose_affine(F, P, F.neg(F.mul(t0, il)), il));
    }
    if (count != S.num_lines()) throw ConfigError("oracle file: every line must be listed");
    return O;
}

LinesOracle load_oracle(const std::string& path, const Space& S, unsigned d) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open oracle " + path);
    return read_oracle(in, S, d);
}

void save_oracle(const std::string& path, const Space& S, const LinesOracle& O) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    write_oracle(out, S, O);
}

std::vector<Elem> dense_coeffs(const MultiPoly& Q, std::size_t n, unsigned d) {
    if (Q.nvars() != n) throw DimensionMismatch("dense_coeffs: arity");
    if (Q.total_degree() > static_cast<int>(d)) throw PreconditionError("dense_coeffs: degree above d");
    std::vector<Elem> c;
    for (const auto& e : monomials_up_to(n, d)) c.push_back(Q.coeff(e));
    return c;
}

MultiPoly from_dense(const std::vector<Elem>& c, std::size_t n, unsigned d) {
    auto mons = monomials_up_to(n, d);
    if (c.size() != mons.size()) throw DimensionMismatch("from_dense: coefficient count");
    MultiPoly Q(n);
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i]) Q.set_term(mons[i], c[i]);
    return Q;
}

} // namespace ldtlab::harness
