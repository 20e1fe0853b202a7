#include "tspn/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace tspn {

namespace {

struct Reader {
    std::istream& in;
    int lineno = 0;

    // Next non-empty line split into tokens; false at end of input.
    bool next(std::vector<std::string>& tok) {
        std::string line;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
            std::istringstream ss(line);
            tok.clear();
            for (std::string t; ss >> t;) tok.push_back(t);
            if (!tok.empty()) return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const { throw FormatError(lineno, what); }

    double number(const std::string& t) const {
        errno = 0;
        char* end = nullptr;
        double v = std::strtod(t.c_str(), &end);
        if (end == t.c_str() || *end != '\0' || errno == ERANGE) fail("non-numeric token '" + t + "'");
        return v;
    }

    long integer(const std::string& t) const {
        errno = 0;
        char* end = nullptr;
        long v = std::strtol(t.c_str(), &end, 10);
        if (end == t.c_str() || *end != '\0' || errno == ERANGE) fail("non-numeric token '" + t + "'");
        return v;
    }

    Vec coords(const std::vector<std::string>& tok, std::size_t from, int d) const {
        if (tok.size() < from + d) fail("wrong dimension (expected " + std::to_string(d) + " coordinates)");
        Vec v(d);
        for (int i = 0; i < d; ++i) v[i] = number(tok[from + i]);
        return v;
    }

    std::vector<std::string> expect_line(std::vector<std::string>& tok) {
        if (!next(tok)) fail("unexpected end of file");
        return tok;
    }
};

std::string header_kind(Reader& rd, std::vector<std::string>& tok, int& dim) {
    if (!rd.next(tok)) throw FormatError(0, "malformed header (empty file)");
    if (tok.size() != 3 || tok[0] != "TSPN") rd.fail("malformed header");
    if (tok[2] != "1") rd.fail("unsupported version " + tok[2]);
    std::string kind = tok[1];
    if (!rd.next(tok) || tok.size() != 2 || tok[0] != "dim") rd.fail("malformed header (expected 'dim <d>')");
    long d = rd.integer(tok[1]);
    if (d < 1 || d > 1000000) rd.fail("wrong dimension " + tok[1]);
    dim = static_cast<int>(d);
    return kind;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return in;
}

}  // namespace

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_point(const Vec& p) {
    std::string s;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (i) s += ' ';
        s += format_real(p[i]);
    }
    return s;
}

AnyInstance parse_instance(std::istream& in) {
    Reader rd{in};
    std::vector<std::string> tok;
    int dim = 0;
    std::string kind = header_kind(rd, tok, dim);
    std::set<long> ids;
    auto fresh_id = [&](const std::string& t) {
        long id = rd.integer(t);
        if (!ids.insert(id).second) rd.fail("duplicate id " + t);
    };

    if (kind == "LINES") {
        LineInstance inst;
        inst.dim = dim;
        while (rd.next(tok)) {
            if (tok[0] != "line" || tok.size() < 2) rd.fail("expected 'line' record");
            if (tok.size() != 2 + 2 * static_cast<std::size_t>(dim)) rd.fail("wrong dimension in line record");
            fresh_id(tok[1]);
            Vec base = rd.coords(tok, 2, dim);
            Vec dir = rd.coords(tok, 2 + dim, dim);
            try {
                inst.lines.push_back(Line::from_direction(base, dir));
            } catch (const GeometryError& e) {
                rd.fail(e.what());
            }
        }
        return inst;
    }
    if (kind == "DISCRETE") {
        std::vector<std::vector<Vec>> groups;
        while (rd.next(tok)) {
            if (tok[0] != "group" || tok.size() != 3) rd.fail("expected 'group <i> <count>'");
            fresh_id(tok[1]);
            long count = rd.integer(tok[2]);
            if (count <= 0) rd.fail("empty group");
            std::vector<Vec> pts;
            for (long c = 0; c < count; ++c) {
                rd.expect_line(tok);
                if (tok.size() != static_cast<std::size_t>(dim)) rd.fail("wrong dimension");
                pts.push_back(rd.coords(tok, 0, dim));
            }
            groups.push_back(std::move(pts));
        }
        return DiscreteInstance::from_groups(dim, groups);
    }
    if (kind == "FLATS") {
        FlatInstance inst;
        inst.dim = dim;
        while (rd.next(tok)) {
            if (tok[0] != "flat" || tok.size() != 3) rd.fail("expected 'flat <id> <k>'");
            fresh_id(tok[1]);
            long k = rd.integer(tok[2]);
            if (k < 1 || k > dim) rd.fail("bad flat dimension " + tok[2]);
            Flat f;
            rd.expect_line(tok);
            if (tok.size() != static_cast<std::size_t>(dim)) rd.fail("wrong dimension");
            f.base = rd.coords(tok, 0, dim);
            for (long j = 0; j < k; ++j) {
                rd.expect_line(tok);
                if (tok.size() != static_cast<std::size_t>(dim)) rd.fail("wrong dimension");
                f.basis.push_back(rd.coords(tok, 0, dim));
            }
            for (std::size_t a = 0; a < f.basis.size(); ++a)
                for (std::size_t b = 0; b <= a; ++b)
                    if (std::abs(f.basis[a].dot(f.basis[b]) - (a == b ? 1.0 : 0.0)) > 1e-9)
                        rd.fail("flat basis is not orthonormal");
            inst.flats.push_back(std::move(f));
        }
        return inst;
    }
    rd.fail("malformed header (unknown kind '" + kind + "')");
}

AnyInstance read_instance(const std::string& path) {
    auto in = open_in(path);
    return parse_instance(in);
}

void write_instance(std::ostream& out, const LineInstance& inst) {
    out << "TSPN LINES 1\ndim " << inst.dim << "\n";
    for (int i = 0; i < inst.n(); ++i)
        out << "line " << i << ' ' << format_point(inst.lines[i].base) << ' ' << format_point(inst.lines[i].dir) << '\n';
}

void write_instance(std::ostream& out, const DiscreteInstance& inst) {
    out << "TSPN DISCRETE 1\ndim " << inst.dim << "\n";
    for (int i = 0; i < inst.n(); ++i) {
        out << "group " << i << ' ' << inst.group_points[i].size() << '\n';
        for (int p : inst.group_points[i]) out << format_point(inst.points[p]) << '\n';
    }
}

void write_instance(std::ostream& out, const FlatInstance& inst) {
    out << "TSPN FLATS 1\ndim " << inst.dim << "\n";
    for (std::size_t i = 0; i < inst.flats.size(); ++i) {
        const Flat& f = inst.flats[i];
        out << "flat " << i << ' ' << f.basis.size() << '\n' << format_point(f.base) << '\n';
        for (const Vec& b : f.basis) out << format_point(b) << '\n';
    }
}

void write_instance(const std::string& path, const AnyInstance& inst) {
    auto out = open_out(path);
    std::visit([&](const auto& x) { write_instance(out, x); }, inst);
}

Tour parse_tour(std::istream& in) {
    Reader rd{in};
    std::vector<std::string> tok;
    int dim = 0;
    if (header_kind(rd, tok, dim) != "TOUR") rd.fail("malformed header (expected TOUR)");
    Tour t;
    while (rd.next(tok)) {
        if (tok[0] != "waypoint" || tok.size() != 2 + static_cast<std::size_t>(dim))
            rd.fail("expected 'waypoint <tag> <coords>'");
        t.push(rd.coords(tok, 2, dim), static_cast<int>(rd.integer(tok[1])));
    }
    if (t.empty()) rd.fail("tour has no waypoints");
    return t;
}

Tour read_tour(const std::string& path) {
    auto in = open_in(path);
    return parse_tour(in);
}

void write_tour(std::ostream& out, const Tour& t) {
    const int dim = t.empty() ? 0 : static_cast<int>(t.waypoints[0].size());
    out << "TSPN TOUR 1\ndim " << dim << "\n";
    for (std::size_t i = 0; i < t.size(); ++i) out << "waypoint " << t.meta[i] << ' ' << format_point(t.waypoints[i]) << '\n';
}

void write_tour(const std::string& path, const Tour& t) {
    auto out = open_out(path);
    write_tour(out, t);
}

void write_sidecar(std::ostream& out, const Sidecar& kv) {
    for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
}

void write_sidecar(const std::string& path, const Sidecar& kv) {
    auto out = open_out(path);
    write_sidecar(out, kv);
}

Sidecar read_sidecar(const std::string& path) {
    auto in = open_in(path);
    Sidecar kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw FormatError(lineno, "expected 'key = value'");
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t\r");
            auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return kv;
}

}  // namespace tspn
