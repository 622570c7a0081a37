// Plain-text file format for algebra and group descriptions.
//
// Algebra files:                        Group files:
//   p 3                                   d 2
//   d 3                                   gen a
//   restricted true                         shift 1
//   lambda_minpoly -1 -2 1                  coords - -
//   lambda_root_interval 2.25 2.5         gen b
//   gen a                                   shift 0
//     degree 1 0                            coords a c
//     der 1 0 0
//   gen t
//     degree -1 1
//     psi 0 1 0 -> a
//     psi 0 0 1 -> t
//
// '#' starts a comment; blank lines are ignored; leading whitespace is
// insignificant.  psi lines give the d polynomial coefficients, then the
// target combination ("a", "2*a + t").  der lines give the d coefficients of
// the derivation polynomial.  Group coordinate words use generator names with
// an apostrophe for inverses; '-' is the empty word.
#ifndef SELFSIM_SPECFILE_HPP
#define SELFSIM_SPECFILE_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfsim/groups.hpp"
#include "selfsim/spec.hpp"

namespace selfsim {

struct SpecParseError : std::runtime_error {
    int line;
    SpecParseError(int line_no, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + msg),
          line(line_no) {}
};

namespace specfile_detail {

struct Line {
    int no;
    std::string key;
    std::vector<std::string> args;  // whitespace-separated tail
};

inline std::vector<Line> tokenize(const std::string& text) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    int no = 0;
    while (std::getline(in, raw)) {
        ++no;
        if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
        std::istringstream ls(raw);
        Line l;
        l.no = no;
        if (!(ls >> l.key)) continue;
        std::string tok;
        while (ls >> tok) l.args.push_back(tok);
        out.push_back(std::move(l));
    }
    return out;
}

inline i64 parse_int(const Line& l, const std::string& tok) {
    try {
        std::size_t pos = 0;
        i64 v = std::stoll(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw SpecParseError(l.no, "key '" + l.key + "': '" + tok +
                                       "' is not an integer");
    }
}

inline double parse_real(const Line& l, const std::string& tok) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw SpecParseError(l.no, "key '" + l.key + "': '" + tok +
                                       "' is not a number");
    }
}

inline std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// coefficient list of fixed width, reduced mod p (negatives allowed in input)
inline TruncPoly parse_poly(const Line& l, std::size_t from, std::size_t count, int p,
                            int d) {
    if (l.args.size() < from + static_cast<std::size_t>(d))
        throw SpecParseError(l.no, "key '" + l.key + "': expected " +
                                       std::to_string(d) + " coefficients");
    (void)count;
    TruncPoly q(static_cast<std::size_t>(d), 0);
    for (int e = 0; e < d; ++e) {
        i64 c = parse_int(l, l.args[from + static_cast<std::size_t>(e)]);
        q[static_cast<std::size_t>(e)] = static_cast<u8>(((c % p) + p) % p);
    }
    return q;
}

}  // namespace specfile_detail

// ---------- algebra files ----------

inline std::string write_algebra(const AlgebraSpec& s) {
    using specfile_detail::fmt_real;
    std::string out;
    out += "p " + std::to_string(s.p) + "\n";
    out += "d " + std::to_string(s.d) + "\n";
    out += std::string("restricted ") + (s.restricted ? "true" : "false") + "\n";
    if (s.ring) {
        out += "lambda_minpoly";
        for (i64 c : s.ring->minpoly) out += " " + std::to_string(c);
        out += "\nlambda_root_interval " + fmt_real(s.ring->lo) + " " +
               fmt_real(s.ring->hi) + "\n";
    }
    for (const GenRule& g : s.gens) {
        out += "gen " + g.name + "\n";
        if (g.degree) {
            out += "  degree";
            for (i64 c : g.degree->c) out += " " + std::to_string(c);
            out += "\n";
        }
        for (const auto& [poly, tgt] : g.terms) {
            out += "  psi";
            for (u8 c : poly) out += " " + std::to_string(c);
            out += " ->";
            bool first = true;
            for (const auto& [ti, c] : tgt) {
                out += first ? " " : " + ";
                first = false;
                if (c != 1) out += std::to_string(c) + "*";
                out += s.gens[static_cast<std::size_t>(ti)].name;
            }
            out += "\n";
        }
        if (!poly_is_zero(g.der)) {
            out += "  der";
            for (u8 c : g.der) out += " " + std::to_string(c);
            out += "\n";
        }
    }
    return out;
}

inline AlgebraSpec parse_algebra(const std::string& text) {
    using namespace specfile_detail;
    std::vector<Line> lines = tokenize(text);
    AlgebraSpec s;
    s.restricted = false;
    bool saw_p = false, saw_d = false;
    std::optional<std::vector<i64>> minpoly;
    std::optional<std::pair<double, double>> interval;
    // first pass: header keys and generator names (allows forward references)
    for (const Line& l : lines) {
        if (l.key == "gen") {
            if (l.args.size() != 1)
                throw SpecParseError(l.no, "key 'gen': expected exactly one name");
            for (const GenRule& g : s.gens)
                if (g.name == l.args[0])
                    throw SpecParseError(l.no, "duplicate generator '" + l.args[0] + "'");
            GenRule g;
            g.name = l.args[0];
            s.gens.push_back(std::move(g));
        }
    }
    int cur = -1;  // current generator in the second pass
    for (const Line& l : lines) {
        if (l.key == "p" || l.key == "d") {
            if (l.args.size() != 1)
                throw SpecParseError(l.no, "key '" + l.key + "': expected one value");
            i64 v = parse_int(l, l.args[0]);
            if (v < 1 || v > 255)
                throw SpecParseError(l.no, "key '" + l.key + "': value out of range");
            (l.key == "p" ? s.p : s.d) = static_cast<int>(v);
            (l.key == "p" ? saw_p : saw_d) = true;
        } else if (l.key == "restricted") {
            if (l.args.size() != 1 || (l.args[0] != "true" && l.args[0] != "false"))
                throw SpecParseError(l.no, "key 'restricted': expected true or false");
            s.restricted = l.args[0] == "true";
        } else if (l.key == "lambda_minpoly") {
            if (l.args.size() < 2)
                throw SpecParseError(l.no,
                                     "key 'lambda_minpoly': expected at least 2 coefficients");
            std::vector<i64> mp;
            for (const std::string& tok : l.args) mp.push_back(parse_int(l, tok));
            if (mp.back() != 1)
                throw SpecParseError(l.no, "key 'lambda_minpoly': polynomial must be monic");
            minpoly = std::move(mp);
        } else if (l.key == "lambda_root_interval") {
            if (l.args.size() != 2)
                throw SpecParseError(l.no,
                                     "key 'lambda_root_interval': expected two bounds");
            interval = {parse_real(l, l.args[0]), parse_real(l, l.args[1])};
        } else if (l.key == "gen") {
            ++cur;
        } else if (l.key == "degree" || l.key == "psi" || l.key == "der") {
            // handled below once p and d are known; validate placement here
            if (cur < 0)
                throw SpecParseError(l.no, "key '" + l.key + "' before any 'gen'");
        } else {
            throw SpecParseError(l.no, "unknown key '" + l.key + "'");
        }
    }
    if (!saw_p) throw SpecParseError(0, "missing key 'p'");
    if (!saw_d) throw SpecParseError(0, "missing key 'd'");
    if (s.gens.empty()) throw SpecParseError(0, "no generators ('gen' lines)");
    if (minpoly) {
        DegreeRing ring;
        ring.minpoly = *minpoly;
        if (interval) {
            ring.lo = interval->first;
            ring.hi = interval->second;
        } else {
            ring = bracket_ring(*minpoly);  // re-bracket when the file omits it
        }
        s.ring = ring;
    } else if (interval) {
        throw SpecParseError(0, "lambda_root_interval without lambda_minpoly");
    }
    auto find_gen = [&](const Line& l, const std::string& name) {
        for (std::size_t i = 0; i < s.gens.size(); ++i)
            if (s.gens[i].name == name) return static_cast<int>(i);
        throw SpecParseError(l.no, "unknown generator '" + name + "'");
    };
    cur = -1;
    for (const Line& l : lines) {
        if (l.key == "gen") {
            ++cur;
            continue;
        }
        if (l.key != "degree" && l.key != "psi" && l.key != "der") continue;
        GenRule& g = s.gens[static_cast<std::size_t>(cur)];
        if (l.key == "degree") {
            if (!s.ring)
                throw SpecParseError(l.no, "degree given without lambda_minpoly");
            std::vector<i64> c;
            for (const std::string& tok : l.args) c.push_back(parse_int(l, tok));
            if (c.size() != static_cast<std::size_t>(s.ring->rank()))
                throw SpecParseError(l.no, "key 'degree': expected " +
                                               std::to_string(s.ring->rank()) +
                                               " coordinates");
            g.degree = deg_make(*s.ring, c);
        } else if (l.key == "der") {
            g.der = parse_poly(l, 0, 0, s.p, s.d);
        } else {  // psi
            std::size_t arrow = 0;
            while (arrow < l.args.size() && l.args[arrow] != "->") ++arrow;
            if (arrow != static_cast<std::size_t>(s.d) || arrow + 1 >= l.args.size())
                throw SpecParseError(l.no, "key 'psi': expected " + std::to_string(s.d) +
                                               " coefficients, '->', then a target");
            TruncPoly poly = parse_poly(l, 0, 0, s.p, s.d);
            LinComb tgt;
            bool expect_term = true;
            for (std::size_t i = arrow + 1; i < l.args.size(); ++i) {
                const std::string& tok = l.args[i];
                if (tok == "+") {
                    if (expect_term)
                        throw SpecParseError(l.no, "key 'psi': misplaced '+'");
                    expect_term = true;
                    continue;
                }
                if (!expect_term)
                    throw SpecParseError(l.no, "key 'psi': terms must be joined by '+'");
                expect_term = false;
                i64 coeff = 1;
                std::string name = tok;
                if (auto star = tok.find('*'); star != std::string::npos) {
                    coeff = parse_int(l, tok.substr(0, star));
                    name = tok.substr(star + 1);
                }
                u8 c = static_cast<u8>(((coeff % s.p) + s.p) % s.p);
                if (c == 0)
                    throw SpecParseError(l.no, "key 'psi': zero coefficient on '" +
                                                   name + "'");
                tgt.emplace_back(find_gen(l, name), c);
            }
            if (expect_term)
                throw SpecParseError(l.no, "key 'psi': dangling '+'");
            g.terms.emplace_back(std::move(poly), std::move(tgt));
        }
    }
    for (GenRule& g : s.gens)
        if (g.der.empty()) g.der = poly_zero(s.d);
    return s;
}

// ---------- group files ----------

inline std::string write_group(const GroupSpec& g) {
    std::string out = "d " + std::to_string(g.d) + "\n";
    for (const GroupGen& gg : g.gens) {
        out += "gen " + gg.name + "\n";
        out += "  shift " + std::to_string(gg.shift) + "\n";
        out += "  coords";
        for (const GWord& w : gg.coords)
            out += " " + (w.empty() ? std::string("-") : word_str(g, w));
        out += "\n";
    }
    return out;
}

inline GroupSpec parse_group(const std::string& text) {
    using namespace specfile_detail;
    std::vector<Line> lines = tokenize(text);
    GroupSpec g;
    bool saw_d = false;
    for (const Line& l : lines) {  // first pass: d and generator names
        if (l.key == "d") {
            if (l.args.size() != 1)
                throw SpecParseError(l.no, "key 'd': expected one value");
            i64 v = parse_int(l, l.args[0]);
            if (v < 1 || v > 255)
                throw SpecParseError(l.no, "key 'd': value out of range");
            g.d = static_cast<int>(v);
            saw_d = true;
        } else if (l.key == "gen") {
            if (l.args.size() != 1)
                throw SpecParseError(l.no, "key 'gen': expected exactly one name");
            for (const GroupGen& gg : g.gens)
                if (gg.name == l.args[0])
                    throw SpecParseError(l.no, "duplicate generator '" + l.args[0] + "'");
            GroupGen gg;
            gg.name = l.args[0];
            gg.coords.resize(static_cast<std::size_t>(g.d));
            g.gens.push_back(std::move(gg));
        } else if (l.key != "shift" && l.key != "coords") {
            throw SpecParseError(l.no, "unknown key '" + l.key + "'");
        }
    }
    if (!saw_d) throw SpecParseError(0, "missing key 'd'");
    if (g.gens.empty()) throw SpecParseError(0, "no generators ('gen' lines)");
    for (GroupGen& gg : g.gens) gg.coords.resize(static_cast<std::size_t>(g.d));
    int cur = -1;
    for (const Line& l : lines) {
        if (l.key == "gen") {
            ++cur;
            continue;
        }
        if (l.key != "shift" && l.key != "coords") continue;
        if (cur < 0) throw SpecParseError(l.no, "key '" + l.key + "' before any 'gen'");
        GroupGen& gg = g.gens[static_cast<std::size_t>(cur)];
        if (l.key == "shift") {
            if (l.args.size() != 1)
                throw SpecParseError(l.no, "key 'shift': expected one value");
            i64 v = parse_int(l, l.args[0]);
            gg.shift = static_cast<int>(((v % g.d) + g.d) % g.d);
        } else {
            if (l.args.size() != static_cast<std::size_t>(g.d))
                throw SpecParseError(l.no, "key 'coords': expected " +
                                               std::to_string(g.d) + " words");
            for (int x = 0; x < g.d; ++x) {
                const std::string& tok = l.args[static_cast<std::size_t>(x)];
                if (tok == "-") continue;
                try {
                    gg.coords[static_cast<std::size_t>(x)] = parse_group_word(g, tok);
                } catch (const std::exception& ex) {
                    throw SpecParseError(l.no, std::string("key 'coords': ") + ex.what());
                }
            }
        }
    }
    return g;
}

// ---------- file wrappers ----------

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
}

inline AlgebraSpec load_algebra(const std::string& path) {
    return parse_algebra(read_text_file(path));
}

inline void save_algebra(const AlgebraSpec& s, const std::string& path) {
    write_text_file(path, write_algebra(s));
}

inline GroupSpec load_group(const std::string& path) {
    return parse_group(read_text_file(path));
}

inline void save_group(const GroupSpec& g, const std::string& path) {
    write_text_file(path, write_group(g));
}

}  // namespace selfsim

#endif  // SELFSIM_SPECFILE_HPP
