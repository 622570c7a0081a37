// Self-similar groups as wreath recursions: word actions on the rooted tree,
// permutation truncations, torsion order search, symbolic matrix recursion,
// and reconstruction of a graded Lie algebra from a group recursion.
#ifndef SELFSIM_GROUPS_HPP
#define SELFSIM_GROUPS_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/degree.hpp"
#include "selfsim/gf.hpp"
#include "selfsim/spec.hpp"

namespace selfsim {

// ---------- words over group generators and their inverses ----------

struct GLetter {
    int gen = 0;
    bool inv = false;
    friend bool operator==(const GLetter& a, const GLetter& b) {
        return a.gen == b.gen && a.inv == b.inv;
    }
    friend bool operator<(const GLetter& a, const GLetter& b) {
        return a.gen != b.gen ? a.gen < b.gen : a.inv < b.inv;
    }
};
using GWord = std::vector<GLetter>;

struct GroupGen {
    std::string name;
    int shift = 0;                // permutation part: x -> x + shift mod d
    std::vector<GWord> coords;    // one coordinate word per alphabet letter
};

struct GroupSpec {
    int d = 2;
    std::vector<GroupGen> gens;

    int gen_index(const std::string& name) const {
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (gens[i].name == name) return static_cast<int>(i);
        throw std::invalid_argument("unknown group generator: " + name);
    }
};

// free reduction: cancel adjacent mutually inverse letters
inline GWord reduce_word(const GWord& w) {
    GWord out;
    for (const GLetter& l : w) {
        if (!out.empty() && out.back().gen == l.gen && out.back().inv != l.inv)
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

inline GWord invert_word(const GWord& w) {
    GWord out(w.rbegin(), w.rend());
    for (GLetter& l : out) l.inv = !l.inv;
    return out;
}

inline GWord repeat_word(const GWord& w, i64 k) {
    GWord out;
    out.reserve(w.size() * static_cast<std::size_t>(k));
    for (i64 i = 0; i < k; ++i) out.insert(out.end(), w.begin(), w.end());
    return out;
}

// Parse a word: longest-match generator names, apostrophe marks an inverse.
inline GWord parse_group_word(const GroupSpec& g, const std::string& text) {
    GWord out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == ' ' || text[i] == '*') {
            ++i;
            continue;
        }
        int best = -1;
        std::size_t best_len = 0;
        for (std::size_t k = 0; k < g.gens.size(); ++k) {
            const std::string& nm = g.gens[k].name;
            if (nm.size() > best_len && text.compare(i, nm.size(), nm) == 0) {
                best = static_cast<int>(k);
                best_len = nm.size();
            }
        }
        if (best < 0)
            throw std::invalid_argument("unknown generator at position " + std::to_string(i) +
                                        " in word '" + text + "'");
        i += best_len;
        bool inv = i < text.size() && text[i] == '\'';
        if (inv) ++i;
        out.push_back({best, inv});
    }
    return out;
}

inline std::string word_str(const GroupSpec& g, const GWord& w) {
    std::string out;
    for (const GLetter& l : w) {
        out += g.gens[static_cast<std::size_t>(l.gen)].name;
        if (l.inv) out += '\'';
    }
    return out;
}

// ---------- the wreath decomposition of a word ----------

struct WreathDecomp {
    int shift = 0;
    std::vector<GWord> coords;
};

// Left-to-right product: appending a letter v maps the state (s, u) to
// (s + s_v, x -> u_{x + s_v} v_x).  An inverse letter g' contributes shift
// -s_g and coordinates (g')_x = (g_{x + s_{g'}})^{-1}.
inline WreathDecomp wreath(const GroupSpec& g, const GWord& word) {
    WreathDecomp w;
    w.coords.assign(static_cast<std::size_t>(g.d), {});
    for (const GLetter& l : word) {
        const GroupGen& gg = g.gens[static_cast<std::size_t>(l.gen)];
        int sv = l.inv ? (g.d - gg.shift % g.d) % g.d : gg.shift % g.d;
        std::vector<GWord> nxt(static_cast<std::size_t>(g.d));
        for (int x = 0; x < g.d; ++x) {
            std::size_t src = static_cast<std::size_t>((x + sv) % g.d);
            GWord cx = w.coords[src];
            if (l.inv) {
                GWord li = invert_word(gg.coords[src]);
                cx.insert(cx.end(), li.begin(), li.end());
            } else {
                const GWord& li = gg.coords[static_cast<std::size_t>(x)];
                cx.insert(cx.end(), li.begin(), li.end());
            }
            nxt[static_cast<std::size_t>(x)] = std::move(cx);
        }
        w.coords = std::move(nxt);
        w.shift = (w.shift + sv) % g.d;
    }
    return w;
}

// image of a vertex (letter string) under the word, top letter first
inline std::vector<int> act_word(const GroupSpec& g, const GWord& word,
                                 const std::vector<int>& vertex) {
    std::vector<int> out;
    out.reserve(vertex.size());
    GWord cur = word;
    for (std::size_t i = 0; i < vertex.size(); ++i) {
        int x = vertex[i];
        if (x < 0 || x >= g.d)
            throw std::invalid_argument("vertex letter out of range: " + std::to_string(x));
        WreathDecomp w = wreath(g, cur);
        out.push_back((x + w.shift) % g.d);
        cur = std::move(w.coords[static_cast<std::size_t>(x)]);
    }
    return out;
}

// permutation induced on the d^n vertices of level n (index = radix-d string)
inline std::vector<i64> perm_at_level(const GroupSpec& g, const GWord& word, int n) {
    if (n == 0) return {0};
    WreathDecomp w = wreath(g, word);
    i64 dn1 = 1;
    for (int i = 1; i < n; ++i) dn1 *= g.d;
    std::vector<i64> out(static_cast<std::size_t>(dn1) * static_cast<std::size_t>(g.d));
    for (int x = 0; x < g.d; ++x) {
        std::vector<i64> sub = perm_at_level(g, w.coords[static_cast<std::size_t>(x)], n - 1);
        i64 base = static_cast<i64>(x) * dn1;
        i64 tgt = static_cast<i64>((x + w.shift) % g.d) * dn1;
        for (i64 r = 0; r < dn1; ++r)
            out[static_cast<std::size_t>(base + r)] = tgt + sub[static_cast<std::size_t>(r)];
    }
    return out;
}

inline i64 perm_order_at_level(const GroupSpec& g, const GWord& word, int n) {
    std::vector<i64> perm = perm_at_level(g, word, n);
    std::vector<bool> seen(perm.size(), false);
    i64 o = 1;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        i64 ln = 0;
        std::size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = static_cast<std::size_t>(perm[j]);
            ++ln;
        }
        o = std::lcm(o, ln);
    }
    return o;
}

// Coinductive identity check: explore the coordinate closure; the word is the
// identity iff every reachable word has trivial top permutation.
inline bool is_identity(const GroupSpec& g, const GWord& word, std::size_t state_cap = 100000) {
    auto key = [](const GWord& w) {
        std::vector<int> k;
        k.reserve(w.size());
        for (const GLetter& l : w) k.push_back(l.gen * 2 + (l.inv ? 1 : 0));
        return k;
    };
    std::set<std::vector<int>> seen;
    std::vector<GWord> stack{word};
    seen.insert(key(word));
    while (!stack.empty()) {
        GWord w = std::move(stack.back());
        stack.pop_back();
        if (seen.size() > state_cap)
            throw std::runtime_error("identity check exceeded the state cap");
        WreathDecomp wd = wreath(g, w);
        if (wd.shift != 0) return false;
        for (GWord& c : wd.coords) {
            if (c.empty()) continue;
            if (seen.insert(key(c)).second) stack.push_back(std::move(c));
        }
    }
    return true;
}

struct OrderReport {
    std::optional<i64> order;  // certified multiplicative order
    i64 lower_bound = 1;       // best permutation order seen when capped
    int depth = 0;             // level at which the result stabilized / search stopped
};

// Permutation orders at growing depth are lower bounds dividing the true
// order; the coinductive identity check on word^o certifies the upper bound.
inline OrderReport element_order(const GroupSpec& g, const GWord& word, int max_level = 14,
                                 std::size_t state_cap = 100000) {
    OrderReport rep;
    i64 prev = 0;
    for (int n = 1; n <= max_level; ++n) {
        i64 o = perm_order_at_level(g, word, n);
        rep.lower_bound = o;
        rep.depth = n;
        if (o == prev) continue;
        prev = o;
        if (is_identity(g, repeat_word(word, o), state_cap)) {
            rep.order = o;
            return rep;
        }
    }
    return rep;
}

// BFS orbit of the all-zero vertex under the generators
inline bool group_transitive(const GroupSpec& g, int n) {
    std::vector<int> start(static_cast<std::size_t>(n), 0);
    std::set<std::vector<int>> seen{start};
    std::vector<std::vector<int>> stack{start};
    while (!stack.empty()) {
        std::vector<int> v = std::move(stack.back());
        stack.pop_back();
        for (std::size_t k = 0; k < g.gens.size(); ++k) {
            std::vector<int> w = act_word(g, {{static_cast<int>(k), false}}, v);
            if (seen.insert(w).second) stack.push_back(std::move(w));
        }
    }
    i64 total = 1;
    for (int i = 0; i < n; ++i) total *= g.d;
    return static_cast<i64>(seen.size()) == total;
}

// 0/1 permutation matrix of the level-n action: column i carries a 1 in row
// perm(i)
inline Mat perm_mat(const GroupSpec& g, const GWord& word, int n) {
    std::vector<i64> perm = perm_at_level(g, word, n);
    Mat P(static_cast<int>(perm.size()));
    for (std::size_t i = 0; i < perm.size(); ++i)
        P.a[static_cast<std::size_t>(perm[i]) * perm.size() + i] = 1;
    return P;
}

// ---------- symbolic matrix recursion ----------

// d x d matrix with at most one group-word entry per column (permutation
// structure); absent entries are zero
struct SymGroupMat {
    int d = 0;
    std::vector<std::optional<GWord>> e;  // row-major, size d*d

    std::optional<GWord>& at(int r, int c) { return e[static_cast<std::size_t>(r * d + c)]; }
    const std::optional<GWord>& at(int r, int c) const {
        return e[static_cast<std::size_t>(r * d + c)];
    }
    friend bool operator==(const SymGroupMat& a, const SymGroupMat& b) {
        return a.d == b.d && a.e == b.e;
    }
};

inline SymGroupMat group_matrix_recursion(const GroupSpec& g, const GWord& word) {
    WreathDecomp w = wreath(g, word);
    SymGroupMat m;
    m.d = g.d;
    m.e.assign(static_cast<std::size_t>(g.d) * static_cast<std::size_t>(g.d), std::nullopt);
    for (int x = 0; x < g.d; ++x)
        m.at((x + w.shift) % g.d, x) = w.coords[static_cast<std::size_t>(x)];
    return m;
}

inline SymGroupMat sym_mul(const SymGroupMat& a, const SymGroupMat& b) {
    if (a.d != b.d) throw std::invalid_argument("symbolic matrix size mismatch");
    SymGroupMat m;
    m.d = a.d;
    m.e.assign(a.e.size(), std::nullopt);
    for (int i = 0; i < a.d; ++i)
        for (int k = 0; k < a.d; ++k) {
            for (int j = 0; j < a.d; ++j) {
                if (!a.at(i, j) || !b.at(j, k)) continue;
                if (m.at(i, k))
                    throw std::runtime_error("product is not permutation-structured");
                GWord prod = *a.at(i, j);
                prod.insert(prod.end(), b.at(j, k)->begin(), b.at(j, k)->end());
                m.at(i, k) = std::move(prod);
            }
        }
    return m;
}

// ---------- graded Lie algebra from a group recursion ----------

namespace grading {

using Poly = std::vector<i64>;  // integer polynomial in lambda, ascending

inline void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly sub(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

// lambda * p - e
inline Poly shift_minus(const Poly& p, i64 e) {
    Poly r(p.size() + 1, 0);
    for (std::size_t i = 0; i < p.size(); ++i) r[i + 1] = p[i];
    r[0] -= e;
    trim(r);
    return r;
}

inline i64 content(const Poly& p) {
    i64 g = 0;
    for (i64 c : p) g = std::gcd(g, c < 0 ? -c : c);
    return g == 0 ? 1 : g;
}

inline Poly primitive(Poly p) {
    trim(p);
    if (p.empty()) return p;
    i64 g = content(p);
    for (i64& c : p) c /= g;
    if (p.back() < 0)
        for (i64& c : p) c = -c;
    return p;
}

// pseudo-remainder of a by b (b nonzero)
inline Poly prem(Poly a, const Poly& b) {
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        i64 lb = b.back(), la = a.back();
        std::size_t sh = a.size() - b.size();
        for (i64& c : a) c *= lb;
        for (std::size_t i = 0; i < b.size(); ++i) a[i + sh] -= la * b[i];
        trim(a);
    }
    return a;
}

inline Poly poly_gcd(Poly a, Poly b) {
    a = primitive(std::move(a));
    b = primitive(std::move(b));
    while (!b.empty()) {
        Poly r = primitive(prem(a, b));
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// remainder of p modulo a monic divisor, staying over the integers
inline Poly mod_monic(Poly p, const Poly& m) {
    trim(p);
    while (p.size() >= m.size()) {
        i64 top = p.back();
        std::size_t sh = p.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i) p[i + sh] -= top * m[i];
        trim(p);
    }
    return p;
}

inline double eval(const Poly& p, double x) {
    double v = 0;
    for (std::size_t i = p.size(); i-- > 0;) v = v * x + static_cast<double>(p[i]);
    return v;
}

}  // namespace grading

// Derive a consistent grading for a spec whose degrees are not yet assigned:
// derivation generators anchor integer degrees, psi-terms propagate
// deg(g) = lambda*deg(target) - e, and any two derivations of the same degree
// must agree modulo the emitted ring relation (the gcd of all mismatches).
// Without mismatches the scaling factor is free and lambda = d is chosen.
inline void solve_grading(AlgebraSpec& s) {
    using grading::Poly;
    std::size_t ng = s.gens.size();
    std::vector<std::optional<Poly>> deg(ng);
    auto monomial_exp = [&](const TruncPoly& poly) {
        int e = -1;
        for (int i = 0; i < s.d; ++i)
            if (poly[static_cast<std::size_t>(i)]) {
                if (e >= 0)
                    throw std::runtime_error("grading needs monomial coefficients");
                e = i;
            }
        return e;
    };
    for (std::size_t gi = 0; gi < ng; ++gi)
        if (!poly_is_zero(s.gens[gi].der)) {
            int e = monomial_exp(s.gens[gi].der);
            Poly p{1 - static_cast<i64>(e)};
            grading::trim(p);
            deg[gi] = p;
        }
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t gi = 0; gi < ng; ++gi) {
            if (deg[gi]) continue;
            for (const auto& [poly, tgt] : s.gens[gi].terms) {
                int e = monomial_exp(poly);
                if (e < 0) continue;
                for (const auto& [ti, c] : tgt) {
                    (void)c;
                    if (!deg[static_cast<std::size_t>(ti)]) continue;
                    deg[gi] = grading::shift_minus(*deg[static_cast<std::size_t>(ti)], e);
                    changed = true;
                    break;
                }
                if (deg[gi]) break;
            }
        }
    }
    for (std::size_t gi = 0; gi < ng; ++gi)
        if (!deg[gi])
            throw std::runtime_error("no grading anchor reaches generator " + s.gens[gi].name);
    // consistency constraints from every degree equation
    Poly rel;
    for (std::size_t gi = 0; gi < ng; ++gi) {
        for (const auto& [poly, tgt] : s.gens[gi].terms) {
            int e = monomial_exp(poly);
            if (e < 0) continue;
            for (const auto& [ti, c] : tgt) {
                (void)c;
                Poly want = grading::shift_minus(*deg[static_cast<std::size_t>(ti)], e);
                Poly diff = grading::sub(*deg[gi], want);
                if (!diff.empty()) rel = rel.empty() ? grading::primitive(diff)
                                                     : grading::poly_gcd(rel, diff);
            }
        }
        if (!poly_is_zero(s.gens[gi].der)) {
            int e = monomial_exp(s.gens[gi].der);
            Poly want{1 - static_cast<i64>(e)};
            grading::trim(want);
            Poly diff = grading::sub(*deg[gi], want);
            if (!diff.empty())
                rel = rel.empty() ? grading::primitive(diff) : grading::poly_gcd(rel, diff);
        }
    }
    Poly minpoly;
    if (rel.empty()) {
        minpoly = {-static_cast<i64>(s.d), 1};  // free scaling: lambda = d
    } else {
        if (rel.size() < 2)
            throw std::runtime_error("generator degrees admit no consistent grading");
        if (rel.back() != 1)
            throw std::runtime_error("grading relation is not monic");
        minpoly = rel;
    }
    // bracket the largest real root (monic, so positive far right)
    double bound = 1;
    for (i64 c : minpoly) bound = std::max(bound, 1.0 + static_cast<double>(c < 0 ? -c : c));
    double hi = bound, step = 0.25, lo = hi - step;
    while (lo > -bound && grading::eval(minpoly, lo) > 0) {
        hi = lo;
        lo -= step;
    }
    if (grading::eval(minpoly, lo) > 0)
        throw std::runtime_error("grading relation has no real root");
    DegreeRing ring;
    ring.minpoly = minpoly;
    ring.lo = lo;
    ring.hi = hi;
    s.ring = ring;
    for (std::size_t gi = 0; gi < ng; ++gi) {
        Poly red = grading::mod_monic(*deg[gi], minpoly);
        red.resize(static_cast<std::size_t>(s.ring->rank()), 0);
        s.gens[gi].degree = deg_make(*s.ring, red);
    }
}

// Reconstruct a graded Lie algebra from the group recursion: each coordinate
// word must be a power of a single generator; its signed multiplicity n_i
// weights x^i (x+1)^(p-1-i), the per-target polynomials are replaced by their
// leading monomials, and the permutation exponent becomes a derivation part.
inline AlgebraSpec lie_from_group(const GroupSpec& g, int p) {
    if (g.d != p) throw std::invalid_argument("group alphabet size must equal p");
    AlgebraSpec s;
    s.p = p;
    s.d = p;
    s.restricted = true;
    for (const GroupGen& gg : g.gens) {
        GenRule r;
        r.name = gg.name;
        std::map<int, std::vector<int>> polys;  // target index -> coefficient list
        for (int i = 0; i < p; ++i) {
            const GWord& w = gg.coords[static_cast<std::size_t>(i)];
            if (w.empty()) continue;
            int tgt = w[0].gen;
            int ni = 0;
            for (const GLetter& l : w) {
                if (l.gen != tgt)
                    throw std::invalid_argument("coordinate of " + gg.name +
                                                " is not a power of a single generator");
                ni += l.inv ? -1 : 1;
            }
            ni = ((ni % p) + p) % p;
            if (ni == 0) continue;
            std::vector<int> poly(static_cast<std::size_t>(p), 0);
            poly[static_cast<std::size_t>(i)] = 1;  // x^i, then (x+1)^(p-1-i)
            for (int rep = 0; rep < p - 1 - i; ++rep)
                for (int j = p - 1; j > 0; --j)
                    poly[static_cast<std::size_t>(j)] =
                        (poly[static_cast<std::size_t>(j)] + poly[static_cast<std::size_t>(j - 1)]) % p;
            auto& acc = polys.try_emplace(tgt, std::vector<int>(static_cast<std::size_t>(p), 0))
                            .first->second;
            for (int j = 0; j < p; ++j)
                acc[static_cast<std::size_t>(j)] =
                    (acc[static_cast<std::size_t>(j)] + ni * poly[static_cast<std::size_t>(j)]) % p;
        }
        std::vector<std::pair<int, int>> leads;  // (lead exponent, target)
        for (const auto& [tgt, f] : polys) {
            int lead = -1;
            for (int j = 0; j < p; ++j)
                if (f[static_cast<std::size_t>(j)]) lead = j;
            if (lead >= 0) leads.emplace_back(lead, tgt);
        }
        std::sort(leads.begin(), leads.end());
        for (const auto& [lead, tgt] : leads)
            r.terms.push_back({poly_monomial(p, lead,
                                             static_cast<u8>(polys[tgt][static_cast<std::size_t>(lead)])),
                               LinComb{{tgt, 1}}});
        r.der = poly_zero(p);
        if (gg.shift % p != 0) r.der[0] = static_cast<u8>(((gg.shift % p) + p) % p);
        s.gens.push_back(std::move(r));
    }
    solve_grading(s);
    return s;
}

// Exact generator-wise comparison of expansions after name matching: the
// psi-terms are flattened to monomial coefficient maps, derivation parts
// compared verbatim.  Degrees and ring data are not compared.
inline bool same_structure(const AlgebraSpec& a, const AlgebraSpec& b) {
    if (a.p != b.p || a.d != b.d) return false;
    if (a.gens.size() != b.gens.size()) return false;
    auto expansion = [](const AlgebraSpec& s, const GenRule& g) {
        std::map<std::pair<int, std::string>, int> m;
        for (const auto& [poly, tgt] : g.terms)
            for (int e = 0; e < s.d; ++e) {
                if (!poly[static_cast<std::size_t>(e)]) continue;
                for (const auto& [ti, c] : tgt) {
                    auto key = std::make_pair(e, s.gens[static_cast<std::size_t>(ti)].name);
                    m[key] = (m[key] + poly[static_cast<std::size_t>(e)] * c) % s.p;
                    if (m[key] == 0) m.erase(key);
                }
            }
        return m;
    };
    for (const GenRule& ga : a.gens) {
        const GenRule* gb = nullptr;
        for (const GenRule& cand : b.gens)
            if (cand.name == ga.name) {
                gb = &cand;
                break;
            }
        if (!gb) throw std::invalid_argument("unmatched generator: " + ga.name);
        if (expansion(a, ga) != expansion(b, *gb)) return false;
        TruncPoly da = ga.der, db = gb->der;
        if (da != db) return false;
    }
    return true;
}

}  // namespace selfsim

#endif  // SELFSIM_GROUPS_HPP
