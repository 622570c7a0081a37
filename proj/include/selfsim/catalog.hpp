// Catalog of the built-in algebras, groups and matrix families, each with an
// expectations record consumed by the verification suites, plus the
// inflation/deflation constructors between maximal-class algebras.
#ifndef SELFSIM_CATALOG_HPP
#define SELFSIM_CATALOG_HPP

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/analysis.hpp"
#include "selfsim/closure.hpp"
#include "selfsim/envelope.hpp"
#include "selfsim/groups.hpp"
#include "selfsim/spec.hpp"

namespace selfsim {

// ---------- algebra constructors ----------

inline AlgebraSpec gupta_sidki(int p) {
    AlgebraSpec s;
    s.p = p;
    s.d = p;
    s.restricted = true;
    s.ring = bracket_ring({-(static_cast<i64>(p) - 2), -2, 1});  // x^2 - 2x - (p-2)
    GenRule a;
    a.name = "a";
    a.der = poly_monomial(p, 0);
    a.degree = deg_make(*s.ring, {1, 0});
    GenRule t;
    t.name = "t";
    t.terms = {{poly_monomial(p, 1), LinComb{{0, 1}}},
               {poly_monomial(p, p - 1), LinComb{{1, 1}}}};
    t.der = poly_zero(p);
    t.degree = deg_make(*s.ring, {-1, 1});
    s.gens = {a, t};
    return s;
}

inline AlgebraSpec grigorchuk(bool restricted) {
    AlgebraSpec s;
    s.p = 2;
    s.d = 2;
    s.restricted = restricted;
    s.ring = bracket_ring({-2, 1});  // scaling factor 2; all generators degree 1
    Degree one = deg_make(*s.ring, {1});
    GenRule a;
    a.name = "a";
    a.der = poly_monomial(2, 0);
    a.degree = one;
    GenRule b;
    b.name = "b";
    b.terms = {{poly_monomial(2, 1), LinComb{{0, 1}, {2, 1}}}};  // x (x) (a + c)
    b.der = poly_zero(2);
    b.degree = one;
    GenRule c;
    c.name = "c";
    c.terms = {{poly_monomial(2, 1), LinComb{{0, 1}, {3, 1}}}};  // x (x) (a + d)
    c.der = poly_zero(2);
    c.degree = one;
    GenRule d;
    d.name = "d";
    d.terms = {{poly_monomial(2, 1), LinComb{{1, 1}}}};  // x (x) b
    d.der = poly_zero(2);
    d.degree = one;
    s.gens = {a, b, c, d};
    return s;
}

// One generator per position of the periodic symbol word; each maps to
// x (x) <next generator> plus the lifted symbol as a derivation coefficient.
inline AlgebraSpec grigorchuk_omega(const std::string& word,
                                    const std::vector<std::string>& names = {},
                                    const std::map<char, u8>& lift = {{'0', 0},
                                                                      {'1', 1},
                                                                      {'2', 1}}) {
    if (word.empty()) throw std::invalid_argument("symbol word must be nonempty");
    AlgebraSpec s;
    s.p = 2;
    s.d = 2;
    s.restricted = false;
    s.ring = bracket_ring({-2, 1});
    Degree one = deg_make(*s.ring, {1});
    int k = static_cast<int>(word.size());
    for (int i = 0; i < k; ++i) {
        auto it = lift.find(word[static_cast<std::size_t>(i)]);
        if (it == lift.end())
            throw std::invalid_argument(std::string("symbol '") +
                                        word[static_cast<std::size_t>(i)] +
                                        "' has no derivation lift");
        GenRule g;
        g.name = static_cast<std::size_t>(i) < names.size()
                     ? names[static_cast<std::size_t>(i)]
                     : "g" + std::to_string(i);
        g.terms = {{poly_monomial(2, 1), LinComb{{(i + 1) % k, 1}}}};
        g.der = poly_zero(2);
        if (it->second) g.der[0] = it->second % 2;
        g.degree = one;
        s.gens.push_back(std::move(g));
    }
    return s;
}

inline AlgebraSpec fabrykowski_gupta(int p) {
    AlgebraSpec s;
    s.p = p;
    s.d = p;
    s.restricted = true;
    s.ring = bracket_ring({-static_cast<i64>(p), 1});  // scaling factor p
    Degree one = deg_make(*s.ring, {1});
    GenRule a;
    a.name = "a";
    a.der = poly_monomial(p, 0);
    a.degree = one;
    GenRule t;
    t.name = "t";
    t.terms = {{poly_monomial(p, p - 1), LinComb{{0, 1}, {1, 1}}}};  // x^{p-1} (x) (a+t)
    t.der = poly_zero(p);
    t.degree = one;
    s.gens = {a, t};
    return s;
}

inline AlgebraSpec psz(int m, int p) {
    if (m < 2) throw std::invalid_argument("chain length must be at least 2");
    AlgebraSpec s;
    s.p = p;
    s.d = p;
    s.restricted = true;
    std::vector<i64> mp(static_cast<std::size_t>(m) + 1, 0);  // x^m - x^{m-1} + 1 - p
    mp[0] = 1 - static_cast<i64>(p);
    mp[static_cast<std::size_t>(m) - 1] = -1;
    mp[static_cast<std::size_t>(m)] = 1;
    s.ring = bracket_ring(std::move(mp));
    for (int i = 1; i < m; ++i) {
        GenRule d;
        d.name = "d" + std::to_string(i);
        if (i == 1) {
            d.der = poly_monomial(p, 0);
        } else {
            d.terms = {{poly_monomial(p, 0), LinComb{{i - 2, 1}}}};  // 1 (x) previous
            d.der = poly_zero(p);
        }
        std::vector<i64> coeffs(static_cast<std::size_t>(m), 0);
        coeffs[static_cast<std::size_t>(i) - 1] = 1;  // degree lambda^{i-1}
        d.degree = deg_make(*s.ring, coeffs);
        s.gens.push_back(std::move(d));
    }
    GenRule v;
    v.name = "v";
    v.terms = {{poly_monomial(p, 0), LinComb{{m - 2, 1}}},
               {poly_monomial(p, p - 1), LinComb{{m - 1, 1}}}};
    v.der = poly_zero(p);
    std::vector<i64> vc(static_cast<std::size_t>(m), 0);
    vc[static_cast<std::size_t>(m) - 1] = 1;  // degree lambda^{m-1}
    v.degree = deg_make(*s.ring, vc);
    s.gens.push_back(std::move(v));
    return s;
}

inline AlgebraSpec kaloujnine(int p, int count = 6) {
    AlgebraSpec s;
    s.p = p;
    s.d = p;
    s.restricted = true;
    s.ring = bracket_ring({-static_cast<i64>(p), 1});
    Degree one = deg_make(*s.ring, {1});
    for (int k = 1; k <= count; ++k) {
        GenRule u;
        u.name = "u" + std::to_string(k);
        if (k == 1) {
            u.der = poly_monomial(p, 0);
        } else {
            u.terms = {{poly_monomial(p, p - 1), LinComb{{k - 2, 1}}}};
            u.der = poly_zero(p);
        }
        u.degree = one;
        s.gens.push_back(std::move(u));
    }
    return s;
}

// ---------- group constructors ----------

inline GroupSpec grigorchuk_group() {
    GroupSpec g;
    g.d = 2;
    GWord one;
    g.gens.push_back({"a", 1, {one, one}});
    g.gens.push_back({"b", 0, {GWord{{0, false}}, GWord{{2, false}}}});
    g.gens.push_back({"c", 0, {GWord{{0, false}}, GWord{{3, false}}}});
    g.gens.push_back({"d", 0, {one, GWord{{1, false}}}});
    return g;
}

inline GroupSpec gupta_sidki_group() {
    GroupSpec g;
    g.d = 3;
    GWord one;
    g.gens.push_back({"a", 1, {one, one, one}});
    g.gens.push_back(
        {"t", 0, {GWord{{0, false}}, GWord{{0, false}, {0, false}}, GWord{{1, false}}}});
    return g;
}

inline GroupSpec kaloujnine_group(int p, int count = 4) {
    GroupSpec g;
    g.d = p;
    g.gens.push_back({"u1", 1, std::vector<GWord>(static_cast<std::size_t>(p))});
    for (int k = 2; k <= count; ++k) {
        std::vector<GWord> coords(static_cast<std::size_t>(p));
        coords[0] = GWord{{k - 2, false}};
        g.gens.push_back({"u" + std::to_string(k), 0, std::move(coords)});
    }
    return g;
}

// ---------- monomial matrix family ----------

// two-letter recursion: s -> lower-left identity block, t -> (t, s) on the
// right column of blocks
inline Mat sidki_matrix(char which, int n) {
    if (n == 0) return Mat(1);
    int N = 1 << (n - 1);
    Mat m(2 * N);
    if (which == 's') {
        for (int i = 0; i < N; ++i) m.at(N + i, i) = 1;
        return m;
    }
    if (which != 't') throw std::invalid_argument("unknown letter in the matrix family");
    Mat t = sidki_matrix('t', n - 1), s = sidki_matrix('s', n - 1);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            m.at(i, N + j) = t.at(i, j);
            m.at(N + i, N + j) = s.at(i, j);
        }
    return m;
}

// ---------- inflation and deflation ----------

// strip M = I_d (x) B down to B; throws when M has no such block structure
inline Mat collapse_kron_identity(const Mat& m, int d) {
    if (d <= 0 || m.n % d != 0)
        throw std::invalid_argument("matrix size is not a multiple of the block count");
    int N = m.n / d;
    Mat b(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) b.at(i, j) = m.at(i, j);
    for (int bi = 0; bi < d; ++bi)
        for (int bj = 0; bj < d; ++bj)
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) {
                    u8 want = bi == bj ? b.at(i, j) : 0;
                    if (m.at(bi * N + i, bj * N + j) != want)
                        throw std::runtime_error(
                            "matrix is not an identity block inflation");
                }
    return b;
}

struct InflatedAlgebra {
    AlgebraSpec spec;          // base generators first, then the new ones
    int sp_index = -1;         // the adjoined degree-1 derivation generator
    std::vector<int> wrapped;  // indices of the 1 (x) m generators
    LinComb selector;          // s, over base generator indices
};

// Adjoin a fresh letter: s' = d_eps - s (x) eps^{p-1} together with 1 (x) m
// for the ideal generators m.  The selector must generate the complement of a
// codimension-one ideal, which is checked at the given truncation level.
inline InflatedAlgebra inflate(const AlgebraSpec& base, const LinComb& selector,
                               const std::vector<LinComb>& ideal, int check_level = 3) {
    if (base.d != base.p)
        throw std::invalid_argument("inflation needs alphabet dimension d = p");
    const int p = base.p;
    SpecMats sm(base);
    {  // the ideal generated by the given elements must have codimension one
        int n = check_level;
        std::size_t len = sm.gen(0, n).a.size();
        std::vector<Mat> work;
        RowSpace ispan(p, len);
        for (const LinComb& lc : ideal) {
            Mat m = sm.combo(lc, n);
            if (ispan.insert(m)) work.push_back(std::move(m));
        }
        for (std::size_t i = 0; i < work.size(); ++i) {
            Mat mi = work[i];
            for (std::size_t gj = 0; gj < base.gens.size(); ++gj) {
                Mat br = mat_commutator(mi, sm.gen(static_cast<int>(gj), n), p);
                if (ispan.insert(br)) work.push_back(std::move(br));
            }
            if (base.restricted) {
                Mat pw = mat_pow(mi, p, p);
                if (ispan.insert(pw)) work.push_back(std::move(pw));
            }
        }
        RowSpace full = ispan;
        std::vector<Mat> fwork;
        Mat sel = sm.combo(selector, n);
        bool sel_new = full.insert(sel);
        if (sel_new) fwork.push_back(sel);
        for (std::size_t gi = 0; gi < base.gens.size(); ++gi) {
            Mat m = sm.gen(static_cast<int>(gi), n);
            if (full.insert(m)) fwork.push_back(std::move(m));
        }
        for (std::size_t i = 0; i < fwork.size(); ++i) {
            Mat mi = fwork[i];
            for (std::size_t gj = 0; gj < base.gens.size(); ++gj) {
                Mat br = mat_commutator(mi, sm.gen(static_cast<int>(gj), n), p);
                if (full.insert(br)) fwork.push_back(std::move(br));
            }
            if (base.restricted) {
                Mat pw = mat_pow(mi, p, p);
                if (full.insert(pw)) fwork.push_back(std::move(pw));
            }
        }
        if (!sel_new || full.dim() != ispan.dim() + 1)
            throw std::runtime_error("selector defines no codimension-1 ideal");
    }
    InflatedAlgebra out;
    out.spec = base;
    out.selector = selector;
    AlgebraSpec& s = out.spec;
    GenRule sp;
    sp.name = "sp";
    sp.der = poly_monomial(p, 0);
    sp.terms = {{poly_monomial(p, p - 1, static_cast<u8>(p - 1)), selector}};
    if (s.ring) sp.degree = deg_make(*s.ring, {1});
    out.sp_index = static_cast<int>(s.gens.size());
    s.gens.push_back(std::move(sp));
    for (std::size_t k = 0; k < ideal.size(); ++k) {
        GenRule w;
        w.name = ideal[k].size() == 1 && ideal[k][0].second == 1
                     ? "m" + base.gens[static_cast<std::size_t>(ideal[k][0].first)].name
                     : "m" + std::to_string(k);
        w.terms = {{poly_monomial(p, 0), ideal[k]}};
        w.der = poly_zero(p);
        if (s.ring) {
            std::optional<Degree> dg;
            for (const auto& [ti, c] : ideal[k]) {
                (void)c;
                const auto& td = base.gens[static_cast<std::size_t>(ti)].degree;
                if (!td || (dg && !(*dg == *td))) {
                    dg.reset();
                    break;
                }
                dg = td;
            }
            if (dg) w.degree = deg_shift(*s.ring, *dg);
        }
        out.wrapped.push_back(static_cast<int>(s.gens.size()));
        s.gens.push_back(std::move(w));
    }
    return out;
}

// Undo an inflation: find the adjoined derivation generator (degree-1 shape,
// referenced by no rule), check that its p-th power collapses onto the
// selector and that it does not commute with the wrapped part, then return
// the sub-spec reachable from the selector and the wrapped elements.
inline AlgebraSpec deflate(const AlgebraSpec& inf, int check_level = 3) {
    const int p = inf.p;
    std::vector<bool> referenced(inf.gens.size(), false);
    for (const GenRule& g : inf.gens)
        for (const auto& [poly, tgt] : g.terms) {
            (void)poly;
            for (const auto& [ti, c] : tgt) {
                (void)c;
                referenced[static_cast<std::size_t>(ti)] = true;
            }
        }
    int spi = -1;
    for (std::size_t gi = 0; gi < inf.gens.size(); ++gi) {
        const GenRule& g = inf.gens[gi];
        if (referenced[gi] || poly_is_zero(g.der) || g.terms.size() != 1) continue;
        const auto& [poly, tgt] = g.terms[0];
        (void)tgt;
        bool shape = poly[static_cast<std::size_t>(inf.d - 1)] == (p - 1) % p;
        for (int e = 0; e + 1 < inf.d; ++e)
            if (poly[static_cast<std::size_t>(e)]) shape = false;
        if (!shape) continue;
        if (spi >= 0) throw std::runtime_error("ambiguous inflation generator");
        spi = static_cast<int>(gi);
    }
    if (spi < 0) throw std::runtime_error("no inflation generator found");
    const LinComb& selector = inf.gens[static_cast<std::size_t>(spi)].terms[0].second;
    std::vector<int> wrapped;
    for (std::size_t gi = 0; gi < inf.gens.size(); ++gi) {
        const GenRule& g = inf.gens[gi];
        if (static_cast<int>(gi) == spi || referenced[gi]) continue;
        if (!poly_is_zero(g.der) || g.terms.size() != 1) continue;
        const auto& [poly, tgt] = g.terms[0];
        (void)tgt;
        bool shape = poly[0] == 1;
        for (int e = 1; e < inf.d; ++e)
            if (poly[static_cast<std::size_t>(e)]) shape = false;
        if (shape) wrapped.push_back(static_cast<int>(gi));
    }
    SpecMats sm(inf);
    {
        bool moves = false;
        for (int wi : wrapped)
            if (!mat_commutator(sm.gen(spi, check_level), sm.gen(wi, check_level), p)
                     .is_zero())
                moves = true;
        if (!wrapped.empty() && !moves)
            throw std::runtime_error(
                "the derivation generator commutes with the wrapped part");
        for (int k = 1; k <= check_level; ++k) {
            Mat pw = mat_pow(sm.gen(spi, k), p, p);
            Mat got = collapse_kron_identity(pw, inf.d);
            if (!(got == sm.combo(selector, k - 1)))
                throw std::runtime_error(
                    "p-th power does not collapse onto the selector");
        }
    }
    // reachable base generators: selector targets, wrapped targets, then close
    std::vector<bool> keep(inf.gens.size(), false);
    std::vector<int> stack;
    auto mark = [&](int gi) {
        if (!keep[static_cast<std::size_t>(gi)]) {
            keep[static_cast<std::size_t>(gi)] = true;
            stack.push_back(gi);
        }
    };
    for (const auto& [ti, c] : selector) {
        (void)c;
        mark(ti);
    }
    for (int wi : wrapped)
        for (const auto& [ti, c] : inf.gens[static_cast<std::size_t>(wi)].terms[0].second) {
            (void)c;
            mark(ti);
        }
    while (!stack.empty()) {
        int gi = stack.back();
        stack.pop_back();
        for (const auto& [poly, tgt] : inf.gens[static_cast<std::size_t>(gi)].terms) {
            (void)poly;
            for (const auto& [ti, c] : tgt) {
                (void)c;
                mark(ti);
            }
        }
    }
    AlgebraSpec out;
    out.p = inf.p;
    out.d = inf.d;
    out.restricted = inf.restricted;
    out.ring = inf.ring;
    std::vector<int> remap(inf.gens.size(), -1);
    for (std::size_t gi = 0; gi < inf.gens.size(); ++gi)
        if (keep[gi]) {
            remap[gi] = static_cast<int>(out.gens.size());
            out.gens.push_back(inf.gens[gi]);
        }
    for (GenRule& g : out.gens)
        for (auto& [poly, tgt] : g.terms) {
            (void)poly;
            for (auto& [ti, c] : tgt) {
                (void)c;
                ti = remap[static_cast<std::size_t>(ti)];
            }
        }
    return out;
}

// ---------- the catalog ----------

struct Expectations {
    std::vector<i64> dims;              // exact closure dimensions from level 1
    // closure mode for dims/hausdorff; unset = the spec's own mode
    std::optional<bool> closure_restricted;
    std::optional<Rational> hausdorff;  // relative density limit
    int hausdorff_lo = 0, hausdorff_hi = 0;
    int nucleus_margin = 0;  // 0 = no nucleus check
    int nucleus_dim = 0;
    std::vector<std::string> nucleus_span;             // generator names spanning it
    std::vector<std::pair<std::string, i64>> orders;   // group word -> exact order
    // (letter word, level, expect zero) for matrix families
    std::vector<std::tuple<std::string, int, bool>> word_vanishes;
};

struct CatalogEntry {
    std::string name;
    std::string summary;
    std::optional<AlgebraSpec> alg;
    std::optional<GroupSpec> grp;
    std::function<Mat(char, int)> letters;
    std::vector<i64> bin_weights;  // default binning for graded runs
    Expectations expect;
};

inline const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> v;
        {
            CatalogEntry e;
            e.name = "gs";
            e.summary = "degree-3 self-similar algebra x(x)a + x^2(x)t with scaling x^2-2x-1";
            e.alg = gupta_sidki(3);
            e.bin_weights = {1, 2};
            e.expect.dims = {1, 3, 7, 19, 55};
            e.expect.hausdorff = Rational(4, 9);
            e.expect.hausdorff_lo = 2;
            e.expect.hausdorff_hi = 5;
            e.expect.nucleus_margin = 4;
            e.expect.nucleus_dim = 2;
            e.expect.nucleus_span = {"a", "t"};
            v.push_back(std::move(e));
        }
        {
            CatalogEntry e;
            e.name = "grig";
            e.summary = "degree-2 four-generator algebra, restricted";
            e.alg = grigorchuk(true);
            e.bin_weights = {1};
            e.expect.dims = {1, 3, 7, 12, 21, 38, 71};
            e.expect.nucleus_margin = 5;
            e.expect.nucleus_dim = 3;
            e.expect.nucleus_span = {"a", "b", "d"};
            v.push_back(std::move(e));
        }
        {
            CatalogEntry e;
            e.name = "grig-unrestricted";
            e.summary = "degree-2 four-generator algebra without p-th powers";
            e.alg = grigorchuk(false);
            e.bin_weights = {1};
            e.expect.dims = {1, 3, 7, 11, 19, 35, 67};
            e.expect.hausdorff = Rational(1, 2);
            e.expect.hausdorff_lo = 3;
            e.expect.hausdorff_hi = 6;
            v.push_back(std::move(e));
        }
        {
            CatalogEntry e;
            e.name = "fg";
            e.summary = "degree-3 algebra x^2(x)(a+t) with integer scaling 3";
            e.alg = fabrykowski_gupta(3);
            e.bin_weights = {1};
            e.expect.dims = {1, 4, 5, 6};
            e.expect.nucleus_margin = 4;
            e.expect.nucleus_dim = 2;
            e.expect.nucleus_span = {"a", "t"};
            v.push_back(std::move(e));
        }
        {
            CatalogEntry e;
            e.name = "psz22";
            e.summary = "two-step chain over F_2: v -> 1(x)d1 + x(x)v";
            e.alg = psz(2, 2);
            e.expect.closure_restricted = false;
            e.expect.dims = {1, 2, 3, 4, 6, 10};
            e.expect.hausdorff = Rational(1, 8);
            e.expect.hausdorff_lo = 3;
            e.expect.hausdorff_hi = 6;
            e.expect.nucleus_margin = 5;
            e.expect.nucleus_dim = 2;
            e.expect.nucleus_span = {"d1", "v"};
            v.push_back(std::move(e));
        }
        {
            CatalogEntry e;
            e.name = "psz23";
            e.summary = "two-step chain over F_3: v -> 1(x)d1 + x^2(x)v";
            e.alg = psz(2, 3);
            e.expect.closure_restricted = false;
            e.expect.dims = {1, 2, 4, 8, 20};
            e.expect.hausdorff = Rational(4, 27);
            e.expect.hausdorff_lo = 3;
            e.expect.hausdorff_hi = 5;
            e.expect.nucleus_margin = 4;
            e.expect.nucleus_dim = 2;
            e.expect.nucleus_span = {"d1", "v"};
            v.push_back(std::move(e));
        }
        {
            CatalogEntry e;
            e.name = "psz32";
            e.summary = "three-step chain over F_2";
            e.alg = psz(3, 2);
            e.expect.closure_restricted = false;
            e.expect.dims = {1, 2, 3, 4, 6, 9};
            e.expect.nucleus_margin = 5;
            e.expect.nucleus_dim = 3;
            e.expect.nucleus_span = {"d1", "d2", "v"};
            v.push_back(std::move(e));
        }
        {
            CatalogEntry e;
            e.name = "psz33";
            e.summary = "three-step chain over F_3";
            e.alg = psz(3, 3);
            e.expect.closure_restricted = false;
            e.expect.dims = {1, 2, 3, 5};
            e.expect.nucleus_margin = 3;
            e.expect.nucleus_dim = 3;
            e.expect.nucleus_span = {"d1", "d2", "v"};
            v.push_back(std::move(e));
        }
        {
            CatalogEntry e;
            e.name = "kal2";
            e.summary = "full special-derivation algebra over F_2";
            e.alg = kaloujnine(2);
            e.expect.dims = {1, 3, 7, 15, 31};
            v.push_back(std::move(e));
        }
        {
            CatalogEntry e;
            e.name = "kal3";
            e.summary = "full special-derivation algebra over F_3";
            e.alg = kaloujnine(3);
            e.expect.dims = {1, 4, 13, 40, 121};
            v.push_back(std::move(e));
        }
        {
            CatalogEntry e;
            e.name = "lomega";
            e.summary = "three-generator cycle b -> x(x)e, e -> x(x)f + d/dx, f -> x(x)b + d/dx";
            e.alg = grigorchuk_omega("012", {"b", "e", "f"});
            e.bin_weights = {1};
            v.push_back(std::move(e));
        }
        {
            CatalogEntry e;
            e.name = "sidki";
            e.summary = "monomial matrix family s (lower block) and t (right column)";
            e.letters = [](char ch, int n) { return sidki_matrix(ch, n); };
            e.expect.word_vanishes = {{"ss", 1, true}, {"ss", 2, true}, {"ss", 3, true},
                                      {"ss", 4, true}, {"tt", 1, true}, {"tt", 2, true},
                                      {"tt", 3, false}, {"st", 2, true}, {"st", 3, false}};
            v.push_back(std::move(e));
        }
        {
            CatalogEntry e;
            e.name = "grig-group";
            e.summary = "four-generator tree group, shift a and recursion b=(a,c) c=(a,d) d=(1,b)";
            e.grp = grigorchuk_group();
            e.expect.orders = {{"a", 2}, {"b", 2}, {"c", 2}, {"d", 2}, {"ab", 16}};
            v.push_back(std::move(e));
        }
        {
            CatalogEntry e;
            e.name = "gs-group";
            e.summary = "two-generator ternary tree group, recursion t=(a,aa,t)";
            e.grp = gupta_sidki_group();
            e.expect.orders = {{"t", 3}, {"at", 9}};
            v.push_back(std::move(e));
        }
        {
            CatalogEntry e;
            e.name = "kal2-group";
            e.summary = "iterated wreath generators over F_2";
            e.grp = kaloujnine_group(2);
            e.expect.orders = {{"u1", 2}, {"u2", 2}};
            v.push_back(std::move(e));
        }
        {
            CatalogEntry e;
            e.name = "kal3-group";
            e.summary = "iterated wreath generators over F_3";
            e.grp = kaloujnine_group(3);
            e.expect.orders = {{"u1", 3}, {"u2", 3}};
            v.push_back(std::move(e));
        }
        return v;
    }();
    return entries;
}

inline const CatalogEntry& catalog_entry(const std::string& name) {
    for (const CatalogEntry& e : catalog())
        if (e.name == name) return e;
    throw std::invalid_argument("no catalog entry named '" + name + "'");
}

struct EntryCheck {
    std::string label;
    bool pass = false;
    std::string detail;
};

// Data-driven verification of one catalog entry's expectations.
inline std::vector<EntryCheck> run_entry_checks(const CatalogEntry& e,
                                                i64 cap = DEFAULT_DIM_CAP) {
    std::vector<EntryCheck> out;
    auto push = [&](const std::string& label, bool pass, const std::string& detail) {
        out.push_back({label, pass, detail});
    };
    if (e.alg) {
        const AlgebraSpec& s = *e.alg;
        bool rmode = e.expect.closure_restricted.value_or(s.restricted);
        if (!e.expect.dims.empty()) {
            DimsTable t = dims_table(s, static_cast<int>(e.expect.dims.size()),
                                     rmode, cap);
            bool ok = true;
            std::string got;
            for (std::size_t i = 0; i < t.rows.size(); ++i) {
                if (t.rows[i].second != e.expect.dims[i]) ok = false;
                got += (i ? "," : "") + std::to_string(t.rows[i].second);
            }
            push("dims", ok, "levels 1.." + std::to_string(e.expect.dims.size()) +
                                 " -> " + got);
        }
        if (e.expect.hausdorff) {
            SpecMats sm(s, cap);
            ClosureOptions opt;
            opt.restricted = rmode;
            std::vector<std::pair<int, int>> dd;
            for (int n = e.expect.hausdorff_lo; n <= e.expect.hausdorff_hi; ++n)
                dd.emplace_back(n, level_closure(sm, n, opt, cap).dim);
            HausdorffReport h = hausdorff_fit(dd, s.d, true);
            bool ok = h.conclusive && h.value == *e.expect.hausdorff;
            push("hausdorff", ok,
                 h.conclusive ? h.value.str() : std::string("inconclusive"));
        }
        if (e.expect.nucleus_margin) {
            Engine eng = make_engine(s);
            std::vector<Element> gens;
            for (const GenRule& g : s.gens) gens.push_back(eng.gen(g.name));
            NucleusReport nr =
                nucleus(eng, gens, s.restricted, e.expect.nucleus_margin);
            bool ok = nr.nucleus.dim() == e.expect.nucleus_dim;
            Span want(eng, e.expect.nucleus_margin);
            for (const std::string& nm : e.expect.nucleus_span) want.insert(eng.gen(nm));
            for (const Element& b : nr.nucleus.basis_vecs())
                if (!want.contains(b)) ok = false;
            push("nucleus", ok,
                 "dim " + std::to_string(nr.nucleus.dim()) + ", period " +
                     std::to_string(nr.period));
        }
    }
    if (e.grp) {
        for (const auto& [word, want] : e.expect.orders) {
            OrderReport r = element_order(*e.grp, parse_group_word(*e.grp, word));
            bool ok = r.order && *r.order == want;
            push("order " + word, ok,
                 r.order ? std::to_string(*r.order)
                         : ">= " + std::to_string(r.lower_bound));
        }
    }
    if (e.letters) {
        for (const auto& [word, level, want_zero] : e.expect.word_vanishes) {
            MonomialPresentation pres;
            pres.p = 2;
            pres.letter = e.letters;
            pres.relators = {word};
            bool zero = verify_monomial_relations(pres, level)[0].vanishes;
            push("word " + word + " level " + std::to_string(level),
                 zero == want_zero, zero ? "vanishes" : "nonzero");
        }
    }
    return out;
}

}  // namespace selfsim

#endif  // SELFSIM_CATALOG_HPP
