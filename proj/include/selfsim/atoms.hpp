#ifndef SELFSIM_ATOMS_HPP
#define SELFSIM_ATOMS_HPP

// Symbolic engine for self-similar Lie algebra elements.
//
// An atom is a semantic element with expansion
//   psi(A) = sum_{(e,U)} c * x^e (x) U  +  f(x) d/dx,
// stored by id; targets U are other atoms, so self-referential recursions are
// representable. Elements are finite F_p-combinations of atoms. Brackets of
// atom pairs are memoized and produce new atoms (interned by expansion when the
// result is not self-referential). An atom is zero iff no derivation-carrying
// atom is reachable from it.

#include <cassert>
#include <map>
#include <set>

#include "spec.hpp"

namespace selfsim {

using AtomId = int;
using ExpKey = std::pair<int, AtomId>;  // (letter exponent, target atom)
using Terms = std::map<ExpKey, u8>;
using Element = std::map<AtomId, u8>;

struct Wreath {
    Terms terms;
    TruncPoly der;
};

struct Engine {
    int p, d;
    std::vector<Terms> terms_of;
    std::vector<TruncPoly> der_of;
    std::vector<std::optional<Degree>> deg_of;
    std::map<std::string, AtomId> names;
    std::map<std::pair<Terms, TruncPoly>, AtomId> intern_tbl;
    std::map<std::pair<AtomId, AtomId>, Element> pb_memo;
    std::map<Element, Element> pow_memo;
    std::map<std::pair<AtomId, int>, Mat> mat_memo;
    mutable std::vector<char> nonzero_memo;
    mutable size_t nonzero_upto = 0;

    Engine(int p_, int d_) : p(p_), d(d_) {}

    int atom_count() const { return static_cast<int>(terms_of.size()); }

    Terms norm_terms(const Terms& t) const {
        Terms out;
        for (const auto& [k, c] : t) {
            u8 cc = static_cast<u8>(c % p);
            if (cc && k.first < d) out[k] = cc;
        }
        return out;
    }

    TruncPoly norm_der(TruncPoly f) const {
        f.resize(d, 0);
        for (auto& c : f) c = static_cast<u8>(c % p);
        return f;
    }

    AtomId new_atom(const Terms& terms, const TruncPoly& der, const std::string& name = "") {
        Terms t = norm_terms(terms);
        TruncPoly f = norm_der(der);
        auto key = std::make_pair(t, f);
        AtomId aid;
        auto it = intern_tbl.find(key);
        if (it != intern_tbl.end()) {
            aid = it->second;
        } else {
            aid = atom_count();
            terms_of.push_back(std::move(t));
            der_of.push_back(std::move(f));
            deg_of.emplace_back();
            intern_tbl.emplace(std::move(key), aid);
            nonzero_upto = 0;
        }
        if (!name.empty()) names[name] = aid;
        return aid;
    }

    // placeholder atom for self-referential recursions; fill expansion afterwards
    AtomId placeholder(const std::string& name = "") {
        AtomId aid = atom_count();
        terms_of.emplace_back();
        der_of.push_back(TruncPoly(d, 0));
        deg_of.emplace_back();
        if (!name.empty()) names[name] = aid;
        return aid;
    }

    void fill_atom(AtomId aid, const Terms& terms, const TruncPoly& der) {
        terms_of[aid] = norm_terms(terms);
        der_of[aid] = norm_der(der);
        nonzero_upto = 0;
    }

    Element gen(const std::string& name) const { return Element{{names.at(name), 1}}; }

    // --- zero detection: atom nonzero iff it reaches a derivation-carrying atom ---
    bool atom_nonzero(AtomId a) const {
        if (nonzero_upto != terms_of.size()) {
            size_t n = terms_of.size();
            nonzero_memo.assign(n, 0);
            for (size_t i = 0; i < n; ++i)
                if (!poly_is_zero(der_of[i])) nonzero_memo[i] = 1;
            bool changed = true;
            while (changed) {
                changed = false;
                for (size_t i = 0; i < n; ++i) {
                    if (nonzero_memo[i]) continue;
                    for (const auto& [k, c] : terms_of[i])
                        if (nonzero_memo[k.second]) {
                            nonzero_memo[i] = 1;
                            changed = true;
                            break;
                        }
                }
            }
            nonzero_upto = n;
        }
        return nonzero_memo[a] != 0;
    }

    Element vec_norm(const Element& v) const {
        Element out;
        for (const auto& [a, c] : v) {
            u8 cc = static_cast<u8>(c % p);
            if (cc && atom_nonzero(a)) out[a] = cc;
        }
        return out;
    }

    bool vec_is_zero(const Element& v) const { return vec_norm(v).empty(); }

    // --- derivation arithmetic ---
    // f(x)d/dx . x^e = e * f(x) * x^{e-1}
    std::vector<std::pair<int, u8>> der_apply(const TruncPoly& der, int e) const {
        std::vector<std::pair<int, u8>> out;
        if (e == 0) return out;
        for (int i = 0; i < static_cast<int>(der.size()); ++i) {
            if (!(der[i] % p)) continue;
            int ee = e - 1 + i;
            if (ee < d) out.emplace_back(ee, static_cast<u8>(e * der[i] % p));
        }
        return out;
    }

    // --- vector arithmetic ---
    Element scal(const Element& v, int c) const {
        Element out;
        c = ((c % p) + p) % p;
        for (const auto& [a, cc] : v) {
            u8 r = static_cast<u8>(cc * c % p);
            if (r) out[a] = r;
        }
        return out;
    }

    Element add(const Element& v, const Element& w) const {
        Element out = v;
        for (const auto& [a, c] : w) {
            u8 r = static_cast<u8>((out[a] + c) % p);
            if (r)
                out[a] = r;
            else
                out.erase(a);
        }
        return out;
    }

    // --- bracket ---
    Element pair_bracket(AtomId A, AtomId B) {
        if (A == B) return {};
        if (A > B) return scal(pair_bracket(B, A), p - 1);
        auto key = std::make_pair(A, B);
        auto it = pb_memo.find(key);
        if (it != pb_memo.end()) return it->second;
        AtomId aid = placeholder();
        pb_memo[key] = Element{{aid, 1}};
        Terms tA = terms_of[A], tB = terms_of[B];
        TruncPoly dA = der_of[A], dB = der_of[B];
        Terms terms;
        auto addt = [&](int e, AtomId u, int c) {
            c = ((c % p) + p) % p;
            if (!c) return;
            u8& slot = terms[{e, u}];
            slot = static_cast<u8>((slot + c) % p);
        };
        for (const auto& [k1, c1] : tA)
            for (const auto& [k2, c2] : tB) {
                if (k1.first + k2.first >= d) continue;
                for (const auto& [w, cw] : pair_bracket(k1.second, k2.second))
                    addt(k1.first + k2.first, w, c1 * c2 * cw);
            }
        for (const auto& [k2, c2] : tB)
            for (const auto& [ee, cc] : der_apply(dA, k2.first)) addt(ee, k2.second, c2 * cc);
        for (const auto& [k1, c1] : tA)
            for (const auto& [ee, cc] : der_apply(dB, k1.first)) addt(ee, k1.second, -c1 * cc);
        TruncPoly der = derivation_bracket(dA, dB, p);
        Terms nt = norm_terms(terms);
        TruncPoly nd = norm_der(der);
        bool refs_self = false;
        for (const auto& [k, c] : nt)
            if (k.second == aid) refs_self = true;
        if (!refs_self) {
            auto kkey = std::make_pair(nt, nd);
            auto fit = intern_tbl.find(kkey);
            if (fit != intern_tbl.end()) {
                AtomId canon = fit->second;
                pb_memo[key] = Element{{canon, 1}};
                return Element{{canon, 1}};
            }
            intern_tbl.emplace(kkey, aid);
        }
        terms_of[aid] = std::move(nt);
        der_of[aid] = std::move(nd);
        if (deg_of[A] && deg_of[B]) deg_of[aid] = deg_add(*deg_of[A], *deg_of[B]);
        nonzero_upto = 0;
        return Element{{aid, 1}};
    }

    Element bracket(const Element& v, const Element& w) {
        Element out;
        for (const auto& [A, cA] : v)
            for (const auto& [B, cB] : w)
                for (const auto& [x, cx] : pair_bracket(A, B)) {
                    u8& slot = out[x];
                    slot = static_cast<u8>((slot + cA * cB * cx) % p);
                }
        for (auto it2 = out.begin(); it2 != out.end();)
            it2 = it2->second ? std::next(it2) : out.erase(it2);
        return out;
    }

    // --- p-th powers via the restricted structure of the wreath target ---
    TruncPoly der_p_power(const TruncPoly& der) const {
        Mat M = m_der(der, p, d);
        Mat P = Mat::identity(d);
        for (int i = 0; i < p; ++i) P = mat_mul(P, M, p);
        TruncPoly g(d, 0);
        for (int i = 0; i < d; ++i) g[i] = P.at(i, 1);
        assert(m_der(g, p, d) == P && "p-power of a special derivation must be special");
        return g;
    }

    Wreath wbracket(const Wreath& W1, const Wreath& W2) {
        Terms terms;
        auto addt = [&](int e, AtomId u, int c) {
            c = ((c % p) + p) % p;
            if (!c) return;
            u8& slot = terms[{e, u}];
            slot = static_cast<u8>((slot + c) % p);
        };
        for (const auto& [k1, c1] : W1.terms)
            for (const auto& [k2, c2] : W2.terms) {
                if (k1.first + k2.first >= d) continue;
                for (const auto& [w, cw] : pair_bracket(k1.second, k2.second))
                    addt(k1.first + k2.first, w, c1 * c2 * cw);
            }
        for (const auto& [k2, c2] : W2.terms)
            for (const auto& [ee, cc] : der_apply(W1.der, k2.first)) addt(ee, k2.second, c2 * cc);
        for (const auto& [k1, c1] : W1.terms)
            for (const auto& [ee, cc] : der_apply(W2.der, k1.first)) addt(ee, k1.second, -c1 * cc);
        return {norm_terms(terms), norm_der(derivation_bracket(W1.der, W2.der, p))};
    }

    Wreath wadd(const Wreath& A, const Wreath& B) const {
        Terms terms = A.terms;
        for (const auto& [k, c] : B.terms) {
            u8& slot = terms[k];
            slot = static_cast<u8>((slot + c) % p);
        }
        TruncPoly der = norm_der(A.der);
        TruncPoly db = norm_der(B.der);
        for (int i = 0; i < d; ++i) der[i] = static_cast<u8>((der[i] + db[i]) % p);
        return {norm_terms(terms), der};
    }

    Wreath wscal(const Wreath& W, int c) const {
        c = ((c % p) + p) % p;
        Terms terms;
        for (const auto& [k, v] : W.terms) terms[k] = static_cast<u8>(v * c % p);
        TruncPoly der = norm_der(W.der);
        for (auto& v : der) v = static_cast<u8>(v * c % p);
        return {norm_terms(terms), der};
    }

    bool wis_zero(const Wreath& W) const { return W.terms.empty() && poly_is_zero(W.der); }

    Wreath wreath_p_power(const Wreath& W) {
        std::vector<Wreath> comps;
        if (!poly_is_zero(W.der)) comps.push_back({{}, W.der});
        for (const auto& [k, c] : W.terms) comps.push_back({Terms{{k, c}}, TruncPoly(d, 0)});
        return fold_comps(comps);
    }

    Wreath fold_comps(const std::vector<Wreath>& comps) {
        if (comps.empty()) return {{}, TruncPoly(d, 0)};
        if (comps.size() == 1) {
            const Wreath& W = comps[0];
            if (!poly_is_zero(W.der)) return {{}, norm_der(der_p_power(W.der))};
            auto [k, c] = *W.terms.begin();
            if (k.first >= 1) return {{}, TruncPoly(d, 0)};  // (x^e (x) u)^p has x^{pe} = 0
            Element inner = vec_p_power(Element{{k.second, 1}});
            Terms t;
            for (const auto& [w, cw] : inner) {
                u8 cc = static_cast<u8>(cw * c % p);  // c^p = c in F_p
                if (cc) t[{0, w}] = cc;
            }
            return {norm_terms(t), TruncPoly(d, 0)};
        }
        Wreath u = comps[0];
        Wreath w{{}, TruncPoly(d, 0)};
        std::vector<Wreath> rest(comps.begin() + 1, comps.end());
        for (const auto& r : rest) w = wadd(w, r);
        return wadd(wadd(fold_comps({comps[0]}), fold_comps(rest)), wjacobson(u, w));
    }

    // ad-polynomial coefficients of (tu+w)^{p-1} acting on u, summed with 1/i weights
    Wreath wjacobson(const Wreath& u, const Wreath& w) {
        std::vector<Wreath> P{u};
        for (int step = 0; step < p - 1; ++step) {
            std::vector<Wreath> Q;
            for (int j = 0; j <= static_cast<int>(P.size()); ++j) {
                Wreath acc{{}, TruncPoly(d, 0)};
                if (j - 1 >= 0 && j - 1 < static_cast<int>(P.size()))
                    acc = wadd(acc, wbracket(u, P[j - 1]));
                if (j < static_cast<int>(P.size())) acc = wadd(acc, wbracket(w, P[j]));
                Q.push_back(acc);
            }
            P = std::move(Q);
        }
        Wreath total{{}, TruncPoly(d, 0)};
        for (int i = 1; i < p; ++i) total = wadd(total, wscal(P[i - 1], fp_inv(i, p)));
        return total;
    }

    Element vec_p_power(const Element& v0) {
        Element v;
        for (const auto& [a, c] : v0) {
            u8 cc = static_cast<u8>(c % p);
            if (cc) v[a] = cc;
        }
        auto it = pow_memo.find(v);
        if (it != pow_memo.end()) return it->second;
        Wreath W{{}, TruncPoly(d, 0)};
        for (const auto& [a, c] : v) W = wadd(W, wscal(Wreath{terms_of[a], der_of[a]}, c));
        Wreath R = wreath_p_power(W);
        Element out;
        if (!wis_zero(R)) {
            AtomId aid = new_atom(R.terms, R.der);
            if (!deg_of[aid]) {
                std::optional<Degree> hd = element_degree(v);
                if (hd) deg_of[aid] = deg_scale(*hd, p);
            }
            out[aid] = 1;
        }
        pow_memo[v] = out;
        return out;
    }

    // --- truncation matrices ---
    const Mat& mat(AtomId aid, int n) {
        auto key = std::make_pair(aid, n);
        auto it = mat_memo.find(key);
        if (it != mat_memo.end()) return it->second;
        Mat M;
        if (n == 0) {
            M = Mat(1);
        } else {
            int N = static_cast<int>(checked_dim(d, n));
            M = Mat(N);
            for (const auto& [k, c] : terms_of[aid])
                M = mat_add(M, kron(m_mul(poly_monomial(d, k.first, c), p, d), mat(k.second, n - 1), p), p);
            if (!poly_is_zero(der_of[aid]))
                M = mat_add(M, kron(m_der(der_of[aid], p, d), Mat::identity(N / d), p), p);
        }
        return mat_memo.emplace(key, std::move(M)).first->second;
    }

    Mat vec_mat(const Element& v, int n) {
        Mat M(n == 0 ? 1 : static_cast<int>(checked_dim(d, n)));
        for (const auto& [a, c] : v) mat_add_inplace(M, mat(a, n), c, p);
        return M;
    }

    // merged expansion of a vector with zero atoms dropped
    Wreath expansion_of(const Element& v) const {
        Terms terms;
        TruncPoly der(d, 0);
        for (const auto& [a, c] : v) {
            for (const auto& [k, c2] : terms_of[a]) {
                if (!atom_nonzero(k.second)) continue;
                u8& slot = terms[k];
                slot = static_cast<u8>((slot + c * c2) % p);
            }
            for (int i = 0; i < d; ++i) der[i] = static_cast<u8>((der[i] + c * der_of[a][i]) % p);
        }
        Terms out;
        for (const auto& [k, c] : terms)
            if (c) out[k] = c;
        return {out, der};
    }

    // component vectors of psi(v), one per letter exponent, zero components dropped
    std::vector<Element> psi_hat_vec(const Element& v) const {
        std::map<int, Element> comps;
        for (const auto& [a, c] : v)
            for (const auto& [k, c2] : terms_of[a]) {
                u8& slot = comps[k.first][k.second];
                slot = static_cast<u8>((slot + c * c2) % p);
            }
        std::vector<Element> out;
        for (auto& [e, w] : comps) {
            Element nw = vec_norm(w);
            if (!nw.empty()) out.push_back(std::move(nw));
        }
        return out;
    }

    // coordinate of psi(v) at the basis vector 1 of the first letter
    Element coord_at_one(const Element& v) const {
        Wreath w = expansion_of(v);
        Element out;
        for (const auto& [k, c] : w.terms)
            if (k.first == 0) out[k.second] = c;
        return out;
    }

    // common grading degree of all nonzero atoms, if homogeneous
    std::optional<Degree> element_degree(const Element& v) const {
        std::optional<Degree> got;
        for (const auto& [a, c] : v) {
            if (!atom_nonzero(a)) continue;
            if (!deg_of[a]) return std::nullopt;
            if (!got)
                got = deg_of[a];
            else if (!(*got == *deg_of[a]))
                return std::nullopt;
        }
        return got;
    }
};

// build an engine from a presentation; generator atoms mirror the psi rules
inline Engine make_engine(const AlgebraSpec& s) {
    Engine E(s.p, s.d);
    std::vector<AtomId> ids;
    for (const auto& g : s.gens) ids.push_back(E.placeholder(g.name));
    for (size_t i = 0; i < s.gens.size(); ++i) {
        const GenRule& g = s.gens[i];
        Terms terms;
        for (const auto& [poly, tgt] : g.terms)
            for (int e = 0; e < s.d; ++e) {
                if (!poly[e]) continue;
                for (const auto& [ti, c] : tgt) {
                    u8& slot = terms[{e, ids[ti]}];
                    slot = static_cast<u8>((slot + poly[e] * c) % s.p);
                }
            }
        E.fill_atom(ids[i], terms, g.der);
        if (g.degree) E.deg_of[ids[i]] = *g.degree;
    }
    return E;
}

}  // namespace selfsim

#endif
