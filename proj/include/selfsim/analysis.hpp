// Structure analysis on top of the symbolic engine: spans of elements in
// truncation coordinates, the nucleus iteration, finite-state closures,
// norm/evanescence machines on the expansion graph, nil towers, level
// transitivity, embedding levels and certified equality margins.
#ifndef SELFSIM_ANALYSIS_HPP
#define SELFSIM_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/atoms.hpp"
#include "selfsim/degree.hpp"
#include "selfsim/gf.hpp"
#include "selfsim/spec.hpp"

namespace selfsim {

// Raised when a semidecidable iteration (nucleus, cycle search) exhausts its
// caps without stabilizing; message carries the trace position.
struct ContractionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Span of symbolic elements, coordinatized by flattened truncation matrices
// at a fixed margin level.  Rows are kept fully reduced with sorted pivots,
// so canon_key() is a canonical name for the subspace.
class Span {
  public:
    struct Row {
        std::size_t pivot;
        std::vector<u8> row;
        Element sym;
    };
    using Key = std::vector<std::pair<std::size_t, std::vector<u8>>>;

    Span(Engine& eng, int margin) : eng_(&eng), margin_(margin) {}

    std::vector<u8> coords(const Element& v) const {
        return eng_->vec_mat(v, margin_).a;
    }

    bool insert(const Element& raw) {
        Element v = eng_->vec_norm(raw);
        if (v.empty()) return false;
        const int p = eng_->p;
        std::vector<u8> r = coords(v);
        reduce_(r);
        std::size_t piv = first_nonzero_(r);
        if (piv == r.size()) return false;
        u8 inv = fp_inv(r[piv], p);
        for (auto& x : r) x = static_cast<u8>((x * inv) % p);
        for (auto& row : rows_) {
            u8 c = row.row[piv];
            if (c) sub_scaled_(row.row, r, c);
        }
        rows_.push_back(Row{piv, std::move(r), std::move(v)});
        std::sort(rows_.begin(), rows_.end(),
                  [](const Row& x, const Row& y) { return x.pivot < y.pivot; });
        return true;
    }

    bool contains(const Element& v) const {
        std::vector<u8> r = coords(v);
        reduce_(r);
        return first_nonzero_(r) == r.size();
    }

    int dim() const { return static_cast<int>(rows_.size()); }

    Key canon_key() const {
        Key k;
        k.reserve(rows_.size());
        for (const auto& row : rows_) k.emplace_back(row.pivot, row.row);
        return k;  // rows already sorted by pivot
    }

    std::vector<Element> basis_vecs() const {
        std::vector<Element> out;
        out.reserve(rows_.size());
        for (const auto& row : rows_) out.push_back(row.sym);
        return out;
    }

    Engine& engine() const { return *eng_; }
    int margin() const { return margin_; }

  private:
    void reduce_(std::vector<u8>& r) const {
        const int p = eng_->p;
        for (const auto& row : rows_) {
            u8 c = r[row.pivot];
            if (c) {
                std::vector<u8>& rr = r;
                u8 mult = static_cast<u8>((p - c) % p);
                for (std::size_t i = 0; i < rr.size(); ++i)
                    rr[i] = static_cast<u8>((rr[i] + mult * row.row[i]) % p);
            }
        }
    }
    void sub_scaled_(std::vector<u8>& dst, const std::vector<u8>& src, u8 c) const {
        const int p = eng_->p;
        u8 mult = static_cast<u8>((p - c) % p);
        for (std::size_t i = 0; i < dst.size(); ++i)
            dst[i] = static_cast<u8>((dst[i] + mult * src[i]) % p);
    }
    static std::size_t first_nonzero_(const std::vector<u8>& r) {
        for (std::size_t i = 0; i < r.size(); ++i)
            if (r[i]) return i;
        return r.size();
    }

    Engine* eng_;
    int margin_;
    std::vector<Row> rows_;
};

// Image of a span under the expansion map: inserts every per-exponent
// component of every basis element.
inline Span psi_hat_span(Engine& eng, const Span& s, int margin) {
    Span out(eng, margin);
    for (const Element& v : s.basis_vecs())
        for (const Element& w : eng.psi_hat_vec(v))
            out.insert(w);
    return out;
}

struct NucleusReport {
    Span nucleus;    // span(generators) + attractor
    Span attractor;  // union of the limit cycle of the expansion iteration
    int transient = 0;
    int period = 0;
};

// Saturation loop: B = N + S + [N,S] (+ p-th powers when restricted), then
// iterate the expansion map on B until the span sequence cycles; the nucleus
// candidate is span(S) plus the cycle union.  Stops when stable across outer
// rounds; throws ContractionError when a cap is exhausted.
inline NucleusReport nucleus(Engine& eng, const std::vector<Element>& gen_vecs,
                             bool restricted, int margin, int max_outer = 30,
                             int max_inner = 60) {
    Span N(eng, margin);
    for (const Element& g : gen_vecs) N.insert(g);
    for (int outer = 0; outer < max_outer; ++outer) {
        Span::Key prev = N.canon_key();
        Span B(eng, margin);
        for (const Element& v : N.basis_vecs()) B.insert(v);
        for (const Element& g : gen_vecs) B.insert(g);
        for (const Element& v : N.basis_vecs())
            for (const Element& g : gen_vecs) B.insert(eng.bracket(v, g));
        if (restricted) {
            std::vector<Element> snapshot = B.basis_vecs();
            for (const Element& v : snapshot) B.insert(eng.vec_p_power(v));
        }
        std::vector<Span> seq;
        seq.push_back(B);
        std::map<Span::Key, int> keys;
        keys[B.canon_key()] = 0;
        int start = -1, period = 0;
        for (int i = 1; i < max_inner; ++i) {
            Span nxt = psi_hat_span(eng, seq.back(), margin);
            Span::Key k = nxt.canon_key();
            auto it = keys.find(k);
            if (it != keys.end()) {
                start = it->second;
                period = i - it->second;
                seq.push_back(std::move(nxt));
                break;
            }
            keys[k] = i;
            seq.push_back(std::move(nxt));
        }
        if (start < 0)
            throw ContractionError(
                "expansion iteration did not cycle within the iteration cap (outer round " +
                std::to_string(outer) + ")");
        Span attractor(eng, margin);
        for (int j = start; j < start + period; ++j)
            for (const Element& v : seq[static_cast<std::size_t>(j)].basis_vecs())
                attractor.insert(v);
        Span next(eng, margin);
        for (const Element& g : gen_vecs) next.insert(g);
        for (const Element& v : attractor.basis_vecs()) next.insert(v);
        N = next;
        if (N.canon_key() == prev)
            return NucleusReport{N, attractor, start, period};
    }
    throw ContractionError("nucleus outer loop did not converge within the cap");
}

// Accumulated states of an element under repeated expansion: the smallest
// expansion-stable span containing it (finite for finite-state elements).
inline Span finite_state(Engine& eng, const Element& v, int margin, int iters = 10) {
    Span cur(eng, margin);
    cur.insert(v);
    Span acc = cur;
    for (int i = 0; i < iters; ++i) {
        cur = psi_hat_span(eng, cur, margin);
        bool grew = false;
        for (const Element& w : cur.basis_vecs())
            if (acc.insert(w)) grew = true;
        if (!grew) break;
    }
    return acc;
}

// Atom ids reachable from the support of v along expansion edges.
inline std::set<AtomId> reach_atoms(const Engine& eng, const Element& v) {
    std::set<AtomId> seen;
    std::vector<AtomId> stack;
    for (const auto& [a, c] : v) {
        (void)c;
        if (seen.insert(a).second) stack.push_back(a);
    }
    while (!stack.empty()) {
        AtomId a = stack.back();
        stack.pop_back();
        for (const auto& [key, c] : eng.terms_of[static_cast<std::size_t>(a)]) {
            (void)c;
            AtomId u = key.second;
            if (seen.insert(u).second) stack.push_back(u);
        }
    }
    return seen;
}

// Norm machine: longest accumulated codegree over expansion paths into a
// derivation state, computed per support atom (sums take the max).  Edge
// weight for letter exponent e is d-1-e; a strictly positive cycle that
// reaches a derivation state means the element is unbounded (nullopt).
inline std::optional<int> machine_norm(Engine& eng, const Element& raw) {
    Element v = eng.vec_norm(raw);
    const long long NEG = std::numeric_limits<long long>::min() / 4;
    int best = 0;
    bool unbounded = false;
    for (const auto& [root, c0] : v) {
        (void)c0;
        std::vector<AtomId> atoms;
        for (AtomId x : reach_atoms(eng, Element{{root, 1}}))
            if (eng.atom_nonzero(x)) atoms.push_back(x);
        std::map<AtomId, long long> dist;
        for (AtomId x : atoms) dist[x] = NEG;
        if (!dist.count(root)) continue;  // root itself expands to zero
        dist[root] = 0;
        bool still_changing = true;
        for (std::size_t it = 0; it < atoms.size() + 2; ++it) {
            bool changed = false;
            for (AtomId x : atoms) {
                if (dist[x] == NEG) continue;
                for (const auto& [key, c] : eng.terms_of[static_cast<std::size_t>(x)]) {
                    (void)c;
                    auto [e, u] = key;
                    auto du = dist.find(u);
                    if (du == dist.end()) continue;
                    long long w = dist[x] + (eng.d - 1 - e);
                    if (w > du->second) {
                        du->second = w;
                        changed = true;
                    }
                }
            }
            if (!changed) {
                still_changing = false;
                break;
            }
        }
        if (still_changing) unbounded = true;
        for (AtomId x : atoms)
            if (!poly_is_zero(eng.der_of[static_cast<std::size_t>(x)]) && dist[x] > NEG)
                best = std::max(best, static_cast<int>(dist[x] + 1));
    }
    if (unbounded) return std::nullopt;
    return best;
}

// Evanescence machine: every reachable derivation must be a scalar multiple
// of the basic derivation, and no expansion path may reach a derivation
// state through ell consecutive maximal-exponent letters.
inline bool machine_evanescent(Engine& eng, const Element& raw, int ell) {
    Element v = eng.vec_norm(raw);
    for (const auto& [root, c0] : v) {
        (void)c0;
        std::vector<AtomId> atoms;
        for (AtomId x : reach_atoms(eng, Element{{root, 1}}))
            if (eng.atom_nonzero(x)) atoms.push_back(x);
        for (AtomId x : atoms) {
            const TruncPoly& der = eng.der_of[static_cast<std::size_t>(x)];
            for (std::size_t i = 1; i < der.size(); ++i)
                if (der[i]) return false;  // tail is not a multiple of the basic derivation
        }
        std::set<AtomId> cur;
        for (AtomId x : atoms)
            if (!poly_is_zero(eng.der_of[static_cast<std::size_t>(x)])) cur.insert(x);
        for (int step = 0; step < ell; ++step) {
            std::set<AtomId> prev;
            for (AtomId x : atoms)
                for (const auto& [key, c] : eng.terms_of[static_cast<std::size_t>(x)]) {
                    (void)c;
                    if (key.first == eng.d - 1 && cur.count(key.second)) prev.insert(x);
                }
            cur = std::move(prev);
        }
        if (!cur.empty()) return false;
    }
    return true;
}

// Length of the iterated p-th power tower of a symbolic element: least k with
// the k-fold power equal to zero, or nullopt past the cap.
inline std::optional<int> tower_len(Engine& eng, Element v, int cap = 8) {
    int k = 0;
    while (!eng.vec_is_zero(v) && k < cap) {
        v = eng.vec_p_power(v);
        ++k;
    }
    return eng.vec_is_zero(v) ? std::optional<int>(k) : std::nullopt;
}

// Orbit transitivity at level n: the span of the top monomial vector under
// repeated generator action must be the whole level-n coordinate space.
inline bool transitive(Engine& eng, const std::vector<std::string>& gen_names, int n,
                       i64 cap = DEFAULT_DIM_CAP) {
    i64 N = checked_dim(eng.d, n, cap);
    const int p = eng.p;
    std::vector<Mat> mats;
    for (const std::string& g : gen_names) {
        auto it = eng.names.find(g);
        if (it == eng.names.end())
            throw std::invalid_argument("transitive: unknown generator '" + g + "'");
        mats.push_back(eng.mat(it->second, n));
    }
    RowSpace rs(p, static_cast<std::size_t>(N));
    std::vector<u8> theta(static_cast<std::size_t>(N), 0);
    theta[static_cast<std::size_t>(N - 1)] = 1;
    std::deque<std::vector<u8>> work;
    if (rs.insert(theta)) work.push_back(theta);
    while (!work.empty()) {
        std::vector<u8> r = std::move(work.front());
        work.pop_front();
        for (const Mat& M : mats) {
            std::vector<u8> w = mat_vec(M, r, p);
            if (rs.insert(w)) work.push_back(std::move(w));
        }
    }
    return rs.dim() == static_cast<std::size_t>(N);
}

// Least level at which the given elements have jointly independent
// truncations (a faithful coordinate window); nullopt if none up to kmax.
inline std::optional<int> embed_level(Engine& eng, const std::vector<Element>& vecs,
                                      int kmax = 6) {
    for (int k = 1; k <= kmax; ++k) {
        i64 N = checked_dim(eng.d, k);
        RowSpace rs(eng.p, static_cast<std::size_t>(N * N));
        std::size_t cnt = 0;
        for (const Element& v : vecs)
            if (rs.insert(eng.vec_mat(v, k).a)) ++cnt;
        if (cnt == vecs.size()) return k;
    }
    return std::nullopt;
}

inline bool equal_to_level(Engine& eng, const Element& x, const Element& y, int n) {
    return eng.vec_mat(x, n) == eng.vec_mat(y, n);
}

struct EqualityCert {
    bool equal = false;
    int level = 0;   // truncation level actually compared
    int nstar = 0;   // depth bound from the degree data
    int k0 = 0;      // faithful embedding level of the nucleus
};

// Degree-certified equality: with contraction ratio lambda (the declared
// ring root), element degree bound D and minimal nucleus degree eps, compare
// truncations at level ceil(log_lambda(D/eps)) + k0 + 1.  The margin is a
// design assumption; the level used is always reported.
inline EqualityCert certified_equal(Engine& eng, const DegreeRing& ring,
                                    const Element& x, const Element& y,
                                    const std::vector<Element>& nucleus_basis, int k0,
                                    i64 cap = DEFAULT_DIM_CAP) {
    double lambda = ring.root();
    if (!(lambda > 1.0))
        throw std::invalid_argument("certified_equal: contraction ratio must exceed 1");
    Element diff = eng.add(x, eng.scal(y, static_cast<u8>(eng.p - 1)));
    diff = eng.vec_norm(diff);
    double D = 1.0;
    for (const auto& [a, c] : diff) {
        (void)c;
        const auto& dg = eng.deg_of[static_cast<std::size_t>(a)];
        if (!dg)
            throw std::invalid_argument("certified_equal: element carries an ungraded atom");
        D = std::max(D, std::abs(deg_value(ring, *dg)));
    }
    double eps = 0.0;
    bool have = false;
    for (const Element& b : nucleus_basis)
        for (const auto& [a, c] : b) {
            (void)c;
            const auto& dg = eng.deg_of[static_cast<std::size_t>(a)];
            if (!dg) continue;
            double val = deg_value(ring, *dg);
            if (val > 0 && (!have || val < eps)) {
                eps = val;
                have = true;
            }
        }
    if (!have)
        throw std::invalid_argument("certified_equal: nucleus carries no positive degree data");
    int nstar = 0;
    if (D > eps)
        nstar = static_cast<int>(std::ceil(std::log(D / eps) / std::log(lambda)));
    int level = nstar + k0 + 1;
    checked_dim(eng.d, level, cap);
    return EqualityCert{equal_to_level(eng, x, y, level), level, nstar, k0};
}

struct RecurrenceReport {
    bool ok = false;
    int depth = 0;  // search depth actually used (echoed cap)
    // seed name -> (witness word description, scalar c with image = c * seed)
    std::map<std::string, std::pair<std::string, u8>> witnesses;
    std::vector<std::string> unreached;
};

// Recurrence search: spans bracket words (and p-th powers when requested) of
// the seeds, keeps those whose expansion has no derivation part, and asks
// whether the letter-degree-zero coordinate of some word recovers each seed.
inline RecurrenceReport is_recurrent(Engine& eng,
                                     const std::vector<std::pair<std::string, Element>>& seeds,
                                     int depth, bool use_p_powers, int margin = 4) {
    struct Cand {
        std::string name;
        Element v;
    };
    std::vector<Cand> cands;
    for (const auto& [nm, v] : seeds) cands.push_back({nm, v});
    std::size_t lo = 0;
    for (int round = 1; round < depth; ++round) {
        std::size_t hi = cands.size();
        for (std::size_t i = lo; i < hi; ++i) {
            for (const auto& [nm, s] : seeds) {
                Element w = eng.bracket(cands[i].v, s);
                if (!eng.vec_is_zero(w))
                    cands.push_back({"[" + cands[i].name + "," + nm + "]", w});
            }
            if (use_p_powers) {
                Element w = eng.vec_p_power(cands[i].v);
                if (!eng.vec_is_zero(w))
                    cands.push_back({"(" + cands[i].name + ")^[p]", w});
            }
        }
        lo = hi;
    }
    std::vector<Cand> kernel;
    for (auto& cd : cands) {
        Wreath exp = eng.expansion_of(cd.v);
        if (poly_is_zero(exp.der)) kernel.push_back(cd);
    }
    RecurrenceReport rep;
    rep.depth = depth;
    for (const auto& [nm, seed] : seeds) {
        bool found = false;
        for (const auto& cd : kernel) {
            Element img = eng.coord_at_one(cd.v);
            if (img.empty()) continue;
            for (int c = 1; c < eng.p && !found; ++c) {
                Element d =
                    eng.add(img, eng.scal(seed, static_cast<u8>((eng.p - c) % eng.p)));
                if (eng.vec_is_zero(d)) {
                    rep.witnesses[nm] = {cd.name, static_cast<u8>(c)};
                    found = true;
                }
            }
            if (found) break;
        }
        if (!found) {
            // fall back to span membership (witness is some linear combination)
            Span sp(eng, margin);
            for (const auto& cd : kernel) sp.insert(eng.coord_at_one(cd.v));
            if (sp.contains(seed))
                rep.witnesses[nm] = {"<combination>", 0};
            else
                rep.unreached.push_back(nm);
        }
    }
    rep.ok = rep.unreached.empty();
    return rep;
}

// Exact check that the expansion of kprime is a single term: the monomial
// with exponent e tensored with coeff * k, and no derivation part.
inline bool branching_witness(Engine& eng, const Element& kprime, int e, u8 coeff,
                              const Element& k) {
    Wreath exp = eng.expansion_of(kprime);
    if (!poly_is_zero(exp.der)) return false;
    std::vector<Element> comps = eng.psi_hat_vec(kprime);
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (static_cast<int>(i) == e) continue;
        if (!eng.vec_is_zero(comps[i])) return false;
    }
    if (e < 0 || e >= static_cast<int>(comps.size())) return false;
    Element want = eng.scal(k, coeff);
    Element d = eng.add(comps[static_cast<std::size_t>(e)],
                        eng.scal(want, static_cast<u8>(eng.p - 1)));
    return eng.vec_is_zero(d);
}

// Tower ladder a_{k+1} = 1^{(ell-1) factors} (x) theta (x) a_k + b with
// theta the maximal monomial: returns the first `count` successors of a0.
// Each wrap is materialized as a fresh atom whose expansion is the wrapped
// element; the atom inherits a degree when the inner element is homogeneous.
inline std::vector<Element> nillity_ladder(Engine& eng, const AlgebraSpec& spec,
                                           const Element& a0, const Element& b, int ell,
                                           int count) {
    if (ell < 1) throw std::invalid_argument("nillity_ladder: ell must be positive");
    std::vector<Element> out;
    Element cur = a0;
    for (int step = 0; step < count; ++step) {
        Terms terms;
        for (const auto& [aid, c] : cur) terms[{eng.d - 1, aid}] = c;
        std::optional<Degree> dg;
        if (spec.ring) {
            std::optional<Degree> inner = eng.element_degree(cur);
            if (inner) {
                Degree shifted = deg_shift(*spec.ring, *inner);
                shifted.c[0] -= (eng.d - 1);
                for (int w = 1; w < ell; ++w) shifted = deg_shift(*spec.ring, shifted);
                dg = shifted;
            }
        }
        AtomId aid = eng.new_atom(terms, TruncPoly{}, "");
        if (dg) eng.deg_of[static_cast<std::size_t>(aid)] = dg;
        for (int w = 1; w < ell; ++w) {
            Terms wrap;
            wrap[{0, aid}] = 1;
            AtomId nxt = eng.new_atom(wrap, TruncPoly{}, "");
            if (dg) eng.deg_of[static_cast<std::size_t>(nxt)] = eng.deg_of[static_cast<std::size_t>(aid)];
            aid = nxt;
        }
        cur = eng.add(Element{{aid, 1}}, b);
        out.push_back(cur);
    }
    return out;
}

}  // namespace selfsim

#endif  // SELFSIM_ANALYSIS_HPP
