// Enveloping/associative layer: lifted expression trees with exact matrix
// truncations, associative nil-index search, per-level centralizers inside
// the tableau span, Poincare series with growth estimates, dual-grading
// classification, and monomial-presentation relator checks.
#ifndef SELFSIM_ENVELOPE_HPP
#define SELFSIM_ENVELOPE_HPP

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/atoms.hpp"
#include "selfsim/closure.hpp"
#include "selfsim/degree.hpp"
#include "selfsim/gf.hpp"

namespace selfsim {

// ---------- associative elements over lifted Lie atoms ----------

struct AssocExpr;
using AssocPtr = std::shared_ptr<const AssocExpr>;

struct AssocExpr {
    enum class Kind { Atom, Sum, Prod, Pow };
    Kind kind = Kind::Atom;
    AtomId atom = -1;  // Kind::Atom
    u8 coeff = 1;      // scalar multiplier on an Atom leaf
    std::vector<AssocPtr> kids;
    i64 expo = 1;  // Kind::Pow
};

// null node = the zero element
struct AssocElement {
    AssocPtr node;
};

inline AssocElement lift_atom(AtomId a, u8 coeff = 1) {
    auto e = std::make_shared<AssocExpr>();
    e->kind = AssocExpr::Kind::Atom;
    e->atom = a;
    e->coeff = coeff;
    return {e};
}

// linear lift of a Lie element into the associative layer
inline AssocElement lift(const Element& v) {
    if (v.empty()) return {};
    auto e = std::make_shared<AssocExpr>();
    e->kind = AssocExpr::Kind::Sum;
    for (const auto& [a, c] : v) e->kids.push_back(lift_atom(a, c).node);
    return {e};
}

inline AssocElement assoc_add(const AssocElement& x, const AssocElement& y) {
    if (!x.node) return y;
    if (!y.node) return x;
    auto e = std::make_shared<AssocExpr>();
    e->kind = AssocExpr::Kind::Sum;
    e->kids = {x.node, y.node};
    return {e};
}

inline AssocElement assoc_mul(const AssocElement& x, const AssocElement& y) {
    if (!x.node || !y.node) return {};
    auto e = std::make_shared<AssocExpr>();
    e->kind = AssocExpr::Kind::Prod;
    e->kids = {x.node, y.node};
    return {e};
}

inline AssocElement assoc_pow(const AssocElement& x, i64 k) {
    if (k <= 0) throw std::invalid_argument("assoc_pow: exponent must be positive");
    if (!x.node) return {};
    auto e = std::make_shared<AssocExpr>();
    e->kind = AssocExpr::Kind::Pow;
    e->kids = {x.node};
    e->expo = k;
    return {e};
}

inline Mat assoc_truncate_node(Engine& eng, const AssocPtr& node, int n) {
    int N = n == 0 ? 1 : static_cast<int>(checked_dim(eng.d, n));
    if (!node) return Mat(N);
    switch (node->kind) {
        case AssocExpr::Kind::Atom:
            return mat_scale(eng.mat(node->atom, n), node->coeff, eng.p);
        case AssocExpr::Kind::Sum: {
            Mat acc(N);
            for (const auto& k : node->kids)
                acc = mat_add(acc, assoc_truncate_node(eng, k, n), eng.p);
            return acc;
        }
        case AssocExpr::Kind::Prod: {
            Mat acc = assoc_truncate_node(eng, node->kids[0], n);
            for (std::size_t i = 1; i < node->kids.size(); ++i)
                acc = mat_mul(acc, assoc_truncate_node(eng, node->kids[i], n), eng.p);
            return acc;
        }
        case AssocExpr::Kind::Pow:
            return mat_pow(assoc_truncate_node(eng, node->kids[0], n), node->expo, eng.p);
    }
    return Mat(N);
}

// Action of the element on the level-n tensor power; an algebra map in each
// argument by construction.
inline Mat assoc_truncate(Engine& eng, const AssocElement& u, int n) {
    return assoc_truncate_node(eng, u.node, n);
}

struct MatNilReport {
    std::optional<i64> index;        // least k >= 1 with m^k = 0
    i64 verified_nonzero_up_to = 0;  // largest power checked nonzero when capped
};

// Nil-index search by repeated squaring plus binary refinement: exact least
// vanishing power when within the cap, otherwise the achieved lower bound.
inline MatNilReport mat_nil_index(const Mat& m, int p, i64 k_cap = (i64{1} << 20)) {
    MatNilReport rep;
    if (m.is_zero()) {
        rep.index = 1;
        return rep;
    }
    std::vector<Mat> pows{m};  // pows[j] = m^(2^j)
    i64 e = 1;
    while (true) {
        if (2 * e > k_cap) {
            rep.verified_nonzero_up_to = e;
            return rep;  // capped: m^e != 0
        }
        Mat nxt = mat_mul(pows.back(), pows.back(), p);
        e *= 2;
        if (nxt.is_zero()) break;
        pows.push_back(std::move(nxt));
    }
    // m^(e/2) != 0, m^e = 0: binary search the least vanishing power
    auto power_of = [&](i64 k) {
        Mat acc;
        bool have = false;
        for (std::size_t j = 0; j < pows.size(); ++j)
            if (k & (i64{1} << j)) {
                acc = have ? mat_mul(acc, pows[j], p) : pows[j];
                have = true;
            }
        return acc;
    };
    i64 lo = e / 2, hi = e;  // m^lo != 0, m^hi = 0
    while (hi - lo > 1) {
        i64 mid = lo + (hi - lo) / 2;
        if (power_of(mid).is_zero())
            hi = mid;
        else
            lo = mid;
    }
    rep.index = hi;
    rep.verified_nonzero_up_to = lo;
    return rep;
}

inline MatNilReport assoc_nil_index_at_level(Engine& eng, const AssocElement& u, int n,
                                             i64 k_cap = (i64{1} << 20)) {
    return mat_nil_index(assoc_truncate(eng, u, n), eng.p, k_cap);
}

// ---------- centralizer of the generator truncations inside the tableau span ----------

// Basis (coordinates in depth-major enumeration order over the tableau
// basis) of all W-span matrices commuting with every given element at the
// given level.
inline std::vector<std::vector<u8>> centralizer_at_level(Engine& eng,
                                                         const std::vector<Element>& gens,
                                                         int n, const WBasis& wb) {
    const int p = eng.p;
    std::size_t cols = static_cast<std::size_t>(wb.dim());
    std::size_t nn = static_cast<std::size_t>(wb.matrix_dim());
    std::vector<std::vector<u8>> eq(gens.size() * nn * nn, std::vector<u8>(cols, 0));
    for (std::size_t i = 0; i < cols; ++i) {
        std::vector<u8> unit(cols, 0);
        unit[i] = 1;
        Mat wi = wb.matrix_from_enum(unit);
        for (std::size_t g = 0; g < gens.size(); ++g) {
            Mat b = mat_commutator(wi, eng.vec_mat(gens[g], n), p);
            std::size_t base = g * nn * nn;
            for (std::size_t idx = 0; idx < b.a.size(); ++idx)
                if (b.a[idx]) eq[base + idx][i] = b.a[idx];
        }
    }
    return nullspace_mod(std::move(eq), cols, p);
}

// ---------- Poincare series and growth estimates ----------

// prod over degrees m of (1 - x^m)^(-dims[m]), truncated at the cutoff
inline std::vector<i64> poincare_f0(const std::map<int, int>& dims, int cutoff) {
    std::vector<i64> u(static_cast<std::size_t>(cutoff) + 1, 0);
    u[0] = 1;
    for (const auto& [m, k] : dims) {
        if (m <= 0 || m > cutoff) continue;
        for (int rep = 0; rep < k; ++rep)
            for (int i = m; i <= cutoff; ++i)
                u[static_cast<std::size_t>(i)] += u[static_cast<std::size_t>(i - m)];
    }
    return u;
}

// characteristic 0: f0; characteristic p: f0(x)/f0(x^p), formed per degree as
// the telescoped factor (1 + x^m + ... + x^((p-1)m))^dims[m]
inline std::vector<i64> poincare_u(const std::map<int, int>& dims, int cutoff,
                                   int characteristic) {
    if (characteristic == 0) return poincare_f0(dims, cutoff);
    std::vector<i64> u(static_cast<std::size_t>(cutoff) + 1, 0);
    u[0] = 1;
    for (const auto& [m, k] : dims) {
        if (m <= 0 || m > cutoff) continue;
        for (int rep = 0; rep < k; ++rep) {
            std::vector<i64> nu = u;
            for (int e = 1; e < characteristic; ++e) {
                i64 sh = static_cast<i64>(e) * m;
                if (sh > cutoff) break;
                for (int i = 0; i + sh <= cutoff; ++i)
                    if (u[static_cast<std::size_t>(i)])
                        nu[static_cast<std::size_t>(i + sh)] += u[static_cast<std::size_t>(i)];
            }
            u = std::move(nu);
        }
    }
    return u;
}

inline std::vector<i64> partial_sums(const std::vector<i64>& v) {
    std::vector<i64> s(v.size());
    i64 acc = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc += v[i];
        s[i] = acc;
    }
    return s;
}

// least-squares slope of log(values[n]) against log(n) over n in [from, to]
inline double gk_slope(const std::vector<i64>& values_by_degree, int from, int to) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int nn = 0;
    for (int n = from; n <= to; ++n) {
        double x = std::log(static_cast<double>(n));
        double y = std::log(static_cast<double>(values_by_degree[static_cast<std::size_t>(n)]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++nn;
    }
    return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

// min and max of log(partial[D]) / D^expo over D in [from, to]
inline std::pair<double, double> corridor_ratios(const std::vector<i64>& partial, double expo,
                                                 int from, int to) {
    double lo = 0, hi = 0;
    bool first = true;
    for (int D = from; D <= to; ++D) {
        double r = std::log(static_cast<double>(partial[static_cast<std::size_t>(D)])) /
                   std::pow(static_cast<double>(D), expo);
        if (first || r < lo) lo = r;
        if (first || r > hi) hi = r;
        first = false;
    }
    return {lo, hi};
}

// Direct count of PBW monomials of each total degree: unrestricted allows any
// exponents, characteristic p caps every exponent at p-1.  Cross-checks the
// series arithmetic by an independent route.
inline std::vector<i64> pbw_monomial_counts(const std::map<int, int>& dims, int cutoff,
                                            int characteristic) {
    std::vector<std::pair<int, int>> basis;  // (degree, multiplicity)
    for (const auto& [m, k] : dims)
        if (m > 0 && m <= cutoff) basis.emplace_back(m, k);
    std::vector<i64> cnt(static_cast<std::size_t>(cutoff) + 1, 0);
    cnt[0] = 1;
    for (const auto& [m, k] : basis)
        for (int rep = 0; rep < k; ++rep) {
            std::vector<i64> nxt(cnt.size(), 0);
            int emax = characteristic == 0 ? cutoff / m : characteristic - 1;
            for (int deg = 0; deg <= cutoff; ++deg) {
                if (!cnt[static_cast<std::size_t>(deg)]) continue;
                for (int e = 0; e <= emax && deg + e * m <= cutoff; ++e)
                    nxt[static_cast<std::size_t>(deg + e * m)] += cnt[static_cast<std::size_t>(deg)];
            }
            cnt = std::move(nxt);
        }
    return cnt;
}

// ---------- alpha-numeration (digit counts for the weight recurrence w' = 2w + w'') ----------

inline std::vector<i64> alpha_weights(int nmax) {
    std::vector<i64> w{1, 2};
    while (w.back() <= nmax) w.push_back(2 * w[w.size() - 1] + w[w.size() - 2]);
    return w;
}

// number of representations n = sum digit_i * w_i with digits in {0, 1, 2}
inline i64 alpha_numeration_count(int n, const std::vector<i64>& weights) {
    std::map<std::pair<i64, int>, i64> memo;
    std::function<i64(i64, int)> f = [&](i64 rem, int i) -> i64 {
        if (rem == 0) return 1;
        if (rem < 0 || i < 0) return 0;
        auto key = std::make_pair(rem, i);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        i64 acc = 0;
        for (int k = 0; k < 3; ++k) acc += f(rem - k * weights[static_cast<std::size_t>(i)], i - 1);
        memo[key] = acc;
        return acc;
    };
    return f(n, static_cast<int>(weights.size()) - 1);
}

// ---------- dual-grading classification ----------

// sign of the mu-value of a product of graded factors (degrees add)
inline int classify_monomial(const Rational& mu, const std::vector<Degree>& factors) {
    if (factors.empty()) return 0;
    Degree total = factors[0];
    for (std::size_t i = 1; i < factors.size(); ++i) total = deg_add(total, factors[i]);
    return mu_classify(total, mu);
}

// ---------- monomial presentations ----------

struct MonomialPresentation {
    int p = 2;
    std::function<Mat(char, int)> letter;   // letter matrix at a given level
    std::vector<std::string> relators;      // words; '+' joins summed words
    std::map<char, std::string> substitution;
    int sigma_iterations = 0;               // relators checked for sigma^0..^iters
};

struct RelatorResult {
    std::string relator;  // after substitution
    int sigma_power = 0;
    bool vanishes = false;
};

inline std::string apply_substitution(const std::map<char, std::string>& sub,
                                      const std::string& word) {
    std::string out;
    for (char ch : word) {
        auto it = sub.find(ch);
        if (it != sub.end())
            out += it->second;
        else
            out += ch;
    }
    return out;
}

inline Mat evaluate_word_sum(const MonomialPresentation& pres, const std::string& expr,
                             int level) {
    Mat acc;
    bool have_acc = false;
    std::size_t start = 0;
    while (start <= expr.size()) {
        std::size_t plus = expr.find('+', start);
        std::string word = expr.substr(start, plus == std::string::npos ? plus : plus - start);
        Mat m;
        bool have = false;
        for (char ch : word) {
            if (ch == ' ') continue;
            Mat lm = pres.letter(ch, level);
            m = have ? mat_mul(m, lm, pres.p) : lm;
            have = true;
        }
        if (!have) throw std::invalid_argument("empty word in relator: " + expr);
        acc = have_acc ? mat_add(acc, m, pres.p) : m;
        have_acc = true;
        if (plus == std::string::npos) break;
        start = plus + 1;
    }
    return acc;
}

// Evaluate every relator (and its substitution iterates) at the level; a
// relator passes when its matrix vanishes.
inline std::vector<RelatorResult> verify_monomial_relations(const MonomialPresentation& pres,
                                                            int level) {
    std::vector<RelatorResult> out;
    for (const auto& rel : pres.relators) {
        int iters = pres.substitution.empty() ? 0 : pres.sigma_iterations;
        std::string cur = rel;
        for (int s = 0; s <= iters; ++s) {
            RelatorResult rr;
            rr.relator = cur;
            rr.sigma_power = s;
            rr.vanishes = evaluate_word_sum(pres, cur, level).is_zero();
            out.push_back(std::move(rr));
            if (s < iters) {
                std::string nxt;
                std::size_t start = 0;
                while (start <= cur.size()) {
                    std::size_t plus = cur.find('+', start);
                    std::string word =
                        cur.substr(start, plus == std::string::npos ? plus : plus - start);
                    if (!nxt.empty()) nxt += '+';
                    nxt += apply_substitution(pres.substitution, word);
                    if (plus == std::string::npos) break;
                    start = plus + 1;
                }
                cur = nxt;
            }
        }
    }
    return out;
}

}  // namespace selfsim

#endif  // SELFSIM_ENVELOPE_HPP
