#ifndef SELFSIM_SPEC_HPP
#define SELFSIM_SPEC_HPP

// A self-similar Lie algebra presentation: generators g with
//   psi(g) = sum_k poly_k (x) target_k  +  der(x) d/dx,
// an optional grading over Z[lambda]/(minpoly), and the induced matrices of
// the action on X^{(x) n} (truncation level n).

#include <map>
#include <optional>

#include "alphabet.hpp"
#include "degree.hpp"

namespace selfsim {

// linear combination of generators, by index
using LinComb = std::vector<std::pair<int, u8>>;

struct GenRule {
    std::string name;
    std::vector<std::pair<TruncPoly, LinComb>> terms;
    TruncPoly der;                // coefficient polynomial of d/dx
    std::optional<Degree> degree; // grading degree, if the spec is graded
};

struct AlgebraSpec {
    int p = 2, d = 2;
    bool restricted = false;
    std::optional<DegreeRing> ring;
    std::vector<GenRule> gens;

    int gen_index(const std::string& name) const {
        for (size_t i = 0; i < gens.size(); ++i)
            if (gens[i].name == name) return static_cast<int>(i);
        return -1;
    }
};

// check the declared grading: every psi-term and every derivation part must be
// a monomial whose degree equation deg(g) = -e + lambda*deg(target) holds;
// derivation parts c*x^i*d/dx carry degree 1-i.
inline bool verify_grading(const AlgebraSpec& s, std::string* why = nullptr) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if (!s.ring) return fail("no degree ring declared");
    for (const auto& g : s.gens) {
        if (!g.degree) return fail("generator " + g.name + " has no degree");
        for (const auto& [poly, tgt] : g.terms) {
            int e = -1;
            for (int i = 0; i < s.d; ++i)
                if (poly[i]) {
                    if (e >= 0) return fail("non-monomial coefficient at " + g.name);
                    e = i;
                }
            if (e < 0) continue;
            for (const auto& [ti, c] : tgt) {
                (void)c;
                if (!s.gens[ti].degree) return fail("target of " + g.name + " has no degree");
                Degree rhs = deg_shift(*s.ring, *s.gens[ti].degree);
                rhs.c[0] -= e;
                if (!(rhs == *g.degree))
                    return fail("degree equation fails at " + g.name + " term x^" +
                                std::to_string(e) + " (x) " + s.gens[ti].name);
            }
        }
        if (!poly_is_zero(g.der)) {
            int e = -1;
            for (int i = 0; i < s.d; ++i)
                if (g.der[i]) {
                    if (e >= 0) return fail("non-monomial derivation at " + g.name);
                    e = i;
                }
            Degree want = deg_make(*s.ring, {1 - e});
            if (!(want == *g.degree))
                return fail("derivation degree fails at " + g.name);
        }
    }
    return true;
}

// memoized truncation matrices of generators and combinations
struct SpecMats {
    const AlgebraSpec& s;
    i64 cap;
    std::map<std::pair<int, int>, Mat> memo;

    explicit SpecMats(const AlgebraSpec& spec, i64 cap_ = 6561) : s(spec), cap(cap_) {}

    const Mat& gen(int gi, int n) {
        auto key = std::make_pair(gi, n);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        Mat m;
        if (n == 0) {
            m = Mat(1);
        } else {
            int N = static_cast<int>(checked_dim(s.d, n, cap));
            m = Mat(N);
            const GenRule& g = s.gens[gi];
            for (const auto& [poly, tgt] : g.terms) {
                Mat sub(N / s.d);
                for (const auto& [ti, c] : tgt) mat_add_inplace(sub, gen(ti, n - 1), c, s.p);
                m = mat_add(m, kron(m_mul(poly, s.p, s.d), sub, s.p), s.p);
            }
            if (!poly_is_zero(g.der))
                m = mat_add(m, kron(m_der(g.der, s.p, s.d), Mat::identity(N / s.d), s.p), s.p);
        }
        return memo.emplace(key, std::move(m)).first->second;
    }

    Mat combo(const LinComb& lc, int n) {
        Mat m(n == 0 ? 1 : static_cast<int>(checked_dim(s.d, n, cap)));
        for (const auto& [gi, c] : lc) mat_add_inplace(m, gen(gi, n), c, s.p);
        return m;
    }
};

// recursive wreath action of a generator on a column vector in X^{(x) n},
// independent of the matrix recursion (used to cross-check it)
inline std::vector<u8> act_vec(const AlgebraSpec& s, int gi, const std::vector<u8>& v, int n) {
    if (n == 0) return {0};
    size_t block = v.size() / s.d;
    std::vector<u8> out(v.size(), 0);
    const GenRule& g = s.gens[gi];
    for (int e = 0; e < s.d; ++e) {
        std::vector<u8> u(v.begin() + e * block, v.begin() + (e + 1) * block);
        if (std::all_of(u.begin(), u.end(), [](u8 x) { return !x; })) continue;
        for (const auto& [poly, tgt] : g.terms) {
            std::vector<u8> sub(block, 0);
            for (const auto& [ti, c] : tgt) {
                std::vector<u8> w = act_vec(s, ti, u, n - 1);
                for (size_t k = 0; k < block; ++k) sub[k] = static_cast<u8>((sub[k] + c * w[k]) % s.p);
            }
            for (int f = 0; f < s.d; ++f) {
                if (!poly[f] || e + f >= s.d) continue;
                for (size_t k = 0; k < block; ++k)
                    out[(e + f) * block + k] =
                        static_cast<u8>((out[(e + f) * block + k] + poly[f] * sub[k]) % s.p);
            }
        }
        if (!poly_is_zero(g.der)) {
            TruncPoly w = derivation_apply(g.der, poly_monomial(s.d, e), s.p);
            for (int f = 0; f < s.d; ++f) {
                if (!w[f]) continue;
                for (size_t k = 0; k < block; ++k)
                    out[f * block + k] = static_cast<u8>((out[f * block + k] + w[f] * u[k]) % s.p);
            }
        }
    }
    return out;
}

}  // namespace selfsim

#endif
