#ifndef SELFSIM_ALPHABET_HPP
#define SELFSIM_ALPHABET_HPP

// The alphabet algebra X = F_p[x]/(x^d) in the monomial basis {1, x, .., x^{d-1}},
// its special derivations f(x) d/dx, and their d x d matrices.
// Column convention: matrices act on column vectors, m[i+e, i] += c for x^e entries.

#include <cassert>

#include "gf.hpp"

namespace selfsim {

// coefficient vector of length d; index e holds the coefficient of x^e
using TruncPoly = std::vector<u8>;

inline TruncPoly poly_zero(int d) { return TruncPoly(d, 0); }

inline TruncPoly poly_monomial(int d, int e, int c = 1) {
    TruncPoly q(d, 0);
    if (e < d) q[e] = static_cast<u8>(c);
    return q;
}

inline bool poly_is_zero(const TruncPoly& q) {
    for (u8 c : q)
        if (c) return false;
    return true;
}

inline TruncPoly poly_add(const TruncPoly& a, const TruncPoly& b, int p) {
    TruncPoly r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = static_cast<u8>((a[i] + b[i]) % p);
    return r;
}

inline TruncPoly poly_scale(const TruncPoly& a, int c, int p) {
    c = ((c % p) + p) % p;
    TruncPoly r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = static_cast<u8>(a[i] * c % p);
    return r;
}

inline TruncPoly poly_mul(const TruncPoly& a, const TruncPoly& b, int p) {
    int d = static_cast<int>(a.size());
    TruncPoly r(d, 0);
    for (int i = 0; i < d; ++i) {
        if (!a[i]) continue;
        for (int j = 0; j + i < d; ++j) r[i + j] = static_cast<u8>((r[i + j] + a[i] * b[j]) % p);
    }
    return r;
}

// action of the derivation f(x) d/dx on q(x)
inline TruncPoly derivation_apply(const TruncPoly& f, const TruncPoly& q, int p) {
    int d = static_cast<int>(q.size());
    TruncPoly dq(d, 0);
    for (int e = 1; e < d; ++e) dq[e - 1] = static_cast<u8>(q[e] * e % p);
    return poly_mul(f, dq, p);
}

// bracket of special derivations: [f d/dx, g d/dx] = (f g' - g f') d/dx
inline TruncPoly derivation_bracket(const TruncPoly& f, const TruncPoly& g, int p) {
    int d = static_cast<int>(f.size());
    TruncPoly fp(d, 0), gp(d, 0);
    for (int e = 1; e < d; ++e) {
        fp[e - 1] = static_cast<u8>(f[e] * e % p);
        gp[e - 1] = static_cast<u8>(g[e] * e % p);
    }
    TruncPoly r = poly_mul(f, gp, p);
    TruncPoly s = poly_mul(g, fp, p);
    for (int i = 0; i < d; ++i) r[i] = static_cast<u8>((r[i] - s[i] + p) % p);
    return r;
}

// matrix of multiplication by q(x) on X
inline Mat m_mul(const TruncPoly& q, int p, int d) {
    Mat m(d);
    for (int e = 0; e < d; ++e) {
        u8 c = static_cast<u8>(q[e] % p);
        if (!c) continue;
        for (int i = 0; i + e < d; ++i) m.at(i + e, i) = static_cast<u8>((m.at(i + e, i) + c) % p);
    }
    return m;
}

// matrix of the derivation f(x) d/dx on X
inline Mat m_der(const TruncPoly& f, int p, int d) {
    Mat der(d);
    for (int i = 1; i < d; ++i) der.at(i - 1, i) = static_cast<u8>(i % p);
    return mat_mul(m_mul(f, p, d), der, p);
}

// divided-power basis gamma_i = x^i / i!  (needs d <= p so the factorials invert)
inline Mat divided_m_x(int p, int d) {
    Mat m(d);
    for (int i = 1; i < d; ++i) m.at(i, i - 1) = static_cast<u8>(i % p);
    return m;
}

inline Mat divided_m_dx(int p, int d) {
    Mat m(d);
    for (int i = 1; i < d; ++i) m.at(i - 1, i) = 1;
    return m;
}

// change of basis: column i of the returned matrix expresses gamma_i in monomials
inline Mat divided_basis_change(int p, int d) {
    Mat m(d);
    int fact = 1;
    for (int i = 0; i < d; ++i) {
        if (i) fact = fact * i % p;
        m.at(i, i) = fp_inv(fact == 0 ? 1 : fact, p);
        assert(fact % p != 0 && "divided powers need d <= p");
    }
    return m;
}

}  // namespace selfsim

#endif
