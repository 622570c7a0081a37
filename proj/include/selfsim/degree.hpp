#ifndef SELFSIM_DEGREE_HPP
#define SELFSIM_DEGREE_HPP

// Grading degrees live in Z[lambda]/(minpoly) where minpoly is monic with a
// distinguished real root in a declared isolating interval.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "gf.hpp"

namespace selfsim {

struct DegreeRing {
    std::vector<i64> minpoly;  // c0 + c1 l + ... + l^m, last entry 1
    double lo = 0, hi = 0;     // isolating interval of the distinguished root

    int rank() const { return static_cast<int>(minpoly.size()) - 1; }

    double eval(double x) const {
        double v = 0;
        for (size_t i = minpoly.size(); i-- > 0;) v = v * x + static_cast<double>(minpoly[i]);
        return v;
    }

    double root() const {
        double a = lo, b = hi;
        double fa = eval(a);
        for (int it = 0; it < 200; ++it) {
            double m = (a + b) / 2;
            double fm = eval(m);
            if ((fa < 0) == (fm < 0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        return (a + b) / 2;
    }

    bool operator==(const DegreeRing& o) const {
        return minpoly == o.minpoly && lo == o.lo && hi == o.hi;
    }
};

// Ring whose distinguished root is the largest real root of the given monic
// polynomial, bracketed by walking down from the Cauchy bound.
inline DegreeRing bracket_ring(std::vector<i64> minpoly) {
    DegreeRing ring;
    ring.minpoly = std::move(minpoly);
    double bound = 1;
    for (i64 c : ring.minpoly)
        bound = std::max(bound, 1.0 + static_cast<double>(c < 0 ? -c : c));
    double hi = bound, lo = hi - 0.25;
    while (lo > -bound && ring.eval(lo) > 0) {
        hi = lo;
        lo -= 0.25;
    }
    if (ring.eval(lo) > 0) throw std::invalid_argument("polynomial has no real root");
    ring.lo = lo;
    ring.hi = hi;
    return ring;
}

struct Degree {
    std::vector<i64> c;  // coordinates in the power basis {1, lambda, ..}

    bool is_zero() const {
        for (i64 v : c)
            if (v) return false;
        return true;
    }
    bool operator==(const Degree& o) const { return c == o.c; }
    bool operator!=(const Degree& o) const { return !(*this == o); }
    bool operator<(const Degree& o) const { return c < o.c; }
};

inline Degree deg_make(const DegreeRing& ring, std::vector<i64> coeffs) {
    coeffs.resize(ring.rank(), 0);
    return Degree{std::move(coeffs)};
}

inline Degree deg_add(const Degree& x, const Degree& y) {
    Degree z = x;
    for (size_t i = 0; i < z.c.size(); ++i) z.c[i] += y.c[i];
    return z;
}

inline Degree deg_scale(const Degree& x, i64 k) {
    Degree z = x;
    for (auto& v : z.c) v *= k;
    return z;
}

// multiply by lambda, reducing with the monic minimal polynomial
inline Degree deg_shift(const DegreeRing& ring, const Degree& x) {
    int m = ring.rank();
    Degree z{std::vector<i64>(m, 0)};
    i64 top = m ? x.c[m - 1] : 0;
    for (int i = m - 1; i > 0; --i) z.c[i] = x.c[i - 1] - top * ring.minpoly[i];
    if (m) z.c[0] = -top * ring.minpoly[0];
    return z;
}

// value at the distinguished real root
inline double deg_value(const DegreeRing& ring, const Degree& x) {
    double l = ring.root(), v = 0;
    for (size_t i = x.c.size(); i-- > 0;) v = v * l + static_cast<double>(x.c[i]);
    return v;
}

// exact value at a rational root mu of the same minimal polynomial
inline Rational deg_value_at(const Degree& x, const Rational& mu) {
    Rational v(0);
    for (size_t i = x.c.size(); i-- > 0;) v = v * mu + Rational(x.c[i]);
    return v;
}

// sign classification of a degree at a second root: -1, 0, +1
inline int mu_classify(const Degree& x, const Rational& mu) {
    Rational v = deg_value_at(x, mu);
    if (v.num == 0) return 0;
    return v.num > 0 ? 1 : -1;
}

}  // namespace selfsim

#endif
