#ifndef SELFSIM_GF_HPP
#define SELFSIM_GF_HPP

// Dense linear algebra over the prime field F_p (p <= 17 assumed throughout:
// entries fit in uint8_t, row accumulators in uint32_t).

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace selfsim {

using u8 = std::uint8_t;
using u32 = std::uint32_t;
using i64 = std::int64_t;

inline u8 fp_inv(int c, int p) {
    // Fermat inverse; c != 0 mod p
    int r = 1, b = c % p, e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<u8>(r);
}

struct Mat {
    int n = 0;
    std::vector<u8> a;

    Mat() = default;
    explicit Mat(int n_) : n(n_), a(static_cast<size_t>(n_) * n_, 0) {}

    u8& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    u8 at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
    const u8* row(int i) const { return a.data() + static_cast<size_t>(i) * n; }
    u8* row(int i) { return a.data() + static_cast<size_t>(i) * n; }

    static Mat identity(int n) {
        Mat m(n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
    bool is_zero() const {
        for (u8 v : a)
            if (v) return false;
        return true;
    }
    bool operator==(const Mat& o) const { return n == o.n && a == o.a; }
};

inline Mat mat_add(const Mat& x, const Mat& y, int p) {
    Mat z(x.n);
    for (size_t i = 0; i < x.a.size(); ++i) {
        int s = x.a[i] + y.a[i];
        z.a[i] = static_cast<u8>(s >= p ? s - p : s);
    }
    return z;
}

inline Mat mat_sub(const Mat& x, const Mat& y, int p) {
    Mat z(x.n);
    for (size_t i = 0; i < x.a.size(); ++i) {
        int s = x.a[i] - y.a[i];
        z.a[i] = static_cast<u8>(s < 0 ? s + p : s);
    }
    return z;
}

inline Mat mat_scale(const Mat& x, int c, int p) {
    Mat z(x.n);
    c = ((c % p) + p) % p;
    for (size_t i = 0; i < x.a.size(); ++i) z.a[i] = static_cast<u8>(x.a[i] * c % p);
    return z;
}

inline void mat_add_inplace(Mat& x, const Mat& y, int c, int p) {
    c = ((c % p) + p) % p;
    for (size_t i = 0; i < x.a.size(); ++i) x.a[i] = static_cast<u8>((x.a[i] + y.a[i] * c) % p);
}

// row-major ikj product with zero-skip on the left factor; exact mod p
inline Mat mat_mul(const Mat& x, const Mat& y, int p) {
    const int n = x.n;
    Mat z(n);
    std::vector<u32> acc(n);
    for (int i = 0; i < n; ++i) {
        std::fill(acc.begin(), acc.end(), 0u);
        const u8* xr = x.row(i);
        for (int k = 0; k < n; ++k) {
            u32 c = xr[k];
            if (!c) continue;
            const u8* yr = y.row(k);
            for (int j = 0; j < n; ++j) acc[j] += c * yr[j];
        }
        u8* zr = z.row(i);
        for (int j = 0; j < n; ++j) zr[j] = static_cast<u8>(acc[j] % p);
    }
    return z;
}

inline Mat mat_commutator(const Mat& x, const Mat& y, int p) {
    return mat_sub(mat_mul(x, y, p), mat_mul(y, x, p), p);
}

inline Mat mat_pow(const Mat& x, i64 e, int p) {
    Mat r = Mat::identity(x.n), b = x;
    while (e) {
        if (e & 1) r = mat_mul(r, b, p);
        b = mat_mul(b, b, p);
        e >>= 1;
    }
    return r;
}

inline Mat mat_transpose(const Mat& x) {
    Mat z(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int j = 0; j < x.n; ++j) z.at(j, i) = x.at(i, j);
    return z;
}

inline Mat kron(const Mat& x, const Mat& y, int p) {
    Mat z(x.n * y.n);
    for (int i = 0; i < x.n; ++i)
        for (int j = 0; j < x.n; ++j) {
            u8 c = x.at(i, j);
            if (!c) continue;
            for (int k = 0; k < y.n; ++k) {
                const u8* yr = y.row(k);
                u8* zr = z.row(i * y.n + k) + static_cast<size_t>(j) * y.n;
                for (int l = 0; l < y.n; ++l) zr[l] = static_cast<u8>(c * yr[l] % p);
            }
        }
    return z;
}

// sparse triplet view, used to bracket closure candidates against sparse generators
struct Sparse {
    int n = 0;
    struct Ent {
        int i, j;
        u8 v;
    };
    std::vector<Ent> ents;

    explicit Sparse(const Mat& m) : n(m.n) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (m.at(i, j)) ents.push_back({i, j, m.at(i, j)});
    }
};

// g*m and m*g for sparse g: cost O(nnz(g) * n)
inline Mat mul_sparse_left(const Sparse& g, const Mat& m, int p) {
    Mat z(m.n);
    for (const auto& e : g.ents) {
        const u8* mr = m.row(e.j);
        u8* zr = z.row(e.i);
        for (int c = 0; c < m.n; ++c) zr[c] = static_cast<u8>((zr[c] + e.v * mr[c]) % p);
    }
    return z;
}

inline Mat mul_sparse_right(const Mat& m, const Sparse& g, int p) {
    Mat z(m.n);
    for (const auto& e : g.ents) {
        for (int r = 0; r < m.n; ++r) {
            u8 mv = m.at(r, e.i);
            if (!mv) continue;
            u8& zv = z.at(r, e.j);
            zv = static_cast<u8>((zv + e.v * mv) % p);
        }
    }
    return z;
}

inline Mat bracket_sparse(const Mat& m, const Sparse& g, int p) {
    return mat_sub(mul_sparse_right(m, g, p), mul_sparse_left(g, m, p), p);
}

// Row space in reduced echelon form over F_p. Rows are flattened vectors.
struct RowSpace {
    int p;
    size_t len;
    std::vector<std::vector<u8>> rows;
    std::vector<size_t> pivots;  // pivots[k] = pivot column of rows[k], strictly increasing

    RowSpace(int p_, size_t len_) : p(p_), len(len_) {}

    int dim() const { return static_cast<int>(rows.size()); }

    // v -= c*row (mod p), via a small multiplication table
    void sub_scaled(std::vector<u8>& v, const std::vector<u8>& r, int c) const {
        u8 tab[18];
        int mc = (p - c % p) % p;
        for (int x = 0; x < p; ++x) tab[x] = static_cast<u8>(mc * x % p);
        for (size_t j = 0; j < len; ++j) {
            int s = v[j] + tab[r[j]];
            v[j] = static_cast<u8>(s >= p ? s - p : s);
        }
    }

    void reduce(std::vector<u8>& v) const {
        for (size_t k = 0; k < rows.size(); ++k) {
            u8 c = v[pivots[k]];
            if (c) sub_scaled(v, rows[k], c);
        }
    }

    bool contains(const Mat& m) const {
        std::vector<u8> v = m.a;
        reduce(v);
        for (u8 x : v)
            if (x) return false;
        return true;
    }

    // reduce and insert if independent; returns true if inserted
    bool insert(std::vector<u8> v) {
        reduce(v);
        size_t piv = len;
        for (size_t j = 0; j < len; ++j)
            if (v[j]) {
                piv = j;
                break;
            }
        if (piv == len) return false;
        if (v[piv] != 1) {
            u8 inv = fp_inv(v[piv], p);
            for (size_t j = 0; j < len; ++j) v[j] = static_cast<u8>(v[j] * inv % p);
        }
        for (size_t k = 0; k < rows.size(); ++k) {
            u8 c = rows[k][piv];
            if (c) sub_scaled(rows[k], v, c);
        }
        size_t pos = 0;
        while (pos < pivots.size() && pivots[pos] < piv) ++pos;
        rows.insert(rows.begin() + pos, std::move(v));
        pivots.insert(pivots.begin() + pos, piv);
        return true;
    }

    bool insert(const Mat& m) { return insert(m.a); }
};

// Basis of {v : A v = 0 mod p} for A given as dense rows of equal width.
// Row-reduces a working copy; each free column yields one basis vector with a
// 1 in that column (deterministic, increasing free-column order).
inline std::vector<std::vector<u8>> nullspace_mod(std::vector<std::vector<u8>> a, size_t cols,
                                                  int p) {
    std::vector<std::pair<size_t, size_t>> piv_of_col;  // (col, row)
    size_t r = 0;
    for (size_t c = 0; c < cols && r < a.size(); ++c) {
        size_t pr = r;
        while (pr < a.size() && a[pr][c] == 0) ++pr;
        if (pr == a.size()) continue;
        std::swap(a[r], a[pr]);
        u8 inv = fp_inv(a[r][c], p);
        if (inv != 1)
            for (auto& x : a[r]) x = static_cast<u8>(x * inv % p);
        for (size_t rr = 0; rr < a.size(); ++rr) {
            if (rr == r) continue;
            u8 f = a[rr][c];
            if (!f) continue;
            u8 m = static_cast<u8>(p - f);
            for (size_t j = c; j < cols; ++j)
                a[rr][j] = static_cast<u8>((a[rr][j] + m * a[r][j]) % p);
        }
        piv_of_col.emplace_back(c, r);
        ++r;
    }
    std::vector<char> is_piv(cols, 0);
    for (auto& [c, row] : piv_of_col) {
        (void)row;
        is_piv[c] = 1;
    }
    std::vector<std::vector<u8>> out;
    for (size_t fc = 0; fc < cols; ++fc) {
        if (is_piv[fc]) continue;
        std::vector<u8> v(cols, 0);
        v[fc] = 1;
        for (auto& [c, row] : piv_of_col)
            v[c] = static_cast<u8>((p - a[row][fc]) % p);
        out.push_back(std::move(v));
    }
    return out;
}

// exact rational with i64 components; enough for Hausdorff fits and series work
struct Rational {
    i64 num = 0, den = 1;

    Rational() = default;
    Rational(i64 n) : num(n), den(1) {}
    Rational(i64 n, i64 d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        i64 g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }
    Rational operator+(const Rational& o) const { return {num * o.den + o.num * den, den * o.den}; }
    Rational operator-(const Rational& o) const { return {num * o.den - o.num * den, den * o.den}; }
    Rational operator*(const Rational& o) const { return {num * o.num, den * o.den}; }
    Rational operator/(const Rational& o) const { return {num * o.den, den * o.num}; }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

struct CapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// default dense-matrix cap: d^n <= 3^8
inline constexpr i64 DEFAULT_DIM_CAP = 6561;

inline std::vector<u8> mat_vec(const Mat& m, const std::vector<u8>& v, int p) {
    std::vector<u8> out(static_cast<std::size_t>(m.n), 0);
    for (int i = 0; i < m.n; ++i) {
        u32 acc = 0;
        const u8* row = m.row(i);
        for (int j = 0; j < m.n; ++j)
            if (row[j]) acc += static_cast<u32>(row[j]) * v[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = static_cast<u8>(acc % static_cast<u32>(p));
    }
    return out;
}

inline i64 checked_dim(int d, int n, i64 cap = DEFAULT_DIM_CAP) {
    i64 N = 1;
    for (int i = 0; i < n; ++i) {
        N *= d;
        if (N > cap)
            throw CapError("level " + std::to_string(n) + " needs matrices of size " +
                           std::to_string(N) + " > cap " + std::to_string(cap));
    }
    return N;
}

}  // namespace selfsim

#endif
