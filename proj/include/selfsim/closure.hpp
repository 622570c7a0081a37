// Level-truncation closures: dimensions of the Lie closure of generator
// truncations (with optional p-th powers), graded variants binned by declared
// degree data, exact rational Hausdorff fits, and matrix nil towers.
#ifndef SELFSIM_CLOSURE_HPP
#define SELFSIM_CLOSURE_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "selfsim/alphabet.hpp"
#include "selfsim/degree.hpp"
#include "selfsim/gf.hpp"
#include "selfsim/spec.hpp"

namespace selfsim {

// Basis of the level-n ambient matrix space: tableau matrices
//   x^{i_1} (x) ... (x) x^{i_{k-1}} (x) (x^j d/dx) (x) 1 (x) ... (x) 1
// for k = 1..n.  Their leading entries (first nonzero in row-major order)
// are pairwise distinct with value 1, so membership and coordinates are a
// single forward-substitution pass over the sparse rows.
class WBasis {
  public:
    // position of the derivation slot, its exponent, the first slot's letter
    // exponent (equal to der_exp when the derivation sits first), and the
    // row's position in depth-major enumeration order (depth, prefix, der)
    struct RowInfo {
        int k = 0;
        int der_exp = 0;
        int first_exp = 0;
        std::size_t enum_idx = 0;
    };

    WBasis(int p, int d, int n, i64 cap = DEFAULT_DIM_CAP) : p_(p), d_(d), n_(n) {
        N_ = checked_dim(d, n, cap);
        std::vector<std::tuple<i64, Sparse, RowInfo>> entries;
        std::size_t enum_c = 0;
        for (int k = 1; k <= n; ++k) {
            i64 prefixes = 1;
            for (int s = 1; s < k; ++s) prefixes *= d;
            for (i64 pref = 0; pref < prefixes; ++pref) {
                // digits of pref give the prefix exponents, most significant first
                std::vector<int> exps(static_cast<std::size_t>(k - 1));
                i64 rem = pref;
                for (int s = k - 2; s >= 0; --s) {
                    exps[static_cast<std::size_t>(s)] = static_cast<int>(rem % d);
                    rem /= d;
                }
                for (int j = 0; j < d; ++j) {
                    Mat cur = k == 1 ? m_der(poly_monomial(d, j), p, d)
                                     : m_mul(poly_monomial(d, exps[0]), p, d);
                    for (int s = 1; s < k - 1; ++s)
                        cur = kron(cur, m_mul(poly_monomial(d, exps[static_cast<std::size_t>(s)]), p, d), p);
                    if (k > 1) cur = kron(cur, m_der(poly_monomial(d, j), p, d), p);
                    if (k < n) {
                        i64 tail = 1;
                        for (int s = k; s < n; ++s) tail *= d;
                        cur = kron(cur, Mat::identity(static_cast<int>(tail)), p);
                    }
                    i64 lead = -1;
                    for (std::size_t idx = 0; idx < cur.a.size(); ++idx)
                        if (cur.a[idx]) {
                            lead = static_cast<i64>(idx);
                            break;
                        }
                    if (lead < 0) continue;  // degenerate factor (x^{d-1} d/dx at d=1)
                    if (cur.a[static_cast<std::size_t>(lead)] != 1)
                        throw std::logic_error("tableau leading value expected to be 1");
                    RowInfo info{k, j, k == 1 ? j : exps[0], enum_c++};
                    entries.emplace_back(lead, Sparse(cur), info);
                }
            }
        }
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
        for (std::size_t i = 1; i < entries.size(); ++i)
            if (std::get<0>(entries[i]) == std::get<0>(entries[i - 1]))
                throw std::logic_error("tableau leading positions not distinct");
        leads_.reserve(entries.size());
        rows_.reserve(entries.size());
        infos_.reserve(entries.size());
        enum_rows_.resize(entries.size());
        for (auto& [lead, sp, info] : entries) {
            enum_rows_[info.enum_idx] = rows_.size();
            leads_.push_back(lead);
            rows_.push_back(std::move(sp));
            infos_.push_back(info);
        }
    }

    i64 dim() const { return static_cast<i64>(rows_.size()); }
    i64 matrix_dim() const { return N_; }

    // Coordinates of m in the tableau basis; throws when m is outside the span.
    std::vector<u8> coords(const Mat& m) const {
        if (m.n != static_cast<int>(N_))
            throw std::invalid_argument("WBasis::coords: matrix of wrong size");
        std::vector<u8> v = m.a;
        std::vector<u8> out(rows_.size(), 0);
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            u8 c = v[static_cast<std::size_t>(leads_[r])];
            if (!c) continue;
            out[r] = c;
            u8 mult = static_cast<u8>((p_ - c) % p_);
            for (const auto& ent : rows_[r].ents) {
                std::size_t idx =
                    static_cast<std::size_t>(ent.i) * static_cast<std::size_t>(N_) +
                    static_cast<std::size_t>(ent.j);
                v[idx] = static_cast<u8>((v[idx] + mult * ent.v) % p_);
            }
        }
        for (u8 x : v)
            if (x)
                throw std::runtime_error(
                    "matrix outside the tableau span at level " + std::to_string(n_));
        return out;
    }

    bool contains(const Mat& m) const {
        try {
            (void)coords(m);
            return true;
        } catch (const std::runtime_error&) {
            return false;
        }
    }

    // Dense matrix of the r-th tableau row (for callers assembling elements).
    Mat row_matrix(std::size_t r) const {
        Mat m(static_cast<int>(N_));
        for (const auto& ent : rows_[r].ents) m.at(ent.i, ent.j) = ent.v;
        return m;
    }

    const RowInfo& row_info(std::size_t r) const { return infos_[r]; }

    // Coordinates reordered into depth-major enumeration order: the leading
    // block (all rows of depth <= m) then matches the level-m basis
    // entry-for-entry, which is what per-level projections rely on.
    std::vector<u8> coords_enum(const Mat& m) const {
        std::vector<u8> co = coords(m);
        std::vector<u8> out(co.size());
        for (std::size_t e = 0; e < out.size(); ++e) out[e] = co[enum_rows_[e]];
        return out;
    }

    Mat matrix_from_enum(const std::vector<u8>& co) const {
        Mat m(static_cast<int>(N_));
        for (std::size_t e = 0; e < co.size() && e < enum_rows_.size(); ++e) {
            if (!co[e]) continue;
            for (const auto& ent : rows_[enum_rows_[e]].ents)
                m.at(ent.i, ent.j) = static_cast<u8>((m.at(ent.i, ent.j) + co[e] * ent.v) % p_);
        }
        return m;
    }

  private:
    int p_, d_, n_;
    i64 N_ = 0;
    std::vector<i64> leads_;
    std::vector<Sparse> rows_;
    std::vector<RowInfo> infos_;
    std::vector<std::size_t> enum_rows_;
};

struct ClosureOptions {
    bool restricted = false;
    // binning weights over degree coordinates; empty means ungraded
    std::vector<i64> bin_weights;
    std::optional<int> degree_cap;
    bool keep_basis = false;      // retain accepted candidate matrices (memory!)
    std::vector<int> seed_gens;   // generator indices to close over; empty = all
};

struct ClosureResult {
    int dim = 0;              // total rank over all bins
    std::map<int, int> bins;  // bin -> rank (graded runs only)
    std::vector<Mat> basis;   // accepted candidates, insertion order (keep_basis)
};

// Worklist closure of generator truncations at level n: for each accepted
// basis element, insert its p-th matrix power (restricted mode) and its
// bracket with every generator.  Graded runs key a separate row space per
// degree bin and skip candidates beyond the cap.
inline ClosureResult level_closure(SpecMats& sm, int n, const ClosureOptions& opt,
                                   i64 cap = DEFAULT_DIM_CAP) {
    const AlgebraSpec& s = sm.s;
    const int p = s.p;
    const bool graded = !opt.bin_weights.empty();
    WBasis wb(p, s.d, n, cap);
    auto bin_of = [&](const Degree& dg) {
        i64 acc = 0;
        for (std::size_t i = 0; i < dg.c.size() && i < opt.bin_weights.size(); ++i)
            acc += opt.bin_weights[i] * dg.c[i];
        return static_cast<int>(acc);
    };
    std::map<int, RowSpace> classes;
    std::vector<std::pair<Mat, Degree>> basis;
    auto insert = [&](const Mat& m, const Degree& dg) {
        int key = 0;
        if (graded) {
            key = bin_of(dg);
            if (opt.degree_cap && key > *opt.degree_cap) return false;
        }
        auto [it, fresh] = classes.try_emplace(key, p, static_cast<std::size_t>(wb.dim()));
        (void)fresh;
        if (it->second.insert(wb.coords(m))) {
            basis.emplace_back(m, dg);
            return true;
        }
        return false;
    };
    std::vector<int> seeds = opt.seed_gens;
    if (seeds.empty())
        for (std::size_t gi = 0; gi < s.gens.size(); ++gi) seeds.push_back(static_cast<int>(gi));
    std::vector<Sparse> sgens;
    std::vector<Degree> gdegs;
    for (int gi : seeds) {
        const Mat& gm = sm.gen(gi, n);
        sgens.emplace_back(gm);
        Degree dg;
        if (graded) {
            if (!s.gens[static_cast<std::size_t>(gi)].degree)
                throw std::invalid_argument("graded closure requires degrees on all generators");
            dg = *s.gens[static_cast<std::size_t>(gi)].degree;
        }
        gdegs.push_back(dg);
        insert(gm, dg);
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
        Mat mi = basis[i].first;  // copy: basis grows and may reallocate
        Degree di = basis[i].second;
        if (opt.restricted) insert(mat_pow(mi, p, p), graded ? deg_scale(di, p) : di);
        for (std::size_t gj = 0; gj < sgens.size(); ++gj)
            insert(bracket_sparse(mi, sgens[gj], p),
                   graded ? deg_add(di, gdegs[gj]) : di);
    }
    ClosureResult res;
    for (const auto& [key, rr] : classes) {
        int rank = static_cast<int>(rr.dim());
        if (rank == 0) continue;
        res.dim += rank;
        if (graded) res.bins[key] = rank;
    }
    if (opt.keep_basis)
        for (auto& [m, dg] : basis) res.basis.push_back(std::move(m));
    return res;
}

inline int level_image_dim(const AlgebraSpec& s, int n, bool restricted,
                           i64 cap = DEFAULT_DIM_CAP) {
    SpecMats sm(s, cap);
    ClosureOptions opt;
    opt.restricted = restricted;
    return level_closure(sm, n, opt, cap).dim;
}

struct DimsTable {
    std::vector<std::pair<int, int>> rows;  // (level, dimension)
    bool restricted = false;
};

inline DimsTable dims_table(const AlgebraSpec& s, int n_max, bool restricted,
                            i64 cap = DEFAULT_DIM_CAP) {
    DimsTable t;
    t.restricted = restricted;
    SpecMats sm(s, cap);
    ClosureOptions opt;
    opt.restricted = restricted;
    for (int n = 1; n <= n_max; ++n)
        t.rows.emplace_back(n, level_closure(sm, n, opt, cap).dim);
    return t;
}

inline std::map<int, int> graded_level_dims(const AlgebraSpec& s, int n, bool restricted,
                                            const std::vector<i64>& bin_weights,
                                            std::optional<int> degree_cap,
                                            i64 cap = DEFAULT_DIM_CAP) {
    SpecMats sm(s, cap);
    ClosureOptions opt;
    opt.restricted = restricted;
    opt.bin_weights = bin_weights;
    opt.degree_cap = degree_cap;
    return level_closure(sm, n, opt, cap).bins;
}

struct HausdorffReport {
    bool conclusive = false;
    Rational alpha{0, 1};
    Rational beta{0, 1};
    Rational value{0, 1};  // alpha * (d-1) / (1 for relative, d otherwise)
    int n_min = 0, n_max = 0;
    bool relative = false;
};

// Exact rational fit dim_n = alpha * d^n + beta over a window of consecutive
// levels (>= 3 points); inconclusive unless every window point fits exactly.
inline HausdorffReport hausdorff_fit(const std::vector<std::pair<int, int>>& dims, int d,
                                     bool relative) {
    HausdorffReport rep;
    rep.relative = relative;
    if (dims.size() < 3) return rep;
    rep.n_min = dims.front().first;
    rep.n_max = dims.back().first;
    auto dpow = [&](int n) {
        i64 v = 1;
        for (int i = 0; i < n; ++i) v *= d;
        return v;
    };
    i64 x1 = dpow(dims[0].first), x2 = dpow(dims[1].first);
    Rational alpha = Rational(dims[1].second - dims[0].second, 1) / Rational(x2 - x1, 1);
    Rational beta = Rational(dims[0].second, 1) - alpha * Rational(x1, 1);
    for (const auto& [n, dim] : dims) {
        Rational fit = alpha * Rational(dpow(n), 1) + beta;
        if (!(fit == Rational(dim, 1))) return rep;
    }
    rep.conclusive = true;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.value = alpha * Rational(d - 1, 1) / Rational(relative ? 1 : d, 1);
    return rep;
}

inline HausdorffReport hausdorff(const AlgebraSpec& s, int n_min, int n_max, bool relative,
                                 i64 cap = DEFAULT_DIM_CAP) {
    if (n_max - n_min < 2)
        throw std::invalid_argument("hausdorff: window must span at least 3 levels");
    SpecMats sm(s, cap);
    ClosureOptions opt;
    opt.restricted = s.restricted;
    std::vector<std::pair<int, int>> dims;
    for (int n = n_min; n <= n_max; ++n)
        dims.emplace_back(n, level_closure(sm, n, opt, cap).dim);
    return hausdorff_fit(dims, s.d, relative);
}

// Least s with m^(p^s) = 0, or nullopt past the cap.
inline std::optional<int> nil_tower_index(Mat m, int p, int s_cap = 12) {
    int s = 0;
    while (!m.is_zero() && s < s_cap) {
        m = mat_pow(m, p, p);
        ++s;
    }
    return m.is_zero() ? std::optional<int>(s) : std::nullopt;
}

}  // namespace selfsim

#endif  // SELFSIM_CLOSURE_HPP
