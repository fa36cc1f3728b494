#include "cobord/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace cobord {

ZMat ZMat::identity(size_t n) {
    ZMat m(n, n);
    for (size_t i = 0; i < n; ++i) m.a[i][i] = 1;
    return m;
}

void ZMat::append_row(ZVec row) {
    if (nrows == 0 && ncols == 0) ncols = row.size();
    if (row.size() != ncols) throw std::invalid_argument("append_row: column mismatch");
    a.push_back(std::move(row));
    ++nrows;
}

namespace {

// ---- machine-word layer -------------------------------------------------
//
// All small arithmetic goes through the checked helpers below; a result that
// does not fit a signed 64-bit word raises Overflow and the caller falls
// back to arbitrary precision.  Intermediate products of two in-range words
// always fit __int128.

struct Overflow {};

using i64 = long long;
using i128 = __int128;

i64 nar(i128 x) {
    if (x > (i128)INT64_MAX || x < (i128)INT64_MIN) throw Overflow{};
    return (i64)x;
}

i64 floordiv64(i64 a, i64 b) {
    i64 q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

bool fits64(const Int& x) { return mpz_fits_slong_p(x.get_mpz_t()) != 0; }

bool to_i64(const ZVec& v, std::vector<i64>& out) {
    out.resize(v.size());
    for (size_t j = 0; j < v.size(); ++j) {
        if (!fits64(v[j])) return false;
        out[j] = mpz_get_si(v[j].get_mpz_t());
    }
    return true;
}

ZVec from_i64(const std::vector<i64>& v) {
    ZVec out(v.size(), 0);
    for (size_t j = 0; j < v.size(); ++j) out[j] = Int((long)v[j]);
    return out;
}

// extended gcd on words: g = s*a + t*b, g > 0; Bezout coefficients are
// bounded by the inputs, so the updates cannot leave the word range
void gcdext64(i64 a, i64 b, i64& g, i64& s, i64& t) {
    i64 r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
        i64 q = r0 / r1;
        i64 r2 = nar((i128)r0 - (i128)q * r1);
        i64 s2 = nar((i128)s0 - (i128)q * s1);
        i64 t2 = nar((i128)t0 - (i128)q * t1);
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
        t0 = t1; t1 = t2;
    }
    if (r0 < 0) { r0 = -r0; s0 = nar(-(i128)s0); t0 = nar(-(i128)t0); }
    g = r0; s = s0; t = t0;
}

size_t first_nonzero64(const std::vector<i64>& v) {
    for (size_t j = 0; j < v.size(); ++j)
        if (v[j] != 0) return j;
    return v.size();
}

Int int_from_i128(i128 x) {
    bool neg = x < 0;
    unsigned __int128 u = neg ? (unsigned __int128)(-(x + 1)) + 1 : (unsigned __int128)x;
    Int r((unsigned long)(u >> 64));
    r <<= 64;
    r += Int((unsigned long)(u & 0xFFFFFFFFFFFFFFFFull));
    if (neg) mpz_neg(r.get_mpz_t(), r.get_mpz_t());
    return r;
}

// ---- arbitrary-precision layer ------------------------------------------

void row_axpy(ZVec& dst, const Int& q, const ZVec& src) {  // dst -= q*src
    if (sgn(q) == 0) return;
    for (size_t j = 0; j < dst.size(); ++j)
        if (sgn(src[j]) != 0)
            mpz_submul(dst[j].get_mpz_t(), q.get_mpz_t(), src[j].get_mpz_t());
}

size_t first_nonzero(const ZVec& v) {
    for (size_t j = 0; j < v.size(); ++j)
        if (sgn(v[j]) != 0) return j;
    return v.size();
}

}  // namespace

ZMat mat_mul(const ZMat& x, const ZMat& y) {
    if (x.ncols != y.nrows) throw std::invalid_argument("mat_mul: shape mismatch");
    ZMat r(x.nrows, y.ncols);
    // word path: with entries below 2^40 and inner dimension below 2^12 the
    // __int128 accumulators cannot overflow
    if (x.ncols < (1u << 12)) {
        const i64 lim = (i64)1 << 40;
        std::vector<std::vector<i64>> xs(x.nrows), ys(y.nrows);
        bool ok = true;
        for (size_t i = 0; ok && i < x.nrows; ++i) {
            ok = to_i64(x.a[i], xs[i]);
            for (size_t j = 0; ok && j < x.ncols; ++j) ok = std::abs(xs[i][j]) < lim;
        }
        for (size_t k = 0; ok && k < y.nrows; ++k) {
            ok = to_i64(y.a[k], ys[k]);
            for (size_t j = 0; ok && j < y.ncols; ++j) ok = std::abs(ys[k][j]) < lim;
        }
        if (ok) {
            std::vector<i128> acc(y.ncols);
            for (size_t i = 0; i < x.nrows; ++i) {
                std::fill(acc.begin(), acc.end(), (i128)0);
                for (size_t k = 0; k < x.ncols; ++k) {
                    i64 v = xs[i][k];
                    if (v == 0) continue;
                    const std::vector<i64>& yr = ys[k];
                    for (size_t j = 0; j < y.ncols; ++j) acc[j] += (i128)v * yr[j];
                }
                for (size_t j = 0; j < y.ncols; ++j) r.a[i][j] = int_from_i128(acc[j]);
            }
            return r;
        }
    }
    for (size_t i = 0; i < x.nrows; ++i)
        for (size_t k = 0; k < x.ncols; ++k) {
            const Int& v = x.a[i][k];
            if (sgn(v) == 0) continue;
            for (size_t j = 0; j < y.ncols; ++j) {
                if (sgn(y.a[k][j]) == 0) continue;
                mpz_addmul(r.a[i][j].get_mpz_t(), v.get_mpz_t(), y.a[k][j].get_mpz_t());
            }
        }
    return r;
}

ZVec vec_mat(const ZVec& v, const ZMat& m) {
    if (v.size() != m.nrows) throw std::invalid_argument("vec_mat: shape mismatch");
    ZVec r(m.ncols, 0);
    for (size_t k = 0; k < m.nrows; ++k) {
        if (sgn(v[k]) == 0) continue;
        for (size_t j = 0; j < m.ncols; ++j) {
            if (sgn(m.a[k][j]) == 0) continue;
            mpz_addmul(r[j].get_mpz_t(), v[k].get_mpz_t(), m.a[k][j].get_mpz_t());
        }
    }
    return r;
}

bool is_zero(const ZVec& v) {
    for (const Int& x : v)
        if (sgn(x) != 0) return false;
    return true;
}

// ---- Lattice: word engine -------------------------------------------------

void Lattice::insert_64(Row64 row) {
    bool touched = false;
    while (true) {
        size_t c = first_nonzero64(row);
        if (c == cols_) break;
        size_t pos = std::lower_bound(piv_.begin(), piv_.end(), c) - piv_.begin();
        if (pos == piv_.size() || piv_[pos] != c) {
            if (row[c] < 0)
                for (i64& x : row) x = nar(-(i128)x);
            r64_.insert(r64_.begin() + pos, std::move(row));
            piv_.insert(piv_.begin() + pos, c);
            touched = true;
            break;
        }
        Row64& p = r64_[pos];
        i64 q = floordiv64(row[c], p[c]);
        if (q != 0)
            for (size_t j = c; j < cols_; ++j)
                if (p[j] != 0) row[j] = nar((i128)row[j] - (i128)q * p[j]);
        if (row[c] != 0) {
            // 0 < row[c] < p[c]: combine so the pivot becomes the gcd
            i64 g, s, t;
            gcdext64(p[c], row[c], g, s, t);
            i64 pc_g = p[c] / g, rc_g = row[c] / g;
            Row64 np(cols_, 0), nr(cols_, 0);
            for (size_t j = 0; j < cols_; ++j) {
                np[j] = nar((i128)s * p[j] + (i128)t * row[j]);
                nr[j] = nar((i128)pc_g * row[j] - (i128)rc_g * p[j]);
            }
            p = std::move(np);
            row = std::move(nr);
            touched = true;
        }
    }
    if (touched) normalize_64();
}

void Lattice::normalize_64() {
    for (size_t i = 0; i < r64_.size(); ++i) {
        size_t c = piv_[i];
        for (size_t k = 0; k < i; ++k) {
            i64 q = floordiv64(r64_[k][c], r64_[i][c]);
            if (q == 0) continue;
            for (size_t j = c; j < cols_; ++j)
                if (r64_[i][j] != 0)
                    r64_[k][j] = nar((i128)r64_[k][j] - (i128)q * r64_[i][j]);
        }
    }
}

void Lattice::promote() {
    // word state may be mid-update; rebuild from the journal instead
    std::vector<Row64> journal = std::move(journal_);
    r64_.clear();
    journal_.clear();
    rows_.clear();
    piv_.clear();
    small_ = false;
    for (const Row64& r : journal) insert_z(from_i64(r));
}

// ---- Lattice: arbitrary-precision engine ----------------------------------

void Lattice::insert_z(ZVec row) {
    bool touched = false;
    while (true) {
        size_t c = first_nonzero(row);
        if (c == cols_) break;  // reduced to zero
        size_t pos = std::lower_bound(piv_.begin(), piv_.end(), c) - piv_.begin();
        if (pos == piv_.size() || piv_[pos] != c) {
            if (sgn(row[c]) < 0)
                for (Int& x : row) x = -x;
            rows_.insert(rows_.begin() + pos, std::move(row));
            piv_.insert(piv_.begin() + pos, c);
            touched = true;
            break;
        }
        ZVec& p = rows_[pos];
        Int q = fdiv_q(row[c], p[c]);
        row_axpy(row, q, p);
        if (sgn(row[c]) != 0) {
            // 0 < row[c] < p[c]: combine so the pivot becomes the gcd
            Int g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(),
                       p[c].get_mpz_t(), row[c].get_mpz_t());
            Int pc_g = p[c] / g, rc_g = row[c] / g;
            ZVec np(cols_, 0), nr(cols_, 0);
            for (size_t j = 0; j < cols_; ++j) {
                np[j] = s * p[j] + t * row[j];
                nr[j] = pc_g * row[j] - rc_g * p[j];
            }
            p = std::move(np);
            row = std::move(nr);
            touched = true;
        }
    }
    if (touched) normalize_z();
}

void Lattice::normalize_z() {
    // reduce entries above each pivot into [0, pivot)
    for (size_t i = 0; i < rows_.size(); ++i) {
        size_t c = piv_[i];
        for (size_t k = 0; k < i; ++k) {
            Int q = fdiv_q(rows_[k][c], rows_[i][c]);
            row_axpy(rows_[k], q, rows_[i]);
        }
    }
}

// ---- Lattice: public face ---------------------------------------------------

void Lattice::insert(ZVec row) {
    if (row.size() != cols_) throw std::invalid_argument("Lattice::insert: column mismatch");
    cache_ok_ = false;
    if (small_) {
        Row64 r;
        if (to_i64(row, r)) {
            journal_.push_back(r);
            try {
                insert_64(std::move(r));
                return;
            } catch (Overflow&) {
                promote();
                return;  // promote() replays the journal, which includes row
            }
        }
        promote();
    }
    insert_z(std::move(row));
}

void Lattice::insert_rows(const ZMat& rows) {
    for (const ZVec& r : rows.a) insert(r);
}

const std::vector<ZVec>& Lattice::basis() const {
    if (!small_) return rows_;
    if (!cache_ok_) {
        cache_.clear();
        cache_.reserve(r64_.size());
        for (const Row64& r : r64_) cache_.push_back(from_i64(r));
        cache_ok_ = true;
    }
    return cache_;
}

ZMat Lattice::basis_mat() const {
    ZMat m(0, cols_);
    for (const ZVec& r : basis()) m.append_row(r);
    m.ncols = cols_;
    return m;
}

ZVec Lattice::reduce(ZVec v, std::vector<Int>* coeffs) const {
    if (v.size() != cols_) throw std::invalid_argument("Lattice::reduce: column mismatch");
    if (coeffs) coeffs->assign(piv_.size(), 0);
    if (small_) {
        Row64 w;
        if (to_i64(v, w)) {
            try {
                std::vector<i64> qs(r64_.size(), 0);
                for (size_t i = 0; i < r64_.size(); ++i) {
                    const Row64& p = r64_[i];
                    size_t c = piv_[i];
                    i64 q = floordiv64(w[c], p[c]);
                    qs[i] = q;
                    if (q == 0) continue;
                    for (size_t j = c; j < cols_; ++j)
                        if (p[j] != 0) w[j] = nar((i128)w[j] - (i128)q * p[j]);
                }
                if (coeffs)
                    for (size_t i = 0; i < qs.size(); ++i) (*coeffs)[i] = Int((long)qs[i]);
                return from_i64(w);
            } catch (Overflow&) {
                // fall through to the arbitrary-precision pass below
            }
        }
        const std::vector<ZVec>& b = basis();
        for (size_t i = 0; i < b.size(); ++i) {
            Int q = fdiv_q(v[piv_[i]], b[i][piv_[i]]);
            if (coeffs) (*coeffs)[i] = q;
            row_axpy(v, q, b[i]);
        }
        return v;
    }
    for (size_t i = 0; i < rows_.size(); ++i) {
        Int q = fdiv_q(v[piv_[i]], rows_[i][piv_[i]]);
        if (coeffs) (*coeffs)[i] = q;
        row_axpy(v, q, rows_[i]);
    }
    return v;
}

bool Lattice::contains(const ZVec& v) const { return is_zero(reduce(v)); }

ZMat hnf(const ZMat& m) {
    Lattice lat(m.ncols);
    lat.insert_rows(m);
    return lat.basis_mat();
}

ZMat left_kernel(const ZMat& m) {
    // echelonize [m | I]; rows whose m-part vanished carry kernel vectors
    Lattice lat(m.ncols + m.nrows);
    for (size_t i = 0; i < m.nrows; ++i) {
        ZVec r(m.ncols + m.nrows, 0);
        for (size_t j = 0; j < m.ncols; ++j) r[j] = m.a[i][j];
        r[m.ncols + i] = 1;
        lat.insert(std::move(r));
    }
    ZMat k(0, m.nrows);
    for (size_t i = 0; i < lat.rank(); ++i) {
        if (lat.pivots()[i] < m.ncols) continue;
        ZVec tag(lat.basis()[i].begin() + m.ncols, lat.basis()[i].end());
        k.append_row(std::move(tag));
    }
    k.ncols = m.nrows;
    return k;
}

LeftSolver::LeftSolver(const ZMat& m) : lat_(m.ncols + m.nrows), ncols_(m.ncols), nrows_(m.nrows) {
    for (size_t i = 0; i < m.nrows; ++i) {
        ZVec r(m.ncols + m.nrows, 0);
        for (size_t j = 0; j < m.ncols; ++j) r[j] = m.a[i][j];
        r[m.ncols + i] = 1;
        lat_.insert(std::move(r));
    }
}

bool LeftSolver::solve(const ZVec& b, ZVec* x) const {
    if (b.size() != ncols_) throw std::invalid_argument("LeftSolver::solve: shape mismatch");
    ZVec v(ncols_ + nrows_, 0);
    for (size_t j = 0; j < ncols_; ++j) v[j] = b[j];
    ZVec rem = lat_.reduce(std::move(v));
    for (size_t j = 0; j < ncols_; ++j)
        if (sgn(rem[j]) != 0) return false;
    if (x) {
        x->assign(nrows_, 0);
        for (size_t i = 0; i < nrows_; ++i) (*x)[i] = -rem[ncols_ + i];
    }
    return true;
}

bool solve_left(const ZMat& m, const ZVec& b, ZVec* x) {
    return LeftSolver(m).solve(b, x);
}

SmithResult smith(const ZMat& m, bool want_transforms) {
    SmithResult res;
    ZMat w = m;
    size_t r = m.nrows, c = m.ncols;
    ZMat U, V;
    if (want_transforms) {
        U = ZMat::identity(r);
        V = ZMat::identity(c);
    }
    auto swap_rows = [&](size_t i, size_t j) {
        std::swap(w.a[i], w.a[j]);
        if (want_transforms) std::swap(U.a[i], U.a[j]);
    };
    auto swap_cols = [&](size_t i, size_t j) {
        for (size_t k = 0; k < r; ++k) std::swap(w.a[k][i], w.a[k][j]);
        if (want_transforms)
            for (size_t k = 0; k < c; ++k) std::swap(V.a[k][i], V.a[k][j]);
    };
    auto row_op = [&](size_t dst, const Int& q, size_t src) {  // row dst -= q*src
        row_axpy(w.a[dst], q, w.a[src]);
        if (want_transforms) row_axpy(U.a[dst], q, U.a[src]);
    };
    auto col_op = [&](size_t dst, const Int& q, size_t src) {  // col dst -= q*src
        if (sgn(q) == 0) return;
        for (size_t k = 0; k < r; ++k)
            if (sgn(w.a[k][src]) != 0)
                mpz_submul(w.a[k][dst].get_mpz_t(), q.get_mpz_t(), w.a[k][src].get_mpz_t());
        if (want_transforms)
            for (size_t k = 0; k < c; ++k)
                if (sgn(V.a[k][src]) != 0)
                    mpz_submul(V.a[k][dst].get_mpz_t(), q.get_mpz_t(), V.a[k][src].get_mpz_t());
    };
    auto negate_row = [&](size_t i) {
        for (Int& x : w.a[i]) x = -x;
        if (want_transforms)
            for (Int& x : U.a[i]) x = -x;
    };

    size_t n = std::min(r, c);
    for (size_t t = 0; t < n; ++t) {
        // pick the nonzero entry of smallest magnitude in the trailing block
        size_t bi = r, bj = c;
        for (size_t i = t; i < r; ++i)
            for (size_t j = t; j < c; ++j) {
                if (sgn(w.a[i][j]) == 0) continue;
                if (bi == r || mpz_cmpabs(w.a[i][j].get_mpz_t(), w.a[bi][bj].get_mpz_t()) < 0) {
                    bi = i;
                    bj = j;
                }
            }
        if (bi == r) break;  // trailing block is zero
        if (bi != t) swap_rows(t, bi);
        if (bj != t) swap_cols(t, bj);
        while (true) {
            bool clean = true;
            for (size_t i = t + 1; i < r; ++i) {
                if (sgn(w.a[i][t]) == 0) continue;
                Int q = fdiv_q(w.a[i][t], w.a[t][t]);
                row_op(i, q, t);
                if (sgn(w.a[i][t]) != 0) {  // remainder became the smaller pivot
                    swap_rows(t, i);
                    clean = false;
                }
            }
            for (size_t j = t + 1; j < c; ++j) {
                if (sgn(w.a[t][j]) == 0) continue;
                Int q = fdiv_q(w.a[t][j], w.a[t][t]);
                col_op(j, q, t);
                if (sgn(w.a[t][j]) != 0) {
                    swap_cols(t, j);
                    clean = false;
                }
            }
            if (clean) break;
        }
        if (sgn(w.a[t][t]) < 0) negate_row(t);
        // enforce the divisibility chain d[t] | entries of the trailing block
        bool redo = false;
        for (size_t i = t + 1; i < r && !redo; ++i)
            for (size_t j = t + 1; j < c && !redo; ++j)
                if (sgn(w.a[i][j] % w.a[t][t]) != 0) {
                    Int minus_one = -1;
                    row_op(t, minus_one, i);  // row t += row i
                    redo = true;
                }
        if (redo) --t;
    }
    res.d.assign(n, 0);
    for (size_t t = 0; t < n; ++t) res.d[t] = w.a[t][t];
    if (want_transforms) {
        res.U = std::move(U);
        res.V = std::move(V);
    }
    return res;
}

std::vector<Int> quotient_invariants(size_t cols, const ZMat& rel) {
    std::vector<Int> d;
    size_t rank = 0;
    if (rel.nrows > 0) {
        SmithResult s = smith(rel);
        for (const Int& x : s.d)
            if (sgn(x) != 0) {
                ++rank;
                if (x > 1) d.push_back(x);
            }
    }
    std::sort(d.begin(), d.end());
    for (size_t i = rank; i < cols; ++i) d.push_back(0);
    return d;
}

}  // namespace cobord
