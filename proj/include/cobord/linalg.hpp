#pragma once

#include "numeric.hpp"

#include <cstddef>
#include <vector>

namespace cobord {

using ZVec = std::vector<Int>;

struct ZMat {
    size_t nrows = 0, ncols = 0;
    std::vector<ZVec> a;

    ZMat() = default;
    ZMat(size_t r, size_t c) : nrows(r), ncols(c), a(r, ZVec(c, 0)) {}
    static ZMat identity(size_t n);

    ZVec& operator[](size_t i) { return a[i]; }
    const ZVec& operator[](size_t i) const { return a[i]; }
    void append_row(ZVec row);
    bool operator==(const ZMat& o) const { return nrows == o.nrows && ncols == o.ncols && a == o.a; }
};

ZMat mat_mul(const ZMat& x, const ZMat& y);
ZVec vec_mat(const ZVec& v, const ZMat& m);
bool is_zero(const ZVec& v);

// Integer lattice given by a row span, maintained as a Hermite-form echelon
// basis: pivots positive, entries above each pivot reduced into [0, pivot).
// All updates are unimodular row operations on the inserted rows.
//
// Rows are kept in machine words while every entry fits; the first update
// that would overflow promotes the lattice to arbitrary precision by
// replaying the journal of inserted rows, so results never depend on the
// representation.
class Lattice {
public:
    explicit Lattice(size_t cols) : cols_(cols) {}

    void insert(ZVec row);
    void insert_rows(const ZMat& rows);

    size_t cols() const { return cols_; }
    size_t rank() const { return piv_.size(); }
    const std::vector<ZVec>& basis() const;
    const std::vector<size_t>& pivots() const { return piv_; }
    ZMat basis_mat() const;

    // Reduce v by the basis rows; the remainder is the canonical residue.
    // If coeffs is given it receives q with  v = q * basis + remainder.
    ZVec reduce(ZVec v, std::vector<Int>* coeffs = nullptr) const;
    bool contains(const ZVec& v) const;

private:
    using Row64 = std::vector<long long>;

    void insert_z(ZVec row);
    void insert_64(Row64 row);
    void normalize_z();
    void normalize_64();
    void promote();  // convert to arbitrary precision, replaying the journal

    size_t cols_;
    bool small_ = true;
    std::vector<Row64> r64_;      // echelon rows while small_
    std::vector<Row64> journal_;  // raw inserted rows, for promotion replay
    std::vector<ZVec> rows_;      // echelon rows once promoted
    std::vector<size_t> piv_;     // pivot column per row, ascending
    mutable std::vector<ZVec> cache_;  // materialized basis() while small_
    mutable bool cache_ok_ = false;
};

// Canonical Hermite normal form of the row span (rank rows, no zero rows).
ZMat hnf(const ZMat& m);

// Basis (rows) of { x : x * m = 0 }. The result spans the full left kernel.
ZMat left_kernel(const ZMat& m);

// One integer solution of x * m = b, if any.
bool solve_left(const ZMat& m, const ZVec& b, ZVec* x);

// Repeated solves of x * m = b against a fixed m: echelonizes [m | I] once.
class LeftSolver {
public:
    explicit LeftSolver(const ZMat& m);
    bool solve(const ZVec& b, ZVec* x = nullptr) const;

private:
    Lattice lat_;
    size_t ncols_, nrows_;
};

// Smith normal form: U * m * V = diag(d), U and V unimodular, d[i] | d[i+1],
// d normalized nonnegative. d has min(nrows, ncols) entries.
struct SmithResult {
    std::vector<Int> d;
    ZMat U, V;
};
SmithResult smith(const ZMat& m, bool want_transforms = false);

// Invariant factors of Z^cols / rowspan(rel): torsion entries (> 1) in
// ascending divisibility order, then one 0 per free rank.
std::vector<Int> quotient_invariants(size_t cols, const ZMat& rel);

}  // namespace cobord
