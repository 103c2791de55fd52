#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqf {

/// Dense matrix of arbitrary-precision integers, row-major.
/// Rows are the interesting objects here: a matrix usually stands for the
/// lattice spanned by its rows inside Z^cols.
class IntMat {
public:
    IntMat() : rows_(0), cols_(0) {}
    IntMat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    static IntMat identity(std::size_t n);
    static IntMat from_rows(const std::vector<std::vector<mpz_class>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0; }

    const mpz_class& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    mpz_class& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }

    std::vector<mpz_class> row(std::size_t i) const;
    void append_row(const std::vector<mpz_class>& r);

    bool operator==(const IntMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const IntMat& o) const { return !(*this == o); }

    std::string to_string() const;

private:
    std::size_t rows_, cols_;
    std::vector<mpz_class> a_;
};

/// Incremental builder for row-style Hermite normal forms.
///
/// Rows are inserted one at a time and reduced against the current echelon
/// set; finalize() produces the canonical HNF (positive pivots, entries above
/// a pivot reduced into [0, pivot), zero rows dropped). Inserting the rows of
/// a matrix in any order yields the same canonical form.
class HnfBuilder {
public:
    explicit HnfBuilder(std::size_t cols) : cols_(cols) {}

    /// Reduce v against the current rows and absorb what is left. Returns
    /// true when v enlarged the lattice.
    bool insert(std::vector<mpz_class> v);

    /// Current lattice rank.
    std::size_t rank() const { return rows_.size(); }

    /// True if v already lies in the current row lattice (does not modify).
    bool contains(const std::vector<mpz_class>& v) const;

    /// Canonical HNF of everything inserted so far.
    IntMat finalize() const;

    std::size_t cols() const { return cols_; }

private:
    void reduce_column(std::size_t idx);

    std::size_t cols_;
    // Echelon rows keyed by pivot column (strictly increasing pivot cols).
    std::vector<std::vector<mpz_class>> rows_;
    std::vector<std::size_t> pivot_col_;

    friend IntMat hnf(const IntMat&);
};

/// Canonical row Hermite normal form; zero rows removed.
IntMat hnf(const IntMat& m);

/// Basis (in HNF) of the left kernel {x : x M = 0}.
IntMat kernel_lattice(const IntMat& m);

/// Rank of the row lattice.
std::size_t rank(const IntMat& m);

/// Determinant of a square matrix (fraction-free Bareiss elimination).
mpz_class det(const IntMat& m);

struct LatticeIndex {
    bool finite = false;     // false: ranks differ (infinite index)
    mpz_class index;         // meaningful when finite
};

/// Exact index [L1 : L2] of row lattices given in HNF. Throws
/// std::invalid_argument with a witness row when L2 is not contained in L1.
LatticeIndex lattice_index(const IntMat& l1_hnf, const IntMat& l2_hnf);

/// Solve x * H = v over Z for H in HNF. Empty result when v is not in the
/// row lattice.
std::optional<std::vector<mpz_class>> solve_in_hnf(const IntMat& h, const std::vector<mpz_class>& v);

/// True if v lies in the rational row span of H (H in HNF or any echelon form).
bool in_rational_span(const IntMat& h, const std::vector<mpq_class>& v);

struct SmithForm {
    std::vector<mpz_class> divisors;  // d_1 | d_2 | ... (size = min(rows, cols) of input, may include 0)
    IntMat v;                         // unimodular: x |-> x * v carries rowspan(B) to the diagonal lattice
};

/// Smith normal form data of B. With U B V = D, returns the diagonal of D and
/// V; the class of x in Z^cols / rowspan(B) is read off componentwise from
/// (x V) mod d_i (d_i = 0 meaning a free Z coordinate).
SmithForm smith_form(const IntMat& b);

/// 2-saturate a lattice inside its rational span: the smallest lattice L'
/// containing L with L'/L a 2-group and L' = {x in QL : 2^k x in L} cap Z^n.
/// Input and output in HNF.
IntMat saturate_at_2(const IntMat& l_hnf);

/// Content: gcd of all entries (0 for the empty matrix).
mpz_class content(const IntMat& m);

/// Divide all entries by d (must divide exactly).
IntMat divexact(const IntMat& m, const mpz_class& d);

IntMat scalar_mul(const IntMat& m, const mpz_class& d);

/// Stack two matrices with equal column counts.
IntMat vstack(const IntMat& a, const IntMat& b);

/// Particular exact solution of A x = b over the rationals (free variables
/// set to 0); empty when inconsistent.
std::optional<std::vector<mpq_class>> solve_rational(const std::vector<std::vector<mpq_class>>& a,
                                                     const std::vector<mpq_class>& b);

/// det(A) * A^{-1} for a nonsingular square matrix (integer adjugate up to
/// the sign of the determinant).
IntMat inverse_times_det(const IntMat& a);

}  // namespace eqf
