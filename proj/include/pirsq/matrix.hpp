#ifndef PIRSQ_MATRIX_HPP
#define PIRSQ_MATRIX_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "pirsq/gf.hpp"
#include "pirsq/rng.hpp"

namespace pirsq {

/// Dense row-major matrix over a prime field F_q. Entries are stored as raw
/// residues with one modulus for the whole matrix; arithmetic between
/// matrices with different moduli throws.
class Matrix {
  public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, std::uint32_t modulus)
        : rows_(rows), cols_(cols), q_(modulus), a_(rows * cols, 0) {
        detail::require_prime_modulus(modulus);
    }

    static Matrix identity(std::size_t n, std::uint32_t modulus);
    static Matrix from_rows(const std::vector<std::vector<std::uint32_t>>& rows, std::uint32_t modulus);
    static Matrix vstack(const Matrix& top, const Matrix& bottom);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::uint32_t modulus() const { return q_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    std::uint32_t get(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, std::uint64_t v) { a_[r * cols_ + c] = static_cast<std::uint32_t>(v % q_); }
    FieldElement at(std::size_t r, std::size_t c) const { return FieldElement(get(r, c), q_); }

    Matrix operator*(const Matrix& o) const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && q_ == o.q_ && a_ == o.a_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    Matrix transpose() const;
    Matrix row(std::size_t r) const;
    Matrix rows_subset(const std::vector<std::size_t>& idx) const;
    Matrix columns_subset(const std::vector<std::size_t>& idx) const;
    bool is_zero() const;

    void swap_rows(std::size_t i, std::size_t j);
    /// row[i] += c * row[j]
    void add_scaled_row(std::size_t i, std::size_t j, std::uint32_t c);
    void scale_row(std::size_t i, std::uint32_t c);
    void set_row(std::size_t i, const Matrix& r);

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::uint32_t q_ = 0;
    std::vector<std::uint32_t> a_;
};

struct RrefResult {
    Matrix matrix;                     // same shape as the input, zero rows kept
    std::vector<std::size_t> pivots;   // pivot column per pivot row, strictly increasing
};

/// Canonical reduced row echelon form. Deterministic: for a fixed row space
/// the nonzero rows of the output are unique.
RrefResult rref(const Matrix& m);

std::size_t rank(const Matrix& m);

/// Determinant via Gaussian elimination (exact over F_q). Square input only.
FieldElement determinant(const Matrix& m);

std::optional<Matrix> inverse(const Matrix& m);

/// Any x with a*x = b, or nullopt when the system is inconsistent. Unique
/// when a has full column rank; free coordinates are set to zero otherwise.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);

/// Rows form a basis of the right null space {x : m*x = 0}.
Matrix kernel_basis(const Matrix& m);

/// order x nodes.size() matrix with entry (i, j) = nodes[j]^i. Nodes must be
/// distinct; requires nodes.size() >= order.
Matrix vandermonde(const std::vector<FieldElement>& nodes, std::size_t order);
Matrix vandermonde(const std::vector<std::uint32_t>& nodes, std::size_t order, std::uint32_t modulus);

/// Column-MDS: every k-subset of columns is linearly independent. For inputs
/// in systematic form [I_K A] the check reduces to all square submatrices of
/// A being nonsingular; other inputs fall back to the direct definition.
bool is_column_mds(const Matrix& g, std::size_t k);

/// Row-MDS: every t-subset of rows has rank t.
bool is_row_mds(const Matrix& h, std::size_t t);

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint32_t modulus, Rng& rng);

/// Uniform invertible n x n matrix (rejection sampling).
Matrix random_full_rank(std::size_t n, std::uint32_t modulus, Rng& rng);

/// A linear subspace of F_q^ambient held as its canonical RREF basis with
/// zero rows dropped, so equal subspaces compare equal.
class Subspace {
  public:
    static Subspace from_rows(const Matrix& rows);
    static Subspace zero(std::size_t ambient, std::uint32_t modulus);

    std::size_t dim() const { return basis_.rows(); }
    std::size_t ambient_dim() const { return ambient_; }
    std::uint32_t modulus() const { return q_; }
    const Matrix& basis() const { return basis_; }

    bool contains(const Matrix& row_vector) const;
    bool operator==(const Subspace& o) const {
        return ambient_ == o.ambient_ && q_ == o.q_ && basis_ == o.basis_;
    }

  private:
    Matrix basis_;
    std::size_t ambient_ = 0;
    std::uint32_t q_ = 0;
};

Subspace intersect(const Subspace& a, const Subspace& b);
Subspace subspace_sum(const Subspace& a, const Subspace& b);

}  // namespace pirsq

#endif
