#include "pirsq/matrix.hpp"

#include <algorithm>

#include "pirsq/combin.hpp"

namespace pirsq {

using detail::mod_add;
using detail::mod_inv;
using detail::mod_mul;
using detail::mod_sub;

Matrix Matrix::identity(std::size_t n, std::uint32_t modulus) {
    Matrix m(n, n, modulus);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<std::uint32_t>>& rows, std::uint32_t modulus) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows[0].size();
    Matrix m(r, c, modulus);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw Error("dimension_mismatch", "ragged row list");
        for (std::size_t j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
}

Matrix Matrix::vstack(const Matrix& top, const Matrix& bottom) {
    if (top.empty()) return bottom;
    if (bottom.empty()) return top;
    if (top.cols() != bottom.cols() || top.modulus() != bottom.modulus())
        throw Error("dimension_mismatch", "vstack shape or modulus mismatch");
    Matrix m(top.rows() + bottom.rows(), top.cols(), top.modulus());
    for (std::size_t i = 0; i < top.rows(); ++i)
        for (std::size_t j = 0; j < top.cols(); ++j) m.set(i, j, top.get(i, j));
    for (std::size_t i = 0; i < bottom.rows(); ++i)
        for (std::size_t j = 0; j < bottom.cols(); ++j) m.set(top.rows() + i, j, bottom.get(i, j));
    return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_ || q_ != o.q_) throw Error("dimension_mismatch", "matrix product shape or modulus mismatch");
    Matrix out(rows_, o.cols_, q_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t t = 0; t < cols_; ++t) {
            std::uint32_t v = get(i, t);
            if (v == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) {
                std::uint32_t add = mod_mul(v, o.get(t, j), q_);
                out.a_[i * o.cols_ + j] = mod_add(out.a_[i * o.cols_ + j], add, q_);
            }
        }
    }
    return out;
}

Matrix Matrix::operator+(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || q_ != o.q_)
        throw Error("dimension_mismatch", "matrix sum shape or modulus mismatch");
    Matrix out(rows_, cols_, q_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = mod_add(a_[i], o.a_[i], q_);
    return out;
}

Matrix Matrix::operator-(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || q_ != o.q_)
        throw Error("dimension_mismatch", "matrix difference shape or modulus mismatch");
    Matrix out(rows_, cols_, q_);
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = mod_sub(a_[i], o.a_[i], q_);
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(cols_, rows_, q_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out.set(j, i, get(i, j));
    return out;
}

Matrix Matrix::row(std::size_t r) const {
    Matrix out(1, cols_, q_);
    for (std::size_t j = 0; j < cols_; ++j) out.set(0, j, get(r, j));
    return out;
}

Matrix Matrix::rows_subset(const std::vector<std::size_t>& idx) const {
    Matrix out(idx.size(), cols_, q_);
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < cols_; ++j) out.set(i, j, get(idx[i], j));
    return out;
}

Matrix Matrix::columns_subset(const std::vector<std::size_t>& idx) const {
    Matrix out(rows_, idx.size(), q_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) out.set(i, j, get(i, idx[j]));
    return out;
}

bool Matrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](std::uint32_t v) { return v == 0; });
}

void Matrix::swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap(a_[i * cols_ + c], a_[j * cols_ + c]);
}

void Matrix::add_scaled_row(std::size_t i, std::size_t j, std::uint32_t c) {
    if (c == 0) return;
    for (std::size_t t = 0; t < cols_; ++t)
        a_[i * cols_ + t] = mod_add(a_[i * cols_ + t], mod_mul(c, a_[j * cols_ + t], q_), q_);
}

void Matrix::scale_row(std::size_t i, std::uint32_t c) {
    for (std::size_t t = 0; t < cols_; ++t) a_[i * cols_ + t] = mod_mul(a_[i * cols_ + t], c, q_);
}

void Matrix::set_row(std::size_t i, const Matrix& r) {
    if (r.rows() != 1 || r.cols() != cols_ || r.modulus() != q_)
        throw Error("dimension_mismatch", "set_row shape or modulus mismatch");
    for (std::size_t j = 0; j < cols_; ++j) set(i, j, r.get(0, j));
}

RrefResult rref(const Matrix& m) {
    Matrix a = m;
    const std::uint32_t q = a.modulus();
    std::vector<std::size_t> pivots;
    std::size_t pr = 0;  // next pivot row
    for (std::size_t c = 0; c < a.cols() && pr < a.rows(); ++c) {
        std::size_t sel = pr;
        while (sel < a.rows() && a.get(sel, c) == 0) ++sel;
        if (sel == a.rows()) continue;
        a.swap_rows(pr, sel);
        a.scale_row(pr, mod_inv(a.get(pr, c), q));
        for (std::size_t r = 0; r < a.rows(); ++r) {
            if (r == pr) continue;
            std::uint32_t v = a.get(r, c);
            if (v != 0) a.add_scaled_row(r, pr, q - v);
        }
        pivots.push_back(c);
        ++pr;
    }
    return {std::move(a), std::move(pivots)};
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

FieldElement determinant(const Matrix& m) {
    if (m.rows() != m.cols()) throw Error("dimension_mismatch", "determinant of a non-square matrix");
    Matrix a = m;
    const std::uint32_t q = a.modulus();
    std::uint32_t det = 1 % q;
    for (std::size_t c = 0; c < a.cols(); ++c) {
        std::size_t sel = c;
        while (sel < a.rows() && a.get(sel, c) == 0) ++sel;
        if (sel == a.rows()) return FieldElement(0, q);
        if (sel != c) {
            a.swap_rows(c, sel);
            det = mod_mul(det, q - 1, q);
        }
        det = mod_mul(det, a.get(c, c), q);
        std::uint32_t piv_inv = mod_inv(a.get(c, c), q);
        for (std::size_t r = c + 1; r < a.rows(); ++r) {
            std::uint32_t v = a.get(r, c);
            if (v != 0) a.add_scaled_row(r, c, mod_mul(q - v, piv_inv, q));
        }
    }
    return FieldElement(det, q);
}

std::optional<Matrix> inverse(const Matrix& m) {
    if (m.rows() != m.cols()) throw Error("dimension_mismatch", "inverse of a non-square matrix");
    RrefResult r = rref(Matrix::vstack(m.transpose(), Matrix::identity(m.rows(), m.modulus())).transpose());
    // rref of [m | I]
    if (r.pivots.size() != m.rows()) return std::nullopt;
    for (std::size_t i = 0; i < m.rows(); ++i)
        if (r.pivots[i] != i) return std::nullopt;
    std::vector<std::size_t> right(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) right[j] = m.cols() + j;
    return r.matrix.columns_subset(right);
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.modulus() != b.modulus())
        throw Error("dimension_mismatch", "solve: row count or modulus mismatch");
    RrefResult r = rref(Matrix::vstack(a.transpose(), b.transpose()).transpose());
    const std::size_t na = a.cols();
    Matrix x(na, b.cols(), a.modulus());
    for (std::size_t i = 0; i < r.pivots.size(); ++i) {
        if (r.pivots[i] >= na) return std::nullopt;  // pivot in the b block: inconsistent
        for (std::size_t j = 0; j < b.cols(); ++j) x.set(r.pivots[i], j, r.matrix.get(i, na + j));
    }
    return x;
}

Matrix kernel_basis(const Matrix& m) {
    RrefResult r = rref(m);
    const std::size_t n = m.cols();
    const std::uint32_t q = m.modulus();
    std::vector<bool> is_pivot(n, false);
    for (std::size_t p : r.pivots) is_pivot[p] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < n; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    Matrix out(free_cols.size(), n, q);
    for (std::size_t i = 0; i < free_cols.size(); ++i) {
        std::size_t fc = free_cols[i];
        out.set(i, fc, 1);
        for (std::size_t pi = 0; pi < r.pivots.size(); ++pi) {
            std::uint32_t v = r.matrix.get(pi, fc);
            if (v != 0) out.set(i, r.pivots[pi], q - v);
        }
    }
    return out;
}

Matrix vandermonde(const std::vector<FieldElement>& nodes, std::size_t order) {
    if (nodes.empty()) throw Error("dimension_mismatch", "vandermonde needs at least one node");
    const std::uint32_t q = nodes[0].modulus();
    std::vector<std::uint32_t> vals;
    vals.reserve(nodes.size());
    for (const auto& n : nodes) {
        if (n.modulus() != q) throw Error("modulus_mismatch", "vandermonde nodes from different fields");
        vals.push_back(n.value());
    }
    return vandermonde(vals, order, q);
}

Matrix vandermonde(const std::vector<std::uint32_t>& nodes, std::size_t order, std::uint32_t modulus) {
    if (nodes.size() < order) throw Error("dimension_mismatch", "vandermonde: fewer nodes than the requested order");
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (nodes[i] % modulus == nodes[j] % modulus)
                throw Error("duplicate_nodes", "vandermonde nodes must be distinct");
    Matrix m(order, nodes.size(), modulus);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        std::uint32_t p = 1 % modulus;
        std::uint32_t x = nodes[j] % modulus;
        for (std::size_t i = 0; i < order; ++i) {
            m.set(i, j, p);
            p = mod_mul(p, x, modulus);
        }
    }
    return m;
}

namespace {

// true when g = [I_k A]
bool has_systematic_prefix(const Matrix& g, std::size_t k) {
    if (g.rows() != k || g.cols() < k) return false;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (g.get(i, j) != (i == j ? 1u : 0u)) return false;
    return true;
}

}  // namespace

bool is_column_mds(const Matrix& g, std::size_t k) {
    if (g.rows() != k || k > g.cols()) throw Error("dimension_mismatch", "is_column_mds: bad shape");
    if (k == 0) return true;
    const std::size_t n = g.cols();
    if (has_systematic_prefix(g, k)) {
        // every square submatrix of A must be nonsingular
        const std::size_t ac = n - k;
        std::vector<std::size_t> acols(ac);
        for (std::size_t j = 0; j < ac; ++j) acols[j] = k + j;
        Matrix a = g.columns_subset(acols);
        std::size_t smax = std::min(k, ac);
        for (std::size_t s = 1; s <= smax; ++s) {
            for (const auto& ri : k_subsets(k, s)) {
                Matrix ar = a.rows_subset(ri);
                for (const auto& ci : k_subsets(ac, s)) {
                    if (determinant(ar.columns_subset(ci)).is_zero()) return false;
                }
            }
        }
        return true;
    }
    for (const auto& ci : k_subsets(n, k)) {
        if (determinant(g.columns_subset(ci)).is_zero()) return false;
    }
    return true;
}

bool is_row_mds(const Matrix& h, std::size_t t) {
    if (h.cols() != t || t > h.rows()) throw Error("dimension_mismatch", "is_row_mds: bad shape");
    for (const auto& ri : k_subsets(h.rows(), t)) {
        if (determinant(h.rows_subset(ri)).is_zero()) return false;
    }
    return true;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint32_t modulus, Rng& rng) {
    Matrix m(rows, cols, modulus);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rng.field_value(modulus));
    return m;
}

Matrix random_full_rank(std::size_t n, std::uint32_t modulus, Rng& rng) {
    while (true) {
        Matrix m = random_matrix(n, n, modulus, rng);
        if (!determinant(m).is_zero()) return m;
    }
}

Subspace Subspace::from_rows(const Matrix& rows) {
    RrefResult r = rref(rows);
    Subspace s;
    s.ambient_ = rows.cols();
    s.q_ = rows.modulus();
    std::vector<std::size_t> keep(r.pivots.size());
    for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = i;
    s.basis_ = r.matrix.rows_subset(keep);
    return s;
}

Subspace Subspace::zero(std::size_t ambient, std::uint32_t modulus) {
    Subspace s;
    s.ambient_ = ambient;
    s.q_ = modulus;
    s.basis_ = Matrix(0, ambient, modulus);
    return s;
}

bool Subspace::contains(const Matrix& row_vector) const {
    if (row_vector.rows() != 1 || row_vector.cols() != ambient_)
        throw Error("dimension_mismatch", "contains: expected a 1 x ambient row vector");
    if (row_vector.is_zero()) return true;
    return rank(Matrix::vstack(basis_, row_vector)) == dim();
}

Subspace intersect(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim() || a.modulus() != b.modulus())
        throw Error("dimension_mismatch", "intersect: ambient or modulus mismatch");
    if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(a.ambient_dim(), a.modulus());
    // x in both spaces iff x = u A = v B; kernel of [A^T | -B^T] yields (u, v)
    Matrix at = a.basis().transpose();
    Matrix bt = b.basis().transpose();
    Matrix stacked(at.rows(), at.cols() + bt.cols(), a.modulus());
    const std::uint32_t q = a.modulus();
    for (std::size_t i = 0; i < at.rows(); ++i) {
        for (std::size_t j = 0; j < at.cols(); ++j) stacked.set(i, j, at.get(i, j));
        for (std::size_t j = 0; j < bt.cols(); ++j) {
            std::uint32_t v = bt.get(i, j);
            stacked.set(i, at.cols() + j, v == 0 ? 0 : q - v);
        }
    }
    Matrix ker = kernel_basis(stacked);
    if (ker.rows() == 0) return Subspace::zero(a.ambient_dim(), q);
    std::vector<std::size_t> ucols(a.dim());
    for (std::size_t j = 0; j < ucols.size(); ++j) ucols[j] = j;
    return Subspace::from_rows(ker.columns_subset(ucols) * a.basis());
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim() || a.modulus() != b.modulus())
        throw Error("dimension_mismatch", "subspace_sum: ambient or modulus mismatch");
    return Subspace::from_rows(Matrix::vstack(a.basis(), b.basis()));
}

}  // namespace pirsq
