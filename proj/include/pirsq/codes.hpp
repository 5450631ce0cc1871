#ifndef PIRSQ_CODES_HPP
#define PIRSQ_CODES_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "pirsq/matrix.hpp"
#include "pirsq/rng.hpp"

namespace pirsq {

/// Parameters of a generalized Reed-Solomon code: evaluations of degree-<k
/// polynomials at distinct points alpha, scaled by nonzero multipliers.
struct GrsSpec {
    std::uint32_t modulus = 0;
    std::size_t k = 0;
    std::vector<std::uint32_t> alpha;
    std::vector<std::uint32_t> mult;

    std::size_t n() const { return alpha.size(); }
    void validate() const;

    /// Standard instance: alpha = (0, 1, ..., n-1), all multipliers one.
    static GrsSpec standard(std::size_t n, std::size_t k, std::uint32_t modulus);
};

/// k x n generator with row i holding mult[j] * alpha[j]^i.
Matrix grs_generator(const GrsSpec& spec);

enum class CodeFlavor { GenericMds, Grs };

/// An (n, k) MDS storage code: how every file is striped across servers.
struct StorageCode {
    std::size_t n = 0, k = 0;
    Matrix generator;  // k x n, column-MDS
    CodeFlavor flavor = CodeFlavor::GenericMds;
    std::optional<GrsSpec> grs;

    /// Systematic [I_K A] code; deterministic construction with a seeded
    /// random fallback. Throws field_too_small when no MDS matrix is found.
    static StorageCode generic(std::size_t n, std::size_t k, std::uint32_t modulus, Rng& rng);
    static StorageCode from_grs(const GrsSpec& spec);

    Matrix column(std::size_t server) const;  // k x 1 generator column
};

/// Row-equivalent systematic form [I_K A]. Requires a column-MDS input.
Matrix to_systematic(const Matrix& g);

/// Dimension of the span of all component-wise products of a row of g1 with
/// a row of g2 (the Schur product of the two row spaces).
std::size_t schur_product_dim(const Matrix& g1, const Matrix& g2);

/// The n x t row-MDS spread matrix of an (n, k) systematic MDS code: rows
/// (H'; I_t; H'') where H'' is found by seeded search and the top block is
/// determined by the code so that one spread row combination per column is
/// redundant under the storage code. Throws retries_exhausted when the field
/// is too small for the search to succeed.
Matrix build_row_spread_generic(const Matrix& g_sys, std::size_t t, Rng& rng, std::size_t max_retries = 1000);

/// The n x t spread matrix whose transpose generates GRS_t over the code's
/// evaluation points (all-ones multipliers); row-MDS automatically.
Matrix build_row_spread_grs(const GrsSpec& spec, std::size_t t);

/// Coordinates of v_1 ^ ... ^ v_{t'} (rows of `vectors`, t' x t) in the
/// standard wedge basis e_{i_1} ^ ... ^ e_{i_{t'}}, i_1 < ... < i_{t'},
/// subsets in lexicographic order: coordinate J = det of the column subset J.
Matrix wedge_coordinates(const Matrix& vectors);

/// `count` subspaces of F_q^C(t,t'), each of dimension C(t-1,t'-1), built as
/// {u ^ w} for u on the moment curve plus the point at infinity. Any t'
/// distinct subspaces intersect in dimension one; the intersection
/// generators of the t'-subsets of any t of them span the ambient space.
std::vector<Subspace> exterior_subspaces(std::size_t t, std::size_t t_prime, std::uint32_t modulus,
                                         std::size_t count);

/// Same construction anchored at explicit distinct curve parameters.
std::vector<Subspace> exterior_subspaces_at(std::size_t t, std::size_t t_prime, std::uint32_t modulus,
                                            const std::vector<std::uint32_t>& curve_points);

/// Stack of per-server bases of the exterior subspaces: for each server one
/// C(t-1,t'-1)-row block; shape (C(t-1,t'-1) * n_servers) x C(t,t').
Matrix build_wedge_spread(std::size_t n_servers, std::size_t t, std::size_t t_prime, std::uint32_t modulus);
Matrix build_wedge_spread_at(std::size_t t, std::size_t t_prime, std::uint32_t modulus,
                             const std::vector<std::uint32_t>& curve_points);

}  // namespace pirsq

#endif
