#ifndef PIRSQ_SCHEME_HPP
#define PIRSQ_SCHEME_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pirsq/codes.hpp"
#include "pirsq/matrix.hpp"
#include "pirsq/rng.hpp"

namespace pirsq {

enum class Variant { GeneralT2, GrsT2, MultiFile, CyclicAdjacent, GeneralT };

const char* variant_name(Variant v);
std::optional<Variant> variant_from_name(const std::string& name);

struct SystemParams {
    std::size_t file_count = 2;     // M
    std::size_t server_count = 0;   // N
    std::size_t collusion = 2;      // T
    std::size_t code_dim = 0;       // K
    std::size_t desired_count = 1;  // P
    Variant variant = Variant::GeneralT2;
    std::uint32_t modulus = 0;      // q
    std::uint64_t seed = 0;

    /// Storage flavor implied by the variant: GRS for grs/multifile/generalT,
    /// generic systematic MDS for general/cyclic.
    bool grs_storage() const;
    bool cyclic() const { return variant == Variant::CyclicAdjacent; }

    std::size_t record_length() const;    // symbols per file (L)
    std::size_t stripes() const;          // coded symbols per server per file (L/K)
    std::size_t rows_per_server() const;  // query vectors per server per file (L/N)
    std::size_t z_rows() const;           // all-server common undesired rows
    std::size_t spread_cols() const;      // per-server spread rows
    std::size_t delta(std::size_t t_prime) const;  // t >= 3 per-level multiplicities

    void validate() const;
};

/// M files, each held as a stripes x K matrix of field symbols.
struct FileSet {
    std::vector<Matrix> files;
};

FileSet random_files(const SystemParams& params, Rng& rng);

/// Incidence between query vectors and servers.
struct VAssignment {
    std::vector<std::vector<std::size_t>> vector_servers;  // vector index -> owning servers
    std::vector<std::vector<std::size_t>> server_vectors;  // server -> vector indices, ascending
};

/// One vector per lexicographic k-subset of servers; every k servers share
/// exactly one vector and each server owns C(n-1, k-1) of them.
VAssignment design_v_sets(std::size_t n, std::size_t k);

/// n vectors; vector i lives on the k cyclically consecutive servers
/// {i, i+1, ..., i+k-1} mod n.
VAssignment design_v_sets_cyclic(std::size_t n, std::size_t k);

/// Per-server, per-file query block together with the user's private
/// bookkeeping needed to undo it.
struct ServerQuery {
    Matrix sent;                     // what the server receives
    Matrix canonical;                // the same rows in bookkeeping order
    std::vector<std::size_t> perm;   // sent.row(i) == canonical.row(perm[i]); empty when rref is sent
    Matrix basis_change;             // canonical == basis_change * sent
};

enum class Role { Desired, Undesired };

struct QueryFamily {
    Role role = Role::Undesired;
    Matrix source;  // private full-rank matrix the query rows are drawn from
    std::vector<ServerQuery> per_server;
};

/// The user's full private state for one retrieval.
struct QueryPlan {
    SystemParams params;
    StorageCode code;
    std::vector<std::size_t> desired_files;  // sorted, size P
    std::vector<std::vector<std::size_t>> vector_servers;
    std::vector<std::vector<std::size_t>> server_vectors;
    std::vector<QueryFamily> families;  // indexed by file
    Matrix row_spread;                  // n x t row-MDS spread
    std::vector<Matrix> wedge_spreads;  // t >= 3: one per level t' = 2..t-1

    std::size_t first_undesired() const;
};

QueryPlan build_query_plan(const SystemParams& params, const StorageCode& code,
                           const std::vector<std::size_t>& desired, Rng& rng);

/// Per-server download schedule: how many symbol pairs are sent raw and the
/// invertible mixing applied before truncation.
struct CombinationStrategy {
    std::vector<std::size_t> raw_counts;  // I_n
    std::vector<Matrix> mixers;           // C_n
    std::optional<Matrix> file_mixer;     // D (P x M), multi-file only
    std::uint64_t strategy_seed = 0;

    std::size_t total_raw() const;
};

CombinationStrategy make_strategy(const SystemParams& params, const QueryPlan& plan);

/// ζ: redundant tail servers exploited by the deterministic schedule.
std::size_t squeeze_margin(const SystemParams& params);

/// The closed-form dimension bound I on the queried undesired symbols.
std::size_t undesired_dimension_bound(const SystemParams& params);

/// chunks[server][file]: the stripes x 1 coded column held by each server.
std::vector<std::vector<Matrix>> store_files(const FileSet& files, const StorageCode& code);

std::vector<FieldElement> server_answer(const QueryPlan& plan, const CombinationStrategy& strategy,
                                        std::size_t server, const std::vector<Matrix>& chunks);

std::size_t answer_symbol_count(const SystemParams& params, const CombinationStrategy& strategy,
                                std::size_t server);

struct Reconstruction {
    bool success = false;
    std::string error;
    std::vector<Matrix> files;  // recovered desired files, in desired_files order
};

Reconstruction reconstruct(const QueryPlan& plan, const CombinationStrategy& strategy,
                           const std::vector<std::vector<FieldElement>>& answers);

/// Exact linear functionals (rows) computed by every queried undesired symbol
/// of the first undesired file, in message coordinates; its rank is the true
/// queried-undesired dimension.
Matrix undesired_functional_matrix(const QueryPlan& plan);

/// Functional of one projected symbol: query row applied to W * g_col, as a
/// length (stripes * k) row over the file entries in row-major order.
Matrix symbol_functional(const Matrix& query_row, const Matrix& generator_column);

/// Storage code implied by params (generic or standard GRS over F_q).
StorageCode make_storage_code(const SystemParams& params, Rng& rng);

}  // namespace pirsq

#endif
