#include "pirsq/scheme.hpp"

#include <algorithm>

#include "pirsq/combin.hpp"

namespace pirsq {

namespace {
constexpr std::uint64_t kSpreadTag = 11;
constexpr std::uint64_t kFamilyTagBase = 0x100;
constexpr std::uint64_t kStrategyTag = 17;
constexpr std::uint64_t kStarTag = 19;
constexpr std::uint64_t kCodeTag = 23;
}  // namespace

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::GeneralT2: return "general";
        case Variant::GrsT2: return "grs";
        case Variant::MultiFile: return "multifile";
        case Variant::CyclicAdjacent: return "cyclic";
        case Variant::GeneralT: return "generalT";
    }
    return "?";
}

std::optional<Variant> variant_from_name(const std::string& name) {
    if (name == "general") return Variant::GeneralT2;
    if (name == "grs") return Variant::GrsT2;
    if (name == "multifile") return Variant::MultiFile;
    if (name == "cyclic") return Variant::CyclicAdjacent;
    if (name == "generalT") return Variant::GeneralT;
    return std::nullopt;
}

bool SystemParams::grs_storage() const {
    return variant == Variant::GrsT2 || variant == Variant::MultiFile || variant == Variant::GeneralT;
}

std::size_t SystemParams::stripes() const {
    if (cyclic()) return server_count;
    return static_cast<std::size_t>(binomial(server_count, static_cast<std::int64_t>(code_dim)));
}

std::size_t SystemParams::record_length() const { return stripes() * code_dim; }

std::size_t SystemParams::rows_per_server() const {
    if (cyclic()) return code_dim;
    return static_cast<std::size_t>(
        binomial(server_count - 1, static_cast<std::int64_t>(code_dim) - 1));
}

std::size_t SystemParams::z_rows() const {
    if (cyclic()) return code_dim - 1;
    return delta(collusion);
}

std::size_t SystemParams::spread_cols() const {
    if (cyclic()) return 1;
    return delta(1);
}

std::size_t SystemParams::delta(std::size_t t_prime) const {
    return static_cast<std::size_t>(binomial(server_count - collusion,
                                             static_cast<std::int64_t>(code_dim) - static_cast<std::int64_t>(t_prime)));
}

void SystemParams::validate() const {
    if (file_count < 2) throw Error("invalid_params", "at least two files are required (M >= 2)");
    if (code_dim == 0) throw Error("invalid_params", "code dimension K must be positive");
    if (server_count < 2) throw Error("invalid_params", "at least two servers are required");
    if (collusion >= server_count) throw Error("invalid_params", "collusion T must be below N");
    if (variant == Variant::GeneralT) {
        if (collusion < 3) throw Error("invalid_params", "generalT variant needs T >= 3");
        if (file_count != 2) throw Error("invalid_params", "the T >= 3 scheme retrieves 1 of 2 files");
    } else if (collusion != 2) {
        throw Error("invalid_params", "this variant is defined for T = 2");
    }
    if (cyclic()) {
        if (server_count < code_dim + 2) throw Error("invalid_params", "cyclic variant needs N >= K + 2");
    } else if (server_count < code_dim + collusion) {
        throw Error("invalid_params", "need N >= K + T");
    }
    if (variant == Variant::MultiFile) {
        if (desired_count < 1 || desired_count >= file_count)
            throw Error("invalid_params", "multi-file retrieval needs 1 <= P < M");
    } else if (desired_count != 1) {
        throw Error("invalid_params", "P > 1 requires the multifile variant");
    }
    detail::require_prime_modulus(modulus);
    if (variant != Variant::GeneralT && modulus < rows_per_server())
        throw Error("field_too_small", "q must cover the Vandermonde mixer order L/N");
    if (grs_storage() && modulus < server_count)
        throw Error("field_too_small", "GRS storage needs q >= N evaluation points");
    if (variant == Variant::MultiFile && modulus < file_count)
        throw Error("field_too_small", "multi-file mixing needs q >= M");
    record_length();  // throws on binomial overflow
}

FileSet random_files(const SystemParams& params, Rng& rng) {
    FileSet fs;
    fs.files.reserve(params.file_count);
    for (std::size_t m = 0; m < params.file_count; ++m)
        fs.files.push_back(random_matrix(params.stripes(), params.code_dim, params.modulus, rng));
    return fs;
}

VAssignment design_v_sets(std::size_t n, std::size_t k) {
    if (k == 0 || k > n) throw Error("invalid_params", "v-design needs 1 <= k <= n");
    VAssignment va;
    va.vector_servers = k_subsets(n, k);
    va.server_vectors.assign(n, {});
    for (std::size_t v = 0; v < va.vector_servers.size(); ++v)
        for (std::size_t s : va.vector_servers[v]) va.server_vectors[s].push_back(v);
    return va;
}

VAssignment design_v_sets_cyclic(std::size_t n, std::size_t k) {
    if (k == 0 || k > n) throw Error("invalid_params", "v-design needs 1 <= k <= n");
    VAssignment va;
    va.vector_servers.resize(n);
    va.server_vectors.assign(n, {});
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t j = 0; j < k; ++j) va.vector_servers[v].push_back((v + j) % n);
        std::sort(va.vector_servers[v].begin(), va.vector_servers[v].end());
    }
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t s : va.vector_servers[v]) va.server_vectors[s].push_back(v);
    return va;
}

std::size_t QueryPlan::first_undesired() const {
    for (std::size_t m = 0; m < families.size(); ++m)
        if (families[m].role == Role::Undesired) return m;
    throw Error("invalid_params", "plan has no undesired file");
}

namespace {

Matrix permutation_inverse_matrix(const std::vector<std::size_t>& perm, std::uint32_t q) {
    // sent.row(i) == canonical.row(perm[i]); returns B with canonical == B * sent
    Matrix b(perm.size(), perm.size(), q);
    for (std::size_t i = 0; i < perm.size(); ++i) b.set(perm[i], i, 1);
    return b;
}

// Canonical undesired block for one server of a T = 2 or cyclic plan:
// [common rows, spread rows]. Spread row j mixes the hidden source rows
// through row `server` of the spread matrix.
Matrix undesired_rows_t2(const SystemParams& params, const Matrix& source, const Matrix& spread,
                         std::size_t server) {
    const std::size_t sigma = params.z_rows();
    const std::size_t mu = params.spread_cols();
    const std::size_t width = params.stripes();
    const std::uint32_t q = params.modulus;
    Matrix rows(sigma + mu, width, q);
    for (std::size_t i = 0; i < sigma; ++i) rows.set_row(i, source.row(i));
    for (std::size_t j = 0; j < mu; ++j) {
        Matrix acc(1, width, q);
        for (std::size_t t = 0; t < params.collusion; ++t) {
            std::uint32_t c = spread.get(server, t);
            if (c == 0) continue;
            for (std::size_t col = 0; col < width; ++col) {
                std::uint64_t v = acc.get(0, col) +
                                  static_cast<std::uint64_t>(detail::mod_mul(c, source.get(sigma + t * mu + j, col), q));
                acc.set(0, col, v % q);
            }
        }
        rows.set_row(sigma + j, acc);
    }
    return rows;
}

// Canonical undesired block for one server of a t >= 3 plan:
// [common rows, per-level paired rows, spread rows].
Matrix undesired_rows_general_t(const SystemParams& params, const QueryPlan& plan, const Matrix& source,
                                std::size_t server) {
    const std::size_t t = params.collusion;
    const std::size_t width = params.stripes();
    const std::uint32_t q = params.modulus;
    const std::size_t rows_n = params.rows_per_server();
    Matrix rows(rows_n, width, q);
    std::size_t out = 0;
    std::size_t src = 0;

    auto mix_into = [&](std::size_t out_row, const std::vector<std::pair<std::uint32_t, std::size_t>>& terms) {
        Matrix acc(1, width, q);
        for (auto [c, idx] : terms) {
            if (c == 0) continue;
            for (std::size_t col = 0; col < width; ++col) {
                std::uint64_t v = acc.get(0, col) +
                                  static_cast<std::uint64_t>(detail::mod_mul(c, source.get(idx, col), q));
                acc.set(0, col, v % q);
            }
        }
        rows.set_row(out_row, acc);
    };

    const std::size_t dt = params.delta(t);
    for (std::size_t i = 0; i < dt; ++i) rows.set_row(out++, source.row(src + i));
    src += dt;

    for (std::size_t tp = 2; tp < t; ++tp) {
        const std::size_t dtp = params.delta(tp);
        const std::size_t group = static_cast<std::size_t>(binomial(t, static_cast<std::int64_t>(tp)));
        const std::size_t block = static_cast<std::size_t>(binomial(t - 1, static_cast<std::int64_t>(tp) - 1));
        const Matrix& star = plan.wedge_spreads[tp - 2];
        for (std::size_t j = 0; j < dtp; ++j) {
            for (std::size_t b = 0; b < block; ++b) {
                std::vector<std::pair<std::uint32_t, std::size_t>> terms;
                for (std::size_t l = 0; l < group; ++l)
                    terms.emplace_back(star.get(server * block + b, l), src + j * group + l);
                mix_into(out++, terms);
            }
        }
        src += dtp * group;
    }

    const std::size_t d1 = params.delta(1);
    for (std::size_t j = 0; j < d1; ++j) {
        std::vector<std::pair<std::uint32_t, std::size_t>> terms;
        for (std::size_t tt = 0; tt < t; ++tt)
            terms.emplace_back(plan.row_spread.get(server, tt), src + tt * d1 + j);
        mix_into(out++, terms);
    }
    return rows;
}

// Coefficient rank of one paired level against the storage code: rows are
// (spread row for server n) x (generator column n). The level contributes
// its per-column count times this rank to the queried-undesired dimension,
// so the point choice below insists on the full min(N*b, K*group).
std::size_t paired_level_rank(const SystemParams& params, const StorageCode& code, const Matrix& star,
                              std::size_t t_prime) {
    const std::size_t block =
        static_cast<std::size_t>(binomial(params.collusion - 1, static_cast<std::int64_t>(t_prime) - 1));
    const std::size_t group =
        static_cast<std::size_t>(binomial(params.collusion, static_cast<std::int64_t>(t_prime)));
    const std::uint32_t q = params.modulus;
    Matrix m(params.server_count * block, group * params.code_dim, q);
    for (std::size_t n = 0; n < params.server_count; ++n)
        for (std::size_t i = 0; i < block; ++i)
            for (std::size_t l = 0; l < group; ++l)
                for (std::size_t k2 = 0; k2 < params.code_dim; ++k2)
                    m.set(n * block + i, l * params.code_dim + k2,
                          detail::mod_mul(star.get(n * block + i, l), code.generator.get(k2, n), q));
    return rank(m);
}

// Curve parameters for the wedge spreads, chosen by seeded search until every
// paired level attains its full coefficient rank. Degenerate alignments with
// the storage code's evaluation points (such as an affine match) would
// otherwise shrink the queried-undesired dimension below the accounted value.
std::vector<Matrix> build_wedge_spreads(const SystemParams& params, const StorageCode& code, Rng rng) {
    const std::size_t n = params.server_count;
    const std::size_t t = params.collusion;
    const std::uint32_t q = params.modulus;
    if (static_cast<std::uint64_t>(q) + 1 < n)
        throw Error("field_too_small", "wedge spread needs q + 1 >= n");
    for (std::size_t attempt = 0; attempt < 100; ++attempt) {
        std::vector<std::uint32_t> points;
        while (points.size() < n) {
            std::uint32_t x = rng.field_value(q);
            bool dup = false;
            for (std::uint32_t seen : points) dup = dup || seen == x;
            if (!dup) points.push_back(x);
        }
        std::vector<Matrix> spreads;
        bool ok = true;
        for (std::size_t tp = 2; tp < t && ok; ++tp) {
            spreads.push_back(build_wedge_spread_at(t, tp, q, points));
            std::size_t block = static_cast<std::size_t>(binomial(t - 1, static_cast<std::int64_t>(tp) - 1));
            std::size_t group = static_cast<std::size_t>(binomial(t, static_cast<std::int64_t>(tp)));
            std::size_t want = std::min(n * block, params.code_dim * group);
            ok = paired_level_rank(params, code, spreads.back(), tp) == want;
        }
        if (ok) return spreads;
    }
    throw Error("retries_exhausted", "no curve parameters reach full paired-level rank; raise q");
}

// Deterministic-schedule spanning condition: the spread rows of the servers
// that download raw symbols must generate every spread row. Per spread
// column the symbol on server n weighs the hidden unknowns by
// spread(n, t) * generator(k, n); the first n - zeta rows of that
// coefficient matrix must carry its full rank. Row-MDS alone does not imply
// this when n > 2k, so candidate spreads are filtered on it.
bool schedule_spanning_ok(const SystemParams& params, const StorageCode& code, const Matrix& spread) {
    const std::size_t n = params.server_count;
    const std::size_t k = params.code_dim;
    const std::size_t t = params.collusion;
    const std::uint32_t q = params.modulus;
    Matrix m(n, t * k, q);
    for (std::size_t srv = 0; srv < n; ++srv)
        for (std::size_t tt = 0; tt < t; ++tt)
            for (std::size_t k2 = 0; k2 < k; ++k2)
                m.set(srv, tt * k + k2, detail::mod_mul(spread.get(srv, tt), code.generator.get(k2, srv), q));
    std::vector<std::size_t> kept(n - squeeze_margin(params));
    for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = i;
    return rank(m.rows_subset(kept)) == rank(m);
}

ServerQuery finish_query(const SystemParams& params, Matrix canonical, Rng& rng) {
    ServerQuery sq;
    const std::uint32_t q = params.modulus;
    if (params.variant == Variant::GeneralT) {
        RrefResult r = rref(canonical);
        if (r.pivots.size() != canonical.rows())
            throw Error("invalid_params", "query block unexpectedly rank deficient");
        sq.sent = r.matrix;
        auto change = solve(sq.sent.transpose(), canonical.transpose());
        if (!change) throw Error("invalid_params", "query basis change failed");
        sq.basis_change = change->transpose();
    } else {
        sq.perm = rng.permutation(canonical.rows());
        Matrix sent(canonical.rows(), canonical.cols(), q);
        for (std::size_t i = 0; i < canonical.rows(); ++i) sent.set_row(i, canonical.row(sq.perm[i]));
        sq.sent = sent;
        sq.basis_change = permutation_inverse_matrix(sq.perm, q);
    }
    sq.canonical = std::move(canonical);
    return sq;
}

}  // namespace

QueryPlan build_query_plan(const SystemParams& params, const StorageCode& code,
                           const std::vector<std::size_t>& desired, Rng& rng) {
    params.validate();
    if (code.n != params.server_count || code.k != params.code_dim ||
        code.generator.modulus() != params.modulus)
        throw Error("invalid_params", "storage code does not match the system parameters");
    if (desired.size() != params.desired_count)
        throw Error("invalid_params", "desired set size must equal P");
    for (std::size_t d : desired)
        if (d >= params.file_count) throw Error("invalid_params", "desired file index out of range");

    QueryPlan plan;
    plan.params = params;
    plan.code = code;
    plan.desired_files = desired;
    std::sort(plan.desired_files.begin(), plan.desired_files.end());
    for (std::size_t i = 1; i < plan.desired_files.size(); ++i)
        if (plan.desired_files[i] == plan.desired_files[i - 1])
            throw Error("invalid_params", "desired file indices must be distinct");

    VAssignment va = params.cyclic() ? design_v_sets_cyclic(params.server_count, params.code_dim)
                                     : design_v_sets(params.server_count, params.code_dim);
    plan.vector_servers = std::move(va.vector_servers);
    plan.server_vectors = std::move(va.server_vectors);

    if (params.grs_storage()) {
        if (!code.grs) throw Error("invalid_params", "GRS variant requires a GRS-flavored code");
        plan.row_spread = build_row_spread_grs(*code.grs, params.collusion);
    } else {
        Rng spread_rng = rng.fork(kSpreadTag);
        Matrix g_sys = to_systematic(code.generator);
        bool found = false;
        for (std::size_t attempt = 0; attempt < 100 && !found; ++attempt) {
            plan.row_spread = build_row_spread_generic(g_sys, params.collusion, spread_rng);
            found = schedule_spanning_ok(params, code, plan.row_spread);
        }
        if (!found)
            throw Error("retries_exhausted", "no spread matrix supports the download schedule; raise q");
    }
    if (params.variant == Variant::GeneralT)
        plan.wedge_spreads = build_wedge_spreads(params, code, rng.fork(kStarTag));

    plan.families.resize(params.file_count);
    for (std::size_t m = 0; m < params.file_count; ++m) {
        QueryFamily& fam = plan.families[m];
        fam.role = std::binary_search(plan.desired_files.begin(), plan.desired_files.end(), m)
                       ? Role::Desired
                       : Role::Undesired;
        Rng fam_rng = rng.fork(kFamilyTagBase + m);
        fam.source = random_full_rank(params.stripes(), params.modulus, fam_rng);
        fam.per_server.reserve(params.server_count);
        for (std::size_t n = 0; n < params.server_count; ++n) {
            Matrix canonical;
            if (fam.role == Role::Desired) {
                canonical = fam.source.rows_subset(plan.server_vectors[n]);
            } else if (params.variant == Variant::GeneralT) {
                canonical = undesired_rows_general_t(params, plan, fam.source, n);
            } else {
                canonical = undesired_rows_t2(params, fam.source, plan.row_spread, n);
            }
            fam.per_server.push_back(finish_query(params, std::move(canonical), fam_rng));
        }
    }
    return plan;
}

std::size_t squeeze_margin(const SystemParams& params) {
    const std::size_t n = params.server_count, k = params.code_dim;
    if (params.grs_storage()) return n - k - 1;
    return n > 2 * k ? n - 2 * k : 1;
}

std::size_t undesired_dimension_bound(const SystemParams& params) {
    const std::size_t n = params.server_count, k = params.code_dim;
    const std::size_t l = params.record_length();
    if (params.variant == Variant::GeneralT) {
        std::size_t dim = 0;
        for (std::size_t tp = 1; tp <= params.collusion; ++tp) {
            std::size_t lambda;
            if (tp == 1) {
                lambda = std::min(k + params.collusion - 1, n);
            } else {
                lambda = static_cast<std::size_t>(
                    std::min(n * binomial(params.collusion - 1, static_cast<std::int64_t>(tp) - 1),
                             k * binomial(params.collusion, static_cast<std::int64_t>(tp))));
            }
            dim += lambda * params.delta(tp);
        }
        return dim;
    }
    if (params.cyclic()) return l - (k - 1) * (n - k) - squeeze_margin(params);
    return l - params.z_rows() * (n - k) - params.spread_cols() * squeeze_margin(params);
}

std::size_t CombinationStrategy::total_raw() const {
    std::size_t s = 0;
    for (std::size_t v : raw_counts) s += v;
    return s;
}

CombinationStrategy make_strategy(const SystemParams& params, const QueryPlan& plan) {
    if (plan.params.server_count != params.server_count || plan.params.variant != params.variant)
        throw Error("invalid_params", "strategy parameters do not match the plan");
    const std::size_t n = params.server_count;
    const std::size_t rows = params.rows_per_server();
    const std::uint32_t q = params.modulus;
    const std::size_t target = undesired_dimension_bound(params);
    CombinationStrategy st;
    st.raw_counts.assign(n, 0);
    st.mixers.reserve(n);

    if (params.variant == Variant::GeneralT) {
        Rng master(params.seed);
        Rng srng = master.fork(kStrategyTag);
        st.strategy_seed = srng.seed();
        const std::size_t base = target / n, rem = target % n;
        for (std::size_t i = 0; i < n; ++i) {
            st.raw_counts[i] = base + (i < rem ? 1 : 0);
            Rng mix_rng = srng.fork(i);
            st.mixers.push_back(random_full_rank(rows, q, mix_rng));
        }
        return st;
    }

    const std::size_t zeta = squeeze_margin(params);
    std::vector<std::uint32_t> nodes(rows);
    for (std::size_t i = 0; i < rows; ++i) nodes[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < params.code_dim) {
            st.raw_counts[i] = rows;
            st.mixers.push_back(Matrix::identity(rows, q));
        } else if (i < n - zeta) {
            st.raw_counts[i] = params.spread_cols();
            st.mixers.push_back(vandermonde(nodes, rows, q));
        } else {
            st.raw_counts[i] = 0;
            st.mixers.push_back(Matrix::identity(rows, q));
        }
    }
    if (st.total_raw() != target)
        throw Error("invalid_params", "download schedule does not meet the redundancy accounting");
    if (params.variant == Variant::MultiFile) {
        std::vector<std::uint32_t> dn(params.file_count);
        for (std::size_t i = 0; i < dn.size(); ++i) dn[i] = static_cast<std::uint32_t>(i);
        st.file_mixer = vandermonde(dn, params.desired_count, q);
    }
    return st;
}

std::vector<std::vector<Matrix>> store_files(const FileSet& files, const StorageCode& code) {
    std::vector<std::vector<Matrix>> chunks(code.n);
    for (std::size_t n = 0; n < code.n; ++n) {
        chunks[n].reserve(files.files.size());
        for (const Matrix& w : files.files) {
            if (w.cols() != code.k) throw Error("dimension_mismatch", "file width must equal the code dimension");
            chunks[n].push_back(w * code.column(n));
        }
    }
    return chunks;
}

std::size_t answer_symbol_count(const SystemParams& params, const CombinationStrategy& strategy,
                                std::size_t server) {
    const std::size_t rows = params.rows_per_server();
    const std::size_t i_n = strategy.raw_counts[server];
    const std::size_t sums_width = params.variant == Variant::MultiFile ? params.desired_count : 1;
    return params.file_count * i_n + sums_width * (rows - i_n);
}

std::vector<FieldElement> server_answer(const QueryPlan& plan, const CombinationStrategy& strategy,
                                        std::size_t server, const std::vector<Matrix>& chunks) {
    const SystemParams& params = plan.params;
    if (server >= params.server_count) throw Error("invalid_params", "server index out of range");
    if (chunks.size() != params.file_count)
        throw Error("dimension_mismatch", "one stored chunk per file expected");
    const std::size_t rows = params.rows_per_server();
    const std::size_t i_n = strategy.raw_counts[server];
    const std::uint32_t q = params.modulus;

    std::vector<Matrix> mixed;  // per file: C_n * (query * chunk)
    mixed.reserve(params.file_count);
    for (std::size_t m = 0; m < params.file_count; ++m)
        mixed.push_back(strategy.mixers[server] * (plan.families[m].per_server[server].sent * chunks[m]));

    std::vector<FieldElement> out;
    out.reserve(answer_symbol_count(params, strategy, server));
    for (std::size_t m = 0; m < params.file_count; ++m)
        for (std::size_t i = 0; i < i_n; ++i) out.push_back(mixed[m].at(i, 0));
    for (std::size_t i = i_n; i < rows; ++i) {
        if (params.variant == Variant::MultiFile) {
            const Matrix& d = *strategy.file_mixer;
            for (std::size_t r = 0; r < params.desired_count; ++r) {
                std::uint64_t acc = 0;
                for (std::size_t m = 0; m < params.file_count; ++m)
                    acc += detail::mod_mul(d.get(r, m), mixed[m].get(i, 0), q);
                out.push_back(FieldElement(acc % q, q));
            }
        } else {
            std::uint64_t acc = 0;
            for (std::size_t m = 0; m < params.file_count; ++m) acc += mixed[m].get(i, 0);
            out.push_back(FieldElement(acc % q, q));
        }
    }
    return out;
}

Matrix symbol_functional(const Matrix& query_row, const Matrix& generator_column) {
    const std::uint32_t q = query_row.modulus();
    const std::size_t width = query_row.cols();
    const std::size_t k = generator_column.rows();
    Matrix f(1, width * k, q);
    for (std::size_t s = 0; s < width; ++s) {
        std::uint32_t v = query_row.get(0, s);
        if (v == 0) continue;
        for (std::size_t c = 0; c < k; ++c)
            f.set(0, s * k + c, detail::mod_mul(v, generator_column.get(c, 0), q));
    }
    return f;
}

namespace {

struct UndesiredSolver {
    // downloaded functionals (rows) and their values for one undesired file
    Matrix functionals;
    std::vector<std::uint32_t> values;
};

}  // namespace

Reconstruction reconstruct(const QueryPlan& plan, const CombinationStrategy& strategy,
                           const std::vector<std::vector<FieldElement>>& answers) {
    const SystemParams& params = plan.params;
    const std::size_t n_servers = params.server_count;
    const std::size_t rows = params.rows_per_server();
    const std::size_t m_files = params.file_count;
    const std::uint32_t q = params.modulus;
    const std::size_t width = params.stripes();
    const bool multi = params.variant == Variant::MultiFile;
    Reconstruction rec;
    if (answers.size() != n_servers) {
        rec.error = "answers from all servers required";
        return rec;
    }

    // raw symbol values per (file, server, mixed index); sums kept aside
    std::vector<std::vector<std::vector<std::optional<std::uint32_t>>>> mixed_vals(
        m_files, std::vector<std::vector<std::optional<std::uint32_t>>>(n_servers));
    std::vector<std::vector<std::vector<std::uint32_t>>> sum_vals(n_servers);
    for (std::size_t n = 0; n < n_servers; ++n) {
        const std::size_t i_n = strategy.raw_counts[n];
        const std::size_t expect = answer_symbol_count(params, strategy, n);
        if (answers[n].size() != expect) {
            rec.error = "unexpected answer length from server " + std::to_string(n + 1);
            return rec;
        }
        for (std::size_t m = 0; m < m_files; ++m) mixed_vals[m][n].assign(rows, std::nullopt);
        std::size_t pos = 0;
        for (std::size_t m = 0; m < m_files; ++m)
            for (std::size_t i = 0; i < i_n; ++i) mixed_vals[m][n][i] = answers[n][pos++].value();
        const std::size_t sums_width = multi ? params.desired_count : 1;
        sum_vals[n].assign(rows - i_n, {});
        for (std::size_t i = 0; i < rows - i_n; ++i) {
            sum_vals[n][i].resize(sums_width);
            for (std::size_t r = 0; r < sums_width; ++r) sum_vals[n][i][r] = answers[n][pos++].value();
        }
    }

    // each downloaded/queried symbol is a known functional of its file:
    // row i of C_n * sent applied to W * g_n
    std::vector<Matrix> mixed_queries(n_servers * m_files);  // C_n * sent per (n, m)
    for (std::size_t n = 0; n < n_servers; ++n)
        for (std::size_t m = 0; m < m_files; ++m)
            mixed_queries[n * m_files + m] = strategy.mixers[n] * plan.families[m].per_server[n].sent;

    std::vector<std::size_t> undesired;
    for (std::size_t m = 0; m < m_files; ++m)
        if (plan.families[m].role == Role::Undesired) undesired.push_back(m);

    // Solve, per undesired file, for every not-downloaded mixed symbol as a
    // combination of the downloaded ones (one elimination per file).
    for (std::size_t f : undesired) {
        std::vector<Matrix> down_rows;
        std::vector<std::uint32_t> down_vals;
        for (std::size_t n = 0; n < n_servers; ++n) {
            Matrix gcol = plan.code.column(n);
            for (std::size_t i = 0; i < strategy.raw_counts[n]; ++i) {
                down_rows.push_back(symbol_functional(mixed_queries[n * m_files + f].row(i), gcol));
                down_vals.push_back(*mixed_vals[f][n][i]);
            }
        }
        std::vector<std::pair<std::size_t, std::size_t>> targets;  // (server, mixed index)
        for (std::size_t n = 0; n < n_servers; ++n)
            for (std::size_t i = strategy.raw_counts[n]; i < rows; ++i) targets.emplace_back(n, i);
        if (targets.empty()) continue;

        Matrix a(width * params.code_dim, down_rows.size(), q);  // downloaded functionals as columns
        for (std::size_t c = 0; c < down_rows.size(); ++c)
            for (std::size_t r = 0; r < a.rows(); ++r) a.set(r, c, down_rows[c].get(0, r));
        Matrix b(width * params.code_dim, targets.size(), q);
        for (std::size_t c = 0; c < targets.size(); ++c) {
            auto [n, i] = targets[c];
            Matrix t = symbol_functional(mixed_queries[n * m_files + f].row(i), plan.code.column(n));
            for (std::size_t r = 0; r < b.rows(); ++r) b.set(r, c, t.get(0, r));
        }
        auto coeffs = solve(a, b);
        if (!coeffs) {
            rec.error = "span_failure";
            return rec;
        }
        for (std::size_t c = 0; c < targets.size(); ++c) {
            std::uint64_t acc = 0;
            for (std::size_t r = 0; r < down_rows.size(); ++r)
                acc += detail::mod_mul(coeffs->get(r, c), down_vals[r], q);
            auto [n, i] = targets[c];
            mixed_vals[f][n][i] = static_cast<std::uint32_t>(acc % q);
        }
    }

    // strip undesired interference out of the summation symbols
    std::optional<Matrix> d_desired_inv;
    if (multi) {
        d_desired_inv = inverse(strategy.file_mixer->columns_subset(plan.desired_files));
        if (!d_desired_inv) {
            rec.error = "file mixer is not MDS on the desired columns";
            return rec;
        }
    }
    for (std::size_t n = 0; n < n_servers; ++n) {
        const std::size_t i_n = strategy.raw_counts[n];
        for (std::size_t i = i_n; i < rows; ++i) {
            if (multi) {
                const Matrix& d = *strategy.file_mixer;
                Matrix rhs(params.desired_count, 1, q);
                for (std::size_t r = 0; r < params.desired_count; ++r) {
                    std::uint64_t v = sum_vals[n][i - i_n][r];
                    for (std::size_t f : undesired) {
                        std::uint32_t sub = detail::mod_mul(d.get(r, f), *mixed_vals[f][n][i], q);
                        v += q - sub;
                    }
                    rhs.set(r, 0, v % q);
                }
                Matrix sol = *d_desired_inv * rhs;
                for (std::size_t j = 0; j < plan.desired_files.size(); ++j)
                    mixed_vals[plan.desired_files[j]][n][i] = sol.get(j, 0);
            } else {
                std::uint64_t v = sum_vals[n][i - i_n][0];
                for (std::size_t f : undesired) v += q - *mixed_vals[f][n][i];
                mixed_vals[plan.desired_files[0]][n][i] = static_cast<std::uint32_t>(v % q);
            }
        }
    }

    // undo the mixing and the per-server disguise, then the storage code
    std::vector<Matrix> mixer_inv(n_servers);
    for (std::size_t n = 0; n < n_servers; ++n) {
        auto inv = inverse(strategy.mixers[n]);
        if (!inv) {
            rec.error = "combination mixer is singular";
            return rec;
        }
        mixer_inv[n] = *inv;
    }

    for (std::size_t d : plan.desired_files) {
        // canonical per-server symbol values: basis_change * C_n^-1 * mixed
        std::vector<Matrix> canon_vals(n_servers);
        for (std::size_t n = 0; n < n_servers; ++n) {
            Matrix xv(rows, 1, q);
            for (std::size_t i = 0; i < rows; ++i) xv.set(i, 0, *mixed_vals[d][n][i]);
            canon_vals[n] = plan.families[d].per_server[n].basis_change * (mixer_inv[n] * xv);
        }
        // vector index -> position in each owning server's canonical order
        Matrix projections(width, params.code_dim, q);  // row v = V_v * W
        for (std::size_t v = 0; v < width; ++v) {
            const auto& owners = plan.vector_servers[v];
            Matrix vals(params.code_dim, 1, q);
            std::vector<std::size_t> cols;
            for (std::size_t j = 0; j < owners.size(); ++j) {
                std::size_t srv = owners[j];
                const auto& order = plan.server_vectors[srv];
                std::size_t at = static_cast<std::size_t>(
                    std::lower_bound(order.begin(), order.end(), v) - order.begin());
                vals.set(j, 0, canon_vals[srv].get(at, 0));
                cols.push_back(srv);
            }
            Matrix gsub = plan.code.generator.columns_subset(cols);  // k x k
            auto w = solve(gsub.transpose(), vals);
            if (!w) {
                rec.error = "storage code solve failed";
                return rec;
            }
            for (std::size_t c = 0; c < params.code_dim; ++c) projections.set(v, c, w->get(c, 0));
        }
        auto src_inv = inverse(plan.families[d].source);
        if (!src_inv) {
            rec.error = "source matrix is singular";
            return rec;
        }
        rec.files.push_back(*src_inv * projections);
    }
    rec.success = true;
    return rec;
}

Matrix undesired_functional_matrix(const QueryPlan& plan) {
    const SystemParams& params = plan.params;
    const std::size_t f = plan.first_undesired();
    const std::size_t rows = params.rows_per_server();
    Matrix out(params.server_count * rows, params.stripes() * params.code_dim, params.modulus);
    for (std::size_t n = 0; n < params.server_count; ++n) {
        Matrix gcol = plan.code.column(n);
        const Matrix& sent = plan.families[f].per_server[n].sent;
        for (std::size_t i = 0; i < rows; ++i)
            out.set_row(n * rows + i, symbol_functional(sent.row(i), gcol));
    }
    return out;
}

StorageCode make_storage_code(const SystemParams& params, Rng& rng) {
    if (params.grs_storage())
        return StorageCode::from_grs(GrsSpec::standard(params.server_count, params.code_dim, params.modulus));
    Rng code_rng = rng.fork(kCodeTag);
    return StorageCode::generic(params.server_count, params.code_dim, params.modulus, code_rng);
}

}  // namespace pirsq
