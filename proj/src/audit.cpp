#include "pirsq/audit.hpp"

#include <algorithm>

#include "pirsq/combin.hpp"

namespace pirsq {

namespace {

std::vector<std::vector<std::size_t>> colluding_sets(const SystemParams& params, std::size_t t) {
    if (params.cyclic()) {
        std::vector<std::vector<std::size_t>> out;
        for (std::size_t i = 0; i < params.server_count; ++i) {
            std::vector<std::size_t> pair{i, (i + 1) % params.server_count};
            std::sort(pair.begin(), pair.end());
            out.push_back(pair);
        }
        return out;
    }
    return k_subsets(params.server_count, t);
}

std::vector<std::size_t> expected_profile(const SystemParams& params, std::size_t t) {
    std::vector<std::size_t> out;
    const std::size_t n = params.server_count, k = params.code_dim;
    for (std::uint64_t mask = 1; mask < (1ULL << t); ++mask) {
        std::size_t s = static_cast<std::size_t>(__builtin_popcountll(mask));
        if (params.cyclic()) {
            out.push_back(s == 1 ? k : k - 1);
        } else {
            out.push_back(static_cast<std::size_t>(
                binomial(n - s, static_cast<std::int64_t>(k) - static_cast<std::int64_t>(s))));
        }
    }
    if (params.cyclic()) {
        out.push_back(k + 1);
    } else {
        // joint span by inclusion-exclusion over the shared-vector counts
        long long joint = 0;
        for (std::size_t j = 1; j <= t; ++j) {
            long long term = static_cast<long long>(binomial(t, static_cast<std::int64_t>(j))) *
                             static_cast<long long>(binomial(n - j, static_cast<std::int64_t>(k) - static_cast<std::int64_t>(j)));
            joint += (j % 2 == 1) ? term : -term;
        }
        out.push_back(static_cast<std::size_t>(joint));
    }
    return out;
}

}  // namespace

PrivacyReport structural_privacy_audit(const QueryPlan& plan, std::size_t t) {
    const SystemParams& params = plan.params;
    PrivacyReport report;
    report.verdict = true;

    // per (file, server) query spaces; permutations do not move spans
    std::vector<std::vector<Subspace>> spans(params.file_count);
    for (std::size_t m = 0; m < params.file_count; ++m) {
        spans[m].reserve(params.server_count);
        for (std::size_t n = 0; n < params.server_count; ++n)
            spans[m].push_back(Subspace::from_rows(plan.families[m].per_server[n].sent));
    }

    for (const auto& servers : colluding_sets(params, t)) {
        PrivacyReport::Entry entry;
        entry.servers = servers;
        entry.expected = expected_profile(params, servers.size());
        for (std::size_t m = 0; m < params.file_count; ++m) {
            std::vector<std::size_t> profile;
            for (std::uint64_t mask = 1; mask < (1ULL << servers.size()); ++mask) {
                std::size_t first = static_cast<std::size_t>(__builtin_ctzll(mask));
                Subspace cur = spans[m][servers[first]];
                for (std::size_t b = first + 1; b < servers.size(); ++b)
                    if (mask & (1ULL << b)) cur = intersect(cur, spans[m][servers[b]]);
                profile.push_back(cur.dim());
            }
            Subspace joint = spans[m][servers[0]];
            for (std::size_t b = 1; b < servers.size(); ++b)
                joint = subspace_sum(joint, spans[m][servers[b]]);
            profile.push_back(joint.dim());
            entry.file_profiles.push_back(std::move(profile));
        }
        entry.ok = true;
        for (const auto& p : entry.file_profiles)
            if (p != entry.expected) entry.ok = false;
        if (!entry.ok) report.verdict = false;
        report.entries.push_back(std::move(entry));
    }
    return report;
}

namespace {

// queried undesired functionals of the first undesired file, expressed in
// coordinates of a basis of their own span
struct QueriedCoords {
    Matrix coords;         // (N * rows) x dim, row n*rows+r = coordinates of symbol (n, r)
    std::size_t dim = 0;   // rank of the queried span
};

QueriedCoords queried_coordinates(const QueryPlan& plan, bool canonical_order) {
    const SystemParams& params = plan.params;
    const std::size_t f = plan.first_undesired();
    const std::size_t rows = params.rows_per_server();
    const std::uint32_t q = params.modulus;
    Matrix stacked(params.server_count * rows, params.stripes() * params.code_dim, q);
    for (std::size_t n = 0; n < params.server_count; ++n) {
        Matrix gcol = plan.code.column(n);
        const ServerQuery& sq = plan.families[f].per_server[n];
        const Matrix& block = canonical_order ? sq.canonical : sq.sent;
        for (std::size_t r = 0; r < rows; ++r)
            stacked.set_row(n * rows + r, symbol_functional(block.row(r), gcol));
    }
    RrefResult rr = rref(stacked);
    QueriedCoords out;
    out.dim = rr.pivots.size();
    std::vector<std::size_t> keep(out.dim);
    for (std::size_t i = 0; i < out.dim; ++i) keep[i] = i;
    Matrix basis = rr.matrix.rows_subset(keep);
    auto coords = solve(basis.transpose(), stacked.transpose());
    if (!coords) throw Error("dimension_mismatch", "queried functionals escape their own span");
    out.coords = coords->transpose();
    return out;
}

// rank over F_q of a dense row-major value buffer, in place
std::size_t buffer_rank(std::vector<std::uint32_t>& a, std::size_t rows, std::size_t cols, std::uint32_t q) {
    std::size_t rk = 0;
    for (std::size_t c = 0; c < cols && rk < rows; ++c) {
        std::size_t sel = rk;
        while (sel < rows && a[sel * cols + c] == 0) ++sel;
        if (sel == rows) continue;
        if (sel != rk)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a[sel * cols + j], a[rk * cols + j]);
        std::uint32_t inv = detail::mod_inv(a[rk * cols + c], q);
        for (std::size_t r = rk + 1; r < rows; ++r) {
            std::uint32_t v = a[r * cols + c];
            if (v == 0) continue;
            std::uint32_t fac = detail::mod_mul(v, inv, q);
            for (std::size_t j = c; j < cols; ++j) {
                std::uint32_t sub = detail::mod_mul(fac, a[rk * cols + j], q);
                a[r * cols + j] = detail::mod_sub(a[r * cols + j], sub, q);
            }
        }
        ++rk;
    }
    return rk;
}

}  // namespace

SpanReport strategy_completeness_check(const QueryPlan& plan, const CombinationStrategy& strategy,
                                       std::uint64_t budget, Rng& rng) {
    const SystemParams& params = plan.params;
    const std::size_t rows = params.rows_per_server();
    const std::size_t n_servers = params.server_count;
    const std::uint32_t q = params.modulus;
    SpanReport report;

    if (params.variant == Variant::GeneralT) {
        // randomized schedule: every trial draws fresh mixers
        QueriedCoords qc = queried_coordinates(plan, false);
        report.mode = SpanReport::Mode::Sampled;
        const std::size_t total_raw = strategy.total_raw();
        for (std::uint64_t trial = 0; trial < budget; ++trial) {
            std::vector<std::uint32_t> buf(total_raw * qc.dim, 0);
            std::size_t out_row = 0;
            for (std::size_t n = 0; n < n_servers; ++n) {
                Matrix c = random_full_rank(rows, q, rng);
                for (std::size_t i = 0; i < strategy.raw_counts[n]; ++i, ++out_row) {
                    for (std::size_t r = 0; r < rows; ++r) {
                        std::uint32_t cf = c.get(i, r);
                        if (cf == 0) continue;
                        for (std::size_t d = 0; d < qc.dim; ++d) {
                            std::uint32_t add = detail::mod_mul(cf, qc.coords.get(n * rows + r, d), q);
                            buf[out_row * qc.dim + d] = detail::mod_add(buf[out_row * qc.dim + d], add, q);
                        }
                    }
                }
            }
            ++report.trials;
            if (buffer_rank(buf, total_raw, qc.dim, q) != qc.dim) {
                if (report.failures == 0) report.witness = "trial " + std::to_string(trial);
                ++report.failures;
            }
        }
        report.verdict = report.failures == 0;
        return report;
    }

    QueriedCoords qc = queried_coordinates(plan, true);
    const std::size_t total_raw = strategy.total_raw();

    // one downloaded coordinate row: sum over r of C_n(i, r) * coords(n, perm[r])
    auto run_tuple = [&](const std::vector<std::vector<std::size_t>>& perms) {
        std::vector<std::uint32_t> buf(total_raw * qc.dim, 0);
        std::size_t out_row = 0;
        for (std::size_t n = 0; n < n_servers; ++n) {
            const Matrix& c = strategy.mixers[n];
            for (std::size_t i = 0; i < strategy.raw_counts[n]; ++i, ++out_row) {
                for (std::size_t r = 0; r < rows; ++r) {
                    std::uint32_t cf = c.get(i, r);
                    if (cf == 0) continue;
                    std::size_t src = n * rows + perms[n][r];
                    for (std::size_t d = 0; d < qc.dim; ++d) {
                        std::uint32_t add = detail::mod_mul(cf, qc.coords.get(src, d), q);
                        buf[out_row * qc.dim + d] = detail::mod_add(buf[out_row * qc.dim + d], add, q);
                    }
                }
            }
        }
        return buffer_rank(buf, total_raw, qc.dim, q) == qc.dim;
    };

    auto describe = [&](const std::vector<std::vector<std::size_t>>& perms) {
        std::string s;
        for (std::size_t n = 0; n < perms.size(); ++n) {
            s += n == 0 ? "(" : ", (";
            for (std::size_t r = 0; r < perms[n].size(); ++r)
                s += (r ? " " : "") + std::to_string(perms[n][r]);
            s += ")";
        }
        return s;
    };

    // tuple space size (R!)^N, saturating
    unsigned __int128 fact = 1;
    for (std::size_t i = 2; i <= rows; ++i) fact *= i;
    unsigned __int128 total = 1;
    bool overflow = false;
    for (std::size_t n = 0; n < n_servers && !overflow; ++n) {
        total *= fact;
        if (total > (static_cast<unsigned __int128>(1) << 100)) overflow = true;
    }
    const std::uint64_t exhaustive_cap = std::min<std::uint64_t>(budget, 1000000);

    if (!overflow && total <= exhaustive_cap) {
        report.mode = SpanReport::Mode::Exhaustive;
        std::vector<std::vector<std::size_t>> all_perms;
        std::vector<std::size_t> ident(rows);
        for (std::size_t i = 0; i < rows; ++i) ident[i] = i;
        all_perms.push_back(ident);
        std::vector<std::size_t> cur = ident;
        while (std::next_permutation(cur.begin(), cur.end())) all_perms.push_back(cur);

        std::vector<std::size_t> odo(n_servers, 0);
        std::vector<std::vector<std::size_t>> perms(n_servers, ident);
        while (true) {
            for (std::size_t n = 0; n < n_servers; ++n) perms[n] = all_perms[odo[n]];
            ++report.trials;
            if (!run_tuple(perms)) {
                if (report.failures == 0) report.witness = describe(perms);
                ++report.failures;
            }
            std::size_t pos = 0;
            while (pos < n_servers && ++odo[pos] == all_perms.size()) odo[pos++] = 0;
            if (pos == n_servers) break;
        }
    } else {
        report.mode = SpanReport::Mode::Sampled;
        std::vector<std::vector<std::size_t>> perms(n_servers);
        for (std::uint64_t trial = 0; trial < budget; ++trial) {
            for (std::size_t n = 0; n < n_servers; ++n) perms[n] = rng.permutation(rows);
            ++report.trials;
            if (!run_tuple(perms)) {
                if (report.failures == 0) report.witness = describe(perms);
                ++report.failures;
            }
        }
    }
    report.verdict = report.failures == 0;
    return report;
}

RedundancyReport redundancy_audit(const QueryPlan& plan, std::size_t expected) {
    RedundancyReport r;
    r.expected = expected;
    r.rank = rank(undesired_functional_matrix(plan));
    r.ok = r.rank <= expected;
    if (plan.params.grs_storage() && r.rank != expected) r.ok = false;
    return r;
}

void inject_query_fault(QueryPlan& plan, Rng& rng) {
    const SystemParams& params = plan.params;
    QueryFamily& fam = plan.families[plan.first_undesired()];
    ServerQuery& sq = fam.per_server[0];
    const std::size_t row_idx = params.z_rows();  // first structured spread row
    // Rows whose functional stays inside the original queried-undesired span
    // describe an equivalent plan, not a corruption (over tiny fields a
    // uniform row lands there often). Resample until the structure changes.
    Subspace original_span = Subspace::from_rows(undesired_functional_matrix(plan));
    Matrix gcol = plan.code.column(0);
    Matrix fresh = random_matrix(1, params.stripes(), params.modulus, rng);
    while (original_span.contains(symbol_functional(fresh, gcol)))
        fresh = random_matrix(1, params.stripes(), params.modulus, rng);
    sq.canonical.set_row(row_idx, fresh);
    if (params.variant == Variant::GeneralT) {
        RrefResult rr = rref(sq.canonical);
        sq.sent = rr.matrix;
        auto change = solve(sq.sent.transpose(), sq.canonical.transpose());
        if (!change) throw Error("invalid_params", "fault injection broke the query basis");
        sq.basis_change = change->transpose();
    } else {
        for (std::size_t i = 0; i < sq.perm.size(); ++i)
            if (sq.perm[i] == row_idx) sq.sent.set_row(i, fresh);
    }
}

}  // namespace pirsq
