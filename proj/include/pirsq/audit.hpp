#ifndef PIRSQ_AUDIT_HPP
#define PIRSQ_AUDIT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pirsq/scheme.hpp"

namespace pirsq {

/// Structural privacy audit result. For every colluding set the lattice of
/// intersection dimensions of the per-file query spaces is computed (all
/// nonempty sub-collections in bitmask order, joint span appended); the
/// verdict requires identical profiles across all files and agreement with
/// the combinatorial targets realized by the desired-side design.
struct PrivacyReport {
    struct Entry {
        std::vector<std::size_t> servers;                      // 0-based colluding set
        std::vector<std::vector<std::size_t>> file_profiles;   // per file
        std::vector<std::size_t> expected;
        bool ok = false;
    };
    std::vector<Entry> entries;
    bool verdict = false;
};

PrivacyReport structural_privacy_audit(const QueryPlan& plan, std::size_t t);

/// Spanning audit of the combination strategy: the downloaded undesired
/// symbols must generate every queried undesired symbol. For deterministic
/// schedules the check runs over permutation tuples (exhaustive when the
/// count fits the budget, seeded sampling otherwise); for randomized t >= 3
/// schedules each trial draws fresh mixers.
struct SpanReport {
    enum class Mode { Exhaustive, Sampled };
    Mode mode = Mode::Sampled;
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
    bool verdict = false;
    std::string witness;  // first failing tuple, if any
};

SpanReport strategy_completeness_check(const QueryPlan& plan, const CombinationStrategy& strategy,
                                       std::uint64_t budget, Rng& rng);

struct RedundancyReport {
    std::size_t rank = 0;
    std::size_t expected = 0;
    bool ok = false;
};

/// rank(undesired functional matrix) <= expected, with equality required for
/// GRS storage.
RedundancyReport redundancy_audit(const QueryPlan& plan, std::size_t expected);

/// Soundness fixture: replace one structured undesired query row with a
/// fresh random row, keeping the plan internally consistent.
void inject_query_fault(QueryPlan& plan, Rng& rng);

}  // namespace pirsq

#endif
