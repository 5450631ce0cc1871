#ifndef PIRSQ_DRIVER_HPP
#define PIRSQ_DRIVER_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "pirsq/audit.hpp"
#include "pirsq/transcript.hpp"

namespace pirsq {

/// Parsed command-line configuration shared by all subcommands.
struct RunConfig {
    std::string subcommand;  // run | audit | rates
    std::size_t m = 2, n = 0, t = 2, k = 0, p = 1;
    std::string variant = "general";
    std::uint32_t q = 0;  // 0 = choose the smallest workable prime
    std::uint64_t seed = 0;
    std::size_t trials = 200;
    std::uint64_t budget = 10000;
    std::string output;
    std::string format = "json";
    bool inject_fault = false;
};

/// Resolve the config into validated parameters; q = 0 walks primes upward
/// from the variant's field-size bound until every construction succeeds.
SystemParams params_from_config(const RunConfig& config);

/// Full simulation: storage, plan, strategy, answers, reconstruction and
/// verification. For t >= 3 runs `trials` independent plans and aggregates
/// the empirical failure count.
Transcript run_simulation(const SystemParams& params, std::size_t trials);

struct AuditOutcome {
    PrivacyReport privacy;
    SpanReport span;
    RedundancyReport redundancy;
    bool verdict = false;
};

AuditOutcome run_audits(const SystemParams& params, std::uint64_t budget, bool inject_fault);

nlohmann::ordered_json audit_to_json(const SystemParams& params, const AuditOutcome& a);
nlohmann::ordered_json rates_row_json(const RunConfig& config);

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_audit(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_rates(const RunConfig& config, std::ostream& out, std::ostream& err);
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace pirsq

#endif
