#ifndef PIRSQ_TRANSCRIPT_HPP
#define PIRSQ_TRANSCRIPT_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "pirsq/rates.hpp"
#include "pirsq/scheme.hpp"

namespace pirsq {

/// One end-to-end retrieval record: the unit of acceptance testing and of
/// the CLI's JSON output. Field names and layout are part of the interface.
struct Transcript {
    SystemParams params;
    std::vector<std::size_t> raw_counts;     // I_n
    std::vector<std::size_t> answer_counts;  // downloaded symbols per server
    std::size_t download_total = 0;
    std::size_t record_length = 0;
    Rational achieved_rate;
    std::optional<Rational> closed_form_rate;
    bool success = false;
    std::size_t eps_runs = 0;      // randomized-schedule trials (0 for deterministic)
    std::size_t eps_failures = 0;

    bool operator==(const Transcript& o) const;
};

nlohmann::ordered_json transcript_to_json(const Transcript& t);
Transcript transcript_from_json(const nlohmann::ordered_json& j);

}  // namespace pirsq

#endif
