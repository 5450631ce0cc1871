#include "pirsq/transcript.hpp"

#include <tuple>

namespace pirsq {

bool Transcript::operator==(const Transcript& o) const {
    auto key = [](const SystemParams& p) {
        return std::tuple(p.file_count, p.server_count, p.collusion, p.code_dim, p.desired_count,
                          p.variant, p.modulus, p.seed);
    };
    return key(params) == key(o.params) && raw_counts == o.raw_counts &&
           answer_counts == o.answer_counts && download_total == o.download_total &&
           record_length == o.record_length && achieved_rate == o.achieved_rate &&
           closed_form_rate == o.closed_form_rate && success == o.success &&
           eps_runs == o.eps_runs && eps_failures == o.eps_failures;
}

nlohmann::ordered_json transcript_to_json(const Transcript& t) {
    nlohmann::ordered_json j;
    j["params"] = {{"m", t.params.file_count},      {"n", t.params.server_count},
                   {"t", t.params.collusion},       {"k", t.params.code_dim},
                   {"p", t.params.desired_count},   {"variant", variant_name(t.params.variant)},
                   {"q", t.params.modulus},         {"seed", t.params.seed}};
    nlohmann::ordered_json servers = nlohmann::ordered_json::array();
    for (std::size_t n = 0; n < t.raw_counts.size(); ++n) {
        servers.push_back({{"server", n + 1}, {"i_n", t.raw_counts[n]}, {"answer_symbols", t.answer_counts[n]}});
    }
    j["per_server"] = servers;
    j["download_total"] = t.download_total;
    j["l"] = t.record_length;
    j["achieved_rate"] = {{"num", t.achieved_rate.num()}, {"den", t.achieved_rate.den()}};
    if (t.closed_form_rate) {
        j["closed_form_rate"] = {{"num", t.closed_form_rate->num()}, {"den", t.closed_form_rate->den()}};
    } else {
        j["closed_form_rate"] = nullptr;
    }
    j["success"] = t.success;
    j["epsilon_trials"] = {{"runs", t.eps_runs}, {"failures", t.eps_failures}};
    return j;
}

Transcript transcript_from_json(const nlohmann::ordered_json& j) {
    Transcript t;
    const auto& p = j.at("params");
    t.params.file_count = p.at("m").get<std::size_t>();
    t.params.server_count = p.at("n").get<std::size_t>();
    t.params.collusion = p.at("t").get<std::size_t>();
    t.params.code_dim = p.at("k").get<std::size_t>();
    t.params.desired_count = p.at("p").get<std::size_t>();
    auto v = variant_from_name(p.at("variant").get<std::string>());
    if (!v) throw Error("bad_config", "unknown variant in transcript");
    t.params.variant = *v;
    t.params.modulus = p.at("q").get<std::uint32_t>();
    t.params.seed = p.at("seed").get<std::uint64_t>();
    for (const auto& s : j.at("per_server")) {
        t.raw_counts.push_back(s.at("i_n").get<std::size_t>());
        t.answer_counts.push_back(s.at("answer_symbols").get<std::size_t>());
    }
    t.download_total = j.at("download_total").get<std::size_t>();
    t.record_length = j.at("l").get<std::size_t>();
    t.achieved_rate = Rational(j.at("achieved_rate").at("num").get<long long>(),
                               j.at("achieved_rate").at("den").get<long long>());
    if (!j.at("closed_form_rate").is_null()) {
        t.closed_form_rate = Rational(j.at("closed_form_rate").at("num").get<long long>(),
                                      j.at("closed_form_rate").at("den").get<long long>());
    }
    t.success = j.at("success").get<bool>();
    t.eps_runs = j.at("epsilon_trials").at("runs").get<std::size_t>();
    t.eps_failures = j.at("epsilon_trials").at("failures").get<std::size_t>();
    return t;
}

}  // namespace pirsq
