#include "pirsq/driver.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

namespace pirsq {

namespace {

constexpr std::uint64_t kPlanTag = 3;
constexpr std::uint64_t kThetaTag = 7;
constexpr std::uint64_t kFilesTag = 13;
constexpr std::uint64_t kFaultTag = 29;
constexpr std::uint64_t kSpanTag = 31;
constexpr std::uint64_t kTrialTagBase = 1000;

std::vector<std::size_t> draw_desired(const SystemParams& params, Rng rng) {
    std::vector<std::size_t> order = rng.permutation(params.file_count);
    std::vector<std::size_t> desired(order.begin(), order.begin() + params.desired_count);
    std::sort(desired.begin(), desired.end());
    return desired;
}

struct Setup {
    StorageCode code;
    std::vector<std::size_t> desired;
    QueryPlan plan;
};

Setup build_setup(const SystemParams& params) {
    Rng master(params.seed);
    Setup s{make_storage_code(params, master), {}, {}};
    s.desired = draw_desired(params, master.fork(kThetaTag));
    Rng plan_rng = master.fork(kPlanTag);
    s.plan = build_query_plan(params, s.code, s.desired, plan_rng);
    return s;
}

struct TrialResult {
    bool success = false;
    Transcript transcript;
};

TrialResult simulate_once(const SystemParams& params) {
    Setup setup = build_setup(params);
    CombinationStrategy strategy = make_strategy(params, setup.plan);
    Rng master(params.seed);
    Rng files_rng = master.fork(kFilesTag);
    FileSet files = random_files(params, files_rng);
    auto chunks = store_files(files, setup.code);

    TrialResult res;
    Transcript& t = res.transcript;
    t.params = params;
    t.raw_counts = strategy.raw_counts;
    t.record_length = params.record_length();
    std::vector<std::vector<FieldElement>> answers;
    answers.reserve(params.server_count);
    for (std::size_t n = 0; n < params.server_count; ++n) {
        answers.push_back(server_answer(setup.plan, strategy, n, chunks[n]));
        t.answer_counts.push_back(answers.back().size());
        t.download_total += answers.back().size();
    }
    Reconstruction rec = reconstruct(setup.plan, strategy, answers);
    res.success = rec.success;
    if (rec.success) {
        for (std::size_t i = 0; i < setup.desired.size(); ++i)
            if (rec.files[i] != files.files[setup.desired[i]]) res.success = false;
    }
    t.success = res.success;
    t.achieved_rate = Rational(static_cast<long long>(params.desired_count * t.record_length),
                               static_cast<long long>(t.download_total));
    switch (params.variant) {
        case Variant::GeneralT2:
            t.closed_form_rate = rate_multi(params.file_count, params.server_count, params.code_dim, 1,
                                            RateFlavor::Generic);
            break;
        case Variant::GrsT2:
            t.closed_form_rate =
                rate_multi(params.file_count, params.server_count, params.code_dim, 1, RateFlavor::Grs);
            break;
        case Variant::MultiFile:
            t.closed_form_rate = rate_multi(params.file_count, params.server_count, params.code_dim,
                                            params.desired_count, RateFlavor::Grs);
            break;
        case Variant::CyclicAdjacent:
            t.closed_form_rate = rate_cyclic(params.server_count, params.code_dim, RateFlavor::Generic);
            break;
        case Variant::GeneralT:
            t.closed_form_rate = rate_general_t(params.server_count, params.collusion, params.code_dim);
            break;
    }
    return res;
}

std::uint64_t field_lower_bound(const SystemParams& params) {
    if (params.variant == Variant::GeneralT)
        return std::max<std::uint64_t>(65536, params.server_count);
    std::uint64_t b = std::max<std::uint64_t>(2, params.rows_per_server());
    if (params.grs_storage()) b = std::max<std::uint64_t>(b, params.server_count);
    if (params.variant == Variant::MultiFile) b = std::max<std::uint64_t>(b, params.file_count);
    return b;
}

nlohmann::ordered_json rational_json(const std::optional<Rational>& r) {
    if (!r) return nullptr;
    return {{"num", r->num()}, {"den", r->den()}};
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
    out << text;
    if (!config.output.empty()) {
        std::ofstream f(config.output, std::ios::binary);
        if (!f) throw Error("bad_config", "cannot open output file " + config.output);
        f << text;
    }
}

}  // namespace

SystemParams params_from_config(const RunConfig& config) {
    SystemParams params;
    params.file_count = config.m;
    params.server_count = config.n;
    params.collusion = config.t;
    params.code_dim = config.k;
    params.desired_count = config.p;
    params.seed = config.seed;
    auto v = variant_from_name(config.variant);
    if (!v) throw Error("bad_config", "unknown variant: " + config.variant);
    params.variant = *v;

    if (config.q != 0) {
        params.modulus = config.q;
        params.validate();
        build_setup(params);  // surfaces field_too_small / retries_exhausted now
        return params;
    }
    // structural errors first, with a modulus every bound accepts
    params.modulus = 2147483647;
    params.validate();

    std::uint64_t bound = field_lower_bound(params);
    for (int attempt = 0; attempt < 64; ++attempt) {
        params.modulus = smallest_prime_geq(bound);
        try {
            params.validate();
            build_setup(params);
            return params;
        } catch (const Error& e) {
            if (e.code() == "field_too_small" || e.code() == "retries_exhausted") {
                bound = static_cast<std::uint64_t>(params.modulus) + 1;
                continue;
            }
            throw;
        }
    }
    throw Error("field_too_small", "no workable prime field found for these parameters");
}

Transcript run_simulation(const SystemParams& params, std::size_t trials) {
    TrialResult first = simulate_once(params);
    Transcript t = first.transcript;
    if (params.variant != Variant::GeneralT) return t;

    if (trials == 0) trials = 1;
    t.eps_runs = trials;
    t.eps_failures = first.success ? 0 : 1;
    Rng master(params.seed);
    for (std::size_t i = 1; i < trials; ++i) {
        SystemParams trial_params = params;
        trial_params.seed = master.fork(kTrialTagBase + i).seed();
        if (!simulate_once(trial_params).success) ++t.eps_failures;
    }
    t.success = t.eps_failures == 0;
    return t;
}

AuditOutcome run_audits(const SystemParams& params, std::uint64_t budget, bool inject_fault) {
    Setup setup = build_setup(params);
    Rng master(params.seed);
    if (inject_fault) {
        Rng fault_rng = master.fork(kFaultTag);
        inject_query_fault(setup.plan, fault_rng);
    }
    CombinationStrategy strategy = make_strategy(params, setup.plan);
    AuditOutcome a;
    a.privacy = structural_privacy_audit(setup.plan, params.collusion);
    Rng span_rng = master.fork(kSpanTag);
    a.span = strategy_completeness_check(setup.plan, strategy, budget, span_rng);
    a.redundancy = redundancy_audit(setup.plan, undesired_dimension_bound(params));
    a.verdict = a.privacy.verdict && a.span.verdict && a.redundancy.ok;
    return a;
}

nlohmann::ordered_json audit_to_json(const SystemParams& params, const AuditOutcome& a) {
    nlohmann::ordered_json j;
    j["params"] = {{"m", params.file_count}, {"n", params.server_count}, {"t", params.collusion},
                   {"k", params.code_dim},   {"p", params.desired_count},
                   {"variant", variant_name(params.variant)}, {"q", params.modulus}, {"seed", params.seed}};
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& e : a.privacy.entries) {
        nlohmann::ordered_json servers = nlohmann::ordered_json::array();
        for (std::size_t s : e.servers) servers.push_back(s + 1);
        entries.push_back({{"servers", servers},
                           {"per_file_dims", e.file_profiles},
                           {"expected", e.expected},
                           {"ok", e.ok}});
    }
    j["privacy"] = {{"verdict", a.privacy.verdict}, {"subsets", entries}};
    j["span"] = {{"mode", a.span.mode == SpanReport::Mode::Exhaustive ? "exhaustive" : "sampled"},
                 {"trials", a.span.trials},
                 {"failures", a.span.failures},
                 {"verdict", a.span.verdict},
                 {"witness", a.span.failures == 0 ? nlohmann::ordered_json(nullptr)
                                                  : nlohmann::ordered_json(a.span.witness)}};
    j["redundancy"] = {{"rank", a.redundancy.rank}, {"expected", a.redundancy.expected}, {"verdict", a.redundancy.ok}};
    j["verdict"] = a.verdict;
    return j;
}

nlohmann::ordered_json rates_row_json(const RunConfig& config) {
    nlohmann::ordered_json j;
    j["m"] = config.m;
    j["n"] = config.n;
    j["t"] = config.t;
    j["k"] = config.k;
    j["p"] = config.p;
    nlohmann::ordered_json rates;
    rates["conjectured"] = rational_json(conjectured_capacity(config.m, config.n, config.t, config.k));
    rates["generic_t2"] = rational_json(config.t == 2 ? rate_generic_t2(config.n, config.k) : std::nullopt);
    rates["grs_t2"] = rational_json(config.t == 2 ? rate_grs_t2(config.n, config.k) : std::nullopt);
    rates["multi_generic"] =
        rational_json(config.t == 2 ? rate_multi(config.m, config.n, config.k, config.p, RateFlavor::Generic)
                                    : std::nullopt);
    rates["multi_grs"] =
        rational_json(config.t == 2 ? rate_multi(config.m, config.n, config.k, config.p, RateFlavor::Grs)
                                    : std::nullopt);
    rates["cyclic_generic"] = rational_json(rate_cyclic(config.n, config.k, RateFlavor::Generic));
    rates["cyclic_grs"] = rational_json(rate_cyclic(config.n, config.k, RateFlavor::Grs));
    rates["general_t"] = rational_json(rate_general_t(config.n, config.t, config.k));
    j["rates"] = rates;
    nlohmann::ordered_json refs = nlohmann::ordered_json::array();
    for (const auto& ref : capacity_refs(config.n, config.t, config.k))
        refs.push_back({{"label", ref.label}, {"num", ref.value.num()}, {"den", ref.value.den()}});
    j["capacity_refs"] = refs;
    return j;
}

namespace {

std::string rational_str(const std::optional<Rational>& r) { return r ? r->str() : "-"; }

std::string transcript_table(const Transcript& t) {
    std::ostringstream os;
    const SystemParams& p = t.params;
    os << "variant=" << variant_name(p.variant) << " m=" << p.file_count << " n=" << p.server_count
       << " t=" << p.collusion << " k=" << p.code_dim << " p=" << p.desired_count << " q=" << p.modulus
       << " seed=" << p.seed << "\n";
    os << "l=" << t.record_length << " download=" << t.download_total << " rate=" << t.achieved_rate.str()
       << " closed_form=" << rational_str(t.closed_form_rate) << " success=" << (t.success ? "yes" : "no");
    if (t.eps_runs > 0) os << " trials=" << t.eps_runs << " failures=" << t.eps_failures;
    os << "\n";
    os << "i_n =";
    for (std::size_t v : t.raw_counts) os << " " << v;
    os << "\n";
    return os.str();
}

std::string audit_table(const SystemParams& params, const AuditOutcome& a) {
    std::ostringstream os;
    os << "privacy: " << (a.privacy.verdict ? "pass" : "FAIL") << " over " << a.privacy.entries.size()
       << " colluding sets\n";
    os << "span: " << (a.span.mode == SpanReport::Mode::Exhaustive ? "exhaustive" : "sampled") << " trials="
       << a.span.trials << " failures=" << a.span.failures << " -> " << (a.span.verdict ? "pass" : "FAIL");
    if (a.span.failures > 0) os << " witness=" << a.span.witness;
    os << "\n";
    os << "redundancy: rank=" << a.redundancy.rank << " expected<=" << a.redundancy.expected
       << (params.grs_storage() ? " (equality required)" : "") << " -> "
       << (a.redundancy.ok ? "pass" : "FAIL") << "\n";
    os << "verdict: " << (a.verdict ? "pass" : "FAIL") << "\n";
    return os.str();
}

std::string rates_table(const nlohmann::ordered_json& j) {
    std::ostringstream os;
    os << "(m,n,t,k,p) = (" << j["m"] << "," << j["n"] << "," << j["t"] << "," << j["k"] << "," << j["p"]
       << ")\n";
    auto one = [&](const char* name) {
        const auto& v = j["rates"][name];
        os << "  " << name << ": ";
        if (v.is_null())
            os << "-";
        else
            os << v["num"] << "/" << v["den"];
        os << "\n";
    };
    one("conjectured");
    one("generic_t2");
    one("grs_t2");
    one("multi_generic");
    one("multi_grs");
    one("cyclic_generic");
    one("cyclic_grs");
    one("general_t");
    for (const auto& ref : j["capacity_refs"])
        os << "  ref " << ref["label"].get<std::string>() << ": " << ref["num"] << "/" << ref["den"] << "\n";
    return os.str();
}

}  // namespace

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    (void)err;
    SystemParams params = params_from_config(config);
    Transcript t = run_simulation(params, config.trials);
    if (config.format == "table") {
        emit(config, transcript_table(t), out);
    } else {
        emit(config, transcript_to_json(t).dump(2) + "\n", out);
    }
    bool rate_ok = t.closed_form_rate && t.achieved_rate == *t.closed_form_rate;
    return (t.success && rate_ok) ? 0 : 1;
}

int cmd_audit(const RunConfig& config, std::ostream& out, std::ostream& err) {
    (void)err;
    SystemParams params = params_from_config(config);
    AuditOutcome a = run_audits(params, config.budget, config.inject_fault);
    if (config.format == "table") {
        emit(config, audit_table(params, a), out);
    } else {
        emit(config, audit_to_json(params, a).dump(2) + "\n", out);
    }
    return a.verdict ? 0 : 1;
}

int cmd_rates(const RunConfig& config, std::ostream& out, std::ostream& err) {
    (void)err;
    nlohmann::ordered_json j = rates_row_json(config);
    if (config.format == "table") {
        emit(config, rates_table(j), out);
    } else {
        emit(config, j.dump(2) + "\n", out);
    }
    return 0;
}

int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.subcommand == "run") return cmd_run(config, out, err);
        if (config.subcommand == "audit") return cmd_audit(config, out, err);
        if (config.subcommand == "rates") return cmd_rates(config, out, err);
        throw Error("bad_config", "unknown subcommand: " + config.subcommand);
    } catch (const Error& e) {
        nlohmann::ordered_json j;
        j["error"] = {{"code", e.code()}, {"message", e.what()}};
        out << j.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        nlohmann::ordered_json j;
        j["error"] = {{"code", "internal"}, {"message", e.what()}};
        out << j.dump(2) << "\n";
        return 1;
    }
}

}  // namespace pirsq
