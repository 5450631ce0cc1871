#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pirsq/driver.hpp"

namespace {

void add_common(CLI::App* sub, pirsq::RunConfig& config) {
    sub->add_option("--m", config.m, "number of files M");
    sub->add_option("--n", config.n, "number of servers N")->required();
    sub->add_option("--t", config.t, "collusion threshold T");
    sub->add_option("--k", config.k, "storage code dimension K")->required();
    sub->add_option("--p", config.p, "number of desired files P (multifile)");
    sub->add_option("--variant", config.variant, "general|grs|multifile|cyclic|generalT");
    sub->add_option("--q", config.q, "field size (prime); 0 selects automatically");
    sub->add_option("--seed", config.seed, "randomness seed");
    sub->add_option("--trials", config.trials, "independent trials for randomized schedules");
    sub->add_option("--budget", config.budget, "span-check budget (exhaustive cutoff / sample count)");
    sub->add_option("--output", config.output, "also write the result to this file");
    sub->add_option("--format", config.format, "json|table")->check(CLI::IsMember({"json", "table"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact-arithmetic simulator and auditor for coded private information retrieval"};
    app.require_subcommand(1);
    app.allow_extras(false);

    pirsq::RunConfig config;

    CLI::App* run = app.add_subcommand("run", "simulate one retrieval end to end");
    add_common(run, config);
    CLI::App* audit = app.add_subcommand("audit", "run privacy, span and redundancy audits");
    add_common(audit, config);
    audit->add_flag("--inject-fault", config.inject_fault, "corrupt one query row before auditing");
    CLI::App* rates = app.add_subcommand("rates", "closed-form rates and capacity references");
    add_common(rates, config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    CLI::App* active = run->parsed() ? run : audit->parsed() ? audit : rates;
    if (run->parsed()) config.subcommand = "run";
    if (audit->parsed()) config.subcommand = "audit";
    if (rates->parsed()) config.subcommand = "rates";
    if (active->count("--seed") == 0) {
        if (const char* env = std::getenv("PIR_SQUEEZE_SEED")) config.seed = std::strtoull(env, nullptr, 10);
    }

    return pirsq::dispatch(config, std::cout, std::cerr);
}
