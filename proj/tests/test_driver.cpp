#include <doctest.h>

#include <sstream>

#include "pirsq/driver.hpp"

using namespace pirsq;

namespace {

RunConfig base_config(const std::string& sub, std::size_t m, std::size_t n, std::size_t t, std::size_t k,
                      std::uint64_t seed = 1) {
    RunConfig c;
    c.subcommand = sub;
    c.m = m;
    c.n = n;
    c.t = t;
    c.k = k;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("automatic field selection lands on the worked fields") {
    RunConfig c = base_config("run", 2, 4, 2, 2);
    CHECK(params_from_config(c).modulus == 3);

    c = base_config("run", 2, 5, 2, 3);
    CHECK(params_from_config(c).modulus == 7);

    c = base_config("run", 2, 5, 2, 2);
    c.variant = "grs";
    CHECK(params_from_config(c).modulus == 5);

    c = base_config("run", 2, 5, 2, 3);
    c.variant = "cyclic";
    CHECK(params_from_config(c).modulus == 5);  // no (5,3) MDS code exists over F_3

    c = base_config("run", 3, 5, 2, 2);
    c.variant = "multifile";
    c.p = 2;
    CHECK(params_from_config(c).modulus == 5);

    c = base_config("run", 2, 6, 3, 3);
    c.variant = "generalT";
    CHECK(params_from_config(c).modulus == 65537);
}

TEST_CASE("run simulations reach the closed-form rates") {
    auto rate_of = [](RunConfig c) {
        SystemParams params = params_from_config(c);
        Transcript t = run_simulation(params, 4);
        REQUIRE(t.success);
        REQUIRE(t.closed_form_rate.has_value());
        CHECK(t.achieved_rate == *t.closed_form_rate);
        return t.achieved_rate;
    };
    CHECK(rate_of(base_config("run", 2, 5, 2, 3)) == Rational(10, 17));
    RunConfig grs = base_config("run", 2, 5, 2, 2);
    grs.variant = "grs";
    CHECK(rate_of(grs) == Rational(20, 31));
    RunConfig cyc = base_config("run", 2, 5, 2, 3);
    cyc.variant = "cyclic";
    CHECK(rate_of(cyc) == Rational(3, 5));
    RunConfig multi = base_config("run", 3, 5, 2, 2);
    multi.variant = "multifile";
    multi.p = 2;
    CHECK(rate_of(multi) == Rational(40, 51));
}

TEST_CASE("identical configs produce byte-identical json") {
    RunConfig c = base_config("run", 2, 4, 2, 2, 9);
    std::ostringstream a, b, e;
    CHECK(cmd_run(c, a, e) == 0);
    CHECK(cmd_run(c, b, e) == 0);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("\"achieved_rate\"") != std::string::npos);

    RunConfig c2 = c;
    c2.seed = 10;
    std::ostringstream d;
    CHECK(cmd_run(c2, d, e) == 0);
    CHECK(a.str() != d.str());
}

TEST_CASE("transcripts round-trip through json") {
    RunConfig c = base_config("run", 2, 5, 2, 3, 4);
    SystemParams params = params_from_config(c);
    Transcript t = run_simulation(params, 1);
    Transcript back = transcript_from_json(transcript_to_json(t));
    CHECK(t == back);

    RunConfig ct = base_config("run", 2, 6, 3, 3, 4);
    ct.variant = "generalT";
    SystemParams pt = params_from_config(ct);
    Transcript tt = run_simulation(pt, 5);
    CHECK(tt.eps_runs == 5);
    Transcript back2 = transcript_from_json(transcript_to_json(tt));
    CHECK(tt == back2);
}

TEST_CASE("transcript json carries the pinned field names") {
    RunConfig c = base_config("run", 2, 4, 2, 2, 3);
    SystemParams params = params_from_config(c);
    auto j = transcript_to_json(run_simulation(params, 1));
    CHECK(j.contains("params"));
    CHECK(j["params"].contains("m"));
    CHECK(j["params"].contains("variant"));
    CHECK(j.contains("per_server"));
    CHECK(j["per_server"][0].contains("server"));
    CHECK(j["per_server"][0].contains("i_n"));
    CHECK(j["per_server"][0].contains("answer_symbols"));
    CHECK(j.contains("download_total"));
    CHECK(j.contains("l"));
    CHECK(j["achieved_rate"].contains("num"));
    CHECK(j["achieved_rate"].contains("den"));
    CHECK(j.contains("closed_form_rate"));
    CHECK(j.contains("success"));
    CHECK(j["epsilon_trials"].contains("runs"));
    CHECK(j["epsilon_trials"].contains("failures"));
}

TEST_CASE("bad configurations yield machine-readable errors") {
    RunConfig c = base_config("run", 1, 4, 2, 2);  // single file
    std::ostringstream out, err;
    int code = dispatch(c, out, err);
    CHECK(code == 1);
    CHECK(out.str().find("\"error\"") != std::string::npos);
    CHECK(out.str().find("invalid_params") != std::string::npos);

    RunConfig unknown = base_config("frobnicate", 2, 4, 2, 2);
    std::ostringstream out2;
    CHECK(dispatch(unknown, out2, err) == 1);
    CHECK(out2.str().find("bad_config") != std::string::npos);
}

TEST_CASE("audit command output") {
    RunConfig c = base_config("audit", 2, 4, 2, 2);
    c.budget = 2000;
    std::ostringstream out, err;
    CHECK(cmd_audit(c, out, err) == 0);
    CHECK(out.str().find("\"span\"") != std::string::npos);
    CHECK(out.str().find("\"exhaustive\"") != std::string::npos);

    std::ostringstream again;
    CHECK(cmd_audit(c, again, err) == 0);
    CHECK(out.str() == again.str());  // audits are as reproducible as runs

    RunConfig faulty = c;
    faulty.inject_fault = true;
    std::ostringstream out2;
    CHECK(cmd_audit(faulty, out2, err) == 1);
}

TEST_CASE("rates command emits the reference rows") {
    RunConfig c = base_config("rates", 2, 4, 2, 2);
    auto j = rates_row_json(c);
    CHECK(j["rates"]["conjectured"]["num"] == 4);
    CHECK(j["rates"]["conjectured"]["den"] == 7);
    CHECK(j["rates"]["generic_t2"]["num"] == 3);
    CHECK(j["rates"]["generic_t2"]["den"] == 5);

    RunConfig c2 = base_config("rates", 2, 5, 2, 2);
    auto j2 = rates_row_json(c2);
    CHECK(j2["rates"]["conjectured"]["num"] == 5);
    CHECK(j2["rates"]["grs_t2"]["num"] == 20);
    CHECK(j2["rates"]["grs_t2"]["den"] == 31);

    RunConfig c3 = base_config("rates", 2, 6, 3, 3);
    auto j3 = rates_row_json(c3);
    CHECK(j3["rates"]["conjectured"]["num"] == 6);
    CHECK(j3["rates"]["conjectured"]["den"] == 11);
    CHECK(j3["rates"]["general_t"]["num"] == 4);
    CHECK(j3["rates"]["general_t"]["den"] == 7);
    CHECK(j3["rates"]["generic_t2"].is_null());

    std::ostringstream out, err;
    CHECK(cmd_rates(c3, out, err) == 0);
    CHECK(out.str().find("capacity_refs") != std::string::npos);
}

TEST_CASE("table format renders") {
    RunConfig c = base_config("run", 2, 4, 2, 2);
    c.format = "table";
    std::ostringstream out, err;
    CHECK(cmd_run(c, out, err) == 0);
    CHECK(out.str().find("rate=3/5") != std::string::npos);
}
