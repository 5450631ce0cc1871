// Acceptance suite: one pass/fail line per criterion, exit code equals the
// number of failures. Every comparison is exact; there are no tolerances.

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "pirsq/audit.hpp"
#include "pirsq/combin.hpp"
#include "pirsq/driver.hpp"

using namespace pirsq;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& label, const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", number, label.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

RunConfig config(const char* variant, std::size_t m, std::size_t n, std::size_t t, std::size_t k,
                 std::size_t p = 1, std::uint64_t seed = 1) {
    RunConfig c;
    c.subcommand = "run";
    c.variant = variant;
    c.m = m;
    c.n = n;
    c.t = t;
    c.k = k;
    c.p = p;
    c.seed = seed;
    return c;
}

bool column_mds_oracle(const Matrix& g, std::size_t k) {
    for (const auto& cols : k_subsets(g.cols(), k))
        if (rank(g.columns_subset(cols)) != k) return false;
    return true;
}

}  // namespace

int main() {
    criterion(1, "(2,4,2,2) generic over F_3: rate 3/5, exhaustive span 1296/0", [](std::string& d) {
        SystemParams params = params_from_config(config("general", 2, 4, 2, 2));
        if (params.modulus != 3) {
            d = "expected F_3, got q=" + std::to_string(params.modulus);
            return false;
        }
        Transcript t = run_simulation(params, 1);
        AuditOutcome a = run_audits(params, 2000, false);
        d = "q=3 rate=" + t.achieved_rate.str() + " span=" + std::to_string(a.span.trials) + "/" +
            std::to_string(a.span.failures);
        return t.success && t.achieved_rate == Rational(3, 5) &&
               a.span.mode == SpanReport::Mode::Exhaustive && a.span.trials == 1296 &&
               a.span.failures == 0;
    });

    criterion(2, "(2,5,2,3) generic over F_7: rate 10/17, rank 21, pair dims (3, 9)", [](std::string& d) {
        SystemParams params = params_from_config(config("general", 2, 5, 2, 3));
        if (params.modulus != 7) {
            d = "expected F_7";
            return false;
        }
        Rng master(params.seed);
        StorageCode code = make_storage_code(params, master);
        Matrix g_expected =
            Matrix::from_rows({{1, 0, 0, 1, 1}, {0, 1, 0, 1, 2}, {0, 0, 1, 1, 3}}, 7);
        Matrix h_expected = Matrix::from_rows({{1, 1}, {1, 2}, {1, 3}, {1, 0}, {0, 1}}, 7);
        Rng plan_rng = master.fork(3);
        QueryPlan plan = build_query_plan(params, code, {0}, plan_rng);
        if (code.generator != g_expected || plan.row_spread != h_expected) {
            d = "storage or spread matrix differs from the worked instance";
            return false;
        }
        Transcript t = run_simulation(params, 1);
        RedundancyReport rr = redundancy_audit(plan, 21);
        PrivacyReport pr = structural_privacy_audit(plan, 2);
        bool dims_ok = pr.verdict;
        for (const auto& e : pr.entries)
            if (e.expected != std::vector<std::size_t>{6, 6, 3, 9}) dims_ok = false;
        d = "rate=" + t.achieved_rate.str() + " rank=" + std::to_string(rr.rank);
        return t.success && t.achieved_rate == Rational(10, 17) && rr.rank == 21 && dims_ok;
    });

    criterion(3, "(2,5,2,2) GRS over F_5: rate 20/31, redundancy rank exactly 11", [](std::string& d) {
        SystemParams params = params_from_config(config("grs", 2, 5, 2, 2));
        if (params.modulus != 5) {
            d = "expected F_5";
            return false;
        }
        Transcript t = run_simulation(params, 1);
        Rng master(params.seed);
        StorageCode code = make_storage_code(params, master);
        Rng plan_rng = master.fork(3);
        QueryPlan plan = build_query_plan(params, code, {0}, plan_rng);
        RedundancyReport rr = redundancy_audit(plan, 11);
        d = "rate=" + t.achieved_rate.str() + " rank=" + std::to_string(rr.rank);
        return t.success && t.achieved_rate == Rational(20, 31) && rr.rank == 11;
    });

    criterion(4, "multi-file (P,M,N,T,K)=(2,3,5,2,2) GRS: rate 40/51, both files exact", [](std::string& d) {
        bool all = true;
        for (std::uint64_t seed = 1; seed <= 20 && all; ++seed) {
            SystemParams params = params_from_config(config("multifile", 3, 5, 2, 2, 2, seed));
            Transcript t = run_simulation(params, 1);
            if (!t.success || t.achieved_rate != Rational(40, 51)) {
                d = "failed at seed " + std::to_string(seed);
                all = false;
            }
        }
        if (all) d = "rate=40/51 over 20 seeds";
        return all;
    });

    criterion(5, "cyclic (2,5,-,3): rate 3/5 equals the cyclic capacity, 5 adjacent pairs private",
              [](std::string& d) {
                  SystemParams params = params_from_config(config("cyclic", 2, 5, 2, 3));
                  Transcript t = run_simulation(params, 1);
                  Rational capacity(static_cast<long long>(3 * 5), static_cast<long long>(3 * 5 + 9 + 1));
                  AuditOutcome a = run_audits(params, 2000, false);
                  d = "rate=" + t.achieved_rate.str() + " pairs=" + std::to_string(a.privacy.entries.size());
                  return t.success && t.achieved_rate == Rational(3, 5) &&
                         t.achieved_rate == capacity && a.privacy.verdict &&
                         a.privacy.entries.size() == 5;
              });

    criterion(6, "(2,6,3,3) GRS: rank 45, rate 4/7, failure fraction <= 1% over 200 trials",
              [](std::string& d) {
                  SystemParams params = params_from_config(config("generalT", 2, 6, 3, 3));
                  if (params.modulus < 65536) {
                      d = "field below 2^16";
                      return false;
                  }
                  Rng master(params.seed);
                  StorageCode code = make_storage_code(params, master);
                  Rng plan_rng = master.fork(3);
                  QueryPlan plan = build_query_plan(params, code, {0}, plan_rng);
                  RedundancyReport rr = redundancy_audit(plan, 45);
                  Transcript t = run_simulation(params, 200);
                  auto closed = rate_general_t(6, 3, 3);
                  d = "rank=" + std::to_string(rr.rank) + " rate=" + t.achieved_rate.str() +
                      " failures=" + std::to_string(t.eps_failures) + "/200";
                  // the failure threshold is empirical: no proven bound exists
                  return rr.rank == 45 && closed && *closed == Rational(4, 7) &&
                         t.achieved_rate == Rational(4, 7) && t.eps_runs == 200 &&
                         t.eps_failures * 100 <= t.eps_runs;
              });

    criterion(7, "formula lattice over 2 <= K <= N-2 <= 18", [](std::string& d) {
        for (std::size_t n = 4; n <= 20; ++n) {
            for (std::size_t k = 2; k + 2 <= n; ++k) {
                auto grs = rate_grs_t2(n, k);
                auto benchmark = conjectured_capacity(2, n, 2, k);
                auto th1 = rate_generic_t2(n, k);
                if (!grs || !benchmark || !th1) return false;
                if (!(*grs > *benchmark)) {
                    d = "grs below the benchmark at " + std::to_string(n) + "," + std::to_string(k);
                    return false;
                }
                long long nn = static_cast<long long>(n), kk = static_cast<long long>(k);
                bool beats = 2 * nn - kk - 1 > (nn - kk) * (nn - kk);
                if ((*th1 > *benchmark) != beats) {
                    d = "generic-rate comparison off at " + std::to_string(n) + "," + std::to_string(k);
                    return false;
                }
                if (k == 2 && *grs != Rational(nn * nn - nn, nn * nn + 2 * nn - 4)) {
                    d = "linear capacity mismatch at n=" + std::to_string(n);
                    return false;
                }
            }
        }
        d = "all points checked";
        return true;
    });

    criterion(8, "Schur dimensions equal min(a+b-1, N) exhaustively for N <= 8", [](std::string& d) {
        for (std::size_t n = 2; n <= 8; ++n) {
            std::uint32_t q = smallest_prime_geq(n);
            for (std::size_t a = 1; a <= n; ++a) {
                for (std::size_t b = 1; b <= n; ++b) {
                    std::size_t dim = schur_product_dim(grs_generator(GrsSpec::standard(n, a, q)),
                                                        grs_generator(GrsSpec::standard(n, b, q)));
                    if (dim != std::min(a + b - 1, n)) {
                        d = "mismatch at n=" + std::to_string(n) + " a=" + std::to_string(a) +
                            " b=" + std::to_string(b);
                        return false;
                    }
                }
            }
        }
        d = "all (a, b, N) checked";
        return true;
    });

    criterion(9, "structure oracles: MDS check equivalence, spread row-MDS, exterior P1/P2",
              [](std::string& d) {
                  Rng rng(424242);
                  for (std::size_t n = 3; n <= 8; ++n) {
                      for (std::size_t k = 1; k < n; ++k) {
                          for (int trial = 0; trial < 6; ++trial) {
                              Matrix m(k, n, 11);
                              for (std::size_t i = 0; i < k; ++i) m.set(i, i, 1);
                              for (std::size_t i = 0; i < k; ++i)
                                  for (std::size_t j = k; j < n; ++j) m.set(i, j, rng.field_value(11));
                              if (is_column_mds(m, k) != column_mds_oracle(m, k)) {
                                  d = "column-MDS disagreement";
                                  return false;
                              }
                          }
                      }
                  }
                  for (std::uint64_t seed = 0; seed < 20; ++seed) {
                      Rng srng(seed);
                      StorageCode code = StorageCode::generic(6, 3, 11, srng);
                      Matrix h = build_row_spread_generic(code.generator, 2, srng);
                      if (!is_row_mds(h, 2)) {
                          d = "spread output not row-MDS";
                          return false;
                      }
                  }
                  for (std::size_t n = 3; n <= 7; ++n) {
                      auto spaces = exterior_subspaces(3, 2, 7, n);
                      for (const auto& pair : k_subsets(n, 2)) {
                          if (intersect(spaces[pair[0]], spaces[pair[1]]).dim() != 1) {
                              d = "P1 failed";
                              return false;
                          }
                      }
                      for (const auto& tri : k_subsets(n, 3)) {
                          Matrix gens(3, 3, 7);
                          std::size_t r = 0;
                          for (std::size_t a = 0; a < 3; ++a)
                              for (std::size_t b = a + 1; b < 3; ++b)
                                  gens.set_row(r++,
                                               intersect(spaces[tri[a]], spaces[tri[b]]).basis().row(0));
                          if (rank(gens) != 3) {
                              d = "P2 failed";
                              return false;
                          }
                      }
                  }
                  d = "all oracles agree";
                  return true;
              });

    criterion(10, "audit soundness: a corrupted query row is detected on (2,4,2,2)", [](std::string& d) {
        SystemParams params = params_from_config(config("general", 2, 4, 2, 2));
        bool all = true;
        for (std::uint64_t seed = 1; seed <= 10 && all; ++seed) {
            SystemParams p = params;
            p.seed = seed;
            AuditOutcome a = run_audits(p, 2000, true);
            if (a.verdict) {
                d = "fault not detected at seed " + std::to_string(seed);
                all = false;
            }
        }
        if (all) d = "detected across 10 seeds";
        return all;
    });

    std::printf("%d/10 criteria passed\n", 10 - g_failures);
    return g_failures;
}
