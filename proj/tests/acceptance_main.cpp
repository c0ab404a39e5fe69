// Acceptance gate: runs every contract criterion against the committed
// reference measure and prints one pass/fail line per criterion.

#include <cstdio>
#include <string>
#include <vector>

#include "ratsym/io.hpp"
#include "ratsym/verify.hpp"

using namespace ratsym;

namespace {

int failures = 0;

void report(int criterion, const std::string& what, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
                what.c_str(), detail.c_str());
    if (!pass) ++failures;
}

std::string worst_of(const SuiteReport& rep) {
    double worst = 0.0;
    for (const CheckResult& c : rep.checks) worst = std::max(worst, c.worst);
    char buf[96];
    std::snprintf(buf, sizeof buf, "worst residual %.3e, %.2f s", worst, rep.seconds);
    return buf;
}

std::string worst_of(const std::vector<SuiteReport>& reps) {
    double worst = 0.0, secs = 0.0;
    for (const SuiteReport& r : reps) {
        secs += r.seconds;
        for (const CheckResult& c : r.checks) worst = std::max(worst, c.worst);
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "worst residual %.3e, %.2f s", worst, secs);
    return buf;
}

bool all_pass(const std::vector<SuiteReport>& reps) {
    for (const SuiteReport& r : reps)
        if (!r.pass()) return false;
    return true;
}

} // namespace

int main() {
    const std::string path = std::string(RATSYM_DATA_DIR) + "/reference12.json";
    Measure m = measure_from_json(load_json_file(path));
    VerifyConfig cfg;  // contract defaults: 200 specs, 10 points, 50 trials, ...

    {
        SuiteReport r = run_oracle_suite(m, cfg);
        const bool in_time = r.seconds <= 60.0;
        report(1, "oracle triple agreement on 200 seeded specs, all branches >= 20 hits",
               r.pass() && in_time, worst_of(r));
    }
    {
        SuiteReport r = run_partition_suite(m, cfg);
        report(2, "partition normalization via brute sum, determinant, and norms (N <= 5)",
               r.pass(), worst_of(r));
    }
    {
        SuiteReport r = run_examples_suite(m, cfg);
        report(3, "eight single/double-insertion closed forms at 10 points each", r.pass(),
               worst_of(r));
    }
    {
        SuiteReport r = run_overlap_suite(m, cfg);
        report(4, "all applicable branches agree on boundary specs", r.pass(), worst_of(r));
    }
    {
        SuiteReport r = run_invariance_suite(m, cfg);
        report(5, "permutation / scaling / branch-flip / cancellation invariances",
               r.pass(), worst_of(r));
    }
    {
        SuiteReport r = run_biortho_suite(m, cfg);
        report(6, "orthonormality and factorization identity at T=8", r.pass(), worst_of(r));
    }
    {
        SuiteReport r = run_wick_suite(cfg);
        const bool in_time = r.seconds <= 30.0;
        report(7, "wick identity battery (det form, vandermonde, cauchy, two-component)",
               r.pass() && in_time, worst_of(r));
    }
    {
        std::vector<SuiteReport> rs = run_deformed_suites(m, cfg);
        report(8, "criteria 2, 3, 6 rerun on the time-deformed measure", all_pass(rs),
               worst_of(rs));
    }

    if (failures != 0) std::printf("%d criterion(s) FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
