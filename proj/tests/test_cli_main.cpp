// Drives the installed CLI binary end to end: exit-code contract, report
// schemas, determinism, and oracle agreement through the command layer.

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

int failures = 0;

#define CHECK_MSG(cond, msg)                                                    \
    do {                                                                        \
        if (!(cond)) {                                                          \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg \
                      << "\n";                                                  \
            ++failures;                                                         \
        }                                                                       \
    } while (0)

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(RATSYM_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    RunResult r;
    FILE* p = popen(cmd.c_str(), "r");
    if (p == nullptr) return r;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(p);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
}

const std::string kRef = std::string(RATSYM_DATA_DIR) + "/reference12.json";

} // namespace

int main() {
    const std::string dir = "/tmp/ratsym_cli_test";
    if (std::system(("mkdir -p " + dir).c_str()) != 0) return 1;

    const std::string single = dir + "/single.json";
    write_file(single, R"({"label":"single","atoms":[{"x":[2,0],"y":[3,0],"w":[5,0]}]})");

    // bimoments of a single atom at T=2: [[w, w*y],[w*x, w*x*y]]
    {
        RunResult r = run("bimoments " + single + " --trunc 2");
        CHECK_MSG(r.exit_code == 0, "bimoments exit code " << r.exit_code);
        const json doc = json::parse(r.out);
        CHECK_MSG(doc["B"][0][0][0] == 5.0 && doc["B"][0][1][0] == 15.0 &&
                      doc["B"][1][0][0] == 10.0 && doc["B"][1][1][0] == 30.0,
                  "bimoment entries wrong: " << doc["B"].dump());
        CHECK_MSG(doc["schema_version"] == 1, "schema_version missing");
    }

    // malformed document: exit 2
    {
        const std::string bad = dir + "/bad.json";
        write_file(bad, "{ not json");
        CHECK_MSG(run("bimoments " + bad).exit_code == 2, "malformed file should exit 2");
        CHECK_MSG(run("bimoments " + dir + "/missing.json").exit_code == 2,
                  "missing file should exit 2");
    }

    // byte-identical reports on identical input
    {
        RunResult a = run("bimoments " + kRef + " --trunc 8");
        RunResult b = run("bimoments " + kRef + " --trunc 8");
        CHECK_MSG(a.exit_code == 0 && a.out == b.out, "bimoments report not deterministic");
        RunResult v1 = run("verify " + kRef + " --seed 7");
        RunResult v2 = run("verify " + kRef + " --seed 7");
        CHECK_MSG(v1.exit_code == 0 && v1.out == v2.out, "verify report not deterministic");
    }

    // biortho dump carries unit-diagonal K and tiny residual
    {
        RunResult r = run("biortho " + kRef + " --trunc 6");
        CHECK_MSG(r.exit_code == 0, "biortho exit " << r.exit_code);
        const json doc = json::parse(r.out);
        CHECK_MSG(doc["K"][3][3][0] == 1.0, "K diagonal should be one");
        CHECK_MSG(doc["factorization_residual"].get<double>() < 1e-9,
                  "factorization residual too large");
    }

    // empty insertion evaluates to exactly one
    {
        const std::string spec = dir + "/empty_spec.json";
        write_file(spec, R"({"N": 3})");
        RunResult r = run("eval " + kRef + " " + spec);
        CHECK_MSG(r.exit_code == 0, "eval exit " << r.exit_code);
        const json doc = json::parse(r.out);
        CHECK_MSG(doc["report"]["value"][0] == 1.0 && doc["report"]["value"][1] == 0.0,
                  "empty insertion should give [1.0, 0.0], got "
                      << doc["report"]["value"].dump());
    }

    // single y-zero: eval agrees with both oracles through the CLI
    {
        const std::string spec = dir + "/zeta_spec.json";
        write_file(spec, R"({"N": 3, "zeta": [[2.5, 0.5]]})");
        RunResult e = run("eval " + kRef + " " + spec);
        RunResult o = run("oracle " + kRef + " " + spec + " --method both");
        CHECK_MSG(e.exit_code == 0 && o.exit_code == 0, "eval/oracle exit codes");
        const json ed = json::parse(e.out), od = json::parse(o.out);
        CHECK_MSG(od["cross_relative_difference"].get<double>() < 1e-9,
                  "oracle cross difference too large");
        const double vr = ed["report"]["value"][0], vi = ed["report"]["value"][1];
        const double br = od["results"][0]["value"][0], bi = od["results"][0]["value"][1];
        const double diff = std::hypot(vr - br, vi - bi) / std::hypot(br, bi);
        CHECK_MSG(diff < 1e-8, "eval disagrees with oracle by " << diff);
    }

    // full random spec through the CLI
    {
        const std::string spec = dir + "/full_spec.json";
        write_file(spec, R"({"N": 2, "xi": [[1.9, 1.1]], "zeta": [[-2.2, 0.4], [2.4, -1.0]],
                             "eta": [[0.3, 2.2], [-1.7, -1.5]], "mu": [[2.8, 0.9]]})");
        RunResult e = run("eval " + kRef + " " + spec);
        RunResult o = run("oracle " + kRef + " " + spec + " --method brute");
        CHECK_MSG(e.exit_code == 0 && o.exit_code == 0, "full spec exit codes");
        const json ed = json::parse(e.out), od = json::parse(o.out);
        const double vr = ed["report"]["value"][0], vi = ed["report"]["value"][1];
        const double br = od["results"][0]["value"][0], bi = od["results"][0]["value"][1];
        CHECK_MSG(std::hypot(vr - br, vi - bi) / std::hypot(br, bi) < 1e-8,
                  "eval vs brute through CLI");
    }

    // pole on the support: numerical precondition, exit 3
    {
        std::ifstream refin(kRef);
        const json ref = json::parse(refin);
        const double xr = ref["atoms"][0]["x"][0], xi = ref["atoms"][0]["x"][1];
        const std::string spec = dir + "/pole_spec.json";
        json sj = {{"N", 2}, {"eta", json::array({json::array({xr, xi})})}};
        write_file(spec, sj.dump());
        CHECK_MSG(run("eval " + kRef + " " + spec).exit_code == 3,
                  "support pole should exit 3");
    }

    // oversized brute force: budget error, exit 4
    {
        const std::string spec = dir + "/empty_spec.json";
        CHECK_MSG(run("oracle " + kRef + " " + spec + " --method brute --budget 10").exit_code ==
                      4,
                  "budget exhaustion should exit 4");
    }

    // verify: passes on the reference measure, independent of the seed
    {
        CHECK_MSG(run("verify " + kRef).exit_code == 0, "verify should pass");
        CHECK_MSG(run("verify " + kRef + " --seed 12345").exit_code == 0,
                  "verify should pass for any seed");
    }

    // verify on a rank-deficient measure: clean precondition exit, not a crash
    {
        const std::string rank2 = dir + "/rank2.json";
        write_file(rank2, R"({"label":"rank2","atoms":[
            {"x":[0.4,0.1],"y":[-0.3,0.2],"w":[1,0]},
            {"x":[-0.8,0.3],"y":[0.6,-0.5],"w":[0.5,0.2]}]})");
        CHECK_MSG(run("verify " + rank2 + " --trunc 5").exit_code == 3,
                  "rank-deficient verify should exit 3");
    }

    // wick-check: default passes; tiny pairing budget is a budget error
    {
        CHECK_MSG(run("wick-check").exit_code == 0, "wick-check should pass");
        CHECK_MSG(run("wick-check --budget 2").exit_code == 4,
                  "wick-check with 2-pair budget should exit 4");
        RunResult w8 = run("wick-check --trunc 8");
        CHECK_MSG(w8.exit_code == 0, "wick-check with window 8 should still pass");
        const json doc = json::parse(w8.out);
        CHECK_MSG(doc["window"] == 8, "window override not recorded");
    }

    // csv sweep
    {
        const std::string spec = dir + "/zeta_spec.json";
        RunResult r = run("eval " + kRef + " " + spec +
                          " --format csv --sweep-family zeta --sweep-index 0"
                          " --sweep-from 2.0,0.5 --sweep-to 3.0,0.5 --sweep-count 5");
        CHECK_MSG(r.exit_code == 0, "csv sweep exit " << r.exit_code);
        int lines = 0;
        for (char c : r.out)
            if (c == '\n') ++lines;
        CHECK_MSG(lines == 6, "csv sweep should have header + 5 rows, got " << lines);
        CHECK_MSG(run("eval " + kRef + " " + spec + " --format csv").exit_code == 2,
                  "csv without sweep should exit 2");
    }

    if (failures == 0) std::printf("cli tests: all passed\n");
    else std::printf("cli tests: %d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
