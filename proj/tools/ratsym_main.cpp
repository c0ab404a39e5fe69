// Command-line front end: load measures, factorize, evaluate insertion
// specs, run the independent oracles, and drive the verification batteries.
//
// Exit codes: 0 success, 2 parse/validation, 3 numerical precondition,
// 4 budget exceeded, 5 verification failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ratsym/evaluator.hpp"
#include "ratsym/io.hpp"
#include "ratsym/oracle.hpp"
#include "ratsym/verify.hpp"

namespace {

using namespace ratsym;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitBudget = 4;
constexpr int kExitVerify = 5;

struct CommonOpts {
    double rel_tol = 1e-8;
    double eps_pole = 1e-8;
    std::size_t trunc = 8;
    long budget = 0;  // 0 = per-command default
    std::uint64_t seed = 20240101;
    std::string format = "json";
    std::string out_path;
};

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--tol", o.rel_tol, "relative tolerance for agreement checks");
    cmd->add_option("--eps-pole", o.eps_pole, "minimum distance to poles and supports");
    cmd->add_option("--trunc", o.trunc, "truncation order (wick-check: mode window)");
    cmd->add_option("--budget", o.budget,
                    "work budget: oracle terms, or wick pairing pairs");
    cmd->add_option("--seed", o.seed, "seed for randomized suites");
    cmd->add_option("--format", o.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", o.out_path, "write the report to this file instead of stdout");
}

void emit(const CommonOpts& o, const std::string& text) {
    if (o.out_path.empty())
        std::cout << text;
    else
        write_text_file(o.out_path, text);
}

json complex_json(cx z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const CMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

json report_header(const char* command, const CommonOpts& o) {
    return json{{"schema_version", 1},
                {"command", command},
                {"config",
                 {{"rel_tol", o.rel_tol},
                  {"eps_pole", o.eps_pole},
                  {"trunc", o.trunc},
                  {"seed", o.seed}}}};
}

json eval_report_json(const EvalReport& rep) {
    json diag = json::object();
    for (const auto& [k, v] : rep.diagnostics) diag[k] = v;
    return json{{"value", complex_json(rep.value)},
                {"case", to_string(rep.tag.kind)},
                {"N1", rep.tag.N1},
                {"N2", rep.tag.N2},
                {"sign", rep.sign},
                {"prefactor", complex_json(rep.prefactor)},
                {"detG", complex_json(rep.detG)},
                {"G", matrix_json(rep.G)},
                {"pole_absorbed", rep.pole_absorbed},
                {"low_confidence", rep.low_confidence},
                {"diagnostics", diag}};
}

json suite_json(const SuiteReport& rep) {
    json checks = json::array();
    for (const CheckResult& c : rep.checks)
        checks.push_back({{"name", c.name},
                          {"pass", c.pass},
                          {"worst", c.worst},
                          {"tol", c.tol},
                          {"count", c.count},
                          {"note", c.note}});
    return json{{"suite", rep.suite}, {"pass", rep.pass()}, {"checks", checks}};
}

int cmd_bimoments(const std::string& measure_path, const CommonOpts& o) {
    const Measure m = measure_from_json(load_json_file(measure_path));
    const BimomentMatrix b = bimoment_matrix(m, o.trunc);
    json rep = report_header("bimoments", o);
    rep["measure"] = m.label();
    rep["atoms"] = m.size();
    rep["T"] = o.trunc;
    rep["B"] = matrix_json(b.entries);
    json minors = json::array();
    CMatrix lead(o.trunc, o.trunc);
    for (std::size_t k = 1; k <= o.trunc; ++k) {
        CMatrix sub(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) sub(i, j) = b.entries(i, j);
        minors.push_back(complex_json(determinant(sub)));
    }
    rep["leading_minor_determinants"] = minors;
    emit(o, rep.dump(2) + "\n");
    return kExitOk;
}

int cmd_biortho(const std::string& measure_path, const CommonOpts& o) {
    const Measure m = measure_from_json(load_json_file(measure_path));
    const BimomentMatrix b = bimoment_matrix(m, o.trunc);
    const BiorthoSystem sys = BiorthoSystem::factorize(b, o.trunc);
    json rep = report_header("biortho", o);
    rep["measure"] = m.label();
    rep["T"] = o.trunc;
    json h = json::array(), sq = json::array();
    for (std::size_t n = 0; n < o.trunc; ++n) {
        h.push_back(complex_json(sys.h(static_cast<long>(n))));
        sq.push_back(complex_json(sys.sqrt_h(static_cast<long>(n))));
    }
    rep["h"] = h;
    rep["sqrt_h"] = sq;
    rep["K"] = matrix_json(sys.K());
    rep["Kbar"] = matrix_json(sys.Kbar());
    rep["factorization_residual"] = sys.check_factorization_identity(b);
    emit(o, rep.dump(2) + "\n");
    return kExitOk;
}

struct SweepOpts {
    std::string family;
    std::size_t index = 0;
    std::string from = "0,0";
    std::string to = "0,0";
    std::size_t count = 0;
};

cx parse_point(const std::string& text) {
    const std::size_t comma = text.find(',');
    try {
        if (comma == std::string::npos) return cx{std::stod(text), 0.0};
        return cx{std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw parse_error("cannot parse point '" + text + "'; expected re,im");
    }
}

int cmd_eval(const std::string& measure_path, const std::string& spec_path,
             const CommonOpts& o, const SweepOpts& sweep) {
    const Measure m = measure_from_json(load_json_file(measure_path));
    InsertionSpec spec = spec_from_json(load_json_file(spec_path));
    const std::size_t t =
        std::max<std::size_t>(o.trunc, static_cast<std::size_t>(
                                           std::max<long>(1, required_truncation(spec))));
    const BimomentMatrix b = bimoment_matrix(m, t);
    const BiorthoSystem sys = BiorthoSystem::factorize(b, t);
    const KernelContext ctx{&m, &sys, o.eps_pole};

    if (o.format == "csv") {
        if (sweep.count == 0 || sweep.family.empty())
            throw parse_error("csv output is for sweeps; set --sweep-family and --sweep-count");
        std::vector<cx>* fam = sweep.family == "xi"     ? &spec.xi
                               : sweep.family == "zeta" ? &spec.zeta
                               : sweep.family == "eta"  ? &spec.eta
                               : sweep.family == "mu"   ? &spec.mu
                                                        : nullptr;
        if (fam == nullptr) throw parse_error("unknown sweep family: " + sweep.family);
        if (sweep.index >= fam->size())
            throw parse_error("sweep index outside the chosen family");
        const cx from = parse_point(sweep.from), to = parse_point(sweep.to);
        std::string csv = "t,point_re,point_im,value_re,value_im,case\n";
        for (std::size_t i = 0; i < sweep.count; ++i) {
            const double frac =
                sweep.count == 1 ? 0.0
                                 : static_cast<double>(i) / static_cast<double>(sweep.count - 1);
            const cx p = from + frac * (to - from);
            (*fam)[sweep.index] = p;
            const EvalReport rep = evaluate(spec, ctx);
            char line[192];
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%s\n", frac,
                          p.real(), p.imag(), rep.value.real(), rep.value.imag(),
                          to_string(rep.tag.kind));
            csv += line;
        }
        emit(o, csv);
        return kExitOk;
    }

    const EvalReport rep = evaluate(spec, ctx);
    json out = report_header("eval", o);
    out["measure"] = m.label();
    out["spec"] = spec_to_json(spec);
    out["report"] = eval_report_json(rep);
    json applicable = json::array();
    for (CaseKind k : rep.applicable) applicable.push_back(to_string(k));
    out["report"]["applicable"] = applicable;
    emit(o, out.dump(2) + "\n");
    return kExitOk;
}

int cmd_oracle(const std::string& measure_path, const std::string& spec_path,
               const std::string& method, const CommonOpts& o) {
    const Measure m = measure_from_json(load_json_file(measure_path));
    const InsertionSpec spec = spec_from_json(load_json_file(spec_path));
    const long budget = o.budget > 0 ? o.budget : 10'000'000;
    json out = report_header("oracle", o);
    out["measure"] = m.label();
    out["spec"] = spec_to_json(spec);
    json results = json::array();
    cx brute{}, det{};
    bool have_brute = false, have_det = false;
    if (method == "brute" || method == "both") {
        const OracleResult r = brute_force_IN(m, spec, budget);
        brute = r.value;
        have_brute = true;
        results.push_back({{"method", "brute"},
                           {"value", complex_json(r.value)},
                           {"terms", r.terms}});
    }
    if (method == "detN" || method == "both") {
        const OracleResult r = detN_IN(m, spec);
        det = r.value;
        have_det = true;
        results.push_back({{"method", "detN"},
                           {"value", complex_json(r.value)},
                           {"terms", r.terms}});
    }
    out["results"] = results;
    if (have_brute && have_det) {
        const double scale = std::max({std::abs(brute), std::abs(det), 1e-30});
        out["cross_relative_difference"] = std::abs(brute - det) / scale;
    }
    emit(o, out.dump(2) + "\n");
    return kExitOk;
}

int cmd_verify(const std::string& measure_path, const CommonOpts& o) {
    const Measure m = measure_from_json(load_json_file(measure_path));
    VerifyConfig cfg;
    cfg.trunc = o.trunc;
    cfg.seed = o.seed;
    cfg.eps_pole = o.eps_pole;
    if (o.budget > 0) cfg.term_budget = o.budget;
    cfg.tol_oracle = o.rel_tol;
    cfg.tol_overlap = o.rel_tol;
    const std::vector<SuiteReport> suites = run_all_suites(m, cfg);
    bool pass = true;
    json out = report_header("verify", o);
    out["measure"] = m.label();
    json js = json::array();
    for (const SuiteReport& r : suites) {
        js.push_back(suite_json(r));
        pass = pass && r.pass();
    }
    out["suites"] = js;
    out["pass"] = pass;
    emit(o, out.dump(2) + "\n");
    return pass ? kExitOk : kExitVerify;
}

int cmd_wick_check(const CommonOpts& o, bool window_given) {
    VerifyConfig cfg;
    cfg.seed = o.seed;
    if (window_given) cfg.wick_window = static_cast<int>(o.trunc);
    if (o.budget > 0) cfg.wick_pair_budget = static_cast<int>(o.budget);
    const SuiteReport r = run_wick_suite(cfg);
    json out = report_header("wick-check", o);
    out["window"] = cfg.wick_window;
    out["pair_budget"] = cfg.wick_pair_budget;
    out["suite"] = suite_json(r);
    emit(o, out.dump(2) + "\n");
    return r.pass() ? kExitOk : kExitVerify;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"integrals of rational symmetric functions via biorthogonal polynomials"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string measure_path, spec_path, method = "both";
    SweepOpts sweep;

    CLI::App* bim = app.add_subcommand("bimoments", "mixed-moment matrix and its minors");
    bim->add_option("measure", measure_path, "measure document")->required();
    add_common_flags(bim, o);

    CLI::App* bio = app.add_subcommand("biortho", "factorize and dump the polynomial data");
    bio->add_option("measure", measure_path, "measure document")->required();
    add_common_flags(bio, o);

    CLI::App* ev = app.add_subcommand("eval", "evaluate an insertion spec");
    ev->add_option("measure", measure_path, "measure document")->required();
    ev->add_option("spec", spec_path, "insertion-spec document")->required();
    add_common_flags(ev, o);
    ev->add_option("--sweep-family", sweep.family, "family to sweep (xi|zeta|eta|mu)");
    ev->add_option("--sweep-index", sweep.index, "index within the swept family");
    ev->add_option("--sweep-from", sweep.from, "start point re,im");
    ev->add_option("--sweep-to", sweep.to, "end point re,im");
    ev->add_option("--sweep-count", sweep.count, "number of sweep samples");

    CLI::App* orc = app.add_subcommand("oracle", "reference computations");
    orc->add_option("measure", measure_path, "measure document")->required();
    orc->add_option("spec", spec_path, "insertion-spec document")->required();
    orc->add_option("--method", method, "brute | detN | both")
        ->check(CLI::IsMember({"brute", "detN", "both"}));
    add_common_flags(orc, o);

    CLI::App* ver = app.add_subcommand("verify", "run every verification suite");
    ver->add_option("measure", measure_path, "measure document")->required();
    add_common_flags(ver, o);

    CLI::App* wck = app.add_subcommand("wick-check", "free-fermion identity battery");
    add_common_flags(wck, o);  // --trunc doubles as the mode window here

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        if (bim->parsed()) return cmd_bimoments(measure_path, o);
        if (bio->parsed()) return cmd_biortho(measure_path, o);
        if (ev->parsed()) return cmd_eval(measure_path, spec_path, o, sweep);
        if (orc->parsed()) return cmd_oracle(measure_path, spec_path, method, o);
        if (ver->parsed()) return cmd_verify(measure_path, o);
        if (wck->parsed()) return cmd_wick_check(o, wck->count("--trunc") > 0);
    } catch (const budget_error& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const precondition_error& e) {
        std::cerr << "numerical precondition: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitParse;
}
