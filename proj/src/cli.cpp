#include "moebiuslab/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

#include <CLI11.hpp>

#include "moebiuslab/catalog.hpp"
#include "moebiuslab/errors.hpp"
#include "moebiuslab/spec_file.hpp"

namespace moebiuslab {

namespace {

struct RunOptions {
    std::string target;
    int samples = SampleConfig{}.point_count;
    std::uint64_t seed = SampleConfig{}.seed;
    double tol = SampleConfig{}.tol_verdict;
    double tol_cluster = SampleConfig{}.tol_cluster;
    bool json = false;
    bool timing = false;
    std::string out_path;
};

bool usage_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownCatalogEntry:
        case ErrorCode::ParamOutOfRange:
        case ErrorCode::InsufficientSamples:
        case ErrorCode::InvalidSpecFile:
        case ErrorCode::SurfaceModelMismatch:
            return true;
        default:
            return false;
    }
}

std::string sci(double v) {
    if (!std::isfinite(v)) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

bool looks_like_file(const std::string& target) {
    return target.ends_with(".json") || (target.find('?') == std::string::npos && std::filesystem::is_regular_file(target));
}

void print_summary(const RunReport& r, std::ostream& out) {
    const ClassificationReport& c = r.classification;
    out << "spec        " << r.source << "\n";
    out << "n           " << c.n << "\n";
    out << "points      " << c.points_evaluated << " (seed " << c.config.seed << ")";
    if (!c.point_errors.empty()) out << ", " << c.point_errors.size() << " failed";
    out << "\n";
    out << "clusters    " << c.cluster_count;
    if (!c.multiplicities.empty()) {
        out << " (";
        for (std::size_t i = 0; i < c.multiplicities.size(); ++i) out << (i ? "," : "") << c.multiplicities[i];
        out << ")";
    }
    out << "\n";
    for (const auto& cs : c.clusters)
        out << "  m=" << cs.multiplicity << "  lambda_bar " << fixed(cs.lambda) << "  theta " << fixed(cs.theta)
            << "  lambda_bar^2+2theta " << fixed(cs.invariant) << "\n";
    out << "verdict     " << to_string(c.verdict.verdict) << "  direct " << sci(c.verdict.direct) << "  spectral "
        << sci(c.verdict.spectral) << "\n";
    for (const auto& chk : r.checks)
        out << "  " << (chk.passed ? "ok   " : "FAIL ") << chk.name << "  max " << sci(chk.max) << "  tol "
            << sci(chk.tol) << "\n";
    out << "branch      " << c.branch << "\n";
    for (const auto& note : c.notes) out << "note        " << note << "\n";
    if (!c.diagnostic.empty()) out << "diagnostic  " << c.diagnostic << "\n";
    if (std::isfinite(r.wall_time_s)) out << "wall time   " << fixed(r.wall_time_s) << " s\n";
    out << "exit        " << r.exit_code << "\n";
}

int run_spec_command(const std::string& command, const RunOptions& opt, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    SampleConfig cfg;
    cfg.point_count = opt.samples;
    cfg.seed = opt.seed;
    cfg.tol_verdict = opt.tol;
    cfg.tol_cluster = opt.tol_cluster;

    RunReport r;
    r.command = command;
    r.source = opt.target;
    ImmersionSpec spec;
    try {
        validate(cfg);
        if (looks_like_file(opt.target)) {
            spec = load_spec_file(opt.target);
        } else {
            const EntryName en = parse_entry_name(opt.target);
            r.params = en.params;
            spec = make_entry(opt.target);
        }
        r.classification = classify(spec, cfg);
    } catch (const Error& e) {
        err << "moebiuslab " << command << ": " << e.what() << "\n";
        return usage_error(e.code()) ? exit_code::kUsage : exit_code::kInternal;
    }

    const bool curve = spec.metadata.contains(kMetaCurve);
    r.checks = verify_checks(r.classification, curve);
    if (command == "verify") {
        r.exit_code = verify_exit_code(r.classification, r.checks);
    } else {
        r.exit_code = classify_exit_code(r.classification);
    }
    r.passed = r.exit_code == exit_code::kPass;
    r.wall_time_s = opt.timing
                        ? std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()
                        : std::numeric_limits<double>::quiet_NaN();

    const std::string text = serialize(r);
    if (!opt.out_path.empty()) {
        std::ofstream f(opt.out_path, std::ios::binary);
        if (!f) {
            err << "moebiuslab: cannot write " << opt.out_path << "\n";
            return exit_code::kInternal;
        }
        f << text;
    }
    if (opt.json)
        out << text;
    else
        print_summary(r, out);
    return r.exit_code;
}

int run_catalog(bool json, std::ostream& out) {
    if (json) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& e : catalog_entries()) {
            nlohmann::ordered_json params = nlohmann::ordered_json::array();
            for (const auto& p : e.params)
                params.push_back({{"key", p.key}, {"default", p.fallback}, {"integer", p.integer}, {"help", p.help}});
            arr.push_back({{"name", e.name},
                           {"description", e.description},
                           {"branch", e.branch},
                           {"params", params},
                           {"curve_based", e.curve_based},
                           {"negative_control", e.negative_control}});
        }
        out << dump_json(arr);
        return exit_code::kPass;
    }
    for (const auto& e : catalog_entries()) {
        out << e.name;
        char sep = '?';
        for (const auto& p : e.params) {
            out << sep << p.key << "=" << fixed(p.fallback);
            sep = '&';
        }
        out << "\n    " << e.description << "\n    branch: " << e.branch;
        if (e.curve_based) out << ", curve-integrated";
        if (e.negative_control) out << ", negative control";
        out << "\n";
    }
    return exit_code::kPass;
}

void add_run_options(CLI::App* sub, RunOptions& opt) {
    sub->add_option("target", opt.target, "catalog entry (name?key=value&...) or JSON spec file")->required();
    sub->add_option("--samples", opt.samples, "number of sample points");
    sub->add_option("--seed", opt.seed, "sampling seed");
    sub->add_option("--tol", opt.tol, "semi-parallel verdict tolerance");
    sub->add_option("--tol-cluster", opt.tol_cluster, "eigenvalue clustering tolerance");
    sub->add_flag("--json", opt.json, "print the JSON report instead of a summary");
    sub->add_option("--out", opt.out_path, "also write the JSON report to this path");
    sub->add_flag("--timing", opt.timing, "record wall time in the report");
}

}  // namespace

std::vector<CheckResult> verify_checks(const ClassificationReport& report, bool curve_based,
                                       const VerifyTolerances& tol) {
    std::vector<CheckResult> checks;
    for (const auto& s : report.residuals) {
        double t = 0.0;
        if (s.check == "trace_B")
            t = tol.trace_b;
        else if (s.check == "norm_B")
            t = tol.norm_b;
        else if (s.check == "trace_psi")
            t = tol.trace_psi;
        else if (s.check == "warped")
            t = tol.warped;
        else if (s.check.starts_with("semiparallel"))
            continue;
        else
            t = curve_based ? tol.structure_curve : tol.structure;
        checks.push_back({s.check, s.max, s.median, t, s.max < t});
    }
    const SemiparallelVerdict& v = report.verdict;
    checks.push_back({"semiparallel", std::max(v.direct, v.spectral), std::min(v.direct, v.spectral), v.tol,
                      v.verdict == Verdict::SemiParallel});
    if (!report.point_errors.empty())
        checks.push_back({"points", static_cast<double>(report.point_errors.size()), 0.0, 0.0, false});
    return checks;
}

int verify_exit_code(const ClassificationReport& report, const std::vector<CheckResult>& checks) {
    if (!report.point_errors.empty() || report.verdict.verdict == Verdict::Indeterminate)
        return exit_code::kIndeterminate;
    for (const auto& c : checks)
        if (!c.passed) return exit_code::kNegative;
    return exit_code::kPass;
}

int classify_exit_code(const ClassificationReport& report) {
    if (report.branch == branch::kNotSemiParallel) return exit_code::kNegative;
    if (report.branch == branch::kIndeterminate) return exit_code::kIndeterminate;
    return exit_code::kPass;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical Moebius invariants of umbilic-free hypersurfaces", "moebiuslab"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    bool catalog_json = false;
    auto* cat = app.add_subcommand("catalog", "list catalog entries and their parameters");
    cat->add_flag("--json", catalog_json, "print the listing as JSON");

    RunOptions verify_opt;
    auto* verify = app.add_subcommand("verify", "run the residual and identity suite; exit 0 iff all pass");
    add_run_options(verify, verify_opt);

    RunOptions classify_opt;
    auto* cls = app.add_subcommand("classify", "decide the classification branch");
    add_run_options(cls, classify_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::kPass : exit_code::kUsage;
    }

    try {
        if (cat->parsed()) return run_catalog(catalog_json, out);
        if (verify->parsed()) return run_spec_command("verify", verify_opt, out, err);
        return run_spec_command("classify", classify_opt, out, err);
    } catch (const std::exception& e) {
        err << "moebiuslab: internal error: " << e.what() << "\n";
        return exit_code::kInternal;
    }
}

}  // namespace moebiuslab
