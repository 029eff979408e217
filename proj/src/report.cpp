#include "moebiuslab/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "moebiuslab/errors.hpp"

namespace moebiuslab {

using json = nlohmann::ordered_json;

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double num_of(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

Verdict verdict_of(const std::string& s) {
    for (Verdict v : {Verdict::SemiParallel, Verdict::NotSemiParallel, Verdict::Indeterminate})
        if (to_string(v) == s) return v;
    throw Error(ErrorCode::InvalidSpecFile, "unknown verdict '" + s + "'");
}

bool same_double(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

void emit(const json& j, int indent, int depth, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [k, v] : j.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad + json(k).dump() + ": ";
                emit(v, indent, depth + 1, out);
            }
            out += "\n" + close + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += pad;
                emit(j[i], indent, depth + 1, out);
            }
            out += "\n" + close + "]";
            return;
        }
        case json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += "null";
                return;
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out += buf;
            return;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

std::string dump_json(const json& j, int indent) {
    std::string out;
    emit(j, indent, 0, out);
    out += "\n";
    return out;
}

json to_json(const RunReport& r) {
    const ClassificationReport& c = r.classification;
    json j;
    j["tool"] = {{"name", kToolName}, {"version", r.tool_version}};
    j["command"] = r.command;

    json params = json::object();
    for (const auto& [k, v] : r.params) params[k] = num(v);
    json meta = json::object();
    for (const auto& [k, v] : c.metadata) meta[k] = v;
    j["spec"] = {{"source", r.source}, {"name", c.spec_name}, {"n", c.n}, {"params", params}, {"metadata", meta}};

    j["config"] = {{"samples", c.config.point_count},    {"seed", c.config.seed},
                   {"tol_cluster", num(c.config.tol_cluster)}, {"tol_verdict", num(c.config.tol_verdict)},
                   {"tol_constancy", num(c.config.tol_constancy)}, {"inset", num(c.config.inset)}};
    j["points"] = {{"evaluated", c.points_evaluated}, {"errors", c.point_errors}};

    json clusters = json::array();
    for (const auto& cs : c.clusters)
        clusters.push_back({{"multiplicity", cs.multiplicity},
                            {"lambda_bar", num(cs.lambda)},
                            {"theta", num(cs.theta)},
                            {"invariant", num(cs.invariant)}});
    j["spectrum"] = {{"cluster_count", c.cluster_count},
                     {"multiplicities", c.multiplicities},
                     {"matching_stable", c.matching_stable},
                     {"matching_quality", num(c.matching_quality)},
                     {"clusters", clusters}};

    j["semiparallel"] = {{"direct", num(c.verdict.direct)},
                         {"spectral", num(c.verdict.spectral)},
                         {"tol", num(c.verdict.tol)},
                         {"verdict", std::string(to_string(c.verdict.verdict))},
                         {"direct_route", std::string(to_string(c.direct_route))},
                         {"spectral_route", std::string(to_string(c.spectral_route))},
                         {"diagnostic", c.verdict.diagnostic},
                         {"warped", num(c.warped_max)},
                         {"omega_max", num(c.omega_max)}};

    json constancy = json::array();
    for (const auto& s : c.constancy)
        constancy.push_back({{"quantity", s.quantity},
                             {"min", num(s.min)},
                             {"max", num(s.max)},
                             {"spread", num(s.spread)},
                             {"constant", s.constant}});
    j["constancy"] = constancy;

    json residuals = json::array();
    for (const auto& s : c.residuals)
        residuals.push_back({{"check", s.check}, {"max", num(s.max)}, {"median", num(s.median)}});
    j["residuals"] = residuals;

    json checks = json::array();
    for (const auto& s : r.checks)
        checks.push_back({{"name", s.name}, {"max", num(s.max)}, {"median", num(s.median)}, {"tol", num(s.tol)}, {"passed", s.passed}});
    j["checks"] = checks;

    j["branch"] = c.branch;
    j["notes"] = c.notes;
    j["diagnostic"] = c.diagnostic;
    j["passed"] = r.passed;
    j["exit_code"] = r.exit_code;
    j["wall_time_s"] = num(r.wall_time_s);
    return j;
}

RunReport run_report_from_json(const json& j) {
    try {
        RunReport r;
        ClassificationReport& c = r.classification;
        r.tool_version = j.at("tool").at("version").get<std::string>();
        r.command = j.at("command").get<std::string>();
        const json& spec = j.at("spec");
        r.source = spec.at("source").get<std::string>();
        c.spec_name = spec.at("name").get<std::string>();
        c.n = spec.at("n").get<int>();
        for (const auto& [k, v] : spec.at("params").items()) r.params[k] = num_of(v);
        for (const auto& [k, v] : spec.at("metadata").items()) c.metadata[k] = v.get<std::string>();

        const json& cfg = j.at("config");
        c.config.point_count = cfg.at("samples").get<int>();
        c.config.seed = cfg.at("seed").get<std::uint64_t>();
        c.config.tol_cluster = num_of(cfg.at("tol_cluster"));
        c.config.tol_verdict = num_of(cfg.at("tol_verdict"));
        c.config.tol_constancy = num_of(cfg.at("tol_constancy"));
        c.config.inset = num_of(cfg.at("inset"));

        c.points_evaluated = j.at("points").at("evaluated").get<int>();
        c.point_errors = j.at("points").at("errors").get<std::vector<std::string>>();

        const json& sp = j.at("spectrum");
        c.cluster_count = sp.at("cluster_count").get<int>();
        c.multiplicities = sp.at("multiplicities").get<std::vector<int>>();
        c.matching_stable = sp.at("matching_stable").get<bool>();
        c.matching_quality = num_of(sp.at("matching_quality"));
        for (const auto& cj : sp.at("clusters"))
            c.clusters.push_back({cj.at("multiplicity").get<int>(), num_of(cj.at("lambda_bar")), num_of(cj.at("theta")),
                                  num_of(cj.at("invariant"))});

        const json& semi = j.at("semiparallel");
        c.verdict.direct = num_of(semi.at("direct"));
        c.verdict.spectral = num_of(semi.at("spectral"));
        c.verdict.tol = num_of(semi.at("tol"));
        c.verdict.verdict = verdict_of(semi.at("verdict").get<std::string>());
        c.verdict.diagnostic = semi.at("diagnostic").get<std::string>();
        c.direct_route = verdict_of(semi.at("direct_route").get<std::string>());
        c.spectral_route = verdict_of(semi.at("spectral_route").get<std::string>());
        c.warped_max = num_of(semi.at("warped"));
        c.omega_max = num_of(semi.at("omega_max"));

        for (const auto& s : j.at("constancy"))
            c.constancy.push_back({s.at("quantity").get<std::string>(), num_of(s.at("min")), num_of(s.at("max")),
                                   num_of(s.at("spread")), s.at("constant").get<bool>()});
        for (const auto& s : j.at("residuals"))
            c.residuals.push_back({s.at("check").get<std::string>(), num_of(s.at("max")), num_of(s.at("median"))});
        for (const auto& s : j.at("checks"))
            r.checks.push_back({s.at("name").get<std::string>(), num_of(s.at("max")), num_of(s.at("median")),
                                num_of(s.at("tol")), s.at("passed").get<bool>()});

        c.branch = j.at("branch").get<std::string>();
        c.notes = j.at("notes").get<std::vector<std::string>>();
        c.diagnostic = j.at("diagnostic").get<std::string>();
        r.passed = j.at("passed").get<bool>();
        r.exit_code = j.at("exit_code").get<int>();
        r.wall_time_s = num_of(j.at("wall_time_s"));
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidSpecFile, std::string("malformed report: ") + e.what());
    }
}

std::string serialize(const RunReport& r) { return dump_json(to_json(r)); }

RunReport parse_report(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidSpecFile, std::string("report is not JSON: ") + e.what());
    }
    return run_report_from_json(j);
}

bool RunReport::operator==(const RunReport& o) const {
    return tool_version == o.tool_version && command == o.command && source == o.source && params == o.params &&
           classification == o.classification && checks == o.checks && passed == o.passed && exit_code == o.exit_code &&
           same_double(wall_time_s, o.wall_time_s);
}

}  // namespace moebiuslab
