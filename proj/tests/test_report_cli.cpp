#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "moebiuslab/catalog.hpp"
#include "moebiuslab/cli.hpp"
#include "moebiuslab/errors.hpp"
#include "moebiuslab/spec_file.hpp"

using namespace moebiuslab;
using json = nlohmann::ordered_json;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidSpecFile;
}

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "moebiuslab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string data(const char* file) { return std::string(MOEBIUSLAB_TEST_DATA) + "/" + file; }

std::string temp_file(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path.string();
}

}  // namespace

TEST_CASE("json float formatting") {
    json j;
    j["a"] = 0.1;
    j["b"] = std::numeric_limits<double>::quiet_NaN();
    j["c"] = std::numeric_limits<double>::infinity();
    j["d"] = 3;
    j["e"] = json::array();
    j["f"] = "x\"y";
    CHECK(dump_json(j) ==
          "{\n  \"a\": 0.10000000000000001,\n  \"b\": null,\n  \"c\": null,\n  \"d\": 3,\n  \"e\": [],\n  \"f\": \"x\\\"y\"\n}\n");
}

TEST_CASE("report round trip") {
    SampleConfig cfg;
    cfg.point_count = 10;
    RunReport r;
    r.command = "classify";
    r.source = "cone-clifford";
    r.params = {{"n", 4.0}, {"r", 1.0 / std::sqrt(2.0)}};
    r.classification = classify(make_entry("cone-clifford"), cfg);
    r.checks = verify_checks(r.classification, false);
    r.exit_code = classify_exit_code(r.classification);
    r.passed = r.exit_code == 0;
    r.wall_time_s = std::numeric_limits<double>::quiet_NaN();

    const std::string text = serialize(r);
    const RunReport back = parse_report(text);
    CHECK(back == r);
    CHECK(serialize(back) == text);

    r.wall_time_s = 0.123456789;
    CHECK(parse_report(serialize(r)) == r);

    CHECK(code_of([] { parse_report("{"); }) == ErrorCode::InvalidSpecFile);
    CHECK(code_of([] { parse_report("{\"tool\": 1}"); }) == ErrorCode::InvalidSpecFile);
}

TEST_CASE("spec files") {
    const ImmersionSpec p = load_spec_file(data("perturbed_clifford_cone.json"));
    CHECK(p.name == "perturbed Clifford cone");
    CHECK_FALSE(p.metadata.contains(kMetaBranch));

    const ImmersionSpec curve = spec_from_json(json::parse(
        R"({"surface": {"kind": "curve", "c": 0, "law": "exp", "a": 0.3, "b": 1.0}, "construction": "cylinder", "n": 4})"));
    CHECK(curve.metadata.contains(kMetaCurve));
    CHECK(curve.n == 4);

    const ImmersionSpec prod = spec_from_json(json::parse(R"({"product": {"kind": "torus", "k": 2, "n": 4}})"));
    CHECK(prod.ambient_dim() == 5);

    const char* malformed[] = {
        R"([1, 2])",
        R"({})",
        R"({"entry": "cylinder", "product": {"kind": "graph", "n": 4}})",
        R"({"surface": {"kind": "clifford-torus", "r": 0.5}, "construction": "spiral", "n": 4})",
        R"({"surface": {"kind": "clifford-torus", "r": "half"}, "construction": "cone", "n": 4})",
        R"({"product": {"kind": "cylinder", "k": 1.5, "n": 4}})",
        R"({"entry": "cylinder", "transforms": [{"op": "rotate"}]})",
        R"({"entry": "cylinder", "transforms": {"op": "invert"}})",
        R"({"entry": "cylinder", "metadata": {"branch": 3}})",
    };
    for (const char* m : malformed) {
        CAPTURE(m);
        CHECK(code_of([&] { spec_from_json(json::parse(m)); }) == ErrorCode::InvalidSpecFile);
    }
    CHECK(code_of([] { load_spec_file("/nonexistent/spec.json"); }) == ErrorCode::InvalidSpecFile);
    CHECK(code_of([] {
              spec_from_json(json::parse(
                  R"({"surface": {"kind": "clifford-torus", "r": 0.5}, "construction": "cylinder", "n": 4})"));
          }) == ErrorCode::SurfaceModelMismatch);
    CHECK(code_of([] { spec_from_json(json::parse(R"({"entry": "nope"})")); }) == ErrorCode::UnknownCatalogEntry);
}

TEST_CASE("cli catalog") {
    const Run text = cli({"catalog"});
    CHECK(text.code == 0);
    for (const char* name : {"cone-clifford", "rot-hypcyl", "cyl-spiral"}) CHECK(text.out.find(name) != std::string::npos);

    const Run js = cli({"catalog", "--json"});
    REQUIRE(js.code == 0);
    const json listing = json::parse(js.out);
    REQUIRE(listing.is_array());
    CHECK(listing.size() == catalog_entries().size());
    for (const auto& e : listing) {
        CHECK(e.contains("name"));
        CHECK(e.contains("params"));
        CHECK(e.contains("branch"));
    }

    CHECK(cli({"catalog", "--bogus"}).code == exit_code::kUsage);
    CHECK(cli({}).code == exit_code::kUsage);
}

TEST_CASE("cli exit codes") {
    CHECK(cli({"verify", "cone-clifford?r=0.7071&n=4", "--samples", "32", "--seed", "7"}).code == 0);
    CHECK(cli({"verify", data("perturbed_clifford_cone.json"), "--samples", "10"}).code == 1);
    CHECK(cli({"verify", "cone-clifford", "--samples", "1"}).code == 2);
    CHECK(cli({"classify"}).code == 2);
    CHECK(cli({"classify", "nope"}).code == 2);
    CHECK(cli({"classify", "cone?k=9&n=4"}).code == 2);
    CHECK(cli({"classify", "cone?zz=1"}).code == 2);
    CHECK(cli({"classify", "graph", "--samples", "10"}).code == 1);
    CHECK(cli({"classify", "graph", "--samples", "ten"}).code == 2);
    CHECK(cli({"classify", temp_file("moebiuslab_bad_spec.json", "{oops")}).code == 2);

    const Run rot = cli({"classify", "rot-hypcyl?r=1&n=5", "--json", "--samples", "10"});
    CHECK(rot.code == 0);
    CHECK(json::parse(rot.out).at("branch") == branch::kRotHypCylinder);

    const Run torus = cli({"classify", "torus?k=2&n=4&r=0.6", "--samples", "10"});
    CHECK(torus.code == 0);
    CHECK(torus.out.find(branch::kTwoCurvIII) != std::string::npos);
}

TEST_CASE("cli reports are byte-identical and round-trip") {
    const std::vector<std::string> args = {"verify", "rot-hypcyl?r=0.5&n=4", "--json", "--samples", "10", "--seed", "11"};
    const Run a = cli(args);
    const Run b = cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(serialize(parse_report(a.out)) == a.out);

    const auto path = (std::filesystem::temp_directory_path() / "moebiuslab_report.json").string();
    const Run c = cli({"classify", "cylinder", "--samples", "10", "--out", path});
    CHECK(c.code == 0);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    const RunReport r = parse_report(ss.str());
    CHECK(r.command == "classify");
    CHECK(r.classification.branch == branch::kTwoCurvI);
    CHECK(r.classification.config.point_count == 10);
    CHECK(std::isnan(r.wall_time_s));

    const Run t = cli({"classify", "cylinder", "--samples", "10", "--json", "--timing"});
    CHECK(parse_report(t.out).wall_time_s >= 0.0);
}
