#include "paracontrol/commands.hpp"
#include "paracontrol/config.hpp"
#include "paracontrol/report.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace paracontrol;
using nlohmann::json;

namespace {

std::string error_of(const json& doc)
{
    try {
        resolve_config(doc, command_schemas());
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("every schema resolves with defaults only")
{
    REQUIRE(command_schemas().size() == 13);
    for (const auto& s : command_schemas()) {
        CAPTURE(s.name);
        const ExperimentConfig c = resolve_config({{"command", s.name}}, command_schemas());
        CHECK(c.seed == 0);
        CHECK(c.out == "out");
        CHECK(c.params.size() == s.params.size());
        for (const auto& f : s.params)
            CHECK(c.params.contains(f.name));
    }
}

TEST_CASE("schema violations name the field and the interval")
{
    const std::string e = error_of({{"command", "stable-check"}, {"params", {{"alpha", 2.5}}}});
    CHECK(e.find("params.alpha") != std::string::npos);
    CHECK(e.find("(0, 2]") != std::string::npos);
    CHECK(error_of({{"command", "stable-check"}, {"params", {{"alpha", 0.0}}}}).find("params.alpha") == 0);
    CHECK(error_of({{"command", "stable-check"}, {"params", {{"alpha", 2.0}}}}).empty());
    CHECK(error_of({{"command", "nope"}}).find("command") == 0);
    CHECK(error_of({{"command", "simulate"}, {"colour", 1}}).find("colour") == 0);
    CHECK(error_of({{"command", "simulate"}, {"params", {{"nope", 1}}}}).find("params.nope") == 0);
    CHECK(error_of({{"command", "simulate"}, {"params", {{"paths", 1000.5}}}}).find("params.paths") == 0);
    CHECK(error_of({{"command", "simulate"}, {"params", {{"drift", "wavy"}}}}).find("params.drift") == 0);
    CHECK(error_of({{"command", "simulate"}, {"params", {{"uniform_start", 1}}}}).find("params.uniform_start") == 0);
    CHECK(error_of({{"command", "paraproduct-probe"}, {"params", {{"sizes", {64, 4.5}}}}}).find("params.sizes[1]") ==
          0);
    CHECK(error_of({{"command", "paraproduct-probe"}, {"params", {{"sizes", json::array()}}}}).find("params.sizes") ==
          0);
    CHECK(error_of({{"command", "simulate"}, {"seed", -1}}).find("seed") == 0);
    CHECK(error_of({{"command", "simulate"}, {"out", ""}}).find("out") == 0);
}

TEST_CASE("semantic checks inside commands are usage errors")
{
    auto cfg = resolve_config({{"command", "schauder-probe"}, {"params", {{"N", 100}}}}, command_schemas());
    CHECK_THROWS_AS(run_command(cfg), ConfigError);
    cfg = resolve_config({{"command", "schauder-probe"}, {"params", {{"t_min", 1e-4}, {"t_max", 1e-3}}}},
                         command_schemas());
    CHECK_THROWS_AS(run_command(cfg), ConfigError);
    cfg = resolve_config({{"command", "solve-rough"}, {"params", {{"drift", "white-noise"}}}}, command_schemas());
    CHECK_THROWS_WITH_AS(run_command(cfg), doctest::Contains("params.epsilon"), ConfigError);
    cfg = resolve_config({{"command", "solve-young"}, {"params", {{"beta", -0.3}}}}, command_schemas());
    CHECK_THROWS_AS(run_command(cfg), ConfigError);
}

TEST_CASE("parameter text parsing")
{
    CHECK(parse_param_value("1.5") == json(1.5));
    CHECK(parse_param_value("7") == json(7));
    CHECK(parse_param_value("true") == json(true));
    CHECK(parse_param_value("[1,2]") == json({1, 2}));
    CHECK(parse_param_value("white-noise") == json("white-noise"));
    CHECK(parse_param_value("{\"a\":1}").is_string());
}

TEST_CASE("float formatting round-trips")
{
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5e-300) == "-2.5e-300");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -1e-310})
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
}

TEST_CASE("json and csv rendering")
{
    const json j = {{"b", 0.1}, {"a", {1, std::numeric_limits<double>::infinity()}}, {"c", json::object()}};
    CHECK(render_json(j) == "{\n  \"a\": [\n    1,\n    null\n  ],\n  \"b\": 0.10000000000000001,\n  \"c\": {}\n}\n");

    Table t{{"x", "label"}, {}};
    CHECK(render_csv(t) == "x,label\n");
    t.add({0.5, "a,b"});
    t.add({2, "say \"hi\""});
    CHECK(render_csv(t) == "x,label\n0.5,\"a,b\"\n2,\"say \"\"hi\"\"\"\n");
    CHECK_THROWS_AS(t.add({1}), std::invalid_argument);
}

TEST_CASE("assertions")
{
    CHECK(make_assertion("a", 1.0, "<=", 1.0).passed);
    CHECK_FALSE(make_assertion("a", 1.5, "<=", 1.0).passed);
    CHECK(make_assertion("a", 2.0, ">=", 1.0).passed);
    CHECK_FALSE(make_assertion("a", std::numeric_limits<double>::quiet_NaN(), ">=", 1.0).passed);
    CHECK_THROWS_AS(make_assertion("a", 1.0, "<", 1.0), std::invalid_argument);
    Report r;
    CHECK(r.pass());
    r.assertions.push_back(make_assertion("a", 2.0, "<=", 1.0));
    CHECK_FALSE(r.pass());
}

TEST_CASE("fnv1a reference values")
{
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
    CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("martingale report has one row per pair and functional")
{
    const auto cfg = resolve_config(
        {{"command", "martingale-test"}, {"seed", 4}, {"params", {{"mode", "free"}, {"paths", 2000}, {"steps", 128}}}},
        command_schemas());
    const Report r = run_command(cfg);
    const Table& t = r.tables.at("rows");
    CHECK(t.rows.size() == 9);
    CHECK(t.columns.size() == 8);
    CHECK(r.results["martingale"].contains("max_abs_z"));
    REQUIRE(r.assertions.size() == 1);
}

TEST_CASE("reports are deterministic and embed the config without the output path")
{
    const json doc = {{"command", "stable-check"}, {"seed", 11}, {"out", "x"}, {"params", {{"samples", 2000}}}};
    const Report a = run_command(resolve_config(doc, command_schemas()));
    json doc2 = doc;
    doc2["out"] = "y";
    const Report b = run_command(resolve_config(doc2, command_schemas()));
    CHECK(a.content_hash() == b.content_hash());
    CHECK(render_json(a.to_json()) == render_json(b.to_json()));
    CHECK_FALSE(a.config.contains("out"));
    CHECK(a.config["seed"] == 11);
    doc2["seed"] = 12;
    const Report c = run_command(resolve_config(doc2, command_schemas()));
    CHECK(a.content_hash() != c.content_hash());
}

TEST_CASE("write_report writes json plus one csv per table")
{
    const auto dir = std::filesystem::temp_directory_path() / "paracontrol_cli_test";
    std::filesystem::remove_all(dir);
    const Report r = run_command(resolve_config(
        {{"command", "simulate"}, {"params", {{"paths", 1000}, {"steps", 64}, {"dump_paths", 2}}}}, command_schemas()));
    const auto files = write_report(r, dir);
    REQUIRE(files.size() == 3);
    for (const auto& f : files)
        CHECK(std::filesystem::exists(f));
    for (const auto& e : std::filesystem::directory_iterator(dir))
        CHECK(e.path().extension() != ".tmp");
    const json back = json::parse(slurp(dir / "simulate.json"));
    CHECK(back["content_hash"] == r.content_hash());
    CHECK(back["pass"] == true);
    const std::string csv = slurp(dir / "simulate_paths.csv");
    CHECK(csv.rfind("path,t,x\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 3);
    std::filesystem::remove_all(dir);
}

TEST_CASE("smooth solves agree through the command layer")
{
    const Report y = run_command(resolve_config({{"command", "solve-young"}}, command_schemas()));
    CHECK(y.pass());
    CHECK(y.results["relative_error_vs_classical"].get<double>() <= 1e-3);
    const Report z = run_command(
        resolve_config({{"command", "solve-young"}, {"params", {{"drift_amplitude", 0.0}}}}, command_schemas()));
    CHECK(z.results["relative_error_vs_classical"].get<double>() <= 1e-12);
}

}
