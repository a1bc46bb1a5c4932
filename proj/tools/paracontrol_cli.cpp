#include "paracontrol/commands.hpp"
#include "paracontrol/config.hpp"
#include "paracontrol/mcsim.hpp"
#include "paracontrol/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

using namespace paracontrol;
using nlohmann::json;

namespace {

void print_list()
{
    for (const auto& s : command_schemas()) {
        std::cout << s.name << "\n    " << s.summary << "\n";
        for (const auto& f : s.params) {
            std::cout << "    --param " << f.name << "=" << f.default_value.dump();
            const std::string iv = f.interval();
            if (!iv.empty())
                std::cout << "  in " << iv;
            if (!f.choices.empty()) {
                std::cout << "  one of {";
                for (std::size_t i = 0; i < f.choices.size(); ++i)
                    std::cout << (i ? ", " : "") << f.choices[i];
                std::cout << "}";
            }
            std::cout << "  " << f.help << "\n";
        }
    }
}

json load_config(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw ConfigError("--config", "cannot open " + path);
    json doc = json::parse(is, nullptr, false);
    if (doc.is_discarded())
        throw ConfigError("--config", path + " is not valid JSON");
    return doc;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"paracontrolled solvers and Monte Carlo checks for stable-driven SDEs with distributional drift"};
    app.set_version_flag("--version", "paracontrol 0.1");
    std::vector<std::string> positional;
    bool list = false, quiet = false;
    std::string config_path, out;
    std::optional<std::uint64_t> seed;
    std::optional<double> alpha;
    std::vector<std::string> params;
    app.add_option("command", positional, "[run] <command>")->expected(0, 2);
    app.add_flag("--list", list, "list commands and their parameters");
    app.add_option("--config", config_path, "JSON config {command, seed, out, params}");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--out", out, "output directory (default out)");
    app.add_option("--alpha", alpha, "shorthand for --param alpha=A");
    app.add_option("--param", params, "key=value parameter override (repeatable)");
    app.add_flag("-q,--quiet", quiet, "print only the verdict");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    if (list) {
        print_list();
        return 0;
    }
    try {
        json doc = config_path.empty() ? json::object() : load_config(config_path);
        if (!positional.empty() && positional[0] == "run")
            positional.erase(positional.begin());
        if (positional.size() > 1)
            throw ConfigError("command", "expected one command, got " + std::to_string(positional.size()));
        if (!positional.empty())
            doc["command"] = positional[0];
        if (seed)
            doc["seed"] = *seed;
        if (!out.empty())
            doc["out"] = out;
        if (!doc.contains("params"))
            doc["params"] = json::object();
        if (alpha)
            doc["params"]["alpha"] = *alpha;
        for (const auto& p : params) {
            const auto eq = p.find('=');
            if (eq == std::string::npos || eq == 0)
                throw ConfigError("--param", "expected key=value, got '" + p + "'");
            doc["params"][p.substr(0, eq)] = parse_param_value(p.substr(eq + 1));
        }
        const ExperimentConfig cfg = resolve_config(doc, command_schemas());
        const Report r = run_command(cfg);
        const auto files = write_report(r, cfg.out);
        if (!quiet) {
            for (const auto& a : r.assertions)
                std::cout << (a.passed ? "PASS " : "FAIL ") << a.name << ": " << format_double(a.value) << " "
                          << a.relation << " " << format_double(a.tolerance) << "\n";
            for (const auto& f : files)
                std::cout << "wrote " << f.string() << "\n";
        }
        std::cout << cfg.command << ": " << (r.pass() ? "PASS" : "FAIL") << " (" << r.content_hash() << ")\n";
        return r.pass() ? 0 : 1;
    } catch (const RefusedParameter& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
