// end-to-end acceptance run: one PASS/FAIL line per criterion, tolerances fixed below
#include "paracontrol/commands.hpp"
#include "paracontrol/enhanced_drift.hpp"
#include "paracontrol/harness.hpp"
#include "paracontrol/mcsim.hpp"
#include "paracontrol/pde.hpp"
#include "paracontrol/report.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace paracontrol;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget;  // seconds, 0 = none
    std::function<Outcome()> run;
};

std::string fmt(double v, const char* f = "%.3g")
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double rel_linf(const TimeField& a, const TimeField& b) { return time_sup_norm(a - b) / time_sup_norm(b); }

ExperimentConfig config(const std::string& command, std::uint64_t seed, json params = json::object())
{
    return resolve_config({{"command", command}, {"seed", seed}, {"params", std::move(params)}}, command_schemas());
}

BackwardData data_for(const TimeField& f, const PeriodicField& terminal, double T, double theta)
{
    BackwardData d;
    d.f = Forcing::from_field(f);
    d.terminal = terminal;
    d.horizon = T;
    d.theta = theta;
    return d;
}

std::string failed_names(const Report& r)
{
    std::string s;
    for (const auto& a : r.assertions)
        if (!a.passed)
            s += "; failed: " + a.name + " = " + fmt(a.value);
    return s;
}

// every reconstruction residual seen by the run, for criterion 7
std::vector<std::pair<std::string, double>> residuals;

Outcome bony()
{
    const double tol = 1e-10;
    double worst = 0.0;
    int pairs = 0;
    for (int n : {64, 256}) {
        const FourierGrid g(n);
        std::mt19937_64 rng(7000 + n);
        for (int rep = 0; rep < 100; ++rep, ++pairs) {
            const PeriodicField u = testutil::random_field(g, rng), v = testutil::random_field(g, rng);
            const Paraproducts p = paraproducts(u, v);
            const PeriodicField exact = oracle::convolution(u, v);
            worst = std::max(worst, sup_norm(p.less + p.resonant + p.greater - exact) / sup_norm(exact));
        }
    }
    return {worst <= tol, std::to_string(pairs) + " pairs, worst relative error " + fmt(worst) + " <= " + fmt(tol)};
}

Outcome constants(const std::vector<ConstantProbe>& probes)
{
    Outcome o{true, ""};
    for (const auto& p : probes) {
        o.ok = o.ok && p.pass;
        o.detail += (o.detail.empty() ? "" : ", ") + p.name + " growth " + fmt(p.growth) + " <= " + fmt(p.limit);
    }
    return o;
}

Outcome paraproduct_constants()
{
    ParaproductSettings s;
    s.sizes = {64, 128, 256, 512};
    s.seeds = 50;
    s.seed = 21;
    return constants(paraproduct_probe(s));
}

Outcome schauder()
{
    SchauderSettings s;
    s.alpha = 1.8;
    s.N = 1024;
    s.t_min = 1e-5;
    s.t_max = 1e-3;
    Outcome o{true, ""};
    for (const auto& p : schauder_probe(s)) {
        const bool ok = std::abs(p.fit.slope - p.target) <= 0.05;
        o.ok = o.ok && ok;
        o.detail += (o.detail.empty() ? "" : ", ") + p.name + " " + fmt(p.fit.slope, "%.4f") + " vs " +
                    fmt(p.target, "%.4f");
    }
    o.detail += " (tolerance 0.05, two decades)";
    return o;
}

Outcome commutators()
{
    CommutatorSettings s;
    s.seeds = 20;
    s.seed = 41;
    return constants(commutator_probe(s));
}

Outcome young()
{
    const int N = 256, M = 256;
    const double alpha = 1.5, T = 1.0, beta = 0.5;
    const FourierGrid g(N);
    const MultiplierCache cache(StableSymbol::fractional_laplacian(alpha), g);
    const auto times = uniform_times(T, M);
    const TimeField v = benchmark_drift(g, times, 2.0);
    const TimeField f = benchmark_forcing(g, times);
    const PeriodicField uT = PeriodicField::cosine(g, {2, 0}) + PeriodicField::sine(g, {1, 0}, 0.4);
    const double theta = default_theta_young(beta, alpha);
    const YoungSolution y = solve_young(young_drift(v, beta, alpha), cache, data_for(f, uT, T, theta));
    const double e1 = rel_linf(y.u, classical_solve(v, cache, data_for(f, uT, T, 1.0)));

    // u*(t, x) = exp(-t) cos 2 pi x, forcing built from the equation
    const double p1 = cache.psi()(1);
    std::vector<PeriodicField> us, fs;
    for (std::size_t k = 0; k < times.size(); ++k) {
        us.push_back(std::exp(-times[k]) * PeriodicField::cosine(g, {1, 0}));
        PeriodicField fk = (-1.0 - p1) * us.back();
        fk += product(v[k], derivative(us.back(), 0));
        fs.push_back(fk);
    }
    const TimeField ustar(times, us), fm(times, fs);
    const double e2 = rel_linf(classical_solve(v, cache, data_for(fm, us.back(), T, 1.0)), ustar);
    const double e3 = rel_linf(solve_young(young_drift(v, beta, alpha), cache, data_for(fm, us.back(), T, theta)).u,
                               ustar);
    return {e1 <= 1e-3 && e2 <= 1e-4 && e3 <= 1e-4, "Young vs classical " + fmt(e1) + " <= 1e-3; manufactured: classical " +
                                                        fmt(e2) + ", Young " + fmt(e3) + " <= 1e-4"};
}

Outcome rough_agreement()
{
    const Report r = run_command(config("solve-rough", 51));
    residuals.push_back({"smooth drift", r.results["diagnostics"]["reconstruction_residual"].get<double>()});
    const Report d = run_command(config("solve-rough", 51, {{"forcing", "drift"}, {"N", 64}, {"M", 64}}));
    residuals.push_back({"smooth drift, f = V1", d.results["diagnostics"]["reconstruction_residual"].get<double>()});
    const double a = r.results["relative_error_vs_classical"], b = r.results["relative_error_vs_young"],
                 c = r.results["young_vs_classical"];
    return {a <= 1e-3 && b <= 1e-3 && c <= 1e-3, "rough-classical " + fmt(a) + ", rough-Young " + fmt(b) +
                                                     ", Young-classical " + fmt(c) + " <= 1e-3"};
}

Outcome chaos()
{
    const StableSymbol sym = StableSymbol::fractional_laplacian(1.9);
    double worst = 0.0;
    for (int j : {-1, 0, 1, 2, 3})
        for (auto [s, t] : {std::pair{0.9, 0.99}, std::pair{0.98, 0.999}, std::pair{0.5, 0.999}}) {
            const double w = oracle::wick_variance(sym, j, s, t, 4, 1.0, 4, 0.31);
            const double o = chaos_variance_oracle(sym, j, s, t, 4, 1.0, 4);
            worst = std::max(worst, std::abs(o - w) / std::max(std::abs(w), 1e-300));
        }
    const ChaosCheck mc = chaos_monte_carlo(1.9, 3, 0.995, 0.999, 32, 128, 10000, 61);
    return {worst <= 1e-10 && std::abs(mc.z) <= 3.0,
            "n = 4 Wick relative error " + fmt(worst) + " <= 1e-10; n = 32 Monte Carlo |z| " + fmt(std::abs(mc.z)) +
                " <= 3 (10^4 seeds)"};
}

Outcome cauchy()
{
    const CauchyReport r = cauchy_decay(1.9, 20, 71);
    std::string d = "decreasing for " + std::to_string(int(std::lround(r.fraction * 20))) + "/20 seeds, need >= 90%";
    if (!r.rows.empty()) {
        d += "; seed " + std::to_string(r.rows[0].seed) + " diffs";
        for (double x : r.rows[0].diffs)
            d += " " + fmt(x);
    }
    return {r.fraction >= 0.9, d};
}

Outcome report_pass(const std::string& command, std::uint64_t seed, json params, const std::string& what)
{
    const Report r = run_command(config(command, seed, std::move(params)));
    std::size_t ok = 0;
    for (const auto& a : r.assertions)
        ok += a.passed;
    return {r.pass(), what + ": " + std::to_string(ok) + "/" + std::to_string(r.assertions.size()) +
                          " assertions" + failed_names(r)};
}

Outcome stable()
{
    return report_pass("stable-check", 81, {{"samples", 100000}},
                       "characteristic function |z| <= 3 at 3 frequencies, KS p >= 0.01 at factors 2, 4");
}

Outcome campbell()
{
    return report_pass("campbell-check", 91, {{"samples", 100000}},
                       "tables exact for n <= 3, Monte Carlo |z| <= 3 for n <= 3");
}

Outcome martingale()
{
    auto run = [](const std::string& mode) {
        return run_command(config("martingale-test", 101, {{"mode", mode}, {"paths", 100000}}))
            .results["martingale"]["max_abs_z"]
            .get<double>();
    };
    const double free = run("free"), matched = run("matched"), corrupted = run("corrupted");
    return {free <= 3.0 && matched <= 3.0 && corrupted >= 5.0,
            "max |z|: free " + fmt(free) + " <= 3, matched " + fmt(matched) + " <= 3, corrupted " + fmt(corrupted) +
                " >= 5"};
}

Outcome moments()
{
    const Report r = run_command(config("moment-scaling", 111));
    std::string d = "slope >= theta rho / alpha - 0.15, prefactor growth over n <= 2:";
    for (const auto& row : r.tables.at("slopes").rows)
        d += " (n " + row[0].dump() + ", rho " + row[1].dump() + ") " + fmt(row[2].get<double>(), "%.3f") + " >= " +
             fmt(row[5].get<double>(), "%.3f") + " C " + fmt(row[6].get<double>());
    return {r.pass(), d + failed_names(r)};
}

Outcome brox()
{
    Outcome o{true, ""};
    for (double alpha : {1.9, 2.0}) {
        const BroxReport r = brox_demo(121, alpha);
        for (const auto& a : r.assertions)
            if (a.name.find("reconstruction") != std::string::npos)
                residuals.push_back({"brox alpha " + fmt(alpha) + ", " + a.name, a.value});
        std::size_t ok = 0;
        for (const auto& a : r.assertions)
            ok += a.passed;
        o.ok = o.ok && r.pass();
        o.detail += "alpha " + fmt(alpha) + ": " + std::to_string(ok) + "/" + std::to_string(r.assertions.size()) + "; ";
        for (const auto& a : r.assertions)
            if (!a.passed)
                o.detail += "failed " + a.name + " = " + fmt(a.value) + "; ";
    }
    bool refused = false;
    try {
        brox_demo(121, 1.6);
    } catch (const RefusedParameter&) {
        refused = true;
    }
    o.ok = o.ok && refused;
    o.detail += refused ? "alpha 1.6 refused" : "alpha 1.6 NOT refused";
    return o;
}

Outcome reconstruction()
{
    const Report w = run_command(config("solve-rough", 131, {{"alpha", 1.9}, {"drift", "white-noise"}, {"forcing", "drift"}}));
    residuals.push_back({"white-noise drift", w.results["diagnostics"]["reconstruction_residual"].get<double>()});
    double worst = 0.0;
    for (const auto& [name, r] : residuals)
        worst = std::max(worst, r);
    return {!residuals.empty() && worst <= 1e-8,
            std::to_string(residuals.size()) + " rough solves, worst residual " + fmt(worst) + " <= 1e-8"};
}

std::string slurp(const fs::path& p)
{
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

Outcome determinism()
{
    const fs::path root = fs::temp_directory_path() / "paracontrol_acceptance";
    fs::remove_all(root);
    const std::vector<std::string> runs = {
        "brox-demo --seed 5 --param N=32 --param M=32 --param paths=2000 --param steps=128 --param levels=[4,8,15]",
        "martingale-test --seed 5 --param paths=5000 --param steps=128",
        "lift-white-noise --seed 5 --param N=64 --param n=31",
        "stable-check --seed 5 --param samples=5000"};
    std::size_t files = 0;
    for (int k = 0; k < 2; ++k)
        for (const auto& r : runs) {
            const std::string cmd = std::string(PARACONTROL_CLI) + " " + r + " --quiet --out " +
                                    (root / std::to_string(k)).string() + " > /dev/null";
            const int rc = std::system(cmd.c_str());
            if (rc == -1 || WEXITSTATUS(rc) >= 2)
                return {false, "run failed: " + r};
        }
    bool same = true;
    for (const auto& e : fs::directory_iterator(root / "0")) {
        ++files;
        const fs::path other = root / "1" / e.path().filename();
        same = same && fs::exists(other) && slurp(e.path()) == slurp(other);
    }
    std::size_t files1 = std::distance(fs::directory_iterator(root / "1"), fs::directory_iterator{});
    same = same && files == files1 && files > 0;
    fs::remove_all(root);
    return {same, std::to_string(files) + " report files from 4 commands compared byte for byte across two processes"};
}

}  // namespace

int main()
{
    const std::vector<Criterion> all = {
        {1, "Bony reconstruction", 10, bony},
        {2, "paraproduct constants", 120, paraproduct_constants},
        {3, "Schauder slopes", 60, schauder},
        {4, "commutator ratios", 120, commutators},
        {5, "Young solver vs classical and manufactured solution", 60, young},
        {6, "rough solver three-way agreement", 120, rough_agreement},
        {8, "chaos oracle", 300, chaos},
        {9, "white-noise lift Cauchy decay", 300, cauchy},
        {10, "stable sampler", 60, stable},
        {11, "Campbell moments", 120, campbell},
        {12, "martingale test", 600, martingale},
        {13, "moment scaling", 600, moments},
        {14, "Brox demo", 1200, brox},
        {7, "paracontrolled reconstruction", 0, reconstruction},
        {15, "determinism", 0, determinism},
    };
    std::map<int, std::string> lines;
    int failed = 0;
    for (const auto& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = c.budget <= 0 || secs <= c.budget;
        const bool ok = o.ok && in_time;
        failed += !ok;
        std::string line = (ok ? "PASS " : "FAIL ") + std::string(c.id < 10 ? " " : "") + std::to_string(c.id) + " " +
                           c.name + ": " + o.detail + " [" + fmt(secs, "%.1f") + " s" +
                           (c.budget > 0 ? " / " + fmt(c.budget, "%.0f") + " s" : "") + "]";
        std::cout << line << std::endl;
        lines[c.id] = line;
    }
    std::cout << "\nsummary\n";
    for (const auto& [id, l] : lines)
        std::cout << l.substr(0, 5) << (id < 10 ? " " : "") << id << "\n";
    std::cout << (15 - failed) << "/15 criteria passed\n";
    return failed == 0 ? 0 : 1;
}
