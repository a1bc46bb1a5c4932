#include "paracontrol/commands.hpp"

#include "paracontrol/enhanced_drift.hpp"
#include "paracontrol/field_io.hpp"
#include "paracontrol/harness.hpp"
#include "paracontrol/levy.hpp"
#include "paracontrol/mcsim.hpp"
#include "paracontrol/pde.hpp"
#include "paracontrol/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

namespace paracontrol {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

// ------------------------------------------------------------ schema helpers

FieldSpec num(std::string name, double def, std::optional<double> lo, std::optional<double> hi, bool lo_open,
              bool hi_open, std::string help)
{
    FieldSpec f;
    f.name = std::move(name);
    f.kind = FieldKind::Number;
    f.default_value = def;
    f.lo = lo;
    f.hi = hi;
    f.lo_open = lo_open;
    f.hi_open = hi_open;
    f.help = std::move(help);
    return f;
}

FieldSpec positive(std::string name, double def, std::string help)
{
    return num(std::move(name), def, 0.0, std::nullopt, true, false, std::move(help));
}

FieldSpec integer(std::string name, long def, std::optional<double> lo, std::optional<double> hi, std::string help)
{
    FieldSpec f = num(std::move(name), 0.0, lo, hi, false, false, std::move(help));
    f.kind = FieldKind::Integer;
    f.default_value = def;
    return f;
}

FieldSpec boolean(std::string name, bool def, std::string help)
{
    FieldSpec f;
    f.name = std::move(name);
    f.kind = FieldKind::Boolean;
    f.default_value = def;
    f.help = std::move(help);
    return f;
}

FieldSpec choice(std::string name, std::string def, std::vector<std::string> choices, std::string help)
{
    FieldSpec f;
    f.name = std::move(name);
    f.kind = FieldKind::String;
    f.default_value = std::move(def);
    f.choices = std::move(choices);
    f.help = std::move(help);
    return f;
}

FieldSpec int_list(std::string name, std::vector<int> def, std::optional<double> lo, std::optional<double> hi,
                   std::string help)
{
    FieldSpec f = integer(std::move(name), 0, lo, hi, std::move(help));
    f.kind = FieldKind::IntegerList;
    f.default_value = def;
    return f;
}

FieldSpec num_list(std::string name, std::vector<double> def, std::optional<double> lo, std::optional<double> hi,
                   bool lo_open, std::string help)
{
    FieldSpec f = num(std::move(name), 0.0, lo, hi, lo_open, false, std::move(help));
    f.kind = FieldKind::NumberList;
    f.default_value = def;
    return f;
}

FieldSpec alpha_field(double def, double lo = 0.0) { return num("alpha", def, lo, 2.0, true, false, "stability index"); }
FieldSpec grid_field(long def) { return integer("N", def, 8, 8192, "Fourier modes per axis (power of two)"); }

// ------------------------------------------------------------------ helpers

Report start(const ExperimentConfig& c)
{
    Report r;
    r.command = c.command;
    r.config = {{"command", c.command}, {"seed", c.seed}, {"params", c.params}};
    return r;
}

template <class T>
std::vector<T> list(const ExperimentConfig& c, const std::string& key)
{
    return c.params.at(key).get<std::vector<T>>();
}

int power_of_two(const ExperimentConfig& c, const std::string& key = "N")
{
    const long n = c.integer(key);
    if (n < 8 || (n & (n - 1)) != 0)
        throw ConfigError("params." + key, "must be a power of two >= 8, got " + std::to_string(n));
    return int(n);
}

double rel_linf(const TimeField& a, const TimeField& b)
{
    const double s = time_sup_norm(b);
    return time_sup_norm(a - b) / (s > 0.0 ? s : 1.0);
}

BackwardData backward(const TimeField& f, const PeriodicField& terminal, double T, double theta)
{
    BackwardData d;
    d.f = Forcing::from_field(f);
    d.terminal = terminal;
    d.horizon = T;
    d.theta = theta;
    return d;
}

void snapshot_table(Report& r, const TimeField& u)
{
    Table t{{"t", "x", "u"}, {}};
    const std::size_t last = u.size() - 1;
    const int n = u.grid().modes();
    for (std::size_t k : {std::size_t(0), last / 2, last})
        for (int i = 0; i < n; ++i) {
            const double x = double(i) / n;
            t.add({u.times()[k], x, u[k].evaluate(x).real()});
        }
    r.tables["snapshots"] = std::move(t);
}

void add_martingale_rows(Table& t, int n, const MartingaleReport& m)
{
    for (const auto& row : m.rows)
        t.add({n, row.r, row.t, row.functional, row.estimate.mean, row.estimate.se, row.estimate.z(), row.pass});
}

Table martingale_table() { return Table{{"n", "r", "t", "functional", "estimate", "se", "z", "pass"}, {}}; }

// ---------------------------------------------------------------- commands

Report schauder_probe_cmd(const ExperimentConfig& c)
{
    Report r = start(c);
    SchauderSettings s;
    s.alpha = c.number("alpha");
    s.beta = c.number("beta");
    s.N = power_of_two(c);
    s.t_min = c.number("t_min");
    s.t_max = c.number("t_max");
    s.points = int(c.integer("points"));
    s.M = int(c.integer("M"));
    if (!(s.t_max > s.t_min))
        throw ConfigError("params.t_max", "must exceed t_min");
    if (std::log10(s.t_max / s.t_min) < 2.0 - 1e-12)
        throw ConfigError("params.t_max", "the sweep must span at least two decades");
    const auto probes = schauder_probe(s);
    Table slopes{{"probe", "parameter", "target", "slope", "r2", "tolerance", "pass"}, {}};
    Table values{{"probe", "parameter", "value", "norm"}, {}};
    r.results["probes"] = json::array();
    for (const auto& p : probes) {
        r.results["probes"].push_back(p.to_json());
        slopes.add({p.name, p.parameter, p.target, p.fit.slope, p.fit.r2, p.tolerance, p.pass});
        for (std::size_t i = 0; i < p.params.size(); ++i)
            values.add({p.name, p.parameter, p.params[i], p.values[i]});
        r.assertions.push_back(make_assertion("|slope - target|, " + p.name, std::abs(p.fit.slope - p.target), "<=",
                                              p.tolerance));
    }
    r.tables["slopes"] = std::move(slopes);
    r.tables["values"] = std::move(values);
    return r;
}

void constant_tables(Report& r, const std::vector<ConstantProbe>& probes)
{
    Table t{{"probe", "parameter", "value", "mean", "max"}, {}};
    r.results["probes"] = json::array();
    for (const auto& p : probes) {
        r.results["probes"].push_back(p.to_json());
        for (std::size_t i = 0; i < p.params.size(); ++i)
            t.add({p.name, p.parameter, p.params[i], p.mean[i], p.max[i]});
        r.assertions.push_back(make_assertion("growth of the realized constant, " + p.name, p.growth, "<=", p.limit));
    }
    r.tables["constants"] = std::move(t);
}

Report paraproduct_probe_cmd(const ExperimentConfig& c)
{
    Report r = start(c);
    ParaproductSettings s;
    s.sizes = list<int>(c, "sizes");
    for (std::size_t i = 0; i < s.sizes.size(); ++i)
        if (s.sizes[i] < 8 || (s.sizes[i] & (s.sizes[i] - 1)) != 0)
            throw ConfigError("params.sizes[" + std::to_string(i) + "]", "must be a power of two >= 8");
    s.seeds = int(c.integer("seeds"));
    s.seed = c.seed;
    constant_tables(r, paraproduct_probe(s));
    return r;
}

Report commutator_probe_cmd(const ExperimentConfig& c)
{
    Report r = start(c);
    CommutatorSettings s;
    s.alpha = c.number("alpha");
    s.N = power_of_two(c);
    s.M = int(c.integer("M"));
    s.seeds = int(c.integer("seeds"));
    s.seed = c.seed;
    s.sigma = c.number("sigma");
    s.varsigma = c.number("varsigma");
    s.gamma = c.number("gamma");
    s.beta = c.number("beta");
    s.vartheta = c.number("vartheta");
    s.windows = list<double>(c, "windows");
    s.times = list<double>(c, "times");
    if (1.0 - (s.sigma + 1.0 - s.varsigma) / s.alpha <= 0.0)
        throw ConfigError("params.varsigma", "need sigma - varsigma + 1 < alpha");
    constant_tables(r, commutator_probe(s));
    return r;
}

Report solve_young_cmd(const ExperimentConfig& c)
{
    Report r = start(c);
    const int N = power_of_two(c);
    const int M = int(c.integer("M"));
    const double alpha = c.number("alpha"), T = c.number("horizon"), beta = c.number("beta");
    if (!(beta > (1.0 - alpha) / 2.0))
        throw ConfigError("params.beta", "the Young regime needs beta > (1 - alpha) / 2 = " +
                                             format_double((1.0 - alpha) / 2.0));
    const FourierGrid g(N);
    const MultiplierCache cache(StableSymbol::fractional_laplacian(alpha), g);
    const auto times = uniform_times(T, M);
    const TimeField eta = benchmark_drift(g, times, c.number("drift_amplitude"));
    const TimeField f = c.params["forcing"] == "zero" ? TimeField::constant(times, PeriodicField(g))
                                                      : benchmark_forcing(g, times);
    const PeriodicField uT = PeriodicField::cosine(g, {1, 0}) + PeriodicField::sine(g, {3, 0}, 0.2);
    const YoungSolution y = solve_young(young_drift(eta, beta, alpha), cache,
                                        backward(f, uT, T, default_theta_young(beta, alpha)));
    const TimeField ref = classical_solve(eta, cache, backward(f, uT, T, 1.0));
    const double err = rel_linf(y.u, ref);
    r.results["diagnostics"] = y.diagnostics.to_json();
    r.results["relative_error_vs_classical"] = err;
    r.results["sup_norm"] = time_sup_norm(y.u);
    r.results["u0"] = field_to_json(y.u[0]);
    r.assertions.push_back(make_assertion("relative L^inf distance to the classical solve", err, "<=", 1e-3));
    snapshot_table(r, y.u);
    return r;
}

Report solve_rough_cmd(const ExperimentConfig& c)
{
    Report r = start(c);
    const int N = power_of_two(c);
    const int M = int(c.integer("M"));
    const double alpha = c.number("alpha"), T = c.number("horizon");
    const FourierGrid g(N);
    const MultiplierCache cache(StableSymbol::fractional_laplacian(alpha), g);
    const auto times = uniform_times(T, M);
    const bool noise = c.params["drift"] == "white-noise";
    EnhancedDrift v;
    if (noise) {
        const int n = int(c.integer("n"));
        if (n > N / 2 - 1)
            throw ConfigError("params.n", "must be <= N/2 - 1 = " + std::to_string(N / 2 - 1));
        const double eps_max = (4.0 * alpha - 7.0) / 6.0;
        if (!(c.number("epsilon") < eps_max))
            throw ConfigError("params.epsilon", "a white-noise drift at alpha = " + format_double(alpha) +
                                                    " needs epsilon < (4 alpha - 7) / 6 = " + format_double(eps_max));
        v = lift_white_noise(sample_white_noise(c.seed, n, g), cache, times, c.number("epsilon"));
    } else {
        v = lift_smooth(benchmark_drift(g, times, c.number("drift_amplitude")), cache, c.number("beta"));
    }
    v.validate();
    const double theta = default_theta_rough(v.beta, alpha);
    const PeriodicField uT =
        noise ? PeriodicField(g) : PeriodicField::cosine(g, {1, 0}) + PeriodicField::sine(g, {3, 0}, 0.2);
    BackwardData d;
    if (c.params["forcing"] == "drift") {
        d.f = Forcing::drift(0);
    } else {
        d.f = Forcing::from_field(benchmark_forcing(g, times));
    }
    d.terminal = uT;
    d.horizon = T;
    d.theta = theta;
    const ParacontrolledSolution s = solve_rough(v, cache, d);
    r.results["beta"] = v.beta;
    r.results["theta"] = theta;
    r.results["norm_V1"] = v.norm_v1;
    r.results["norm_V2"] = v.norm_v2;
    r.results["diagnostics"] = s.diagnostics.to_json();
    r.results["paracontrolled_norm"] = paracontrolled_norm(s.u, s.uprime, s.usharp, theta, alpha);
    r.results["u0"] = field_to_json(s.u[0]);
    r.assertions.push_back(
        make_assertion("reconstruction residual", s.diagnostics.reconstruction_residual, "<=", 1e-8));
    if (!noise) {
        BackwardData dc = d;
        dc.theta = 1.0;
        const TimeField ref = classical_solve(v.v1, cache, dc);
        BackwardData dy = d;
        dy.theta = default_theta_young(c.number("beta"), alpha);
        const YoungSolution y = solve_young(young_drift(v.v1, c.number("beta"), alpha), cache, dy);
        const double ec = rel_linf(s.u, ref), ey = rel_linf(s.u, y.u), eyc = rel_linf(y.u, ref);
        r.results["relative_error_vs_classical"] = ec;
        r.results["relative_error_vs_young"] = ey;
        r.results["young_vs_classical"] = eyc;
        r.assertions.push_back(make_assertion("rough vs classical, relative L^inf", ec, "<=", 1e-3));
        r.assertions.push_back(make_assertion("rough vs Young, relative L^inf", ey, "<=", 1e-3));
        r.assertions.push_back(make_assertion("Young vs classical, relative L^inf", eyc, "<=", 1e-3));
    }
    snapshot_table(r, s.u);
    return r;
}

Report lift_white_noise_cmd(const ExperimentConfig& c)
{
    Report r = start(c);
    const int N = power_of_two(c);
    const int n = int(c.integer("n"));
    if (n > N / 2 - 1)
        throw ConfigError("params.n", "must be <= N/2 - 1 = " + std::to_string(N / 2 - 1));
    const double alpha = c.number("alpha");
    const FourierGrid g(N);
    const MultiplierCache cache(StableSymbol::fractional_laplacian(alpha), g);
    const EnhancedDrift v = lift_white_noise(sample_white_noise(c.seed, n, g), cache,
                                             uniform_times(c.number("horizon"), int(c.integer("M"))),
                                             c.number("epsilon"));
    r.results["drift"] = drift_to_json(v);
    bool valid = true;
    try {
        v.validate();
    } catch (const std::invalid_argument& e) {
        valid = false;
        r.results["invalid"] = e.what();
    }
    r.assertions.push_back(make_assertion("regime invariants hold", valid ? 1.0 : 0.0, "==", 1.0));
    Table blocks{{"j", "V1", "V2_t0"}, {}};
    const Eigen::ArrayXd b1 = block_sup_norms(v.v1[0]), b2 = block_sup_norms((*v.v2)[0]);
    for (Eigen::Index j = 0; j < b1.size(); ++j)
        blocks.add({int(j) - 1, b1(j), b2(j)});
    r.tables["blocks"] = std::move(blocks);

    const int seeds = int(c.integer("cauchy_seeds"));
    if (seeds > 0) {
        const int cn = power_of_two(c, "cauchy_N");
        const CauchyReport cr = cauchy_decay(alpha, seeds, c.seed, list<int>(c, "cauchy_levels"), cn, 8,
                                             c.number("cauchy_loss"));
        r.results["cauchy"] = cr.to_json();
        Table t{{"seed", "level", "diff", "decreasing"}, {}};
        for (const auto& row : cr.rows)
            for (std::size_t i = 0; i < row.diffs.size(); ++i)
                t.add({row.seed, cr.levels[i], row.diffs[i], row.decreasing});
        r.tables["cauchy"] = std::move(t);
        r.assertions.push_back(
            make_assertion("fraction of seeds with decreasing Cauchy differences", cr.fraction, ">=", cr.required));
    }
    return r;
}

Report chaos_oracle_cmd(const ExperimentConfig& c)
{
    Report r = start(c);
    const int N = power_of_two(c);
    const int n = int(c.integer("n"));
    if (n > N / 2 - 1)
        throw ConfigError("params.n", "must be <= N/2 - 1 = " + std::to_string(N / 2 - 1));
    const double s = c.number("s"), t = c.number("t"), T = c.number("horizon"), alpha = c.number("alpha");
    if (!(s <= t && t <= T))
        throw ConfigError("params.t", "need s <= t <= horizon");
    const FourierGrid g(N);
    const StableSymbol sym = StableSymbol::fractional_laplacian(alpha);
    Table oracle{{"j", "variance"}, {}};
    for (int j = -1; j <= g.max_block(); ++j)
        oracle.add({j, chaos_variance_oracle(sym, j, s, t, n, T, g.max_block())});
    r.tables["oracle"] = std::move(oracle);
    r.results["mean_term_t"] = chaos_mean_term(sym, t, n, T, g.max_block());
    const int samples = int(c.integer("samples"));
    if (samples > 0) {
        const ChaosCheck ch = chaos_monte_carlo(alpha, int(c.integer("j")), s, t, n, N, samples, c.seed, T);
        r.results["monte_carlo"] = ch.to_json();
        r.assertions.push_back(make_assertion("|MC - oracle| / SE", std::abs(ch.z), "<=", 3.0));
    }
    return r;
}

Report stable_check_cmd(const ExperimentConfig& c)
{
    Report r = start(c);
    const double alpha = c.number("alpha"), scale = c.number("scale"), dt = c.number("dt");
    const StableSymbol sym = StableSymbol::scaled(alpha, scale);
    const long n = c.integer("samples");
    Rng rng = make_stream(c.seed, 0);
    std::vector<double> x(n);
    for (auto& v : x)
        v = sample_stable_increment(sym, dt, rng);
    Table cf{{"z", "re_estimate", "re_se", "exact", "re_z", "im_estimate", "im_se", "im_z"}, {}};
    for (double z : list<double>(c, "frequencies")) {
        std::vector<double> re(n), im(n);
        for (long i = 0; i < n; ++i) {
            re[i] = std::cos(2 * kPi * z * x[i]);
            im[i] = std::sin(2 * kPi * z * x[i]);
        }
        const Estimate er = sample_mean(re), ei = sample_mean(im);
        const double exact = std::exp(-dt * scale * std::pow(std::abs(z), alpha));
        const double zr = (er.mean - exact) / er.se, zi = ei.mean / ei.se;
        cf.add({z, er.mean, er.se, exact, zr, ei.mean, ei.se, zi});
        r.assertions.push_back(make_assertion("char. function real part |z| at " + format_double(z), std::abs(zr),
                                              "<=", 3.0));
        r.assertions.push_back(make_assertion("char. function imaginary part |z| at " + format_double(z),
                                              std::abs(zi), "<=", 3.0));
    }
    r.tables["charfn"] = std::move(cf);
    Table ks{{"factor", "ks", "pvalue"}, {}};
    for (int k : list<int>(c, "similarity_factors")) {
        Rng lr = make_stream(c.seed, 1 + std::uint64_t(k));
        std::vector<double> longer(n), scaled(x);
        for (auto& v : longer)
            v = sample_stable_increment(sym, dt * k, lr);
        for (auto& v : scaled)
            v *= std::pow(double(k), 1.0 / alpha);
        const double d = ks_statistic(longer, scaled), p = ks_pvalue(d, longer.size(), scaled.size());
        ks.add({k, d, p});
        r.assertions.push_back(make_assertion("self-similarity KS p-value, factor " + std::to_string(k), p, ">=", 0.01));
    }
    r.tables["self_similarity"] = std::move(ks);
    return r;
}

Report campbell_check_cmd(const ExperimentConfig& c)
{
    Report r = start(c);
    JumpMeasure mu{c.number("intensity"), c.number("jump_alpha"), c.number("cutoff"), c.number("inner")};
    if (!(mu.inner < mu.cutoff))
        throw ConfigError("params.inner", "must be below cutoff");
    mu.validate();
    const double span = c.number("span");
    const int order = int(c.integer("max_order"));
    // hand tables, orders 1..3
    using Tab = std::map<std::vector<int>, long long>;
    const std::vector<Tab> hand{{{{1}, 1}}, {{{2, 0}, 1}, {{0, 1}, 1}}, {{{3, 0, 0}, 1}, {{1, 1, 0}, 3}, {{0, 0, 1}, 1}}};
    int mismatches = 0;
    Table coef{{"n", "omega", "coefficient"}, {}};
    for (int k = 1; k <= order; ++k) {
        Tab t;
        for (const auto& term : campbell_coefficients(k)) {
            t[term.omega] = term.coefficient;
            coef.add({k, json(term.omega).dump(), term.coefficient});
        }
        if (k <= 3 && t != hand[k - 1])
            ++mismatches;
    }
    r.tables["coefficients"] = std::move(coef);
    r.assertions.push_back(make_assertion("coefficient tables differing from hand tables (n <= 3)", mismatches, "==", 0));
    const long n = c.integer("samples");
    Rng rng = make_stream(c.seed, 0);
    std::vector<std::vector<double>> pw(order, std::vector<double>(n));
    for (long i = 0; i < n; ++i) {
        const double s = sample_small_jump_square_sum(mu, span, rng);
        double p = 1.0;
        for (int k = 0; k < order; ++k)
            pw[k][i] = (p *= s);
    }
    Table mom{{"n", "exact", "estimate", "se", "z"}, {}};
    for (int k = 1; k <= order; ++k) {
        const double exact = campbell_moment(k, 0.0, span, mu);
        const Estimate e = sample_mean(pw[k - 1]);
        const double z = (e.mean - exact) / e.se;
        mom.add({k, exact, e.mean, e.se, z});
        if (k <= 3)
            r.assertions.push_back(make_assertion("Campbell moment |z|, n = " + std::to_string(k), std::abs(z), "<=", 3.0));
    }
    r.tables["moments"] = std::move(mom);
    return r;
}

TimeField simulation_drift(const ExperimentConfig& c, const FourierGrid& g, double T)
{
    const std::string kind = c.params["drift"];
    const double a = c.number("amplitude");
    PeriodicField v(g);
    if (kind == "constant")
        v = PeriodicField::constant(g, a);
    else if (kind == "sine")
        v = PeriodicField::sine(g, {1, 0}, a);
    else if (kind == "white-noise") {
        const int n = int(c.integer("n"));
        if (n > g.modes() / 2 - 1)
            throw ConfigError("params.n", "must be <= N/2 - 1 = " + std::to_string(g.modes() / 2 - 1));
        v = a * sample_white_noise(c.seed, n, g).to_field(g);
    }
    return TimeField::constant({0.0, T}, v);
}

Report simulate_cmd(const ExperimentConfig& c)
{
    Report r = start(c);
    const int N = power_of_two(c);
    const FourierGrid g(N);
    SimulationConfig cfg;
    cfg.horizon = c.number("horizon");
    cfg.drift = simulation_drift(c, g, cfg.horizon);
    cfg.sym = StableSymbol::scaled(c.number("alpha"), c.number("scale"));
    cfg.paths = c.integer("paths");
    cfg.steps = int(c.integer("steps"));
    cfg.seed = c.seed;
    cfg.x0 = Eigen::Vector2d(c.number("x0"), 0.0);
    cfg.uniform_start = c.params["uniform_start"].get<bool>();
    cfg.record_times = list<double>(c, "record_times");
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("params", e.what());
    }
    const PathEnsemble e = euler_maruyama(cfg);
    Table m{{"t", "mean", "sd", "median", "q05", "q95"}, {}};
    bool finite = true;
    for (std::size_t i = 0; i < e.record_times.size(); ++i) {
        std::vector<double> x(e.x.col(Eigen::Index(i)).begin(), e.x.col(Eigen::Index(i)).end());
        finite = finite && std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
        const Estimate est = sample_mean(x);
        std::sort(x.begin(), x.end());
        auto q = [&](double p) { return x[std::size_t(p * double(x.size() - 1))]; };
        m.add({e.record_times[i], est.mean, est.se * std::sqrt(double(x.size())), median(x), q(0.05), q(0.95)});
    }
    r.tables["marginals"] = std::move(m);
    const long dump = std::min<long>(c.integer("dump_paths"), cfg.paths);
    if (dump > 0) {
        Table p{{"path", "t", "x"}, {}};
        for (long k = 0; k < dump; ++k)
            for (std::size_t i = 0; i < e.record_times.size(); ++i)
                p.add({k, e.record_times[i], e.x(k, Eigen::Index(i))});
        r.tables["paths"] = std::move(p);
    }
    r.assertions.push_back(make_assertion("all recorded positions finite", finite ? 1.0 : 0.0, "==", 1.0));
    return r;
}

Report martingale_test_cmd(const ExperimentConfig& c)
{
    Report r = start(c);
    const int N = power_of_two(c);
    const int steps = int(c.integer("steps"));
    const double alpha = c.number("alpha");
    const std::string mode = c.params["mode"];
    const FourierGrid g(N);
    const MultiplierCache cache(StableSymbol::scaled(alpha, c.number("scale")), g);
    const auto times = uniform_times(1.0, steps);
    const TimeField zero = TimeField::constant(times, PeriodicField(g));
    TimeField v = zero, f = zero;
    PeriodicField uT = PeriodicField::cosine(g, {1, 0});
    if (mode != "free") {
        v = benchmark_drift_odd(g, times, c.number("drift_amplitude"));
        f = benchmark_forcing(g, times);
    } else {
        uT += PeriodicField::sine(g, {2, 0}, 0.5);
    }
    // the corrupted solution drops the drift term from the equation
    const TimeField u = classical_solve(mode == "corrupted" ? zero : v, cache, backward(f, uT, 1.0, 1.0));
    SimulationConfig cfg;
    cfg.drift = v;
    cfg.sym = cache.symbol();
    cfg.paths = c.integer("paths");
    cfg.steps = steps;
    cfg.seed = c.seed;
    cfg.x0 = Eigen::Vector2d(c.number("x0"), 0.0);
    const double thr = c.number("threshold");
    const MartingaleReport m = martingale_test(u, f, cfg, {{0.25, 0.5}, {0.5, 1.0}, {0.125, 1.0}}, thr);
    r.results["martingale"] = m.to_json();
    Table t = martingale_table();
    add_martingale_rows(t, 0, m);
    r.tables["rows"] = std::move(t);
    r.assertions.push_back(make_assertion("martingale defect max |z|", m.max_abs_z, "<=", thr));
    return r;
}

Report moment_scaling_cmd(const ExperimentConfig& c)
{
    Report r = start(c);
    const int N = power_of_two(c);
    const FourierGrid g(N);
    const double alpha = c.number("alpha");
    const int wn = int(c.integer("white_noise_n"));
    if (wn > N / 2 - 1)
        throw ConfigError("params.white_noise_n", "must be <= N/2 - 1 = " + std::to_string(N / 2 - 1));
    const double lo = c.number("lag_min"), hi = c.number("lag_max"), h = c.number("step");
    if (std::log10(hi / lo) < 1.5)
        throw ConfigError("params.lag_max", "lags must span at least 1.5 decades");
    std::vector<double> lags;
    for (double l = lo; l < hi * (1 - 1e-9); l *= 2)
        lags.push_back(l);
    lags.push_back(hi);
    const long steps = std::lround(hi / h);
    if (std::abs(steps * h - hi) > 1e-9 * hi)
        throw ConfigError("params.step", "lag_max must be a multiple of the step");
    for (std::size_t i = 0; i < lags.size(); ++i)
        if (std::abs(std::lround(lags[i] / h) * h - lags[i]) > 1e-9 * lags[i])
            throw ConfigError("params.lag_min", "every lag must be a multiple of the step");
    const PeriodicField xi = sample_white_noise(c.seed, wn, g).to_field(g);
    const double theta =
        c.params["theta"].get<double>() > 0.0 ? c.number("theta") : default_theta_rough(c.number("beta"), alpha);
    r.results["theta"] = theta;
    Table mt{{"n", "rho", "lag", "moment", "se"}, {}};
    Table st{{"n", "rho", "slope", "r2", "target", "min", "prefactor"}, {}};
    r.results["reports"] = json::array();
    for (int rho : list<int>(c, "rhos")) {
        std::vector<double> prefactors;
        for (int n : list<int>(c, "levels")) {
            if (n > N / 2 - 1)
                throw ConfigError("params.levels", "level " + std::to_string(n) + " exceeds N/2 - 1");
            SimulationConfig cfg;
            cfg.drift = TimeField::constant({0.0, hi}, mollify(xi, n));
            cfg.sym = StableSymbol::fractional_laplacian(alpha);
            cfg.horizon = hi;
            cfg.steps = int(steps);
            cfg.paths = c.integer("paths");
            cfg.uniform_start = true;
            cfg.seed = c.seed + 1;
            const MomentScalingReport m = drift_moment_scaling(cfg, rho, 0.0, lags, theta);
            json j = m.to_json();
            j["n"] = n;
            r.results["reports"].push_back(j);
            for (std::size_t i = 0; i < lags.size(); ++i)
                mt.add({n, rho, lags[i], m.moments[i], m.errors[i]});
            double pref = 0.0;
            for (std::size_t i = 0; i < lags.size(); ++i)
                pref = std::max(pref, m.moments[i] / std::pow(lags[i], m.target_slope));
            st.add({n, rho, m.fit.slope, m.fit.r2, m.target_slope, m.min_slope, pref});
            r.assertions.push_back(make_assertion("slope, rho = " + std::to_string(rho) + ", n = " + std::to_string(n),
                                                  m.fit.slope, ">=", m.min_slope));
            prefactors.push_back(pref);
        }
        // the bound moment <= C lag^target must hold with C uniform in n
        const double growth = *std::max_element(prefactors.begin(), prefactors.end()) / prefactors.front();
        r.assertions.push_back(
            make_assertion("prefactor growth over n, rho = " + std::to_string(rho), growth, "<=", 2.0));
    }
    r.tables["moments"] = std::move(mt);
    r.tables["slopes"] = std::move(st);
    return r;
}

Report brox_demo_cmd(const ExperimentConfig& c)
{
    Report r = start(c);
    BroxBundle b;
    b.N = power_of_two(c);
    b.M = int(c.integer("M"));
    b.paths = c.integer("paths");
    b.steps = int(c.integer("steps"));
    b.horizon = c.number("horizon");
    b.levels = list<int>(c, "levels");
    b.epsilon = c.number("epsilon");
    const BroxReport br = brox_demo(c.seed, c.number("alpha"), b);
    r.results = br.to_json();
    r.assertions = br.assertions;
    Table t = martingale_table();
    for (const auto& [n, m] : br.martingale)
        add_martingale_rows(t, n, m);
    r.tables["martingale"] = std::move(t);
    Table k{{"n", "n2", "t", "ks", "pvalue"}, {}};
    for (const auto& row : br.marginals.rows)
        k.add({row.n, row.n2, row.t, row.ks, row.pvalue});
    r.tables["marginals"] = std::move(k);
    return r;
}

struct Entry {
    CommandSchema schema;
    std::function<Report(const ExperimentConfig&)> run;
};

const std::vector<Entry>& registry()
{
    static const std::vector<Entry> entries = [] {
        std::vector<Entry> e;
        e.push_back({{"schauder-probe",
                      "log-log slopes of the smoothing, time-continuity and J^T bounds",
                      {alpha_field(1.8), num("beta", -0.4, -5.0, 5.0, false, false, "input regularity"),
                       grid_field(1024), positive("t_min", 1e-5, "smallest t / window"),
                       positive("t_max", 1e-3, "largest t / window"),
                       integer("points", 17, 3, 1000, "sweep points"),
                       integer("M", 8, 1, 4096, "time steps of each J^T window")}},
                     schauder_probe_cmd});
        e.push_back({{"paraproduct-probe",
                      "realized paraproduct constants over grid sizes",
                      {int_list("sizes", {64, 128, 256, 512}, 8, 8192, "grid sizes"),
                       integer("seeds", 50, 1, 100000, "random inputs per size")}},
                     paraproduct_probe_cmd});
        e.push_back({{"commutator-probe",
                      "normalized J^T and semigroup commutator ratios",
                      {alpha_field(1.8, 1.0), grid_field(256), integer("M", 32, 2, 4096, "time steps per window"),
                       integer("seeds", 20, 1, 100000, "random inputs"),
                       num("sigma", 0.5, 0.0, 1.0, true, true, "regularity of g"),
                       num("varsigma", -0.1, -5.0, 5.0, false, false, "regularity of h"),
                       num_list("windows", {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128}, 0.0, 1.0, true, "window lengths"),
                       num("gamma", 0.7, -5.0, 1.0, false, true, "regularity of u"),
                       num("beta", -0.6, -5.0, 5.0, false, false, "regularity of v"),
                       num("vartheta", 1.0, -1.0, 5.0, false, false, "regularity gain"),
                       num_list("times", {1.0 / 1024, 1.0 / 2048, 1.0 / 4096, 1.0 / 8192}, 0.0, 1.0, true,
                                "semigroup times")}},
                     commutator_probe_cmd});
        e.push_back({{"solve-young",
                      "Young-regime solve on smooth benchmark data, checked against the classical solve",
                      {alpha_field(1.5, 1.0), grid_field(64), integer("M", 128, 2, 100000, "time steps"),
                       positive("horizon", 1.0, "terminal time"),
                       num("drift_amplitude", 1.0, 0.0, 100.0, false, false, "0 gives V = 0"),
                       num("beta", 0.5, -5.0, 5.0, false, false, "declared drift regularity"),
                       choice("forcing", "smooth", {"smooth", "zero"}, "right-hand side")}},
                     solve_young_cmd});
        e.push_back({{"solve-rough",
                      "paracontrolled solve with a smooth or white-noise drift",
                      {alpha_field(1.8, 1.0), grid_field(128), integer("M", 128, 2, 100000, "time steps"),
                       positive("horizon", 1.0, "terminal time"),
                       choice("drift", "smooth", {"smooth", "white-noise"}, "drift source"),
                       num("drift_amplitude", 1.0, 0.0, 100.0, false, false, "smooth drift amplitude"),
                       num("beta", 0.5, -5.0, 5.0, false, false, "declared regularity of the smooth drift"),
                       integer("n", 31, 0, 4095, "white-noise truncation"),
                       num("epsilon", 0.05, 0.0, 0.5, true, false, "white-noise regularity loss"),
                       choice("forcing", "smooth", {"smooth", "drift"}, "right-hand side: benchmark or V1")}},
                     solve_rough_cmd});
        e.push_back({{"lift-white-noise",
                      "sample periodic white noise, build its lift, optionally the Cauchy-decay sweep",
                      {alpha_field(1.9, 1.0), grid_field(256), integer("n", 127, 0, 4095, "truncation"),
                       integer("M", 16, 1, 100000, "time steps"), positive("horizon", 1.0, "terminal time"),
                       num("epsilon", 0.05, 0.0, 0.5, true, false, "regularity loss"),
                       integer("cauchy_seeds", 0, 0, 100000, "seeds for the decay sweep, 0 skips it"),
                       integer("cauchy_N", 1024, 8, 8192, "grid of the decay sweep"),
                       int_list("cauchy_levels", {8, 16, 32, 64, 128}, 0, 4095, "nested truncations"),
                       num("cauchy_loss", 0.05, 0.0, 1.0, true, false, "norm at alpha - 2 - loss")}},
                     lift_white_noise_cmd});
        e.push_back({{"chaos-oracle",
                      "closed-form block variance of the white-noise lift, with a Monte Carlo check",
                      {alpha_field(1.9, 1.0), grid_field(128), integer("n", 32, 0, 4095, "truncation"),
                       integer("j", 3, -1, 20, "block"), num("s", 0.995, 0.0, std::nullopt, false, false, "time s"),
                       num("t", 0.999, 0.0, std::nullopt, false, false, "time t"),
                       positive("horizon", 1.0, "terminal time"),
                       integer("samples", 10000, 0, 10000000, "Monte Carlo seeds, 0 skips")}},
                     chaos_oracle_cmd});
        e.push_back({{"stable-check",
                      "stable increments: characteristic function and self-similarity",
                      {alpha_field(1.8), positive("scale", 1.0, "psi(k) = scale |k|^alpha"),
                       positive("dt", 0.1, "increment length"),
                       integer("samples", 100000, 1000, 100000000, "draws"),
                       num_list("frequencies", {1.0, 2.0, 5.0}, std::nullopt, std::nullopt, false, "test frequencies"),
                       int_list("similarity_factors", {2, 4}, 2, 1000, "time scalings")}},
                     stable_check_cmd});
        e.push_back({{"campbell-check",
                      "moments of truncated jump square sums: recursion, tables, Monte Carlo",
                      {positive("intensity", 1.0, "jump intensity K"),
                       num("jump_alpha", 1.5, 0.0, 2.0, true, true, "jump index"),
                       positive("cutoff", 1.0, "largest jump"), positive("inner", 1e-4, "smallest jump"),
                       positive("span", 1e-3, "window length"),
                       integer("samples", 100000, 1000, 100000000, "draws"),
                       integer("max_order", 3, 1, 6, "highest moment")}},
                     campbell_check_cmd});
        e.push_back({{"simulate",
                      "Euler scheme for the SDE with a band-limited drift",
                      {alpha_field(1.8), positive("scale", 1.0, "psi(k) = scale |k|^alpha"), grid_field(64),
                       choice("drift", "sine", {"zero", "constant", "sine", "white-noise"}, "drift"),
                       num("amplitude", 1.0, -100.0, 100.0, false, false, "drift amplitude"),
                       integer("n", 16, 0, 4095, "white-noise mollification level"),
                       integer("paths", 10000, 1000, 100000000, "paths"),
                       integer("steps", 256, 64, 100000000, "Euler steps"), positive("horizon", 1.0, "horizon"),
                       num("x0", 0.1, std::nullopt, std::nullopt, false, false, "start"),
                       boolean("uniform_start", false, "uniform start instead of x0"),
                       num_list("record_times", {0.25, 0.5, 1.0}, 0.0, std::nullopt, false, "recorded times"),
                       integer("dump_paths", 0, 0, 100000, "paths written to the CSV dump")}},
                     simulate_cmd});
        e.push_back({{"martingale-test",
                      "martingale defect of u(t, X_t) - int f for free, matched or corrupted u",
                      {alpha_field(1.8, 1.0), positive("scale", 2.0, "psi(k) = scale |k|^alpha"), grid_field(64),
                       choice("mode", "matched", {"free", "matched", "corrupted"}, "solution used"),
                       num("drift_amplitude", 1.0, 0.0, 100.0, false, false, "drift amplitude"),
                       integer("paths", 100000, 1000, 100000000, "paths"),
                       integer("steps", 512, 64, 1000000, "Euler steps = solver steps"),
                       num("x0", 0.1, std::nullopt, std::nullopt, false, false, "start"),
                       positive("threshold", 3.0, "pass threshold in SE")}},
                     martingale_test_cmd});
        e.push_back({{"moment-scaling",
                      "drift time-integral moments against lag for mollified white noise",
                      {alpha_field(1.9, 1.0), grid_field(256), integer("white_noise_n", 127, 0, 4095, "noise modes"),
                       int_list("levels", {16, 32, 64}, 0, 4095, "mollification levels"),
                       int_list("rhos", {2, 4}, 2, 4, "moment orders"),
                       integer("paths", 20000, 1000, 100000000, "paths"), positive("lag_min", 1e-4, "smallest lag"),
                       positive("lag_max", 3.2e-3, "largest lag and horizon"), positive("step", 1e-5, "Euler step"),
                       num("beta", -0.55, -5.0, 5.0, false, false, "drift regularity for the default theta"),
                       num("theta", 0.0, 0.0, std::nullopt, false, false, "0 uses the solver default")}},
                     moment_scaling_cmd});
        e.push_back({{"brox-demo",
                      "white-noise environment, rough solve, mollified simulations, martingale and marginal checks",
                      {alpha_field(1.9), grid_field(128), integer("M", 128, 2, 100000, "solver time steps"),
                       integer("paths", 20000, 1000, 100000000, "paths per level"),
                       integer("steps", 4096, 64, 100000000, "Euler steps"), positive("horizon", 1.0, "horizon"),
                       int_list("levels", {8, 16, 32, 63}, 0, 4095, "mollification levels"),
                       num("epsilon", 0.05, 0.0, 0.5, true, false, "regularity loss (clamped)")}},
                     brox_demo_cmd});
        return e;
    }();
    return entries;
}

}  // namespace

TimeField benchmark_drift(const FourierGrid& g, const std::vector<double>& times, double amp)
{
    std::vector<PeriodicField> s;
    for (double t : times) {
        PeriodicField f = PeriodicField::cosine(g, {1, 0}, 0.6) + PeriodicField::sine(g, {2, 0}, 0.3);
        f *= amp * (1.0 + 0.5 * t);
        f += PeriodicField::constant(g, 0.2 * amp);
        s.push_back(f);
    }
    return TimeField(times, s);
}

TimeField benchmark_drift_odd(const FourierGrid& g, const std::vector<double>& times, double amp)
{
    std::vector<PeriodicField> s;
    for (double t : times) {
        PeriodicField f = PeriodicField::sine(g, {1, 0}, 0.8) + PeriodicField::cosine(g, {2, 0}, 0.3);
        f *= amp * (1.0 + 0.5 * t);
        f += PeriodicField::constant(g, 0.2 * amp);
        s.push_back(f);
    }
    return TimeField(times, s);
}

TimeField benchmark_forcing(const FourierGrid& g, const std::vector<double>& times)
{
    std::vector<PeriodicField> s;
    for (double t : times)
        s.push_back(std::cos(3.0 * t) * PeriodicField::cosine(g, {3, 0}) + PeriodicField::constant(g, 0.5));
    return TimeField(times, s);
}

const std::vector<CommandSchema>& command_schemas()
{
    static const std::vector<CommandSchema> s = [] {
        std::vector<CommandSchema> out;
        for (const auto& e : registry())
            out.push_back(e.schema);
        return out;
    }();
    return s;
}

Report run_command(const ExperimentConfig& cfg)
{
    for (const auto& e : registry())
        if (e.schema.name == cfg.command)
            return e.run(cfg);
    throw ConfigError("command", "unknown command '" + cfg.command + "'");
}

}  // namespace paracontrol
