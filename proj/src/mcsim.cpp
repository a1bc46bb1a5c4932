#include "paracontrol/mcsim.hpp"

#include "paracontrol/enhanced_drift.hpp"
#include "paracontrol/pde.hpp"
#include "paracontrol/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace paracontrol {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFloorPvalue = 0.05;  // KS rows with p above this are at the Monte Carlo floor

bool on_grid(double t, double h, long& index)
{
    const double q = t / h;
    index = std::lround(q);
    return std::abs(q - double(index)) <= 1e-9 * std::max(1.0, std::abs(q));
}

}  // namespace

// ----------------------------------------------------------------- mollify

PeriodicField mollify(const PeriodicField& f, int n)
{
    if (n < 0)
        throw std::invalid_argument("mollify: level must be >= 0");
    if (n > f.grid().modes() / 2 - 1)
        throw std::invalid_argument("mollify: level " + std::to_string(n) + " exceeds N/2 - 1");
    return truncate_modes(f, n);
}

TimeField mollify_drift(const TimeField& v, int n)
{
    std::vector<PeriodicField> s;
    s.reserve(v.size());
    for (const auto& f : v.values())
        s.push_back(mollify(f, n));
    return TimeField(v.times(), std::move(s), v.regularity());
}

// --------------------------------------------------------------- evaluator

FieldEvaluator::FieldEvaluator(const TimeField& f)
    : times_(f.times()), dim_(f.grid().dim()), components_(f.components())
{
    const FourierGrid& g = f.grid();
    for (const auto& s : f.values())
        if (!s.is_real())
            throw std::invalid_argument("FieldEvaluator: real fields only");
    // active modes, half plane
    std::vector<char> active(g.size(), 0);
    for (const auto& s : f.values())
        for (Eigen::Index i = 0; i < g.size(); ++i)
            if (!g.is_nyquist(i) && (s.coeffs().row(i) != Complex(0.0)).any())
                active[i] = 1;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        if (!active[i])
            continue;
        const Frequency k = g.frequencies(i);
        max_mode_ = std::max({max_mode_, std::abs(k[0]), std::abs(k[1])});
        if (dim_ == 2 && (k[0] > 0 || (k[0] == 0 && k[1] >= 0)))
            modes_.push_back({k[0], k[1]});
    }
    std::sort(modes_.begin(), modes_.end());
    coeffs_.reserve(f.size() * components_);
    for (const auto& s : f.values())
        for (int c = 0; c < components_; ++c) {
            std::vector<Complex> cf;
            if (dim_ == 1) {
                cf.resize(max_mode_ + 1);
                for (int k = 0; k <= max_mode_; ++k)
                    cf[k] = s.coeff({k, 0}, c);
            } else {
                cf.reserve(modes_.size());
                for (const auto& [a, b] : modes_)
                    cf.push_back(s.coeff({a, b}, c));
            }
            coeffs_.push_back(std::move(cf));
        }
}

FieldEvaluator::Location FieldEvaluator::locate(double t) const
{
    const double tol = 1e-12 * std::max(1.0, std::abs(times_.back()));
    if (t < times_.front() - tol || t > times_.back() + tol)
        throw std::out_of_range("FieldEvaluator: time outside the grid");
    if (times_.size() == 1)
        return {0, 0.0};
    auto it = std::upper_bound(times_.begin(), times_.end(), t + tol);
    std::size_t k = std::size_t(std::max<std::ptrdiff_t>(0, it - times_.begin() - 1));
    if (k >= times_.size() - 1)
        return {times_.size() - 1, 0.0};
    if (std::abs(t - times_[k]) <= tol)
        return {k, 0.0};
    return {k, (t - times_[k]) / (times_[k + 1] - times_[k])};
}

void FieldEvaluator::evaluate(const Location& loc, double x, double y, double* out) const
{
    const double fx = x - std::floor(x), fy = y - std::floor(y);
    const Complex zx = std::polar(1.0, kTwoPi * fx);
    auto one = [&](const std::vector<Complex>& cf) {
        if (dim_ == 1) {
            // Horner in z over k >= 1
            Complex s = 0.0;
            for (int k = max_mode_; k >= 1; --k)
                s = (s + cf[k]) * zx;
            return cf[0].real() + 2.0 * s.real();
        }
        const Complex zy = std::polar(1.0, kTwoPi * fy);
        double v = 0.0;
        Complex px = 1.0;
        int cur = 0;
        // modes are sorted by k_1
        std::size_t i = 0;
        while (i < modes_.size()) {
            const int a = modes_[i].first;
            while (cur < a) {
                px *= zx;
                ++cur;
            }
            for (; i < modes_.size() && modes_[i].first == a; ++i) {
                const int b = modes_[i].second;
                const Complex e = px * std::pow(zy, b);
                const Complex term = cf[i] * e;
                v += (a == 0 && b == 0) ? term.real() : 2.0 * term.real();
            }
        }
        return v;
    };
    for (int c = 0; c < components_; ++c) {
        double v = one(coeffs_[loc.slice * components_ + c]);
        if (loc.weight > 0.0)
            v = (1.0 - loc.weight) * v + loc.weight * one(coeffs_[(loc.slice + 1) * components_ + c]);
        out[c] = v;
    }
}

double FieldEvaluator::operator()(double t, double x, int c) const
{
    std::vector<double> out(components_);
    evaluate(locate(t), x, 0.0, out.data());
    return out[c];
}

// -------------------------------------------------------------- simulation

void SimulationConfig::validate() const
{
    if (paths < 1000)
        throw std::invalid_argument("simulation: paths must be >= 1000");
    if (steps < 64)
        throw std::invalid_argument("simulation: need h <= T/64 (steps >= 64)");
    if (!(horizon > 0.0))
        throw std::invalid_argument("simulation: horizon must be positive");
    if (noise_substeps < 1)
        throw std::invalid_argument("simulation: noise_substeps must be >= 1");
    if (drift.size() == 0)
        throw std::invalid_argument("simulation: drift missing");
    if (drift.components() != drift.grid().dim())
        throw std::invalid_argument("simulation: drift must have d components");
    if (sym.dim() != drift.grid().dim())
        throw std::invalid_argument("simulation: symbol and drift dimensions differ");
    if (drift.start() > 1e-12 || drift.horizon() < horizon - 1e-12)
        throw std::invalid_argument("simulation: drift time grid must cover [0, T]");
    if (forcing) {
        if (forcing->components() != 1)
            throw std::invalid_argument("simulation: forcing must be scalar");
        if (forcing->start() > 1e-12 || forcing->horizon() < horizon - 1e-12)
            throw std::invalid_argument("simulation: forcing time grid must cover [0, T]");
    }
    long idx = 0;
    for (double t : record_times)
        if (t < 0.0 || t > horizon + 1e-12 || !on_grid(t, step(), idx))
            throw std::invalid_argument("simulation: record time " + std::to_string(t) + " is not on the Euler grid");
}

std::size_t PathEnsemble::record_index(double t) const
{
    for (std::size_t i = 0; i < record_times.size(); ++i)
        if (std::abs(record_times[i] - t) <= 1e-12 * std::max(1.0, std::abs(t)))
            return i;
    throw std::out_of_range("PathEnsemble: time " + std::to_string(t) + " was not recorded");
}

PathEnsemble euler_maruyama(const SimulationConfig& cfg)
{
    cfg.validate();
    const int d = cfg.drift.grid().dim();
    const double h = cfg.step(), hs = h / cfg.noise_substeps;
    const FieldEvaluator drift(cfg.drift);
    std::optional<FieldEvaluator> forcing;
    if (cfg.forcing)
        forcing.emplace(*cfg.forcing);

    PathEnsemble ens;
    ens.record_times = cfg.record_times;
    std::sort(ens.record_times.begin(), ens.record_times.end());
    ens.record_times.erase(std::unique(ens.record_times.begin(), ens.record_times.end(),
                                       [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
                           ens.record_times.end());
    const std::size_t nrec = ens.record_times.size();
    std::vector<long> rec_step(nrec);
    for (std::size_t i = 0; i < nrec; ++i)
        on_grid(ens.record_times[i], h, rec_step[i]);

    std::vector<FieldEvaluator::Location> vloc(cfg.steps + 1), floc;
    for (int k = 0; k <= cfg.steps; ++k)
        vloc[k] = drift.locate(std::min(k * h, cfg.drift.horizon()));
    if (forcing) {
        floc.resize(cfg.steps + 1);
        for (int k = 0; k <= cfg.steps; ++k)
            floc[k] = forcing->locate(std::min(k * h, cfg.forcing->horizon()));
    }

    const long P = cfg.paths;
    ens.x.resize(P, nrec);
    if (d == 2)
        ens.y.resize(P, nrec);
    ens.forcing_integral = Eigen::ArrayXXd::Zero(P, nrec);
    ens.drift_integral = Eigen::ArrayXXd::Zero(P, nrec);

    double v[2] = {0.0, 0.0};
    for (long p = 0; p < P; ++p) {
        Rng rng = make_stream(cfg.seed, std::uint64_t(p), 0);
        double x = cfg.x0.x(), y = cfg.x0.y();
        if (cfg.uniform_start) {
            Rng start = make_stream(cfg.seed, std::uint64_t(p), 1);
            x = uniform_open(start);
            y = d == 2 ? uniform_open(start) : 0.0;
        }
        double fint = 0.0, dint = 0.0, fprev = 0.0;
        if (forcing)
            forcing->evaluate(floc[0], x, y, &fprev);
        std::size_t ri = 0;
        auto store = [&](long k) {
            while (ri < nrec && rec_step[ri] == k) {
                ens.x(p, ri) = x;
                if (d == 2)
                    ens.y(p, ri) = y;
                ens.forcing_integral(p, ri) = fint;
                ens.drift_integral(p, ri) = dint;
                ++ri;
            }
        };
        store(0);
        for (int k = 0; k < cfg.steps; ++k) {
            drift.evaluate(vloc[k], x, y, v);
            dint += v[0] * h;
            if (d == 1) {
                double dl = 0.0;
                for (int s = 0; s < cfg.noise_substeps; ++s)
                    dl += sample_stable_increment(cfg.sym, hs, rng);
                x += v[0] * h + dl;
            } else {
                Eigen::Vector2d dl = Eigen::Vector2d::Zero();
                for (int s = 0; s < cfg.noise_substeps; ++s)
                    dl += sample_stable_increment_2d(cfg.sym, hs, rng);
                x += v[0] * h + dl.x();
                y += v[1] * h + dl.y();
            }
            if (forcing) {
                double fnew = 0.0;
                forcing->evaluate(floc[k + 1], x, y, &fnew);
                fint += 0.5 * h * (fprev + fnew);
                fprev = fnew;
            }
            store(k + 1);
        }
    }
    return ens;
}

// -------------------------------------------------------------- martingale

std::vector<std::string> martingale_functionals() { return {"1", "tanh(X_r)", "cos(2 pi X_{r/2})"}; }

nlohmann::json MartingaleReport::to_json() const
{
    nlohmann::json j;
    j["threshold"] = threshold;
    j["max_abs_z"] = max_abs_z;
    j["pass"] = pass;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows)
        j["rows"].push_back({{"r", r.r},
                             {"t", r.t},
                             {"functional", r.functional},
                             {"estimate", r.estimate.mean},
                             {"se", r.estimate.se},
                             {"z", r.estimate.z()},
                             {"pass", r.pass}});
    return j;
}

namespace {

std::vector<double> martingale_record_times(const std::vector<std::pair<double, double>>& pairs)
{
    std::vector<double> rec{0.0};
    for (const auto& [r, t] : pairs) {
        if (!(t > r && r > 0.0))
            throw std::invalid_argument("martingale_test: need 0 < r < t");
        rec.insert(rec.end(), {0.5 * r, r, t});
    }
    return rec;
}

MartingaleReport martingale_from_ensemble(const TimeField& u, const PathEnsemble& ens,
                                          const std::vector<std::pair<double, double>>& pairs, double threshold)
{
    const FieldEvaluator ue(u);
    const long P = ens.x.rows();
    MartingaleReport rep;
    rep.threshold = threshold;
    const auto names = martingale_functionals();
    for (const auto& [r, t] : pairs) {
        const std::size_t ir = ens.record_index(r), it = ens.record_index(t), ih = ens.record_index(0.5 * r);
        const auto lr = ue.locate(r), lt = ue.locate(t);
        if (lr.weight != 0.0 || lt.weight != 0.0)
            throw std::invalid_argument("martingale_test: pair times must lie on the solution grid");
        std::vector<std::vector<double>> samples(names.size(), std::vector<double>(P));
        for (long p = 0; p < P; ++p) {
            double ur = 0.0, ut = 0.0;
            ue.evaluate(lr, ens.x(p, ir), 0.0, &ur);
            ue.evaluate(lt, ens.x(p, it), 0.0, &ut);
            const double dm = ut - ur - (ens.forcing_integral(p, it) - ens.forcing_integral(p, ir));
            samples[0][p] = dm;
            samples[1][p] = dm * std::tanh(ens.x(p, ir));
            samples[2][p] = dm * std::cos(kTwoPi * ens.x(p, ih));
        }
        for (std::size_t f = 0; f < names.size(); ++f) {
            MartingaleRow row;
            row.r = r;
            row.t = t;
            row.functional = names[f];
            row.estimate = batch_means(samples[f], 50);
            row.pass = std::abs(row.estimate.z()) <= threshold;
            rep.max_abs_z = std::max(rep.max_abs_z, std::abs(row.estimate.z()));
            rep.rows.push_back(row);
        }
    }
    rep.pass = rep.max_abs_z <= threshold;
    return rep;
}

}  // namespace

MartingaleReport martingale_test(const TimeField& u, const TimeField& f, SimulationConfig cfg,
                                 const std::vector<std::pair<double, double>>& pairs, double threshold)
{
    if (u.grid().dim() != 1 || u.components() != 1)
        throw std::invalid_argument("martingale_test: scalar one-dimensional u expected");
    if (u.horizon() < cfg.horizon - 1e-12)
        throw std::invalid_argument("martingale_test: solution does not cover the simulation horizon");
    if (cfg.uniform_start)
        throw std::invalid_argument("martingale_test: a deterministic start is required");
    cfg.forcing = f;
    cfg.record_times = martingale_record_times(pairs);
    const PathEnsemble ens = euler_maruyama(cfg);
    return martingale_from_ensemble(u, ens, pairs, threshold);
}

// --------------------------------------------------------- moment scaling

nlohmann::json MomentScalingReport::to_json() const
{
    return {{"rho", rho},         {"r", r},
            {"lags", lags},       {"moments", moments},
            {"errors", errors},   {"slope", fit.slope},
            {"intercept", fit.intercept}, {"r2", fit.r2},
            {"target_slope", target_slope}, {"min_slope", min_slope},
            {"pass", pass}};
}

MomentScalingReport drift_moment_scaling(SimulationConfig cfg, int rho, double r, const std::vector<double>& lags,
                                         double theta)
{
    if (rho != 2 && rho != 4)
        throw std::invalid_argument("drift_moment_scaling: rho must be 2 or 4");
    if (lags.size() < 3)
        throw std::invalid_argument("drift_moment_scaling: need at least three lags");
    const auto [lo, hi] = std::minmax_element(lags.begin(), lags.end());
    if (!(*lo > 0.0) || std::log10(*hi / *lo) < 1.5)
        throw std::invalid_argument("drift_moment_scaling: lags must span at least 1.5 decades");
    cfg.record_times = {r};
    for (double l : lags)
        cfg.record_times.push_back(r + l);
    const PathEnsemble ens = euler_maruyama(cfg);
    MomentScalingReport rep;
    rep.rho = rho;
    rep.r = r;
    rep.lags = lags;
    const std::size_t ir = ens.record_index(r);
    bool all_zero = true;
    for (double l : lags) {
        const std::size_t il = ens.record_index(r + l);
        std::vector<double> m(ens.x.rows());
        for (long p = 0; p < ens.x.rows(); ++p)
            m[p] = std::pow(std::abs(ens.drift_integral(p, il) - ens.drift_integral(p, ir)), rho);
        const Estimate e = batch_means(m, 50);
        rep.moments.push_back(e.mean);
        rep.errors.push_back(e.se);
        all_zero = all_zero && e.mean == 0.0;
    }
    rep.target_slope = theta * rho / cfg.sym.alpha();
    rep.min_slope = rep.target_slope - 0.15;
    if (all_zero) {
        rep.fit.slope = std::numeric_limits<double>::quiet_NaN();
        rep.pass = true;
        return rep;
    }
    rep.fit = loglog_fit(rep.lags, rep.moments);
    rep.pass = rep.fit.slope >= rep.min_slope;
    return rep;
}

// --------------------------------------------------------------- marginals

nlohmann::json MarginalReport::to_json() const
{
    nlohmann::json j;
    j["levels"] = levels;
    j["times"] = times;
    j["inversions"] = inversions;
    j["decreasing"] = decreasing;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows)
        j["rows"].push_back({{"n", r.n}, {"n2", r.n2}, {"t", r.t}, {"ks", r.ks}, {"pvalue", r.pvalue}});
    return j;
}

namespace {

MarginalReport marginal_table(const std::vector<int>& levels, const std::vector<PathEnsemble>& ens,
                              const std::vector<double>& times)
{
    MarginalReport rep;
    rep.levels = levels;
    rep.times = times;
    for (double t : times) {
        std::vector<double> ks, pv;
        for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
            const auto& a = ens[i];
            const auto& b = ens[i + 1];
            const std::size_t ia = a.record_index(t), ib = b.record_index(t);
            std::vector<double> xa(a.x.rows()), xb(b.x.rows());
            for (long p = 0; p < a.x.rows(); ++p)
                xa[p] = a.x(p, ia);
            for (long p = 0; p < b.x.rows(); ++p)
                xb[p] = b.x(p, ib);
            MarginalRow row;
            row.n = levels[i];
            row.n2 = levels[i + 1];
            row.t = t;
            row.ks = ks_statistic(xa, xb);
            row.pvalue = ks_pvalue(row.ks, xa.size(), xb.size());
            ks.push_back(row.ks);
            pv.push_back(row.pvalue);
            rep.rows.push_back(row);
        }
        int inv = 0;
        // an increase only counts when the larger distance is resolved above the noise floor
        for (std::size_t i = 1; i < ks.size(); ++i)
            if (ks[i] > ks[i - 1] && pv[i] < kFloorPvalue)
                ++inv;
        rep.inversions.push_back(inv);
    }
    rep.decreasing = std::all_of(rep.inversions.begin(), rep.inversions.end(), [](int i) { return i <= 1; });
    return rep;
}

}  // namespace

MarginalReport marginal_convergence(const TimeField& drift, SimulationConfig base, const std::vector<int>& levels,
                                    const std::vector<double>& times)
{
    if (levels.size() < 2)
        throw std::invalid_argument("marginal_convergence: need at least two levels");
    base.record_times = times;
    std::vector<PathEnsemble> ens;
    for (int n : levels) {
        base.drift = mollify_drift(drift, n);
        ens.push_back(euler_maruyama(base));
    }
    return marginal_table(levels, ens, times);
}

// -------------------------------------------------------------------- Brox

bool BroxReport::pass() const
{
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

nlohmann::json BroxReport::to_json() const
{
    nlohmann::json j;
    j["alpha"] = alpha;
    j["seed"] = seed;
    j["bundle"] = {{"N", bundle.N},         {"M", bundle.M},           {"paths", bundle.paths},
                   {"steps", bundle.steps}, {"horizon", bundle.horizon}, {"levels", bundle.levels},
                   {"epsilon", bundle.epsilon}};
    j["solve"] = solve;
    j["martingale"] = nlohmann::json::array();
    for (const auto& [n, m] : martingale)
        j["martingale"].push_back({{"n", n}, {"report", m.to_json()}});
    j["marginals"] = marginals.to_json();
    j["assertions"] = nlohmann::json::array();
    for (const auto& a : assertions)
        j["assertions"].push_back(a.to_json());
    j["pass"] = pass();
    return j;
}

BroxReport brox_demo(std::uint64_t seed, double alpha, const BroxBundle& bundle)
{
    if (!(alpha > 1.75 && alpha <= 2.0))
        throw RefusedParameter("brox-demo: alpha = " + std::to_string(alpha) +
                               " is outside (7/4, 2], where the quenched martingale problem is well posed");
    if (bundle.levels.empty())
        throw std::invalid_argument("brox-demo: no mollification levels");
    const FourierGrid grid(bundle.N);
    const int nmax = bundle.N / 2 - 1;
    for (int n : bundle.levels)
        if (n < 0 || n > nmax)
            throw std::invalid_argument("brox-demo: level " + std::to_string(n) + " outside [0, N/2 - 1]");

    BroxReport rep;
    rep.alpha = alpha;
    rep.seed = seed;
    rep.bundle = bundle;
    // beta = -1/2 - eps must stay above (2 - 2 alpha) / 3
    rep.bundle.epsilon = std::min(bundle.epsilon, (4.0 * alpha - 7.0) / 12.0);

    const MultiplierCache cache(StableSymbol::fractional_laplacian(alpha), grid);
    const WhiteNoiseSample xi = sample_white_noise(seed, nmax, grid);
    const auto times = uniform_times(bundle.horizon, bundle.M);
    const EnhancedDrift v = lift_white_noise(xi, cache, times, rep.bundle.epsilon);
    const double theta = default_theta_rough(v.beta, alpha);

    // f = 1, u^T = 0: the solution is -(T - t) whatever the drift
    BackwardData trivial;
    trivial.f = Forcing::from_field(TimeField::constant(times, PeriodicField::constant(grid, 1.0)));
    trivial.terminal = PeriodicField(grid);
    trivial.horizon = bundle.horizon;
    trivial.theta = theta;
    const ParacontrolledSolution s0 = solve_rough(v, cache, trivial);
    double dev = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        PeriodicField e = s0.u[k];
        e.coeffs()(0, 0) += bundle.horizon - times[k];
        dev = std::max(dev, sup_norm(e));
    }

    // f = V1, u^T = 0: the drift-identifying equation
    BackwardData drift_data;
    drift_data.f = Forcing::drift(0);
    drift_data.terminal = PeriodicField(grid);
    drift_data.horizon = bundle.horizon;
    drift_data.theta = theta;
    const ParacontrolledSolution s1 = solve_rough(v, cache, drift_data);

    rep.solve = {{"beta", v.beta},
                 {"theta", theta},
                 {"norm_V1", v.norm_v1},
                 {"norm_V2", v.norm_v2},
                 {"notes", v.notes},
                 {"white_noise_seed", seed},
                 {"white_noise_n", nmax},
                 {"constant_forcing", s0.diagnostics.to_json()},
                 {"drift_forcing", s1.diagnostics.to_json()}};

    rep.assertions.push_back(make_assertion("reconstruction residual, f = 1", s0.diagnostics.reconstruction_residual,
                                            "<=", 1e-8));
    rep.assertions.push_back(make_assertion("sup |u + (T - t)|, f = 1", dev, "<=", 1e-10));
    rep.assertions.push_back(make_assertion("reconstruction residual, f = V1", s1.diagnostics.reconstruction_residual,
                                            "<=", 1e-8));

    const double T = bundle.horizon;
    const std::vector<std::pair<double, double>> pairs{{0.25 * T, 0.5 * T}, {0.5 * T, T}};
    const std::vector<double> mtimes{0.25 * T, 0.5 * T, T};
    SimulationConfig cfg;
    cfg.sym = cache.symbol();
    cfg.paths = bundle.paths;
    cfg.steps = bundle.steps;
    cfg.horizon = T;
    cfg.seed = seed;
    cfg.forcing = v.v1;
    cfg.record_times = martingale_record_times(pairs);
    cfg.record_times.insert(cfg.record_times.end(), mtimes.begin(), mtimes.end());
    std::vector<PathEnsemble> ens;
    for (int n : bundle.levels) {
        cfg.drift = mollify_drift(v.v1, n);
        ens.push_back(euler_maruyama(cfg));
        rep.martingale.push_back({n, martingale_from_ensemble(s1.u, ens.back(), pairs, 3.0)});
    }
    rep.assertions.push_back(make_assertion("martingale max |z| at n = " + std::to_string(bundle.levels.back()),
                                            rep.martingale.back().second.max_abs_z, "<=", 3.0));
    if (bundle.levels.size() >= 2) {
        rep.marginals = marginal_table(bundle.levels, ens, mtimes);
        for (std::size_t i = 0; i < mtimes.size(); ++i)
            rep.assertions.push_back(make_assertion("KS inversions over n at t = " + std::to_string(mtimes[i]),
                                                    rep.marginals.inversions[i], "<=", 1.0));
    }
    return rep;
}

}  // namespace paracontrol
