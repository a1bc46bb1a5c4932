#include "paracontrol/pde.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace paracontrol {

// ------------------------------------------------------------------ forcing

Forcing Forcing::from_field(TimeField f)
{
    if (f.components() != 1)
        throw std::invalid_argument("Forcing: scalar field expected");
    Forcing out;
    out.field = std::move(f);
    return out;
}

Forcing Forcing::drift(int j)
{
    if (j < 0)
        throw std::invalid_argument("Forcing: drift component must be >= 0");
    Forcing out;
    out.drift_component = j;
    return out;
}

TimeField Forcing::resolve(const EnhancedDrift& v) const
{
    if (is_drift()) {
        if (drift_component >= v.dim())
            throw std::invalid_argument("Forcing: drift component out of range");
        return v.v1.component(drift_component);
    }
    if (!field)
        throw std::invalid_argument("Forcing: no field given");
    return *field;
}

double default_theta_young(double beta, double alpha) { return 0.5 * ((1.0 - beta) + (beta + alpha)); }

double default_theta_rough(double beta, double alpha) { return 0.5 * ((2.0 - beta) / 2.0 + (beta + alpha)); }

int SolveDiagnostics::total_iterations() const
{
    int s = 0;
    for (const auto& i : intervals)
        s += i.iterations;
    return s;
}

nlohmann::json SolveDiagnostics::to_json() const
{
    nlohmann::json j;
    j["converged"] = converged;
    j["splits"] = splits;
    j["interval_length"] = interval_length;
    j["scale"] = scale;
    j["reconstruction_residual"] = reconstruction_residual;
    j["rejected_contractions"] = rejected_contractions;
    j["intervals"] = nlohmann::json::array();
    for (const auto& i : intervals)
        j["intervals"].push_back({{"start", i.start},
                                  {"end", i.end},
                                  {"iterations", i.iterations},
                                  {"relaxation", i.relaxation},
                                  {"contraction", i.contraction},
                                  {"residual", i.residual},
                                  {"kappa1", i.kappa1},
                                  {"kappa2", i.kappa2},
                                  {"prefactor1", i.prefactor1},
                                  {"prefactor2", i.prefactor2},
                                  {"handoff_sharp_norm", i.handoff_sharp_norm}});
    return j;
}

// ------------------------------------------------------------------- norms

double solution_norm(const TimeField& u, double theta, double alpha)
{
    return time_sup_besov(u, theta) + time_holder_seminorm(u, theta / alpha).total();
}

double paracontrolled_norm(const TimeField& u, const TimeField& uprime, const TimeField& usharp, double theta,
                           double alpha)
{
    return solution_norm(u, theta, alpha) + time_sup_besov(uprime, theta - 1.0) +
           time_sup_besov(usharp, 2.0 * theta - 1.0);
}

namespace {

using Slices = std::vector<PeriodicField>;

TimeField as_time_field(const std::vector<double>& times, std::size_t a, const Slices& s)
{
    return TimeField(std::vector<double>(times.begin() + a, times.begin() + a + s.size()), s);
}

Slices combine(const Slices& x, const Slices& y, double wx, double wy)
{
    Slices out;
    out.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out.push_back(wx * x[i] + wy * y[i]);
    return out;
}

PeriodicField drift_dot_grad(const PeriodicField& v1, const PeriodicField& u)
{
    PeriodicField s(u.grid(), 1, true);
    for (int j = 0; j < u.grid().dim(); ++j)
        s += product(v1.component(j), derivative(u, j));
    return s;
}

// v_k = P_{t_b - t_k} terminal + J^{t_b}(n)(t_k), k = a .. b
Slices mild_map(const MultiplierCache& cache, const std::vector<double>& t, std::size_t a, std::size_t b,
                const PeriodicField& terminal, const Slices& n)
{
    Slices out(b - a + 1, terminal);
    CoeffArray j = CoeffArray::Zero(cache.grid().size(), 1);
    StepWeights w;
    double last_h = -1.0;
    for (std::size_t k = b; k-- > a;) {
        const double h = t[k + 1] - t[k];
        if (std::abs(h - last_h) > 1e-15 * h) {
            w = step_weights(cache.psi(), h);
            last_h = h;
        }
        j = j.colwise() * w.decay.cast<Complex>() + n[k - a].coeffs().colwise() * w.near.cast<Complex>() +
            n[k + 1 - a].coeffs().colwise() * w.far.cast<Complex>();
        CoeffArray p = terminal.coeffs().colwise() * cache.decay(t[b] - t[k]).cast<Complex>();
        out[k - a] = PeriodicField(cache.grid(), p + j, terminal.is_real());
    }
    return out;
}

std::size_t steps_for(std::size_t m, int splits)
{
    const std::size_t div = std::size_t(1) << splits;
    return (m + div - 1) / div;
}

struct IterationOutcome {
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
    double contraction = 0.0;
};

// generic damped Picard loop; step(omega) performs one update and returns the residual
template <class Step>
IterationOutcome picard(const SolverOptions& opts, double scale, Step&& step)
{
    IterationOutcome out;
    std::vector<double> ratios;
    double prev = -1.0, first = -1.0;
    int high = 0;
    for (int k = 1; k <= opts.max_iterations; ++k) {
        const double r = step();
        out.iterations = k;
        out.residual = r;
        if (!std::isfinite(r))
            break;
        if (first < 0.0)
            first = r;
        if (r <= opts.tol * scale) {
            out.converged = true;
            break;
        }
        if (prev > 0.0) {
            const double q = r / prev;
            ratios.push_back(q);
            high = q >= opts.contraction_threshold ? high + 1 : 0;
            if (high >= 3 || r > 1e6 * first)
                break;
        }
        prev = r;
    }
    if (!ratios.empty()) {
        double lg = 0.0;
        for (double q : ratios)
            lg += std::log(std::max(q, 1e-300));
        out.contraction = std::exp(lg / double(ratios.size()));
    }
    return out;
}

Slices zero_nyquist_all(const TimeField& f)
{
    Slices out;
    out.reserve(f.size());
    for (const auto& v : f.values())
        out.push_back(zero_nyquist(v));
    return out;
}

void check_inputs(const EnhancedDrift& v, const MultiplierCache& cache, const BackwardData& data)
{
    v.validate();
    if (v.v1.grid() != cache.grid() || data.terminal.grid() != cache.grid())
        throw std::invalid_argument("solver: grid mismatch");
    if (std::abs(v.horizon() - data.horizon) > 1e-12 || std::abs(v.v1.start()) > 1e-12)
        throw std::invalid_argument("solver: drift time grid must span [0, T]");
    if (data.f.field && !same_times(data.f.field->times(), v.v1.times()))
        throw std::invalid_argument("solver: forcing and drift time grids differ");
}

}  // namespace

// -------------------------------------------------------------------- Young

YoungSolution solve_young(const EnhancedDrift& v, const MultiplierCache& cache, const BackwardData& data,
                          const SolverOptions& opts)
{
    check_inputs(v, cache, data);
    if (!v.young())
        throw std::invalid_argument("solve_young: beta <= (1 - alpha) / 2 is outside the Young regime");
    if (!(data.theta > 1.0 - v.beta && data.theta < v.beta + v.alpha))
        throw std::invalid_argument("solve_young: theta outside (1 - beta, beta + alpha)");

    const auto& t = v.v1.times();
    const std::size_t m = t.size() - 1;
    const Slices v1 = zero_nyquist_all(v.v1);
    const Slices f = zero_nyquist_all(data.f.resolve(v));
    const double alpha = cache.alpha();

    Slices u_all(m + 1, PeriodicField(cache.grid()));
    PeriodicField terminal = zero_nyquist(data.terminal);
    u_all[m] = terminal;

    YoungSolution sol;
    SolveDiagnostics& diag = sol.diagnostics;
    int splits = 0;
    std::size_t b = m;
    while (b > 0) {
        const std::size_t len = steps_for(m, splits);
        const std::size_t a = b >= len ? b - len : 0;
        auto phi = [&](const Slices& u) {
            Slices n;
            n.reserve(u.size());
            for (std::size_t k = a; k <= b; ++k)
                n.push_back(drift_dot_grad(v1[k], u[k - a]) - f[k]);
            return mild_map(cache, t, a, b, terminal, n);
        };
        const Slices zero(b - a + 1, PeriodicField(cache.grid()));
        Slices u0 = phi(zero);
        double scale = solution_norm(as_time_field(t, a, u0), data.theta, alpha);
        if (!(scale > 0.0))
            scale = 1.0;
        if (diag.scale == 0.0)
            diag.scale = scale;

        bool accepted = false;
        for (double omega : {opts.relaxation, opts.fallback_relaxation}) {
            Slices u = u0;
            Slices last;
            const IterationOutcome res = picard(opts, scale, [&] {
                Slices nv = phi(u);
                const double r = solution_norm(as_time_field(t, a, combine(nv, u, 1.0, -1.0)), data.theta, alpha);
                last = nv;
                u = combine(u, nv, 1.0 - omega, omega);
                return r;
            });
            if (res.converged) {
                for (std::size_t k = a; k <= b; ++k)
                    u_all[k] = last[k - a];
                IntervalDiagnostics id;
                id.start = t[a];
                id.end = t[b];
                id.iterations = res.iterations;
                id.relaxation = omega;
                id.contraction = res.contraction;
                id.residual = res.residual;
                id.kappa1 = (v.beta + alpha - data.theta) / alpha;
                id.prefactor1 = std::pow(t[b] - t[a], id.kappa1);
                diag.intervals.push_back(id);
                accepted = true;
                break;
            }
            diag.rejected_contractions.push_back(res.contraction);
        }
        if (!accepted) {
            ++splits;
            if (splits > opts.max_splits || steps_for(m, splits) < 1 || (len == 1))
                throw NonContractionError("solve_young: no contraction after " + std::to_string(opts.max_splits) +
                                              " interval halvings",
                                          diag);
            continue;
        }
        terminal = u_all[a];
        b = a;
    }
    diag.splits = splits;
    diag.interval_length = t[m] * double(steps_for(m, splits)) / double(m);
    diag.converged = true;
    sol.u = TimeField(t, std::move(u_all), data.theta);
    return sol;
}

// -------------------------------------------------------------------- rough

namespace {

struct RoughContext {
    const MultiplierCache& cache;
    int d;
    Slices v1;   // d components
    Slices v2;   // d * d components
    Slices jv;   // J^T V1, d components
    Slices jdv;  // d_j J^T V1^i, column i * d + j
    Slices g;    // J^T(d_j V1^i) (.) V1^j, column i * d + j
};

PeriodicField sharp_part(const RoughContext& c, std::size_t k, const PeriodicField& u, const PeriodicField& up)
{
    PeriodicField s = u;
    for (int i = 0; i < c.d; ++i)
        s -= paraproduct(up.component(i), c.jv[k].component(i));
    return s;
}

PeriodicField rough_product_slice(const RoughContext& c, std::size_t k, const PeriodicField& u, const PeriodicField& up,
                                  const PeriodicField& us)
{
    const int d = c.d;
    PeriodicField out(u.grid(), 1, true);
    for (int j = 0; j < d; ++j) {
        const PeriodicField vj = c.v1[k].component(j);
        PeriodicField ush = derivative(us, j);
        for (int i = 0; i < d; ++i)
            ush += paraproduct(derivative(up.component(i), j), c.jv[k].component(i));
        out += resonant(ush, vj);
        const Paraproducts pp = paraproducts(derivative(u, j), vj);
        out += pp.less;
        out += pp.greater;
        for (int i = 0; i < d; ++i) {
            const PeriodicField upi = up.component(i);
            out += product(upi, c.v2[k].component(i * d + j));
            out += resonant(paraproduct(upi, c.jdv[k].component(i * d + j)), vj);
            out -= product(upi, c.g[k].component(i * d + j));
        }
    }
    return out;
}

RoughContext make_rough_context(const EnhancedDrift& v, const MultiplierCache& cache)
{
    RoughContext c{cache, v.dim(), zero_nyquist_all(v.v1), zero_nyquist_all(*v.v2), {}, {}, {}};
    const TimeField jv = jt_apply_all(cache, TimeField(v.v1.times(), c.v1));
    const int d = c.d;
    c.jv.reserve(jv.size());
    for (std::size_t k = 0; k < jv.size(); ++k) {
        c.jv.push_back(jv[k]);
        PeriodicField jd(cache.grid(), d * d, true), g(cache.grid(), d * d, true);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const PeriodicField x = derivative(jv[k].component(i), j);
                jd.set_component(i * d + j, x);
                g.set_component(i * d + j, resonant(x, c.v1[k].component(j)));
            }
        c.jdv.push_back(std::move(jd));
        c.g.push_back(std::move(g));
    }
    return c;
}

PeriodicField derivative_shift(const PeriodicField& u, int drift_component)
{
    PeriodicField g = gradient(u);
    if (drift_component >= 0)
        g.coeffs()(0, drift_component) -= 1.0;
    return g;
}

}  // namespace

ParacontrolledSolution solve_rough(const EnhancedDrift& v, const MultiplierCache& cache, const BackwardData& data,
                                   const SolverOptions& opts)
{
    check_inputs(v, cache, data);
    if (!v.v2)
        throw std::invalid_argument("solve_rough: V2 is required");
    if (!(data.theta > (2.0 - v.beta) / 2.0 && data.theta < v.beta + v.alpha))
        throw std::invalid_argument("solve_rough: theta outside ((2 - beta) / 2, beta + alpha)");
    if (data.terminal_regularity < 2.0 * data.theta - 1.0)
        throw std::invalid_argument("solve_rough: terminal regularity below 2 theta - 1");

    const auto& t = v.v1.times();
    const std::size_t m = t.size() - 1;
    const int d = v.dim();
    const RoughContext ctx = make_rough_context(v, cache);
    const Slices f = zero_nyquist_all(data.f.resolve(v));
    const double alpha = cache.alpha();
    const int shift = data.f.is_drift() ? data.f.drift_component : -1;

    Slices u_all(m + 1, PeriodicField(cache.grid())), up_all(m + 1, PeriodicField(cache.grid(), d, true));
    PeriodicField terminal = zero_nyquist(data.terminal);

    ParacontrolledSolution sol;
    sol.theta = data.theta;
    SolveDiagnostics& diag = sol.diagnostics;
    int splits = 0;
    std::size_t b = m;
    while (b > 0) {
        const std::size_t len = steps_for(m, splits);
        const std::size_t a = b >= len ? b - len : 0;
        const std::size_t w = b - a + 1;

        struct State {
            Slices u, up, us;
        };
        auto phi = [&](const State& s) {
            Slices n;
            n.reserve(w);
            for (std::size_t k = a; k <= b; ++k)
                n.push_back(rough_product_slice(ctx, k, s.u[k - a], s.up[k - a], s.us[k - a]) - f[k]);
            State out;
            out.u = mild_map(cache, t, a, b, terminal, n);
            out.up.reserve(w);
            out.us.reserve(w);
            for (std::size_t k = a; k <= b; ++k) {
                out.up.push_back(derivative_shift(s.u[k - a], shift));
                out.us.push_back(sharp_part(ctx, k, out.u[k - a], out.up.back()));
            }
            return out;
        };
        auto dnorm = [&](const State& s) {
            return paracontrolled_norm(as_time_field(t, a, s.u), as_time_field(t, a, s.up), as_time_field(t, a, s.us),
                                       data.theta, alpha);
        };
        State zero;
        zero.u.assign(w, PeriodicField(cache.grid()));
        zero.up.assign(w, shift >= 0 ? derivative_shift(PeriodicField(cache.grid()), shift)
                                     : PeriodicField(cache.grid(), d, true));
        zero.us.assign(w, PeriodicField(cache.grid()));
        const State s0 = phi(zero);
        double scale = dnorm(s0);
        if (!(scale > 0.0))
            scale = 1.0;
        if (diag.scale == 0.0)
            diag.scale = scale;

        bool accepted = false;
        for (double omega : {opts.relaxation, opts.fallback_relaxation}) {
            State s = s0, last;
            const IterationOutcome res = picard(opts, scale, [&] {
                State nv = phi(s);
                State diff{combine(nv.u, s.u, 1.0, -1.0), combine(nv.up, s.up, 1.0, -1.0),
                           combine(nv.us, s.us, 1.0, -1.0)};
                const double r = dnorm(diff);
                last = nv;
                s = State{combine(s.u, nv.u, 1.0 - omega, omega), combine(s.up, nv.up, 1.0 - omega, omega),
                          combine(s.us, nv.us, 1.0 - omega, omega)};
                return r;
            });
            if (res.converged) {
                for (std::size_t k = a; k <= b; ++k) {
                    u_all[k] = last.u[k - a];
                    up_all[k] = derivative_shift(last.u[k - a], shift);
                }
                IntervalDiagnostics id;
                id.start = t[a];
                id.end = t[b];
                id.iterations = res.iterations;
                id.relaxation = omega;
                id.contraction = res.contraction;
                id.residual = res.residual;
                id.kappa1 = (v.beta + alpha - data.theta) / alpha;
                id.kappa2 = 2.0 * (alpha + v.beta - data.theta) / alpha;
                id.prefactor1 = std::pow(t[b] - t[a], id.kappa1);
                id.prefactor2 = std::pow(t[b] - t[a], id.kappa2);
                // terminal of u# for the next interval
                const PeriodicField hand = sharp_part(ctx, a, last.u[0], derivative_shift(last.u[0], shift));
                id.handoff_sharp_norm = besov_norm(hand, 2.0 * data.theta - 1.0);
                diag.intervals.push_back(id);
                accepted = true;
                break;
            }
            diag.rejected_contractions.push_back(res.contraction);
        }
        if (!accepted) {
            ++splits;
            if (splits > opts.max_splits || len == 1)
                throw NonContractionError("solve_rough: no contraction after " + std::to_string(splits - 1) +
                                              " interval halvings",
                                          diag);
            continue;
        }
        terminal = u_all[a];
        b = a;
    }
    // u' at the terminal time follows the same rule as elsewhere
    up_all[m] = derivative_shift(u_all[m], shift);
    Slices us_all;
    us_all.reserve(m + 1);
    for (std::size_t k = 0; k <= m; ++k)
        us_all.push_back(sharp_part(ctx, k, u_all[k], up_all[k]));

    diag.splits = splits;
    diag.interval_length = t[m] * double(steps_for(m, splits)) / double(m);
    diag.converged = true;
    sol.u = TimeField(t, std::move(u_all), data.theta);
    sol.uprime = TimeField(t, std::move(up_all), data.theta - 1.0);
    sol.usharp = TimeField(t, std::move(us_all), 2.0 * data.theta - 1.0);
    diag.reconstruction_residual = reconstruction_residual(sol, v, cache);
    return sol;
}

TimeField rough_product(const ParacontrolledSolution& sol, const EnhancedDrift& v, const MultiplierCache& cache)
{
    if (!v.v2)
        throw std::invalid_argument("rough_product: V2 is required");
    if (!same_times(sol.u.times(), v.v1.times()))
        throw std::invalid_argument("rough_product: time grid mismatch");
    const RoughContext ctx = make_rough_context(v, cache);
    Slices out;
    out.reserve(sol.u.size());
    for (std::size_t k = 0; k < sol.u.size(); ++k)
        out.push_back(rough_product_slice(ctx, k, sol.u[k], sol.uprime[k], sol.usharp[k]));
    return TimeField(sol.u.times(), std::move(out), v.beta);
}

double reconstruction_residual(const ParacontrolledSolution& sol, const EnhancedDrift& v, const MultiplierCache& cache)
{
    const TimeField jv = jt_apply_all(cache, TimeField(v.v1.times(), zero_nyquist_all(v.v1)));
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < sol.u.size(); ++k) {
        PeriodicField r = sol.u[k] - sol.usharp[k];
        for (int i = 0; i < v.dim(); ++i)
            r -= paraproduct(sol.uprime[k].component(i), jv[k].component(i));
        num = std::max(num, sup_norm(r));
        den = std::max(den, sup_norm(sol.u[k]));
    }
    return den > 0.0 ? num / den : num;
}

// ---------------------------------------------------------------- classical

TimeField classical_solve(const TimeField& v, const MultiplierCache& cache, const BackwardData& data)
{
    if (v.grid() != cache.grid() || data.terminal.grid() != cache.grid())
        throw std::invalid_argument("classical_solve: grid mismatch");
    const auto& t = v.times();
    const std::size_t m = t.size() - 1;
    const Slices v1 = zero_nyquist_all(v);
    Slices f;
    if (data.f.is_drift())
        f = zero_nyquist_all(v.component(data.f.drift_component));
    else if (data.f.field) {
        if (!same_times(data.f.field->times(), t))
            throw std::invalid_argument("classical_solve: forcing and drift time grids differ");
        f = zero_nyquist_all(*data.f.field);
    } else
        throw std::invalid_argument("classical_solve: no forcing given");

    Slices u(m + 1, PeriodicField(cache.grid()));
    u[m] = zero_nyquist(data.terminal);
    StepWeights w;
    double last_h = -1.0;
    PeriodicField n_next = drift_dot_grad(v1[m], u[m]) - f[m];
    for (std::size_t k = m; k-- > 0;) {
        const double h = t[k + 1] - t[k];
        if (std::abs(h - last_h) > 1e-15 * h) {
            w = step_weights(cache.psi(), h);
            last_h = h;
        }
        const Eigen::ArrayXcd dec = w.decay.cast<Complex>(), nr = w.near.cast<Complex>(), fr = w.far.cast<Complex>();
        CoeffArray base = u[k + 1].coeffs().colwise() * dec;
        CoeffArray pred = base + n_next.coeffs().colwise() * (nr + fr);
        const PeriodicField up(cache.grid(), pred, true);
        const PeriodicField n_pred = drift_dot_grad(v1[k], up) - f[k];
        CoeffArray corr = base + n_pred.coeffs().colwise() * nr + n_next.coeffs().colwise() * fr;
        u[k] = PeriodicField(cache.grid(), std::move(corr), true);
        n_next = drift_dot_grad(v1[k], u[k]) - f[k];
    }
    return TimeField(t, std::move(u), data.theta);
}

// --------------------------------------------------------------- Lipschitz

std::vector<LipschitzRow> lipschitz_probe(const SolverFn& solver, const ProbeInput& base,
                                          const std::vector<ProbeInput>& perturbed, double theta)
{
    const TimeField u = solver(base);
    const double alpha = base.drift.alpha, beta = base.drift.beta;
    const TimeField fb = base.data.f.resolve(base.drift);
    std::vector<LipschitzRow> rows;
    for (const auto& p : perturbed) {
        const TimeField w = solver(p);
        LipschitzRow row;
        row.label = p.label;
        row.numerator = solution_norm(u - w, theta, alpha);
        double den = besov_norm(base.data.terminal - p.data.terminal, 2.0 * theta - 1.0);
        den += time_sup_besov(fb - p.data.f.resolve(p.drift), beta);
        den += time_sup_besov(base.drift.v1 - p.drift.v1, beta);
        if (base.drift.v2 && p.drift.v2)
            den += time_sup_besov(*base.drift.v2 - *p.drift.v2, 2.0 * beta + alpha - 1.0);
        row.denominator = den;
        row.ratio = den > 0.0 ? row.numerator / den : 0.0;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace paracontrol
