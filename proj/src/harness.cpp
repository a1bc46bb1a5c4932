#include "paracontrol/harness.hpp"

#include "paracontrol/enhanced_drift.hpp"
#include "paracontrol/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace paracontrol {

namespace {

std::vector<double> log_spaced(double lo, double hi, int points)
{
    std::vector<double> out(points);
    for (int i = 0; i < points; ++i)
        out[i] = lo * std::pow(hi / lo, points == 1 ? 0.0 : double(i) / (points - 1));
    return out;
}

ScalingProbe finish_scaling(std::string name, std::string parameter, std::vector<double> params,
                            std::vector<double> values, double target)
{
    ScalingProbe p;
    p.name = std::move(name);
    p.parameter = std::move(parameter);
    p.params = std::move(params);
    p.values = std::move(values);
    p.target = target;
    p.fit = loglog_fit(p.params, p.values);
    p.pass = std::abs(p.fit.slope - target) <= p.tolerance;
    return p;
}

// ratios[param][seed]
ConstantProbe finish_constant(std::string name, std::string parameter, std::vector<double> params,
                              const std::vector<std::vector<double>>& ratios, double limit)
{
    ConstantProbe p;
    p.name = std::move(name);
    p.parameter = std::move(parameter);
    p.params = std::move(params);
    p.limit = limit;
    for (const auto& r : ratios) {
        double s = 0.0;
        for (double v : r)
            s += v;
        p.mean.push_back(s / double(r.size()));
        p.max.push_back(*std::max_element(r.begin(), r.end()));
    }
    p.growth = *std::max_element(p.max.begin(), p.max.end()) / p.max.front();
    p.pass = std::isfinite(p.growth) && p.growth <= limit;
    return p;
}

std::vector<double> window_times(double horizon, double window, int steps)
{
    std::vector<double> t(steps + 1);
    for (int k = 0; k <= steps; ++k)
        t[k] = horizon - window + window * double(k) / steps;
    t.back() = horizon;
    return t;
}

}  // namespace

PeriodicField synthesize_field(const FourierGrid& grid, double theta, std::uint64_t seed, int max_mode)
{
    Rng rng = make_stream(seed, 0, 7);
    std::normal_distribution<double> n01;
    const int d = grid.dim();
    const int cap = max_mode < 0 ? grid.modes() / 2 - 1 : max_mode;
    PeriodicField f(grid, 1, true);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const Frequency k = grid.frequencies(i);
        if (grid.is_nyquist(i) || std::abs(k[0]) > cap || std::abs(k[1]) > cap)
            continue;
        const Eigen::Index j = grid.flat_index({-k[0], -k[1]});
        if (j < i)
            continue;
        if (j == i) {
            f.coeffs()(i, 0) = n01(rng);
            continue;
        }
        const double r = std::sqrt(double(k[0]) * k[0] + double(k[1]) * k[1]);
        const double a = std::pow(r, -theta - 0.5 * d) * std::sqrt(0.5);
        const Complex c(a * n01(rng), a * n01(rng));
        f.coeffs()(i, 0) = c;
        f.coeffs()(j, 0) = std::conj(c);
    }
    return f;
}

PeriodicField lacunary_field(const FourierGrid& grid, double theta)
{
    const int mb = grid.max_block();
    PeriodicField f(grid, 1, true);
    for (int j = 0; j <= mb; ++j)
        for (int k = 1; k < grid.modes() / 2; ++k)
            if (dyadic_weight(j, k, mb) == 1.0) {
                f += PeriodicField::cosine(grid, {k, 0}, std::pow(2.0, -j * theta));
                break;
            }
    return f;
}

nlohmann::json ScalingProbe::to_json() const
{
    return {{"name", name},         {"parameter", parameter}, {"params", params},
            {"values", values},     {"slope", fit.slope},     {"r2", fit.r2},
            {"target", target},     {"tolerance", tolerance}, {"pass", pass}};
}

nlohmann::json ConstantProbe::to_json() const
{
    return {{"name", name}, {"parameter", parameter}, {"params", params}, {"mean", mean},
            {"max", max},   {"growth", growth},       {"limit", limit},   {"pass", pass}};
}

std::vector<ScalingProbe> schauder_probe(const SchauderSettings& s)
{
    if (!(s.t_min > 0.0 && s.t_max > s.t_min) || s.points < 3)
        throw std::invalid_argument("schauder_probe: bad t range");
    const FourierGrid g(s.N);
    const MultiplierCache cache(StableSymbol::fractional_laplacian(s.alpha), g);
    const PeriodicField phi = lacunary_field(g, s.beta);
    const auto ts = log_spaced(s.t_min, s.t_max, s.points);
    const double a = s.alpha;
    std::vector<ScalingProbe> out;

    for (double th : {0.5 * a, a}) {
        std::vector<double> v;
        for (double t : ts)
            v.push_back(besov_norm(semigroup_apply(cache, t, phi), s.beta + th));
        out.push_back(finish_scaling("P_t smoothing, theta = " + std::to_string(th), "t", ts, v, -th / a));
    }
    {
        const double th = 0.5 * a;
        std::vector<double> v;
        for (double t : ts)
            v.push_back(besov_norm(semigroup_apply(cache, t, phi) - phi, s.beta - th));
        out.push_back(finish_scaling("P_t - Id, theta = " + std::to_string(th), "t", ts, v, th / a));
    }
    for (double th : {0.5 * a, 0.25 * a}) {
        std::vector<double> v;
        for (double w : ts) {
            const auto times = window_times(w, w, s.M);
            const TimeField j = jt_apply_all(cache, TimeField::constant(times, phi));
            v.push_back(time_sup_besov(j, s.beta + th));
        }
        out.push_back(
            finish_scaling("J^T gain, theta = " + std::to_string(th), "window", ts, v, 1.0 - th / a));
    }
    if (s.beta < 0.0) {
        // time regularity (beta + theta) / alpha of J^T v
        const double th = 0.5 * (a - s.beta);
        std::vector<double> v;
        for (double w : ts) {
            const auto times = window_times(w, w, s.M);
            const TimeField j = jt_apply_all(cache, TimeField::constant(times, phi));
            v.push_back(time_holder_seminorm(j, (s.beta + th) / a).total());
        }
        out.push_back(
            finish_scaling("J^T time Holder, theta = " + std::to_string(th), "window", ts, v, 1.0 - th / a));
    }
    return out;
}

std::vector<ConstantProbe> paraproduct_probe(const ParaproductSettings& s)
{
    if (s.sizes.empty() || s.seeds < 1)
        throw std::invalid_argument("paraproduct_probe: empty sweep");
    std::vector<std::vector<double>> res, linf, neg;
    std::vector<double> params;
    for (int N : s.sizes) {
        const FourierGrid g(N);
        params.push_back(N);
        std::vector<double> r1, r2, r3;
        for (int i = 0; i < s.seeds; ++i) {
            const std::uint64_t base = s.seed + 3 * std::uint64_t(i) + 1000003ULL * std::uint64_t(N);
            const PeriodicField u = synthesize_field(g, 0.6, base);
            const PeriodicField v = synthesize_field(g, -0.4, base + 1);
            const PeriodicField w = synthesize_field(g, -0.3, base + 2);
            const double nu = besov_norm(u, 0.6), nv = besov_norm(v, -0.4);
            r1.push_back(besov_norm(resonant(u, v), 0.2) / (nu * nv));
            r2.push_back(besov_norm(paraproduct(u, v), -0.4) / (sup_norm(u) * nv));
            r3.push_back(besov_norm(paraproduct(w, v), -0.7) / (besov_norm(w, -0.3) * nv));
        }
        res.push_back(r1);
        linf.push_back(r2);
        neg.push_back(r3);
    }
    return {finish_constant("resonant 0.6 x -0.4 in C^0.2", "N", params, res, 1.5),
            finish_constant("low-high, L^inf x C^-0.4", "N", params, linf, 1.5),
            finish_constant("low-high, C^-0.3 x C^-0.4 in C^-0.7", "N", params, neg, 1.5)};
}

std::vector<ConstantProbe> commutator_probe(const CommutatorSettings& s)
{
    const double kappa = 1.0 - (s.sigma + 1.0 - s.varsigma) / s.alpha;
    if (!(s.sigma > 0.0 && s.sigma < 1.0) || !(kappa > 0.0) || s.sigma - s.varsigma + 1.0 < -1.0)
        throw std::invalid_argument("commutator_probe: need 0 < sigma < 1 and -1 <= sigma - varsigma + 1 < alpha");
    if (!(s.gamma < 1.0) || s.vartheta < -1.0)
        throw std::invalid_argument("commutator_probe: need gamma < 1 and vartheta >= -1");
    const FourierGrid g(s.N);
    const MultiplierCache cache(StableSymbol::fractional_laplacian(s.alpha), g);

    std::vector<std::vector<double>> jt(s.windows.size()), sg(s.times.size());
    for (int i = 0; i < s.seeds; ++i) {
        const std::uint64_t base = s.seed + 5 * std::uint64_t(i);
        const PeriodicField g0 = synthesize_field(g, s.sigma, base), g1 = synthesize_field(g, s.sigma, base + 1);
        const PeriodicField h0 = synthesize_field(g, s.varsigma, base + 2),
                            h1 = synthesize_field(g, s.varsigma, base + 3);
        for (std::size_t w = 0; w < s.windows.size(); ++w) {
            const auto times = window_times(1.0, s.windows[w], s.M);
            std::vector<PeriodicField> gs, hs;
            for (double t : times) {
                gs.push_back(g0 + std::cos(2.0 * std::numbers::pi * t) * g1);
                hs.push_back(h0 + t * h1);
            }
            const TimeField gt(times, gs), ht(times, hs);
            const double num = time_sup_besov(commutator_jt(cache, gt, ht), 2.0 * s.sigma + 1.0);
            const double den = std::pow(s.windows[w], kappa) *
                               (time_sup_besov(gt, s.sigma) + time_holder_seminorm(gt, s.sigma / s.alpha).total()) *
                               time_sup_besov(ht, s.varsigma);
            jt[w].push_back(num / den);
        }
        const PeriodicField u = synthesize_field(g, s.gamma, base + 4), v = h0;
        const double nu = besov_norm(u, s.gamma), nv = besov_norm(v, s.beta);
        for (std::size_t k = 0; k < s.times.size(); ++k) {
            const double t = s.times[k];
            const double c = besov_norm(commutator_semigroup(cache, t, u, v), s.gamma + s.beta + s.vartheta);
            sg[k].push_back(std::pow(t, s.vartheta / s.alpha) * c / (nu * nv));
        }
    }
    return {finish_constant("J^T commutator in C^" + std::to_string(2 * s.sigma + 1), "window", s.windows, jt, 2.0),
            finish_constant("P_t commutator, t^{theta/alpha} normalized", "t", s.times, sg, 2.0)};
}

nlohmann::json CauchyReport::to_json() const
{
    nlohmann::json j;
    j["alpha"] = alpha;
    j["theta"] = theta;
    j["levels"] = levels;
    j["fraction"] = fraction;
    j["required"] = required;
    j["pass"] = pass;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows)
        j["rows"].push_back({{"seed", r.seed}, {"diffs", r.diffs}, {"decreasing", r.decreasing}});
    return j;
}

CauchyReport cauchy_decay(double alpha, int seeds, std::uint64_t first_seed, const std::vector<int>& levels, int N,
                          int M, double loss)
{
    if (levels.size() < 3)
        throw std::invalid_argument("cauchy_decay: need at least three levels");
    const FourierGrid g(N);
    const MultiplierCache cache(StableSymbol::fractional_laplacian(alpha), g);
    const auto times = uniform_times(1.0, M);
    CauchyReport rep;
    rep.alpha = alpha;
    rep.theta = alpha - 2.0 - loss;
    rep.levels = levels;
    int good = 0;
    for (int i = 0; i < seeds; ++i) {
        CauchyRow row;
        row.seed = first_seed + std::uint64_t(i);
        const WhiteNoiseSample xi = sample_white_noise(row.seed, levels.back(), g);
        std::vector<TimeField> v2;
        for (int n : levels)
            v2.push_back(*lift_white_noise(xi.truncated(n), cache, times).v2);
        for (std::size_t k = 0; k + 1 < v2.size(); ++k)
            row.diffs.push_back(time_sup_besov(v2[k + 1] - v2[k], rep.theta));
        row.decreasing = count_increases(row.diffs) == 0;
        good += row.decreasing;
        rep.rows.push_back(row);
    }
    rep.fraction = seeds > 0 ? double(good) / seeds : 0.0;
    rep.pass = rep.fraction >= rep.required;
    return rep;
}

nlohmann::json ChaosCheck::to_json() const
{
    return {{"j", j},         {"s", s},           {"t", t},       {"n", n},       {"oracle", oracle},
            {"mean", estimate.mean}, {"se", estimate.se}, {"z", z}, {"pass", pass}};
}

ChaosCheck chaos_monte_carlo(double alpha, int j, double s, double t, int n, int N, int samples,
                             std::uint64_t first_seed, double horizon)
{
    const FourierGrid g(N);
    const MultiplierCache cache(StableSymbol::fractional_laplacian(alpha), g);
    std::vector<double> z2;
    z2.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const PeriodicField xi = sample_white_noise(first_seed + std::uint64_t(i), n, g).to_field(g);
        const PeriodicField d =
            jt_gradient_constant(cache, xi, t, horizon) - jt_gradient_constant(cache, xi, s, horizon);
        z2.push_back(std::norm(lp_block(resonant(d, xi), j).evaluate(0.0)));
    }
    ChaosCheck c;
    c.j = j;
    c.s = s;
    c.t = t;
    c.n = n;
    c.oracle = chaos_variance_oracle(cache.symbol(), j, s, t, n, horizon, g.max_block());
    c.estimate = sample_mean(z2);
    c.z = c.estimate.se > 0.0 ? (c.estimate.mean - c.oracle) / c.estimate.se : 0.0;
    c.pass = std::abs(c.z) <= 3.0;
    return c;
}

}  // namespace paracontrol
