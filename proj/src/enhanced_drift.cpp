#include "paracontrol/enhanced_drift.hpp"

#include "paracontrol/field_io.hpp"
#include "paracontrol/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace paracontrol {

void EnhancedDrift::refresh_norms()
{
    norm_v1 = time_sup_besov(v1, beta);
    norm_v2 = v2 ? time_sup_besov(*v2, 2.0 * beta + alpha - 1.0) : 0.0;
}

void EnhancedDrift::validate() const
{
    if (!(beta > (2.0 - 2.0 * alpha) / 3.0))
        throw std::invalid_argument("EnhancedDrift: beta must exceed (2 - 2 alpha) / 3");
    if (!young() && !v2)
        throw std::invalid_argument("EnhancedDrift: beta <= (1 - alpha) / 2 requires V2");
    if (v2) {
        if (!same_times(v1.times(), v2->times()) || v1.grid() != v2->grid())
            throw std::invalid_argument("EnhancedDrift: V1 and V2 grids differ");
        if (v2->components() != dim() * dim())
            throw std::invalid_argument("EnhancedDrift: V2 must have d * d components");
    }
    if (v1.components() != dim())
        throw std::invalid_argument("EnhancedDrift: V1 must have d components");
}

EnhancedDrift lift_smooth(const TimeField& eta, const MultiplierCache& cache, double beta)
{
    const FourierGrid& g = eta.grid();
    if (g != cache.grid())
        throw std::invalid_argument("lift_smooth: grid mismatch");
    const int d = g.dim();
    if (eta.components() != d)
        throw std::invalid_argument("lift_smooth: drift must have d components");
    std::vector<PeriodicField> v2(eta.size(), PeriodicField(g, d * d, true));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            std::vector<PeriodicField> dji;
            dji.reserve(eta.size());
            for (const auto& e : eta.values())
                dji.push_back(derivative(e.component(i), j));
            const TimeField jd = jt_apply_all(cache, TimeField(eta.times(), std::move(dji)));
            for (std::size_t k = 0; k < eta.size(); ++k)
                v2[k].set_component(i * d + j, resonant(jd[k], eta[k].component(j)));
        }
    EnhancedDrift out;
    out.v1 = eta;
    out.v1.set_regularity(beta);
    out.v2 = TimeField(eta.times(), std::move(v2), 2.0 * beta + cache.alpha() - 1.0);
    out.beta = beta;
    out.alpha = cache.alpha();
    out.refresh_norms();
    return out;
}

EnhancedDrift young_drift(const TimeField& eta, double beta, double alpha)
{
    EnhancedDrift out;
    out.v1 = eta;
    out.v1.set_regularity(beta);
    out.beta = beta;
    out.alpha = alpha;
    out.refresh_norms();
    return out;
}

Complex WhiteNoiseSample::coefficient(int k) const
{
    if (std::abs(k) > n)
        return 0.0;
    return k >= 0 ? coeffs[k] : std::conj(coeffs[-k]);
}

PeriodicField WhiteNoiseSample::to_field(const FourierGrid& grid) const
{
    if (grid.dim() != 1)
        throw std::invalid_argument("WhiteNoiseSample: one-dimensional grid expected");
    if (n > grid.modes() / 2 - 1)
        throw std::invalid_argument("WhiteNoiseSample: truncation too large for the grid");
    PeriodicField f(grid, 1, true);
    for (int k = -n; k <= n; ++k)
        f.set_coeff({k, 0}, coefficient(k));
    return f;
}

WhiteNoiseSample WhiteNoiseSample::truncated(int m) const
{
    if (m > n || m < 0)
        throw std::invalid_argument("WhiteNoiseSample::truncated: level out of range");
    WhiteNoiseSample w = *this;
    w.n = m;
    w.coeffs.resize(m + 1);
    return w;
}

WhiteNoiseSample sample_white_noise(std::uint64_t seed, int n, const FourierGrid& grid, bool zero_mean)
{
    if (n < 0 || n > grid.modes() / 2 - 1)
        throw std::invalid_argument("sample_white_noise: n = " + std::to_string(n) + " too large for N = " +
                                    std::to_string(grid.modes()));
    Rng rng = make_stream(seed, 0, 0x77686974);
    std::normal_distribution<double> n01;
    WhiteNoiseSample w;
    w.seed = seed;
    w.n = n;
    w.zero_mean = zero_mean;
    w.coeffs.resize(n + 1);
    const double z0 = n01(rng);
    w.coeffs[0] = zero_mean ? 0.0 : z0;
    const double s = std::sqrt(0.5);
    for (int k = 1; k <= n; ++k) {
        const double re = n01(rng), im = n01(rng);
        w.coeffs[k] = Complex(s * re, s * im);
    }
    return w;
}

PeriodicField jt_gradient_constant(const MultiplierCache& cache, const PeriodicField& xi, double t, double horizon)
{
    const FourierGrid& g = cache.grid();
    const double tau = horizon - t;
    PeriodicField out = derivative(xi, 0);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        const double p = cache.psi()(i);
        const double m = p == 0.0 ? tau : -std::expm1(-tau * p) / p;
        out.coeffs().row(i) *= m;
    }
    return out;
}

EnhancedDrift lift_white_noise(const WhiteNoiseSample& xi, const MultiplierCache& cache,
                               const std::vector<double>& times, double epsilon)
{
    const FourierGrid& g = cache.grid();
    const PeriodicField f = xi.to_field(g);
    const double horizon = times.back();
    std::vector<PeriodicField> v2;
    v2.reserve(times.size());
    for (double t : times)
        v2.push_back(resonant(jt_gradient_constant(cache, f, t, horizon), f));
    EnhancedDrift out;
    out.beta = -0.5 - epsilon;
    out.alpha = cache.alpha();
    out.v1 = TimeField::constant(times, f, out.beta);
    out.v2 = TimeField(times, std::move(v2), 2.0 * out.beta + out.alpha - 1.0);
    if (!(cache.alpha() > 1.5))
        out.notes.push_back("alpha <= 3/2: white-noise lift outside the convergent range");
    out.refresh_norms();
    return out;
}

double resonant_weight(int k1, int k2, int max_block)
{
    const double r1 = std::abs(double(k1)), r2 = std::abs(double(k2));
    double s = 0.0;
    for (int l1 = -1; l1 <= max_block; ++l1) {
        const double p1 = dyadic_weight(l1, r1, max_block);
        if (p1 == 0.0)
            continue;
        for (int l2 = std::max(-1, l1 - 1); l2 <= std::min(max_block, l1 + 1); ++l2)
            s += p1 * dyadic_weight(l2, r2, max_block);
    }
    return s;
}

namespace {

// (rho_t - rho_s)^(k)
Complex rho_difference(const StableSymbol& sym, int k, double s, double t, double horizon)
{
    if (k == 0)
        return 0.0;
    const double p = psi(sym, {k, 0});
    const double a = -std::expm1(-(horizon - t) * p) / p;
    const double b = -std::expm1(-(horizon - s) * p) / p;
    return Complex(0.0, 2.0 * std::numbers::pi * k) * (a - b);
}

}  // namespace

double chaos_variance_oracle(const StableSymbol& sym, int j, double s, double t, int n, double horizon,
                             int max_block)
{
    if (sym.dim() != 1)
        throw std::invalid_argument("chaos_variance_oracle: one-dimensional symbol expected");
    const int w = 2 * n + 1;
    std::vector<Complex> rho(w);
    for (int k = -n; k <= n; ++k)
        rho[k + n] = rho_difference(sym, k, s, t, horizon);
    auto kernel = [&](int a, int b) {
        const double pj = dyadic_weight(j, std::abs(double(a + b)), max_block);
        if (pj == 0.0)
            return Complex(0.0);
        return pj * resonant_weight(a, b, max_block) * rho[a + n];
    };
    Complex mean = 0.0;
    for (int k = -n; k <= n; ++k)
        mean += kernel(k, -k);
    double diag = 0.0;
    Complex cross = 0.0;
    for (int a = -n; a <= n; ++a)
        for (int b = -n; b <= n; ++b) {
            const Complex kab = kernel(a, b);
            if (kab == Complex(0.0))
                continue;
            diag += std::norm(kab);
            cross += kab * std::conj(kernel(b, a));
        }
    return std::norm(mean) + diag + cross.real();
}

double chaos_mean_term(const StableSymbol& sym, double t, int n, double horizon, int max_block)
{
    Complex s = 0.0;
    for (int k = -n; k <= n; ++k) {
        if (k == 0)
            continue;
        const double p = psi(sym, {k, 0});
        const double m = -std::expm1(-(horizon - t) * p) / p;
        s += resonant_weight(k, -k, max_block) * Complex(0.0, 2.0 * std::numbers::pi * k) * m;
    }
    return s.real();
}

nlohmann::json drift_to_json(const EnhancedDrift& v)
{
    nlohmann::json j;
    j["beta"] = v.beta;
    j["alpha"] = v.alpha;
    j["norms"] = {{"V1", v.norm_v1}, {"V2", v.norm_v2}};
    j["V1"] = time_field_to_json(v.v1);
    if (v.v2)
        j["V2"] = time_field_to_json(*v.v2);
    return j;
}

}  // namespace paracontrol
