#include "paracontrol/levy.hpp"

#include <unsupported/Eigen/SpecialFunctions>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace paracontrol {

namespace {

constexpr double kPi = std::numbers::pi;

// lower regularized incomplete gamma P(a, x)
double gamma_p(double a, double x)
{
    Eigen::Array<double, 1, 1> aa, xx;
    aa(0) = a;
    xx(0) = x;
    return Eigen::igamma(aa, xx)(0);
}

// int_lo^hi y^{2a - 1} e^{lambda y^2} dy for a > 0
double gaussian_power_integral(double a, double lambda, double lo, double hi)
{
    if (lambda == 0.0)
        return (std::pow(hi, 2.0 * a) - std::pow(lo, 2.0 * a)) / (2.0 * a);
    const double nl = -lambda;
    return 0.5 * std::pow(nl, -a) * std::tgamma(a) * (gamma_p(a, nl * hi * hi) - gamma_p(a, nl * lo * lo));
}

}  // namespace

double sample_standard_stable(double alpha, Rng& rng)
{
    if (alpha == 2.0) {
        std::normal_distribution<double> n01;
        return std::sqrt(2.0) * n01(rng);
    }
    const double v = kPi * (uniform_open(rng) - 0.5);
    const double w = -std::log(uniform_open(rng));
    if (alpha == 1.0)
        return std::tan(v);
    return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
           std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

double sample_stable_increment(const StableSymbol& sym, double dt, Rng& rng)
{
    if (sym.dim() != 1)
        throw std::invalid_argument("sample_stable_increment: one-dimensional symbol expected");
    if (!(dt > 0.0))
        throw std::invalid_argument("sample_stable_increment: dt must be positive");
    const double c = sym.total_weight();
    if (sym.alpha() == 2.0) {
        std::normal_distribution<double> n01;
        return std::sqrt(c * dt / (2.0 * kPi * kPi)) * n01(rng);
    }
    return std::pow(c * dt, 1.0 / sym.alpha()) / (2.0 * kPi) * sample_standard_stable(sym.alpha(), rng);
}

Eigen::Vector2d sample_stable_increment_2d(const StableSymbol& sym, double dt, Rng& rng)
{
    if (sym.dim() != 2)
        throw std::invalid_argument("sample_stable_increment_2d: two-dimensional symbol expected");
    if (!(dt > 0.0))
        throw std::invalid_argument("sample_stable_increment_2d: dt must be positive");
    Eigen::Vector2d out = Eigen::Vector2d::Zero();
    const auto& atoms = sym.atoms();
    std::vector<bool> used(atoms.size(), false);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (used[i])
            continue;
        for (std::size_t j = i + 1; j < atoms.size(); ++j)
            if (!used[j] && (atoms[i].direction + atoms[j].direction).norm() < 1e-12) {
                used[j] = true;
                break;
            }
        used[i] = true;
        const StableSymbol pair = StableSymbol::scaled(sym.alpha(), 2.0 * atoms[i].weight);
        out += atoms[i].direction * sample_stable_increment(pair, dt, rng);
    }
    return out;
}

void JumpMeasure::validate() const
{
    if (!(intensity > 0.0) || !(alpha > 0.0 && alpha < 2.0) || !(cutoff > 0.0) || !(inner > 0.0 && inner < cutoff))
        throw std::invalid_argument("JumpMeasure: need K > 0, alpha in (0, 2), 0 < inner < cutoff");
}

double JumpMeasure::mass() const
{
    return 2.0 * intensity * (std::pow(inner, -alpha) - std::pow(cutoff, -alpha)) / alpha;
}

double JumpMeasure::moment(int i, double lambda) const
{
    if (i < 1)
        throw std::invalid_argument("JumpMeasure::moment: order must be >= 1");
    if (lambda > 0.0)
        throw std::invalid_argument("JumpMeasure::moment: lambda must be <= 0");
    return 2.0 * intensity * gaussian_power_integral(0.5 * (2 * i - alpha), lambda, inner, cutoff);
}

double JumpMeasure::mgf_exponent(double lambda) const
{
    if (lambda > 0.0)
        throw std::invalid_argument("JumpMeasure::mgf_exponent: lambda must be <= 0");
    if (lambda == 0.0)
        return 0.0;
    // integration by parts against y^{-1-alpha}
    auto boundary = [&](double y) { return -std::expm1(lambda * y * y) * std::pow(y, -alpha) / alpha; };
    const double inner_part = (2.0 * lambda / alpha) * gaussian_power_integral(0.5 * (2.0 - alpha), lambda, inner, cutoff);
    return 2.0 * intensity * (boundary(cutoff) - boundary(inner) + inner_part);
}

double JumpRecord::sum_squares() const
{
    double s = 0.0;
    for (double y : sizes)
        s += y * y;
    return s;
}

nlohmann::json JumpRecord::to_json() const
{
    return {{"r", r},
            {"t", t},
            {"intensity", measure.intensity},
            {"alpha", measure.alpha},
            {"cutoff", measure.cutoff},
            {"inner_cutoff", measure.inner},
            {"expected_count", expected_count},
            {"times", times},
            {"sizes", sizes}};
}

namespace {

double sample_jump_size(const JumpMeasure& mu, Rng& rng)
{
    const double a = std::pow(mu.inner, -mu.alpha), b = std::pow(mu.cutoff, -mu.alpha);
    const double u = uniform_open(rng);
    const double y = std::pow(a - u * (a - b), -1.0 / mu.alpha);
    return rng() & 1ULL ? y : -y;
}

}  // namespace

JumpRecord sample_small_jumps(const JumpMeasure& mu, double r, double t, Rng& rng)
{
    mu.validate();
    if (!(t > r))
        throw std::invalid_argument("sample_small_jumps: need t > r");
    JumpRecord rec;
    rec.r = r;
    rec.t = t;
    rec.measure = mu;
    rec.expected_count = (t - r) * mu.mass();
    std::poisson_distribution<long> count(rec.expected_count);
    const long n = count(rng);
    rec.times.resize(n);
    rec.sizes.resize(n);
    for (long i = 0; i < n; ++i) {
        rec.times[i] = r + (t - r) * uniform_open(rng);
        rec.sizes[i] = sample_jump_size(mu, rng);
    }
    std::vector<std::size_t> order(n);
    for (long i = 0; i < n; ++i)
        order[i] = std::size_t(i);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rec.times[a] < rec.times[b]; });
    std::vector<double> ts(n), ys(n);
    for (long i = 0; i < n; ++i) {
        ts[i] = rec.times[order[i]];
        ys[i] = rec.sizes[order[i]];
    }
    rec.times.swap(ts);
    rec.sizes.swap(ys);
    return rec;
}

double sample_small_jump_square_sum(const JumpMeasure& mu, double span, Rng& rng)
{
    std::poisson_distribution<long> count(span * mu.mass());
    const long n = count(rng);
    double s = 0.0;
    for (long i = 0; i < n; ++i) {
        const double y = sample_jump_size(mu, rng);
        s += y * y;
    }
    return s;
}

std::vector<CampbellTerm> campbell_coefficients(int n)
{
    if (n < 0 || n > 6)
        throw std::out_of_range("campbell_coefficients: order must lie in [0, 6]");
    std::map<std::vector<int>, long long> level{{std::vector<int>(std::max(n, 1), 0), 1}};
    for (int step = 0; step < n; ++step) {
        std::map<std::vector<int>, long long> next;
        for (const auto& [omega, c] : level) {
            std::vector<int> w = omega;
            w[0] += 1;
            next[w] += c;
            for (std::size_t j = 0; j + 1 < omega.size(); ++j) {
                if (omega[j] == 0)
                    continue;
                std::vector<int> v = omega;
                v[j] -= 1;
                v[j + 1] += 1;
                next[v] += c * omega[j];
            }
        }
        level.swap(next);
    }
    std::vector<CampbellTerm> out;
    for (const auto& [omega, c] : level)
        out.push_back({omega, c});
    return out;
}

double campbell_mgf(const JumpMeasure& mu, double span, double lambda)
{
    mu.validate();
    return std::exp(span * mu.mgf_exponent(lambda));
}

double campbell_moment(int n, double lambda, double span, const JumpMeasure& mu)
{
    mu.validate();
    if (lambda > 0.0)
        throw std::invalid_argument("campbell_moment: lambda must be <= 0");
    const auto terms = campbell_coefficients(n);
    std::vector<double> m(std::max(n, 1));
    for (int i = 1; i <= n; ++i)
        m[i - 1] = span * mu.moment(i, lambda);
    double s = 0.0;
    for (const auto& term : terms) {
        double p = double(term.coefficient);
        for (std::size_t i = 0; i < term.omega.size(); ++i)
            p *= std::pow(m[i], term.omega[i]);
        s += p;
    }
    return campbell_mgf(mu, span, lambda) * s;
}

}  // namespace paracontrol
