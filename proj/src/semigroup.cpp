#include "paracontrol/semigroup.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace paracontrol {

namespace {

void require_grid(const MultiplierCache& cache, const FourierGrid& g, const char* what)
{
    if (cache.grid() != g)
        throw std::invalid_argument(std::string(what) + ": grid mismatch with multiplier cache");
}

// (1 - e^{-x}) / x
double phi1(double x)
{
    if (x == 0.0)
        return 1.0;
    return -std::expm1(-x) / x;
}

// (1 - e^{-x}(1 + x)) / x^2
double phi2(double x)
{
    if (x < 0.5) {
        double term = 1.0, sum = 0.0, fact = 2.0;
        double xp = 1.0;
        for (int n = 2; n < 30; ++n) {
            if (n > 2) {
                fact *= n;
                xp *= -x;
            }
            term = (n - 1) * xp / fact;
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum))
                break;
        }
        return sum;
    }
    return (1.0 - std::exp(-x) * (1.0 + x)) / (x * x);
}

}  // namespace

StableSymbol::StableSymbol(double alpha, int dim, std::vector<StableAtom> atoms)
    : alpha_(alpha), dim_(dim), atoms_(std::move(atoms))
{
    if (!(alpha > 0.0 && alpha <= 2.0))
        throw std::invalid_argument("StableSymbol: alpha outside (0, 2]");
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("StableSymbol: dimension must be 1 or 2");
    if (atoms_.empty())
        throw std::invalid_argument("StableSymbol: no atoms");
    for (auto& a : atoms_) {
        if (!(a.weight > 0.0))
            throw std::invalid_argument("StableSymbol: atom weights must be positive");
        if (dim == 1)
            a.direction(1) = 0.0;
        const double nrm = a.direction.norm();
        if (std::abs(nrm - 1.0) > 1e-12)
            throw std::invalid_argument("StableSymbol: atom directions must be unit vectors");
    }
    for (const auto& a : atoms_) {
        bool found = false;
        for (const auto& b : atoms_)
            if ((a.direction + b.direction).norm() < 1e-12 && std::abs(a.weight - b.weight) <= 1e-12 * a.weight)
                found = true;
        if (!found)
            throw std::invalid_argument("StableSymbol: atoms must be symmetric under xi -> -xi");
    }
    if (dim == 2) {
        bool spans = false;
        for (const auto& a : atoms_)
            for (const auto& b : atoms_)
                if (std::abs(a.direction(0) * b.direction(1) - a.direction(1) * b.direction(0)) > 1e-9)
                    spans = true;
        if (!spans)
            throw std::invalid_argument("StableSymbol: atom directions do not span R^2");
    }
}

double angular_moment(double alpha)
{
    return 2.0 * std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (alpha + 1.0)) / std::tgamma(0.5 * alpha + 1.0);
}

StableSymbol StableSymbol::fractional_laplacian(double alpha, int dim, int angular_atoms)
{
    const double scale = std::pow(2.0 * std::numbers::pi, alpha);
    if (dim == 1)
        return StableSymbol(alpha, 1, {{Eigen::Vector2d(1.0, 0.0), 0.5 * scale}, {Eigen::Vector2d(-1.0, 0.0), 0.5 * scale}});
    if (angular_atoms < 4 || angular_atoms % 2 != 0)
        throw std::invalid_argument("fractional_laplacian: angular atom count must be even and >= 4");
    const double w = scale * 2.0 * std::numbers::pi / (angular_atoms * angular_moment(alpha));
    std::vector<StableAtom> atoms;
    for (int m = 0; m < angular_atoms; ++m) {
        const double phi = 2.0 * std::numbers::pi * m / angular_atoms;
        atoms.push_back({Eigen::Vector2d(std::cos(phi), std::sin(phi)), w});
    }
    // exact antipodes
    for (int m = angular_atoms / 2; m < angular_atoms; ++m)
        atoms[m].direction = -atoms[m - angular_atoms / 2].direction;
    return StableSymbol(alpha, 2, std::move(atoms));
}

StableSymbol StableSymbol::scaled(double alpha, double scale)
{
    return StableSymbol(alpha, 1, {{Eigen::Vector2d(1.0, 0.0), 0.5 * scale}, {Eigen::Vector2d(-1.0, 0.0), 0.5 * scale}});
}

double StableSymbol::total_weight() const
{
    double s = 0.0;
    for (const auto& a : atoms_)
        s += a.weight;
    return s;
}

double StableSymbol::operator()(const Eigen::Vector2d& k) const
{
    double s = 0.0;
    for (const auto& a : atoms_) {
        const double p = std::abs(a.direction.dot(k));
        if (p > 0.0)
            s += a.weight * std::pow(p, alpha_);
    }
    return s;
}

double psi(const StableSymbol& sym, const Frequency& k)
{
    return sym(Eigen::Vector2d(double(k[0]), sym.dim() == 2 ? double(k[1]) : 0.0));
}

MultiplierCache::MultiplierCache(const StableSymbol& sym, const FourierGrid& grid) : sym_(sym), grid_(grid)
{
    if (sym.dim() != grid.dim())
        throw std::invalid_argument("MultiplierCache: symbol and grid dimensions differ");
    psi_.resize(grid.size());
    lower_ = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        psi_(i) = paracontrol::psi(sym, grid.frequencies(i));
        const double r = grid.radius(i);
        if (r > 0.0)
            lower_ = std::min(lower_, psi_(i) / std::pow(r, sym.alpha()));
    }
    if (!(lower_ > 0.0))
        throw std::invalid_argument("MultiplierCache: symbol is not elliptic on the grid");
}

PeriodicField apply_generator(const MultiplierCache& cache, const PeriodicField& u)
{
    require_grid(cache, u.grid(), "apply_generator");
    PeriodicField out = u;
    out.coeffs().colwise() *= cache.psi().cast<Complex>();
    return out;
}

PeriodicField semigroup_apply(const MultiplierCache& cache, double t, const PeriodicField& u)
{
    require_grid(cache, u.grid(), "semigroup_apply");
    if (t < 0.0)
        throw std::invalid_argument("semigroup_apply: negative time");
    if (t == 0.0)
        return u;
    PeriodicField out = u;
    out.coeffs().colwise() *= cache.decay(t).cast<Complex>();
    return out;
}

StepWeights step_weights(const Eigen::ArrayXd& psi, double h)
{
    StepWeights w;
    const Eigen::Index n = psi.size();
    w.decay.resize(n);
    w.near.resize(n);
    w.far.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = h * psi(i);
        w.decay(i) = std::exp(-x);
        const double i0 = h * phi1(x), i1 = h * phi2(x);
        w.near(i) = i0 - i1;
        w.far(i) = i1;
    }
    return w;
}

namespace {

// backward recursion; out[i] = J v(t_i)
std::vector<CoeffArray> jt_recursion(const MultiplierCache& cache, const TimeField& v)
{
    const auto& t = v.times();
    const std::size_t m = t.size();
    std::vector<CoeffArray> out(m);
    out[m - 1] = CoeffArray::Zero(cache.grid().size(), v.components());
    StepWeights w;
    double last_h = -1.0;
    for (std::size_t i = m - 1; i-- > 0;) {
        const double h = t[i + 1] - t[i];
        if (std::abs(h - last_h) > 1e-15 * h) {
            w = step_weights(cache.psi(), h);
            last_h = h;
        }
        out[i] = out[i + 1].colwise() * w.decay.cast<Complex>() + v[i].coeffs().colwise() * w.near.cast<Complex>() +
                 v[i + 1].coeffs().colwise() * w.far.cast<Complex>();
    }
    return out;
}

bool all_real(const TimeField& v)
{
    for (const auto& f : v.values())
        if (!f.is_real())
            return false;
    return true;
}

}  // namespace

TimeField jt_apply_all(const MultiplierCache& cache, const TimeField& v)
{
    require_grid(cache, v.grid(), "jt_apply");
    auto coeffs = jt_recursion(cache, v);
    const bool real = all_real(v);
    std::vector<PeriodicField> vals;
    vals.reserve(coeffs.size());
    for (auto& c : coeffs)
        vals.emplace_back(cache.grid(), std::move(c), real);
    return TimeField(v.times(), std::move(vals), v.regularity() + cache.alpha());
}

PeriodicField jt_apply(const MultiplierCache& cache, const TimeField& v, double t)
{
    require_grid(cache, v.grid(), "jt_apply");
    const auto& ts = v.times();
    if (t < ts.front() - 1e-12 || t > ts.back() + 1e-12)
        throw std::out_of_range("jt_apply: time outside the grid span");
    auto coeffs = jt_recursion(cache, v);
    const bool real = all_real(v);
    std::size_t i = 0;
    while (i + 1 < ts.size() && ts[i + 1] <= t)
        ++i;
    if (std::abs(ts[i] - t) <= 1e-12 || i + 1 == ts.size())
        return PeriodicField(cache.grid(), coeffs[i], real);
    // partial segment [t, t_{i+1}]
    const double h = ts[i + 1] - t;
    const double lam = (t - ts[i]) / (ts[i + 1] - ts[i]);
    CoeffArray vt = (1.0 - lam) * v[i].coeffs() + lam * v[i + 1].coeffs();
    StepWeights w = step_weights(cache.psi(), h);
    CoeffArray out = coeffs[i + 1].colwise() * w.decay.cast<Complex>() + vt.colwise() * w.near.cast<Complex>() +
                     v[i + 1].coeffs().colwise() * w.far.cast<Complex>();
    return PeriodicField(cache.grid(), std::move(out), real);
}

TimeField commutator_jt(const MultiplierCache& cache, const TimeField& g, const TimeField& h)
{
    if (!same_times(g.times(), h.times()) || g.grid() != h.grid())
        throw std::invalid_argument("commutator_jt: grid mismatch");
    std::vector<PeriodicField> gh;
    gh.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        gh.push_back(paraproduct(g[i], h[i]));
    TimeField left = jt_apply_all(cache, TimeField(g.times(), std::move(gh)));
    TimeField jh = jt_apply_all(cache, h);
    std::vector<PeriodicField> out;
    out.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        out.push_back(left[i] - paraproduct(g[i], jh[i]));
    return TimeField(g.times(), std::move(out));
}

PeriodicField commutator_semigroup(const MultiplierCache& cache, double t, const PeriodicField& u,
                                   const PeriodicField& v)
{
    require_grid(cache, u.grid(), "commutator_semigroup");
    if (t < 0.0)
        throw std::invalid_argument("commutator_semigroup: negative time");
    return semigroup_apply(cache, t, paraproduct(u, v)) - paraproduct(u, semigroup_apply(cache, t, v));
}

}  // namespace paracontrol
