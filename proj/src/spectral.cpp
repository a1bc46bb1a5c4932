#include "paracontrol/spectral.hpp"

#include "transform.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace paracontrol {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require_same_grid(const PeriodicField& a, const PeriodicField& b, const char* what)
{
    if (a.grid() != b.grid())
        throw std::invalid_argument(std::string(what) + ": grid mismatch");
    if (a.components() != b.components())
        throw std::invalid_argument(std::string(what) + ": component count mismatch");
}

// Hermitian projection of one coefficient column
void symmetrize(const FourierGrid& g, Eigen::Ref<Eigen::ArrayXcd> c)
{
    const Eigen::Index n = g.size();
    Eigen::ArrayXcd src = c;
    for (Eigen::Index i = 0; i < n; ++i) {
        Frequency k = g.frequencies(i);
        Frequency mk{-k[0], g.dim() == 2 ? -k[1] : 0};
        for (int a = 0; a < g.dim(); ++a)
            if (mk[a] == g.modes() / 2)
                mk[a] = -g.modes() / 2;
        c(i) = 0.5 * (src(i) + std::conj(src(g.flat_index(mk))));
    }
}

PeriodicField field_from_padded(const FourierGrid& g, const Eigen::ArrayXXcd& vals, bool real, int pad)
{
    CoeffArray coeffs(g.size(), vals.cols());
    for (Eigen::Index c = 0; c < vals.cols(); ++c) {
        if (real) {
            Eigen::ArrayXcd re = vals.col(c).real().cast<Complex>();
            coeffs.col(c) = detail::analyze(g, re, pad);
            symmetrize(g, coeffs.col(c));
        } else {
            coeffs.col(c) = detail::analyze(g, vals.col(c), pad);
        }
    }
    return PeriodicField(g, std::move(coeffs), real);
}

}  // namespace

// ---------------------------------------------------------------- FourierGrid

FourierGrid::FourierGrid(int modes_per_axis, int dim) : modes_(modes_per_axis), dim_(dim)
{
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("FourierGrid: dimension must be 1 or 2");
    if (!is_power_of_two(modes_per_axis) || modes_per_axis < 8)
        throw std::invalid_argument("FourierGrid: modes per axis must be a power of two >= 8");
}

Frequency FourierGrid::frequencies(Eigen::Index flat) const
{
    if (dim_ == 1)
        return {frequency(int(flat)), 0};
    return {frequency(int(flat / modes_)), frequency(int(flat % modes_))};
}

Eigen::Index FourierGrid::flat_index(const Frequency& k) const
{
    if (dim_ == 1)
        return axis_index(k[0]);
    return Eigen::Index(axis_index(k[0])) * modes_ + axis_index(k[1]);
}

bool FourierGrid::resolvable(const Frequency& k) const
{
    for (int a = 0; a < dim_; ++a)
        if (k[a] < -modes_ / 2 || k[a] >= modes_ / 2)
            return false;
    return dim_ == 2 || k[1] == 0;
}

bool FourierGrid::is_nyquist(Eigen::Index flat) const
{
    const Frequency k = frequencies(flat);
    for (int a = 0; a < dim_; ++a)
        if (k[a] == -modes_ / 2)
            return true;
    return false;
}

double FourierGrid::radius(Eigen::Index flat) const
{
    const Frequency k = frequencies(flat);
    return dim_ == 1 ? std::abs(double(k[0])) : std::hypot(double(k[0]), double(k[1]));
}

int FourierGrid::max_block() const
{
    int l = 0;
    while ((1 << (l + 1)) <= modes_)
        ++l;
    return l - 1;
}

// -------------------------------------------------------------- PeriodicField

PeriodicField::PeriodicField(const FourierGrid& grid, int components, bool real)
    : grid_(grid), coeffs_(CoeffArray::Zero(grid.size(), components)), real_(real)
{
    if (components < 1)
        throw std::invalid_argument("PeriodicField: at least one component required");
}

PeriodicField::PeriodicField(const FourierGrid& grid, CoeffArray coeffs, bool real)
    : grid_(grid), coeffs_(std::move(coeffs)), real_(real)
{
    if (coeffs_.rows() != grid.size() || coeffs_.cols() < 1)
        throw std::invalid_argument("PeriodicField: coefficient array does not match grid");
}

PeriodicField PeriodicField::constant(const FourierGrid& grid, double value, int components)
{
    PeriodicField f(grid, components, true);
    f.coeffs_.row(0).setConstant(Complex(value, 0.0));
    return f;
}

PeriodicField PeriodicField::fourier_mode(const FourierGrid& grid, const Frequency& k)
{
    if (!grid.resolvable(k))
        throw std::invalid_argument("fourier_mode: frequency not resolvable");
    PeriodicField f(grid, 1, k[0] == 0 && k[1] == 0);
    f.coeffs_(grid.flat_index(k), 0) = 1.0;
    return f;
}

PeriodicField PeriodicField::cosine(const FourierGrid& grid, const Frequency& k, double amplitude)
{
    PeriodicField f(grid, 1, true);
    const Frequency mk{-k[0], -k[1]};
    if (!grid.resolvable(k) || !grid.resolvable(mk))
        throw std::invalid_argument("cosine: frequency not resolvable");
    f.coeffs_(grid.flat_index(k), 0) += 0.5 * amplitude;
    f.coeffs_(grid.flat_index(mk), 0) += 0.5 * amplitude;
    return f;
}

PeriodicField PeriodicField::sine(const FourierGrid& grid, const Frequency& k, double amplitude)
{
    PeriodicField f(grid, 1, true);
    const Frequency mk{-k[0], -k[1]};
    if (!grid.resolvable(k) || !grid.resolvable(mk))
        throw std::invalid_argument("sine: frequency not resolvable");
    f.coeffs_(grid.flat_index(k), 0) += Complex(0.0, -0.5 * amplitude);
    f.coeffs_(grid.flat_index(mk), 0) += Complex(0.0, 0.5 * amplitude);
    return f;
}

PeriodicField PeriodicField::from_values(const FourierGrid& grid, const Eigen::ArrayXXcd& values, bool real)
{
    if (values.rows() != grid.size())
        throw std::invalid_argument("from_values: sample count does not match grid");
    return field_from_padded(grid, values, real, 1);
}

Complex PeriodicField::coeff(const Frequency& k, int c) const { return coeffs_(grid_.flat_index(k), c); }

void PeriodicField::set_coeff(const Frequency& k, Complex value, int c) { coeffs_(grid_.flat_index(k), c) = value; }

PeriodicField PeriodicField::component(int c) const
{
    return PeriodicField(grid_, CoeffArray(coeffs_.col(c)), real_);
}

void PeriodicField::set_component(int c, const PeriodicField& f)
{
    if (f.grid() != grid_ || f.components() != 1)
        throw std::invalid_argument("set_component: incompatible field");
    coeffs_.col(c) = f.coeffs().col(0);
    real_ = real_ && f.is_real();
}

Eigen::ArrayXXcd PeriodicField::values() const
{
    Eigen::ArrayXXcd out(grid_.size(), coeffs_.cols());
    for (Eigen::Index c = 0; c < coeffs_.cols(); ++c) {
        out.col(c) = detail::synthesize(grid_, coeffs_.col(c), 1);
        if (real_)
            out.col(c) = out.col(c).real().cast<Complex>();
    }
    return out;
}

Complex PeriodicField::evaluate(double x, int c) const
{
    if (grid_.dim() != 1)
        throw std::invalid_argument("evaluate(x): one-dimensional field expected");
    const int n = grid_.modes();
    Complex sum = 0.0;
    for (int m = 0; m < n; ++m) {
        const int k = grid_.frequency(m);
        const Complex a = coeffs_(m, c);
        if (a == Complex(0.0))
            continue;
        if (k == -n / 2)
            sum += a * std::cos(std::numbers::pi * n * x);
        else
            sum += a * std::polar(1.0, 2.0 * std::numbers::pi * k * x);
    }
    return real_ ? Complex(sum.real(), 0.0) : sum;
}

Complex PeriodicField::evaluate(double x, double y, int c) const
{
    if (grid_.dim() != 2)
        throw std::invalid_argument("evaluate(x, y): two-dimensional field expected");
    const int n = grid_.modes();
    Complex sum = 0.0;
    for (Eigen::Index i = 0; i < grid_.size(); ++i) {
        const Complex a = coeffs_(i, c);
        if (a == Complex(0.0))
            continue;
        const Frequency k = grid_.frequencies(i);
        const double fx = k[0] == -n / 2 ? std::cos(std::numbers::pi * n * x) : 0.0;
        const double fy = k[1] == -n / 2 ? std::cos(std::numbers::pi * n * y) : 0.0;
        const Complex ex = k[0] == -n / 2 ? Complex(fx) : std::polar(1.0, 2.0 * std::numbers::pi * k[0] * x);
        const Complex ey = k[1] == -n / 2 ? Complex(fy) : std::polar(1.0, 2.0 * std::numbers::pi * k[1] * y);
        sum += a * ex * ey;
    }
    return real_ ? Complex(sum.real(), 0.0) : sum;
}

double PeriodicField::hermitian_defect() const
{
    double worst = 0.0;
    for (Eigen::Index c = 0; c < coeffs_.cols(); ++c) {
        Eigen::ArrayXcd sym = coeffs_.col(c);
        symmetrize(grid_, sym);
        worst = std::max(worst, 2.0 * (sym - coeffs_.col(c)).abs().maxCoeff());
    }
    return worst;
}

PeriodicField& PeriodicField::operator+=(const PeriodicField& o)
{
    require_same_grid(*this, o, "operator+=");
    coeffs_ += o.coeffs_;
    real_ = real_ && o.real_;
    return *this;
}

PeriodicField& PeriodicField::operator-=(const PeriodicField& o)
{
    require_same_grid(*this, o, "operator-=");
    coeffs_ -= o.coeffs_;
    real_ = real_ && o.real_;
    return *this;
}

PeriodicField& PeriodicField::operator*=(double s)
{
    coeffs_ *= s;
    return *this;
}

PeriodicField& PeriodicField::operator*=(Complex s)
{
    coeffs_ *= s;
    if (s.imag() != 0.0)
        real_ = false;
    return *this;
}

PeriodicField operator+(PeriodicField a, const PeriodicField& b) { return a += b; }
PeriodicField operator-(PeriodicField a, const PeriodicField& b) { return a -= b; }
PeriodicField operator-(PeriodicField a) { return a *= -1.0; }
PeriodicField operator*(double s, PeriodicField a) { return a *= s; }
PeriodicField operator*(PeriodicField a, double s) { return a *= s; }
PeriodicField operator*(Complex s, PeriodicField a) { return a *= s; }

// ----------------------------------------------------------------- partition

double dyadic_cutoff(double r)
{
    if (r <= 0.5)
        return 1.0;
    if (r >= 2.0 / 3.0)
        return 0.0;
    return 0.5 * (1.0 + std::cos(6.0 * std::numbers::pi * (r - 0.5)));
}

double dyadic_weight(int j, double r, int max_block)
{
    if (j < -1 || j > max_block)
        return 0.0;
    if (j == -1)
        return max_block == -1 ? 1.0 : dyadic_cutoff(r);
    if (j == max_block)
        return 1.0 - dyadic_cutoff(std::ldexp(r, -j));
    return dyadic_cutoff(std::ldexp(r, -(j + 1))) - dyadic_cutoff(std::ldexp(r, -j));
}

DyadicPartition make_dyadic_partition(const FourierGrid& grid)
{
    DyadicPartition p;
    p.grid = grid;
    p.max_block = grid.max_block();
    if (p.max_block < 1)
        throw std::invalid_argument("make_dyadic_partition: grid too small for blocks -1, 0, 1");
    p.weights.resize(grid.size(), p.block_count());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const double r = grid.radius(i);
        for (int j = -1; j <= p.max_block; ++j)
            p.weights(i, j + 1) = dyadic_weight(j, r, p.max_block);
    }
    return p;
}

const DyadicPartition& dyadic_partition(const FourierGrid& grid)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<DyadicPartition>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[{grid.modes(), grid.dim()}];
    if (!slot)
        slot = std::make_unique<DyadicPartition>(make_dyadic_partition(grid));
    return *slot;
}

// --------------------------------------------------------------- block norms

PeriodicField lp_block(const PeriodicField& u, int j)
{
    const DyadicPartition& p = dyadic_partition(u.grid());
    if (j < -1 || j > p.max_block)
        throw std::out_of_range("lp_block: block index " + std::to_string(j) + " outside [-1, " +
                                std::to_string(p.max_block) + "]");
    PeriodicField out = u;
    out.coeffs().colwise() *= p.block(j).cast<Complex>();
    return out;
}

Eigen::ArrayXXcd padded_values(const PeriodicField& u, int pad)
{
    Eigen::ArrayXXcd out(pad == 1 ? u.grid().size() : u.grid().size() * (u.grid().dim() == 1 ? pad : pad * pad),
                         u.components());
    for (int c = 0; c < u.components(); ++c) {
        out.col(c) = detail::synthesize(u.grid(), u.coeffs().col(c), pad);
        if (u.is_real())
            out.col(c) = out.col(c).real().cast<Complex>();
    }
    return out;
}

Eigen::ArrayXd block_sup_norms(const PeriodicField& u)
{
    const DyadicPartition& p = dyadic_partition(u.grid());
    Eigen::ArrayXd sups = Eigen::ArrayXd::Zero(p.block_count());
    for (int c = 0; c < u.components(); ++c) {
        for (int j = -1; j <= p.max_block; ++j) {
            Eigen::ArrayXcd b = u.coeffs().col(c) * p.block(j).cast<Complex>();
            if ((b.abs() == 0.0).all())
                continue;
            Eigen::ArrayXcd vals = detail::synthesize(u.grid(), b, 2);
            const double m = u.is_real() ? vals.real().abs().maxCoeff() : vals.abs().maxCoeff();
            sups(j + 1) = std::max(sups(j + 1), m);
        }
    }
    return sups;
}

double besov_norm_from_blocks(const Eigen::ArrayXd& sups, double theta)
{
    double best = 0.0;
    for (Eigen::Index i = 0; i < sups.size(); ++i)
        best = std::max(best, std::pow(2.0, double(i - 1) * theta) * sups(i));
    return best;
}

double besov_norm(const PeriodicField& u, double theta) { return besov_norm_from_blocks(block_sup_norms(u), theta); }

double sup_norm(const PeriodicField& u)
{
    Eigen::ArrayXXcd v = padded_values(u, 2);
    return v.abs().maxCoeff();
}

// -------------------------------------------------------------- paraproducts

namespace {

struct BlockValues {
    std::vector<Eigen::ArrayXcd> blocks;  // index j + 1
};

BlockValues block_values(const FourierGrid& g, const Eigen::ArrayXcd& coeffs, const DyadicPartition& p, bool real)
{
    BlockValues out;
    out.blocks.reserve(p.block_count());
    for (int j = -1; j <= p.max_block; ++j) {
        Eigen::ArrayXcd b = coeffs * p.block(j).cast<Complex>();
        Eigen::ArrayXcd v = detail::synthesize(g, b, 2);
        if (real)
            v = v.real().cast<Complex>();
        out.blocks.push_back(std::move(v));
    }
    return out;
}

}  // namespace

Paraproducts paraproducts(const PeriodicField& u, const PeriodicField& v)
{
    require_same_grid(u, v, "paraproducts");
    const FourierGrid& g = u.grid();
    const DyadicPartition& p = dyadic_partition(g);
    const bool real = u.is_real() && v.is_real();
    const int nb = p.block_count();

    Eigen::ArrayXXcd less, res, great;
    for (int c = 0; c < u.components(); ++c) {
        const BlockValues bu = block_values(g, u.coeffs().col(c), p, real);
        const BlockValues bv = block_values(g, v.coeffs().col(c), p, real);
        const Eigen::Index np = bu.blocks[0].size();
        if (c == 0) {
            less.setZero(np, u.components());
            res.setZero(np, u.components());
            great.setZero(np, u.components());
        }
        Eigen::ArrayXcd su = Eigen::ArrayXcd::Zero(np), sv = Eigen::ArrayXcd::Zero(np);
        for (int b = 0; b < nb; ++b) {
            // b indexes block j = b - 1; S_{j-1} collects blocks <= j - 2, i.e. indices <= b - 2
            if (b >= 2) {
                su += bu.blocks[b - 2];
                sv += bv.blocks[b - 2];
            }
            less.col(c) += su * bv.blocks[b];
            great.col(c) += bu.blocks[b] * sv;
            Eigen::ArrayXcd near = bv.blocks[b];
            if (b > 0)
                near += bv.blocks[b - 1];
            if (b + 1 < nb)
                near += bv.blocks[b + 1];
            res.col(c) += bu.blocks[b] * near;
        }
    }
    return {field_from_padded(g, less, real, 2), field_from_padded(g, res, real, 2),
            field_from_padded(g, great, real, 2)};
}

PeriodicField paraproduct(const PeriodicField& u, const PeriodicField& v)
{
    require_same_grid(u, v, "paraproduct");
    const FourierGrid& g = u.grid();
    const DyadicPartition& p = dyadic_partition(g);
    const bool real = u.is_real() && v.is_real();
    Eigen::ArrayXXcd less;
    for (int c = 0; c < u.components(); ++c) {
        const Eigen::Index np = (g.dim() == 1 ? 2 : 4) * g.size();
        if (c == 0)
            less.setZero(np, u.components());
        Eigen::ArrayXcd ucoef = u.coeffs().col(c);
        Eigen::ArrayXcd su_coef = Eigen::ArrayXcd::Zero(g.size());
        for (int j = 1; j <= p.max_block; ++j) {
            su_coef += ucoef * p.block(j - 2).cast<Complex>();
            Eigen::ArrayXcd vb = v.coeffs().col(c) * p.block(j).cast<Complex>();
            Eigen::ArrayXcd a = detail::synthesize(g, su_coef, 2);
            Eigen::ArrayXcd b = detail::synthesize(g, vb, 2);
            if (real) {
                a = a.real().cast<Complex>();
                b = b.real().cast<Complex>();
            }
            less.col(c) += a * b;
        }
    }
    return field_from_padded(g, less, real, 2);
}

PeriodicField resonant(const PeriodicField& u, const PeriodicField& v) { return paraproducts(u, v).resonant; }

PeriodicField product(const PeriodicField& u, const PeriodicField& v)
{
    require_same_grid(u, v, "product");
    const bool real = u.is_real() && v.is_real();
    Eigen::ArrayXXcd a = padded_values(u, 2), b = padded_values(v, 2);
    return field_from_padded(u.grid(), a * b, real, 2);
}

PeriodicField derivative(const PeriodicField& u, int axis)
{
    const FourierGrid& g = u.grid();
    if (axis < 0 || axis >= g.dim())
        throw std::out_of_range("derivative: axis out of range");
    PeriodicField out = u;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        const Frequency k = g.frequencies(i);
        const Complex mult = g.is_nyquist(i) ? Complex(0.0) : Complex(0.0, 2.0 * std::numbers::pi * k[axis]);
        out.coeffs().row(i) *= mult;
    }
    return out;
}

PeriodicField gradient(const PeriodicField& u)
{
    if (u.components() != 1)
        throw std::invalid_argument("gradient: scalar field expected");
    const FourierGrid& g = u.grid();
    PeriodicField out(g, g.dim(), u.is_real());
    for (int a = 0; a < g.dim(); ++a)
        out.set_component(a, derivative(u, a));
    return out;
}

PeriodicField truncate_modes(const PeriodicField& u, int n)
{
    const FourierGrid& g = u.grid();
    PeriodicField out = u;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        const Frequency k = g.frequencies(i);
        if (std::max(std::abs(k[0]), std::abs(k[1])) > n)
            out.coeffs().row(i).setZero();
    }
    return out;
}

PeriodicField zero_nyquist(const PeriodicField& u)
{
    const FourierGrid& g = u.grid();
    PeriodicField out = u;
    for (Eigen::Index i = 0; i < g.size(); ++i)
        if (g.is_nyquist(i))
            out.coeffs().row(i).setZero();
    return out;
}

// ----------------------------------------------------------------- TimeField

TimeField::TimeField(std::vector<double> times, std::vector<PeriodicField> values, double regularity)
    : times_(std::move(times)), values_(std::move(values)), regularity_(regularity)
{
    if (times_.empty() || times_.size() != values_.size())
        throw std::invalid_argument("TimeField: times and values must be non-empty and of equal length");
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1]))
            throw std::invalid_argument("TimeField: times must be strictly increasing");
    for (const auto& v : values_)
        if (v.grid() != values_.front().grid() || v.components() != values_.front().components())
            throw std::invalid_argument("TimeField: all values must share one grid and shape");
}

TimeField TimeField::constant(const std::vector<double>& times, const PeriodicField& value, double regularity)
{
    return TimeField(times, std::vector<PeriodicField>(times.size(), value), regularity);
}

std::size_t TimeField::index_of(double t, double tol) const
{
    auto it = std::lower_bound(times_.begin(), times_.end(), t - tol);
    if (it == times_.end() || std::abs(*it - t) > tol)
        throw std::invalid_argument("TimeField: time " + std::to_string(t) + " is not on the grid");
    return std::size_t(it - times_.begin());
}

TimeField TimeField::component(int c) const
{
    std::vector<PeriodicField> vals;
    vals.reserve(values_.size());
    for (const auto& v : values_)
        vals.push_back(v.component(c));
    return TimeField(times_, std::move(vals), regularity_);
}

TimeField TimeField::slice(std::size_t begin, std::size_t end) const
{
    if (begin >= end || end > times_.size())
        throw std::out_of_range("TimeField::slice: bad range");
    return TimeField(std::vector<double>(times_.begin() + begin, times_.begin() + end),
                     std::vector<PeriodicField>(values_.begin() + begin, values_.begin() + end), regularity_);
}

TimeField& TimeField::operator+=(const TimeField& o)
{
    if (!same_times(times_, o.times_))
        throw std::invalid_argument("TimeField: time grid mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] += o.values_[i];
    return *this;
}

TimeField& TimeField::operator-=(const TimeField& o)
{
    if (!same_times(times_, o.times_))
        throw std::invalid_argument("TimeField: time grid mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i)
        values_[i] -= o.values_[i];
    return *this;
}

TimeField& TimeField::operator*=(double s)
{
    for (auto& v : values_)
        v *= s;
    return *this;
}

TimeField operator+(TimeField a, const TimeField& b) { return a += b; }
TimeField operator-(TimeField a, const TimeField& b) { return a -= b; }
TimeField operator*(double s, TimeField a) { return a *= s; }

std::vector<double> uniform_times(double horizon, int steps)
{
    if (steps < 1 || !(horizon > 0.0))
        throw std::invalid_argument("uniform_times: need steps >= 1 and horizon > 0");
    std::vector<double> t(steps + 1);
    for (int i = 0; i <= steps; ++i)
        t[i] = horizon * double(i) / double(steps);
    t[steps] = horizon;
    return t;
}

bool same_times(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-12)
            return false;
    return true;
}

double time_sup_besov(const TimeField& u, double theta)
{
    double best = 0.0;
    for (const auto& v : u.values())
        best = std::max(best, besov_norm(v, theta));
    return best;
}

double time_sup_norm(const TimeField& u)
{
    double best = 0.0;
    for (const auto& v : u.values())
        best = std::max(best, sup_norm(v));
    return best;
}

HolderNorm time_holder_seminorm(const TimeField& u, double rho)
{
    if (u.size() < 2)
        throw std::invalid_argument("time_holder_seminorm: at least two time points required");
    std::vector<Eigen::ArrayXXcd> vals;
    vals.reserve(u.size());
    HolderNorm out;
    for (const auto& v : u.values()) {
        vals.push_back(padded_values(v, 2));
        out.sup = std::max(out.sup, vals.back().abs().maxCoeff());
    }
    const auto& t = u.times();
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (std::size_t j = i + 1; j < vals.size(); ++j) {
            const double d = (vals[j] - vals[i]).abs().maxCoeff();
            if (d > 0.0)
                out.seminorm = std::max(out.seminorm, d / std::pow(t[j] - t[i], rho));
        }
    return out;
}

}  // namespace paracontrol
