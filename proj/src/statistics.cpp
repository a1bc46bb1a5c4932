#include "paracontrol/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace paracontrol {

Estimate batch_means(const std::vector<double>& samples, int batches)
{
    const std::size_t n = samples.size();
    if (batches < 2 || n < std::size_t(batches))
        throw std::invalid_argument("batch_means: need at least as many samples as batches");
    std::vector<double> means(batches, 0.0);
    double total = 0.0;
    for (int b = 0; b < batches; ++b) {
        const std::size_t lo = n * b / batches, hi = n * (b + 1) / batches;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i)
            s += samples[i];
        total += s;
        means[b] = s / double(hi - lo);
    }
    Estimate e;
    e.mean = total / double(n);
    double var = 0.0;
    for (double m : means)
        var += (m - e.mean) * (m - e.mean);
    var /= double(batches - 1);
    e.se = std::sqrt(var / batches);
    return e;
}

Estimate sample_mean(const std::vector<double>& samples)
{
    const std::size_t n = samples.size();
    if (n < 2)
        throw std::invalid_argument("sample_mean: need two samples");
    double s = 0.0;
    for (double x : samples)
        s += x;
    const double m = s / double(n);
    double v = 0.0;
    for (double x : samples)
        v += (x - m) * (x - m);
    return {m, std::sqrt(v / double(n - 1) / double(n))};
}

double ks_statistic(std::vector<double> a, std::vector<double> b)
{
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    const double na = double(a.size()), nb = double(b.size());
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x)
            ++i;
        while (j < b.size() && b[j] <= x)
            ++j;
        d = std::max(d, std::abs(double(i) / na - double(j) / nb));
    }
    return d;
}

double kolmogorov_survival(double lambda)
{
    if (lambda < 0.2)
        return 1.0;
    double sum = 0.0, sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-16)
            break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_pvalue(double d, std::size_t n, std::size_t m)
{
    const double ne = double(n) * double(m) / double(n + m);
    const double s = std::sqrt(ne);
    return kolmogorov_survival((s + 0.12 + 0.11 / s) * d);
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n)
        throw std::invalid_argument("linear_fit: need two matching points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    return f;
}

LinearFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y)
{
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    return linear_fit(lx, ly);
}

int count_increases(const std::vector<double>& v)
{
    int c = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] >= v[i - 1])
            ++c;
    return c;
}

double median(std::vector<double> v)
{
    if (v.empty())
        throw std::invalid_argument("median: empty");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace paracontrol
