#ifndef PARACONTROL_STATISTICS_HPP
#define PARACONTROL_STATISTICS_HPP

#include <cstddef>
#include <vector>

namespace paracontrol {

struct Estimate {
    double mean = 0.0;
    double se = 0.0;
    double z() const { return se > 0.0 ? mean / se : (mean == 0.0 ? 0.0 : 1e300); }
};

// mean with a batch-means standard error; samples are batched in order
Estimate batch_means(const std::vector<double>& samples, int batches = 50);
// plain iid standard error
Estimate sample_mean(const std::vector<double>& samples);

double ks_statistic(std::vector<double> a, std::vector<double> b);
// Kolmogorov limiting survival function Q(lambda)
double kolmogorov_survival(double lambda);
double ks_pvalue(double d, std::size_t n, std::size_t m);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);
// fit of log y against log x
LinearFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

// count of i with v[i+1] >= v[i]
int count_increases(const std::vector<double>& v);

double median(std::vector<double> v);

}  // namespace paracontrol

#endif
