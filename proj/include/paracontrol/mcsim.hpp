#ifndef PARACONTROL_MCSIM_HPP
#define PARACONTROL_MCSIM_HPP

#include "paracontrol/levy.hpp"
#include "paracontrol/report.hpp"
#include "paracontrol/spectral.hpp"
#include "paracontrol/statistics.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace paracontrol {

// sharp truncation to max(|k_1|, |k_2|) <= n
PeriodicField mollify(const PeriodicField& f, int n);
TimeField mollify_drift(const TimeField& v, int n);

/// Pointwise evaluation of a band-limited TimeField by direct Fourier summation,
/// linear in time between slices.
class FieldEvaluator {
public:
    explicit FieldEvaluator(const TimeField& f);

    struct Location {
        std::size_t slice = 0;
        double weight = 0.0;  // share of slice + 1
    };
    Location locate(double t) const;

    int components() const { return components_; }
    int dim() const { return dim_; }
    int max_mode() const { return max_mode_; }
    // all components at (loc, x); out has components() entries
    void evaluate(const Location& loc, double x, double y, double* out) const;
    double operator()(double t, double x, int c = 0) const;

private:
    std::vector<double> times_;
    int dim_ = 1;
    int components_ = 1;
    int max_mode_ = 0;
    // d = 1: coefficients k = 0 .. max_mode per (slice, component)
    // d = 2: coefficients on the half plane k_1 > 0 or (k_1 = 0, k_2 >= 0)
    std::vector<std::pair<int, int>> modes_;
    std::vector<std::vector<Complex>> coeffs_;  // index slice * components + c
};

struct SimulationConfig {
    TimeField drift;  // band-limited, d components
    StableSymbol sym = StableSymbol::fractional_laplacian(2.0);
    Eigen::Vector2d x0 = Eigen::Vector2d::Zero();
    bool uniform_start = false;  // x0 ~ U[0, 1)^d per path
    long paths = 1000;
    int steps = 64;  // Euler steps on [0, horizon]
    int noise_substeps = 1;  // each increment is a sum of this many finer ones (coupling across h)
    double horizon = 1.0;
    std::uint64_t seed = 0;
    std::vector<double> record_times;
    std::optional<TimeField> forcing;  // scalar f for int f(s, X_s) ds

    double step() const { return horizon / steps; }
    // throws std::invalid_argument
    void validate() const;
};

struct PathEnsemble {
    std::vector<double> record_times;
    Eigen::ArrayXXd x;                 // paths x records
    Eigen::ArrayXXd y;                 // second coordinate, empty for d = 1
    Eigen::ArrayXXd forcing_integral;  // trapezoid rule along the Euler grid
    Eigen::ArrayXXd drift_integral;    // sum of V^1(t_k, X_k) h
    std::size_t record_index(double t) const;
};

// X_{k+1} = X_k + V(t_k, X_k) h + dL_k; path p draws its noise from stream (seed, p), lane 0
PathEnsemble euler_maruyama(const SimulationConfig& cfg);

struct MartingaleRow {
    double r = 0.0;
    double t = 0.0;
    std::string functional;
    Estimate estimate;
    bool pass = false;
};

struct MartingaleReport {
    std::vector<MartingaleRow> rows;
    double threshold = 3.0;
    double max_abs_z = 0.0;
    bool pass = false;
    nlohmann::json to_json() const;
};

// F in {1, tanh(X_r), cos(2 pi X_{r/2})}
std::vector<std::string> martingale_functionals();

// E[(M_t - M_r) F] with M_t = u(t, X_t) - u(0, x) - int_0^t f(s, X_s) ds, d = 1
MartingaleReport martingale_test(const TimeField& u, const TimeField& f, SimulationConfig cfg,
                                 const std::vector<std::pair<double, double>>& pairs, double threshold = 3.0);

struct MomentScalingReport {
    int rho = 2;
    double r = 0.0;
    std::vector<double> lags;
    std::vector<double> moments;
    std::vector<double> errors;
    LinearFit fit;
    double target_slope = 0.0;  // theta rho / alpha
    double min_slope = 0.0;     // target - 0.15
    bool pass = false;
    nlohmann::json to_json() const;
};

// E|int_r^{r + lag} V^1(s, X_s) ds|^rho against lag on log-log axes
MomentScalingReport drift_moment_scaling(SimulationConfig cfg, int rho, double r, const std::vector<double>& lags,
                                         double theta);

struct MarginalRow {
    int n = 0;
    int n2 = 0;
    double t = 0.0;
    double ks = 0.0;
    double pvalue = 0.0;
};

struct MarginalReport {
    std::vector<int> levels;
    std::vector<double> times;
    std::vector<MarginalRow> rows;
    std::vector<int> inversions;  // per time; only increases with KS p < 0.05 count
    bool decreasing = false;      // at most one inversion at every time
    nlohmann::json to_json() const;
};

// KS distance between X^n_t and X^{2n}_t (common noise) for consecutive levels
MarginalReport marginal_convergence(const TimeField& drift, SimulationConfig base, const std::vector<int>& levels,
                                    const std::vector<double>& times);

class RefusedParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct BroxBundle {
    int N = 128;
    int M = 128;       // solver time steps
    long paths = 20000;
    int steps = 4096;  // Euler steps
    double horizon = 1.0;
    std::vector<int> levels{8, 16, 32, 63};
    double epsilon = 0.05;
};

struct BroxReport {
    double alpha = 2.0;
    std::uint64_t seed = 0;
    BroxBundle bundle;
    nlohmann::json solve;
    std::vector<std::pair<int, MartingaleReport>> martingale;
    MarginalReport marginals;
    std::vector<Assertion> assertions;
    bool pass() const;
    nlohmann::json to_json() const;
};

// sample xi, lift, solve, simulate at each level, martingale and marginal checks; alpha must lie in (7/4, 2]
BroxReport brox_demo(std::uint64_t seed, double alpha, const BroxBundle& bundle = {});

}  // namespace paracontrol

#endif
