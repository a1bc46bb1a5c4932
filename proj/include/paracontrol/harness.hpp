#ifndef PARACONTROL_HARNESS_HPP
#define PARACONTROL_HARNESS_HPP

#include "paracontrol/semigroup.hpp"
#include "paracontrol/statistics.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace paracontrol {

// random field with coefficients eta_k |k|^{-theta - d/2}, eta_k standard complex Gaussian,
// zero mode standard real Gaussian; a sample of C^{theta-} with O(1) norm
PeriodicField synthesize_field(const FourierGrid& grid, double theta, std::uint64_t seed, int max_mode = -1);

// one cosine per block j >= 0, at a frequency where only block j has weight, amplitude 2^{-j theta};
// every block of the result has sup norm exactly 2^{-j theta}
PeriodicField lacunary_field(const FourierGrid& grid, double theta);

/// Log-log slope of a norm against t or the window length.
struct ScalingProbe {
    std::string name;
    std::string parameter;
    std::vector<double> params;
    std::vector<double> values;
    LinearFit fit;
    double target = 0.0;
    double tolerance = 0.05;
    bool pass = false;
    nlohmann::json to_json() const;
};

struct SchauderSettings {
    double alpha = 1.8;
    double beta = -0.4;
    int N = 1024;
    double t_min = 1e-5;
    double t_max = 1e-3;
    int points = 17;
    int M = 8;  // time steps of the J^T window
};

// smoothing, time continuity and the two J^T bounds, each as a slope against its exponent
std::vector<ScalingProbe> schauder_probe(const SchauderSettings& s);

/// Realized constant of an inequality over random inputs and resolutions.
struct ConstantProbe {
    std::string name;
    std::string parameter;
    std::vector<double> params;
    std::vector<double> mean;  // over seeds, per parameter
    std::vector<double> max;
    double growth = 0.0;  // largest max over the max at the reference (first) parameter
    double limit = 2.0;
    bool pass = false;
    nlohmann::json to_json() const;
};

struct ParaproductSettings {
    std::vector<int> sizes{64, 128, 256, 512};
    int seeds = 50;
    std::uint64_t seed = 0;
};

// resonant (0.6, -0.4), low-high with an L^inf factor, low-high with a negative-regularity factor
std::vector<ConstantProbe> paraproduct_probe(const ParaproductSettings& s);

struct CommutatorSettings {
    double alpha = 1.8;
    int N = 256;
    int M = 32;
    int seeds = 20;
    std::uint64_t seed = 0;
    // J^T commutator in C^{2 sigma + 1}
    double sigma = 0.5;
    double varsigma = -0.1;
    std::vector<double> windows{1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
    // semigroup commutator in C^{gamma + beta + vartheta}
    double gamma = 0.7;
    double beta = -0.6;
    double vartheta = 1.0;
    std::vector<double> times{1.0 / 1024, 1.0 / 2048, 1.0 / 4096, 1.0 / 8192};
};

std::vector<ConstantProbe> commutator_probe(const CommutatorSettings& s);

struct CauchyRow {
    std::uint64_t seed = 0;
    std::vector<double> diffs;  // ||V2^{2n} - V2^n|| per level n
    bool decreasing = false;
};

struct CauchyReport {
    double alpha = 1.9;
    double theta = 0.0;
    std::vector<int> levels;
    std::vector<CauchyRow> rows;
    double fraction = 0.0;
    double required = 0.9;
    bool pass = false;
    nlohmann::json to_json() const;
};

// ||V2^{2n} - V2^n||_{C_T C^theta} for nested truncations of one white-noise sample
CauchyReport cauchy_decay(double alpha, int seeds, std::uint64_t first_seed = 0,
                          const std::vector<int>& levels = {8, 16, 32, 64, 128}, int N = 1024, int M = 8,
                          double loss = 0.05);

struct ChaosCheck {
    int j = 0;
    double s = 0.0;
    double t = 0.0;
    int n = 0;
    double oracle = 0.0;
    Estimate estimate;
    double z = 0.0;
    bool pass = false;
    nlohmann::json to_json() const;
};

// E|Delta_j(J^T(d xi)(t) - J^T(d xi)(s)) (.) xi)(0)|^2 by sampling white noise
ChaosCheck chaos_monte_carlo(double alpha, int j, double s, double t, int n, int N, int samples,
                             std::uint64_t first_seed = 0, double horizon = 1.0);

}  // namespace paracontrol

#endif
