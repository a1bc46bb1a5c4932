#ifndef PARACONTROL_ENHANCED_DRIFT_HPP
#define PARACONTROL_ENHANCED_DRIFT_HPP

#include "paracontrol/semigroup.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace paracontrol {

/// Drift V1 together with the resonant data V2^{ij} = J^T(d_j V1^i) (.) V1^j.
struct EnhancedDrift {
    TimeField v1;                 // d components
    std::optional<TimeField> v2;  // d * d components, column i * d + j
    double beta = 0.0;
    double alpha = 2.0;
    double norm_v1 = 0.0;  // C_T C^beta
    double norm_v2 = 0.0;  // C_T C^{2 beta + alpha - 1}
    std::vector<std::string> notes;

    int dim() const { return v1.grid().dim(); }
    double horizon() const { return v1.horizon(); }
    bool young() const { return beta > (1.0 - alpha) / 2.0; }
    void refresh_norms();
    // regime invariants; throws std::invalid_argument
    void validate() const;
};

// V1 = eta, V2 = (J^T(d_j eta^i) (.) eta^j)
EnhancedDrift lift_smooth(const TimeField& eta, const MultiplierCache& cache, double beta);
// drop V2 for the Young regime
EnhancedDrift young_drift(const TimeField& eta, double beta, double alpha);

struct WhiteNoiseSample {
    std::uint64_t seed = 0;
    int n = 0;
    bool zero_mean = false;
    std::vector<Complex> coeffs;  // k = 0 .. n, negative modes by conjugation

    Complex coefficient(int k) const;
    PeriodicField to_field(const FourierGrid& grid) const;
    WhiteNoiseSample truncated(int m) const;
};

// coefficients drawn in order k = 0, 1, ..., so truncations of one seed are nested
WhiteNoiseSample sample_white_noise(std::uint64_t seed, int n, const FourierGrid& grid, bool zero_mean = false);

// V1 = xi^n constant in time, V2 = J^T(d xi^n) (.) xi^n, beta = -1/2 - epsilon
EnhancedDrift lift_white_noise(const WhiteNoiseSample& xi, const MultiplierCache& cache,
                               const std::vector<double>& times, double epsilon = 0.05);

// J^T(d xi)(t) for xi constant in time: multiplier (1 - e^{-(T-t) psi}) / psi times 2 pi i k
PeriodicField jt_gradient_constant(const MultiplierCache& cache, const PeriodicField& xi, double t, double horizon);

// E |Delta_j((rho_t - rho_s) * xi^n (.) xi^n)(x)|^2 by the Gaussian fourth-moment sum
double chaos_variance_oracle(const StableSymbol& sym, int j, double s, double t, int n, double horizon,
                             int max_block);
// E[V2(t)(x)] = sum_k psi_res(k, -k) rho_t(k)
double chaos_mean_term(const StableSymbol& sym, double t, int n, double horizon, int max_block);
// sum_{|l1 - l2| <= 1} p_l1(k1) p_l2(k2)
double resonant_weight(int k1, int k2, int max_block);

nlohmann::json drift_to_json(const EnhancedDrift& v);

}  // namespace paracontrol

#endif
