#ifndef PARACONTROL_LEVY_HPP
#define PARACONTROL_LEVY_HPP

#include "paracontrol/random.hpp"
#include "paracontrol/semigroup.hpp"

#include <json.hpp>

#include <vector>

namespace paracontrol {

// standard symmetric stable variable, E exp(i u X) = exp(-|u|^alpha)
double sample_standard_stable(double alpha, Rng& rng);

// increment with E exp(2 pi i z L) = exp(-dt psi(z)), d = 1
double sample_stable_increment(const StableSymbol& sym, double dt, Rng& rng);
// d = 2, sum over antipodal atom pairs of independent one-dimensional stables
Eigen::Vector2d sample_stable_increment_2d(const StableSymbol& sym, double dt, Rng& rng);

/// mu(dy) = K |y|^{-1-alpha} dy on inner <= |y| <= cutoff (d = 1).
struct JumpMeasure {
    double intensity = 1.0;  // K
    double alpha = 1.5;
    double cutoff = 1.0;     // C
    double inner = 1e-4;     // delta

    void validate() const;
    double mass() const;
    // int |y|^{2i} e^{lambda y^2} mu(dy), i >= 1, lambda <= 0
    double moment(int i, double lambda = 0.0) const;
    // int (e^{lambda y^2} - 1) mu(dy), lambda <= 0
    double mgf_exponent(double lambda) const;
};

struct JumpRecord {
    double r = 0.0;
    double t = 0.0;
    JumpMeasure measure;
    double expected_count = 0.0;
    std::vector<double> times;
    std::vector<double> sizes;

    // int int |y|^2 pi(ds, dy)
    double sum_squares() const;
    nlohmann::json to_json() const;
};

JumpRecord sample_small_jumps(const JumpMeasure& mu, double r, double t, Rng& rng);
// sum of squared jump sizes without storing the record
double sample_small_jump_square_sum(const JumpMeasure& mu, double span, Rng& rng);

struct CampbellTerm {
    std::vector<int> omega;  // omega[i - 1] multiplies m_i
    long long coefficient = 0;
};

// derivative expansion of exp(m(lambda)), built by the Leibniz recursion
std::vector<CampbellTerm> campbell_coefficients(int n);
// E exp(lambda X), X = int int |y|^2 pi over a window of length span
double campbell_mgf(const JumpMeasure& mu, double span, double lambda);
// n-th derivative of the mgf at lambda
double campbell_moment(int n, double lambda, double span, const JumpMeasure& mu);

}  // namespace paracontrol

#endif
