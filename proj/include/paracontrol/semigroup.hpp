#ifndef PARACONTROL_SEMIGROUP_HPP
#define PARACONTROL_SEMIGROUP_HPP

#include "paracontrol/spectral.hpp"

#include <vector>

namespace paracontrol {

struct StableAtom {
    Eigen::Vector2d direction;  // unit vector, second entry ignored for d = 1
    double weight = 0.0;
};

/// Symmetric alpha-stable symbol given by finitely many atoms of the spectral measure.
class StableSymbol {
public:
    StableSymbol() = default;
    StableSymbol(double alpha, int dim, std::vector<StableAtom> atoms);

    // psi(k) = |2 pi k|^alpha; d = 2 uses equi-angular atoms
    static StableSymbol fractional_laplacian(double alpha, int dim = 1, int angular_atoms = 64);
    // d = 1, psi(k) = scale |k|^alpha
    static StableSymbol scaled(double alpha, double scale);

    double alpha() const { return alpha_; }
    int dim() const { return dim_; }
    const std::vector<StableAtom>& atoms() const { return atoms_; }
    double total_weight() const;

    double operator()(const Eigen::Vector2d& k) const;

private:
    double alpha_ = 2.0;
    int dim_ = 1;
    std::vector<StableAtom> atoms_;
};

double psi(const StableSymbol& sym, const Frequency& k);

// integral of |cos|^alpha over one period
double angular_moment(double alpha);

/// psi sampled on a grid.
class MultiplierCache {
public:
    MultiplierCache(const StableSymbol& sym, const FourierGrid& grid);

    const StableSymbol& symbol() const { return sym_; }
    const FourierGrid& grid() const { return grid_; }
    double alpha() const { return sym_.alpha(); }
    const Eigen::ArrayXd& psi() const { return psi_; }
    Eigen::ArrayXd decay(double t) const { return (-t * psi_).exp(); }
    // min over k != 0 of psi(k) / |k|^alpha
    double lower_constant() const { return lower_; }

private:
    StableSymbol sym_;
    FourierGrid grid_;
    Eigen::ArrayXd psi_;
    double lower_ = 0.0;
};

PeriodicField apply_generator(const MultiplierCache& cache, const PeriodicField& u);
PeriodicField semigroup_apply(const MultiplierCache& cache, double t, const PeriodicField& u);

/// Weights of the exact exponential integral over one step of length h with a
/// linear integrand: integral_0^h e^{-s psi} v(s) ds = near * v(0) + far * v(h).
struct StepWeights {
    Eigen::ArrayXd decay;
    Eigen::ArrayXd near;
    Eigen::ArrayXd far;
};
StepWeights step_weights(const Eigen::ArrayXd& psi, double h);

// J^T v(t) = int_t^T P_{r-t} v(r) dr with T = v.horizon()
PeriodicField jt_apply(const MultiplierCache& cache, const TimeField& v, double t);
// J^T v at every grid time
TimeField jt_apply_all(const MultiplierCache& cache, const TimeField& v);

// J^T(g < h) - g < J^T h
TimeField commutator_jt(const MultiplierCache& cache, const TimeField& g, const TimeField& h);
// P_t(u < v) - u < P_t v
PeriodicField commutator_semigroup(const MultiplierCache& cache, double t, const PeriodicField& u,
                                   const PeriodicField& v);

}  // namespace paracontrol

#endif
