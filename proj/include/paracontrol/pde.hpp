#ifndef PARACONTROL_PDE_HPP
#define PARACONTROL_PDE_HPP

#include "paracontrol/enhanced_drift.hpp"

#include <json.hpp>

#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace paracontrol {

/// Right-hand side: a scalar TimeField, or the drift component V1^j.
struct Forcing {
    std::optional<TimeField> field;
    int drift_component = -1;

    static Forcing from_field(TimeField f);
    static Forcing drift(int j);
    bool is_drift() const { return drift_component >= 0; }
    TimeField resolve(const EnhancedDrift& v) const;
};

struct BackwardData {
    Forcing f;
    PeriodicField terminal;
    double horizon = 1.0;
    double theta = 0.0;
    double terminal_regularity = std::numeric_limits<double>::infinity();
};

double default_theta_young(double beta, double alpha);
double default_theta_rough(double beta, double alpha);

struct SolverOptions {
    double tol = 1e-8;
    int max_splits = 12;
    int max_iterations = 200;
    double relaxation = 1.0;
    double fallback_relaxation = 0.5;
    double contraction_threshold = 0.9;
};

struct IntervalDiagnostics {
    double start = 0.0;
    double end = 0.0;
    int iterations = 0;
    double relaxation = 1.0;
    double contraction = 0.0;
    double residual = 0.0;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double prefactor1 = 0.0;  // length^kappa1
    double prefactor2 = 0.0;
    double handoff_sharp_norm = 0.0;
};

struct SolveDiagnostics {
    bool converged = false;
    int splits = 0;
    double interval_length = 0.0;
    double scale = 0.0;
    std::vector<IntervalDiagnostics> intervals;
    std::vector<double> rejected_contractions;
    double reconstruction_residual = 0.0;
    int total_iterations() const;
    nlohmann::json to_json() const;
};

class NonContractionError : public std::runtime_error {
public:
    NonContractionError(const std::string& what, SolveDiagnostics diag)
        : std::runtime_error(what), diagnostics(std::move(diag))
    {
    }
    SolveDiagnostics diagnostics;
};

struct YoungSolution {
    TimeField u;
    SolveDiagnostics diagnostics;
};

/// (u, u', u#) with u = u' < J^T V1 + u#.
struct ParacontrolledSolution {
    TimeField u;
    TimeField uprime;
    TimeField usharp;
    double theta = 0.0;
    SolveDiagnostics diagnostics;
};

// fixed point of u = P_{T-t} u^T + J^T(grad u . V1 - f)
YoungSolution solve_young(const EnhancedDrift& v, const MultiplierCache& cache, const BackwardData& data,
                          const SolverOptions& opts = {});

ParacontrolledSolution solve_rough(const EnhancedDrift& v, const MultiplierCache& cache, const BackwardData& data,
                                   const SolverOptions& opts = {});

// grad u . V assembled from V2, the commutator and the paraproducts
TimeField rough_product(const ParacontrolledSolution& sol, const EnhancedDrift& v, const MultiplierCache& cache);

// max_t ||u - u' < J^T V1 - u#||_inf / max_t ||u||_inf
double reconstruction_residual(const ParacontrolledSolution& sol, const EnhancedDrift& v, const MultiplierCache& cache);

// backward exponential time stepping with plain products, for band-limited drifts
TimeField classical_solve(const TimeField& v, const MultiplierCache& cache, const BackwardData& data);

// D^theta norm of (u, u', u#)
double paracontrolled_norm(const TimeField& u, const TimeField& uprime, const TimeField& usharp, double theta,
                           double alpha);

// ||u||_{C C^theta} + ||u||_{C^{theta/alpha} L^inf}
double solution_norm(const TimeField& u, double theta, double alpha);

struct ProbeInput {
    EnhancedDrift drift;
    BackwardData data;
    double label = 0.0;
};

struct LipschitzRow {
    double label = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
    double ratio = 0.0;
};

using SolverFn = std::function<TimeField(const ProbeInput&)>;

// ratios ||u - v|| / (||u^T - v^T||_{2 theta - 1} + ||f - g||_{C C^beta} + ||V - W||_X)
std::vector<LipschitzRow> lipschitz_probe(const SolverFn& solver, const ProbeInput& base,
                                          const std::vector<ProbeInput>& perturbed, double theta);

}  // namespace paracontrol

#endif
