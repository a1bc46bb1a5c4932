#ifndef PARACONTROL_COMMANDS_HPP
#define PARACONTROL_COMMANDS_HPP

#include "paracontrol/config.hpp"
#include "paracontrol/report.hpp"
#include "paracontrol/spectral.hpp"

#include <string>
#include <vector>

namespace paracontrol {

// every command with its parameter schema, in --list order
const std::vector<CommandSchema>& command_schemas();

// runs cfg.command; ConfigError / std::invalid_argument signal usage errors
Report run_command(const ExperimentConfig& cfg);

// smooth benchmark data shared by the solver and martingale commands
// (1 + t/2)(0.6 cos 2 pi x + 0.3 sin 4 pi x) amp + 0.2 amp
TimeField benchmark_drift(const FourierGrid& g, const std::vector<double>& times, double amp);
// (1 + t/2)(0.8 sin 2 pi x + 0.3 cos 4 pi x) amp + 0.2 amp
TimeField benchmark_drift_odd(const FourierGrid& g, const std::vector<double>& times, double amp);
// cos(3t) cos(6 pi x) + 0.5
TimeField benchmark_forcing(const FourierGrid& g, const std::vector<double>& times);

}  // namespace paracontrol

#endif
