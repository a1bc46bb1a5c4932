#ifndef PARACONTROL_TRANSFORM_HPP
#define PARACONTROL_TRANSFORM_HPP

#include "paracontrol/spectral.hpp"

namespace paracontrol::detail {

// coefficients on the N grid -> samples on the (pad*N)^d grid; a Nyquist
// coefficient is split evenly between +N/2 and -N/2 when pad > 1
Eigen::ArrayXcd synthesize(const FourierGrid& grid, const Eigen::Ref<const Eigen::ArrayXcd>& coeffs, int pad);

// samples on the (pad*N)^d grid -> coefficients on the N grid; Nyquist dropped when pad > 1
Eigen::ArrayXcd analyze(const FourierGrid& grid, const Eigen::Ref<const Eigen::ArrayXcd>& values, int pad);

}  // namespace paracontrol::detail

#endif
