#ifndef PARACONTROL_FIELD_IO_HPP
#define PARACONTROL_FIELD_IO_HPP

#include "paracontrol/spectral.hpp"

#include <json.hpp>

#include <iosfwd>

namespace paracontrol {

// {d, N, real_flag, components, coeffs: [re, im, ...]} in FFT order, component-major
nlohmann::json field_to_json(const PeriodicField& u);
PeriodicField field_from_json(const nlohmann::json& j);

nlohmann::json time_field_to_json(const TimeField& u);
TimeField time_field_from_json(const nlohmann::json& j);

// flat binary: "PCFIELD1", int32 d, N, components, real_flag, then interleaved doubles
void write_field_binary(std::ostream& os, const PeriodicField& u);
PeriodicField read_field_binary(std::istream& is);

}  // namespace paracontrol

#endif
