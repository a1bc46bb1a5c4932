#include "paracontrol/field_io.hpp"

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace paracontrol {

namespace {
constexpr char kMagic[8] = {'P', 'C', 'F', 'I', 'E', 'L', 'D', '1'};
}

nlohmann::json field_to_json(const PeriodicField& u)
{
    nlohmann::json j;
    j["d"] = u.grid().dim();
    j["N"] = u.grid().modes();
    j["real_flag"] = u.is_real();
    j["components"] = u.components();
    std::vector<double> flat;
    flat.reserve(std::size_t(2 * u.coeffs().size()));
    for (int c = 0; c < u.components(); ++c)
        for (Eigen::Index i = 0; i < u.grid().size(); ++i) {
            flat.push_back(u.coeffs()(i, c).real());
            flat.push_back(u.coeffs()(i, c).imag());
        }
    j["coeffs"] = flat;
    return j;
}

PeriodicField field_from_json(const nlohmann::json& j)
{
    const FourierGrid g(j.at("N").get<int>(), j.at("d").get<int>());
    const int comps = j.value("components", 1);
    const auto flat = j.at("coeffs").get<std::vector<double>>();
    if (flat.size() != std::size_t(2 * g.size() * comps))
        throw std::invalid_argument("field_from_json: coefficient count does not match d, N, components");
    CoeffArray c(g.size(), comps);
    std::size_t p = 0;
    for (int k = 0; k < comps; ++k)
        for (Eigen::Index i = 0; i < g.size(); ++i, p += 2)
            c(i, k) = Complex(flat[p], flat[p + 1]);
    return PeriodicField(g, std::move(c), j.at("real_flag").get<bool>());
}

nlohmann::json time_field_to_json(const TimeField& u)
{
    nlohmann::json j;
    j["times"] = u.times();
    j["regularity"] = u.regularity();
    j["values"] = nlohmann::json::array();
    for (const auto& v : u.values())
        j["values"].push_back(field_to_json(v));
    return j;
}

TimeField time_field_from_json(const nlohmann::json& j)
{
    std::vector<PeriodicField> vals;
    for (const auto& v : j.at("values"))
        vals.push_back(field_from_json(v));
    return TimeField(j.at("times").get<std::vector<double>>(), std::move(vals), j.value("regularity", 0.0));
}

void write_field_binary(std::ostream& os, const PeriodicField& u)
{
    os.write(kMagic, sizeof kMagic);
    const std::int32_t hdr[4] = {u.grid().dim(), u.grid().modes(), u.components(), u.is_real() ? 1 : 0};
    os.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
    for (int c = 0; c < u.components(); ++c)
        for (Eigen::Index i = 0; i < u.grid().size(); ++i) {
            const double re = u.coeffs()(i, c).real(), im = u.coeffs()(i, c).imag();
            os.write(reinterpret_cast<const char*>(&re), sizeof re);
            os.write(reinterpret_cast<const char*>(&im), sizeof im);
        }
}

PeriodicField read_field_binary(std::istream& is)
{
    char magic[8];
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw std::runtime_error("read_field_binary: bad magic");
    std::int32_t hdr[4];
    is.read(reinterpret_cast<char*>(hdr), sizeof hdr);
    const FourierGrid g(hdr[1], hdr[0]);
    CoeffArray c(g.size(), hdr[2]);
    for (int k = 0; k < hdr[2]; ++k)
        for (Eigen::Index i = 0; i < g.size(); ++i) {
            double re, im;
            is.read(reinterpret_cast<char*>(&re), sizeof re);
            is.read(reinterpret_cast<char*>(&im), sizeof im);
            c(i, k) = Complex(re, im);
        }
    if (!is)
        throw std::runtime_error("read_field_binary: truncated stream");
    return PeriodicField(g, std::move(c), hdr[3] != 0);
}

}  // namespace paracontrol
