#ifndef PARACONTROL_REPORT_HPP
#define PARACONTROL_REPORT_HPP

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace paracontrol {

struct Assertion {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    std::string relation;  // "<=", ">=", "=="
    bool passed = false;
    nlohmann::json to_json() const;
};

Assertion make_assertion(const std::string& name, double value, const std::string& relation, double tolerance);

/// Columns fixed at construction; cells are numbers, strings or booleans.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::json>> rows;
    void add(std::vector<nlohmann::json> row);
};

// %.17g; non-finite values as nan, inf, -inf
std::string format_double(double v);
// sorted keys, two-space indent, doubles via format_double (non-finite as null)
std::string render_json(const nlohmann::json& j);
std::string render_csv(const Table& t);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// write to a sibling temporary and rename over the target
void write_atomic(const std::filesystem::path& path, const std::string& contents);

struct Report {
    std::string command;
    nlohmann::json config;   // fully resolved
    nlohmann::json results;
    std::vector<Assertion> assertions;
    std::map<std::string, Table> tables;

    bool pass() const;
    // FNV-1a of the rendered report without the hash field
    std::string content_hash() const;
    nlohmann::json to_json() const;
};

// <out>/<command>.json and <out>/<command>_<table>.csv; returns the written paths
std::vector<std::filesystem::path> write_report(const Report& r, const std::filesystem::path& out_dir);

}  // namespace paracontrol

#endif
