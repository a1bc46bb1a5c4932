#ifndef PARACONTROL_CONFIG_HPP
#define PARACONTROL_CONFIG_HPP

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace paracontrol {

/// Schema violation; path names the offending field, e.g. "params.alpha".
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string path, const std::string& message);
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

enum class FieldKind { Integer, Number, Boolean, String, IntegerList, NumberList };

struct FieldSpec {
    std::string name;
    FieldKind kind = FieldKind::Number;
    nlohmann::json default_value;
    std::optional<double> lo;
    std::optional<double> hi;
    bool lo_open = false;
    bool hi_open = false;
    std::vector<std::string> choices;  // String only
    std::string help;

    // "(0, 2]" style, empty when unbounded
    std::string interval() const;
};

struct CommandSchema {
    std::string name;
    std::string summary;
    std::vector<FieldSpec> params;
    const FieldSpec* find(const std::string& key) const;
};

struct ExperimentConfig {
    std::string command;
    std::uint64_t seed = 0;
    std::string out = "out";
    nlohmann::json params = nlohmann::json::object();  // every schema field, defaults filled in

    nlohmann::json to_json() const;
    double number(const std::string& key) const { return params.at(key).get<double>(); }
    long integer(const std::string& key) const { return params.at(key).get<long>(); }
};

// checks one value against its spec; throws ConfigError at path
nlohmann::json validate_field(const FieldSpec& spec, const nlohmann::json& value, const std::string& path);

// doc = {command, seed?, out?, params?}; unknown keys are errors
ExperimentConfig resolve_config(const nlohmann::json& doc, const std::vector<CommandSchema>& schemas);

// "1.5" -> number, "true" -> bool, "[1,2]" -> array, anything else -> string
nlohmann::json parse_param_value(const std::string& text);

}  // namespace paracontrol

#endif
