#include "paracontrol/config.hpp"

#include "paracontrol/report.hpp"

#include <algorithm>
#include <cmath>

namespace paracontrol {

ConfigError::ConfigError(std::string path, const std::string& message)
    : std::invalid_argument(path + ": " + message), path_(std::move(path))
{
}

std::string FieldSpec::interval() const
{
    if (!lo && !hi)
        return "";
    std::string s = lo ? (lo_open ? "(" : "[") + format_double(*lo) : "(-inf";
    s += ", ";
    s += hi ? format_double(*hi) + (hi_open ? ")" : "]") : "inf)";
    return s;
}

const FieldSpec* CommandSchema::find(const std::string& key) const
{
    for (const auto& f : params)
        if (f.name == key)
            return &f;
    return nullptr;
}

nlohmann::json ExperimentConfig::to_json() const
{
    return {{"command", command}, {"seed", seed}, {"out", out}, {"params", params}};
}

namespace {

void check_range(const FieldSpec& spec, double v, const std::string& path)
{
    if (!std::isfinite(v))
        throw ConfigError(path, "must be finite");
    const bool below = spec.lo && (spec.lo_open ? v <= *spec.lo : v < *spec.lo);
    const bool above = spec.hi && (spec.hi_open ? v >= *spec.hi : v > *spec.hi);
    if (below || above)
        throw ConfigError(path, "value " + format_double(v) + " outside the admissible interval " + spec.interval());
}

nlohmann::json scalar(const FieldSpec& spec, FieldKind kind, const nlohmann::json& value, const std::string& path)
{
    switch (kind) {
    case FieldKind::Integer: {
        if (!value.is_number())
            throw ConfigError(path, "expected an integer");
        const double d = value.get<double>();
        if (d != std::floor(d))
            throw ConfigError(path, "expected an integer, got " + format_double(d));
        check_range(spec, d, path);
        return static_cast<long long>(d);
    }
    case FieldKind::Number: {
        if (!value.is_number())
            throw ConfigError(path, "expected a number");
        const double d = value.get<double>();
        check_range(spec, d, path);
        return d;
    }
    case FieldKind::Boolean:
        if (!value.is_boolean())
            throw ConfigError(path, "expected true or false");
        return value;
    case FieldKind::String: {
        if (!value.is_string())
            throw ConfigError(path, "expected a string");
        const std::string s = value.get<std::string>();
        if (!spec.choices.empty() && std::find(spec.choices.begin(), spec.choices.end(), s) == spec.choices.end()) {
            std::string all;
            for (const auto& c : spec.choices)
                all += (all.empty() ? "" : ", ") + c;
            throw ConfigError(path, "'" + s + "' is not one of {" + all + "}");
        }
        return s;
    }
    default:
        throw ConfigError(path, "internal: list kind in scalar check");
    }
}

}  // namespace

nlohmann::json validate_field(const FieldSpec& spec, const nlohmann::json& value, const std::string& path)
{
    if (spec.kind == FieldKind::IntegerList || spec.kind == FieldKind::NumberList) {
        if (!value.is_array() || value.empty())
            throw ConfigError(path, "expected a non-empty list");
        const FieldKind k = spec.kind == FieldKind::IntegerList ? FieldKind::Integer : FieldKind::Number;
        nlohmann::json out = nlohmann::json::array();
        for (std::size_t i = 0; i < value.size(); ++i)
            out.push_back(scalar(spec, k, value[i], path + "[" + std::to_string(i) + "]"));
        return out;
    }
    return scalar(spec, spec.kind, value, path);
}

ExperimentConfig resolve_config(const nlohmann::json& doc, const std::vector<CommandSchema>& schemas)
{
    if (!doc.is_object())
        throw ConfigError("<root>", "config must be an object");
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (it.key() != "command" && it.key() != "seed" && it.key() != "out" && it.key() != "params")
            throw ConfigError(it.key(), "unknown key");
    if (!doc.contains("command") || !doc["command"].is_string())
        throw ConfigError("command", "missing or not a string");
    ExperimentConfig cfg;
    cfg.command = doc["command"].get<std::string>();
    const auto sch = std::find_if(schemas.begin(), schemas.end(),
                                  [&](const CommandSchema& s) { return s.name == cfg.command; });
    if (sch == schemas.end())
        throw ConfigError("command", "unknown command '" + cfg.command + "'");
    if (doc.contains("seed")) {
        const auto& s = doc["seed"];
        if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<long long>() < 0))
            throw ConfigError("seed", "expected a non-negative integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    if (doc.contains("out")) {
        if (!doc["out"].is_string() || doc["out"].get<std::string>().empty())
            throw ConfigError("out", "expected a non-empty path");
        cfg.out = doc["out"].get<std::string>();
    }
    const nlohmann::json params = doc.value("params", nlohmann::json::object());
    if (!params.is_object())
        throw ConfigError("params", "expected an object");
    for (auto it = params.begin(); it != params.end(); ++it)
        if (!sch->find(it.key()))
            throw ConfigError("params." + it.key(), "unknown parameter for " + cfg.command);
    for (const auto& f : sch->params) {
        const std::string path = "params." + f.name;
        cfg.params[f.name] = validate_field(f, params.contains(f.name) ? params[f.name] : f.default_value, path);
    }
    return cfg;
}

nlohmann::json parse_param_value(const std::string& text)
{
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (!j.is_discarded() && !j.is_object())
        return j;
    return text;
}

}  // namespace paracontrol
