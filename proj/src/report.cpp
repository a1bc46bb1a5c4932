#include "paracontrol/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace paracontrol {

nlohmann::json Assertion::to_json() const
{
    return {{"name", name}, {"value", value}, {"relation", relation}, {"tolerance", tolerance}, {"passed", passed}};
}

Assertion make_assertion(const std::string& name, double value, const std::string& relation, double tolerance)
{
    Assertion a{name, value, tolerance, relation, false};
    if (relation == "<=")
        a.passed = value <= tolerance;
    else if (relation == ">=")
        a.passed = value >= tolerance;
    else if (relation == "==")
        a.passed = value == tolerance;
    else
        throw std::invalid_argument("make_assertion: unknown relation " + relation);
    return a;
}

void Table::add(std::vector<nlohmann::json> row)
{
    if (row.size() != columns.size())
        throw std::invalid_argument("Table: row has " + std::to_string(row.size()) + " cells, expected " +
                                    std::to_string(columns.size()));
    rows.push_back(std::move(row));
}

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void emit(const nlohmann::json& j, std::string& out, int depth)
{
    const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
    switch (j.type()) {
    case nlohmann::json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first)
                out += ",\n";
            first = false;
            out += pad + nlohmann::json(it.key()).dump() + ": ";
            emit(it.value(), out, depth + 1);
        }
        out += "\n" + close + "}";
        return;
    }
    case nlohmann::json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i)
                out += ",\n";
            out += pad;
            emit(j[i], out, depth + 1);
        }
        out += "\n" + close + "]";
        return;
    }
    case nlohmann::json::value_t::number_float: {
        const double v = j.get<double>();
        out += std::isfinite(v) ? format_double(v) : "null";
        return;
    }
    default:
        out += j.dump();
    }
}

std::string csv_cell(const nlohmann::json& c)
{
    if (c.is_number_float())
        return format_double(c.get<double>());
    if (c.is_string()) {
        const std::string s = c.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos)
            return s;
        std::string q = "\"";
        for (char ch : s) {
            if (ch == '"')
                q += '"';
            q += ch;
        }
        return q + "\"";
    }
    if (c.is_null())
        return "";
    return c.dump();
}

}  // namespace

std::string render_json(const nlohmann::json& j)
{
    std::string out;
    emit(j, out, 0);
    out += "\n";
    return out;
}

std::string render_csv(const Table& t)
{
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out += (i ? "," : "") + csv_cell(t.columns[i]);
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + csv_cell(row[i]);
        out += "\n";
    }
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw std::runtime_error("cannot write " + tmp.string());
        os.write(contents.data(), std::streamsize(contents.size()));
        if (!os)
            throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

bool Report::pass() const
{
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

namespace {

nlohmann::json body(const Report& r)
{
    nlohmann::json j;
    j["command"] = r.command;
    j["config"] = r.config;
    j["results"] = r.results;
    j["assertions"] = nlohmann::json::array();
    for (const auto& a : r.assertions)
        j["assertions"].push_back(a.to_json());
    j["pass"] = r.pass();
    j["tables"] = nlohmann::json::object();
    for (const auto& [name, t] : r.tables)
        j["tables"][name] = {{"columns", t.columns}, {"rows", t.rows}};
    return j;
}

}  // namespace

std::string Report::content_hash() const { return hex64(fnv1a64(render_json(body(*this)))); }

nlohmann::json Report::to_json() const
{
    nlohmann::json j = body(*this);
    j["content_hash"] = content_hash();
    return j;
}

std::vector<std::filesystem::path> write_report(const Report& r, const std::filesystem::path& out_dir)
{
    std::vector<std::filesystem::path> written;
    const auto json_path = out_dir / (r.command + ".json");
    write_atomic(json_path, render_json(r.to_json()));
    written.push_back(json_path);
    for (const auto& [name, t] : r.tables) {
        const auto p = out_dir / (r.command + "_" + name + ".csv");
        write_atomic(p, render_csv(t));
        written.push_back(p);
    }
    return written;
}

}  // namespace paracontrol
