#pragma once

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ietlab::cli {

using nlohmann::json;

inline constexpr const char* kToolName = "ietlab";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalFailure = 3, kDegenerate = 4 };

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::vector<std::string> command;  // e.g. {"dimension", "p0"}
    json args = json::object();        // command flags as given
    int precision_bits = 128;
    std::uint64_t seed = 1;
    std::string output_path;  // empty: stdout
    std::string format;       // json, csv, or empty for the command default
    unsigned jobs = 1;

    json echo() const;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
};

struct Report {
    json header = json::object();
    json body = json::object();
    std::optional<Table> table;
    std::string default_format = "json";
    int exit_code = kOk;
};

std::string render_json(const Report& report);
std::string render_csv(const Table& table);

// Writes to a temporary file in the same directory, then renames over path.
void write_atomic(const std::string& path, const std::string& contents);

// Body with an error payload for a failed run.
json error_body(const std::string& type, const std::string& message, int code);

// Full command-line entry point; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ietlab::cli
