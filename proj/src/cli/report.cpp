#include "ietlab/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace ietlab::cli {

json RunConfig::echo() const {
    return {{"command", command}, {"args", args},     {"precision_bits", precision_bits},
            {"seed", seed},       {"format", format}, {"jobs", jobs}};
}

std::string render_json(const Report& report) {
    json doc = {{"header", report.header}, {"body", report.body}};
    return doc.dump(2) + "\n";
}

namespace {

std::string csv_cell(const json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

}  // namespace

std::string render_csv(const Table& table) {
    std::ostringstream out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
        out << "\n";
    }
    return out.str();
}

void write_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
    std::random_device rd;
    fs::path tmp = dir / ("." + target.filename().string() + ".tmp" + std::to_string(rd()));
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f << contents;
        f.flush();
        if (!f) {
            f.close();
            fs::remove(tmp);
            throw std::runtime_error("write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot move report into place: " + ec.message());
    }
}

json error_body(const std::string& type, const std::string& message, int code) {
    return {{"status", "error"}, {"error", {{"type", type}, {"message", message}, {"exit_code", code}}}};
}

}  // namespace ietlab::cli
