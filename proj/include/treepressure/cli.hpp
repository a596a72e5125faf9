#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "treepressure/preimage.hpp"

namespace treepressure {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

inline constexpr const char* kCsvSchemaColumn = "schema=1";
inline constexpr const char* kReportSchema = "treepressure.report/1";

// Runs one command on a parsed configuration and writes the CSV or JSON
// output to `out_path`. Returns an exit code; diagnostics go to `err`.
int run_command(const std::string& command, const nlohmann::json& config, const std::string& out_path,
                FoldMode mode, std::ostream& err);

// `tpressure --config <path> --out <path> [--command <name>] [--mode serial|parallel]`
int run_cli(int argc, char** argv);

// 17 significant digits; infinities as "inf"/"-inf".
std::string format_real(double v);

}  // namespace treepressure
