// Report rendering and persistence. A run produces one report that renders
// to JSON (everything) or long-form CSV (the records, with scalars as
// comment lines); both views carry the same records. Every field outside
// the "execution" block and outside benchmark wall-time/fit values is a
// deterministic function of (config, seed). Files are written atomically:
// content goes to a temp file that is renamed over the target, and the temp
// file is removed if the process is interrupted.

#pragma once

#include "qcoarse/config.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace qcoarse {

inline constexpr const char* kToolName = "qcoarse";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

// The record table used by the CSV rendering; the runner fills it with the
// mode's primary records (per-step rows, bench points, or the one-row
// summary). All cells are preformatted strings.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct RunReport {
    nlohmann::ordered_json body;
    CsvTable table;
};

// Shortest-round-trip-exact decimal rendering for CSV cells.
std::string format_double(double value);

// The common envelope: schema_version, tool identity, mode, config echo.
// Mode-specific results are attached by the runner under "results";
// invocation metadata (threads, timing, output path) goes under
// "execution" afterwards so deterministic and non-deterministic fields
// never interleave.
RunReport make_report_envelope(const ExperimentConfig& config);

// Invocation metadata, appended after the results so deterministic and
// non-deterministic fields never interleave.
void attach_execution(RunReport& report, int threads, double elapsed_seconds,
                      const std::string& out_path);

// Renders the report in the requested format, newline-terminated. The CSV
// view carries every non-array scalar as a '# path = value' comment line,
// then the record table.
std::string render_report(const RunReport& report, OutputFormat format);

// Fails if the directory of `path` cannot take a new file. Run before any
// computation so an unwritable destination never wastes a run.
void probe_output_path(const std::string& path);

// Temp-file-plus-rename write; the target never exists half-written.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace qcoarse
