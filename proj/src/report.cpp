#include "qcoarse/report.hpp"

#include <unistd.h>

#include <cinttypes>
#include <csignal>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace qcoarse {

namespace {

using nlohmann::ordered_json;

// Path of the in-flight temp file, for signal cleanup. The flag is set only
// after the path bytes are in place.
char g_temp_path[4096] = {};
volatile std::sig_atomic_t g_temp_active = 0;

extern "C" void cleanup_temp_and_reraise(int sig) {
    if (g_temp_active) {
        ::unlink(g_temp_path);
        g_temp_active = 0;
    }
    std::signal(sig, SIG_DFL);
    std::raise(sig);
}

void install_cleanup_handlers_once() {
    static const bool installed = [] {
        std::signal(SIGINT, cleanup_temp_and_reraise);
        std::signal(SIGTERM, cleanup_temp_and_reraise);
        return true;
    }();
    (void)installed;
}

ordered_json amplitudes_echo(const ExperimentConfig& c) {
    return ordered_json{{"alpha_re", c.alpha.real()},
                        {"alpha_im", c.alpha.imag()},
                        {"beta_re", c.beta.real()},
                        {"beta_im", c.beta.imag()}};
}

ordered_json config_echo(const ExperimentConfig& c) {
    ordered_json j;
    j["seed"] = c.seed;
    j["hbar"] = c.hbar;
    switch (c.mode) {
    case RunMode::exact:
        j["apparatus"] = {{"particles", c.particles},
                          {"local_dim", c.local_dim},
                          {"cap", c.basis_cap}};
        j["exact"] = {{"dt", c.exact_dt},
                      {"steps", c.exact_steps},
                      {"coeff_width", c.coeff_width},
                      {"propagator",
                       c.propagator == Propagator::exact_diagonal ? "diagonal" : "dense-euler"}};
        j["amplitudes"] = amplitudes_echo(c);
        break;
    case RunMode::coarse:
        j["coarse"] = {{"abar1", c.abar1},   {"abar2", c.abar2}, {"window1", c.window1},
                       {"window2", c.window2}, {"dt", c.coarse_dt}, {"samples", c.samples}};
        j["amplitudes"] = amplitudes_echo(c);
        break;
    case RunMode::bench_exact:
        j["apparatus"] = {{"local_dim", c.local_dim}, {"cap", c.basis_cap}};
        j["exact"] = {{"dt", c.exact_dt}, {"coeff_width", c.coeff_width}};
        j["bench"] = {{"n_min", c.bench_n_min},
                      {"n_max", c.bench_n_max},
                      {"steps_dense", c.bench_steps_dense},
                      {"steps_diag", c.bench_steps_diag},
                      {"reps", c.bench_reps}};
        break;
    case RunMode::bench_coarse:
        j["coarse"] = {{"abar1", c.abar1},   {"abar2", c.abar2}, {"window1", c.window1},
                       {"window2", c.window2}, {"dt", c.coarse_dt}};
        j["bench"] = {{"m_values", c.bench_m_values}, {"reps", c.bench_reps}};
        j["amplitudes"] = amplitudes_echo(c);
        break;
    case RunMode::compare:
        j["compare"] = {{"particles", c.compare_particles},
                        {"abar1", c.compare_abar1},
                        {"abar2", c.compare_abar2},
                        {"window1", c.compare_window1},
                        {"window2", c.compare_window2},
                        {"dt", c.compare_dt},
                        {"samples", c.compare_samples}};
        j["apparatus"] = {{"local_dim", c.local_dim}, {"cap", c.basis_cap}};
        j["amplitudes"] = amplitudes_echo(c);
        break;
    }
    return j;
}

std::string scalar_to_string(const ordered_json& node) {
    if (node.is_string()) {
        return node.get<std::string>();
    }
    if (node.is_number_float()) {
        return format_double(node.get<double>());
    }
    return node.dump();
}

bool is_scalar_array(const ordered_json& node) {
    for (const auto& item : node) {
        if (item.is_object() || item.is_array()) {
            return false;
        }
    }
    return true;
}

void flatten_comments(const ordered_json& node, const std::string& path, std::string& out) {
    if (node.is_object()) {
        for (const auto& [key, value] : node.items()) {
            flatten_comments(value, path.empty() ? key : path + "." + key, out);
        }
        return;
    }
    if (node.is_array()) {
        if (is_scalar_array(node)) {
            out += "# " + path + " = ";
            for (std::size_t i = 0; i < node.size(); ++i) {
                if (i > 0) {
                    out += ",";
                }
                out += scalar_to_string(node[i]);
            }
            out += "\n";
        }
        // Arrays of objects are the record table's business.
        return;
    }
    out += "# " + path + " = " + scalar_to_string(node) + "\n";
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

RunReport make_report_envelope(const ExperimentConfig& config) {
    RunReport report;
    report.body["schema_version"] = kSchemaVersion;
    report.body["tool"] = kToolName;
    report.body["version"] = kToolVersion;
    report.body["mode"] = to_string(config.mode);
    report.body["config"] = config_echo(config);
    return report;
}

void attach_execution(RunReport& report, int threads, double elapsed_seconds,
                      const std::string& out_path) {
    std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &utc);
    report.body["execution"] = ordered_json{{"threads", threads},
                                            {"elapsed_seconds", elapsed_seconds},
                                            {"started_at", stamp},
                                            {"out", out_path}};
}

std::string render_report(const RunReport& report, OutputFormat format) {
    if (format == OutputFormat::json) {
        return report.body.dump(2) + "\n";
    }
    std::string out;
    flatten_comments(report.body, "", out);
    if (!report.table.columns.empty()) {
        for (std::size_t i = 0; i < report.table.columns.size(); ++i) {
            if (i > 0) {
                out += ",";
            }
            out += report.table.columns[i];
        }
        out += "\n";
        for (const std::vector<std::string>& row : report.table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i > 0) {
                    out += ",";
                }
                out += row[i];
            }
            out += "\n";
        }
    }
    return out;
}

void probe_output_path(const std::string& path) {
    if (path.empty()) {
        return;
    }
    const std::string probe = path + ".probe" + std::to_string(::getpid());
    std::ofstream f(probe);
    if (!f) {
        throw ConfigError("output path '" + path + "' is not writable");
    }
    f.close();
    ::unlink(probe.c_str());
}

void write_file_atomic(const std::string& path, const std::string& content) {
    install_cleanup_handlers_once();
    const std::string temp = path + ".tmp" + std::to_string(::getpid());
    if (temp.size() + 1 > sizeof(g_temp_path)) {
        throw std::runtime_error("output path too long");
    }
    std::memcpy(g_temp_path, temp.c_str(), temp.size() + 1);
    g_temp_active = 1;

    {
        std::ofstream f(temp, std::ios::binary | std::ios::trunc);
        if (!f) {
            g_temp_active = 0;
            throw std::runtime_error("cannot create temp file '" + temp + "'");
        }
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) {
            f.close();
            ::unlink(temp.c_str());
            g_temp_active = 0;
            throw std::runtime_error("failed writing '" + temp + "'");
        }
    }
    if (std::rename(temp.c_str(), path.c_str()) != 0) {
        ::unlink(temp.c_str());
        g_temp_active = 0;
        throw std::runtime_error("failed to move report into place at '" + path + "'");
    }
    g_temp_active = 0;
}

} // namespace qcoarse
