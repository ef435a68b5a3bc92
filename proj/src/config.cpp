#include "qcoarse/config.hpp"

#include "qcoarse/coarse_model.hpp"

#include <cctype>
#include <cerrno>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

namespace qcoarse {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
        ++begin;
    }
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
        --end;
    }
    return s.substr(begin, end - begin);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw ConfigError("config: invalid value '" + value + "' for " + key);
}

double parse_double(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const double parsed = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE) {
        bad_value(key, value);
    }
    return parsed;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    if (value.empty() || value[0] == '-') {
        bad_value(key, value);
    }
    errno = 0;
    char* end = nullptr;
    const unsigned long long parsed = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE) {
        bad_value(key, value);
    }
    return parsed;
}

int parse_int(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const long parsed = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE || parsed < INT_MIN ||
        parsed > INT_MAX) {
        bad_value(key, value);
    }
    return static_cast<int>(parsed);
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& value) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos <= value.size()) {
        const std::size_t comma = value.find(',', pos);
        const std::string item =
            trim(value.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (item.empty()) {
            bad_value(key, value);
        }
        out.push_back(static_cast<std::size_t>(parse_u64(key, item)));
        if (comma == std::string::npos) {
            break;
        }
        pos = comma + 1;
    }
    return out;
}

RunMode parse_mode(const std::string& key, const std::string& value) {
    if (value == "exact") return RunMode::exact;
    if (value == "coarse") return RunMode::coarse;
    if (value == "bench-exact") return RunMode::bench_exact;
    if (value == "bench-coarse") return RunMode::bench_coarse;
    if (value == "compare") return RunMode::compare;
    bad_value(key, value);
}

OutputFormat parse_format(const std::string& key, const std::string& value) {
    if (value == "json") return OutputFormat::json;
    if (value == "csv") return OutputFormat::csv;
    bad_value(key, value);
}

Propagator parse_propagator(const std::string& key, const std::string& value) {
    if (value == "diagonal") return Propagator::exact_diagonal;
    if (value == "dense-euler") return Propagator::dense_euler;
    bad_value(key, value);
}

void apply_key(ExperimentConfig& c, const std::string& section, const std::string& key,
               const std::string& value) {
    const std::string full = section + "." + key;
    if (section == "run") {
        if (key == "mode") { c.mode = parse_mode(full, value); return; }
        if (key == "seed") { c.seed = parse_u64(full, value); return; }
        if (key == "threads") { c.threads = parse_int(full, value); return; }
        if (key == "out") { c.out_path = value; return; }
        if (key == "format") { c.format = parse_format(full, value); return; }
        if (key == "hbar") { c.hbar = parse_double(full, value); return; }
    } else if (section == "apparatus") {
        if (key == "particles") { c.particles = parse_u64(full, value); return; }
        if (key == "local_dim") { c.local_dim = parse_u64(full, value); return; }
        if (key == "cap") { c.basis_cap = parse_u64(full, value); return; }
    } else if (section == "exact") {
        if (key == "dt") { c.exact_dt = parse_double(full, value); return; }
        if (key == "steps") { c.exact_steps = parse_u64(full, value); return; }
        if (key == "coeff_width") { c.coeff_width = parse_double(full, value); return; }
        if (key == "propagator") { c.propagator = parse_propagator(full, value); return; }
    } else if (section == "coarse") {
        if (key == "abar1") { c.abar1 = parse_double(full, value); return; }
        if (key == "abar2") { c.abar2 = parse_double(full, value); return; }
        if (key == "window1") { c.window1 = parse_double(full, value); return; }
        if (key == "window2") { c.window2 = parse_double(full, value); return; }
        if (key == "dt") { c.coarse_dt = parse_double(full, value); return; }
        if (key == "samples") { c.samples = parse_u64(full, value); return; }
    } else if (section == "compare") {
        if (key == "particles") { c.compare_particles = parse_u64(full, value); return; }
        if (key == "abar1") { c.compare_abar1 = parse_double(full, value); return; }
        if (key == "abar2") { c.compare_abar2 = parse_double(full, value); return; }
        if (key == "window1") { c.compare_window1 = parse_double(full, value); return; }
        if (key == "window2") { c.compare_window2 = parse_double(full, value); return; }
        if (key == "dt") { c.compare_dt = parse_double(full, value); return; }
        if (key == "samples") { c.compare_samples = parse_u64(full, value); return; }
    } else if (section == "amplitudes") {
        if (key == "alpha_re") { c.alpha.real(parse_double(full, value)); return; }
        if (key == "alpha_im") { c.alpha.imag(parse_double(full, value)); return; }
        if (key == "beta_re") { c.beta.real(parse_double(full, value)); return; }
        if (key == "beta_im") { c.beta.imag(parse_double(full, value)); return; }
    } else if (section == "bench") {
        if (key == "n_min") { c.bench_n_min = parse_u64(full, value); return; }
        if (key == "n_max") { c.bench_n_max = parse_u64(full, value); return; }
        if (key == "steps_dense") { c.bench_steps_dense = parse_u64(full, value); return; }
        if (key == "steps_diag") { c.bench_steps_diag = parse_u64(full, value); return; }
        if (key == "reps") { c.bench_reps = parse_u64(full, value); return; }
        if (key == "m_values") { c.bench_m_values = parse_size_list(full, value); return; }
    } else {
        throw ConfigError("config: unknown section '" + section + "'");
    }
    throw ConfigError("config: unknown key '" + full + "'");
}

void apply_file(ExperimentConfig& c, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    std::string section;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#' || text[0] == ';') {
            continue;
        }
        if (text.front() == '[') {
            if (text.back() != ']' || text.size() < 3) {
                throw ConfigError("config: malformed section header at line " +
                                  std::to_string(line_number));
            }
            section = trim(text.substr(1, text.size() - 2));
            continue;
        }
        const std::size_t eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: expected 'key = value' at line " +
                              std::to_string(line_number));
        }
        if (section.empty()) {
            throw ConfigError("config: key outside any [section] at line " +
                              std::to_string(line_number));
        }
        apply_key(c, section, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    }
}

void apply_flags(ExperimentConfig& c, const FlagOverrides& flags) {
    if (flags.seed) {
        c.seed = *flags.seed;
    }
    if (flags.threads) {
        c.threads = *flags.threads;
    }
    if (flags.out) {
        c.out_path = *flags.out;
    }
    if (flags.format) {
        c.format = parse_format("--format", *flags.format);
    }
    if (flags.dt) {
        switch (c.mode) {
        case RunMode::exact:
        case RunMode::bench_exact:
            c.exact_dt = *flags.dt;
            break;
        case RunMode::coarse:
        case RunMode::bench_coarse:
            c.coarse_dt = *flags.dt;
            break;
        case RunMode::compare:
            c.compare_dt = *flags.dt;
            break;
        }
    }
    if (flags.samples) {
        switch (c.mode) {
        case RunMode::coarse:
            c.samples = *flags.samples;
            break;
        case RunMode::compare:
            c.compare_samples = *flags.samples;
            break;
        default:
            throw ConfigError(std::string("--samples does not apply to mode '") +
                              to_string(c.mode) + "'");
        }
    }
    if (flags.particles) {
        switch (c.mode) {
        case RunMode::exact:
            c.particles = *flags.particles;
            break;
        case RunMode::compare:
            c.compare_particles = *flags.particles;
            break;
        case RunMode::bench_exact:
            c.bench_n_max = *flags.particles;
            break;
        default:
            throw ConfigError(std::string("--particles does not apply to mode '") +
                              to_string(c.mode) + "'");
        }
    }
    if (flags.steps) {
        if (c.mode != RunMode::exact) {
            throw ConfigError(std::string("--steps does not apply to mode '") +
                              to_string(c.mode) + "'");
        }
        c.exact_steps = *flags.steps;
    }
}

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw ConfigError("config: " + message);
    }
}

} // namespace

const char* to_string(RunMode mode) {
    switch (mode) {
    case RunMode::exact: return "exact";
    case RunMode::coarse: return "coarse";
    case RunMode::bench_exact: return "bench-exact";
    case RunMode::bench_coarse: return "bench-coarse";
    default: return "compare";
    }
}

const char* to_string(OutputFormat format) {
    return format == OutputFormat::json ? "json" : "csv";
}

void validate(const ExperimentConfig& c) {
    require(std::isfinite(c.hbar) && c.hbar > 0.0, "run.hbar must be positive");
    require(c.threads >= 0 && c.threads <= 1024, "run.threads must be in [0, 1024]");

    require(c.particles >= 1, "apparatus.particles must be >= 1");
    require(c.local_dim >= 2, "apparatus.local_dim must be >= 2");
    require(c.basis_cap >= c.local_dim, "apparatus.cap must be >= apparatus.local_dim");

    require(std::isfinite(c.exact_dt) && c.exact_dt > 0.0, "exact.dt must be positive");
    require(c.exact_steps >= 1, "exact.steps must be >= 1");
    require(std::isfinite(c.coeff_width) && c.coeff_width >= 0.0,
            "exact.coeff_width must be non-negative");

    require(std::isfinite(c.abar1) && std::isfinite(c.abar2),
            "coarse.abar1 and coarse.abar2 must be finite");
    require(std::isfinite(c.window1) && c.window1 >= 0.0, "coarse.window1 must be >= 0");
    require(std::isfinite(c.window2) && c.window2 >= 0.0, "coarse.window2 must be >= 0");
    require(std::isfinite(c.coarse_dt) && c.coarse_dt > 0.0, "coarse.dt must be positive");
    require(c.samples >= 1, "coarse.samples must be >= 1");

    require(c.compare_particles >= 1, "compare.particles must be >= 1");
    require(std::isfinite(c.compare_abar1) && std::isfinite(c.compare_abar2),
            "compare.abar1 and compare.abar2 must be finite");
    require(std::isfinite(c.compare_window1) && c.compare_window1 >= 0.0,
            "compare.window1 must be >= 0");
    require(std::isfinite(c.compare_window2) && c.compare_window2 >= 0.0,
            "compare.window2 must be >= 0");
    require(std::isfinite(c.compare_dt) && c.compare_dt > 0.0, "compare.dt must be positive");
    require(c.compare_samples >= 1, "compare.samples must be >= 1");

    const double amp_total = std::norm(c.alpha) + std::norm(c.beta);
    require(std::isfinite(amp_total) && std::abs(amp_total - 1.0) <= 1e-12,
            "amplitudes: |alpha|^2 + |beta|^2 = " + std::to_string(amp_total) +
                "; must be 1 within 1e-12");

    require(c.bench_n_min >= 1, "bench.n_min must be >= 1");
    require(c.bench_n_min <= c.bench_n_max, "bench.n_min must be <= bench.n_max");
    require(c.bench_steps_dense >= 1, "bench.steps_dense must be >= 1");
    require(c.bench_steps_diag >= 1, "bench.steps_diag must be >= 1");
    require(c.bench_reps >= 1, "bench.reps must be >= 1");
    require(!c.bench_m_values.empty(), "bench.m_values must be non-empty");
    for (const std::size_t m : c.bench_m_values) {
        require(m >= 1, "bench.m_values entries must be >= 1");
    }

    // Mode-owned dimension checks, so no computation starts on a spec the
    // owning module would reject.
    try {
        if (c.mode == RunMode::exact) {
            ApparatusSpec::create(c.particles, c.local_dim, c.basis_cap);
        }
        if (c.mode == RunMode::compare) {
            ApparatusSpec::create(c.compare_particles, c.local_dim, c.basis_cap);
        }
        if (c.mode == RunMode::coarse || c.mode == RunMode::bench_coarse ||
            c.mode == RunMode::compare) {
            const double dt = c.mode == RunMode::compare ? c.compare_dt : c.coarse_dt;
            const double w1 = c.mode == RunMode::compare ? c.compare_window1 : c.window1;
            const double w2 = c.mode == RunMode::compare ? c.compare_window2 : c.window2;
            const double a1 = c.mode == RunMode::compare ? c.compare_abar1 : c.abar1;
            const double a2 = c.mode == RunMode::compare ? c.compare_abar2 : c.abar2;
            CoarseSpec spec(a1, a2, w1, w2, dt, c.hbar);
            InitialAmplitudes amps(c.alpha, c.beta);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

ExperimentConfig parse_config(RunMode mode, const std::string& config_path,
                              const FlagOverrides& flags) {
    ExperimentConfig config;
    if (!config_path.empty()) {
        apply_file(config, config_path);
    }
    // The subcommand owns the mode regardless of what the file said.
    config.mode = mode;
    apply_flags(config, flags);
    validate(config);
    return config;
}

} // namespace qcoarse
