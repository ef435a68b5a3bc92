// Run configuration: mode selection, defaults, config-file parsing, flag
// overrides, and validation. Parsing is strict: an unknown section or key is
// an error naming it, and every bound violation names the field and the
// bound. Nothing is computed until the whole configuration validates.

#pragma once

#include "qcoarse/exact_model.hpp"
#include "qcoarse/quantum_state.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcoarse {

enum class RunMode { exact, coarse, bench_exact, bench_coarse, compare };
enum class OutputFormat { json, csv };

const char* to_string(RunMode mode);
const char* to_string(OutputFormat format);

// Configuration problems exit with status 2; compute problems with 3.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Command-line values that take precedence over config-file values. Each
// flag maps onto the active mode's owning field; a flag the active mode has
// no use for is an error rather than a silent no-op.
struct FlagOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::optional<std::uint32_t> particles;
    std::optional<std::uint32_t> steps;
    std::optional<double> dt;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<int> threads;
};

struct ExperimentConfig {
    // [run]
    RunMode mode = RunMode::coarse;
    std::uint64_t seed = 42;
    int threads = 0; // 0 = library default
    std::string out_path;
    OutputFormat format = OutputFormat::json;
    double hbar = 1.0;

    // [apparatus]
    std::size_t particles = 10;
    std::size_t local_dim = 2;
    std::size_t basis_cap = kDefaultBasisCap;

    // [exact]
    double exact_dt = 0.05;
    std::size_t exact_steps = 200;
    double coeff_width = 20.0;
    Propagator propagator = Propagator::exact_diagonal;

    // [coarse] (default windows put a full phase period across each
    // uncertainty interval at dt/hbar = 1)
    double abar1 = 1.0;
    double abar2 = -1.0;
    double window1 = 3.141592653589793;
    double window2 = 3.141592653589793;
    double coarse_dt = 1.0;
    std::size_t samples = 100000;

    // [compare] (half-period windows so the matched-parameter check has a
    // visibly nonzero visibility to agree on)
    std::size_t compare_particles = 12;
    double compare_abar1 = 0.5235987755982988;  // pi/6
    double compare_abar2 = -0.5235987755982988; // -pi/6
    double compare_window1 = 1.5707963267948966; // pi/2
    double compare_window2 = 1.5707963267948966;
    double compare_dt = 1.0;
    std::size_t compare_samples = 100000;

    // [amplitudes]
    cplx alpha{kInvSqrt2, 0.0};
    cplx beta{kInvSqrt2, 0.0};

    // [bench]
    std::size_t bench_n_min = 8;
    std::size_t bench_n_max = 14;
    std::size_t bench_steps_dense = 1;
    std::size_t bench_steps_diag = 64;
    std::size_t bench_reps = 3;
    std::vector<std::size_t> bench_m_values = {10000, 20000, 40000, 80000};
};

// Builds the effective configuration: defaults, then the config file when
// `config_path` is non-empty, then flag overrides; validates before
// returning. The mode always comes from the subcommand.
ExperimentConfig parse_config(RunMode mode, const std::string& config_path,
                              const FlagOverrides& flags = {});

// Throws ConfigError naming the first violated field and its bound.
void validate(const ExperimentConfig& config);

} // namespace qcoarse
