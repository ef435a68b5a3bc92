#include "qcoarse/runner.hpp"

#include "qcoarse/coarse_model.hpp"
#include "qcoarse/exact_model.hpp"
#include "qcoarse/kernels.hpp"
#include "qcoarse/rng.hpp"
#include "qcoarse/scaling_bench.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qcoarse {

namespace {

using nlohmann::ordered_json;

ordered_json estimate_json(const TransitionEstimate& e) {
    return ordered_json{{"mean", e.mean}, {"std_error", e.std_error}, {"samples", e.samples}};
}

ordered_json point_json(const BenchPoint& p) {
    return ordered_json{{"label", p.label},
                        {"size_param", p.size_param},
                        {"state_dim", p.state_dim},
                        {"wall_time", p.wall_time},
                        {"peak_bytes", p.peak_bytes}};
}

ordered_json fit_json(const GrowthReport& g) {
    return ordered_json{
        {"model", to_string(g.model)},
        {"log_slope", g.log_slope},
        {"slope", g.slope},
        {"r_squared", g.r_squared},
        {"median_ratio", g.median_ratio},
        {"verdict", to_string(g.verdict)},
        {"thresholds",
         {{"min_r_squared", g.thresholds.min_r_squared},
          {"min_time_ratio", g.thresholds.min_time_ratio},
          {"linear_ratio_low", g.thresholds.linear_ratio_low},
          {"linear_ratio_high", g.thresholds.linear_ratio_high}}}};
}

// Growth classification needs four points; a shorter sweep still reports,
// just without a fitted verdict.
ordered_json fit_or_stub(const std::vector<BenchPoint>& points, GrowthModel model) {
    if (points.size() >= 4) {
        return fit_json(fit_growth(points, model));
    }
    return ordered_json{{"model", to_string(model)},
                        {"verdict", "inconclusive"},
                        {"reason", "fewer than 4 points"}};
}

CoarseSpec coarse_spec_of(const ExperimentConfig& c) {
    return CoarseSpec(c.abar1, c.abar2, c.window1, c.window2, c.coarse_dt, c.hbar);
}

void run_coarse_mode(const ExperimentConfig& c, RunReport& report) {
    const CoarseSpec spec = coarse_spec_of(c);
    const InitialAmplitudes amps(c.alpha, c.beta);
    CounterRng rng(c.seed);
    const TransitionEstimate estimate = aggregate_probability(amps, spec, c.samples, rng);
    // Continues on the same stream; the whole run consumes 4*samples values.
    const PhaseAverages averages = phase_average_check(spec, c.samples, rng);

    report.body["results"] = ordered_json{
        {"estimate", estimate_json(estimate)},
        {"phase_averages",
         {{"mean_cos", averages.mean_cos}, {"mean_sin", averages.mean_sin}}}};
    report.table.columns = {"samples", "mean", "std_error", "mean_cos", "mean_sin"};
    report.table.rows = {{std::to_string(estimate.samples), format_double(estimate.mean),
                          format_double(estimate.std_error), format_double(averages.mean_cos),
                          format_double(averages.mean_sin)}};
}

void run_exact_mode(const ExperimentConfig& c, RunReport& report) {
    const ApparatusSpec app = ApparatusSpec::create(c.particles, c.local_dim, c.basis_cap);
    const InteractionCoefficients coeffs =
        random_coefficients(app.basis_size, c.coeff_width, c.seed);
    const ApparatusWeights weights = ApparatusWeights::uniform(app.basis_size);
    const PhysicalConstants constants(c.hbar);

    ExactRunOptions options;
    options.alpha = c.alpha;
    options.beta = c.beta;
    options.propagator = c.propagator;
    const ExactExperimentResult result =
        run_exact_experiment(app, coeffs, weights, c.exact_dt, c.exact_steps, constants, options);

    ordered_json records = ordered_json::array();
    report.table.columns = {"step", "t", "probability", "coherence", "norm"};
    for (const StepRecord& r : result.records) {
        records.push_back(ordered_json{{"step", r.step},
                                       {"t", r.t},
                                       {"probability", r.probability},
                                       {"coherence", r.coherence},
                                       {"norm", r.norm}});
        report.table.rows.push_back({std::to_string(r.step), format_double(r.t),
                                     format_double(r.probability), format_double(r.coherence),
                                     format_double(r.norm)});
    }
    const StepRecord& last = result.records.back();
    const double closed_form =
        coherence_factor(coeffs, weights, last.t, constants);

    report.body["results"] =
        ordered_json{{"state_dim", 2 * app.basis_size},
                     {"records", std::move(records)},
                     {"final",
                      {{"step", last.step},
                       {"t", last.t},
                       {"probability", last.probability},
                       {"coherence", last.coherence},
                       {"norm", last.norm},
                       {"closed_form_coherence", closed_form}}}};
}

void run_bench_exact_mode(const ExperimentConfig& c, RunReport& report) {
    ExactScalingOptions options;
    options.local_dim = c.local_dim;
    options.n_min = c.bench_n_min;
    options.n_max = c.bench_n_max;
    options.dt = c.exact_dt;
    options.steps_dense = c.bench_steps_dense;
    options.steps_diagonal = c.bench_steps_diag;
    options.coeff_width = c.coeff_width;
    options.seed = c.seed;
    options.repetitions = c.bench_reps;
    options.basis_cap = c.basis_cap;
    const ExactScalingResult result = run_exact_scaling(options);

    ordered_json dense_points = ordered_json::array();
    ordered_json diagonal_points = ordered_json::array();
    report.table.columns = {"series", "label", "size_param", "state_dim", "wall_time",
                            "peak_bytes"};
    for (const BenchPoint& p : result.dense_points) {
        dense_points.push_back(point_json(p));
        report.table.rows.push_back({"dense", p.label, std::to_string(p.size_param),
                                     std::to_string(p.state_dim), format_double(p.wall_time),
                                     std::to_string(p.peak_bytes)});
    }
    for (const BenchPoint& p : result.diagonal_points) {
        diagonal_points.push_back(point_json(p));
        report.table.rows.push_back({"diagonal", p.label, std::to_string(p.size_param),
                                     std::to_string(p.state_dim), format_double(p.wall_time),
                                     std::to_string(p.peak_bytes)});
    }

    ordered_json results;
    results["dense"] = ordered_json{{"points", std::move(dense_points)},
                                    {"fit", fit_or_stub(result.dense_points,
                                                        GrowthModel::exponential)}};
    results["diagonal"] = ordered_json{{"points", std::move(diagonal_points)},
                                       {"fit", fit_or_stub(result.diagonal_points,
                                                           GrowthModel::exponential)}};
    results["truncated"] = result.truncated;
    if (result.truncated) {
        results["truncated_at"] = result.truncated_at;
    }
    report.body["results"] = std::move(results);
}

void run_bench_coarse_mode(const ExperimentConfig& c, RunReport& report) {
    const CoarseSpec spec = coarse_spec_of(c);
    const InitialAmplitudes amps(c.alpha, c.beta);
    CoarseScalingOptions options;
    options.sample_counts = c.bench_m_values;
    options.seed = c.seed;
    options.repetitions = c.bench_reps;
    const CoarseScalingResult result = run_coarse_scaling(spec, amps, options);

    ordered_json points = ordered_json::array();
    ordered_json estimates = ordered_json::array();
    report.table.columns = {"label",      "size_param", "state_dim", "wall_time",
                            "peak_bytes", "mean",       "std_error"};
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        const BenchPoint& p = result.points[i];
        const TransitionEstimate& e = result.estimates[i];
        points.push_back(point_json(p));
        estimates.push_back(estimate_json(e));
        report.table.rows.push_back({p.label, std::to_string(p.size_param),
                                     std::to_string(p.state_dim), format_double(p.wall_time),
                                     std::to_string(p.peak_bytes), format_double(e.mean),
                                     format_double(e.std_error)});
    }

    report.body["results"] =
        ordered_json{{"points", std::move(points)},
                     {"estimates", std::move(estimates)},
                     {"fit", fit_or_stub(result.points, GrowthModel::linear)}};
}

void run_compare_mode(const ExperimentConfig& c, RunReport& report) {
    const ApparatusSpec app =
        ApparatusSpec::create(c.compare_particles, c.local_dim, c.basis_cap);
    // Split the basis into a coupling grid per branch; midpoint lattices make
    // the realized visibility track the sampled distribution's moments.
    std::size_t grid1 = 1;
    for (std::size_t i = 0; i < (c.compare_particles + 1) / 2; ++i) {
        grid1 *= c.local_dim;
    }
    const std::size_t grid2 = app.basis_size / grid1;
    const InteractionCoefficients coeffs = lattice_coefficients(
        grid1, grid2, c.compare_abar1, c.compare_abar2, c.compare_window1, c.compare_window2);
    const ApparatusWeights weights = ApparatusWeights::uniform(app.basis_size);
    const PhysicalConstants constants(c.hbar);

    ExactRunOptions options;
    options.alpha = c.alpha;
    options.beta = c.beta;
    options.propagator = Propagator::exact_diagonal;
    const ExactExperimentResult exact =
        run_exact_experiment(app, coeffs, weights, c.compare_dt, 1, constants, options);
    const StepRecord& record = exact.records.front();

    const double closed_form = coherence_factor(coeffs, weights, c.compare_dt, constants);
    if (std::abs(record.coherence - closed_form) > 1e-10) {
        throw std::runtime_error("visibility cross-check failed: state route " +
                                 format_double(record.coherence) + " vs closed form " +
                                 format_double(closed_form));
    }

    const double a = std::norm(c.alpha);
    const double b = std::norm(c.beta);
    const double phase = (c.compare_abar1 - c.compare_abar2) * c.compare_dt / c.hbar;
    const double reference = a * a + b * b + 2.0 * a * b * record.coherence * std::cos(phase);

    const CoarseSpec spec(c.compare_abar1, c.compare_abar2, c.compare_window1, c.compare_window2,
                          c.compare_dt, c.hbar);
    const InitialAmplitudes amps(c.alpha, c.beta);
    CounterRng rng(c.seed);
    const TransitionEstimate estimate = aggregate_probability(amps, spec, c.compare_samples, rng);

    const double difference = estimate.mean - reference;
    const double band = 3.0 * estimate.std_error;
    const bool within = std::abs(difference) <= band;

    report.body["results"] = ordered_json{
        {"exact",
         {{"state_dim", 2 * app.basis_size},
          {"visibility", record.coherence},
          {"visibility_closed_form", closed_form},
          {"branch_phase", phase},
          {"survival_probability", record.probability},
          {"reference_probability", reference}}},
        {"coarse", estimate_json(estimate)},
        {"difference", difference},
        {"three_std_errors", band},
        {"within_three_std_errors", within}};
    report.table.columns = {"samples",   "coarse_mean", "coarse_std_error",
                            "visibility", "reference_probability", "difference",
                            "within_three_std_errors"};
    report.table.rows = {{std::to_string(estimate.samples), format_double(estimate.mean),
                          format_double(estimate.std_error), format_double(record.coherence),
                          format_double(reference), format_double(difference),
                          within ? "true" : "false"}};
}

} // namespace

RunReport run(const ExperimentConfig& config) {
    probe_output_path(config.out_path);
    kernels::set_thread_count(config.threads);

    const std::chrono::steady_clock::time_point begin = std::chrono::steady_clock::now();
    RunReport report = make_report_envelope(config);
    switch (config.mode) {
    case RunMode::exact:
        run_exact_mode(config, report);
        break;
    case RunMode::coarse:
        run_coarse_mode(config, report);
        break;
    case RunMode::bench_exact:
        run_bench_exact_mode(config, report);
        break;
    case RunMode::bench_coarse:
        run_bench_coarse_mode(config, report);
        break;
    case RunMode::compare:
        run_compare_mode(config, report);
        break;
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
    attach_execution(report, config.threads, elapsed, config.out_path);

    if (!config.out_path.empty()) {
        write_file_atomic(config.out_path, render_report(report, config.format));
    }
    return report;
}

} // namespace qcoarse
