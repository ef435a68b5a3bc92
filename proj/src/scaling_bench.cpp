#include "qcoarse/scaling_bench.hpp"

#include "qcoarse/kernels.hpp"
#include "qcoarse/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qcoarse {

namespace {

using steady = std::chrono::steady_clock;

template <typename Fn>
double min_timed_seconds(std::size_t repetitions, Fn&& fn) {
    fn(); // warm-up, untimed
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        const steady::time_point begin = steady::now();
        fn();
        const steady::time_point end = steady::now();
        best = std::min(best, std::chrono::duration<double>(end - begin).count());
    }
    // The clock can in principle report 0 for very small sections; keep the
    // wall_time > 0 invariant.
    return std::max(best, 1e-9);
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

struct LeastSquaresFit {
    double slope;
    double intercept;
    double r_squared;
};

LeastSquaresFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (slope * x[i] + intercept);
        ss_res += r * r;
        ss_tot += (y[i] - my) * (y[i] - my);
    }
    // A flat series carries no information about the model quality.
    const double r_squared = ss_tot > 1e-30 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 0.0;
    return LeastSquaresFit{slope, intercept, r_squared};
}

} // namespace

const char* to_string(GrowthModel model) {
    return model == GrowthModel::exponential ? "exponential" : "linear";
}

const char* to_string(Verdict verdict) {
    switch (verdict) {
    case Verdict::exponential_consistent:
        return "exponential-consistent";
    case Verdict::linear_consistent:
        return "linear-consistent";
    default:
        return "inconclusive";
    }
}

GrowthReport fit_growth(const std::vector<BenchPoint>& points, GrowthModel model,
                        const GrowthThresholds& thresholds) {
    if (points.size() < 4) {
        throw std::invalid_argument("fit_growth needs at least 4 points (got " +
                                    std::to_string(points.size()) + ")");
    }
    std::vector<BenchPoint> sorted = points;
    std::sort(sorted.begin(), sorted.end(),
              [](const BenchPoint& a, const BenchPoint& b) { return a.size_param < b.size_param; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (!(sorted[i].wall_time > 0.0) || !std::isfinite(sorted[i].wall_time)) {
            throw std::invalid_argument("fit_growth: wall_time must be positive and finite");
        }
        if (i > 0 && sorted[i].size_param == sorted[i - 1].size_param) {
            throw std::invalid_argument("fit_growth: duplicate size_param " +
                                        std::to_string(sorted[i].size_param));
        }
    }

    std::vector<double> x(sorted.size());
    std::vector<double> t(sorted.size());
    std::vector<double> log_t(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        x[i] = static_cast<double>(sorted[i].size_param);
        t[i] = sorted[i].wall_time;
        log_t[i] = std::log(sorted[i].wall_time);
    }
    const LeastSquaresFit log_fit = least_squares(x, log_t);
    const LeastSquaresFit lin_fit = least_squares(x, t);

    std::vector<double> ratios;
    ratios.reserve(sorted.size() - 1);
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        const double time_ratio = t[i] / t[i - 1];
        if (model == GrowthModel::exponential) {
            ratios.push_back(time_ratio);
        } else {
            ratios.push_back(time_ratio / (x[i] / x[i - 1]));
        }
    }
    const double median_ratio = median(std::move(ratios));

    Verdict verdict = Verdict::inconclusive;
    double r_squared = 0.0;
    if (model == GrowthModel::exponential) {
        r_squared = log_fit.r_squared;
        if (r_squared >= thresholds.min_r_squared && median_ratio >= thresholds.min_time_ratio) {
            verdict = Verdict::exponential_consistent;
        }
    } else {
        r_squared = lin_fit.r_squared;
        if (r_squared >= thresholds.min_r_squared && lin_fit.slope > 0.0 &&
            median_ratio >= thresholds.linear_ratio_low &&
            median_ratio <= thresholds.linear_ratio_high) {
            verdict = Verdict::linear_consistent;
        }
    }

    return GrowthReport{model,       std::move(sorted), log_fit.slope, lin_fit.slope,
                        r_squared,   median_ratio,      verdict,       thresholds};
}

ExactScalingResult run_exact_scaling(const ExactScalingOptions& options) {
    if (options.n_min == 0 || options.n_min > options.n_max) {
        throw std::invalid_argument("particle count range must satisfy 1 <= n_min <= n_max");
    }
    if (options.repetitions == 0) {
        throw std::invalid_argument("repetitions must be >= 1");
    }

    ExactScalingResult result;
    for (std::size_t n = options.n_min; n <= options.n_max; ++n) {
        // Stop at the cap rather than erroring: the sweep up to here is
        // still a valid (marked) partial result.
        std::size_t basis = 1;
        bool over_cap = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (basis > options.basis_cap / options.local_dim) {
                over_cap = true;
                break;
            }
            basis *= options.local_dim;
        }
        if (over_cap) {
            result.truncated = true;
            result.truncated_at = n;
            break;
        }

        const ApparatusSpec app = ApparatusSpec::create(n, options.local_dim, options.basis_cap);
        const InteractionCoefficients coeffs = random_coefficients(
            app.basis_size, options.coeff_width, derive_stream(options.seed, n));
        const ApparatusWeights weights = ApparatusWeights::uniform(app.basis_size);
        const std::size_t dim = 2 * app.basis_size;

        ExactRunOptions dense_run;
        dense_run.propagator = Propagator::dense_euler;
        dense_run.serial_kernels = true;
        const double dense_time = min_timed_seconds(options.repetitions, [&] {
            run_exact_experiment(app, coeffs, weights, options.dt, options.steps_dense, {},
                                 dense_run);
        });
        // diag + psi0 + state + scratch resident during a dense step
        result.dense_points.push_back(BenchPoint{"dense-n" + std::to_string(n), n, dim,
                                                 dense_time,
                                                 dim * (sizeof(double) + 3 * sizeof(cplx))});

        ExactRunOptions diag_run;
        diag_run.propagator = Propagator::exact_diagonal;
        diag_run.serial_kernels = true;
        const double diag_time = min_timed_seconds(options.repetitions, [&] {
            run_exact_experiment(app, coeffs, weights, options.dt, options.steps_diagonal, {},
                                 diag_run);
        });
        result.diagonal_points.push_back(BenchPoint{"diagonal-n" + std::to_string(n), n, dim,
                                                    diag_time,
                                                    dim * (sizeof(double) + 4 * sizeof(cplx))});
    }
    return result;
}

CoarseScalingResult run_coarse_scaling(const CoarseSpec& spec, const InitialAmplitudes& amps,
                                       const CoarseScalingOptions& options) {
    if (options.sample_counts.empty()) {
        throw std::invalid_argument("sample_counts must be non-empty");
    }
    if (options.repetitions == 0) {
        throw std::invalid_argument("repetitions must be >= 1");
    }

    // Timing sections are sequential by contract.
    const int previous_threads = kernels::configured_threads();
    kernels::set_thread_count(1);

    CoarseScalingResult result;
    for (const std::size_t m : options.sample_counts) {
        if (m == 0) {
            kernels::set_thread_count(previous_threads);
            throw std::invalid_argument("sample counts must be >= 1");
        }
        TransitionEstimate estimate{0.0, 0.0, 0};
        const double wall_time = min_timed_seconds(options.repetitions, [&] {
            CounterRng rng(options.seed);
            estimate = aggregate_probability(amps, spec, m, rng);
        });
        const std::size_t chunk_count =
            (m + kernels::kReductionChunk - 1) / kernels::kReductionChunk;
        result.points.push_back(BenchPoint{"coarse-m" + std::to_string(m), m, 2, wall_time,
                                           2 * chunk_count * sizeof(double)});
        result.estimates.push_back(estimate);
    }

    kernels::set_thread_count(previous_threads);
    return result;
}

} // namespace qcoarse
