#include "qcoarse/coarse_model.hpp"

#include "qcoarse/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qcoarse {

namespace {

void require_positive_finite(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string(name) + " must be positive and finite (got " +
                                    std::to_string(value) + ")");
    }
}

void require_window(double value, const char* name) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string(name) + " must be non-negative and finite (got " +
                                    std::to_string(value) + ")");
    }
}

// Evaluates fn(sample_index) -> (a, b) over fixed-size chunks, accumulating
// within each chunk serially and combining chunk partials in index order.
// The totals are therefore independent of how chunks are scheduled across
// threads.
template <typename Fn>
std::pair<double, double> chunked_pair_totals(std::size_t samples, Fn fn) {
    const std::size_t chunk = kernels::kReductionChunk;
    const std::size_t chunk_count = (samples + chunk - 1) / chunk;
    std::vector<double> partial_a(chunk_count, 0.0);
    std::vector<double> partial_b(chunk_count, 0.0);

    const auto body = [&](std::size_t ci) {
        const std::size_t begin = ci * chunk;
        const std::size_t end = std::min(samples, begin + chunk);
        double a = 0.0;
        double b = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            const std::pair<double, double> v = fn(i);
            a += v.first;
            b += v.second;
        }
        partial_a[ci] = a;
        partial_b[ci] = b;
    };

#ifdef _OPENMP
    if (samples >= kernels::kParallelThreshold) {
#pragma omp parallel for schedule(static)
        for (long long ci = 0; ci < static_cast<long long>(chunk_count); ++ci) {
            body(static_cast<std::size_t>(ci));
        }
    } else {
        for (std::size_t ci = 0; ci < chunk_count; ++ci) {
            body(ci);
        }
    }
#else
    for (std::size_t ci = 0; ci < chunk_count; ++ci) {
        body(ci);
    }
#endif

    double total_a = 0.0;
    double total_b = 0.0;
    for (std::size_t ci = 0; ci < chunk_count; ++ci) {
        total_a += partial_a[ci];
        total_b += partial_b[ci];
    }
    return {total_a, total_b};
}

} // namespace

CoarseSpec::CoarseSpec(double abar1_value, double abar2_value, double window1_value,
                       double window2_value, double dt_value, double hbar_value)
    : abar1(abar1_value), abar2(abar2_value), window1(window1_value), window2(window2_value),
      dt(dt_value), hbar(hbar_value) {
    if (!std::isfinite(abar1) || !std::isfinite(abar2)) {
        throw std::invalid_argument("coupling estimates must be finite");
    }
    require_window(window1, "window1");
    require_window(window2, "window2");
    require_positive_finite(dt, "dt");
    require_positive_finite(hbar, "hbar");
}

InitialAmplitudes::InitialAmplitudes(cplx alpha_value, cplx beta_value)
    : alpha(alpha_value), beta(beta_value) {
    const double total = std::norm(alpha) + std::norm(beta);
    if (!std::isfinite(total) || std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument(
            "initial amplitudes must satisfy |alpha|^2 + |beta|^2 = 1 within 1e-12 (got " +
            std::to_string(total) + ")");
    }
}

SampleDraw sample_draw(const CoarseSpec& spec, CounterRng& rng) {
    const double da1 = rng.next_symmetric(spec.window1);
    const double da2 = rng.next_symmetric(spec.window2);
    return SampleDraw{da1, da2};
}

StateVector per_sample_state(const InitialAmplitudes& amps, const CoarseSpec& spec,
                             const SampleDraw& draw) {
    const double scale = spec.dt / spec.hbar;
    const double theta1 = (spec.abar1 + draw.da1) * scale;
    const double theta2 = (spec.abar2 + draw.da2) * scale;
    return StateVector({amps.alpha * cplx{std::cos(theta1), -std::sin(theta1)},
                        amps.beta * cplx{std::cos(theta2), -std::sin(theta2)}});
}

double per_sample_probability(const InitialAmplitudes& amps, const CoarseSpec& spec,
                              const SampleDraw& draw) {
    const double scale = spec.dt / spec.hbar;
    const double theta1 = (spec.abar1 + draw.da1) * scale;
    const double theta2 = (spec.abar2 + draw.da2) * scale;
    const double p1 = std::norm(amps.alpha);
    const double p2 = std::norm(amps.beta);
    const double p = p1 * p1 + p2 * p2 + 2.0 * p1 * p2 * std::cos(theta1 - theta2);
    return std::clamp(p, 0.0, 1.0);
}

TransitionEstimate aggregate_probability(const InitialAmplitudes& amps, const CoarseSpec& spec,
                                         std::size_t samples, CounterRng& rng) {
    if (samples == 0) {
        throw std::invalid_argument("samples must be >= 1");
    }
    const std::uint64_t seed = rng.seed;
    const std::uint64_t start = rng.counter;
    const auto probability_at = [&amps, &spec, seed, start](std::size_t i) {
        CounterRng local(seed, start + 2 * static_cast<std::uint64_t>(i));
        const SampleDraw draw = sample_draw(spec, local);
        return per_sample_probability(amps, spec, draw);
    };

    // Accumulating deviations from an in-range reference value keeps the
    // variance one-pass and makes it exactly 0 when every sample agrees.
    const double shift = probability_at(0);
    const auto [dev_sum, dev_sq_sum] =
        chunked_pair_totals(samples, [&probability_at, shift](std::size_t i) {
            const double d = probability_at(i) - shift;
            return std::pair<double, double>{d, d * d};
        });
    rng.skip(2 * static_cast<std::uint64_t>(samples));

    const double m = static_cast<double>(samples);
    const double mean = std::clamp(shift + dev_sum / m, 0.0, 1.0);
    double variance = 0.0;
    if (samples > 1) {
        variance = std::max(0.0, (dev_sq_sum - dev_sum * dev_sum / m) / (m - 1.0));
    }
    return TransitionEstimate{mean, std::sqrt(variance / m), samples};
}

PhaseAverages phase_average_check(const CoarseSpec& spec, std::size_t samples, CounterRng& rng) {
    if (samples == 0) {
        throw std::invalid_argument("samples must be >= 1");
    }
    const std::uint64_t seed = rng.seed;
    const std::uint64_t start = rng.counter;
    const double scale = spec.dt / spec.hbar;
    const auto [cos_sum, sin_sum] =
        chunked_pair_totals(samples, [&spec, seed, start, scale](std::size_t i) {
            CounterRng local(seed, start + 2 * static_cast<std::uint64_t>(i));
            const SampleDraw draw = sample_draw(spec, local);
            const double phase = (draw.da1 - draw.da2) * scale;
            return std::pair<double, double>{std::cos(phase), std::sin(phase)};
        });
    rng.skip(2 * static_cast<std::uint64_t>(samples));

    const double m = static_cast<double>(samples);
    return PhaseAverages{cos_sum / m, sin_sum / m};
}

} // namespace qcoarse
