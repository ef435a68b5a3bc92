// The fast probabilistic path: the apparatus enters only through two
// estimated coupling energies and their uncertainty half-widths. Each sample
// phases the two system branches once and evaluates one overlap, so the cost
// is Theta(samples); no apparatus-dimensional object is ever allocated.

#pragma once

#include "qcoarse/quantum_state.hpp"
#include "qcoarse/rng.hpp"

#include <cstddef>
#include <cstdint>

namespace qcoarse {

// Coarse description of the coupling: estimated branch energies plus the
// half-widths of their uncertainty intervals, and the step it acts for.
struct CoarseSpec {
    double abar1;
    double abar2;
    double window1; // half-width of the branch-1 uncertainty, >= 0
    double window2;
    double dt;   // > 0
    double hbar; // > 0

    CoarseSpec(double abar1_value, double abar2_value, double window1_value,
               double window2_value, double dt_value, double hbar_value);
};

// One realized pair of coupling uncertainties, |da_j| <= window_j.
struct SampleDraw {
    double da1;
    double da2;
};

struct TransitionEstimate {
    double mean;      // in [0, 1]
    double std_error; // sample standard deviation / sqrt(samples); 0 when samples == 1
    std::size_t samples;
};

// System branch amplitudes, |alpha|^2 + |beta|^2 = 1 within 1e-12.
// Defaults to the equal superposition.
struct InitialAmplitudes {
    cplx alpha{kInvSqrt2, 0.0};
    cplx beta{kInvSqrt2, 0.0};

    InitialAmplitudes() = default;
    InitialAmplitudes(cplx alpha_value, cplx beta_value);
};

struct PhaseAverages {
    double mean_cos;
    double mean_sin;
};

// Independent uniform draws on [-window1, +window1] and [-window2, +window2].
// Consumes exactly two values from the caller's generator.
SampleDraw sample_draw(const CoarseSpec& spec, CounterRng& rng);

// alpha e^{-i theta1}|1> + beta e^{-i theta2}|2> with
// theta_j = (abar_j + da_j) * dt / hbar. Unit norm within 1e-12.
StateVector per_sample_state(const InitialAmplitudes& amps, const CoarseSpec& spec,
                             const SampleDraw& draw);

// Survival overlap of the sample state with the initial state, in closed
// form: |alpha|^4 + |beta|^4 + 2|alpha|^2|beta|^2 cos(theta1 - theta2).
// Matches the constructive inner-product route within 1e-12.
double per_sample_probability(const InitialAmplitudes& amps, const CoarseSpec& spec,
                              const SampleDraw& draw);

// Mean and standard error of per_sample_probability over `samples`
// independent draws. Advances the generator by exactly 2*samples values; the
// result is a pure function of (rng.seed, rng.counter, inputs) and is
// bitwise identical at any worker count (fixed-chunk reduction).
TransitionEstimate aggregate_probability(const InitialAmplitudes& amps, const CoarseSpec& spec,
                                         std::size_t samples, CounterRng& rng);

// Sample means of cos and sin of the random phase difference
// (da1 - da2) * dt / hbar. Same determinism contract as
// aggregate_probability; advances the generator by 2*samples values.
PhaseAverages phase_average_check(const CoarseSpec& spec, std::size_t samples, CounterRng& rng);

} // namespace qcoarse
