// The full system-plus-apparatus path: a diagonal coupling operator over the
// 2K-dimensional product basis, Euler and exact stepping, survival
// probability, and the branch visibility that remains after summing over
// apparatus configurations. Everything here costs at least Theta(K) with
// K = d^N; the scaling benchmark exists to make that wall visible.

#pragma once

#include "qcoarse/quantum_state.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace qcoarse {

// Largest representable apparatus basis size K.
inline constexpr std::size_t kDefaultBasisCap = std::size_t{1} << 20;

// Largest product dimension 2K for which the coupling operator may be
// materialized as a dense matrix; propagation past this point works from the
// coefficient arrays directly (run_exact_experiment).
inline constexpr std::size_t kDenseMaterializeCap = 4096;

struct ApparatusSpec {
    std::size_t particle_count; // N
    std::size_t local_dim;      // d
    std::size_t basis_size;     // K = d^N

    static ApparatusSpec create(std::size_t particle_count, std::size_t local_dim,
                                std::size_t cap = kDefaultBasisCap);
};

// Per-configuration coupling energies, one value per apparatus basis state
// and branch.
struct InteractionCoefficients {
    std::vector<double> a1;
    std::vector<double> a2;

    InteractionCoefficients(std::vector<double> a1_values, std::vector<double> a2_values);

    std::size_t size() const { return a1.size(); }
};

// Initial apparatus population. Non-negative, sums to 1 within 1e-12.
struct ApparatusWeights {
    std::vector<double> w;

    explicit ApparatusWeights(std::vector<double> weights);

    static ApparatusWeights uniform(std::size_t basis_size);

    std::size_t size() const { return w.size(); }
};

// Seeded i.i.d. uniform couplings on [-width, +width], independent per
// branch (streams derived from the seed with tags 1 and 2).
InteractionCoefficients random_coefficients(std::size_t basis_size, double width,
                                            std::uint64_t seed);

// Deterministic coupling grid: branch offsets sweep symmetric midpoint
// lattices of sizes grid1 and grid2 around abar1 and abar2, giving basis
// size grid1*grid2. The realized branch-phase average matches the moments of
// the uniform distribution on [-window, +window] to O(1/grid^2), which is
// what a matched-parameter comparison against the sampled path needs.
InteractionCoefficients lattice_coefficients(std::size_t grid1, std::size_t grid2,
                                             double abar1, double abar2, double window1,
                                             double window2);

// The 2K x 2K operator that is diagonal in the product basis: entry a1[k] at
// product index (branch 1, k), a2[k] at (branch 2, k), row-major branch
// blocks. Refuses to materialize above kDenseMaterializeCap.
HermitianOperator build_interaction_hamiltonian(const ApparatusSpec& app,
                                                const InteractionCoefficients& coeffs);

// One first-order step psi - (i*dt/hbar) H psi. The result is not
// renormalized unless asked: the norm drift of the truncation is itself a
// measurable property.
StateVector evolve_euler(const HermitianOperator& h, const StateVector& psi, double dt,
                         const PhysicalConstants& c = {}, bool renormalize = false);

// |<psi0|psit>|^2. psi0 must be normalized; psit may carry Euler norm drift.
double transition_probability(const StateVector& psi0, const StateVector& psit);

// Visibility of interference between the two branches after time t:
// |sum_k w_k exp(-i (a1[k] - a2[k]) t / hbar)|, in [0, 1].
double coherence_factor(const InteractionCoefficients& coeffs, const ApparatusWeights& w,
                        double t, const PhysicalConstants& c = {});

struct StepRecord {
    std::size_t step;   // 1-based
    double t;           // step * dt
    double probability; // survival overlap with the initial state
    double coherence;   // branch visibility extracted from the evolved state
    double norm;
};

enum class Propagator {
    exact_diagonal, // per-step analytic phase rotation, Theta(dim) per step
    dense_euler,    // first-order step through full row sweeps, Theta(dim^2)
};

struct ExactRunOptions {
    cplx alpha = cplx{kInvSqrt2, 0.0};
    cplx beta = cplx{kInvSqrt2, 0.0};
    Propagator propagator = Propagator::exact_diagonal;
    // Pins every kernel to its serial variant; benchmark timing sections
    // require sequential execution.
    bool serial_kernels = false;
};

struct ExactExperimentResult {
    std::vector<StepRecord> records;
};

// Builds (alpha|1> + beta|2>) (x) sum_k sqrt(w_k)|k>, advances it step by
// step, and records survival probability, branch visibility and norm after
// each step. The visibility is read off the evolved state, not from the
// closed form, so the two routes can be checked against each other. Never
// materializes the dense operator.
ExactExperimentResult run_exact_experiment(const ApparatusSpec& app,
                                           const InteractionCoefficients& coeffs,
                                           const ApparatusWeights& w, double dt,
                                           std::size_t steps, const PhysicalConstants& c = {},
                                           const ExactRunOptions& options = {});

} // namespace qcoarse
