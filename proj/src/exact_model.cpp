#include "qcoarse/exact_model.hpp"

#include "qcoarse/kernels.hpp"
#include "qcoarse/rng.hpp"

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

namespace qcoarse {

namespace {

// Sub-stream tags for the two coefficient branches.
constexpr std::uint64_t kStreamBranch1 = 1;
constexpr std::uint64_t kStreamBranch2 = 2;

// Rounding error of a naive sum over 2^20 terms exceeds the 1e-12 weight
// budget; pairwise summation keeps it at the log of that.
double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 32) {
        double s = 0.0;
        for (double x : v) {
            s += x;
        }
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

void require_finite_reals(const std::vector<double>& values, const char* what) {
    for (double x : values) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument(std::string(what) + " contains a non-finite value");
        }
    }
}

void require_coeff_match(const ApparatusSpec& app, const InteractionCoefficients& coeffs) {
    if (coeffs.size() != app.basis_size) {
        throw std::invalid_argument("coefficient length " + std::to_string(coeffs.size()) +
                                    " does not match apparatus basis size " +
                                    std::to_string(app.basis_size));
    }
}

} // namespace

ApparatusSpec ApparatusSpec::create(std::size_t particle_count, std::size_t local_dim,
                                    std::size_t cap) {
    if (particle_count == 0) {
        throw std::invalid_argument("particle_count must be >= 1");
    }
    if (local_dim < 2) {
        throw std::invalid_argument("local_dim must be >= 2 (got " + std::to_string(local_dim) +
                                    ")");
    }
    std::size_t basis_size = 1;
    for (std::size_t i = 0; i < particle_count; ++i) {
        if (basis_size > cap / local_dim) {
            throw std::invalid_argument(
                "apparatus basis size " + std::to_string(local_dim) + "^" +
                std::to_string(particle_count) + " exceeds the cap of " + std::to_string(cap));
        }
        basis_size *= local_dim;
    }
    return ApparatusSpec{particle_count, local_dim, basis_size};
}

InteractionCoefficients::InteractionCoefficients(std::vector<double> a1_values,
                                                 std::vector<double> a2_values)
    : a1(std::move(a1_values)), a2(std::move(a2_values)) {
    if (a1.empty() || a1.size() != a2.size()) {
        throw std::invalid_argument("coefficient sequences must be non-empty and equal length (" +
                                    std::to_string(a1.size()) + " vs " +
                                    std::to_string(a2.size()) + ")");
    }
    require_finite_reals(a1, "branch-1 coefficients");
    require_finite_reals(a2, "branch-2 coefficients");
}

ApparatusWeights::ApparatusWeights(std::vector<double> weights) : w(std::move(weights)) {
    if (w.empty()) {
        throw std::invalid_argument("weights must be non-empty");
    }
    for (double x : w) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw std::invalid_argument("weights must be non-negative and finite");
        }
    }
    const double total = pairwise_sum(w);
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("weights sum to " + std::to_string(total) +
                                    "; must be 1 within 1e-12");
    }
}

ApparatusWeights ApparatusWeights::uniform(std::size_t basis_size) {
    if (basis_size == 0) {
        throw std::invalid_argument("weights must be non-empty");
    }
    return ApparatusWeights(
        std::vector<double>(basis_size, 1.0 / static_cast<double>(basis_size)));
}

InteractionCoefficients random_coefficients(std::size_t basis_size, double width,
                                            std::uint64_t seed) {
    if (basis_size == 0) {
        throw std::invalid_argument("basis_size must be >= 1");
    }
    if (!(width >= 0.0) || !std::isfinite(width)) {
        throw std::invalid_argument("coefficient width must be non-negative and finite");
    }
    CounterRng r1(derive_stream(seed, kStreamBranch1));
    CounterRng r2(derive_stream(seed, kStreamBranch2));
    std::vector<double> a1(basis_size);
    std::vector<double> a2(basis_size);
    for (std::size_t k = 0; k < basis_size; ++k) {
        a1[k] = r1.next_symmetric(width);
        a2[k] = r2.next_symmetric(width);
    }
    return InteractionCoefficients(std::move(a1), std::move(a2));
}

InteractionCoefficients lattice_coefficients(std::size_t grid1, std::size_t grid2, double abar1,
                                             double abar2, double window1, double window2) {
    if (grid1 == 0 || grid2 == 0) {
        throw std::invalid_argument("lattice grid sizes must be >= 1");
    }
    if (grid1 > (std::size_t{1} << 32) / grid2) {
        throw std::invalid_argument("lattice size " + std::to_string(grid1) + "*" +
                                    std::to_string(grid2) + " is out of range");
    }
    if (!std::isfinite(abar1) || !std::isfinite(abar2)) {
        throw std::invalid_argument("lattice centers must be finite");
    }
    if (!(window1 >= 0.0) || !(window2 >= 0.0) || !std::isfinite(window1) ||
        !std::isfinite(window2)) {
        throw std::invalid_argument("lattice windows must be non-negative and finite");
    }
    // Midpoints of grid-many equal cells spanning [-window, +window].
    std::vector<double> u1(grid1);
    std::vector<double> u2(grid2);
    for (std::size_t i = 0; i < grid1; ++i) {
        u1[i] = window1 * ((2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(grid1) - 1.0);
    }
    for (std::size_t i = 0; i < grid2; ++i) {
        u2[i] = window2 * ((2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(grid2) - 1.0);
    }
    std::vector<double> a1(grid1 * grid2);
    std::vector<double> a2(grid1 * grid2);
    for (std::size_t i = 0; i < grid1; ++i) {
        for (std::size_t j = 0; j < grid2; ++j) {
            a1[i * grid2 + j] = abar1 + u1[i];
            a2[i * grid2 + j] = abar2 + u2[j];
        }
    }
    return InteractionCoefficients(std::move(a1), std::move(a2));
}

HermitianOperator build_interaction_hamiltonian(const ApparatusSpec& app,
                                                const InteractionCoefficients& coeffs) {
    require_coeff_match(app, coeffs);
    const std::size_t product_dim = 2 * app.basis_size;
    if (product_dim > kDenseMaterializeCap) {
        throw std::invalid_argument("product dimension " + std::to_string(product_dim) +
                                    " exceeds the dense materialization cap of " +
                                    std::to_string(kDenseMaterializeCap));
    }
    std::vector<double> diag(product_dim);
    for (std::size_t k = 0; k < app.basis_size; ++k) {
        diag[k] = coeffs.a1[k];
        diag[app.basis_size + k] = coeffs.a2[k];
    }
    return HermitianOperator::diagonal(std::move(diag));
}

StateVector evolve_euler(const HermitianOperator& h, const StateVector& psi, double dt,
                         const PhysicalConstants& c, bool renormalize) {
    if (h.dim() != psi.dim()) {
        throw std::invalid_argument("evolve_euler: dimension mismatch (" + std::to_string(h.dim()) +
                                    " vs " + std::to_string(psi.dim()) + ")");
    }
    if (!std::isfinite(dt)) {
        throw std::invalid_argument("step size must be finite");
    }
    const StateVector hpsi = apply_operator(h, psi);
    const cplx scale{0.0, -dt / c.hbar};
    std::vector<cplx> out(psi.dim());
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        out[i] = psi[i] + scale * hpsi[i];
    }
    StateVector result(std::move(out));
    return renormalize ? result.normalized() : result;
}

double transition_probability(const StateVector& psi0, const StateVector& psit) {
    if (psi0.dim() != psit.dim()) {
        throw std::invalid_argument("transition_probability: dimension mismatch (" +
                                    std::to_string(psi0.dim()) + " vs " +
                                    std::to_string(psit.dim()) + ")");
    }
    if (!psi0.is_normalized(1e-9)) {
        throw std::invalid_argument("transition_probability: reference state is not normalized");
    }
    const cplx overlap = kernels::dot_conj(psi0.amplitudes(), psit.amplitudes());
    return std::norm(overlap);
}

double coherence_factor(const InteractionCoefficients& coeffs, const ApparatusWeights& w,
                        double t, const PhysicalConstants& c) {
    if (coeffs.size() != w.size()) {
        throw std::invalid_argument("coherence_factor: length mismatch (" +
                                    std::to_string(coeffs.size()) + " coefficients vs " +
                                    std::to_string(w.size()) + " weights)");
    }
    if (!std::isfinite(t)) {
        throw std::invalid_argument("time must be finite");
    }
    std::vector<double> delta(coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        delta[k] = coeffs.a1[k] - coeffs.a2[k];
    }
    return std::abs(kernels::weighted_phasor_sum(w.w, delta, t / c.hbar));
}

ExactExperimentResult run_exact_experiment(const ApparatusSpec& app,
                                           const InteractionCoefficients& coeffs,
                                           const ApparatusWeights& w, double dt,
                                           std::size_t steps, const PhysicalConstants& c,
                                           const ExactRunOptions& options) {
    require_coeff_match(app, coeffs);
    if (w.size() != app.basis_size) {
        throw std::invalid_argument("weight length " + std::to_string(w.size()) +
                                    " does not match apparatus basis size " +
                                    std::to_string(app.basis_size));
    }
    if (steps == 0) {
        throw std::invalid_argument("steps must be >= 1");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("step size must be positive and finite");
    }
    const double amp_norm = std::norm(options.alpha) + std::norm(options.beta);
    if (std::abs(amp_norm - 1.0) > 1e-12) {
        throw std::invalid_argument("initial amplitudes must satisfy |alpha|^2 + |beta|^2 = 1");
    }

    const std::size_t basis = app.basis_size;
    const std::size_t dim = 2 * basis;
    const bool serial = options.serial_kernels;

    // Coupling energy per product index, branch blocks in row-major order.
    std::vector<double> diag(dim);
    for (std::size_t k = 0; k < basis; ++k) {
        diag[k] = coeffs.a1[k];
        diag[basis + k] = coeffs.a2[k];
    }

    std::vector<cplx> psi0(dim);
    for (std::size_t k = 0; k < basis; ++k) {
        const double root_w = std::sqrt(w.w[k]);
        psi0[k] = options.alpha * root_w;
        psi0[basis + k] = options.beta * root_w;
    }

    std::vector<cplx> state = psi0;
    std::vector<cplx> scratch(dim);

    // Per-step phasors for the analytic propagator, computed once.
    std::vector<cplx> step_phasors;
    if (options.propagator == Propagator::exact_diagonal) {
        const std::vector<cplx> ones(dim, cplx{1.0, 0.0});
        step_phasors.resize(dim);
        if (serial) {
            kernels::phase_rotate_serial(diag, dt / c.hbar, ones, step_phasors);
        } else {
            kernels::phase_rotate(diag, dt / c.hbar, ones, step_phasors);
        }
    }
    const cplx euler_scale{0.0, -dt / c.hbar};

    const double amp_product = std::abs(options.alpha) * std::abs(options.beta);

    ExactExperimentResult result;
    result.records.reserve(steps);
    for (std::size_t step = 1; step <= steps; ++step) {
        if (options.propagator == Propagator::exact_diagonal) {
            if (serial) {
                kernels::elementwise_mul_serial(state, step_phasors, scratch);
            } else {
                kernels::elementwise_mul(state, step_phasors, scratch);
            }
            state.swap(scratch);
        } else {
            if (serial || dim < kernels::kParallelThreshold) {
                kernels::diag_dense_sweep_serial(diag, state, scratch);
            } else {
                kernels::diag_dense_sweep_parallel(diag, state, scratch);
            }
            for (std::size_t i = 0; i < dim; ++i) {
                state[i] += euler_scale * scratch[i];
            }
        }

        const double t = static_cast<double>(step) * dt;
        const std::span<const cplx> branch1(state.data(), basis);
        const std::span<const cplx> branch2(state.data() + basis, basis);
        const cplx overlap0 = serial ? kernels::dot_conj_serial(psi0, state)
                                     : kernels::dot_conj(psi0, state);
        const cplx branch_overlap = serial ? kernels::dot_conj_serial(branch1, branch2)
                                           : kernels::dot_conj(branch1, branch2);
        const double coherence = amp_product > 1e-12
                                     ? std::abs(branch_overlap) / amp_product
                                     : coherence_factor(coeffs, w, t, c);
        const double norm = std::sqrt(serial ? kernels::sum_squares_serial(state)
                                             : kernels::sum_squares(state));
        result.records.push_back(StepRecord{step, t, std::norm(overlap0), coherence, norm});
    }
    return result;
}

} // namespace qcoarse
