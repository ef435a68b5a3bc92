// Data-parallel inner loops: dense matrix-vector products, diagonal phase
// rotation, and stable reductions. Every kernel has a serial reference and an
// OpenMP variant; the parallel variants are constructed to be bitwise
// identical to the serial ones at any thread count (element-wise loops, or
// reductions over fixed-size chunks combined in chunk order).
//
// The unsuffixed entry points dispatch to the parallel variant when OpenMP is
// available and the problem crosses a size threshold; timed benchmark code
// calls the *_serial variants directly.

#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace qcoarse::kernels {

using cplx = std::complex<double>;

// Fixed reduction chunk; independent of thread count by design.
inline constexpr std::size_t kReductionChunk = 4096;

// Problem size below which dispatch stays serial.
inline constexpr std::size_t kParallelThreshold = 8192;

// Threads requested via CLI/config; 0 means the OpenMP default.
void set_thread_count(int threads);
int configured_threads();

// y = M x, dense row-major complex matrix.
void matvec_serial(std::span<const cplx> m, std::span<const cplx> x, std::span<cplx> y);
void matvec_parallel(std::span<const cplx> m, std::span<const cplx> x, std::span<cplx> y);
void matvec(std::span<const cplx> m, std::span<const cplx> x, std::span<cplx> y);

// y = D x for a diagonal operator given by its real diagonal, but performed
// as a full dense row sweep: every row touches all n components, so the cost
// is Theta(n^2) like a general dense apply. This is the propagation kernel
// behind the dense scaling curve; it never materializes the n^2 matrix.
void diag_dense_sweep_serial(std::span<const double> diag, std::span<const cplx> x, std::span<cplx> y);
void diag_dense_sweep_parallel(std::span<const double> diag, std::span<const cplx> x, std::span<cplx> y);

// out[i] = exp(-i * energy[i] * t_over_hbar) * in[i]
void phase_rotate_serial(std::span<const double> energy, double t_over_hbar,
                         std::span<const cplx> in, std::span<cplx> out);
void phase_rotate_parallel(std::span<const double> energy, double t_over_hbar,
                           std::span<const cplx> in, std::span<cplx> out);
void phase_rotate(std::span<const double> energy, double t_over_hbar,
                  std::span<const cplx> in, std::span<cplx> out);

// out[i] = a[i] * b[i] (states are rotated each step by precomputed phasors)
void elementwise_mul_serial(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);
void elementwise_mul_parallel(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);
void elementwise_mul(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);

// sum_i conj(a_i) * b_i, chunk-stable reduction.
cplx dot_conj_serial(std::span<const cplx> a, std::span<const cplx> b);
cplx dot_conj_parallel(std::span<const cplx> a, std::span<const cplx> b);
cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b);

// sum_i |a_i|^2, chunk-stable reduction.
double sum_squares_serial(std::span<const cplx> a);
double sum_squares_parallel(std::span<const cplx> a);
double sum_squares(std::span<const cplx> a);

// sum_k w_k * exp(-i * delta_k * t_over_hbar), chunk-stable reduction.
cplx weighted_phasor_sum_serial(std::span<const double> w, std::span<const double> delta,
                                double t_over_hbar);
cplx weighted_phasor_sum_parallel(std::span<const double> w, std::span<const double> delta,
                                  double t_over_hbar);
cplx weighted_phasor_sum(std::span<const double> w, std::span<const double> delta,
                         double t_over_hbar);

} // namespace qcoarse::kernels
