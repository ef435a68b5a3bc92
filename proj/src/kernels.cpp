#include "qcoarse/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qcoarse::kernels {

namespace {

std::atomic<int> g_threads{0};

bool parallel_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

std::size_t chunk_count(std::size_t n) {
    return (n + kReductionChunk - 1) / kReductionChunk;
}

} // namespace

void set_thread_count(int threads) {
    g_threads.store(threads < 0 ? 0 : threads);
#ifdef _OPENMP
    if (threads > 0) {
        omp_set_num_threads(threads);
    }
#endif
}

int configured_threads() { return g_threads.load(); }

// ---------------------------------------------------------------------------
// matvec

void matvec_serial(std::span<const cplx> m, std::span<const cplx> x, std::span<cplx> y) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        const cplx* row = m.data() + i * n;
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            acc += row[j] * x[j];
        }
        y[i] = acc;
    }
}

void matvec_parallel(std::span<const cplx> m, std::span<const cplx> x, std::span<cplx> y) {
    const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const cplx* row = m.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n);
        cplx acc{0.0, 0.0};
        for (std::int64_t j = 0; j < n; ++j) {
            acc += row[j] * x[j];
        }
        y[i] = acc;
    }
}

void matvec(std::span<const cplx> m, std::span<const cplx> x, std::span<cplx> y) {
    if (parallel_enabled() && x.size() * x.size() >= kParallelThreshold) {
        matvec_parallel(m, x, y);
    } else {
        matvec_serial(m, x, y);
    }
}

// ---------------------------------------------------------------------------
// diag_dense_sweep

namespace {

inline cplx sweep_row(std::span<const double> diag, std::span<const cplx> x, std::size_t i) {
    const std::size_t n = x.size();
    double acc_re = 0.0;
    double acc_im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double h = (j == i) ? diag[j] : 0.0;
        acc_re += h * x[j].real();
        acc_im += h * x[j].imag();
    }
    return {acc_re, acc_im};
}

} // namespace

void diag_dense_sweep_serial(std::span<const double> diag, std::span<const cplx> x,
                             std::span<cplx> y) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = sweep_row(diag, x, i);
    }
}

void diag_dense_sweep_parallel(std::span<const double> diag, std::span<const cplx> x,
                               std::span<cplx> y) {
    const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        y[i] = sweep_row(diag, x, static_cast<std::size_t>(i));
    }
}

// ---------------------------------------------------------------------------
// element-wise maps

void phase_rotate_serial(std::span<const double> energy, double t_over_hbar,
                         std::span<const cplx> in, std::span<cplx> out) {
    const std::size_t n = in.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double theta = -energy[i] * t_over_hbar;
        out[i] = in[i] * cplx{std::cos(theta), std::sin(theta)};
    }
}

void phase_rotate_parallel(std::span<const double> energy, double t_over_hbar,
                           std::span<const cplx> in, std::span<cplx> out) {
    const std::int64_t n = static_cast<std::int64_t>(in.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const double theta = -energy[i] * t_over_hbar;
        out[i] = in[i] * cplx{std::cos(theta), std::sin(theta)};
    }
}

void phase_rotate(std::span<const double> energy, double t_over_hbar,
                  std::span<const cplx> in, std::span<cplx> out) {
    if (parallel_enabled() && in.size() >= kParallelThreshold) {
        phase_rotate_parallel(energy, t_over_hbar, in, out);
    } else {
        phase_rotate_serial(energy, t_over_hbar, in, out);
    }
}

void elementwise_mul_serial(std::span<const cplx> a, std::span<const cplx> b,
                            std::span<cplx> out) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = a[i] * b[i];
    }
}

void elementwise_mul_parallel(std::span<const cplx> a, std::span<const cplx> b,
                              std::span<cplx> out) {
    const std::int64_t n = static_cast<std::int64_t>(a.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        out[i] = a[i] * b[i];
    }
}

void elementwise_mul(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
    if (parallel_enabled() && a.size() >= kParallelThreshold) {
        elementwise_mul_parallel(a, b, out);
    } else {
        elementwise_mul_serial(a, b, out);
    }
}

// ---------------------------------------------------------------------------
// chunk-stable reductions
//
// Partial sums are taken over fixed kReductionChunk-sized chunks (serial
// within each chunk) and combined serially in chunk order, so the floating
// point result does not depend on how chunks were assigned to threads.

namespace {

template <typename Partial, typename ChunkFn>
Partial chunked_reduce_serial(std::size_t n, ChunkFn&& fn) {
    Partial total{};
    const std::size_t chunks = chunk_count(n);
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t lo = c * kReductionChunk;
        const std::size_t hi = lo + std::min(kReductionChunk, n - lo);
        total += fn(lo, hi);
    }
    return total;
}

template <typename Partial, typename ChunkFn>
Partial chunked_reduce_parallel(std::size_t n, ChunkFn&& fn) {
    const std::size_t chunks = chunk_count(n);
    std::vector<Partial> partial(chunks);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kReductionChunk;
        const std::size_t hi = lo + std::min(kReductionChunk, n - lo);
        partial[static_cast<std::size_t>(c)] = fn(lo, hi);
    }
    Partial total{};
    for (const Partial& p : partial) {
        total += p;
    }
    return total;
}

} // namespace

cplx dot_conj_serial(std::span<const cplx> a, std::span<const cplx> b) {
    return chunked_reduce_serial<cplx>(a.size(), [&](std::size_t lo, std::size_t hi) {
        cplx acc{0.0, 0.0};
        for (std::size_t i = lo; i < hi; ++i) {
            acc += std::conj(a[i]) * b[i];
        }
        return acc;
    });
}

cplx dot_conj_parallel(std::span<const cplx> a, std::span<const cplx> b) {
    return chunked_reduce_parallel<cplx>(a.size(), [&](std::size_t lo, std::size_t hi) {
        cplx acc{0.0, 0.0};
        for (std::size_t i = lo; i < hi; ++i) {
            acc += std::conj(a[i]) * b[i];
        }
        return acc;
    });
}

cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b) {
    if (parallel_enabled() && a.size() >= kParallelThreshold) {
        return dot_conj_parallel(a, b);
    }
    return dot_conj_serial(a, b);
}

double sum_squares_serial(std::span<const cplx> a) {
    return chunked_reduce_serial<double>(a.size(), [&](std::size_t lo, std::size_t hi) {
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            acc += std::norm(a[i]);
        }
        return acc;
    });
}

double sum_squares_parallel(std::span<const cplx> a) {
    return chunked_reduce_parallel<double>(a.size(), [&](std::size_t lo, std::size_t hi) {
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            acc += std::norm(a[i]);
        }
        return acc;
    });
}

double sum_squares(std::span<const cplx> a) {
    if (parallel_enabled() && a.size() >= kParallelThreshold) {
        return sum_squares_parallel(a);
    }
    return sum_squares_serial(a);
}

namespace {

inline cplx phasor_chunk(std::span<const double> w, std::span<const double> delta,
                         double t_over_hbar, std::size_t lo, std::size_t hi) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = lo; i < hi; ++i) {
        const double theta = -delta[i] * t_over_hbar;
        acc += w[i] * cplx{std::cos(theta), std::sin(theta)};
    }
    return acc;
}

} // namespace

cplx weighted_phasor_sum_serial(std::span<const double> w, std::span<const double> delta,
                                double t_over_hbar) {
    return chunked_reduce_serial<cplx>(w.size(), [&](std::size_t lo, std::size_t hi) {
        return phasor_chunk(w, delta, t_over_hbar, lo, hi);
    });
}

cplx weighted_phasor_sum_parallel(std::span<const double> w, std::span<const double> delta,
                                  double t_over_hbar) {
    return chunked_reduce_parallel<cplx>(w.size(), [&](std::size_t lo, std::size_t hi) {
        return phasor_chunk(w, delta, t_over_hbar, lo, hi);
    });
}

cplx weighted_phasor_sum(std::span<const double> w, std::span<const double> delta,
                         double t_over_hbar) {
    if (parallel_enabled() && w.size() >= kParallelThreshold) {
        return weighted_phasor_sum_parallel(w, delta, t_over_hbar);
    }
    return weighted_phasor_sum_serial(w, delta, t_over_hbar);
}

} // namespace qcoarse::kernels
