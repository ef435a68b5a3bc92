// Side-by-side timing of the serial and OpenMP kernel variants, with a
// bitwise-equality check of their outputs. The parallel variants are built
// to produce identical bits at any thread count; this tool makes that claim
// and the actual speedup observable on the machine at hand.

#include "qcoarse/kernels.hpp"
#include "qcoarse/rng.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

namespace {

using qcoarse::kernels::cplx;
using steady = std::chrono::steady_clock;

std::vector<cplx> random_state(std::size_t n, std::uint64_t seed) {
    qcoarse::CounterRng rng(seed);
    std::vector<cplx> v(n);
    for (cplx& x : v) {
        x = cplx{rng.next_symmetric(1.0), rng.next_symmetric(1.0)};
    }
    return v;
}

std::vector<double> random_reals(std::size_t n, std::uint64_t seed) {
    qcoarse::CounterRng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) {
        x = rng.next_symmetric(1.0);
    }
    return v;
}

template <typename Fn>
double time_best_ms(std::size_t reps, Fn&& fn) {
    fn();
    double best = 1e300;
    for (std::size_t r = 0; r < reps; ++r) {
        const steady::time_point t0 = steady::now();
        fn();
        const double ms =
            std::chrono::duration<double, std::milli>(steady::now() - t0).count();
        best = ms < best ? ms : best;
    }
    return best;
}

bool bits_equal(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    return std::memcmp(a.data(), b.data(), a.size() * sizeof(cplx)) == 0;
}

void print_row(const char* kernel, std::size_t n, double serial_ms, double parallel_ms,
               bool identical) {
    std::printf("%-22s %10zu %12.4f %12.4f %9.2fx   %s\n", kernel, n, serial_ms, parallel_ms,
                serial_ms / parallel_ms, identical ? "bitwise-equal" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial vs OpenMP kernel comparison"};
    std::size_t state_size = 1 << 20;
    std::size_t matrix_dim = 1024;
    std::size_t reps = 5;
    int threads = 0;
    bool quick = false;
    app.add_option("--size", state_size, "Element count for vector kernels");
    app.add_option("--matrix-dim", matrix_dim, "Dimension for dense matrix kernels");
    app.add_option("--reps", reps, "Repetitions (best time reported)");
    app.add_option("--threads", threads, "Worker threads (0 = library default)");
    app.add_flag("--quick", quick, "Small sizes, one repetition (smoke mode)");
    CLI11_PARSE(app, argc, argv);

    if (quick) {
        state_size = 1 << 14;
        matrix_dim = 128;
        reps = 1;
    }
    qcoarse::kernels::set_thread_count(threads);

    namespace k = qcoarse::kernels;
    std::printf("%-22s %10s %12s %12s %10s\n", "kernel", "n", "serial-ms", "openmp-ms",
                "speedup");

    bool all_equal = true;
    {
        const std::vector<cplx> x = random_state(state_size, 11);
        const std::vector<double> energy = random_reals(state_size, 12);
        std::vector<cplx> ys(state_size);
        std::vector<cplx> yp(state_size);
        const double ts =
            time_best_ms(reps, [&] { k::phase_rotate_serial(energy, 0.37, x, ys); });
        const double tp =
            time_best_ms(reps, [&] { k::phase_rotate_parallel(energy, 0.37, x, yp); });
        const bool eq = bits_equal(ys, yp);
        all_equal = all_equal && eq;
        print_row("phase_rotate", state_size, ts, tp, eq);
    }
    {
        const std::vector<cplx> a = random_state(state_size, 21);
        const std::vector<cplx> b = random_state(state_size, 22);
        std::vector<cplx> ys(state_size);
        std::vector<cplx> yp(state_size);
        const double ts = time_best_ms(reps, [&] { k::elementwise_mul_serial(a, b, ys); });
        const double tp = time_best_ms(reps, [&] { k::elementwise_mul_parallel(a, b, yp); });
        const bool eq = bits_equal(ys, yp);
        all_equal = all_equal && eq;
        print_row("elementwise_mul", state_size, ts, tp, eq);
    }
    {
        const std::vector<cplx> a = random_state(state_size, 31);
        const std::vector<cplx> b = random_state(state_size, 32);
        cplx rs{};
        cplx rp{};
        const double ts = time_best_ms(reps, [&] { rs = k::dot_conj_serial(a, b); });
        const double tp = time_best_ms(reps, [&] { rp = k::dot_conj_parallel(a, b); });
        const bool eq = std::memcmp(&rs, &rp, sizeof(cplx)) == 0;
        all_equal = all_equal && eq;
        print_row("dot_conj", state_size, ts, tp, eq);
    }
    {
        const std::vector<cplx> a = random_state(state_size, 41);
        double rs = 0.0;
        double rp = 0.0;
        const double ts = time_best_ms(reps, [&] { rs = k::sum_squares_serial(a); });
        const double tp = time_best_ms(reps, [&] { rp = k::sum_squares_parallel(a); });
        const bool eq = std::memcmp(&rs, &rp, sizeof(double)) == 0;
        all_equal = all_equal && eq;
        print_row("sum_squares", state_size, ts, tp, eq);
    }
    {
        const std::vector<double> w = random_reals(state_size, 51);
        const std::vector<double> delta = random_reals(state_size, 52);
        cplx rs{};
        cplx rp{};
        const double ts =
            time_best_ms(reps, [&] { rs = k::weighted_phasor_sum_serial(w, delta, 1.7); });
        const double tp =
            time_best_ms(reps, [&] { rp = k::weighted_phasor_sum_parallel(w, delta, 1.7); });
        const bool eq = std::memcmp(&rs, &rp, sizeof(cplx)) == 0;
        all_equal = all_equal && eq;
        print_row("weighted_phasor_sum", state_size, ts, tp, eq);
    }
    {
        const std::vector<cplx> m = random_state(matrix_dim * matrix_dim, 61);
        const std::vector<cplx> x = random_state(matrix_dim, 62);
        std::vector<cplx> ys(matrix_dim);
        std::vector<cplx> yp(matrix_dim);
        const double ts = time_best_ms(reps, [&] { k::matvec_serial(m, x, ys); });
        const double tp = time_best_ms(reps, [&] { k::matvec_parallel(m, x, yp); });
        const bool eq = bits_equal(ys, yp);
        all_equal = all_equal && eq;
        print_row("matvec", matrix_dim, ts, tp, eq);
    }
    {
        const std::vector<double> diag = random_reals(matrix_dim, 71);
        const std::vector<cplx> x = random_state(matrix_dim, 72);
        std::vector<cplx> ys(matrix_dim);
        std::vector<cplx> yp(matrix_dim);
        const double ts = time_best_ms(reps, [&] { k::diag_dense_sweep_serial(diag, x, ys); });
        const double tp =
            time_best_ms(reps, [&] { k::diag_dense_sweep_parallel(diag, x, yp); });
        const bool eq = bits_equal(ys, yp);
        all_equal = all_equal && eq;
        print_row("diag_dense_sweep", matrix_dim, ts, tp, eq);
    }

    if (!all_equal) {
        std::fprintf(stderr, "serial and parallel outputs differ\n");
        return 1;
    }
    return 0;
}
