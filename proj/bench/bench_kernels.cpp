// Times the OpenMP kernels against the serial reference implementations.
// Run manually: build/bench/bench_kernels [reps]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "wfrpca/dense_matrix.hpp"
#include "wfrpca/prox.hpp"
#include "wfrpca/rng.hpp"

using namespace wfrpca;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto start = Clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(Clock::now() - start).count());
    }
    return best;
}

volatile double sink = 0.0;

void row(const char* name, int reps, const std::function<DenseMatrix()>& parallel,
         const std::function<DenseMatrix()>& serial_ref) {
    // Touch the results so the calls cannot be optimized away.
    const double t_par = time_best_of(reps, [&] { sink += parallel().data()[0]; });
    const double t_ser = time_best_of(reps, [&] { sink += serial_ref().data()[0]; });
    std::printf("%-28s %10.3f ms %10.3f ms %8.2fx\n", name, 1e3 * t_ser, 1e3 * t_par,
                t_ser / t_par);
}

}  // namespace

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::atoi(argv[1]) : 5;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    Rng rng(RngSeed{2024});
    const DenseMatrix a = gaussian_matrix(600, 600, rng);
    const DenseMatrix b = gaussian_matrix(600, 600, rng);
    const DenseMatrix tall = gaussian_matrix(2000, 40, rng);
    const DenseMatrix tall2 = gaussian_matrix(2000, 40, rng);

    row("multiply 600x600x600", reps, [&] { return multiply(a, b); },
        [&] { return serial::multiply(a, b); });
    row("multiply_nt 2000x40", reps, [&] { return multiply_nt(tall, tall2); },
        [&] { return serial::multiply_nt(tall, tall2); });
    row("multiply_tn 2000x40", reps, [&] { return multiply_tn(tall, tall2); },
        [&] { return serial::multiply_tn(tall, tall2); });
    row("add_scaled 600x600", reps, [&] { return add_scaled(a, -0.5, b); },
        [&] { return serial::add_scaled(a, -0.5, b); });

    // Entrywise shrinkage has no serial twin in the library; compare against
    // an inline loop.
    row("soft_threshold 600x600", reps, [&] { return soft_threshold(a, 0.3); },
        [&] {
            DenseMatrix out(a.rows(), a.cols());
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double v = a.data()[i];
                const double mag = std::fabs(v) - 0.3;
                out.data()[i] = mag <= 0.0 ? 0.0 : (v > 0.0 ? mag : -mag);
            }
            return out;
        });
    return 0;
}
