// Benchmark of the dense operator-product kernels: serial reference vs the
// OpenMP version, on the actual w-kernel matrices at n = 1.

#include <chrono>
#include <cstdio>

#include "oweil/weilrep.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace oweil;

namespace {

double seconds_per_run(const std::function<void()>& fn, int runs) {
    // One warmup, then the best of `runs`.
    fn();
    double best = 1e300;
    for (int i = 0; i < runs; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

void bench_q(unsigned q, int runs) {
    const GroupCtx ctx{q, 1, Involution::Tilde, -1};
    const WeilDatum datum(ctx, 1);
    const TokenTables tables = build_token_tables(ctx);
    const WeilRep rep(datum, tables, false);
    const WeilOperator w = rep.generator_operator(GeneratorToken::w());
    const WeilOperator wt = w.conjugate_transpose();
    const std::size_t dim = w.dim();

    kernels::DenseProduct serial_out, parallel_out;
    const double ts = seconds_per_run(
        [&] { serial_out = kernels::dense_mul_serial(q, dim, w.codes().data(),
                                                     wt.codes().data()); },
        runs);
    const double tp = seconds_per_run(
        [&] { parallel_out = kernels::dense_mul_parallel(q, dim, w.codes().data(),
                                                         wt.codes().data()); },
        runs);
    const bool same = serial_out.codes == parallel_out.codes &&
                      serial_out.magnitude == parallel_out.magnitude;
    std::printf("q=%u dim=%zu  w*w^dagger  serial %.3fs  parallel %.3fs  speedup %.2fx  %s\n",
                q, dim, ts, tp, ts / tp, same ? "identical" : "MISMATCH");
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel kernel runs serially\n");
#endif
    bench_q(5, 3);
    bench_q(7, 2);
    return 0;
}
