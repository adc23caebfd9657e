// Compares the serial reference runner against the OpenMP runner on the
// Monte-Carlo guessing campaigns and checks they produce identical results.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "paytv/adversary.hpp"

using namespace paytv;
using namespace paytv::adversary;

namespace {

template <class Run>
double timed(Run&& run, GameResult& out) {
    auto t0 = std::chrono::steady_clock::now();
    out = run();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int bench_game(const char* name, std::uint64_t guesses,
               const std::function<GameResult(Exec)>& run) {
    GameResult serial, parallel;
    double ts = timed([&] { return run(Exec::Serial); }, serial);
    double tp = timed([&] { return run(Exec::Parallel); }, parallel);
    bool same = serial.successes == parallel.successes && serial.budget_used == parallel.budget_used;
    std::printf("%-5s %10llu guesses  serial %7.3fs  parallel %7.3fs  speedup %5.2fx  %s\n", name,
                (unsigned long long)guesses, ts, tp, tp > 0 ? ts / tp : 0.0,
                same ? "identical" : "MISMATCH");
    return same ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    std::uint64_t guesses = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : (1ull << 20);
    std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;
#ifdef _OPENMP
    std::printf("OpenMP enabled, max %d thread(s)\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available: both runs are serial\n");
#endif
    int rc = 0;
    auto i3 = make_alg3_instance({16, 16, 16, 16}, 32, seed);
    rc |= bench_game("alg3", guesses,
                     [&](Exec e) { return run_alg3(i3, guesses, seed + 1, e); });
    auto i4 = make_alg4_instance(16, 16, 32, seed);
    rc |= bench_game("alg4", guesses,
                     [&](Exec e) { return run_alg4(i4, guesses, seed + 1, e); });
    auto i5 = make_alg5_instance(24, 32, seed);
    rc |= bench_game("alg5", guesses,
                     [&](Exec e) { return run_alg5(i5, guesses, seed + 1, e); });
    auto i6 = make_alg6_instance(24, 32, seed);
    rc |= bench_game("alg6", guesses,
                     [&](Exec e) { return run_alg6(i6, guesses, seed + 1, e); });
    std::uint64_t sessions = guesses >> 7 ? guesses >> 7 : 1;
    rc |= bench_game("alg1", sessions,
                     [&](Exec e) { return alg1_campaign(Scheme::Chen, sessions, seed, e); });
    return rc;
}
