#ifndef PAYTV_BENCH_HPP
#define PAYTV_BENCH_HPP

#include <string>
#include <vector>

#include "paytv/adversary.hpp"

namespace paytv::bench {

inline constexpr double kHashMicros = 0.13; // per-hash cost the tables assume

// One row of the performance table. Counts are read from the hash meter of
// a fresh honest registration + issue run; times are derived, never
// measured. p8 is the printed protocol field count; p8_operational counts
// what actually has to ride the channel for the round to be executable
// (they differ for the improved subscription/hand-off requests).
struct PerfRow {
    std::string scheme;
    std::uint64_t p1 = 0; // registration hashes
    std::uint64_t p3 = 0; // issue hashes, user side
    std::uint64_t p5 = 0; // issue hashes, server side
    std::uint64_t p7 = 0; // parameters stored on the card
    std::uint64_t p8 = 0; // request fields on the channel, issue phase
    std::uint64_t p8_operational = 0;
    std::uint64_t p3_operational = 0; // includes the credential-check hash

    double p2() const { return double(p1) * kHashMicros; }
    double p4() const { return double(p3) * kHashMicros; }
    double p6() const { return double(p5) * kHashMicros; }
};

PerfRow bench_counts(Scheme scheme, std::uint64_t seed = 1);

enum class Verdict { Pass, Fail };

struct SecurityCheck {
    std::string feature;   // S1..S7
    std::string check;     // the runnable check behind the verdict
    Verdict verdict;
    std::string detail;
};

struct SecurityMatrixRow {
    std::string scheme;
    std::vector<SecurityCheck> checks; // S1..S7 in order
};

std::vector<SecurityMatrixRow> security_matrix(std::uint64_t seed = 1);

// Central exact-binomial acceptance region [lo, hi] on the success count
// for n trials at true rate p, total tail mass alpha.
std::pair<std::uint64_t, std::uint64_t> binomial_accept_region(std::uint64_t n, double p,
                                                               double alpha = 0.01);

} // namespace paytv::bench

#endif
