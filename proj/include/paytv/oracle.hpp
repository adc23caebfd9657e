#ifndef PAYTV_ORACLE_HPP
#define PAYTV_ORACLE_HPP

#include <array>

#include "paytv/adversary.hpp"

// Independent exhaustive-search oracle. The acceptance predicates here are
// straight-line reimplementations against the raw digest primitive; they
// never call the game code they are used to check.
namespace paytv::oracle {

using adversary::Alg3Instance;
using adversary::Alg4Instance;
using adversary::Alg5Instance;
using adversary::Alg6Instance;

bool accepts_alg3(const Alg3Instance&, std::uint64_t id, std::uint64_t x, std::uint64_t pw,
                  std::uint64_t b);
bool accepts_alg4(const Alg4Instance&, std::uint64_t pw, std::uint64_t id);
bool accepts_alg5(const Alg5Instance&, std::uint64_t id);
bool accepts_alg6(const Alg6Instance&, std::uint64_t id);

struct Enumeration {
    std::uint64_t universe = 0;
    std::vector<std::array<std::uint64_t, 4>> accepting; // raw guess values
    bool contains_planted = false;
    std::uint64_t collisions = 0; // acceptances whose hashed guess differs from the truth

    double true_rate() const {
        return universe ? double(accepting.size()) / double(universe) : 0.0;
    }
};

constexpr std::uint64_t kDefaultUniverseCap = 1ull << 24;

Enumeration enumerate_alg3(const Alg3Instance&, std::uint64_t cap = kDefaultUniverseCap);
Enumeration enumerate_alg4(const Alg4Instance&, std::uint64_t cap = kDefaultUniverseCap);
Enumeration enumerate_alg5(const Alg5Instance&, std::uint64_t cap = kDefaultUniverseCap);
Enumeration enumerate_alg6(const Alg6Instance&, std::uint64_t cap = kDefaultUniverseCap);

} // namespace paytv::oracle

#endif
