#ifndef PAYTV_RNG_HPP
#define PAYTV_RNG_HPP

#include <cstdint>

#include "paytv/word.hpp"

namespace paytv {

// Seeded splitmix64 stream. Every session, trial and campaign owns its own
// stream so runs are reproducible regardless of scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Full-width random word.
    Word word(std::size_t width) {
        std::vector<std::uint8_t> out(width);
        std::uint64_t r = 0;
        for (std::size_t i = 0; i < width; ++i) {
            if (i % 8 == 0) r = next();
            out[i] = static_cast<std::uint8_t>(r >> ((i % 8) * 8));
        }
        return Word(std::move(out));
    }

    // Uniform value of the given bit width, encoded into a word. Toy-width
    // secrets for the brute-force games live in these reduced universes.
    Word value(unsigned bits, std::size_t width) {
        std::uint64_t mask = bits >= 64 ? ~0ull : (1ull << bits) - 1;
        return Word::from_u64(next() & mask, width);
    }

    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

    // Independent stream derived from this seed and an index.
    Rng fork(std::uint64_t index) const {
        Rng r(state_ ^ (0xa0761d6478bd642full * (index + 1)));
        r.next();
        return r;
    }

private:
    std::uint64_t state_;
};

} // namespace paytv

#endif
