#ifndef PAYTV_ADVERSARY_HPP
#define PAYTV_ADVERSARY_HPP

#include <set>
#include <vector>

#include "paytv/chen.hpp"
#include "paytv/improved.hpp"

namespace paytv::adversary {

enum class Exec { Serial, Parallel };

struct GameResult {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    std::uint64_t budget_used = 0; // hash evaluations

    double rate() const { return trials ? double(successes) / double(trials) : 0.0; }
};

// Algorithm 1: a malicious HES holding the shared keying value strips the
// pseudonym of a Chen request. Works on any message carrying a CID-shaped
// field; improved traffic is fed through its Kn slot for the contrast runs.
Word alg1_recover_id(const Message& m1, const Word& kappa, Hasher& h);

// Runs `sessions` independent honest worlds and counts exact recoveries.
GameResult alg1_campaign(Scheme scheme, std::uint64_t sessions, std::uint64_t seed,
                         Exec exec = Exec::Serial);

// Algorithm 2: pseudonym set for linkage across sessions.
struct PseudonymStore {
    std::set<Word> entries;
};

// Returns true ("seen") when the derived pseudonym is already stored;
// otherwise stores it.
bool alg2_trace(PseudonymStore& store, const Word& y_star, const Message& m1, Hasher& h);

struct Alg2Report {
    GameResult same_user;  // second-or-later sessions classified "seen"
    GameResult cross_user; // first sessions wrongly classified "seen"
};

// One long-lived world, `users` registered subscribers, `sessions` logins
// round-robin. With use_kappa the adversary recomputes with the true shared
// keying value; otherwise with its own random y*.
Alg2Report alg2_campaign(Scheme scheme, bool use_kappa, std::uint64_t users,
                         std::uint64_t sessions, std::uint64_t seed);

// --- brute-force games against the improved scheme -------------------------

struct ToyWidths {
    unsigned id_bits = 4;
    unsigned x_bits = 4;
    unsigned pw_bits = 4;
    unsigned b_bits = 4;
};

// Every instance is cut from a freshly generated honest run, never from
// synthetic data.

struct Alg3Instance { // channel eavesdropping
    ToyWidths widths;
    std::size_t word_len;
    Word target; // Kn xor n from the live request
    Word true_id, true_x, true_pw, true_b;
};

struct Alg4Instance { // stolen card: R and b known
    unsigned pw_bits, id_bits;
    std::size_t word_len;
    Word r, b;
    Word true_pw, true_id;
};

struct Alg5Instance { // stolen card with correct x and PW conditioned in
    unsigned id_bits;
    std::size_t word_len;
    Word q, b, x, pw;
    Word true_id;
};

struct Alg6Instance { // malicious server with record, x and live request
    unsigned id_bits;
    std::size_t word_len;
    Word q, r, lookup_key, x;
    Word pwb; // derived from the record, line 4
    Word true_id;
};

Alg3Instance make_alg3_instance(ToyWidths w, std::size_t word_len, std::uint64_t seed);
Alg4Instance make_alg4_instance(unsigned pw_bits, unsigned id_bits, std::size_t word_len,
                                std::uint64_t seed);
Alg5Instance make_alg5_instance(unsigned id_bits, std::size_t word_len, std::uint64_t seed);
Alg6Instance make_alg6_instance(unsigned id_bits, std::size_t word_len, std::uint64_t seed);

// Acceptance predicates of the Monte-Carlo implementations. The hasher is
// metered so budgets can be audited.
bool alg3_accepts(const Alg3Instance&, const Word& id, const Word& x, const Word& pw,
                  const Word& b, Hasher& h);
bool alg4_accepts(const Alg4Instance&, const Word& pw, const Word& id, Hasher& h);
bool alg5_accepts(const Alg5Instance&, const Word& id, Hasher& h);
bool alg6_accepts(const Alg6Instance&, const Word& id, Hasher& h);

// Hash evaluations per guess, as performed by the predicates above.
constexpr std::uint64_t kAlg3HashesPerGuess = 3;
constexpr std::uint64_t kAlg4HashesPerGuess = 2;
constexpr std::uint64_t kAlg5HashesPerGuess = 2;
constexpr std::uint64_t kAlg6HashesPerGuess = 2;

constexpr std::uint64_t kDefaultGuessCap = 1ull << 26;

GameResult run_alg3(const Alg3Instance&, std::uint64_t guesses, std::uint64_t seed,
                    Exec exec = Exec::Serial, std::uint64_t cap = kDefaultGuessCap);
GameResult run_alg4(const Alg4Instance&, std::uint64_t guesses, std::uint64_t seed,
                    Exec exec = Exec::Serial, std::uint64_t cap = kDefaultGuessCap);
GameResult run_alg5(const Alg5Instance&, std::uint64_t guesses, std::uint64_t seed,
                    Exec exec = Exec::Serial, std::uint64_t cap = kDefaultGuessCap);
GameResult run_alg6(const Alg6Instance&, std::uint64_t guesses, std::uint64_t seed,
                    Exec exec = Exec::Serial, std::uint64_t cap = kDefaultGuessCap);

// --- replay ----------------------------------------------------------------

struct ReplayOutcome {
    Phase phase;
    bool accepted;
    std::optional<Err> error;
};

struct ReplayReport {
    std::vector<ReplayOutcome> outcomes;
    GameResult summary;
};

// Re-sends every recorded request at its original tick plus `offset`
// against the live server state.
ReplayReport replay_harness(const Transcript& transcript, chen::Server& server,
                            const Config& cfg, Ticks offset);
ReplayReport replay_harness(const Transcript& transcript, improved::Server& server,
                            const Config& cfg, Ticks offset);

} // namespace paytv::adversary

#endif
