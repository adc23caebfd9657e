#ifndef PAYTV_MODEL_HPP
#define PAYTV_MODEL_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "paytv/clock.hpp"
#include "paytv/hash.hpp"
#include "paytv/rng.hpp"
#include "paytv/word.hpp"

namespace paytv {

enum class Scheme { Chen, Improved };
enum class Phase { Registration, Issue, Subscription, Handoff };
enum class Dir { ToServer, ToUser };

const char* scheme_name(Scheme s);
const char* phase_name(Phase p);
const char* dir_name(Dir d);
Phase phase_from_name(const std::string& name);
Scheme scheme_from_name(const std::string& name);

// Which stored token a hand-off proves possession of.
enum class TokenChain { Gamma, Theta, MostRecent };

struct Config {
    std::size_t word_len = 32;       // L
    Ticks delta_t = 2;               // window for T_recv - T_send
    TokenChain chen_handoff = TokenChain::MostRecent;
    TokenChain improved_handoff = TokenChain::Gamma;
    std::string hash_name = "sha256"; // deployment choice, recorded in reports
};

struct UserSecrets {
    Word id;  // ID_i
    Word pw;  // PW_i
    Word b;   // blinding number stored on the card
};

struct ServerSecrets {
    Word x;   // inner key of h(ID..x)
    Word y;   // remote server secret
    Word hy;  // h(y); held by every HES, recoverable by every Chen card holder
};

struct SmartCard {
    Scheme scheme;
    std::optional<Word> k; // K, Chen only
    Word r;                // R_i
    Word q;                // Q_i
    Word b;
};

enum class TokenKind { Theta, Gamma, GammaI };

struct Token {
    TokenKind kind;
    Word value;
};

// Tagged wire record. Field names ride with the message; the bench counts
// fields, not bytes. The phase tag stands in for the request-type signal
// the schemes never specify on the wire.
struct Message {
    Scheme scheme;
    Phase phase;
    Dir dir;
    std::vector<std::pair<std::string, Word>> fields;
    Ticks sent_at = 0;

    const Word& field(const std::string& name) const;
    bool has(const std::string& name) const;
    std::string serialize() const;
    static Message parse(const std::string& line);
};

// Append-only observation surface for the passive adversary.
struct Transcript {
    std::vector<Message> entries;

    std::string serialize() const;
    static Transcript parse(const std::string& text);
};

// One simulated world: config, channel, clock, RNG and hash meter. Parallel
// trials each build their own.
struct World {
    Config cfg;
    SimClock clock;
    Rng rng;
    HashMeter meter;
    Transcript transcript;

    World(Config c, std::uint64_t seed) : cfg(std::move(c)), rng(seed) {}

    Hasher hasher(const std::string& scope) { return Hasher(cfg.word_len, &meter, scope); }
    Word ts_word(Ticks t) const { return Word::from_u64(t, cfg.word_len); }
};

// Delivers unmodified and advances the clock by one tick.
void channel_send(World& w, Message msg);

} // namespace paytv

#endif
