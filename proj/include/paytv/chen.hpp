#ifndef PAYTV_CHEN_HPP
#define PAYTV_CHEN_HPP

#include <map>

#include "paytv/model.hpp"

namespace paytv::chen {

// Per-user server state. Tokens live server-side so possession proofs in
// later phases can be checked; a consumed token slot is cleared.
struct Record {
    Word id;
    std::uint64_t n_counter = 1; // N; fixed at 1, re-registration out of scope
    std::optional<Word> theta;
    std::optional<Word> gamma;

    bool operator==(const Record&) const = default;
};

struct Server {
    ServerSecrets keys;
    std::map<Word, Record> db; // keyed by clear ID

    Record& find(const Word& id);
};

ServerSecrets make_server_secrets(World& w);

// User-side session scratch. P and kappa are what the hand-off reuses
// without password entry.
struct UserSession {
    Word id;
    Word pwb;
    Word p;     // Q xor PWB = h(h(ID||N)||x)
    Word kappa; // h(y) recovered from R; the shared HES keying value
    Word cid;
    Word n;
    Ticks t1 = 0;
    std::optional<Word> token;
};

SmartCard register_user(World& w, Server& s, const UserSecrets& u);

std::pair<UserSession, Message> issue_login(World& w, const SmartCard& card,
                                            const Word& id, const Word& pw);
std::pair<Message, Word> issue_respond(World& w, Server& s, const Message& m1);
Word issue_finalize(World& w, UserSession& sess, const Message& m2);

// Subscription: proves possession of theta in the R-slot, yields gamma.
std::pair<UserSession, Message> subscribe_login(World& w, const SmartCard& card,
                                                const Word& id, const Word& pw,
                                                const Word& theta);
std::pair<Message, Word> subscribe_respond(World& w, Server& s, const Message& m1);
Word subscribe_finalize(World& w, UserSession& sess, const Message& m2);

// Hand-off: re-authentication from retained session state, no password entry.
std::pair<UserSession, Message> handoff_login(World& w, const UserSession& prior,
                                              const Word& token);
std::pair<Message, Word> handoff_respond(World& w, Server& s, const Message& m1);
Word handoff_finalize(World& w, UserSession& sess, const Message& m2);

// Honest end-to-end drivers.
struct PhaseOutcome {
    Word user_token;
    Word server_token;
};

PhaseOutcome run_issue(World& w, Server& s, const SmartCard& card, const UserSecrets& u,
                       UserSession* keep = nullptr);
PhaseOutcome run_subscription(World& w, Server& s, const SmartCard& card, const UserSecrets& u,
                              const Word& theta, UserSession* keep = nullptr);
PhaseOutcome run_handoff(World& w, Server& s, const UserSession& prior, const Word& token);

} // namespace paytv::chen

#endif
