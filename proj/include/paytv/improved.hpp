#ifndef PAYTV_IMPROVED_HPP
#define PAYTV_IMPROVED_HPP

#include <map>

#include "paytv/model.hpp"

namespace paytv::improved {

struct Record {
    Word q;
    Word r;
    Word lookup_key; // Q xor PWB at registration; immutable index key
    std::optional<Word> theta;
    std::optional<Word> gamma;
    std::optional<Word> handoff_tag; // audit freshness tag, never gates lookup

    bool operator==(const Record&) const = default;
};

struct Server {
    ServerSecrets keys; // x for Q; y only for the hand-off audit tag
    std::map<Word, Record> db; // keyed by lookup_key

    Record& find(const Word& lookup_key);
};

ServerSecrets make_server_secrets(World& w);

struct UserSession {
    Word id;
    Word pwb;
    Word q;
    Word r;
    Word n;
    Word kn;  // Q xor PWB xor n
    Word cid;
    Word rt;  // R xor Kn, issue only
    Ticks t1 = 0;
    std::optional<Word> token;
};

SmartCard register_user(World& w, Server& s, const UserSecrets& u);

std::pair<UserSession, Message> issue_login(World& w, const SmartCard& card,
                                            const Word& id, const Word& pw);
std::pair<Message, Word> issue_respond(World& w, Server& s, const Message& m1);
Word issue_finalize(World& w, UserSession& sess, const Message& m2);

// Subscription and hand-off requests carry a token-proof field V = token xor Kn.
std::pair<UserSession, Message> subscribe_login(World& w, const SmartCard& card,
                                                const Word& id, const Word& pw,
                                                const Word& theta);
std::pair<Message, Word> subscribe_respond(World& w, Server& s, const Message& m1);
Word subscribe_finalize(World& w, UserSession& sess, const Message& m2);

std::pair<UserSession, Message> handoff_login(World& w, const UserSession& prior,
                                              const Word& token);
std::pair<Message, Word> handoff_respond(World& w, Server& s, const Message& m1);
Word handoff_finalize(World& w, UserSession& sess, const Message& m2);

struct PhaseOutcome {
    Word user_token;
    Word server_token;
};

PhaseOutcome run_issue(World& w, Server& s, const SmartCard& card, const UserSecrets& u,
                       UserSession* keep = nullptr);
PhaseOutcome run_subscription(World& w, Server& s, const SmartCard& card, const UserSecrets& u,
                              const Word& theta, UserSession* keep = nullptr);
PhaseOutcome run_handoff(World& w, Server& s, const UserSession& prior, const Word& token);

} // namespace paytv::improved

#endif
