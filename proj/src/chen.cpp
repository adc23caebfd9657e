#include "paytv/chen.hpp"

namespace paytv::chen {

Record& Server::find(const Word& id) {
    auto it = db.find(id);
    if (it == db.end())
        fail(Err::UnknownUser, "unknown user identity");
    return it->second;
}

ServerSecrets make_server_secrets(World& w) {
    ServerSecrets s;
    s.x = w.rng.word(w.cfg.word_len);
    s.y = w.rng.word(w.cfg.word_len);
    s.hy = hash_to_word(s.y.bytes(), w.cfg.word_len);
    return s;
}

SmartCard register_user(World& w, Server& s, const UserSecrets& u) {
    auto hu = w.hasher("chen.registration.user");
    Word pwb = hu({u.pw ^ u.b});

    auto hs = w.hasher("chen.registration.server");
    if (s.db.count(u.id))
        fail(Err::DuplicateId, "identity already registered");
    Record rec;
    rec.id = u.id;
    rec.n_counter = 1; // N=0 -> store N=1
    Word n_word = Word::from_u64(rec.n_counter, w.cfg.word_len);

    Word k = hs({u.id ^ pwb});
    Word ud = hs({u.id, n_word});
    Word q = hs({ud, s.keys.x}) ^ pwb;
    Word r = hs({pwb, u.id}) ^ hs(s.keys.y.bytes());
    s.db.emplace(u.id, rec);
    return SmartCard{Scheme::Chen, k, r, q, u.b};
}

// Common user-side credential opening: PWB, K check, P, kappa = h(y).
// The K recompute is metered under the card scope: the reviewed protocol
// computes K but never verifies it, and the published per-phase counts do
// not include a verification hash.
static UserSession open_card(World& w, const SmartCard& card, const Word& id, const Word& pw,
                             Phase phase) {
    std::string base = std::string("chen.") + phase_name(phase);
    auto hu = w.hasher(base + ".user");
    auto hc = w.hasher(base + ".card");

    UserSession sess;
    sess.id = id;
    sess.pwb = hu({pw ^ card.b});
    Word k = hc({id ^ sess.pwb});
    if (!card.k || k != *card.k)
        fail(Err::AuthLocal, "credential check failed (K mismatch)");
    sess.p = card.q ^ sess.pwb;
    sess.kappa = hu({sess.pwb, id}) ^ card.r;
    return sess;
}

// Builds the common [*, C, CID, T1, n] request given the masked first slot.
static Message make_request(World& w, UserSession& sess, Phase phase,
                            const char* slot_name, const Word& slot_value, const Hasher& hu) {
    sess.n = w.rng.word(w.cfg.word_len);
    sess.t1 = w.clock.now();
    Word t1w = w.ts_word(sess.t1);
    sess.cid = sess.id ^ hu({sess.kappa, t1w, sess.n});
    Word c = hu({sess.p, sess.cid, t1w, sess.n});

    Message m1;
    m1.scheme = Scheme::Chen;
    m1.phase = phase;
    m1.dir = Dir::ToServer;
    m1.fields = {{slot_name, slot_value}, {"C", c}, {"CID", sess.cid}, {"T1", t1w}, {"n", sess.n}};
    return m1;
}

std::pair<UserSession, Message> issue_login(World& w, const SmartCard& card,
                                            const Word& id, const Word& pw) {
    UserSession sess = open_card(w, card, id, pw, Phase::Issue);
    auto hu = w.hasher("chen.issue.user");
    Message m1 = make_request(w, sess, Phase::Issue, "Rt", Word::zero(w.cfg.word_len), hu);
    m1.fields[0].second = card.r ^ hu({sess.kappa, sess.n});
    return {sess, m1};
}

// Server-side open of the common request shape: window check, identity
// recovery, P' derivation and C verification.
struct ServerView {
    Word id;
    Word p_prime;
    Word cid;
    Word n;
    Word t1w;
    Ticks t2;
    Record* rec;
};

static ServerView open_request(World& w, Server& s, const Message& m1, const char* slot_name,
                               const Hasher& hs) {
    ServerView v;
    v.t2 = w.clock.now();
    v.cid = m1.field("CID");
    v.n = m1.field("n");
    v.t1w = m1.field("T1");
    (void)m1.field(slot_name);
    if (!check_window(v.t1w.to_u64(), v.t2, w.cfg.delta_t))
        fail(Err::StaleTimestamp, "request outside the accept window");
    v.id = v.cid ^ hs({s.keys.hy, v.t1w, v.n});
    v.rec = &s.find(v.id);
    Word n_word = Word::from_u64(v.rec->n_counter, w.cfg.word_len);
    Word ud = hs({v.id, n_word});
    v.p_prime = hs({ud, s.keys.x});
    Word c_check = hs({v.p_prime, v.cid, v.t1w, v.n});
    if (c_check != m1.field("C"))
        fail(Err::MacMismatch, "request authenticator mismatch");
    return v;
}

static Message make_response(World& w, const ServerView& v, Phase phase, const char* mask_name,
                             const Word& token, const Hasher& hs) {
    Word t2w = w.ts_word(v.t2);
    Word d = hs({v.p_prime, v.cid, t2w, v.n});
    Word e = token ^ hs({v.p_prime, t2w, v.n});
    Message m2;
    m2.scheme = Scheme::Chen;
    m2.phase = phase;
    m2.dir = Dir::ToUser;
    m2.fields = {{"D", d}, {mask_name, e}, {"T2", t2w}};
    return m2;
}

std::pair<Message, Word> issue_respond(World& w, Server& s, const Message& m1) {
    auto hs = w.hasher("chen.issue.server");
    ServerView v = open_request(w, s, m1, "Rt", hs);
    // Recover the card's R from the masked slot, as the reviewed scheme does.
    Word r_recovered = m1.field("Rt") ^ hs({s.keys.hy, v.n});
    (void)r_recovered;
    Word theta = w.rng.word(w.cfg.word_len);
    v.rec->theta = theta;
    return {make_response(w, v, Phase::Issue, "E", theta, hs), theta};
}

static Word finalize(World& w, UserSession& sess, const Message& m2, const char* mask_name,
                     const Hasher& hu) {
    Ticks t3 = w.clock.now();
    Word t2w = m2.field("T2");
    if (!check_window(t2w.to_u64(), t3, w.cfg.delta_t))
        fail(Err::StaleTimestamp, "response outside the accept window");
    Word d_check = hu({sess.p, sess.cid, t2w, sess.n});
    if (d_check != m2.field("D"))
        fail(Err::ServerAuth, "server authenticator mismatch");
    Word token = m2.field(mask_name) ^ hu({sess.p, t2w, sess.n});
    sess.token = token;
    return token;
}

Word issue_finalize(World& w, UserSession& sess, const Message& m2) {
    auto hu = w.hasher("chen.issue.user");
    return finalize(w, sess, m2, "E", hu);
}

std::pair<UserSession, Message> subscribe_login(World& w, const SmartCard& card,
                                                const Word& id, const Word& pw,
                                                const Word& theta) {
    UserSession sess = open_card(w, card, id, pw, Phase::Subscription);
    auto hu = w.hasher("chen.subscription.user");
    Message m1 = make_request(w, sess, Phase::Subscription, "Rt", Word::zero(w.cfg.word_len), hu);
    m1.fields[0].second = theta ^ hu({sess.kappa, sess.n});
    return {sess, m1};
}

std::pair<Message, Word> subscribe_respond(World& w, Server& s, const Message& m1) {
    auto hs = w.hasher("chen.subscription.server");
    ServerView v = open_request(w, s, m1, "Rt", hs);
    Word theta = m1.field("Rt") ^ hs({s.keys.hy, v.n});
    if (!v.rec->theta || theta != *v.rec->theta)
        fail(Err::TokenMismatch, "presented token does not match the issued one");
    Word gamma = w.rng.word(w.cfg.word_len);
    v.rec->gamma = gamma;
    v.rec->theta.reset(); // consumed
    return {make_response(w, v, Phase::Subscription, "E", gamma, hs), gamma};
}

Word subscribe_finalize(World& w, UserSession& sess, const Message& m2) {
    auto hu = w.hasher("chen.subscription.user");
    return finalize(w, sess, m2, "E", hu);
}

std::pair<UserSession, Message> handoff_login(World& w, const UserSession& prior,
                                              const Word& token) {
    auto hu = w.hasher("chen.handoff.user");
    UserSession sess = prior;
    sess.token.reset();
    Message m1 = make_request(w, sess, Phase::Handoff, "Z", Word::zero(w.cfg.word_len), hu);
    m1.fields[0].second = token ^ hu({sess.kappa, sess.n});
    return {sess, m1};
}

std::pair<Message, Word> handoff_respond(World& w, Server& s, const Message& m1) {
    auto hs = w.hasher("chen.handoff.server");
    ServerView v = open_request(w, s, m1, "Z", hs);
    Word presented = m1.field("Z") ^ hs({s.keys.hy, v.n});
    std::optional<Word> expected;
    switch (w.cfg.chen_handoff) {
        case TokenChain::Theta: expected = v.rec->theta; break;
        case TokenChain::Gamma: expected = v.rec->gamma; break;
        case TokenChain::MostRecent:
            expected = v.rec->gamma ? v.rec->gamma : v.rec->theta;
            break;
    }
    if (!expected || presented != *expected)
        fail(Err::TokenMismatch, "presented token does not match the live one");
    Word gamma_i = w.rng.word(w.cfg.word_len);
    v.rec->gamma = gamma_i;
    return {make_response(w, v, Phase::Handoff, "F", gamma_i, hs), gamma_i};
}

Word handoff_finalize(World& w, UserSession& sess, const Message& m2) {
    auto hu = w.hasher("chen.handoff.user");
    return finalize(w, sess, m2, "F", hu);
}

PhaseOutcome run_issue(World& w, Server& s, const SmartCard& card, const UserSecrets& u,
                       UserSession* keep) {
    auto [sess, m1] = issue_login(w, card, u.id, u.pw);
    channel_send(w, m1);
    auto [m2, server_token] = issue_respond(w, s, w.transcript.entries.back());
    channel_send(w, m2);
    Word user_token = issue_finalize(w, sess, w.transcript.entries.back());
    if (keep) *keep = sess;
    return {user_token, server_token};
}

PhaseOutcome run_subscription(World& w, Server& s, const SmartCard& card, const UserSecrets& u,
                              const Word& theta, UserSession* keep) {
    auto [sess, m1] = subscribe_login(w, card, u.id, u.pw, theta);
    channel_send(w, m1);
    auto [m2, server_token] = subscribe_respond(w, s, w.transcript.entries.back());
    channel_send(w, m2);
    Word user_token = subscribe_finalize(w, sess, w.transcript.entries.back());
    if (keep) *keep = sess;
    return {user_token, server_token};
}

PhaseOutcome run_handoff(World& w, Server& s, const UserSession& prior, const Word& token) {
    auto [sess, m1] = handoff_login(w, prior, token);
    channel_send(w, m1);
    auto [m2, server_token] = handoff_respond(w, s, w.transcript.entries.back());
    channel_send(w, m2);
    Word user_token = handoff_finalize(w, sess, w.transcript.entries.back());
    return {user_token, server_token};
}

} // namespace paytv::chen
