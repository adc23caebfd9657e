#include "paytv/improved.hpp"

namespace paytv::improved {

Record& Server::find(const Word& lookup_key) {
    auto it = db.find(lookup_key);
    if (it == db.end())
        fail(Err::UnknownUser, "no record for presented lookup key");
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
    auto hu = w.hasher("improved.registration.user");
    Word pwb = hu({u.pw ^ u.b});

    auto hs = w.hasher("improved.registration.server");
    Word q = hs({u.id, s.keys.x}) ^ pwb;
    Word r = hs({pwb, u.id});
    Word lookup_key = q ^ pwb;
    if (s.db.count(lookup_key))
        fail(Err::DuplicateId, "lookup key collision: identity already registered");
    s.db.emplace(lookup_key, Record{q, r, lookup_key, {}, {}, {}});
    return SmartCard{Scheme::Improved, std::nullopt, r, q, u.b};
}

// Credential opening shared by issue and subscription: the card itself
// verifies R before anything touches the channel.
static UserSession open_card(World& w, const SmartCard& card, const Word& id, const Word& pw,
                             const Hasher& hu) {
    UserSession sess;
    sess.id = id;
    sess.q = card.q;
    sess.r = card.r;
    sess.pwb = hu({pw ^ card.b});
    if (hu({sess.pwb, id}) != card.r)
        fail(Err::AuthLocal, "credential check failed (R mismatch)");
    return sess;
}

static Message make_request(World& w, UserSession& sess, Phase phase, const Hasher& hu) {
    sess.n = w.rng.word(w.cfg.word_len);
    sess.t1 = w.clock.now();
    sess.kn = sess.q ^ sess.pwb ^ sess.n;
    Word t1w = w.ts_word(sess.t1);
    sess.cid = sess.kn ^ hu({sess.kn, t1w, sess.n});
    Word c = hu({sess.q, sess.cid, t1w, sess.n});

    Message m1;
    m1.scheme = Scheme::Improved;
    m1.phase = phase;
    m1.dir = Dir::ToServer;
    m1.fields = {{"Kn", sess.kn}, {"C", c}, {"T1", t1w}, {"n", sess.n}};
    return m1;
}

std::pair<UserSession, Message> issue_login(World& w, const SmartCard& card,
                                            const Word& id, const Word& pw) {
    auto hu = w.hasher("improved.issue.user");
    UserSession sess = open_card(w, card, id, pw, hu);
    Message m1 = make_request(w, sess, Phase::Issue, hu);
    sess.rt = sess.r ^ sess.kn;
    return {sess, m1};
}

struct ServerView {
    Word kn;
    Word cid;
    Word n;
    Word t1w;
    Ticks t2;
    Record* rec;
};

static ServerView open_request(World& w, Server& s, const Message& m1, const Hasher& hs) {
    ServerView v;
    v.t2 = w.clock.now();
    v.kn = m1.field("Kn");
    v.n = m1.field("n");
    v.t1w = m1.field("T1");
    if (!check_window(v.t1w.to_u64(), v.t2, w.cfg.delta_t))
        fail(Err::StaleTimestamp, "request outside the accept window");
    v.rec = &s.find(v.kn ^ v.n);
    v.cid = v.kn ^ hs({v.kn, v.t1w, v.n});
    Word c_check = hs({v.rec->q, v.cid, v.t1w, v.n});
    if (c_check != m1.field("C"))
        fail(Err::MacMismatch, "request authenticator mismatch");
    return v;
}

std::pair<Message, Word> issue_respond(World& w, Server& s, const Message& m1) {
    auto hs = w.hasher("improved.issue.server");
    ServerView v = open_request(w, s, m1, hs);
    Word theta = w.rng.word(w.cfg.word_len);
    v.rec->theta = theta;
    Word t2w = w.ts_word(v.t2);
    Word d = hs({v.rec->r ^ v.kn, v.cid, t2w, v.n});
    // Mask term Q xor Kn = n xor PWB, which is what the card unblinds with.
    Word e = theta ^ hs({v.rec->q, t2w, v.rec->q ^ v.kn});
    Message m2{Scheme::Improved, Phase::Issue, Dir::ToUser,
               {{"D", d}, {"E", e}, {"T2", t2w}}};
    return {m2, theta};
}

static Ticks checked_receive(World& w, const Message& m2) {
    Ticks t3 = w.clock.now();
    if (!check_window(m2.field("T2").to_u64(), t3, w.cfg.delta_t))
        fail(Err::StaleTimestamp, "response outside the accept window");
    return t3;
}

Word issue_finalize(World& w, UserSession& sess, const Message& m2) {
    auto hu = w.hasher("improved.issue.user");
    checked_receive(w, m2);
    Word t2w = m2.field("T2");
    if (hu({sess.rt, sess.cid, t2w, sess.n}) != m2.field("D"))
        fail(Err::ServerAuth, "server authenticator mismatch");
    Word theta = m2.field("E") ^ hu({sess.q, t2w, sess.n ^ sess.pwb});
    sess.token = theta;
    return theta;
}

std::pair<UserSession, Message> subscribe_login(World& w, const SmartCard& card,
                                                const Word& id, const Word& pw,
                                                const Word& theta) {
    auto hu = w.hasher("improved.subscription.user");
    UserSession sess = open_card(w, card, id, pw, hu);
    Message m1 = make_request(w, sess, Phase::Subscription, hu);
    // Token-proof field: the printed message set has no theta-bearing slot,
    // so the server could never check possession without it.
    m1.fields.insert(m1.fields.begin() + 1, {"V", theta ^ sess.kn});
    return {sess, m1};
}

// Audit tag expected by subscription and refreshed by hand-off.
static Word audit_tag(const Server& s, const Record& rec, const Hasher& hs) {
    return rec.lookup_key ^ hs({s.keys.y, rec.r});
}

static std::pair<Message, Word> token_respond(World& w, Server& s, const Message& m1,
                                              Phase phase, const char* mask_name,
                                              const Hasher& hs) {
    ServerView v = open_request(w, s, m1, hs);
    Word expected_tag = audit_tag(s, *v.rec, hs);
    if (v.rec->handoff_tag && *v.rec->handoff_tag != expected_tag)
        fail(Err::MacMismatch, "hand-off audit tag mismatch");

    Word presented = m1.field("V") ^ v.kn;
    std::optional<Word> live;
    if (phase == Phase::Subscription) {
        live = v.rec->theta;
    } else {
        live = w.cfg.improved_handoff == TokenChain::Theta ? v.rec->theta : v.rec->gamma;
    }
    if (!live || presented != *live)
        fail(Err::TokenMismatch, "presented token does not match the live one");

    Word fresh = w.rng.word(w.cfg.word_len);
    if (phase == Phase::Subscription) {
        v.rec->theta.reset(); // consumed
        v.rec->gamma = fresh;
    } else {
        v.rec->gamma = fresh;
        v.rec->handoff_tag = expected_tag;
    }
    Word t2w = w.ts_word(v.t2);
    Word d = hs({v.rec->r, v.cid, t2w, v.n});
    Word mask = fresh ^ hs({v.rec->r, t2w, v.rec->q ^ v.kn});
    Message m2{Scheme::Improved, phase, Dir::ToUser,
               {{"D", d}, {mask_name, mask}, {"T2", t2w}}};
    return {m2, fresh};
}

std::pair<Message, Word> subscribe_respond(World& w, Server& s, const Message& m1) {
    auto hs = w.hasher("improved.subscription.server");
    return token_respond(w, s, m1, Phase::Subscription, "E", hs);
}

static Word token_finalize(World& w, UserSession& sess, const Message& m2,
                           const char* mask_name, const Hasher& hu) {
    checked_receive(w, m2);
    Word t2w = m2.field("T2");
    if (hu({sess.r, sess.cid, t2w, sess.n}) != m2.field("D"))
        fail(Err::ServerAuth, "server authenticator mismatch");
    Word token = m2.field(mask_name) ^ hu({sess.r, t2w, sess.n ^ sess.pwb});
    sess.token = token;
    return token;
}

Word subscribe_finalize(World& w, UserSession& sess, const Message& m2) {
    auto hu = w.hasher("improved.subscription.user");
    return token_finalize(w, sess, m2, "E", hu);
}

std::pair<UserSession, Message> handoff_login(World& w, const UserSession& prior,
                                              const Word& token) {
    auto hu = w.hasher("improved.handoff.user");
    UserSession sess = prior;
    sess.token.reset();
    Message m1 = make_request(w, sess, Phase::Handoff, hu);
    m1.fields.insert(m1.fields.begin() + 1, {"V", token ^ sess.kn});
    return {sess, m1};
}

std::pair<Message, Word> handoff_respond(World& w, Server& s, const Message& m1) {
    auto hs = w.hasher("improved.handoff.server");
    return token_respond(w, s, m1, Phase::Handoff, "F", hs);
}

Word handoff_finalize(World& w, UserSession& sess, const Message& m2) {
    auto hu = w.hasher("improved.handoff.user");
    return token_finalize(w, sess, m2, "F", hu);
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

} // namespace paytv::improved
