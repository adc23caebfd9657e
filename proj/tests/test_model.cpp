#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "paytv/chen.hpp"
#include "paytv/improved.hpp"

using namespace paytv;

TEST_CASE("check_window boundaries") {
    CHECK(check_window(5, 5, 0));       // zero delta, same tick
    CHECK(check_window(5, 7, 2));       // boundary inclusive
    CHECK_FALSE(check_window(5, 9, 3)); // one past the window
    CHECK(check_window(5, 8, 3));
    CHECK_THROWS_AS((void)check_window(5, 4, 3), ProtocolError); // receiver behind sender
}

TEST_CASE("channel_send stamps, appends and costs one tick") {
    Config cfg;
    World w(cfg, 1);
    CHECK(w.clock.now() == 0);
    Message m{Scheme::Chen, Phase::Issue, Dir::ToServer, {{"n", w.rng.word(cfg.word_len)}}};
    channel_send(w, m);
    CHECK(w.clock.now() == 1);
    REQUIRE(w.transcript.entries.size() == 1);
    CHECK(w.transcript.entries[0].sent_at == 0);
    channel_send(w, m);
    CHECK(w.transcript.entries[1].sent_at == 1);
    CHECK(w.clock.now() == 2);
}

TEST_CASE("message field access") {
    Message m{Scheme::Improved, Phase::Issue, Dir::ToServer,
              {{"Kn", Word::from_u64(1, 4)}, {"C", Word::from_u64(2, 4)}}};
    CHECK(m.has("Kn"));
    CHECK_FALSE(m.has("CID"));
    CHECK(m.field("C").to_u64() == 2);
    CHECK_THROWS_AS((void)m.field("CID"), ProtocolError);
}

TEST_CASE("transcript serialization round-trip") {
    Config cfg;
    cfg.word_len = 8;
    World w(cfg, 3);
    improved::Server srv;
    srv.keys = improved::make_server_secrets(w);
    UserSecrets u{w.rng.word(8), w.rng.word(8), w.rng.word(8)};
    SmartCard card = improved::register_user(w, srv, u);
    auto out = improved::run_issue(w, srv, card, u);
    CHECK(out.user_token == out.server_token);

    std::string text = w.transcript.serialize();
    Transcript back = Transcript::parse(text);
    REQUIRE(back.entries.size() == w.transcript.entries.size());
    for (std::size_t i = 0; i < back.entries.size(); ++i) {
        const Message& a = w.transcript.entries[i];
        const Message& b = back.entries[i];
        CHECK(a.scheme == b.scheme);
        CHECK(a.phase == b.phase);
        CHECK(a.dir == b.dir);
        CHECK(a.sent_at == b.sent_at);
        REQUIRE(a.fields.size() == b.fields.size());
        for (std::size_t j = 0; j < a.fields.size(); ++j) {
            CHECK(a.fields[j].first == b.fields[j].first);
            CHECK(a.fields[j].second == b.fields[j].second);
        }
    }
    // Serialization is deterministic.
    CHECK(back.serialize() == text);
}

TEST_CASE("malformed transcript lines are rejected") {
    CHECK_THROWS_AS((void)Message::parse("chen issue"), ProtocolError);
    CHECK_THROWS_AS((void)Message::parse("kim issue > 0 n=00"), ProtocolError);
    CHECK_THROWS_AS((void)Message::parse("chen renewal > 0 n=00"), ProtocolError);
    CHECK_THROWS_AS((void)Message::parse("chen issue > 0 n00"), ProtocolError);
}

// Clear tokens must never ride the channel: every protocol run's wire words
// are checked against the tokens both sides ended up with.
TEST_CASE("tokens never appear on the wire") {
    for (Scheme scheme : {Scheme::Chen, Scheme::Improved}) {
        CAPTURE(scheme_name(scheme));
        Config cfg;
        World w(cfg, 11);
        UserSecrets u{w.rng.word(cfg.word_len), w.rng.word(cfg.word_len), w.rng.word(cfg.word_len)};
        std::vector<Word> tokens;
        if (scheme == Scheme::Chen) {
            chen::Server srv;
            srv.keys = chen::make_server_secrets(w);
            SmartCard card = chen::register_user(w, srv, u);
            auto issue = chen::run_issue(w, srv, card, u);
            chen::UserSession sess;
            auto subs = chen::run_subscription(w, srv, card, u, issue.user_token, &sess);
            auto hand = chen::run_handoff(w, srv, sess, subs.user_token);
            tokens = {issue.user_token, subs.user_token, hand.user_token};
        } else {
            improved::Server srv;
            srv.keys = improved::make_server_secrets(w);
            SmartCard card = improved::register_user(w, srv, u);
            auto issue = improved::run_issue(w, srv, card, u);
            improved::UserSession sess;
            auto subs = improved::run_subscription(w, srv, card, u, issue.user_token, &sess);
            auto hand = improved::run_handoff(w, srv, sess, *sess.token);
            tokens = {issue.user_token, subs.user_token, hand.user_token};
        }
        for (const Message& m : w.transcript.entries)
            for (const auto& [name, value] : m.fields)
                for (const Word& t : tokens) {
                    CAPTURE(name);
                    CHECK(value != t);
                }
    }
}
