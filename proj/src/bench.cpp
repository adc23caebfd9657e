#include "paytv/bench.hpp"

#include <cmath>
#include <functional>

namespace paytv::bench {

using adversary::GameResult;

PerfRow bench_counts(Scheme scheme, std::uint64_t seed) {
    Config cfg;
    World w(cfg, seed);
    UserSecrets u{w.rng.word(cfg.word_len), w.rng.word(cfg.word_len), w.rng.word(cfg.word_len)};
    PerfRow row;
    row.scheme = scheme_name(scheme);
    SmartCard card{};
    if (scheme == Scheme::Chen) {
        chen::Server srv;
        srv.keys = chen::make_server_secrets(w);
        card = chen::register_user(w, srv, u);
        chen::run_issue(w, srv, card, u);
        row.p1 = w.meter.get("chen.registration.user") + w.meter.get("chen.registration.server");
        row.p3 = w.meter.get("chen.issue.user");
        row.p3_operational = row.p3 + w.meter.get("chen.issue.card");
        row.p5 = w.meter.get("chen.issue.server");
    } else {
        improved::Server srv;
        srv.keys = improved::make_server_secrets(w);
        card = improved::register_user(w, srv, u);
        improved::run_issue(w, srv, card, u);
        row.p1 = w.meter.get("improved.registration.user") +
                 w.meter.get("improved.registration.server");
        row.p3 = w.meter.get("improved.issue.user");
        row.p3_operational = row.p3;
        row.p5 = w.meter.get("improved.issue.server");
    }
    row.p7 = (card.k ? 1 : 0) + 3; // K (Chen only), R, Q, b
    for (const Message& m : w.transcript.entries)
        if (m.phase == Phase::Issue && m.dir == Dir::ToServer)
            row.p8 = row.p8_operational = m.fields.size();
    return row;
}

std::pair<std::uint64_t, std::uint64_t> binomial_accept_region(std::uint64_t n, double p,
                                                               double alpha) {
    if (p <= 0.0) return {0, 0};
    if (p >= 1.0) return {n, n};
    double log_p = std::log(p), log_q = std::log1p(-p);
    double lp = double(n) * log_q; // log pmf at k=0
    double cdf = std::exp(lp);
    std::uint64_t lo = 0, hi = n;
    bool lo_set = cdf >= alpha / 2;
    if (lo_set) lo = 0;
    bool hi_set = cdf >= 1 - alpha / 2;
    if (hi_set) hi = 0;
    for (std::uint64_t k = 0; k < n && (!lo_set || !hi_set); ++k) {
        lp += std::log(double(n - k) / double(k + 1)) + log_p - log_q;
        cdf += std::exp(lp);
        if (!lo_set && cdf >= alpha / 2) { lo = k + 1; lo_set = true; }
        if (!hi_set && cdf >= 1 - alpha / 2) { hi = k + 1; hi_set = true; }
    }
    return {lo, hi};
}

namespace {

constexpr std::uint64_t kMatrixGuesses = 20000;
constexpr std::uint64_t kMatrixSessions = 300;

struct Actors {
    World world;
    UserSecrets u;
    SmartCard card;
    chen::Server chen_srv;
    improved::Server imp_srv;
};

Actors make_actors(Scheme scheme, std::uint64_t seed) {
    Config cfg;
    Actors a{World(cfg, seed), {}, {}, {}, {}};
    World& w = a.world;
    a.u = {w.rng.word(cfg.word_len), w.rng.word(cfg.word_len), w.rng.word(cfg.word_len)};
    if (scheme == Scheme::Chen) {
        a.chen_srv.keys = chen::make_server_secrets(w);
        a.card = chen::register_user(w, a.chen_srv, a.u);
    } else {
        a.imp_srv.keys = improved::make_server_secrets(w);
        a.card = improved::register_user(w, a.imp_srv, a.u);
    }
    return a;
}

bool rejected_with(std::function<void()> fn) {
    try {
        fn();
        return false;
    } catch (const ProtocolError&) {
        return true;
    }
}

// Login forged from a stolen card plus guessed credentials, bypassing the
// card's own check.
Message forge_chen_login(World& w, const SmartCard& card, const Word& id, const Word& pw) {
    Hasher h(w.cfg.word_len, nullptr);
    Word pwb = h({pw ^ card.b});
    Word p = card.q ^ pwb;
    Word kappa = h({pwb, id}) ^ card.r;
    Word n = w.rng.word(w.cfg.word_len);
    Word t1w = w.ts_word(w.clock.now());
    Word cid = id ^ h({kappa, t1w, n});
    Word c = h({p, cid, t1w, n});
    Word rt = card.r ^ h({kappa, n});
    return Message{Scheme::Chen, Phase::Issue, Dir::ToServer,
                   {{"Rt", rt}, {"C", c}, {"CID", cid}, {"T1", t1w}, {"n", n}}, w.clock.now()};
}

Message forge_improved_login(World& w, const SmartCard& card, const Word& id, const Word& pw) {
    Hasher h(w.cfg.word_len, nullptr);
    Word pwb = h({pw ^ card.b});
    Word n = w.rng.word(w.cfg.word_len);
    Word kn = card.q ^ pwb ^ n;
    Word t1w = w.ts_word(w.clock.now());
    Word cid = kn ^ h({kn, t1w, n});
    Word c = h({card.q, cid, t1w, n});
    return Message{Scheme::Improved, Phase::Issue, Dir::ToServer,
                   {{"Kn", kn}, {"C", c}, {"T1", t1w}, {"n", n}}, w.clock.now()};
}

SecurityCheck check_s1(Scheme scheme, std::uint64_t seed) {
    Actors a = make_actors(scheme, seed);
    World& w = a.world;
    // Stolen-card credential search at production width.
    HashMeter meter;
    Hasher h(w.cfg.word_len, &meter, "matrix.s1");
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < kMatrixGuesses; ++i) {
        Word pw = w.rng.word(w.cfg.word_len);
        Word id = w.rng.word(w.cfg.word_len);
        if (scheme == Scheme::Chen) {
            if (h({id ^ h({pw ^ a.card.b})}) == *a.card.k) ++hits;
        } else {
            if (h({h({pw ^ a.card.b}), id}) == a.card.r) ++hits;
        }
    }
    // Impersonation with the stolen card and guessed credentials.
    bool forged_rejected = rejected_with([&] {
        if (scheme == Scheme::Chen) {
            Message m = forge_chen_login(w, a.card, w.rng.word(w.cfg.word_len),
                                         w.rng.word(w.cfg.word_len));
            channel_send(w, m);
            chen::issue_respond(w, a.chen_srv, w.transcript.entries.back());
        } else {
            Message m = forge_improved_login(w, a.card, w.rng.word(w.cfg.word_len),
                                             w.rng.word(w.cfg.word_len));
            channel_send(w, m);
            improved::issue_respond(w, a.imp_srv, w.transcript.entries.back());
        }
    });
    bool pass = hits == 0 && forged_rejected;
    return {"S1", "stolen-card credential search + forged-login rejection",
            pass ? Verdict::Pass : Verdict::Fail,
            "guess hits=" + std::to_string(hits) +
                " forged_rejected=" + std::to_string(forged_rejected)};
}

SecurityCheck check_s2(Scheme scheme, std::uint64_t seed) {
    Actors a = make_actors(scheme, seed);
    World& w = a.world;
    // Rogue server (no long-term secrets) answers an honest login.
    bool rogue_rejected = rejected_with([&] {
        if (scheme == Scheme::Chen) {
            auto [sess, m1] = chen::issue_login(w, a.card, a.u.id, a.u.pw);
            channel_send(w, m1);
            Word t2w = w.ts_word(w.clock.now());
            Message m2{Scheme::Chen, Phase::Issue, Dir::ToUser,
                       {{"D", w.rng.word(w.cfg.word_len)}, {"E", w.rng.word(w.cfg.word_len)},
                        {"T2", t2w}}};
            channel_send(w, m2);
            chen::issue_finalize(w, sess, w.transcript.entries.back());
        } else {
            auto [sess, m1] = improved::issue_login(w, a.card, a.u.id, a.u.pw);
            channel_send(w, m1);
            Word t2w = w.ts_word(w.clock.now());
            Message m2{Scheme::Improved, Phase::Issue, Dir::ToUser,
                       {{"D", w.rng.word(w.cfg.word_len)}, {"E", w.rng.word(w.cfg.word_len)},
                        {"T2", t2w}}};
            channel_send(w, m2);
            improved::issue_finalize(w, sess, w.transcript.entries.back());
        }
    });
    // Identity search from a stolen improved record (Chen's record holds the
    // clear ID but its verifier resistance is the rogue-response check).
    std::uint64_t hits = 0;
    if (scheme == Scheme::Improved) {
        auto inst = adversary::make_alg6_instance(64, w.cfg.word_len, seed + 17);
        hits = adversary::run_alg6(inst, kMatrixGuesses, seed + 18).successes;
    }
    bool pass = rogue_rejected && hits == 0;
    return {"S2", "rogue-server response rejection + stolen-record identity search",
            pass ? Verdict::Pass : Verdict::Fail,
            "rogue_rejected=" + std::to_string(rogue_rejected) + " record hits=" +
                std::to_string(hits)};
}

SecurityCheck check_s3(Scheme scheme, std::uint64_t seed) {
    Actors a = make_actors(scheme, seed);
    World& w = a.world;
    auto chen_db = a.chen_srv.db;
    auto imp_db = a.imp_srv.db;
    std::uint64_t rejected = 0;
    const std::uint64_t floods = 50;
    for (std::uint64_t i = 0; i < floods; ++i) {
        bool stale = i % 2 == 0;
        if (stale) w.clock.advance(w.cfg.delta_t + 1);
        Message junk;
        junk.scheme = scheme;
        junk.phase = Phase::Issue;
        junk.dir = Dir::ToServer;
        // Even entries: honest-looking but expired; odd entries: fresh but
        // with random contents, so the deeper checks have to fire.
        Word t1w = stale ? Word::from_u64(0, w.cfg.word_len) : w.ts_word(w.clock.now());
        if (scheme == Scheme::Chen)
            junk.fields = {{"Rt", w.rng.word(w.cfg.word_len)}, {"C", w.rng.word(w.cfg.word_len)},
                           {"CID", w.rng.word(w.cfg.word_len)}, {"T1", t1w},
                           {"n", w.rng.word(w.cfg.word_len)}};
        else
            junk.fields = {{"Kn", w.rng.word(w.cfg.word_len)}, {"C", w.rng.word(w.cfg.word_len)},
                           {"T1", t1w}, {"n", w.rng.word(w.cfg.word_len)}};
        if (rejected_with([&] {
                if (scheme == Scheme::Chen)
                    chen::issue_respond(w, a.chen_srv, junk);
                else
                    improved::issue_respond(w, a.imp_srv, junk);
            }))
            ++rejected;
    }
    bool state_intact = scheme == Scheme::Chen ? a.chen_srv.db == chen_db
                                               : a.imp_srv.db == imp_db;
    // Service still works after the flood.
    bool still_serves = !rejected_with([&] {
        if (scheme == Scheme::Chen)
            chen::run_issue(w, a.chen_srv, a.card, a.u);
        else
            improved::run_issue(w, a.imp_srv, a.card, a.u);
    });
    bool pass = rejected == floods && state_intact && still_serves;
    return {"S3", "malformed/stale flood rejection with intact state",
            pass ? Verdict::Pass : Verdict::Fail,
            "rejected=" + std::to_string(rejected) + "/" + std::to_string(floods) +
                " state_intact=" + std::to_string(state_intact) +
                " still_serves=" + std::to_string(still_serves)};
}

// True when the clear ID appears as no field and no two-field XOR of any
// request on the transcript.
bool id_absent(const Transcript& t, const Word& id) {
    for (const Message& m : t.entries) {
        if (m.phase == Phase::Registration) continue;
        for (std::size_t i = 0; i < m.fields.size(); ++i) {
            if (m.fields[i].second == id) return false;
            for (std::size_t j = i + 1; j < m.fields.size(); ++j)
                if ((m.fields[i].second ^ m.fields[j].second) == id) return false;
        }
    }
    return true;
}

SecurityCheck check_s4(Scheme scheme, std::uint64_t seed) {
    GameResult alg1 = adversary::alg1_campaign(scheme, kMatrixSessions, seed);
    bool scan_ok = true;
    if (scheme == Scheme::Improved) {
        Actors a = make_actors(scheme, seed + 5);
        World& w = a.world;
        auto out = improved::run_issue(w, a.imp_srv, a.card, a.u);
        improved::UserSession sess;
        improved::run_subscription(w, a.imp_srv, a.card, a.u, out.user_token, &sess);
        improved::run_handoff(w, a.imp_srv, sess, *sess.token);
        scan_ok = id_absent(w.transcript, a.u.id);
    }
    bool pass = alg1.successes == 0 && scan_ok;
    return {"S4", "insider ID recovery rate + transcript ID-absence scan",
            pass ? Verdict::Pass : Verdict::Fail,
            "alg1 rate=" + std::to_string(alg1.rate()) + " id_absent=" + std::to_string(scan_ok)};
}

SecurityCheck check_s5(Scheme scheme, std::uint64_t seed) {
    auto rep = adversary::alg2_campaign(scheme, true, 30, kMatrixSessions, seed);
    bool pass = rep.same_user.successes == 0 && rep.cross_user.successes == 0;
    return {"S5", "cross-session linkage with the shared keying value",
            pass ? Verdict::Pass : Verdict::Fail,
            "same_user rate=" + std::to_string(rep.same_user.rate()) +
                " false_link rate=" + std::to_string(rep.cross_user.rate())};
}

SecurityCheck check_s6(Scheme scheme, std::uint64_t seed) {
    // Server-to-user direction: tampered D must be caught by the user.
    Actors a = make_actors(scheme, seed);
    World& w = a.world;
    bool d_caught, c_caught;
    if (scheme == Scheme::Chen) {
        auto [sess, m1] = chen::issue_login(w, a.card, a.u.id, a.u.pw);
        channel_send(w, m1);
        auto [m2, tok] = chen::issue_respond(w, a.chen_srv, w.transcript.entries.back());
        m2.fields[0].second = m2.fields[0].second ^ Word::from_u64(1, w.cfg.word_len);
        channel_send(w, m2);
        d_caught = rejected_with([&] { chen::issue_finalize(w, sess, w.transcript.entries.back()); });
        auto [sess2, m1b] = chen::issue_login(w, a.card, a.u.id, a.u.pw);
        m1b.fields[1].second = m1b.fields[1].second ^ Word::from_u64(1, w.cfg.word_len);
        channel_send(w, m1b);
        c_caught = rejected_with([&] { chen::issue_respond(w, a.chen_srv, w.transcript.entries.back()); });
    } else {
        auto [sess, m1] = improved::issue_login(w, a.card, a.u.id, a.u.pw);
        channel_send(w, m1);
        auto [m2, tok] = improved::issue_respond(w, a.imp_srv, w.transcript.entries.back());
        m2.fields[0].second = m2.fields[0].second ^ Word::from_u64(1, w.cfg.word_len);
        channel_send(w, m2);
        d_caught = rejected_with([&] { improved::issue_finalize(w, sess, w.transcript.entries.back()); });
        auto [sess2, m1b] = improved::issue_login(w, a.card, a.u.id, a.u.pw);
        m1b.fields[1].second = m1b.fields[1].second ^ Word::from_u64(1, w.cfg.word_len);
        channel_send(w, m1b);
        c_caught = rejected_with([&] { improved::issue_respond(w, a.imp_srv, w.transcript.entries.back()); });
    }
    bool pass = d_caught && c_caught;
    return {"S6", "both-direction authenticator tamper detection",
            pass ? Verdict::Pass : Verdict::Fail,
            "server_auth_caught=" + std::to_string(d_caught) +
                " user_auth_caught=" + std::to_string(c_caught)};
}

SecurityCheck check_s7(Scheme scheme, std::uint64_t seed) {
    if (scheme == Scheme::Chen) {
        GameResult alg1 = adversary::alg1_campaign(Scheme::Chen, kMatrixSessions, seed);
        bool pass = alg1.successes < alg1.trials; // insider recovers every ID: fail
        return {"S7", "privilege-insider ID recovery (Algorithm 1 posture)",
                pass ? Verdict::Pass : Verdict::Fail,
                "alg1 rate=" + std::to_string(alg1.rate())};
    }
    auto inst = adversary::make_alg6_instance(64, Config{}.word_len, seed + 7);
    GameResult g = adversary::run_alg6(inst, kMatrixGuesses, seed + 8);
    bool pass = g.successes == 0;
    return {"S7", "malicious-server identity search (Algorithm 6 posture)",
            pass ? Verdict::Pass : Verdict::Fail, "alg6 hits=" + std::to_string(g.successes)};
}

} // namespace

std::vector<SecurityMatrixRow> security_matrix(std::uint64_t seed) {
    std::vector<SecurityMatrixRow> rows;
    for (Scheme scheme : {Scheme::Chen, Scheme::Improved}) {
        SecurityMatrixRow row;
        row.scheme = scheme_name(scheme);
        row.checks.push_back(check_s1(scheme, seed + 1));
        row.checks.push_back(check_s2(scheme, seed + 2));
        row.checks.push_back(check_s3(scheme, seed + 3));
        row.checks.push_back(check_s4(scheme, seed + 4));
        row.checks.push_back(check_s5(scheme, seed + 5));
        row.checks.push_back(check_s6(scheme, seed + 6));
        row.checks.push_back(check_s7(scheme, seed + 7));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace paytv::bench
