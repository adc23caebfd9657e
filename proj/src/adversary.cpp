#include "paytv/adversary.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace paytv::adversary {

Word alg1_recover_id(const Message& m1, const Word& kappa, Hasher& h) {
    const Word* cid = nullptr;
    if (m1.has("CID"))
        cid = &m1.field("CID");
    else if (m1.has("Kn"))
        cid = &m1.field("Kn"); // the only pseudonym-shaped slot improved traffic offers
    else
        fail(Err::MalformedMessage, "no pseudonym-bearing field");
    if (!m1.has("T1") || !m1.has("n"))
        fail(Err::MalformedMessage, "missing T1 or n");
    return *cid ^ h({kappa, m1.field("T1"), m1.field("n")});
}

namespace {

struct HonestIssue {
    Word id;
    Word kappa; // shared HES keying value (h(y))
    Message m1;
    std::size_t word_len;
};

HonestIssue honest_issue(Scheme scheme, std::uint64_t seed) {
    Config cfg;
    World w(cfg, seed);
    UserSecrets u{w.rng.word(cfg.word_len), w.rng.word(cfg.word_len), w.rng.word(cfg.word_len)};
    if (scheme == Scheme::Chen) {
        chen::Server srv;
        srv.keys = chen::make_server_secrets(w);
        SmartCard card = chen::register_user(w, srv, u);
        auto [sess, m1] = chen::issue_login(w, card, u.id, u.pw);
        channel_send(w, m1);
        return {u.id, srv.keys.hy, w.transcript.entries.back(), cfg.word_len};
    }
    improved::Server srv;
    srv.keys = improved::make_server_secrets(w);
    SmartCard card = improved::register_user(w, srv, u);
    auto [sess, m1] = improved::issue_login(w, card, u.id, u.pw);
    channel_send(w, m1);
    return {u.id, srv.keys.hy, w.transcript.entries.back(), cfg.word_len};
}

// Deterministic trial fan-out: trial i owns RNG stream fork(i) and a local
// meter; results reduce by summation, so serial and parallel agree bit for
// bit.
template <class Trial>
GameResult run_trials(std::uint64_t trials, Exec exec, Trial&& trial) {
    GameResult out;
    out.trials = trials;
    std::uint64_t successes = 0, budget = 0;
    if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : successes, budget)
#endif
        for (long long i = 0; i < (long long)trials; ++i) {
            HashMeter meter;
            if (trial((std::uint64_t)i, meter)) ++successes;
            budget += meter.total();
        }
    } else {
        for (std::uint64_t i = 0; i < trials; ++i) {
            HashMeter meter;
            if (trial(i, meter)) ++successes;
            budget += meter.total();
        }
    }
    out.successes = successes;
    out.budget_used = budget;
    return out;
}

} // namespace

GameResult alg1_campaign(Scheme scheme, std::uint64_t sessions, std::uint64_t seed, Exec exec) {
    return run_trials(sessions, exec, [&](std::uint64_t i, HashMeter& meter) {
        HonestIssue run = honest_issue(scheme, Rng(seed).fork(i).next());
        Hasher h(run.word_len, &meter, "adversary.alg1");
        return alg1_recover_id(run.m1, run.kappa, h) == run.id;
    });
}

bool alg2_trace(PseudonymStore& store, const Word& y_star, const Message& m1, Hasher& h) {
    Word pseudonym = alg1_recover_id(m1, y_star, h);
    if (store.entries.count(pseudonym))
        return true;
    store.entries.insert(pseudonym);
    return false;
}

Alg2Report alg2_campaign(Scheme scheme, bool use_kappa, std::uint64_t users,
                         std::uint64_t sessions, std::uint64_t seed) {
    Config cfg;
    World w(cfg, seed);
    Word kappa;
    std::vector<UserSecrets> secrets;
    std::vector<SmartCard> cards;
    chen::Server chen_srv;
    improved::Server imp_srv;
    if (scheme == Scheme::Chen) {
        chen_srv.keys = chen::make_server_secrets(w);
        kappa = chen_srv.keys.hy;
    } else {
        imp_srv.keys = improved::make_server_secrets(w);
        kappa = imp_srv.keys.hy;
    }
    for (std::uint64_t i = 0; i < users; ++i) {
        UserSecrets u{w.rng.word(cfg.word_len), w.rng.word(cfg.word_len), w.rng.word(cfg.word_len)};
        cards.push_back(scheme == Scheme::Chen ? chen::register_user(w, chen_srv, u)
                                               : improved::register_user(w, imp_srv, u));
        secrets.push_back(u);
    }

    Word y_star = use_kappa ? kappa : w.rng.word(cfg.word_len);
    PseudonymStore store;
    HashMeter meter;
    Hasher h(cfg.word_len, &meter, "adversary.alg2");
    Alg2Report rep;
    std::vector<bool> seen_before(users, false);
    for (std::uint64_t s = 0; s < sessions; ++s) {
        std::uint64_t u = s % users;
        if (scheme == Scheme::Chen) {
            auto [sess, m1] = chen::issue_login(w, cards[u], secrets[u].id, secrets[u].pw);
            channel_send(w, m1);
        } else {
            auto [sess, m1] = improved::issue_login(w, cards[u], secrets[u].id, secrets[u].pw);
            channel_send(w, m1);
        }
        bool linked = alg2_trace(store, y_star, w.transcript.entries.back(), h);
        if (seen_before[u]) {
            ++rep.same_user.trials;
            if (linked) ++rep.same_user.successes;
        } else {
            ++rep.cross_user.trials;
            if (linked) ++rep.cross_user.successes;
            seen_before[u] = true;
        }
    }
    rep.same_user.budget_used = rep.cross_user.budget_used = meter.total();
    return rep;
}

// --- instance builders ------------------------------------------------------

namespace {

struct ImprovedWorld {
    World world;
    improved::Server srv;
    UserSecrets u;
    SmartCard card;
    Message m1;
};

ImprovedWorld toy_improved_issue(unsigned id_bits, unsigned x_bits, unsigned pw_bits,
                                 unsigned b_bits, std::size_t word_len, std::uint64_t seed) {
    // "Full-width" don't-care secrets still have to fit the word.
    unsigned cap = word_len >= 8 ? 64 : unsigned(word_len) * 8;
    id_bits = std::min(id_bits, cap);
    x_bits = std::min(x_bits, cap);
    pw_bits = std::min(pw_bits, cap);
    b_bits = std::min(b_bits, cap);
    Config cfg;
    cfg.word_len = word_len;
    ImprovedWorld out{World(cfg, seed), {}, {}, {}, {}};
    World& w = out.world;
    out.srv.keys.x = w.rng.value(x_bits, word_len);
    out.srv.keys.y = w.rng.word(word_len);
    out.srv.keys.hy = hash_to_word(out.srv.keys.y.bytes(), word_len);
    out.u = {w.rng.value(id_bits, word_len), w.rng.value(pw_bits, word_len),
             w.rng.value(b_bits, word_len)};
    out.card = improved::register_user(w, out.srv, out.u);
    auto [sess, m1] = improved::issue_login(w, out.card, out.u.id, out.u.pw);
    channel_send(w, m1);
    out.m1 = w.transcript.entries.back();
    return out;
}

} // namespace

Alg3Instance make_alg3_instance(ToyWidths tw, std::size_t word_len, std::uint64_t seed) {
    auto run = toy_improved_issue(tw.id_bits, tw.x_bits, tw.pw_bits, tw.b_bits, word_len, seed);
    Alg3Instance inst;
    inst.widths = tw;
    inst.word_len = word_len;
    inst.target = run.m1.field("Kn") ^ run.m1.field("n");
    inst.true_id = run.u.id;
    inst.true_x = run.srv.keys.x;
    inst.true_pw = run.u.pw;
    inst.true_b = run.u.b;
    return inst;
}

Alg4Instance make_alg4_instance(unsigned pw_bits, unsigned id_bits, std::size_t word_len,
                                std::uint64_t seed) {
    auto run = toy_improved_issue(id_bits, 64, pw_bits, 64, word_len, seed);
    return {pw_bits, id_bits, word_len, run.card.r, run.card.b, run.u.pw, run.u.id};
}

Alg5Instance make_alg5_instance(unsigned id_bits, std::size_t word_len, std::uint64_t seed) {
    auto run = toy_improved_issue(id_bits, 64, 64, 64, word_len, seed);
    return {id_bits, word_len, run.card.q, run.card.b, run.srv.keys.x, run.u.pw, run.u.id};
}

Alg6Instance make_alg6_instance(unsigned id_bits, std::size_t word_len, std::uint64_t seed) {
    auto run = toy_improved_issue(id_bits, 64, 64, 64, word_len, seed);
    const improved::Record& rec = run.srv.db.begin()->second;
    Alg6Instance inst;
    inst.id_bits = id_bits;
    inst.word_len = word_len;
    inst.q = rec.q;
    inst.r = rec.r;
    inst.lookup_key = rec.lookup_key;
    inst.x = run.srv.keys.x;
    inst.pwb = rec.lookup_key ^ rec.q; // line 4
    inst.true_id = run.u.id;
    return inst;
}

// --- acceptance predicates --------------------------------------------------

bool alg3_accepts(const Alg3Instance& inst, const Word& id, const Word& x, const Word& pw,
                  const Word& b, Hasher& h) {
    // Line 4 as printed: the password-blind term is computed on both sides
    // of the XOR.
    Word guess = h({id, x}) ^ h({pw ^ b}) ^ h({pw ^ b});
    return guess == inst.target;
}

bool alg4_accepts(const Alg4Instance& inst, const Word& pw, const Word& id, Hasher& h) {
    return h({h({pw ^ inst.b}), id}) == inst.r;
}

bool alg5_accepts(const Alg5Instance& inst, const Word& id, Hasher& h) {
    return (h({id, inst.x}) ^ h({inst.pw ^ inst.b})) == inst.q;
}

bool alg6_accepts(const Alg6Instance& inst, const Word& id, Hasher& h) {
    Word q_star = h({id, inst.x}) ^ inst.pwb;
    Word r_star = h({inst.pwb, id});
    return q_star == inst.q || r_star == inst.r;
}

namespace {

void check_cap(std::uint64_t guesses, std::uint64_t cap) {
    if (guesses > cap)
        fail(Err::BudgetExceeded, "guess budget exceeds configured cap");
}

} // namespace

GameResult run_alg3(const Alg3Instance& inst, std::uint64_t guesses, std::uint64_t seed,
                    Exec exec, std::uint64_t cap) {
    check_cap(guesses, cap);
    return run_trials(guesses, exec, [&](std::uint64_t i, HashMeter& meter) {
        Rng r = Rng(seed).fork(i);
        Hasher h(inst.word_len, &meter, "adversary.alg3");
        return alg3_accepts(inst, r.value(inst.widths.id_bits, inst.word_len),
                            r.value(inst.widths.x_bits, inst.word_len),
                            r.value(inst.widths.pw_bits, inst.word_len),
                            r.value(inst.widths.b_bits, inst.word_len), h);
    });
}

GameResult run_alg4(const Alg4Instance& inst, std::uint64_t guesses, std::uint64_t seed,
                    Exec exec, std::uint64_t cap) {
    check_cap(guesses, cap);
    return run_trials(guesses, exec, [&](std::uint64_t i, HashMeter& meter) {
        Rng r = Rng(seed).fork(i);
        Hasher h(inst.word_len, &meter, "adversary.alg4");
        return alg4_accepts(inst, r.value(inst.pw_bits, inst.word_len),
                            r.value(inst.id_bits, inst.word_len), h);
    });
}

GameResult run_alg5(const Alg5Instance& inst, std::uint64_t guesses, std::uint64_t seed,
                    Exec exec, std::uint64_t cap) {
    check_cap(guesses, cap);
    return run_trials(guesses, exec, [&](std::uint64_t i, HashMeter& meter) {
        Rng r = Rng(seed).fork(i);
        Hasher h(inst.word_len, &meter, "adversary.alg5");
        return alg5_accepts(inst, r.value(inst.id_bits, inst.word_len), h);
    });
}

GameResult run_alg6(const Alg6Instance& inst, std::uint64_t guesses, std::uint64_t seed,
                    Exec exec, std::uint64_t cap) {
    check_cap(guesses, cap);
    return run_trials(guesses, exec, [&](std::uint64_t i, HashMeter& meter) {
        Rng r = Rng(seed).fork(i);
        Hasher h(inst.word_len, &meter, "adversary.alg6");
        return alg6_accepts(inst, r.value(inst.id_bits, inst.word_len), h);
    });
}

// --- replay -----------------------------------------------------------------

namespace {

template <class Respond>
ReplayReport replay_impl(const Transcript& transcript, const Config& cfg, Ticks offset,
                         Respond&& respond) {
    ReplayReport rep;
    for (const Message& m : transcript.entries) {
        if (m.dir != Dir::ToServer || m.phase == Phase::Registration)
            continue;
        World rw(cfg, 0x5eed0ff5e7ull + rep.outcomes.size());
        rw.clock.advance(m.sent_at + offset + 1); // original one-tick travel time
        ReplayOutcome out{m.phase, false, {}};
        try {
            respond(rw, m);
            out.accepted = true;
        } catch (const ProtocolError& e) {
            out.error = e.code();
        }
        ++rep.summary.trials;
        if (out.accepted) ++rep.summary.successes;
        rep.summary.budget_used += rw.meter.total();
        rep.outcomes.push_back(out);
    }
    return rep;
}

} // namespace

ReplayReport replay_harness(const Transcript& transcript, chen::Server& server,
                            const Config& cfg, Ticks offset) {
    return replay_impl(transcript, cfg, offset, [&](World& rw, const Message& m) {
        switch (m.phase) {
            case Phase::Issue: chen::issue_respond(rw, server, m); break;
            case Phase::Subscription: chen::subscribe_respond(rw, server, m); break;
            case Phase::Handoff: chen::handoff_respond(rw, server, m); break;
            default: break;
        }
    });
}

ReplayReport replay_harness(const Transcript& transcript, improved::Server& server,
                            const Config& cfg, Ticks offset) {
    return replay_impl(transcript, cfg, offset, [&](World& rw, const Message& m) {
        switch (m.phase) {
            case Phase::Issue: improved::issue_respond(rw, server, m); break;
            case Phase::Subscription: improved::subscribe_respond(rw, server, m); break;
            case Phase::Handoff: improved::handoff_respond(rw, server, m); break;
            default: break;
        }
    });
}

} // namespace paytv::adversary
