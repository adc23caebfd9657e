#include "paytv/oracle.hpp"

namespace paytv::oracle {

namespace {

// Straight-line digest helper: big-endian encode each value into width
// bytes, append, hash, truncate. Deliberately separate from Word/Hasher.
std::vector<std::uint8_t> be_word(std::uint64_t v, std::size_t width) {
    std::vector<std::uint8_t> out(width, 0);
    for (std::size_t i = 0; i < width && i < 8; ++i)
        out[width - 1 - i] = static_cast<std::uint8_t>(v >> (i * 8));
    return out;
}

std::vector<std::uint8_t> trunc_hash(const std::vector<std::uint8_t>& data, std::size_t width) {
    auto d = sha256(data);
    return std::vector<std::uint8_t>(d.begin(), d.begin() + width);
}

std::vector<std::uint8_t> cat(const std::vector<std::uint8_t>& a,
                              const std::vector<std::uint8_t>& b) {
    std::vector<std::uint8_t> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

std::vector<std::uint8_t> bxor(std::vector<std::uint8_t> a, const std::vector<std::uint8_t>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
    return a;
}

void check_universe(std::uint64_t universe, std::uint64_t cap) {
    if (universe > cap)
        fail(Err::BudgetExceeded, "enumeration universe exceeds the cap");
}

} // namespace

bool accepts_alg3(const Alg3Instance& inst, std::uint64_t id, std::uint64_t x, std::uint64_t pw,
                  std::uint64_t b) {
    std::size_t L = inst.word_len;
    auto h_idx = trunc_hash(cat(be_word(id, L), be_word(x, L)), L);
    auto h_pwb = trunc_hash(bxor(be_word(pw, L), be_word(b, L)), L);
    auto h_pwb2 = trunc_hash(bxor(be_word(pw, L), be_word(b, L)), L);
    auto lhs = bxor(bxor(h_idx, h_pwb), h_pwb2);
    return lhs == inst.target.bytes();
}

bool accepts_alg4(const Alg4Instance& inst, std::uint64_t pw, std::uint64_t id) {
    std::size_t L = inst.word_len;
    auto inner = trunc_hash(bxor(be_word(pw, L), inst.b.bytes()), L);
    auto outer = trunc_hash(cat(inner, be_word(id, L)), L);
    return outer == inst.r.bytes();
}

bool accepts_alg5(const Alg5Instance& inst, std::uint64_t id) {
    std::size_t L = inst.word_len;
    auto h_idx = trunc_hash(cat(be_word(id, L), inst.x.bytes()), L);
    auto h_pwb = trunc_hash(bxor(inst.pw.bytes(), inst.b.bytes()), L);
    return bxor(h_idx, h_pwb) == inst.q.bytes();
}

bool accepts_alg6(const Alg6Instance& inst, std::uint64_t id) {
    std::size_t L = inst.word_len;
    auto q_star = bxor(trunc_hash(cat(be_word(id, L), inst.x.bytes()), L), inst.pwb.bytes());
    auto r_star = trunc_hash(cat(inst.pwb.bytes(), be_word(id, L)), L);
    return q_star == inst.q.bytes() || r_star == inst.r.bytes();
}

Enumeration enumerate_alg3(const Alg3Instance& inst, std::uint64_t cap) {
    const auto& tw = inst.widths;
    Enumeration e;
    e.universe = 1ull << (tw.id_bits + tw.x_bits + tw.pw_bits + tw.b_bits);
    check_universe(e.universe, cap);
    std::uint64_t tid = inst.true_id.to_u64(), tx = inst.true_x.to_u64();
    for (std::uint64_t id = 0; id < (1ull << tw.id_bits); ++id)
        for (std::uint64_t x = 0; x < (1ull << tw.x_bits); ++x)
            for (std::uint64_t pw = 0; pw < (1ull << tw.pw_bits); ++pw)
                for (std::uint64_t b = 0; b < (1ull << tw.b_bits); ++b)
                    if (accepts_alg3(inst, id, x, pw, b)) {
                        e.accepting.push_back({id, x, pw, b});
                        if (id != tid || x != tx) ++e.collisions;
                        if (id == tid && x == tx && pw == inst.true_pw.to_u64() &&
                            b == inst.true_b.to_u64())
                            e.contains_planted = true;
                    }
    return e;
}

Enumeration enumerate_alg4(const Alg4Instance& inst, std::uint64_t cap) {
    Enumeration e;
    e.universe = 1ull << (inst.pw_bits + inst.id_bits);
    check_universe(e.universe, cap);
    std::uint64_t tpw = inst.true_pw.to_u64(), tid = inst.true_id.to_u64();
    for (std::uint64_t pw = 0; pw < (1ull << inst.pw_bits); ++pw)
        for (std::uint64_t id = 0; id < (1ull << inst.id_bits); ++id)
            if (accepts_alg4(inst, pw, id)) {
                e.accepting.push_back({pw, id, 0, 0});
                if (pw != tpw || id != tid) ++e.collisions;
                else e.contains_planted = true;
            }
    return e;
}

Enumeration enumerate_alg5(const Alg5Instance& inst, std::uint64_t cap) {
    Enumeration e;
    e.universe = 1ull << inst.id_bits;
    check_universe(e.universe, cap);
    std::uint64_t tid = inst.true_id.to_u64();
    for (std::uint64_t id = 0; id < (1ull << inst.id_bits); ++id)
        if (accepts_alg5(inst, id)) {
            e.accepting.push_back({id, 0, 0, 0});
            if (id != tid) ++e.collisions;
            else e.contains_planted = true;
        }
    return e;
}

Enumeration enumerate_alg6(const Alg6Instance& inst, std::uint64_t cap) {
    Enumeration e;
    e.universe = 1ull << inst.id_bits;
    check_universe(e.universe, cap);
    std::uint64_t tid = inst.true_id.to_u64();
    for (std::uint64_t id = 0; id < (1ull << inst.id_bits); ++id)
        if (accepts_alg6(inst, id)) {
            e.accepting.push_back({id, 0, 0, 0});
            if (id != tid) ++e.collisions;
            else e.contains_planted = true;
        }
    return e;
}

} // namespace paytv::oracle
