#include "paytv/word.hpp"

namespace paytv {

const char* err_name(Err e) {
    switch (e) {
        case Err::DuplicateId: return "DuplicateId";
        case Err::AuthLocal: return "AuthLocal";
        case Err::StaleTimestamp: return "StaleTimestamp";
        case Err::ClockSkew: return "ClockSkew";
        case Err::UnknownUser: return "UnknownUser";
        case Err::MacMismatch: return "MacMismatch";
        case Err::ServerAuth: return "ServerAuth";
        case Err::TokenMismatch: return "TokenMismatch";
        case Err::MalformedMessage: return "MalformedMessage";
        case Err::BudgetExceeded: return "BudgetExceeded";
        case Err::Overflow: return "Overflow";
    }
    return "Unknown";
}

Word Word::from_bytes(std::span<const std::uint8_t> data, std::size_t width) {
    if (data.size() > width)
        fail(Err::Overflow, "value wider than word width");
    std::vector<std::uint8_t> out(width, 0);
    std::copy(data.begin(), data.end(), out.begin() + (width - data.size()));
    return Word(std::move(out));
}

Word Word::from_u64(std::uint64_t value, std::size_t width) {
    std::uint8_t buf[8];
    std::size_t n = 0;
    for (int i = 7; i >= 0; --i) {
        std::uint8_t b = static_cast<std::uint8_t>(value >> (i * 8));
        if (n == 0 && b == 0 && i != 0)
            continue;
        buf[n++] = b;
    }
    return from_bytes(std::span<const std::uint8_t>(buf, n), width);
}

std::uint64_t Word::to_u64() const {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < bytes_.size(); ++i) {
        if (bytes_[i] != 0 && bytes_.size() - i > 8)
            fail(Err::Overflow, "word value exceeds 64 bits");
        if (bytes_.size() - i <= 8)
            v = (v << 8) | bytes_[i];
    }
    return v;
}

static int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

Word Word::from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0)
        fail(Err::MalformedMessage, "odd hex string length");
    std::vector<std::uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_nibble(hex[2 * i]);
        int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0)
            fail(Err::MalformedMessage, "bad hex digit");
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return Word(std::move(out));
}

std::string Word::hex() const {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes_.size() * 2);
    for (auto b : bytes_) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

Word Word::operator^(const Word& rhs) const {
    if (bytes_.size() != rhs.bytes_.size())
        fail(Err::MalformedMessage, "xor of words with different widths");
    std::vector<std::uint8_t> out(bytes_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = bytes_[i] ^ rhs.bytes_[i];
    return Word(std::move(out));
}

static std::vector<std::uint8_t> concat_impl(const Word* first, std::size_t count) {
    if (count == 0)
        fail(Err::MalformedMessage, "concat of zero parts");
    std::size_t width = first[0].size();
    std::vector<std::uint8_t> out;
    out.reserve(width * count);
    for (std::size_t i = 0; i < count; ++i) {
        if (first[i].size() != width)
            fail(Err::MalformedMessage, "concat of words with different widths");
        out.insert(out.end(), first[i].bytes().begin(), first[i].bytes().end());
    }
    return out;
}

std::vector<std::uint8_t> concat(std::initializer_list<Word> parts) {
    return concat_impl(parts.begin(), parts.size());
}

std::vector<std::uint8_t> concat(const std::vector<Word>& parts) {
    return concat_impl(parts.data(), parts.size());
}

} // namespace paytv
