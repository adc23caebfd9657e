#ifndef PAYTV_WORD_HPP
#define PAYTV_WORD_HPP

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "paytv/errors.hpp"

namespace paytv {

// Fixed-width byte string. Digests, IDs, nonces, tokens and timestamps on
// the wire all share one width so they can be XORed and concatenated freely.
class Word {
public:
    Word() = default;

    // Takes the bytes verbatim; the width is the vector's size.
    explicit Word(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}

    static Word zero(std::size_t width) { return Word(std::vector<std::uint8_t>(width, 0)); }

    // Left-zero-pads shorter input; longer input is an error.
    static Word from_bytes(std::span<const std::uint8_t> data, std::size_t width);

    // Big-endian integer encoding, left-zero-padded.
    static Word from_u64(std::uint64_t value, std::size_t width);

    static Word from_hex(const std::string& hex);

    std::size_t size() const { return bytes_.size(); }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

    // Inverse of from_u64; Overflow if the value does not fit in 64 bits.
    std::uint64_t to_u64() const;

    std::string hex() const;

    Word operator^(const Word& rhs) const;

    bool operator==(const Word&) const = default;
    auto operator<=>(const Word&) const = default;

private:
    std::vector<std::uint8_t> bytes_;
};

// Fixed-width framing: each part contributes exactly its width, in order.
// All parts must share one width.
std::vector<std::uint8_t> concat(std::initializer_list<Word> parts);
std::vector<std::uint8_t> concat(const std::vector<Word>& parts);

} // namespace paytv

#endif
