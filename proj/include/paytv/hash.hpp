#ifndef PAYTV_HASH_HPP
#define PAYTV_HASH_HPP

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "paytv/word.hpp"

namespace paytv {

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);

// h(.) instantiated as SHA-256, truncated to the word width, or expanded
// with a counter suffix for widths above 32 bytes.
Word hash_to_word(std::span<const std::uint8_t> data, std::size_t width);

// Per-(scheme, phase, role) hash invocation counter. Scopes are dotted
// labels such as "chen.issue.user". Never decremented.
struct HashMeter {
    std::map<std::string, std::uint64_t> counts;

    std::uint64_t get(const std::string& scope) const {
        auto it = counts.find(scope);
        return it == counts.end() ? 0 : it->second;
    }

    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (const auto& [_, c] : counts) t += c;
        return t;
    }
};

// Metered hash handle bound to one attribution scope. The meter pointer may
// be null for unattributed use (adversary inner loops run their own meters).
class Hasher {
public:
    Hasher(std::size_t width, HashMeter* meter, std::string scope = "unattributed")
        : width_(width), meter_(meter), scope_(std::move(scope)) {}

    std::size_t width() const { return width_; }
    const std::string& scope() const { return scope_; }

    Word operator()(std::span<const std::uint8_t> data) const {
        if (data.empty())
            fail(Err::MalformedMessage, "hash of empty input");
        if (meter_) ++meter_->counts[scope_];
        return hash_to_word(data, width_);
    }

    Word operator()(std::initializer_list<Word> parts) const {
        auto data = concat(parts);
        return (*this)(std::span<const std::uint8_t>(data));
    }

private:
    std::size_t width_;
    HashMeter* meter_;
    std::string scope_;
};

} // namespace paytv

#endif
