#include "paytv/hash.hpp"

#include <openssl/evp.h>

namespace paytv {

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data) {
    std::array<std::uint8_t, 32> out{};
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr);
    return out;
}

Word hash_to_word(std::span<const std::uint8_t> data, std::size_t width) {
    std::vector<std::uint8_t> out;
    out.reserve(width);
    if (width <= 32) {
        auto d = sha256(data);
        out.assign(d.begin(), d.begin() + width);
    } else {
        // Counter-suffixed blocks for widths beyond one digest.
        std::vector<std::uint8_t> block(data.begin(), data.end());
        block.push_back(0);
        for (std::uint8_t ctr = 0; out.size() < width; ++ctr) {
            block.back() = ctr;
            auto d = sha256(block);
            std::size_t take = std::min<std::size_t>(32, width - out.size());
            out.insert(out.end(), d.begin(), d.begin() + take);
        }
    }
    return Word(std::move(out));
}

} // namespace paytv
