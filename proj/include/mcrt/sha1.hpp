#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <string>

namespace mcrt {

// Plain SHA-1, used to stamp experiment reports with a content hash of their
// inputs so published tables are traceable to exact parameters.
inline std::string sha1_hex(const std::string& data) {
    std::uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u,
                          0xC3D2E1F0u};

    std::string msg = data;
    const std::uint64_t bit_len = static_cast<std::uint64_t>(msg.size()) * 8;
    msg.push_back(static_cast<char>(0x80));
    while (msg.size() % 64 != 56) msg.push_back('\0');
    for (int i = 7; i >= 0; --i)
        msg.push_back(static_cast<char>((bit_len >> (8 * i)) & 0xff));

    auto rotl = [](std::uint32_t x, int k) { return (x << k) | (x >> (32 - k)); };
    for (std::size_t chunk = 0; chunk < msg.size(); chunk += 64) {
        std::uint32_t w[80];
        for (int t = 0; t < 16; ++t) {
            w[t] = (static_cast<std::uint8_t>(msg[chunk + 4 * t]) << 24) |
                   (static_cast<std::uint8_t>(msg[chunk + 4 * t + 1]) << 16) |
                   (static_cast<std::uint8_t>(msg[chunk + 4 * t + 2]) << 8) |
                   static_cast<std::uint8_t>(msg[chunk + 4 * t + 3]);
        }
        for (int t = 16; t < 80; ++t)
            w[t] = rotl(w[t - 3] ^ w[t - 8] ^ w[t - 14] ^ w[t - 16], 1);

        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int t = 0; t < 80; ++t) {
            std::uint32_t f, k;
            if (t < 20) {
                f = (b & c) | (~b & d);
                k = 0x5A827999u;
            } else if (t < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1u;
            } else if (t < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDCu;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6u;
            }
            const std::uint32_t tmp = rotl(a, 5) + f + e + k + w[t];
            e = d;
            d = c;
            c = rotl(b, 30);
            b = a;
            a = tmp;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
    }

    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(40);
    for (std::uint32_t word : h) {
        for (int i = 7; i >= 0; --i) out.push_back(digits[(word >> (4 * i)) & 0xf]);
    }
    return out;
}

} // namespace mcrt
