#ifndef WIRETAP2_CODEC_HPP
#define WIRETAP2_CODEC_HPP

#include "wiretap2/gf.hpp"
#include "wiretap2/synth.hpp"

#include <algorithm>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wiretap2 {

struct MessageWord {
    gf::Vector symbols;
    friend bool operator==(const MessageWord&, const MessageWord&) = default;
};

struct KeyWord {
    gf::Vector symbols;
    friend bool operator==(const KeyWord&, const KeyWord&) = default;
};

struct ChannelWord {
    gf::Vector symbols;
    friend bool operator==(const ChannelWord&, const ChannelWord&) = default;
};

namespace detail {

inline void check_symbols(const gf::Field& field, const gf::Vector& v, std::size_t expected, const char* what) {
    if (v.size() != expected) {
        throw DimensionMismatch(std::string(what) + " has " + std::to_string(v.size()) + " symbols, expected " +
                                std::to_string(expected));
    }
    for (auto e : v) {
        if (!field.contains(e)) throw DimensionMismatch(std::string(what) + " symbol " + std::to_string(e) + " outside the field");
    }
}

}  // namespace detail

inline ChannelWord encode(const LinearCode& code, const MessageWord& m, const KeyWord& k) {
    detail::check_symbols(code.field, m.symbols, code.message_length(), "message");
    detail::check_symbols(code.field, k.symbols, code.key_length(), "key");
    gf::Vector input = m.symbols;
    input.insert(input.end(), k.symbols.begin(), k.symbols.end());
    return {gf::multiply(code.field, code.generator, input)};
}

namespace detail {

/// decode() without allocation; m and k must already have the right sizes.
inline void decode_into(const LinearCode& code, std::span<const gf::Element> x, gf::Vector& m, gf::Vector& k) {
    const std::size_t n_m = code.message_length();
    const std::size_t n_k = code.key_length();
    const std::size_t cols = code.generator.cols;
    const auto& f = code.field;
    const gf::Element* g = code.generator.entries.data();
    const gf::Element* in = x.data();
    gf::Element* key = k.data();
    gf::Element* msg = m.data();
    std::copy(in, in + n_k, key);
    const gf::Element* table = f.mul_table();
    if (f.characteristic() == 2 && table) {
        // Coefficients are packed bitwise, so addition is XOR.
        const std::size_t q = f.size();
        for (std::size_t t = 0; t < n_m; ++t) {
            const gf::Element* b = g + (n_k + t) * cols + n_m;
            gf::Element mask = 0;
            for (std::size_t s = 0; s < n_k; ++s) mask ^= table[b[s] * q + key[s]];
            msg[t] = in[n_k + t] ^ mask;
        }
        return;
    }
    for (std::size_t t = 0; t < n_m; ++t) {
        const gf::Element* b = g + (n_k + t) * cols + n_m;
        gf::Element mask = 0;
        for (std::size_t s = 0; s < n_k; ++s) {
            if (b[s] && key[s]) mask = f.add(mask, f.mul(b[s], key[s]));
        }
        msg[t] = f.sub(in[n_k + t], mask);
    }
}

}  // namespace detail

/// Reads k from the clear key positions, then unmasks m_t = x_{n_K+t} - b . k.
inline std::pair<MessageWord, KeyWord> decode(const LinearCode& code, const ChannelWord& x) {
    detail::check_symbols(code.field, x.symbols, code.length(), "channel word");
    MessageWord m{gf::Vector(code.message_length())};
    KeyWord k{gf::Vector(code.key_length())};
    detail::decode_into(code, x.symbols, m.symbols, k.symbols);
    return {std::move(m), std::move(k)};
}

/// Uniform key from a caller-owned generator.
template <typename Rng>
KeyWord random_key(const LinearCode& code, Rng& rng) {
    std::uniform_int_distribution<gf::Element> pick(0, code.field.size() - 1);
    KeyWord k{gf::Vector(code.key_length())};
    for (auto& e : k.symbols) e = pick(rng);
    return k;
}

template <typename Rng>
MessageWord random_message(const LinearCode& code, Rng& rng) {
    std::uniform_int_distribution<gf::Element> pick(0, code.field.size() - 1);
    MessageWord m{gf::Vector(code.message_length())};
    for (auto& e : m.symbols) e = pick(rng);
    return m;
}

/// Symbols of a channel word split by channel.
inline std::vector<gf::Vector> split_by_channel(const LinearCode& code, const ChannelWord& x) {
    std::vector<gf::Vector> out;
    for (const auto& span : code.channel_layout) {
        out.emplace_back(x.symbols.begin() + static_cast<std::ptrdiff_t>(span.first),
                         x.symbols.begin() + static_cast<std::ptrdiff_t>(span.first + span.count));
    }
    return out;
}

}  // namespace wiretap2

#endif  // WIRETAP2_CODEC_HPP
