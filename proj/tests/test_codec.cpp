#include "wiretap2/codec.hpp"
#include "wiretap2/synth.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace wiretap2;

namespace {

LinearCode pad_code() {
    const ProblemInstance inst(3, {1, 1}, {{0}, {1}});
    return synthesize(inst, {1, 1, 1, {1, 1}, {0, 0}, {1, 1}});
}

LinearCode identity_code() {
    const ProblemInstance inst(3, {1, 1}, {{0}, {1}});
    return synthesize(inst, {1, 2, 0, {1, 1}, {1, 1}, {1, 1}});
}

}  // namespace

TEST(Encode, Examples) {
    const auto pad = pad_code();
    EXPECT_EQ(encode(pad, {{2}}, {{1}}).symbols, (gf::Vector{1, 0}));
    EXPECT_EQ(encode(pad, {{0}}, {{0}}).symbols, (gf::Vector{0, 0}));
    EXPECT_EQ(encode(identity_code(), {{1, 2}}, {{}}).symbols, (gf::Vector{1, 2}));
}

TEST(Decode, Examples) {
    const auto pad = pad_code();
    auto [m, k] = decode(pad, {{1, 0}});
    EXPECT_EQ(m.symbols, (gf::Vector{2}));
    EXPECT_EQ(k.symbols, (gf::Vector{1}));
    std::tie(m, k) = decode(pad, {{0, 0}});
    EXPECT_EQ(m.symbols, (gf::Vector{0}));
    EXPECT_EQ(k.symbols, (gf::Vector{0}));
    std::tie(m, k) = decode(identity_code(), {{1, 2}});
    EXPECT_EQ(m.symbols, (gf::Vector{1, 2}));
    EXPECT_TRUE(k.symbols.empty());
}

TEST(Codec, DimensionAndRangeErrors) {
    const auto pad = pad_code();
    EXPECT_THROW(encode(pad, {{1, 1}}, {{0}}), DimensionMismatch);
    EXPECT_THROW(encode(pad, {{1}}, {{}}), DimensionMismatch);
    EXPECT_THROW(encode(pad, {{3}}, {{0}}), DimensionMismatch);
    EXPECT_THROW(decode(pad, {{1}}), DimensionMismatch);
}

TEST(Codec, SplitByChannel) {
    const ProblemInstance inst(5, {2, 1}, {{0}});
    const auto code = synthesize(inst, {1, 2, 1, {2, 1}, {1}, {2, 1}});
    const auto x = encode(code, {{3, 4}}, {{2}});
    const auto parts = split_by_channel(code, x);
    ASSERT_EQ(parts.size(), 2u);
    EXPECT_EQ(parts[0].size(), 2u);
    EXPECT_EQ(parts[1].size(), 1u);
    EXPECT_EQ(parts[0][0], 2u);  // key in the clear
}

TEST(Codec, RoundTripExhaustive) {
    // GF(4), n_M = 2, n_K = 2: all 256 (m, k) pairs.
    const ProblemInstance inst(4, {2, 2}, {{0}, {1}});
    const auto code = synthesize(inst, {1, 2, 2, {2, 2}, {0, 0}, {2, 2}});
    std::set<gf::Vector> words;
    for (gf::Element a = 0; a < 256; ++a) {
        const MessageWord m{{a & 3u, (a >> 2) & 3u}};
        const KeyWord k{{(a >> 4) & 3u, (a >> 6) & 3u}};
        const auto x = encode(code, m, k);
        words.insert(x.symbols);
        const auto [dm, dk] = decode(code, x);
        EXPECT_EQ(dm, m);
        EXPECT_EQ(dk, k);
    }
    EXPECT_EQ(words.size(), 256u);
}

TEST(Codec, RoundTripSampled) {
    const ProblemInstance inst(7, {2, 2, 2}, {{0, 1}, {1, 2}, {0, 2}});
    const auto code = synthesize(inst, {1, 2, 4, {2, 2, 2}, {0, 0, 0}, {2, 2, 2}});
    std::mt19937_64 rng(2);
    for (int t = 0; t < 2000; ++t) {
        const auto m = random_message(code, rng);
        const auto k = random_key(code, rng);
        const auto [dm, dk] = decode(code, encode(code, m, k));
        ASSERT_EQ(dm, m);
        ASSERT_EQ(dk, k);
        // Distinct messages under one key never collide.
        auto other = m;
        other.symbols[0] = code.field.add(other.symbols[0], 1);
        EXPECT_NE(encode(code, other, k).symbols, encode(code, m, k).symbols);
    }
}
