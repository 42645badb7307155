#include "oracles.hpp"

#include "wiretap2/lp.hpp"
#include "wiretap2/region.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace wiretap2;

namespace {

ProblemInstance one_time_pad() { return ProblemInstance(3, {1, 1}, {{0}, {1}}); }

ProblemInstance threshold_instance(std::size_t h, std::size_t r) {
    std::vector<WiretapSet> sets;
    for (std::uint32_t mask = 0; mask < (1u << h); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != r) continue;
        WiretapSet s;
        for (std::size_t i = 0; i < h; ++i) {
            if (mask & (1u << i)) s.push_back(i);
        }
        sets.push_back(s);
    }
    return ProblemInstance(5, std::vector<std::int64_t>(h, 1), sets);
}

std::vector<Rational> ints(std::initializer_list<std::int64_t> v) {
    std::vector<Rational> out;
    for (auto x : v) out.emplace_back(x);
    return out;
}

}  // namespace

TEST(Simplex, OptimizesSmallProgram) {
    // min -x - y  s.t. x + 2y <= 4, 3x + y <= 6
    lp::Problem p;
    p.variables = 2;
    p.rows.push_back({ints({1, 2}), lp::Sense::less_equal, Rational(4)});
    p.rows.push_back({ints({3, 1}), lp::Sense::less_equal, Rational(6)});
    p.objective = ints({-1, -1});
    const auto r = lp::solve(p);
    ASSERT_EQ(r.status, lp::Status::optimal);
    EXPECT_EQ(r.x[0], Rational(8, 5));
    EXPECT_EQ(r.x[1], Rational(6, 5));
    EXPECT_EQ(r.objective, Rational(-14, 5));
}

TEST(Simplex, LargeCoefficientsStayExact) {
    // Same program with rows scaled so pivots overflow 64 bits, or so the
    // input does not fit at all.
    for (const char* scale : {"1099511627791", "1000000000000000000000000000007"}) {
        const Rational s = Rational::parse(scale);
        lp::Problem p;
        p.variables = 2;
        p.rows.push_back({{s, s * Rational(2)}, lp::Sense::less_equal, s * Rational(4)});
        p.rows.push_back({{Rational(3), Rational(1)}, lp::Sense::less_equal, Rational(6)});
        p.objective = {-s, -s};
        const auto r = lp::solve(p);
        ASSERT_EQ(r.status, lp::Status::optimal);
        EXPECT_EQ(r.x[0], Rational(8, 5));
        EXPECT_EQ(r.x[1], Rational(6, 5));
        EXPECT_EQ(r.objective, s * Rational(-14, 5));
    }
}

TEST(Simplex, HandlesEqualityAndNegativeRhs) {
    // x - y = -1, x + y >= 3, min x
    lp::Problem p;
    p.variables = 2;
    p.rows.push_back({ints({1, -1}), lp::Sense::equal, Rational(-1)});
    p.rows.push_back({ints({1, 1}), lp::Sense::greater_equal, Rational(3)});
    p.objective = ints({1, 0});
    const auto r = lp::solve(p);
    ASSERT_EQ(r.status, lp::Status::optimal);
    EXPECT_EQ(r.x[0], Rational(1));
    EXPECT_EQ(r.x[1], Rational(2));
}

TEST(Simplex, DetectsUnbounded) {
    lp::Problem p;
    p.variables = 1;
    p.rows.push_back({ints({1}), lp::Sense::greater_equal, Rational(1)});
    p.objective = ints({-1});
    EXPECT_EQ(lp::solve(p).status, lp::Status::unbounded);
}

TEST(Simplex, RedundantEqualityRows) {
    lp::Problem p;
    p.variables = 2;
    p.rows.push_back({ints({1, 1}), lp::Sense::equal, Rational(2)});
    p.rows.push_back({ints({2, 2}), lp::Sense::equal, Rational(4)});
    p.objective = ints({1, 2});
    const auto r = lp::solve(p);
    ASSERT_EQ(r.status, lp::Status::optimal);
    EXPECT_EQ(r.x[0], Rational(2));
    EXPECT_EQ(r.objective, Rational(2));
}

TEST(Simplex, FarkasCertificateOnRandomInfeasibleSystems) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> sense(0, 2);
    int infeasible = 0;
    for (int trial = 0; trial < 400; ++trial) {
        lp::Problem p;
        p.variables = 3;
        for (int k = 0; k < 5; ++k) {
            lp::Row row;
            for (int j = 0; j < 3; ++j) row.coeffs.emplace_back(coef(rng));
            row.sense = static_cast<lp::Sense>(sense(rng));
            row.rhs = Rational(coef(rng));
            p.rows.push_back(row);
        }
        const auto r = lp::solve(p);
        if (r.status == lp::Status::infeasible) {
            ++infeasible;
            EXPECT_TRUE(lp::is_farkas_certificate(p, r.farkas));
        } else {
            ASSERT_EQ(r.status, lp::Status::optimal);
            for (const auto& row : p.rows) {
                Rational lhs;
                for (int j = 0; j < 3; ++j) lhs += row.coeffs[j] * r.x[j];
                if (row.sense == lp::Sense::less_equal) {
                    EXPECT_LE(lhs, row.rhs);
                } else if (row.sense == lp::Sense::greater_equal) {
                    EXPECT_GE(lhs, row.rhs);
                } else {
                    EXPECT_EQ(lhs, row.rhs);
                }
            }
        }
    }
    EXPECT_GT(infeasible, 20);
}

TEST(CheckMembership, OneTimePadPoint) {
    const auto r = check_membership(one_time_pad(), RateTuple{1, 1, ints({1, 1})}, Variant::general);
    ASSERT_TRUE(r.feasible);
    EXPECT_EQ(r.witness->rates, ints({1, 1}));
    EXPECT_FALSE(r.certificate);
}

TEST(CheckMembership, MissingKeyIsRejectedWithCertificate) {
    const auto r = check_membership(one_time_pad(), RateTuple{1, 0, ints({1, 1})}, Variant::general);
    ASSERT_FALSE(r.feasible);
    ASSERT_TRUE(r.certificate);
    EXPECT_TRUE(verify_certificate(*r.certificate, 2));
    EXPECT_EQ(r.certificate->combined_bound, Rational(-1));
    std::vector<std::string> labels;
    for (const auto& t : r.certificate->terms) {
        labels.push_back(t.constraint.label);
        EXPECT_EQ(t.multiplier, Rational(1));
    }
    std::sort(labels.begin(), labels.end());
    EXPECT_EQ(labels, (std::vector<std::string>{"equivocation[1]", "equivocation[2]", "key_rate"}));
}

TEST(CheckMembership, ImperfectSecrecyNeedsNoKey) {
    const auto r = check_membership(one_time_pad(), RateTuple{2, 0, ints({1, 1})}, Variant::general);
    ASSERT_TRUE(r.feasible);
    EXPECT_EQ(r.witness->rates, ints({1, 1}));
}

TEST(CheckMembership, NoWiretappers) {
    const auto r = check_membership(ProblemInstance(2, {3}, {}), RateTuple{3, 0, {}}, Variant::general);
    ASSERT_TRUE(r.feasible);
    EXPECT_EQ(r.witness->rates, ints({3}));
    EXPECT_FALSE(check_membership(ProblemInstance(2, {3}, {}), RateTuple{4, 0, {}}, Variant::general).feasible);
}

TEST(CheckMembership, RateOrderShortCircuits) {
    const auto r = check_membership(one_time_pad(), RateTuple{1, 5, {Rational(3, 2), Rational(0)}}, Variant::general);
    ASSERT_FALSE(r.feasible);
    ASSERT_EQ(r.certificate->terms.size(), 1u);
    EXPECT_EQ(r.certificate->terms[0].constraint.label, "rate_order[1]");
    EXPECT_EQ(r.certificate->combined(), "0 <= -1/2");
    EXPECT_TRUE(verify_certificate(*r.certificate, 2));
}

TEST(CheckMembership, DimensionMismatch) {
    EXPECT_THROW(check_membership(one_time_pad(), RateTuple{1, 1, ints({1})}, Variant::general), DimensionMismatch);
    EXPECT_THROW(check_membership(ProblemInstance(6, {1}, {}), RateTuple{1, 1, {}}, Variant::general),
                 InvalidInstance);
}

TEST(CheckMembership, KeyRecoveredNeedsExactKey) {
    const auto inst = one_time_pad();
    EXPECT_TRUE(check_membership(inst, RateTuple{1, 1, ints({1, 1})}, Variant::key_recovered).feasible);
    const auto r = check_membership(inst, RateTuple{1, 5, ints({1, 1})}, Variant::key_recovered);
    EXPECT_FALSE(r.feasible);
    EXPECT_TRUE(verify_certificate(*r.certificate, 2));
    EXPECT_TRUE(check_membership(inst, RateTuple{1, 5, ints({1, 1})}, Variant::general).feasible);
}

TEST(MinimizeKeyRate, Examples) {
    const auto otp = one_time_pad();
    auto r = minimize_key_rate(otp, Rational(1), ints({1, 1}));
    ASSERT_TRUE(r.feasible);
    EXPECT_EQ(r.key_rate, Rational(1));
    EXPECT_EQ(r.witness.rates, ints({1, 1}));

    r = minimize_key_rate(otp, Rational(2), ints({1, 1}));
    ASSERT_TRUE(r.feasible);
    EXPECT_EQ(r.key_rate, Rational(0));
    EXPECT_EQ(r.witness.rates, ints({1, 1}));

    r = minimize_key_rate(otp, Rational(3), ints({1, 1}));
    EXPECT_FALSE(r.feasible);
    EXPECT_TRUE(verify_certificate(*r.certificate, 2));
}

TEST(MinimizeKeyRate, ThresholdWiretapRecoversClassicTradeoff) {
    const auto inst = threshold_instance(4, 2);
    const auto r = minimize_key_rate(inst, Rational(2), std::vector<Rational>(inst.wiretap_count(), Rational(2)));
    ASSERT_TRUE(r.feasible);
    EXPECT_EQ(r.key_rate, Rational(2));
    EXPECT_EQ(r.witness.rates, ints({1, 1, 1, 1}));
}

TEST(MinimizeKeyRate, LexicographicTieBreak) {
    // Any r with r1 + r2 = 1 is optimal; the smallest r1 wins.
    const ProblemInstance inst(2, {1, 1}, {});
    const auto r = minimize_key_rate(inst, Rational(1), {});
    ASSERT_TRUE(r.feasible);
    EXPECT_EQ(r.key_rate, Rational(0));
    EXPECT_EQ(r.witness.rates, ints({0, 1}));
}

TEST(MinimizeKeyRate, ResultIsInKeyRecoveredRegion) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t h = 1 + rng() % 3;
        std::vector<std::int64_t> caps;
        for (std::size_t i = 0; i < h; ++i) caps.push_back(1 + static_cast<std::int64_t>(rng() % 2));
        std::vector<WiretapSet> sets;
        const std::size_t d = rng() % 4;
        for (std::size_t j = 0; j < d; ++j) {
            WiretapSet s;
            for (std::size_t i = 0; i < h; ++i) {
                if (rng() % 2) s.push_back(i);
            }
            sets.push_back(s);
        }
        const ProblemInstance inst(5, caps, sets);
        const Rational rm(static_cast<std::int64_t>(rng() % 9), 2);
        std::vector<Rational> eq;
        for (std::size_t j = 0; j < d; ++j) eq.emplace_back(static_cast<std::int64_t>(rng() % 5), 2);
        const auto r = minimize_key_rate(inst, rm, eq);
        const RateTuple t{rm, r.key_rate, eq};
        if (r.feasible) {
            EXPECT_TRUE(satisfies_region(inst, t, Variant::key_recovered, r.witness));
            // Nothing smaller works.
            if (r.key_rate.sign() > 0) {
                const RateTuple below{rm, r.key_rate - Rational(1, 1000), eq};
                EXPECT_FALSE(oracle::membership(inst, below, Variant::general));
            }
        } else {
            EXPECT_TRUE(verify_certificate(*r.certificate, h));
        }
    }
}

TEST(ScaleToIntegers, Examples) {
    const auto otp = one_time_pad();
    auto p = scale_to_integers(RateTuple{1, 1, ints({1, 1})}, RateAllocation{ints({1, 1})}, otp);
    EXPECT_EQ(p.block_length, 1);
    EXPECT_EQ(p.message_symbols, 1);
    EXPECT_EQ(p.key_symbols, 1);
    EXPECT_EQ(p.channel_symbols, (std::vector<std::int64_t>{1, 1}));
    EXPECT_EQ(p.leak_bounds, (std::vector<std::int64_t>{0, 0}));
    EXPECT_EQ(p.block_capacities, (std::vector<std::int64_t>{1, 1}));

    // R_M = 2/3, R_K = 1/3, r = (1/3, 2/3), one wiretap set with c = 1/3.
    const ProblemInstance single(3, {1, 1}, {{1}});
    p = scale_to_integers(RateTuple{Rational(2, 3), Rational(1, 3), {Rational(1, 3)}},
                          RateAllocation{{Rational(1, 3), Rational(2, 3)}}, single);
    EXPECT_EQ(p.block_length, 3);
    EXPECT_EQ(p.message_symbols, 2);
    EXPECT_EQ(p.key_symbols, 1);
    EXPECT_EQ(p.channel_symbols, (std::vector<std::int64_t>{1, 2}));
    EXPECT_EQ(p.leak_bounds, (std::vector<std::int64_t>{1}));
    EXPECT_EQ(p.block_capacities, (std::vector<std::int64_t>{3, 3}));

    p = scale_to_integers(RateTuple{Rational(1, 2), Rational(1, 2), {Rational(1, 2), Rational(1, 2)}},
                          RateAllocation{{Rational(1, 2), Rational(1, 2)}}, otp);
    EXPECT_EQ(p.block_length, 2);
    EXPECT_EQ(p.message_symbols, 1);
    EXPECT_EQ(p.key_symbols, 1);
    EXPECT_EQ(p.channel_symbols, (std::vector<std::int64_t>{1, 1}));
}

TEST(ScaleToIntegers, RejectsSlackKey) {
    // sum r - R_M = 1 but R_K = 2: not a key-recovered point.
    EXPECT_THROW(scale_to_integers(RateTuple{1, 2, ints({1, 1})}, RateAllocation{ints({1, 1})}, one_time_pad()),
                 PreconditionViolation);
}

TEST(RegionProperties, WitnessSoundnessMonotonicityAndNesting) {
    std::mt19937_64 rng(23);
    int feasible = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t h = 1 + rng() % 3;
        std::vector<std::int64_t> caps;
        for (std::size_t i = 0; i < h; ++i) caps.push_back(1 + static_cast<std::int64_t>(rng() % 2));
        std::vector<WiretapSet> sets;
        const std::size_t d = rng() % 4;
        for (std::size_t j = 0; j < d; ++j) {
            WiretapSet s;
            for (std::size_t i = 0; i < h; ++i) {
                if (rng() % 2) s.push_back(i);
            }
            sets.push_back(s);
        }
        const ProblemInstance inst(5, caps, sets);
        RateTuple t{Rational(static_cast<std::int64_t>(rng() % 9), 2), Rational(static_cast<std::int64_t>(rng() % 7), 2), {}};
        for (std::size_t j = 0; j < d; ++j) t.equivocations.emplace_back(static_cast<std::int64_t>(rng() % 5), 2);

        const auto general = check_membership(inst, t, Variant::general);
        const auto exact = check_membership(inst, t, Variant::key_recovered);
        EXPECT_EQ(general.feasible, oracle::membership(inst, t, Variant::general));
        EXPECT_EQ(exact.feasible, oracle::membership(inst, t, Variant::key_recovered));
        EXPECT_TRUE(!exact.feasible || general.feasible);
        if (!general.feasible) {
            EXPECT_TRUE(verify_certificate(*general.certificate, h));
            continue;
        }
        ++feasible;
        EXPECT_TRUE(oracle::satisfies(oracle::constraints(inst, t, Variant::general), general.witness->rates));
        // More key, less equivocation: still achievable.
        RateTuple relaxed = t;
        relaxed.key_rate += Rational(static_cast<std::int64_t>(rng() % 3), 2);
        for (auto& r : relaxed.equivocations) {
            if (r.sign() > 0 && rng() % 2) r -= Rational(1, 2);
        }
        EXPECT_TRUE(check_membership(inst, relaxed, Variant::general).feasible);
    }
    EXPECT_GT(feasible, 50);
}

TEST(ScaleToIntegers, BlockLengthIsMinimal) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 6);
        const ProblemInstance inst(3, {2, 2}, {{0}});
        const Rational r1(static_cast<std::int64_t>(rng() % (2 * den + 1)), den);
        const Rational r2(static_cast<std::int64_t>(rng() % (2 * den + 1)), den);
        const Rational total = r1 + r2;
        const Rational rm = total * Rational(static_cast<std::int64_t>(rng() % 4), 3);
        const Rational rk = total - rm;
        // The single wiretap set sees channel 1; equivocation may be at most r2.
        const Rational rj = std::min(r2, rm) * Rational(static_cast<std::int64_t>(rng() % 3), 2);
        const RateTuple t{rm, rk, {rj}};
        const RateAllocation w{{r1, r2}};
        ASSERT_TRUE(satisfies_region(inst, t, Variant::key_recovered, w));
        const auto p = scale_to_integers(t, w, inst);
        EXPECT_FALSE(integer_conditions_failure(inst, p));
        for (std::int64_t n = 1; n < p.block_length; ++n) {
            const Rational s(n);
            const bool integral = (s * rm).is_integer() && (s * rk).is_integer() && (s * r1).is_integer() &&
                                  (s * r2).is_integer() && (s * (rm - rj)).is_integer();
            EXPECT_FALSE(integral) << "n=" << n << " already integral";
        }
    }
}
