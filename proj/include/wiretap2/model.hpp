#ifndef WIRETAP2_MODEL_HPP
#define WIRETAP2_MODEL_HPP

#include "wiretap2/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace wiretap2 {

/// Largest alphabet accepted by instance validation.
inline constexpr std::uint64_t max_alphabet_size = std::uint64_t{1} << 32;

struct PrimePower {
    std::uint64_t prime;
    unsigned exponent;
};

/// Trial factorization; nullopt unless q = p^m with m >= 1.
inline std::optional<PrimePower> as_prime_power(std::uint64_t q) {
    if (q < 2) {
        return std::nullopt;
    }
    std::uint64_t p = 0;
    for (std::uint64_t f = 2; f * f <= q; ++f) {
        if (q % f == 0) {
            p = f;
            break;
        }
    }
    if (p == 0) {
        return PrimePower{q, 1};
    }
    unsigned m = 0;
    while (q % p == 0) {
        q /= p;
        ++m;
    }
    if (q != 1) {
        return std::nullopt;
    }
    return PrimePower{p, m};
}

/// A set of channel indices a single wiretapper may observe. Indices are
/// 0-based, sorted and free of duplicates.
using WiretapSet = std::vector<std::size_t>;

inline WiretapSet normalize_wiretap_set(WiretapSet set) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    return set;
}

/// Channels e_1..e_h with integer capacities, the alphabet size and the
/// collection of wiretap sets (input order preserved).
struct ProblemInstance {
    std::uint64_t q = 2;
    std::vector<std::int64_t> capacities;
    std::vector<WiretapSet> wiretap_sets;

    ProblemInstance() = default;
    ProblemInstance(std::uint64_t alphabet, std::vector<std::int64_t> caps, std::vector<WiretapSet> sets)
        : q(alphabet), capacities(std::move(caps)) {
        wiretap_sets.reserve(sets.size());
        for (auto& s : sets) {
            wiretap_sets.push_back(normalize_wiretap_set(std::move(s)));
        }
    }

    [[nodiscard]] std::size_t channel_count() const { return capacities.size(); }
    [[nodiscard]] std::size_t wiretap_count() const { return wiretap_sets.size(); }

    /// Channels outside wiretap set j.
    [[nodiscard]] std::vector<std::size_t> complement(std::size_t j) const {
        std::vector<std::size_t> out;
        const auto& set = wiretap_sets.at(j);
        for (std::size_t i = 0; i < channel_count(); ++i) {
            if (!std::binary_search(set.begin(), set.end(), i)) {
                out.push_back(i);
            }
        }
        return out;
    }

    [[nodiscard]] bool in_wiretap_set(std::size_t j, std::size_t channel) const {
        const auto& set = wiretap_sets.at(j);
        return std::binary_search(set.begin(), set.end(), channel);
    }

    friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

/// Target rates (R_M, R_K, R_1..R_d) in units of log q per channel use.
struct RateTuple {
    Rational message_rate;
    Rational key_rate;
    std::vector<Rational> equivocations;

    friend bool operator==(const RateTuple&, const RateTuple&) = default;
};

/// Per-channel rates r_1..r_h witnessing region membership.
struct RateAllocation {
    std::vector<Rational> rates;

    [[nodiscard]] Rational total() const {
        Rational sum;
        for (const auto& r : rates) {
            sum += r;
        }
        return sum;
    }

    friend bool operator==(const RateAllocation&, const RateAllocation&) = default;
};

struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<std::string> warnings;

    [[nodiscard]] bool ok() const { return violations.empty(); }
};

inline std::string format_channel_set(const WiretapSet& set) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < set.size(); ++i) {
        os << (i ? "," : "") << set[i] + 1;
    }
    os << '}';
    return os.str();
}

inline ValidationReport validate_instance(const ProblemInstance& inst) {
    ValidationReport report;
    if (inst.q > max_alphabet_size) {
        report.violations.push_back("q=" + std::to_string(inst.q) + " exceeds the supported maximum 2^32");
    } else if (!as_prime_power(inst.q)) {
        report.violations.push_back("q=" + std::to_string(inst.q) + " not a prime power");
    }
    if (inst.capacities.empty()) {
        report.violations.push_back("empty channel set");
    }
    for (std::size_t i = 0; i < inst.capacities.size(); ++i) {
        if (inst.capacities[i] < 1) {
            report.violations.push_back("capacity of channel " + std::to_string(i + 1) + " must be positive");
        }
    }
    const std::size_t h = inst.channel_count();
    std::set<WiretapSet> seen;
    for (std::size_t j = 0; j < inst.wiretap_sets.size(); ++j) {
        const auto& set = inst.wiretap_sets[j];
        bool in_range = true;
        for (auto c : set) {
            if (c >= h) {
                report.violations.push_back("wiretap set " + std::to_string(j + 1) + " references channel " +
                                            std::to_string(c + 1) + " out of range 1.." + std::to_string(h));
                in_range = false;
            }
        }
        if (!seen.insert(set).second) {
            report.warnings.push_back("duplicate wiretap set " + format_channel_set(set));
        }
        if (in_range && h > 0 && set.size() == h) {
            report.warnings.push_back("wiretap set " + format_channel_set(set) + " covers all channels");
        }
    }
    return report;
}

class InvalidInstance : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline void require_valid(const ProblemInstance& inst) {
    const auto report = validate_instance(inst);
    if (!report.ok()) {
        throw InvalidInstance(report.violations.front());
    }
}

/// c_j = R_M - R_j, the leakage I(Y_{I_j}; M) permitted by wiretap set j.
inline Rational slack(const RateTuple& tuple, std::size_t j) {
    if (j >= tuple.equivocations.size()) {
        throw std::out_of_range("wiretap index " + std::to_string(j + 1) + " out of range");
    }
    return tuple.message_rate - tuple.equivocations[j];
}

}  // namespace wiretap2

#endif  // WIRETAP2_MODEL_HPP
