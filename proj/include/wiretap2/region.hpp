#ifndef WIRETAP2_REGION_HPP
#define WIRETAP2_REGION_HPP

#include "wiretap2/lp.hpp"
#include "wiretap2/model.hpp"
#include "wiretap2/rational.hpp"

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace wiretap2 {

/// Which rate region a query targets.
///  - general: only the message must be decodable; the key constraint is
///    R_K >= sum r - R_M.
///  - key_recovered: message and key must both be decodable; the key
///    constraint tightens to R_K = sum r - R_M.
enum class Variant { general, key_recovered };

inline const char* to_string(Variant v) { return v == Variant::general ? "general" : "key-recovered"; }

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class PreconditionViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A linear constraint over r_1..r_h in the form coeffs . r <= bound
/// (or = bound when equality is set).
struct RegionConstraint {
    std::string label;
    std::vector<Rational> coeffs;
    Rational bound;
    bool equality = false;

    [[nodiscard]] Rational lhs(const std::vector<Rational>& r) const {
        Rational sum;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (coeffs[i].sign() != 0) sum += coeffs[i] * r[i];
        }
        return sum;
    }

    [[nodiscard]] bool holds(const std::vector<Rational>& r) const {
        const Rational v = lhs(r);
        return equality ? v == bound : v <= bound;
    }

    [[nodiscard]] std::string describe() const {
        std::ostringstream os;
        bool any = false;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            const Rational& c = coeffs[i];
            if (c.sign() == 0) continue;
            const Rational mag = c.sign() < 0 ? -c : c;
            if (any) {
                os << (c.sign() < 0 ? " - " : " + ");
            } else if (c.sign() < 0) {
                os << '-';
            }
            if (mag != Rational(1)) os << mag << ' ';
            os << 'r' << i + 1;
            any = true;
        }
        if (!any) os << '0';
        os << (equality ? " = " : " <= ") << bound;
        return os.str();
    }
};

struct CertificateTerm {
    RegionConstraint constraint;
    Rational multiplier;
};

/// Nonnegative combination of constraints (equalities may take either sign)
/// whose left-hand sides cancel exactly while the bounds sum to a negative
/// number, i.e. the combined inequality reads 0 <= combined_bound < 0.
struct Certificate {
    std::vector<CertificateTerm> terms;
    Rational combined_bound;

    [[nodiscard]] std::string combined() const { return "0 <= " + combined_bound.to_string(); }
};

inline bool verify_certificate(const Certificate& cert, std::size_t channels) {
    std::vector<Rational> sum(channels);
    Rational bound;
    for (const auto& t : cert.terms) {
        if (t.constraint.coeffs.size() != channels) return false;
        if (!t.constraint.equality && t.multiplier.sign() < 0) return false;
        for (std::size_t i = 0; i < channels; ++i) sum[i] += t.multiplier * t.constraint.coeffs[i];
        bound += t.multiplier * t.constraint.bound;
    }
    for (const auto& s : sum) {
        if (s.sign() != 0) return false;
    }
    return bound == cert.combined_bound && bound.sign() < 0;
}

struct FeasibilityResult {
    bool feasible = false;
    std::optional<RateAllocation> witness;
    std::optional<Certificate> certificate;
};

struct RegionQuery {
    ProblemInstance instance;
    RateTuple tuple;
    Variant variant = Variant::general;
};

namespace detail {

inline std::string indexed(const char* name, std::size_t i) { return std::string(name) + "[" + std::to_string(i + 1) + "]"; }

inline RegionConstraint capacity_constraint(const ProblemInstance& inst, std::size_t i) {
    RegionConstraint c{indexed("capacity", i), std::vector<Rational>(inst.channel_count()), Rational(inst.capacities[i])};
    c.coeffs[i] = 1;
    return c;
}

inline RegionConstraint nonnegative_constraint(std::size_t h, std::size_t i) {
    RegionConstraint c{indexed("nonnegative", i), std::vector<Rational>(h), Rational()};
    c.coeffs[i] = -1;
    return c;
}

inline RegionConstraint message_constraint(std::size_t h, const Rational& message_rate) {
    return {"message_rate", std::vector<Rational>(h, Rational(-1)), -message_rate};
}

inline RegionConstraint key_constraint(std::size_t h, const RateTuple& t, Variant v) {
    return {v == Variant::general ? "key_rate" : "key_rate_exact", std::vector<Rational>(h, Rational(1)),
            t.message_rate + t.key_rate, v == Variant::key_recovered};
}

inline RegionConstraint equivocation_constraint(const ProblemInstance& inst, std::size_t j, const Rational& rate) {
    RegionConstraint c{indexed("equivocation", j), std::vector<Rational>(inst.channel_count()), -rate};
    for (auto i : inst.complement(j)) c.coeffs[i] = -1;
    return c;
}

/// Constraints that involve no r variable: rate nonnegativity and R_j <= R_M.
inline std::vector<RegionConstraint> rate_only_constraints(std::size_t h, const Rational& message_rate,
                                                           const std::optional<Rational>& key_rate,
                                                           const std::vector<Rational>& equivocations) {
    std::vector<RegionConstraint> out;
    const std::vector<Rational> zero(h);
    out.push_back({"message_rate_nonnegative", zero, message_rate});
    if (key_rate) out.push_back({"key_rate_nonnegative", zero, *key_rate});
    for (std::size_t j = 0; j < equivocations.size(); ++j) {
        out.push_back({indexed("equivocation_nonnegative", j), zero, equivocations[j]});
        out.push_back({indexed("rate_order", j), zero, message_rate - equivocations[j]});
    }
    return out;
}

inline lp::Problem to_lp(const std::vector<RegionConstraint>& cons, std::size_t h) {
    lp::Problem p;
    p.variables = h;
    p.rows.reserve(cons.size());
    for (const auto& c : cons) {
        p.rows.push_back({c.coeffs, c.equality ? lp::Sense::equal : lp::Sense::less_equal, c.bound});
    }
    return p;
}

inline Certificate certificate_from_farkas(const std::vector<RegionConstraint>& cons, const std::vector<Rational>& y,
                                           std::size_t h);

/// Among all certificates scaled to 0 <= -1, the one with the least total
/// multiplier weight. Falls back to the raw solver multipliers.
inline Certificate lightest_certificate(const std::vector<RegionConstraint>& cons, const std::vector<Rational>& y,
                                        std::size_t h) {
    // Columns: one per constraint (two for equalities), then one per r_i >= 0.
    std::vector<std::pair<std::size_t, int>> column;
    for (std::size_t k = 0; k < cons.size(); ++k) {
        column.emplace_back(k, 1);
        if (cons[k].equality) column.emplace_back(k, -1);
    }
    const std::size_t m = column.size() + h;
    lp::Problem dual;
    dual.variables = m;
    for (std::size_t i = 0; i < h; ++i) {
        std::vector<Rational> row(m);
        for (std::size_t c = 0; c < column.size(); ++c) row[c] = cons[column[c].first].coeffs[i] * column[c].second;
        row[column.size() + i] = -1;
        dual.rows.push_back({std::move(row), lp::Sense::equal, Rational()});
    }
    std::vector<Rational> bound_row(m);
    for (std::size_t c = 0; c < column.size(); ++c) bound_row[c] = cons[column[c].first].bound * column[c].second;
    dual.rows.push_back({std::move(bound_row), lp::Sense::equal, Rational(-1)});
    dual.objective.assign(m, Rational(1));
    const auto solved = lp::solve(dual);
    if (solved.status != lp::Status::optimal) return certificate_from_farkas(cons, y, h);
    std::vector<Rational> multipliers(cons.size());
    for (std::size_t c = 0; c < column.size(); ++c) {
        multipliers[column[c].first] += solved.x[c] * column[c].second;
    }
    return certificate_from_farkas(cons, multipliers, h);
}

inline Certificate certificate_from_farkas(const std::vector<RegionConstraint>& cons, const std::vector<Rational>& y,
                                           std::size_t h) {
    Certificate cert;
    std::vector<Rational> residual(h);
    for (std::size_t k = 0; k < cons.size(); ++k) {
        if (y[k].sign() == 0) continue;
        cert.terms.push_back({cons[k], y[k]});
        for (std::size_t i = 0; i < h; ++i) residual[i] += y[k] * cons[k].coeffs[i];
        cert.combined_bound += y[k] * cons[k].bound;
    }
    // Cancel what remains with r_i >= 0.
    for (std::size_t i = 0; i < h; ++i) {
        if (residual[i].sign() > 0) cert.terms.push_back({nonnegative_constraint(h, i), residual[i]});
    }
    return cert;
}

inline bool rate_only_hold(const RateTuple& t) {
    if (t.message_rate.sign() < 0 || t.key_rate.sign() < 0) return false;
    for (const auto& e : t.equivocations) {
        if (e.sign() < 0 || e > t.message_rate) return false;
    }
    return true;
}

inline std::optional<Certificate> precheck(const std::vector<RegionConstraint>& rate_only) {
    for (const auto& c : rate_only) {
        if (c.bound.sign() < 0) {
            return Certificate{{{c, Rational(1)}}, c.bound};
        }
    }
    return std::nullopt;
}

inline void check_dimensions(const ProblemInstance& inst, std::size_t equivocations) {
    if (equivocations != inst.wiretap_count()) {
        throw DimensionMismatch("tuple has " + std::to_string(equivocations) + " equivocation rates but the instance has " +
                                std::to_string(inst.wiretap_count()) + " wiretap sets");
    }
}

}  // namespace detail

/// Every constraint on r for the chosen region, excluding r >= 0 (which the
/// solver imposes as bounds). Rate-only conditions are not included.
inline std::vector<RegionConstraint> region_constraints(const ProblemInstance& inst, const RateTuple& tuple,
                                                        Variant variant) {
    const std::size_t h = inst.channel_count();
    std::vector<RegionConstraint> cons;
    cons.reserve(h + 2 + inst.wiretap_count());
    for (std::size_t i = 0; i < h; ++i) cons.push_back(detail::capacity_constraint(inst, i));
    cons.push_back(detail::key_constraint(h, tuple, variant));
    cons.push_back(detail::message_constraint(h, tuple.message_rate));
    for (std::size_t j = 0; j < inst.wiretap_count(); ++j) {
        cons.push_back(detail::equivocation_constraint(inst, j, tuple.equivocations[j]));
    }
    return cons;
}

/// Full membership test, including rate-only conditions and r >= 0.
inline bool satisfies_region(const ProblemInstance& inst, const RateTuple& tuple, Variant variant,
                             const RateAllocation& witness) {
    detail::check_dimensions(inst, tuple.equivocations.size());
    if (witness.rates.size() != inst.channel_count()) return false;
    if (!detail::rate_only_hold(tuple)) return false;
    for (const auto& r : witness.rates) {
        if (r.sign() < 0) return false;
    }
    for (const auto& c : region_constraints(inst, tuple, variant)) {
        if (!c.holds(witness.rates)) return false;
    }
    return true;
}

/// Decides whether the tuple lies in the chosen region. A feasible answer
/// carries the witness with the smallest total rate sum r_i (hence the smallest
/// key a code for this tuple needs); an infeasible one carries a certificate.
inline FeasibilityResult check_membership(const ProblemInstance& inst, const RateTuple& tuple, Variant variant) {
    detail::check_dimensions(inst, tuple.equivocations.size());
    require_valid(inst);
    const std::size_t h = inst.channel_count();

    FeasibilityResult result;
    if (!detail::rate_only_hold(tuple)) {
        result.certificate = detail::precheck(
            detail::rate_only_constraints(h, tuple.message_rate, tuple.key_rate, tuple.equivocations));
        return result;
    }

    const auto cons = region_constraints(inst, tuple, variant);
    auto problem = detail::to_lp(cons, h);
    problem.objective.assign(h, Rational(1));
    const auto solved = lp::solve(problem);
    if (solved.status == lp::Status::infeasible) {
        result.certificate = detail::lightest_certificate(cons, solved.farkas, h);
        return result;
    }
    if (solved.status != lp::Status::optimal) {
        throw std::logic_error("bounded region LP reported unbounded");
    }
    RateAllocation witness{solved.x};
    for (const auto& c : cons) {
        if (!c.holds(witness.rates)) throw std::logic_error("simplex witness violates a region constraint");
    }
    for (const auto& r : witness.rates) {
        if (r.sign() < 0) throw std::logic_error("simplex witness has a negative rate");
    }
    result.feasible = true;
    result.witness = std::move(witness);
    return result;
}

inline FeasibilityResult check_membership(const RegionQuery& query) {
    return check_membership(query.instance, query.tuple, query.variant);
}

struct KeyRateResult {
    bool feasible = false;
    Rational key_rate;
    RateAllocation witness;
    std::optional<Certificate> certificate;
};

/// Smallest key rate compatible with the message rate and equivocations.
/// Among optimal allocations the lexicographically smallest r is returned.
inline KeyRateResult minimize_key_rate(const ProblemInstance& inst, const Rational& message_rate,
                                       const std::vector<Rational>& equivocations) {
    detail::check_dimensions(inst, equivocations.size());
    require_valid(inst);
    const std::size_t h = inst.channel_count();

    KeyRateResult result;
    if (auto cert = detail::precheck(detail::rate_only_constraints(h, message_rate, std::nullopt, equivocations))) {
        result.certificate = std::move(cert);
        return result;
    }

    std::vector<RegionConstraint> cons;
    cons.reserve(h + 2 + inst.wiretap_count());
    for (std::size_t i = 0; i < h; ++i) cons.push_back(detail::capacity_constraint(inst, i));
    cons.push_back(detail::message_constraint(h, message_rate));
    for (std::size_t j = 0; j < inst.wiretap_count(); ++j) {
        cons.push_back(detail::equivocation_constraint(inst, j, equivocations[j]));
    }

    auto problem = detail::to_lp(cons, h);
    problem.objective.assign(h, Rational(1));
    auto solved = lp::solve(problem);
    if (solved.status == lp::Status::infeasible) {
        result.certificate = detail::lightest_certificate(cons, solved.farkas, h);
        return result;
    }
    const Rational total = solved.objective;

    // Lexicographic tie-break over the optimal face.
    problem.rows.push_back({std::vector<Rational>(h, Rational(1)), lp::Sense::equal, total});
    std::vector<Rational> x = solved.x;
    for (std::size_t i = 0; i < h; ++i) {
        problem.objective.assign(h, Rational());
        problem.objective[i] = 1;
        const auto step = lp::solve(problem);
        if (step.status != lp::Status::optimal) {
            throw std::logic_error("lexicographic refinement lost feasibility");
        }
        x = step.x;
        std::vector<Rational> unit(h);
        unit[i] = 1;
        problem.rows.push_back({std::move(unit), lp::Sense::equal, step.objective});
    }

    result.feasible = true;
    result.key_rate = total - message_rate;
    if (result.key_rate.sign() < 0) result.key_rate = Rational();
    result.witness = RateAllocation{std::move(x)};
    return result;
}

/// Integer block parameters obtained by scaling every rate by the block length.
struct IntegerParameters {
    std::int64_t block_length = 1;                // n
    std::int64_t message_symbols = 0;             // n_M
    std::int64_t key_symbols = 0;                 // n_K
    std::vector<std::int64_t> channel_symbols;    // n_i
    std::vector<std::int64_t> leak_bounds;        // c'_j
    std::vector<std::int64_t> block_capacities;   // C'_i

    [[nodiscard]] std::int64_t total_symbols() const { return message_symbols + key_symbols; }

    friend bool operator==(const IntegerParameters&, const IntegerParameters&) = default;
};

/// Checks the integer conditions a code construction relies on: message and
/// key lengths consistent with channel loads, loads within capacity, and
/// every wiretap set carrying at most n_K + c'_j symbols. Returns the first
/// failure, if any.
inline std::optional<std::string> integer_conditions_failure(const ProblemInstance& inst, const IntegerParameters& p) {
    const std::size_t h = inst.channel_count();
    if (p.block_length < 1) return "block length must be positive";
    if (p.channel_symbols.size() != h || p.block_capacities.size() != h) {
        return "channel parameter count does not match the instance";
    }
    if (p.leak_bounds.size() != inst.wiretap_count()) return "leak bound count does not match the wiretap sets";
    if (p.message_symbols < 0 || p.key_symbols < 0) return "message and key lengths must be nonnegative";
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < h; ++i) {
        if (p.channel_symbols[i] < 0 || p.channel_symbols[i] > p.block_capacities[i]) {
            return "channel " + std::to_string(i + 1) + " load " + std::to_string(p.channel_symbols[i]) +
                   " outside [0, " + std::to_string(p.block_capacities[i]) + "]";
        }
        sum += p.channel_symbols[i];
    }
    if (p.message_symbols != sum - p.key_symbols) {
        return "n_M = " + std::to_string(p.message_symbols) + " differs from sum n_i - n_K = " +
               std::to_string(sum - p.key_symbols);
    }
    for (std::size_t j = 0; j < inst.wiretap_count(); ++j) {
        if (p.leak_bounds[j] < 0) return "negative leak bound for wiretap set " + std::to_string(j + 1);
        std::int64_t seen = 0;
        for (auto c : inst.wiretap_sets[j]) seen += p.channel_symbols[c];
        if (seen > p.key_symbols + p.leak_bounds[j]) {
            return "wiretap set " + std::to_string(j + 1) + " carries " + std::to_string(seen) + " symbols, more than n_K + c' = " +
                   std::to_string(p.key_symbols + p.leak_bounds[j]);
        }
    }
    return std::nullopt;
}

/// Smallest n making n R_M, n R_K, n r_i, n c_j and n C_i integral, together
/// with the scaled quantities. The tuple must satisfy the key-recovered
/// region with this witness.
inline IntegerParameters scale_to_integers(const RateTuple& tuple, const RateAllocation& witness,
                                           const ProblemInstance& inst) {
    detail::check_dimensions(inst, tuple.equivocations.size());
    if (witness.rates.size() != inst.channel_count()) {
        throw DimensionMismatch("witness has " + std::to_string(witness.rates.size()) + " rates for " +
                                std::to_string(inst.channel_count()) + " channels");
    }
    std::vector<Rational> slacks;
    for (std::size_t j = 0; j < tuple.equivocations.size(); ++j) slacks.push_back(slack(tuple, j));

    mpz_class n = 1;
    const auto absorb = [&](const Rational& v) { n = lcm(n, v.denominator()); };
    absorb(tuple.message_rate);
    absorb(tuple.key_rate);
    for (const auto& r : witness.rates) absorb(r);
    for (const auto& c : slacks) absorb(c);

    const Rational scale(mpq_class(n, 1));
    IntegerParameters p;
    p.block_length = scale.to_int64();
    p.message_symbols = (scale * tuple.message_rate).to_int64();
    p.key_symbols = (scale * tuple.key_rate).to_int64();
    for (const auto& r : witness.rates) p.channel_symbols.push_back((scale * r).to_int64());
    for (const auto& c : slacks) p.leak_bounds.push_back((scale * c).to_int64());
    for (auto cap : inst.capacities) p.block_capacities.push_back(p.block_length * cap);

    if (auto failure = integer_conditions_failure(inst, p)) {
        throw PreconditionViolation("scaled parameters violate the code conditions: " + *failure);
    }
    return p;
}

}  // namespace wiretap2

#endif  // WIRETAP2_REGION_HPP
