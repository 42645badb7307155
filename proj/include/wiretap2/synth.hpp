#ifndef WIRETAP2_SYNTH_HPP
#define WIRETAP2_SYNTH_HPP

#include "wiretap2/gf.hpp"
#include "wiretap2/model.hpp"
#include "wiretap2/region.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wiretap2 {

/// Contiguous range of symbol positions carried by one channel.
struct ChannelSpan {
    std::size_t first = 0;
    std::size_t count = 0;

    friend bool operator==(const ChannelSpan&, const ChannelSpan&) = default;
};

/// A linear code x = (A | B) (m; k). Positions 0..n_K-1 carry the key in the
/// clear; position n_K + t carries m_t + b . k. Channels take consecutive runs
/// of positions in channel order.
struct LinearCode {
    gf::Field field;
    IntegerParameters params;
    gf::Matrix generator;  // (n_M + n_K) square; message columns first, then key columns
    std::vector<ChannelSpan> channel_layout;

    [[nodiscard]] std::size_t message_length() const { return static_cast<std::size_t>(params.message_symbols); }
    [[nodiscard]] std::size_t key_length() const { return static_cast<std::size_t>(params.key_symbols); }
    [[nodiscard]] std::size_t length() const { return message_length() + key_length(); }

    /// Rows of the key block B, one per position.
    [[nodiscard]] std::vector<gf::Vector> b_vectors() const {
        std::vector<gf::Vector> out;
        const auto key = generator.columns(message_length(), key_length());
        for (std::size_t i = 0; i < key.rows; ++i) out.emplace_back(key.row(i).begin(), key.row(i).end());
        return out;
    }

    /// Positions observed by a wiretapper holding the given channels, ascending.
    [[nodiscard]] std::vector<std::size_t> positions(const WiretapSet& channels) const {
        std::vector<std::size_t> out;
        for (auto c : channels) {
            const auto& span = channel_layout.at(c);
            for (std::size_t t = 0; t < span.count; ++t) out.push_back(span.first + t);
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

inline std::vector<ChannelSpan> layout_for(const IntegerParameters& params) {
    std::vector<ChannelSpan> layout;
    std::size_t next = 0;
    for (auto n : params.channel_symbols) {
        layout.push_back({next, static_cast<std::size_t>(n)});
        next += static_cast<std::size_t>(n);
    }
    return layout;
}

class InvalidParams : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ConstructionFailed : public std::runtime_error {
public:
    ConstructionFailed(std::size_t position, std::size_t spans)
        : std::runtime_error("no admissible key-mixing vector at position " + std::to_string(position + 1) + ": " +
                             std::to_string(spans) + " unsaturated wiretap spans cover the whole key space"),
          position_(position),
          spans_(spans) {}

    [[nodiscard]] std::size_t position() const { return position_; }
    [[nodiscard]] std::size_t spans() const { return spans_; }

private:
    std::size_t position_;
    std::size_t spans_;
};

/// One extension step of the construction, for diagnostics.
struct ExtensionStep {
    std::size_t position = 0;
    std::vector<gf::Matrix> excluded_spans;
    gf::Vector chosen;
};

namespace detail {

/// Lexicographically first vector of F_q^dim outside every space.
inline std::optional<gf::Vector> first_vector_outside(const gf::Field& field,
                                                      const std::vector<const gf::RowSpace*>& spaces,
                                                      std::size_t dim) {
    gf::Vector v(dim, 0);
    for (;;) {
        bool covered = false;
        for (const auto* s : spaces) {
            if (s->contains(v)) {
                covered = true;
                break;
            }
        }
        if (!covered) return v;
        // Odometer, rightmost coordinate fastest.
        std::size_t i = dim;
        while (i > 0) {
            --i;
            if (++v[i] < field.size()) break;
            v[i] = 0;
            if (i == 0) return std::nullopt;
        }
        if (dim == 0) return std::nullopt;
    }
}

}  // namespace detail

/// The lexicographically smallest vector of F_q^dimension (leftmost
/// coordinate most significant) lying outside the row span of every given
/// matrix, or nullopt when the spans cover the space.
inline std::optional<gf::Vector> choose_extension_vector(const gf::Field& field, const std::vector<gf::Matrix>& spans,
                                                         std::size_t dimension) {
    std::vector<gf::RowSpace> spaces;
    spaces.reserve(spans.size());
    for (const auto& m : spans) {
        if (m.cols != dimension) throw std::invalid_argument("span width does not match the key dimension");
        gf::RowSpace s(field, dimension);
        for (std::size_t i = 0; i < m.rows; ++i) s.insert(m.row(i));
        spaces.push_back(std::move(s));
    }
    std::vector<const gf::RowSpace*> ptrs;
    for (const auto& s : spaces) ptrs.push_back(&s);
    return detail::first_vector_outside(field, ptrs, dimension);
}

/// Builds the code for integer parameters: key symbols in the clear at the
/// first n_K positions, then each message symbol masked by b . k, where b is
/// chosen so that every wiretap set's key block stays of full rank.
inline LinearCode synthesize(const ProblemInstance& inst, const IntegerParameters& params,
                             std::vector<ExtensionStep>* trace = nullptr) {
    require_valid(inst);
    if (auto failure = integer_conditions_failure(inst, params)) throw InvalidParams(*failure);
    for (std::size_t i = 0; i < inst.channel_count(); ++i) {
        if (params.block_capacities[i] != params.block_length * inst.capacities[i]) {
            throw InvalidParams("block capacity of channel " + std::to_string(i + 1) + " is not n * C_i");
        }
    }

    LinearCode code{gf::make_field(inst.q), params, {}, layout_for(params)};
    const std::size_t n_m = code.message_length();
    const std::size_t n_k = code.key_length();
    const std::size_t total = n_m + n_k;

    std::vector<std::size_t> channel_of(total);
    for (std::size_t c = 0; c < code.channel_layout.size(); ++c) {
        const auto& span = code.channel_layout[c];
        for (std::size_t t = 0; t < span.count; ++t) channel_of[span.first + t] = c;
    }

    const std::size_t d = inst.wiretap_count();
    std::vector<gf::RowSpace> spaces(d, gf::RowSpace(code.field, n_k));
    std::vector<std::vector<gf::Vector>> seen_rows(d);

    std::vector<gf::Vector> b(total);
    for (std::size_t pos = 0; pos < total; ++pos) {
        if (pos < n_k) {
            b[pos].assign(n_k, 0);
            b[pos][pos] = 1;
        } else {
            std::vector<const gf::RowSpace*> excluded;
            std::vector<std::size_t> excluded_sets;
            for (std::size_t j = 0; j < d; ++j) {
                if (inst.in_wiretap_set(j, channel_of[pos]) && seen_rows[j].size() < n_k) {
                    excluded.push_back(&spaces[j]);
                    excluded_sets.push_back(j);
                }
            }
            auto chosen = detail::first_vector_outside(code.field, excluded, n_k);
            if (!chosen) throw ConstructionFailed(pos, excluded.size());
            b[pos] = std::move(*chosen);
            if (trace) {
                ExtensionStep step{pos, {}, b[pos]};
                for (auto j : excluded_sets) step.excluded_spans.push_back(gf::Matrix::from_rows(seen_rows[j], n_k));
                trace->push_back(std::move(step));
            }
        }
        for (std::size_t j = 0; j < d; ++j) {
            if (inst.in_wiretap_set(j, channel_of[pos])) {
                spaces[j].insert(b[pos]);
                seen_rows[j].push_back(b[pos]);
            }
        }
    }

    code.generator = gf::Matrix(total, total);
    for (std::size_t pos = 0; pos < total; ++pos) {
        if (pos >= n_k) code.generator(pos, pos - n_k) = 1;
        for (std::size_t t = 0; t < n_k; ++t) code.generator(pos, n_m + t) = b[pos][t];
    }

    for (std::size_t j = 0; j < d; ++j) {
        const std::size_t rows = seen_rows[j].size();
        if (spaces[j].dimension() != std::min(rows, n_k)) {
            throw std::logic_error("synthesized key block of wiretap set " + std::to_string(j + 1) + " is not full rank");
        }
    }
    return code;
}

/// Lowers the key rate to sum r - R_M, the least key the witness needs;
/// discarding surplus key symbols never helps a wiretapper.
inline RateTuple reduce_key(const RateTuple& tuple, const RateAllocation& witness) {
    for (const auto& r : witness.rates) {
        if (r.sign() < 0) throw PreconditionViolation("witness has a negative channel rate");
    }
    const Rational total = witness.total();
    if (total < tuple.message_rate) throw PreconditionViolation("witness carries less than the message rate");
    Rational needed = total - tuple.message_rate;
    if (tuple.key_rate < needed) throw PreconditionViolation("key rate below what the witness requires");
    RateTuple out = tuple;
    out.key_rate = needed.sign() < 0 ? Rational() : needed;
    return out;
}

}  // namespace wiretap2

#endif  // WIRETAP2_SYNTH_HPP
