#ifndef WIRETAP2_JSON_IO_HPP
#define WIRETAP2_JSON_IO_HPP

#include "json.hpp"

#include "wiretap2/audit.hpp"
#include "wiretap2/gf.hpp"
#include "wiretap2/model.hpp"
#include "wiretap2/rational.hpp"
#include "wiretap2/region.hpp"
#include "wiretap2/synth.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace wiretap2::io {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Json parse_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(origin + ": malformed JSON: " + e.what());
    }
}

inline Json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

namespace detail {

inline const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    return j.at(key);
}

template <typename T>
T integer(const Json& j, const char* what) {
    if (!j.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
        if (j.is_number_unsigned()) return j.get<T>();
        const auto v = j.get<std::int64_t>();
        if (v < 0) throw ParseError(std::string(what) + " must be nonnegative");
        return static_cast<T>(v);
    } else {
        return j.get<T>();
    }
}

template <typename T>
std::vector<T> integer_array(const Json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
    std::vector<T> out;
    for (const auto& e : j) out.push_back(integer<T>(e, what));
    return out;
}

}  // namespace detail

inline Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) {
        try {
            return Rational::parse(j.get<std::string>());
        } catch (const std::exception& e) {
            throw ParseError(e.what());
        }
    }
    throw ParseError("rational must be an integer or a \"p/q\" string");
}

inline Json to_json(const Rational& r) { return r.to_string(); }

inline Json rationals_to_json(const std::vector<Rational>& v) {
    Json out = Json::array();
    for (const auto& r : v) out.push_back(to_json(r));
    return out;
}

inline ProblemInstance instance_from_json(const Json& j) {
    const auto q = detail::integer<std::uint64_t>(detail::field(j, "q"), "q");
    auto caps = detail::integer_array<std::int64_t>(detail::field(j, "capacities"), "capacities");
    std::vector<WiretapSet> sets;
    const Json& raw_sets = j.contains("wiretap_sets") ? j.at("wiretap_sets") : Json::array();
    if (!raw_sets.is_array()) throw ParseError("wiretap_sets must be an array");
    for (const auto& s : raw_sets) {
        WiretapSet set;
        for (auto idx : detail::integer_array<std::int64_t>(s, "wiretap channel index")) {
            if (idx < 1) throw ParseError("wiretap channel indices are 1-based");
            set.push_back(static_cast<std::size_t>(idx - 1));
        }
        sets.push_back(std::move(set));
    }
    return ProblemInstance(q, std::move(caps), std::move(sets));
}

inline Json to_json(const ProblemInstance& inst) {
    Json sets = Json::array();
    for (const auto& s : inst.wiretap_sets) {
        Json set = Json::array();
        for (auto c : s) set.push_back(c + 1);
        sets.push_back(std::move(set));
    }
    return Json{{"q", inst.q}, {"capacities", inst.capacities}, {"wiretap_sets", std::move(sets)}};
}

inline RateTuple tuple_from_json(const Json& j) {
    RateTuple t;
    t.message_rate = rational_from_json(detail::field(j, "message_rate"));
    t.key_rate = rational_from_json(detail::field(j, "key_rate"));
    if (j.contains("equivocations")) {
        const auto& e = j.at("equivocations");
        if (!e.is_array()) throw ParseError("equivocations must be an array");
        for (const auto& r : e) t.equivocations.push_back(rational_from_json(r));
    }
    return t;
}

inline Json to_json(const RateTuple& t) {
    return Json{{"message_rate", to_json(t.message_rate)},
                {"key_rate", to_json(t.key_rate)},
                {"equivocations", rationals_to_json(t.equivocations)}};
}

inline Json to_json(const IntegerParameters& p) {
    return Json{{"n", p.block_length},        {"n_M", p.message_symbols},  {"n_K", p.key_symbols},
                {"n_i", p.channel_symbols},   {"c_prime", p.leak_bounds},  {"C_prime", p.block_capacities}};
}

inline IntegerParameters params_from_json(const Json& j) {
    IntegerParameters p;
    p.block_length = detail::integer<std::int64_t>(detail::field(j, "n"), "n");
    p.message_symbols = detail::integer<std::int64_t>(detail::field(j, "n_M"), "n_M");
    p.key_symbols = detail::integer<std::int64_t>(detail::field(j, "n_K"), "n_K");
    p.channel_symbols = detail::integer_array<std::int64_t>(detail::field(j, "n_i"), "n_i");
    p.leak_bounds = detail::integer_array<std::int64_t>(detail::field(j, "c_prime"), "c_prime");
    p.block_capacities = detail::integer_array<std::int64_t>(detail::field(j, "C_prime"), "C_prime");
    return p;
}

inline Json matrix_to_json(const gf::Matrix& m) {
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols; ++c) row.push_back(m(i, c));
        out.push_back(std::move(row));
    }
    return out;
}

inline Json to_json(const LinearCode& code) {
    Json layout = Json::array();
    for (std::size_t c = 0; c < code.channel_layout.size(); ++c) {
        layout.push_back(Json{{"channel", c + 1},
                              {"first", code.channel_layout[c].first + 1},
                              {"count", code.channel_layout[c].count}});
    }
    return Json{{"field",
                 {{"p", code.field.characteristic()}, {"m", code.field.degree()}, {"modulus", code.field.modulus()}}},
                {"params", to_json(code.params)},
                {"channel_layout", std::move(layout)},
                {"generator", matrix_to_json(code.generator)}};
}

inline LinearCode code_from_json(const Json& j) {
    const Json& f = detail::field(j, "field");
    const auto p = detail::integer<std::uint32_t>(detail::field(f, "p"), "p");
    const auto m = detail::integer<unsigned>(detail::field(f, "m"), "m");
    auto modulus = detail::integer_array<std::uint32_t>(detail::field(f, "modulus"), "modulus");
    const auto pp = as_prime_power(p);
    if (!pp || pp->exponent != 1) throw ParseError("field characteristic must be prime");
    if (m < 1) throw ParseError("field degree must be positive");
    for (auto c : modulus) {
        if (c >= p) throw ParseError("modulus coefficient out of range");
    }
    std::optional<gf::Field> field;
    try {
        field.emplace(p, m, std::move(modulus));
    } catch (const gf::FieldError& e) {
        throw ParseError(e.what());
    }

    LinearCode code{*field, params_from_json(detail::field(j, "params")), {}, {}};
    const Json& layout = detail::field(j, "channel_layout");
    if (!layout.is_array()) throw ParseError("channel_layout must be an array");
    for (std::size_t c = 0; c < layout.size(); ++c) {
        const auto& e = layout[c];
        if (detail::integer<std::size_t>(detail::field(e, "channel"), "channel") != c + 1) {
            throw ParseError("channel_layout entries must be listed in channel order");
        }
        const auto first = detail::integer<std::size_t>(detail::field(e, "first"), "first");
        if (first < 1) throw ParseError("layout positions are 1-based");
        code.channel_layout.push_back({first - 1, detail::integer<std::size_t>(detail::field(e, "count"), "count")});
    }

    const Json& g = detail::field(j, "generator");
    if (!g.is_array()) throw ParseError("generator must be an array of rows");
    std::vector<gf::Vector> rows;
    for (const auto& r : g) {
        auto row = detail::integer_array<gf::Element>(r, "generator entry");
        for (auto e : row) {
            if (!code.field.contains(e)) throw ParseError("generator entry " + std::to_string(e) + " outside the field");
        }
        rows.push_back(std::move(row));
    }
    const std::size_t width = rows.empty() ? 0 : rows.front().size();
    try {
        code.generator = gf::Matrix::from_rows(rows, width);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    if (code.params.message_symbols < 0 || code.params.key_symbols < 0 ||
        code.generator.rows != static_cast<std::size_t>(code.params.total_symbols()) ||
        (code.generator.rows != 0 && code.generator.cols != code.generator.rows)) {
        throw ParseError("generator must be square of size n_M + n_K");
    }
    if (code.generator.rows == 0) code.generator = gf::Matrix(0, 0);
    return code;
}

inline Json to_json(const RegionConstraint& c) {
    return Json{{"label", c.label}, {"inequality", c.describe()}};
}

inline Json to_json(const Certificate& cert) {
    Json terms = Json::array();
    for (const auto& t : cert.terms) {
        Json term = to_json(t.constraint);
        term["multiplier"] = to_json(t.multiplier);
        terms.push_back(std::move(term));
    }
    return Json{{"terms", std::move(terms)}, {"combined", cert.combined()}};
}

inline Json to_json(const FeasibilityResult& r, Variant variant) {
    Json out{{"variant", to_string(variant)}, {"feasible", r.feasible}};
    if (r.witness) out["witness"] = rationals_to_json(r.witness->rates);
    if (r.certificate) out["certificate"] = to_json(*r.certificate);
    return out;
}

inline Json to_json(const KeyRateResult& r) {
    Json out{{"feasible", r.feasible}};
    if (r.feasible) {
        out["key_rate"] = to_json(r.key_rate);
        out["witness"] = rationals_to_json(r.witness.rates);
    }
    if (r.certificate) out["certificate"] = to_json(*r.certificate);
    return out;
}

inline Json to_json(const AuditReport& report) {
    const auto opt_bool = [](const std::optional<bool>& b) { return b ? Json(*b) : Json(nullptr); };
    const auto opt_rat = [](const std::optional<Rational>& r) { return r ? to_json(*r) : Json(nullptr); };
    Json sets = Json::array();
    for (const auto& w : report.wiretaps) {
        Json channels = Json::array();
        for (auto c : w.channels) channels.push_back(c + 1);
        sets.push_back(Json{{"channels", std::move(channels)},
                            {"observed_symbols", w.observed_symbols},
                            {"bound", w.bound},
                            {"leak_rank", w.leak_rank ? Json(*w.leak_rank) : Json(nullptr)},
                            {"equivocation_oracle", opt_rat(w.equivocation_oracle)},
                            {"view_entropy", opt_rat(w.view_entropy)},
                            {"routes_agree", w.routes_agree},
                            {"lemma1_ok", opt_bool(w.lemma1_ok)},
                            {"lemma5_ok", opt_bool(w.lemma5_ok)},
                            {"pass", w.pass}});
    }
    return Json{{"passed", report.passed()},
                {"generator_invertible", report.generator_invertible},
                {"canonical", report.canonical},
                {"decode_identity_checked", report.decode_identity_checked},
                {"decode_identity_exhaustive", report.decode_identity_exhaustive},
                {"decode_identity_ok", report.decode_identity_ok},
                {"decode_trials", report.decode_trials},
                {"oracle_evaluated", report.oracle_evaluated},
                {"channel_entropy", opt_rat(report.channel_entropy)},
                {"channel_entropy_ok", opt_bool(report.channel_entropy_ok)},
                {"lemma1_ok", opt_bool(report.lemma1_ok)},
                {"lemma5_ok", opt_bool(report.lemma5_ok)},
                {"wiretap_sets", std::move(sets)}};
}

}  // namespace wiretap2::io

#endif  // WIRETAP2_JSON_IO_HPP
