#ifndef WIRETAP2_CLI_HPP
#define WIRETAP2_CLI_HPP

#include "CLI11.hpp"

#include "wiretap2/audit.hpp"
#include "wiretap2/codec.hpp"
#include "wiretap2/json_io.hpp"
#include "wiretap2/pipeline.hpp"
#include "wiretap2/region.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

namespace wiretap2::cli {

/// Process exit codes.
enum Exit : int {
    ok = 0,
    usage = 1,
    bad_input = 2,
    rejected = 3,            // infeasible tuple or failing audit
    construction_failed = 4,
    internal_audit_failure = 5,
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    if (text.empty()) return out;
    std::string item;
    for (char ch : text) {
        if (ch == ',') {
            out.push_back(item);
            item.clear();
        } else if (ch != ' ') {
            item.push_back(ch);
        }
    }
    out.push_back(item);
    return out;
}

inline gf::Vector parse_symbols(const std::string& text, const gf::Field& field) {
    gf::Vector out;
    for (const auto& s : split_list(text)) {
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }) || s.size() > 9) {
            throw io::ParseError("symbol '" + s + "' is not a nonnegative integer");
        }
        const auto v = std::stoull(s);
        if (!field.contains(v)) throw io::ParseError("symbol " + s + " outside [0, q)");
        out.push_back(static_cast<gf::Element>(v));
    }
    return out;
}

inline std::string join(const gf::Vector& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

inline std::uint64_t resolve_cap(std::uint64_t flag) {
    if (flag != 0) return flag;
    if (const char* env = std::getenv("WIRETAP2_CAP")) {
        try {
            const auto v = std::stoull(env);
            if (v > 0) return v;
        } catch (const std::exception&) {
        }
        throw io::ParseError(std::string("WIRETAP2_CAP='") + env + "' is not a positive integer");
    }
    return default_enumeration_cap;
}

inline ProblemInstance load_instance(const std::string& path, std::ostream& err) {
    auto inst = io::instance_from_json(io::read_file(path));
    const auto report = validate_instance(inst);
    for (const auto& w : report.warnings) err << "warning: " << w << '\n';
    if (!report.ok()) {
        throw InvalidInstance(report.violations.front());
    }
    return inst;
}

inline void print_table(const AuditReport& report, const LinearCode& code, std::ostream& os) {
    os << "wiretap set      rows  leak(rank)  H(M|Y)(oracle)  bound  result\n";
    for (const auto& w : report.wiretaps) {
        os << std::left << std::setw(16) << format_channel_set(w.channels) << ' ' << std::setw(5) << w.observed_symbols
           << ' ' << std::setw(11) << (w.leak_rank ? std::to_string(*w.leak_rank) : "-") << ' ' << std::setw(15)
           << (w.equivocation_oracle ? w.equivocation_oracle->to_string() : "-") << ' ' << std::setw(6) << w.bound
           << ' ' << (w.pass ? "pass" : "FAIL") << '\n';
    }
    os << "decode identity: "
       << (report.decode_identity_ok ? "ok" : "FAILED") << " ("
       << (report.decode_identity_exhaustive ? "exhaustive, " : "sampled, ") << report.decode_trials << " words)\n";
    os << "n_M=" << code.params.message_symbols << " n_K=" << code.params.key_symbols
       << " n=" << code.params.block_length << " overall: " << (report.passed() ? "PASS" : "FAIL") << '\n';
}

struct Options {
    std::string instance;
    std::string tuple;
    std::string code;
    std::string variant = "general";
    std::string message_rate;
    std::string equivocations;
    std::string message;
    std::string key;
    std::string symbols;
    std::string out;
    std::uint64_t cap = 0;
    std::uint64_t seed = 0;
};

inline int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
    const auto inst = load_instance(o.instance, err);
    const auto tuple = io::tuple_from_json(io::read_file(o.tuple));
    const Variant v = o.variant == "general" ? Variant::general : Variant::key_recovered;
    const auto result = check_membership(inst, tuple, v);
    out << io::to_json(result, v).dump(2) << '\n';
    return result.feasible ? ok : rejected;
}

inline int cmd_minimize_key(const Options& o, std::ostream& out, std::ostream& err) {
    const auto inst = load_instance(o.instance, err);
    Rational message_rate;
    std::vector<Rational> equivocations;
    try {
        message_rate = Rational::parse(o.message_rate);
        for (const auto& s : split_list(o.equivocations)) equivocations.push_back(Rational::parse(s));
    } catch (const std::invalid_argument& e) {
        throw io::ParseError(e.what());
    }
    const auto result = minimize_key_rate(inst, message_rate, equivocations);
    out << io::to_json(result).dump(2) << '\n';
    return result.feasible ? ok : rejected;
}

inline int cmd_synthesize(const Options& o, std::ostream& out, std::ostream& err) {
    const auto inst = load_instance(o.instance, err);
    const auto tuple = io::tuple_from_json(io::read_file(o.tuple));
    AuditOptions options;
    options.cap = resolve_cap(o.cap);
    options.seed = o.seed;
    const auto outcome = synthesize_for_tuple(inst, tuple, options);
    switch (outcome.status) {
        case SynthesisStatus::infeasible:
            out << io::to_json(outcome.membership, Variant::general).dump(2) << '\n';
            err << "error: " << outcome.message << '\n';
            return rejected;
        case SynthesisStatus::construction_failed:
            err << "error: construction failed: " << outcome.message << '\n';
            return construction_failed;
        case SynthesisStatus::audit_failed:
            out << io::to_json(*outcome.audit).dump(2) << '\n';
            err << "error: " << outcome.message << '\n';
            return internal_audit_failure;
        case SynthesisStatus::ok:
            break;
    }
    const std::string text = io::to_json(*outcome.code).dump(2) + "\n";
    if (o.out.empty()) {
        out << text;
    } else {
        std::ofstream file(o.out);
        if (!file || !(file << text)) throw io::ParseError("cannot write '" + o.out + "'");
        out << "wrote " << o.out << " (n=" << outcome.params->block_length << ", n_M=" << outcome.params->message_symbols
            << ", n_K=" << outcome.params->key_symbols << ")\n";
    }
    return ok;
}

inline int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
    const auto code = io::code_from_json(io::read_file(o.code));
    const auto inst = load_instance(o.instance, err);
    AuditOptions options;
    options.cap = resolve_cap(o.cap);
    options.seed = o.seed;
    const auto report = full_audit(code, inst, options);
    const std::string json = io::to_json(report).dump(2) + "\n";
    if (o.out.empty()) {
        out << json;
        print_table(report, code, err);
    } else {
        std::ofstream file(o.out);
        if (!file || !(file << json)) throw io::ParseError("cannot write '" + o.out + "'");
        print_table(report, code, out);
    }
    return report.passed() ? ok : rejected;
}

inline int cmd_encode(const Options& o, std::ostream& out, std::ostream&) {
    const auto code = io::code_from_json(io::read_file(o.code));
    const MessageWord m{parse_symbols(o.message, code.field)};
    const KeyWord k{parse_symbols(o.key, code.field)};
    const auto x = encode(code, m, k);
    out << join(x.symbols) << '\n';
    const auto parts = split_by_channel(code, x);
    for (std::size_t c = 0; c < parts.size(); ++c) out << "e" << c + 1 << ": " << join(parts[c]) << '\n';
    return ok;
}

inline int cmd_decode(const Options& o, std::ostream& out, std::ostream&) {
    const auto code = io::code_from_json(io::read_file(o.code));
    const ChannelWord x{parse_symbols(o.symbols, code.field)};
    const auto [m, k] = decode(code, x);
    out << "m=" << join(m.symbols) << '\n' << "k=" << join(k.symbols) << '\n';
    return ok;
}

}  // namespace detail

/// Runs the command line (args excludes the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rate-region checks, code synthesis and secrecy audits for wiretap channel II", "wiretap2"};
    app.require_subcommand(1);
    detail::Options o;

    auto* check = app.add_subcommand("check", "decide whether a rate tuple is achievable");
    check->add_option("instance", o.instance, "instance JSON")->required();
    check->add_option("tuple", o.tuple, "rate tuple JSON")->required();
    check->add_option("--variant", o.variant, "general | key-recovered")
        ->check(CLI::IsMember({"general", "key-recovered"}));

    auto* minimize = app.add_subcommand("minimize-key", "smallest key rate for a message rate and equivocations");
    minimize->add_option("instance", o.instance, "instance JSON")->required();
    minimize->add_option("message_rate", o.message_rate, "R_M as p/q")->required();
    minimize->add_option("equivocations", o.equivocations, "comma-separated R_j values");

    auto* synth = app.add_subcommand("synthesize", "build and audit a linear code for a rate tuple");
    synth->add_option("instance", o.instance, "instance JSON")->required();
    synth->add_option("tuple", o.tuple, "rate tuple JSON")->required();
    synth->add_option("--out", o.out, "code output path (stdout when omitted)");
    synth->add_option("--cap", o.cap, "enumeration cap in states");
    synth->add_option("--seed", o.seed, "seed for sampled decode checks");

    auto* verify = app.add_subcommand("verify", "audit a code against an instance");
    verify->add_option("code", o.code, "code JSON")->required();
    verify->add_option("instance", o.instance, "instance JSON")->required();
    verify->add_option("--out", o.out, "report output path");
    verify->add_option("--cap", o.cap, "enumeration cap in states");
    verify->add_option("--seed", o.seed, "seed for sampled decode checks");

    auto* enc = app.add_subcommand("encode", "encode a message and key");
    enc->add_option("code", o.code, "code JSON")->required();
    enc->add_option("--message", o.message, "comma-separated message symbols");
    enc->add_option("--key", o.key, "comma-separated key symbols");

    auto* dec = app.add_subcommand("decode", "recover message and key from a channel word");
    dec->add_option("code", o.code, "code JSON")->required();
    dec->add_option("symbols", o.symbols, "comma-separated channel symbols")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    }

    try {
        if (check->parsed()) return detail::cmd_check(o, out, err);
        if (minimize->parsed()) return detail::cmd_minimize_key(o, out, err);
        if (synth->parsed()) return detail::cmd_synthesize(o, out, err);
        if (verify->parsed()) return detail::cmd_verify(o, out, err);
        if (enc->parsed()) return detail::cmd_encode(o, out, err);
        if (dec->parsed()) return detail::cmd_decode(o, out, err);
    } catch (const io::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return bad_input;
    } catch (const std::invalid_argument& e) {
        // Validation, dimension and layout errors.
        err << "error: " << e.what() << '\n';
        return bad_input;
    }
    return usage;
}

}  // namespace wiretap2::cli

#endif  // WIRETAP2_CLI_HPP
