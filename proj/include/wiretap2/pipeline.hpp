#ifndef WIRETAP2_PIPELINE_HPP
#define WIRETAP2_PIPELINE_HPP

#include "wiretap2/audit.hpp"
#include "wiretap2/model.hpp"
#include "wiretap2/region.hpp"
#include "wiretap2/synth.hpp"

#include <optional>
#include <string>

namespace wiretap2 {

enum class SynthesisStatus { ok, infeasible, construction_failed, audit_failed };

struct SynthesisOutcome {
    SynthesisStatus status = SynthesisStatus::infeasible;
    FeasibilityResult membership;
    std::optional<RateTuple> reduced;
    std::optional<IntegerParameters> params;
    std::optional<LinearCode> code;
    std::optional<AuditReport> audit;
    std::string message;
};

/// Region check, key reduction to the witness' minimum, integer scaling,
/// construction and a full audit. A code is only returned when it passes.
inline SynthesisOutcome synthesize_for_tuple(const ProblemInstance& inst, const RateTuple& tuple,
                                             const AuditOptions& options = {}) {
    SynthesisOutcome out;
    out.membership = check_membership(inst, tuple, Variant::general);
    if (!out.membership.feasible) {
        out.status = SynthesisStatus::infeasible;
        out.message = "rate tuple is not achievable";
        return out;
    }
    const RateAllocation& witness = *out.membership.witness;
    out.reduced = reduce_key(tuple, witness);
    out.params = scale_to_integers(*out.reduced, witness, inst);
    try {
        out.code = synthesize(inst, *out.params);
    } catch (const ConstructionFailed& e) {
        out.status = SynthesisStatus::construction_failed;
        out.message = e.what();
        return out;
    }
    out.audit = full_audit(*out.code, inst, options);
    if (!out.audit->passed()) {
        out.status = SynthesisStatus::audit_failed;
        out.message = "synthesized code failed its audit";
        out.code.reset();
        return out;
    }
    out.status = SynthesisStatus::ok;
    return out;
}

}  // namespace wiretap2

#endif  // WIRETAP2_PIPELINE_HPP
