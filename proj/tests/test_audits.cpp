#include <doctest.h>

#include "oracle.hpp"
#include "qeraser/audits.hpp"
#include "qeraser/scenario.hpp"
#include "support.hpp"

using namespace qeraser;
using testing_support::kind_of;

namespace {

using P = RecordPredicate;

Protocol builtin(const char* name) { return to_protocol(builtin_scenario(name)); }

std::size_t step_of(const Protocol& p, const std::string& record) {
    for (std::size_t k = 0; k < p.steps.size(); ++k) {
        const auto* m = std::get_if<MeasureStep>(&p.steps[k]);
        if (m && m->name == record) return k;
    }
    FAIL("no such record");
    return 0;
}

}  // namespace

TEST_CASE("no-signaling between the eraser variants") {
    const auto a = builtin("eraser-contingent");
    const auto b = builtin("eraser-whichpath");
    CHECK(no_signaling_audit(a, b, "signal") <= 1e-12);
    CHECK(no_signaling_audit(a, a, "signal") == 0.0);

    // Oracle: the signal marginal is uniform in both variants.
    for (const auto* p : {&a, &b}) {
        double ten = 0;
        for (const auto& [rec, pr] : oracle::run(*p))
            if (rec.at("D") == "10") ten += pr;
        CHECK(std::abs(ten - 0.5) < 1e-12);
    }
}

TEST_CASE("no-signaling with an extra phase on the idler") {
    auto a = builtin("eraser-contingent");
    auto b = a;
    b.steps.insert(b.steps.begin() + 1, UnitaryStep{Phase{"i1", 0.7}});
    CHECK(no_signaling_audit(a, b, "signal") <= 1e-12);
    CHECK(kind_of([&] { no_signaling_audit(a, b, "idler"); }) == ErrorKind::AuditPrecondition);
}

TEST_CASE("no-signaling preconditions") {
    const auto a = builtin("eraser-contingent");
    auto b = builtin("eraser-whichpath");
    CHECK(kind_of([&] { no_signaling_audit(a, b, "nowhere"); }) == ErrorKind::AuditPrecondition);
    auto touched = b;
    touched.steps.insert(touched.steps.begin(), UnitaryStep{Phase{"s0", 0.1}});
    CHECK(kind_of([&] { no_signaling_audit(a, touched, "signal"); }) == ErrorKind::AuditPrecondition);
    auto other_start = b;
    other_start.initial = scale(b.initial, -1.0);
    CHECK(kind_of([&] { no_signaling_audit(a, other_start, "signal"); }) == ErrorKind::AuditPrecondition);
    auto other_wings = b;
    other_wings.wings.pop_back();
    CHECK(kind_of([&] { no_signaling_audit(a, other_wings, "signal"); }) == ErrorKind::AuditPrecondition);
    CHECK(wing_records(a, *a.find_wing("signal")) == std::vector<std::string>{"D"});
}

TEST_CASE("deferred measurement") {
    const auto p = builtin("epr-bs");
    const auto deferred = deferred_measurement(p, step_of(p, "W"));
    CHECK(deferred.modes().size() == p.modes().size() + 2);
    CHECK(deferred.modes().contains("ptr_W_G0"));
    CHECK(std::holds_alternative<DephaseStep>(deferred.steps[deferred.steps.size() - 2]));
    CHECK(std::get<MeasureStep>(deferred.steps.back()).name == "W");
    CHECK(cut_invariance_audit(p, step_of(p, "W")) <= 1e-12);
    CHECK(cut_invariance_audit(p, step_of(p, "D")) <= 1e-12);

    const auto single = builtin("bs-single");
    CHECK(cut_invariance_audit(single, 1) <= 1e-12);
    CHECK(kind_of([&] { cut_invariance_audit(single, 0); }) == ErrorKind::AuditPrecondition);
    CHECK(kind_of([&] { cut_invariance_audit(single, 7); }) == ErrorKind::AuditPrecondition);

    const auto contingent = builtin("eraser-contingent");
    CHECK(kind_of([&] { cut_invariance_audit(contingent, step_of(contingent, "U")); }) ==
          ErrorKind::CausalityViolation);
    const auto deferable = deferable_measurements(contingent);
    CHECK(std::find(deferable.begin(), deferable.end(), step_of(contingent, "U")) == deferable.end());
    CHECK(deferable.size() == 2);
}

TEST_CASE("pointer names avoid existing labels") {
    Protocol p;
    p.initial = basis_state({"a", "ptr_D_a"}, {{"a", 1}, {"ptr_D_a", 0}});
    p.steps = {MeasureStep{{"a"}, "D"}};
    const auto d = deferred_measurement(p, 0);
    CHECK(d.modes().contains("ptr_D_a_1"));
    CHECK(cut_invariance_audit(p, 0) == 0.0);
}

TEST_CASE("cut invariance holds for every deferable measurement of every builtin") {
    for (const auto& name : builtin_names()) {
        const auto p = to_protocol(builtin_scenario(name));
        for (std::size_t k : deferable_measurements(p)) {
            CAPTURE(name);
            CAPTURE(k);
            CHECK(cut_invariance_audit(p, k) <= 1e-12);
        }
    }
}

TEST_CASE("causal consistency") {
    const auto both = builtin("epr-bs-both");
    const auto tt = P::both(P::equals("S", "10"), P::equals("I", "10"));
    const auto rr = P::both(P::equals("S", "01"), P::equals("I", "01"));
    CHECK(causal_consistency_audit(both, tt) <= 1e-12);
    CHECK(causal_consistency_audit(both, rr) <= 1e-12);
    CHECK(causal_consistency_audit(both, P::constant(false)) == 0.0);

    const auto which = builtin("eraser-whichpath");
    const auto d1_u3 = P::both(P::equals("D", "10"), P::equals("U", "10"));
    CHECK(std::abs(causal_consistency_audit(which, d1_u3) - 0.25) <= 1e-12);
    CHECK(causal_consistency_audit(builtin("eraser-contingent"), d1_u3) <= 1e-12);
}

TEST_CASE("filtering versus switching") {
    const auto sw = builtin("eraser-contingent");
    const auto filt = builtin("eraser-filtered");
    const auto gate = P::equals("U", "01");
    CHECK(filtering_vs_switching_equivalence(sw, filt, gate) <= 1e-12);

    const auto fv = filtered_variant(sw, gate);
    CHECK(fv.steps == filt.steps);
    CHECK(kind_of([&] { filtered_variant(sw, P::equals("U", "10")); }) == ErrorKind::AuditPrecondition);
    CHECK(kind_of([&] { filtering_vs_switching_equivalence(sw, sw, gate); }) ==
          ErrorKind::AuditPrecondition);
}

TEST_CASE("always-true gate reduces both sides to the unconditional protocol") {
    auto sw = builtin("eraser-contingent");
    for (auto& s : sw.steps)
        if (auto* c = std::get_if<ConditionalStep>(&s)) c->condition = P::constant(true);
    const auto filt = filtered_variant(sw, P::constant(true));
    CHECK(filtering_vs_switching_equivalence(sw, filt, P::constant(true)) == 0.0);
}

TEST_CASE("zero-probability gate") {
    auto sw = builtin("eraser-contingent");
    const auto never = P::both(P::equals("U", "01"), P::equals("U", "10"));
    for (auto& s : sw.steps)
        if (auto* c = std::get_if<ConditionalStep>(&s)) c->condition = never;
    const auto filt = filtered_variant(sw, never);
    CHECK(kind_of([&] { filtering_vs_switching_equivalence(sw, filt, never); }) ==
          ErrorKind::ConditioningOnNull);
}
