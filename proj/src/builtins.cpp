#include <algorithm>
#include <array>

#include "qeraser/scenario.hpp"

namespace qeraser {
namespace {

struct Builtin {
    std::string_view name;
    std::string_view source;
};

constexpr std::string_view kBsSingle = R"(scenario bs-single
modes a b
state 1 |a=1, b=0>
step bs a b
step measure a b as D
)";

constexpr std::string_view kEprBs = R"(# Photon g entangled with a which-path qubit G, then sent through a
# symmetric beam splitter whose outputs are renamed to the t/r ports.
scenario epr-bs
modes g0 g1 G0 G1
state 1/sqrt2 |g0=1, g1=0, G0=1, G1=0> + 1/sqrt2 |g0=0, g1=1, G0=0, G1=1>
step bs g0 g1
step relabel g0->gt g1->gr
step measure G0 G1 as W
step measure gt gr as D
wing photon: g0 g1 gt gr
wing path: G0 G1
audit cut-invariance W
audit cut-invariance D
audit consistency D == 10 && D == 01
)";

constexpr std::string_view kPenroseReverse = R"(# Collapse at the r port and at G0, then run the collapse rule backward
# through the beam splitter. The source only emits g0 G0 and g1 G1 pairs.
scenario penrose-reverse
modes g0 g1 G0 G1
state 1/sqrt2 |g0=1, g1=0, G0=1, G1=0> + 1/sqrt2 |g0=0, g1=1, G0=0, G1=1>
step bs g0 g1
step relabel g0->gt g1->gr
step measure gt gr as D
step measure G0 G1 as W
wing photon: g0 g1 gt gr
wing path: G0 G1
support |g0=1, g1=0, G0=1, G1=0> |g0=0, g1=1, G0=0, G1=1>
audit retro |gr=1, G0=1> expect 0.5
audit retro |gt=1, G0=1> expect 0.5
audit retro |>
audit cut-invariance D
audit cut-invariance W
)";

constexpr std::string_view kEprBsBoth = R"(# Both halves of an entangled pair meet their own beam splitter. The
# outputs are perfectly anticorrelated: transmit/transmit and
# reflect/reflect never happen.
scenario epr-bs-both
modes s0 s1 i0 i1
state 1/sqrt2 |s0=1, s1=0, i0=1, i1=0> + 1/sqrt2 |s0=0, s1=1, i0=0, i1=1>
step bs s0 s1
step bs i0 i1
step relabel s0->st s1->sr i0->it i1->ir
step measure st sr as S
step measure it ir as I
wing signal: s0 s1 st sr
wing idler: i0 i1 it ir
audit consistency S == 10 && I == 10
audit consistency S == 01 && I == 01
audit cut-invariance S
audit cut-invariance I
)";

// U == 10 is a click at U3 (port i0), U == 01 a click at U4 (port i1).
// D == 10 means the signal left its splitter towards the D1 arm.
constexpr std::string_view kEraserContingent = R"(# Delayed-choice eraser with contingent detection. The idler crosses an
# erasing beam splitter before detectors U3 (i0) and U4 (i1). The signal
# crosses its own splitter into arms s0 (towards D1) and s1. Only a U4
# click swings the mirror that sends arm s0 into detector d1.
scenario eraser-contingent
modes s0 s1 i0 i1 d1
state 1/sqrt2 |s0=1, s1=0, i0=1, i1=0> + 1/sqrt2 |s0=0, s1=1, i0=0, i1=1>
step bs i0 i1
step measure i0 i1 as U
step bs s0 s1
step measure s0 s1 as D
step if U == 01 then relabel s0->d1 d1->s0
step measure d1 as D1
wing signal: s0 s1
wing idler: i0 i1
wing station: d1
audit no-signaling eraser-whichpath signal
audit filter-equivalence eraser-filtered U == 01
audit consistency D == 10 && U == 10
audit consistency D1 == 1 && U == 10
audit cut-invariance D
audit cut-invariance D1
)";

constexpr std::string_view kEraserFiltered = R"(# Same optics as eraser-contingent, but the mirror into d1 is always in
# place. Runs without a U4 click are dropped afterwards.
scenario eraser-filtered
modes s0 s1 i0 i1 d1
state 1/sqrt2 |s0=1, s1=0, i0=1, i1=0> + 1/sqrt2 |s0=0, s1=1, i0=0, i1=1>
step bs i0 i1
step measure i0 i1 as U
step bs s0 s1
step measure s0 s1 as D
step relabel s0->d1 d1->s0
step measure d1 as D1
wing signal: s0 s1
wing idler: i0 i1
wing station: d1
audit consistency D == 10 && U == 10
audit cut-invariance U
audit cut-invariance D
audit cut-invariance D1
)";

constexpr std::string_view kEraserWhichpath = R"(# Fixed mirrors instead of the idler splitter: U3/U4 now reveal which
# path the signal took and the D ports show no interference.
scenario eraser-whichpath
modes s0 s1 i0 i1 d1
state 1/sqrt2 |s0=1, s1=0, i0=1, i1=0> + 1/sqrt2 |s0=0, s1=1, i0=0, i1=1>
step measure i0 i1 as U
step bs s0 s1
step measure s0 s1 as D
step if U == 01 then relabel s0->d1 d1->s0
step measure d1 as D1
wing signal: s0 s1
wing idler: i0 i1
wing station: d1
audit no-signaling eraser-contingent signal
audit consistency D == 10 && U == 10 expect 0.25
audit consistency D1 == 1 && U == 10
audit cut-invariance D
audit cut-invariance D1
)";

constexpr std::array<Builtin, 7> kBuiltins = {{
    {"bs-single", kBsSingle},
    {"epr-bs", kEprBs},
    {"penrose-reverse", kPenroseReverse},
    {"epr-bs-both", kEprBsBoth},
    {"eraser-contingent", kEraserContingent},
    {"eraser-filtered", kEraserFiltered},
    {"eraser-whichpath", kEraserWhichpath},
}};

}  // namespace

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& b : kBuiltins) out.emplace_back(b.name);
        return out;
    }();
    return names;
}

std::string_view builtin_source(std::string_view name) {
    for (const auto& b : kBuiltins)
        if (b.name == name) return b.source;
    std::string list;
    for (const auto& n : builtin_names()) list += (list.empty() ? "" : ", ") + n;
    throw Error(ErrorKind::UnknownScenario,
                "unknown builtin scenario '" + std::string(name) + "'; available: " + list);
}

ScenarioDoc builtin_scenario(std::string_view name) { return parse_scenario(builtin_source(name)); }

}  // namespace qeraser
