#include <doctest.h>

#include <random>

#include "gen.hpp"
#include "oracle.hpp"
#include "qeraser/optics.hpp"
#include "support.hpp"

using namespace qeraser;
using testing_support::I;
using testing_support::kind_of;

namespace {

// Largest amplitude difference between the engine and the dense oracle.
double oracle_gap(const PureState& engine, const oracle::Dense& dense) {
    double gap = 0;
    for (std::size_t idx = 0; idx < dense.amp.size(); ++idx) {
        BasisConfig c;
        for (std::size_t i = 0; i < dense.names.size(); ++i)
            c.set(ModeLabel(dense.names[i]), (idx >> i) & 1);
        gap = std::max(gap, std::abs(engine.amplitude(c) - dense.amp[idx]));
    }
    return gap;
}

}  // namespace

TEST_CASE("single photon on a symmetric beam splitter") {
    const auto in = basis_state({"a", "b"}, {{"a", 1}, {"b", 0}});
    const auto out = apply_element(in, BeamSplitter{"a", "b"});
    CHECK(std::abs(out.amplitude({{"a", 1}, {"b", 0}}) - kInvSqrt2) < 1e-15);
    CHECK(std::abs(out.amplitude({{"a", 0}, {"b", 1}}) - I * kInvSqrt2) < 1e-15);

    const auto vac = vacuum({"a", "b"});
    CHECK(max_amplitude_distance(apply_element(vac, BeamSplitter{"a", "b"}), vac) == 0.0);
}

TEST_CASE("backward relation through the splitter") {
    const auto r = basis_state({"a", "b"}, {{"a", 0}, {"b", 1}});
    const auto back = apply_element(r, BeamSplitter{"a", "b"}, Direction::Reverse);
    CHECK(std::abs(back.amplitude({{"a", 1}, {"b", 0}}) + I * kInvSqrt2) < 1e-15);
    CHECK(std::abs(back.amplitude({{"a", 0}, {"b", 1}}) - kInvSqrt2) < 1e-15);
}

TEST_CASE("entangled input through the splitter and port relabel") {
    const auto in = superpose({{{{"g0", 1}, {"g1", 0}, {"G0", 1}, {"G1", 0}}, kInvSqrt2},
                               {{{"g0", 0}, {"g1", 1}, {"G0", 0}, {"G1", 1}}, kInvSqrt2}});
    const Circuit c{{BeamSplitter{"g0", "g1"}, Relabel{{{"g0", "gt"}, {"g1", "gr"}}}}};
    const auto out = apply_circuit(in, c);
    CHECK(out.modes() == ModeSet{"G0", "G1", "gr", "gt"});
    CHECK(out.size() == 4);
    const auto amp = [&](int gt, int gr, int G0, int G1) {
        return out.amplitude({{"gt", gt}, {"gr", gr}, {"G0", G0}, {"G1", G1}});
    };
    CHECK(std::abs(amp(1, 0, 1, 0) - 0.5) < 1e-15);
    CHECK(std::abs(amp(1, 0, 0, 1) - 0.5 * I) < 1e-15);
    CHECK(std::abs(amp(0, 1, 1, 0) - 0.5 * I) < 1e-15);
    CHECK(std::abs(amp(0, 1, 0, 1) - 0.5) < 1e-15);

    const auto round = apply_circuit(out, c, Direction::Reverse);
    CHECK(fidelity(round, in) >= 1.0 - 1e-12);
    CHECK(max_amplitude_distance(round, in) < 1e-15);
}

TEST_CASE("two splitters compose to a swap with phase") {
    const auto in = basis_state({"a", "b"}, {{"a", 1}, {"b", 0}});
    const auto out = apply_circuit(in, Circuit{{BeamSplitter{"a", "b"}, BeamSplitter{"a", "b"}}});
    CHECK(out.size() == 1);
    CHECK(std::abs(out.amplitude({{"a", 0}, {"b", 1}}) - I) < 1e-15);
    CHECK(max_amplitude_distance(apply_circuit(in, Circuit{}), in) == 0.0);
}

TEST_CASE("phase") {
    const auto in = superpose({{{{"a", 1}, {"b", 0}}, kInvSqrt2}, {{{"a", 0}, {"b", 1}}, kInvSqrt2}});
    const auto out = apply_element(in, Phase{"b", std::numbers::pi / 2});
    CHECK(std::abs(out.amplitude({{"a", 0}, {"b", 1}}) - I * kInvSqrt2) < 1e-15);
    CHECK(std::abs(out.amplitude({{"a", 1}, {"b", 0}}) - kInvSqrt2) < 1e-15);
    const auto back = apply_element(out, Phase{"b", std::numbers::pi / 2}, Direction::Reverse);
    CHECK(max_amplitude_distance(back, in) < 1e-15);
}

TEST_CASE("relabel renames and permutes") {
    const auto in = basis_state({"s0", "d1"}, {{"s0", 1}, {"d1", 0}});
    const auto swapped = apply_element(in, Relabel{{{"s0", "d1"}, {"d1", "s0"}}});
    CHECK(swapped.modes() == in.modes());
    CHECK(swapped.amplitude({{"s0", 0}, {"d1", 1}}) == Amplitude{1.0});
    CHECK(preserves_mode_set(Relabel{{{"s0", "d1"}, {"d1", "s0"}}}));
    CHECK_FALSE(preserves_mode_set(Relabel{{{"s0", "x"}}}));
    CHECK(preserves_mode_set(BeamSplitter{"a", "b"}));

    const auto renamed = apply_element(in, Relabel{{{"s0", "x"}}});
    CHECK(renamed.modes() == ModeSet{"d1", "x"});
    const auto back = apply_element(renamed, Relabel{{{"s0", "x"}}}, Direction::Reverse);
    CHECK(back.modes() == in.modes());
}

TEST_CASE("invalid elements") {
    const auto both = basis_state({"a", "b"}, {{"a", 1}, {"b", 1}});
    CHECK(kind_of([&] { apply_element(both, BeamSplitter{"a", "b"}); }) ==
          ErrorKind::MultiPhotonUnsupported);
    const auto a = basis_state({"a", "b"}, {{"a", 1}, {"b", 0}});
    CHECK(kind_of([&] { apply_element(a, BeamSplitter{"a", "a"}); }) == ErrorKind::ConfigurationMismatch);
    CHECK(kind_of([&] { apply_element(a, BeamSplitter{"a", "z"}); }) == ErrorKind::ConfigurationMismatch);
    CHECK(kind_of([&] { apply_element(a, Phase{"z", 1.0}); }) == ErrorKind::ConfigurationMismatch);
    CHECK(kind_of([&] { apply_element(a, Relabel{{{"a", "b"}}}); }) == ErrorKind::LabelCollision);
    CHECK(kind_of([&] { apply_element(a, Relabel{{{"z", "y"}}}); }) == ErrorKind::ConfigurationMismatch);
    CHECK(kind_of([&] { apply_element(a, Relabel{{{"a", "x"}, {"b", "x"}}}); }) ==
          ErrorKind::LabelCollision);
}

TEST_CASE("describe") {
    CHECK(describe(BeamSplitter{"a", "b"}) == "bs a b");
    CHECK(describe(Relabel{{{"a", "b"}, {"b", "a"}}}) == "relabel a->b b->a");
}

TEST_CASE("engine matches the dense oracle on random circuits") {
    std::mt19937_64 rng(20261015);
    for (int trial = 0; trial < 300; ++trial) {
        const auto layout = gen::random_layout(rng, 2, 4);
        const auto state = gen::random_state(rng, gen::configurations(layout));
        const auto circuit = gen::random_circuit(rng, layout, 8);
        const auto fwd = apply_circuit(state, circuit);
        const auto dense = oracle::evolve(oracle::from_state(state), circuit, false);
        CHECK(oracle_gap(fwd, dense) < 1e-14);
        const auto back = apply_circuit(state, circuit, Direction::Reverse);
        CHECK(oracle_gap(back, oracle::evolve(oracle::from_state(state), circuit, true)) < 1e-14);
    }
}

TEST_CASE("unitarity and reversibility over random states and elements") {
    std::mt19937_64 rng(99);
    double worst_norm = 0, worst_fid = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto layout = gen::random_layout(rng, 3, 3);
        const auto state = gen::random_state(rng, gen::configurations(layout));
        const auto e = gen::random_element(rng, layout);
        const auto fwd = apply_element(state, e);
        worst_norm = std::max(worst_norm, std::abs(fwd.norm_sq() - 1.0));
        const auto round = apply_element(fwd, e, Direction::Reverse);
        worst_fid = std::max(worst_fid, 1.0 - fidelity(round, state));
        const auto other = apply_element(apply_element(state, e, Direction::Reverse), e);
        worst_fid = std::max(worst_fid, 1.0 - fidelity(other, state));
    }
    CHECK(worst_norm <= 1e-12);
    CHECK(worst_fid <= 1e-12);
}
