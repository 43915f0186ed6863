#include <doctest.h>

#include <random>

#include "gen.hpp"
#include "oracle.hpp"
#include "qeraser/retro.hpp"
#include "support.hpp"

using namespace qeraser;
using testing_support::I;
using testing_support::kind_of;

namespace {

const Circuit kEprCircuit{{BeamSplitter{"g0", "g1"}, Relabel{{{"g0", "gt"}, {"g1", "gr"}}}}};

SourceSupport pair_support() {
    return SourceSupport({{{"g0", 1}, {"g1", 0}, {"G0", 1}, {"G1", 0}},
                          {{"g0", 0}, {"g1", 1}, {"G0", 0}, {"G1", 1}}});
}

}  // namespace

TEST_CASE("source support") {
    const auto s = pair_support();
    CHECK(s.allowed().size() == 2);
    CHECK(s.modes() == ModeSet{"G0", "G1", "g0", "g1"});
    const auto u = s.uniform_state();
    CHECK(u.size() == 2);
    CHECK(std::abs(u.norm_sq() - 1.0) < 1e-15);
    CHECK(kind_of([] { SourceSupport({}); }) == ErrorKind::ConfigurationMismatch);
    CHECK(kind_of([] { SourceSupport({{{"a", 1}}, {{"b", 1}}}); }) == ErrorKind::ConfigurationMismatch);
}

TEST_CASE("global phase") {
    const auto one = basis_state({"a"}, {{"a", 1}});
    const auto fixed = fix_global_phase(scale(one, Amplitude{0.0, -0.3}));
    CHECK(fixed.amplitude({{"a", 1}}) == Amplitude{1.0});

    const auto two = superpose({{{{"a", 1}, {"b", 0}}, Amplitude{0, 0.8}}, {{{"a", 0}, {"b", 1}}, Amplitude{0.6, 0}}});
    const auto f2 = fix_global_phase(two);
    CHECK(f2.amplitude({{"a", 1}, {"b", 0}}) == Amplitude{0.8});
    CHECK(std::abs(f2.amplitude({{"a", 0}, {"b", 1}}) - Amplitude{0, -0.6}) < 1e-15);
    CHECK(fidelity(f2, two) == doctest::Approx(1.0));
}

TEST_CASE("collapse at the r port run backward") {
    const auto rep = reverse_collapse_analysis(pair_support(), kEprCircuit, Projector{{"gr", 1}, {"G0", 1}});
    const auto amp = [&](int g0, int g1) {
        return rep.reversed_state.amplitude({{"g0", g0}, {"g1", g1}, {"G0", 1}, {"G1", 0}});
    };
    CHECK(std::abs(amp(0, 1) - kInvSqrt2) < 1e-14);
    CHECK(std::abs(amp(1, 0) + I * kInvSqrt2) < 1e-14);
    CHECK(rep.reversed_state.size() == 2);
    REQUIRE(rep.forbidden_component.size() == 1);
    CHECK(rep.forbidden_component[0].first.at("g1") == 1);
    CHECK(std::abs(std::abs(rep.forbidden_component[0].second) - kInvSqrt2) < 1e-14);
    REQUIRE(rep.allowed_component.size() == 1);
    CHECK(rep.allowed_component[0].first.at("g0") == 1);
    CHECK(std::abs(rep.forbidden_probability - 0.5) < 1e-12);
    CHECK(forbidden_probability(rep) == rep.forbidden_probability);
}

TEST_CASE("collapse at the t port run backward") {
    const auto rep = reverse_collapse_analysis(pair_support(), kEprCircuit, Projector{{"gt", 1}, {"G0", 1}});
    CHECK(std::abs(rep.reversed_state.amplitude({{"g0", 1}, {"g1", 0}, {"G0", 1}, {"G1", 0}}) - kInvSqrt2) < 1e-14);
    CHECK(std::abs(rep.reversed_state.amplitude({{"g0", 0}, {"g1", 1}, {"G0", 1}, {"G1", 0}}) + I * kInvSqrt2) <
          1e-14);
    CHECK(std::abs(rep.forbidden_probability - 0.5) < 1e-12);
}

TEST_CASE("single photon reversal") {
    const SourceSupport s({{{"g0", 1}, {"g1", 0}}});
    const Circuit c{{BeamSplitter{"g0", "g1"}, Relabel{{{"g0", "t"}, {"g1", "r"}}}}};
    const auto rep = reverse_collapse_analysis(s, c, Projector{{"r", 1}});
    CHECK(std::abs(rep.reversed_state.amplitude({{"g0", 0}, {"g1", 1}}) - kInvSqrt2) < 1e-14);
    CHECK(std::abs(rep.reversed_state.amplitude({{"g0", 1}, {"g1", 0}}) + I * kInvSqrt2) < 1e-14);
    CHECK(std::abs(rep.forbidden_probability - 0.5) < 1e-12);

    const auto whole = reverse_collapse_analysis(s, c, Projector{});
    CHECK(whole.forbidden_probability <= 1e-12);
    CHECK(whole.forbidden_component.empty());

    CHECK(kind_of([&] { reverse_collapse_analysis(s, c, Projector{{"r", 1}, {"t", 1}}); }) ==
          ErrorKind::EmptyPostselection);
}

TEST_CASE("analyze_reversal checks the mode set") {
    const SourceSupport s({{{"g0", 1}, {"g1", 0}}});
    const auto wrong = basis_state({"x", "y"}, {{"x", 1}, {"y", 0}});
    CHECK(kind_of([&] { analyze_reversal(wrong, Circuit{}, s); }) == ErrorKind::ConfigurationMismatch);
}

TEST_CASE("uncollapsed forward images reverse into the support") {
    std::mt19937_64 rng(4242);
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto layout = gen::random_layout(rng, 2, 3);
        auto configs = gen::configurations(layout);
        std::shuffle(configs.begin(), configs.end(), rng);
        configs.resize(std::uniform_int_distribution<std::size_t>(1, configs.size())(rng));
        const SourceSupport support(configs);
        const auto circuit = gen::random_circuit(rng, layout, 6);
        const auto state = gen::random_state(rng, configs);
        const auto image = apply_circuit(state, circuit);
        worst = std::max(worst, analyze_reversal(image, circuit, support).forbidden_probability);
        worst = std::max(worst, reverse_collapse_analysis(support, circuit, Projector{}).forbidden_probability);
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("reversal agrees with the dense oracle") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const auto layout = gen::random_layout(rng, 2, 3);
        const auto configs = gen::configurations(layout);
        const auto circuit = gen::random_circuit(rng, layout, 6);
        const auto post = gen::random_state(rng, configs);
        const auto rep = analyze_reversal(post, circuit, SourceSupport({configs[0]}));
        const auto dense = oracle::evolve(oracle::from_state(post), circuit, true);
        double outside = 0;
        for (std::size_t idx = 0; idx < dense.amp.size(); ++idx) {
            std::map<std::string, int> occ;
            for (std::size_t i = 0; i < dense.names.size(); ++i) occ[dense.names[i]] = (idx >> i) & 1;
            BasisConfig c;
            for (const auto& [m, o] : occ) c.set(ModeLabel(m), o);
            if (!(c == configs[0])) outside += std::norm(dense.amp[idx]);
        }
        CHECK(std::abs(rep.forbidden_probability - outside) < 1e-12);
    }
}
