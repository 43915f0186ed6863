#include <doctest.h>

#include <random>

#include "gen.hpp"
#include "qeraser/state.hpp"
#include "support.hpp"

using namespace qeraser;
using testing_support::I;
using testing_support::kind_of;

namespace {

PureState epr_input() {
    return superpose({{{{"g0", 1}, {"g1", 0}, {"G0", 1}, {"G1", 0}}, kInvSqrt2},
                      {{{"g0", 0}, {"g1", 1}, {"G0", 0}, {"G1", 1}}, kInvSqrt2}});
}

}  // namespace

TEST_CASE("labels and mode sets") {
    CHECK(is_valid_identifier("g0"));
    CHECK(is_valid_identifier("_x9"));
    CHECK_FALSE(is_valid_identifier("9g"));
    CHECK_FALSE(is_valid_identifier(""));
    CHECK_FALSE(is_valid_identifier("a-b"));
    CHECK(kind_of([] { ModeLabel("a b"); }) == ErrorKind::InvalidLabel);

    ModeSet m{"b", "a", "c"};
    CHECK(m.labels() == std::vector<ModeLabel>{"a", "b", "c"});
    CHECK(m.index_of("c") == 2u);
    CHECK_FALSE(m.index_of("z"));
    CHECK(m.bit("a") > m.bit("c"));
    CHECK(kind_of([] { ModeSet{"a", "a"}; }) == ErrorKind::LabelCollision);

    std::vector<ModeLabel> many;
    for (int i = 0; i < 65; ++i) many.emplace_back("m" + std::to_string(i));
    CHECK(kind_of([&] { ModeSet{many}; }) == ErrorKind::CapacityExceeded);
    many.pop_back();
    CHECK(ModeSet(many).size() == 64);
}

TEST_CASE("basis_state") {
    const auto s = basis_state({"g0", "g1"}, {{"g0", 1}, {"g1", 0}});
    CHECK(s.size() == 1);
    CHECK(s.norm_sq() == 1.0);
    CHECK(s.amplitude({{"g0", 1}, {"g1", 0}}) == Amplitude{1.0});
    CHECK(s.to_string() == "(1+0i)|g0=1, g1=0>");

    const auto four = basis_state({"g0", "g1", "G0", "G1"}, {{"g0", 1}, {"g1", 0}, {"G0", 1}, {"G1", 0}});
    CHECK(four.amplitude({{"g0", 1}, {"g1", 0}, {"G0", 1}, {"G1", 0}}) == Amplitude{1.0});

    const auto vac = basis_state({"g0"}, {{"g0", 0}});
    CHECK(vac.norm_sq() == 1.0);
    CHECK(max_amplitude_distance(vac, vacuum({"g0"})) == 0.0);

    CHECK(kind_of([] { basis_state({"a", "b"}, {{"a", 1}}); }) == ErrorKind::ConfigurationMismatch);
    CHECK(kind_of([] { BasisConfig c; c.set("a", 2); }) == ErrorKind::ConfigurationMismatch);
}

TEST_CASE("superpose sums duplicates and keeps the norm it is given") {
    const auto plus = superpose({{{{"g0", 1}, {"g1", 0}}, kInvSqrt2}, {{{"g0", 0}, {"g1", 1}}, kInvSqrt2}});
    CHECK(plus.norm_sq() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(plus.size() == 2);

    const auto gone = superpose({{{{"g0", 1}, {"g1", 0}}, kInvSqrt2}, {{{"g0", 1}, {"g1", 0}}, -kInvSqrt2}});
    CHECK(gone.empty());
    CHECK(gone.norm_sq() == 0.0);
    CHECK(kind_of([&] { normalize(gone); }) == ErrorKind::UndefinedState);

    const auto epr = epr_input();
    CHECK(epr.size() == 2);
    CHECK(std::abs(epr.norm_sq() - 1.0) < 1e-15);

    CHECK(kind_of([] { superpose({}); }) == ErrorKind::ConfigurationMismatch);
    CHECK(kind_of([] {
              superpose({{{{"a", 1}}, 1.0}, {{{"b", 1}}, 1.0}});
          }) == ErrorKind::ConfigurationMismatch);
    CHECK(kind_of([] {
              superpose({{{{"a", 1}}, Amplitude{std::nan(""), 0.0}}});
          }) == ErrorKind::InvalidAmplitude);
}

TEST_CASE("pruning drops negligible amplitudes") {
    const auto s = superpose({{{{"a", 1}, {"b", 0}}, 1.0}, {{{"a", 0}, {"b", 1}}, 1e-16}});
    CHECK(s.size() == 1);
}

TEST_CASE("inner product conjugates its left argument") {
    const auto t = basis_state({"r", "t"}, {{"t", 1}, {"r", 0}});
    const auto r = basis_state({"r", "t"}, {{"t", 0}, {"r", 1}});
    const auto mix = superpose({{{{"t", 1}, {"r", 0}}, kInvSqrt2}, {{{"t", 0}, {"r", 1}}, kInvSqrt2 * I}});
    const Amplitude got = inner_product(mix, r);
    CHECK(std::abs(got - Amplitude{0.0, -kInvSqrt2}) < 1e-15);
    CHECK(inner_product(t, r) == Amplitude{0.0});
    CHECK(std::abs(inner_product(mix, mix) - 1.0) < 1e-12);
    const ModeSet gg{"g0", "g1"};
    CHECK(inner_product(basis_state(gg, {{"g0", 1}, {"g1", 0}}), basis_state(gg, {{"g0", 0}, {"g1", 1}})) ==
          Amplitude{0.0});
    CHECK(kind_of([] { inner_product(vacuum({"g0"}), vacuum({"g1"})); }) == ErrorKind::ConfigurationMismatch);
}

TEST_CASE("tensor product") {
    const auto g = basis_state({"g0"}, {{"g0", 1}});
    const auto G = basis_state({"G0", "G1"}, {{"G0", 1}, {"G1", 0}});
    const auto gG = tensor(g, G);
    CHECK(gG.modes().size() == 3);
    CHECK(gG.size() == 1);
    CHECK(gG.amplitude({{"g0", 1}, {"G0", 1}, {"G1", 0}}) == Amplitude{1.0});
    CHECK(kind_of([&] { tensor(g, g); }) == ErrorKind::LabelCollision);

    std::mt19937_64 rng(7);
    for (int k = 0; k < 50; ++k) {
        gen::Layout la{{{"a0", "a1", "a2"}}}, lb{{{"b0", "b1"}}};
        const auto a = gen::random_state(rng, gen::configurations(la));
        const auto b = gen::random_state(rng, gen::configurations(lb));
        CHECK(std::abs(tensor(a, b).norm_sq() - 1.0) < 1e-12);
    }
}

TEST_CASE("the entangled input has Schmidt rank two") {
    // Reduced density matrix of the photon modes; an entangled pair has a
    // mixed marginal with eigenvalues {1/2, 1/2}.
    const auto epr = epr_input();
    const ModeLabel photon[] = {"g0", "g1"};
    std::map<std::pair<std::string, std::string>, Amplitude> rho;
    const auto terms = epr.expanded();
    auto key = [&](const BasisConfig& c, bool photon_side) {
        std::string out;
        for (const auto& [m, occ] : c.entries()) {
            const bool is_photon = m == photon[0] || m == photon[1];
            if (is_photon == photon_side) out += m.str() + std::to_string(occ);
        }
        return out;
    };
    for (const auto& [ca, aa] : terms)
        for (const auto& [cb, ab] : terms)
            if (key(ca, false) == key(cb, false)) rho[{key(ca, true), key(cb, true)}] += aa * std::conj(ab);
    double purity = 0;
    for (const auto& [k, v] : rho) purity += std::norm(v);
    CHECK(purity == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rho.size() == 2);
    for (const auto& [k, v] : rho) CHECK(std::abs(v - 0.5) < 1e-12);
}

TEST_CASE("fidelity and amplitude distance") {
    const auto a = epr_input();
    CHECK(fidelity(a, a) == doctest::Approx(1.0));
    CHECK(fidelity(a, scale(a, I)) == doctest::Approx(1.0));
    CHECK(max_amplitude_distance(a, a) == 0.0);
    CHECK(max_amplitude_distance(a, scale(a, -1.0)) == doctest::Approx(2 * kInvSqrt2));
}

TEST_CASE("expanded terms come out in canonical order") {
    const auto s = superpose({{{{"b", 1}, {"a", 0}}, 1.0}, {{{"b", 0}, {"a", 1}}, 2.0}});
    const auto terms = s.expanded();
    REQUIRE(terms.size() == 2);
    CHECK(terms[0].first.to_string() == "|a=0, b=1>");
    CHECK(terms[1].first.to_string() == "|a=1, b=0>");
    CHECK(s.decode(s.encode(terms[1].first)) == terms[1].first);
}
