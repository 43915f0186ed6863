#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "qeraser/state.hpp"

namespace qeraser {

/// Symmetric two-port splitter. A photon entering `a` leaves as
/// (1/sqrt2)|a> + (i/sqrt2)|b>; entering `b`, as (i/sqrt2)|a> + (1/sqrt2)|b>.
struct BeamSplitter {
    ModeLabel a;
    ModeLabel b;
    friend bool operator==(const BeamSplitter&, const BeamSplitter&) = default;
};

/// Multiplies every term with `mode` occupied by exp(i * theta).
struct Phase {
    ModeLabel mode;
    double theta = 0.0;
    friend bool operator==(const Phase&, const Phase&) = default;
};

/// Renames modes. Also used for lossless mirrors and for routing swaps such as
/// {x -> y, y -> x}, which leave the mode set unchanged.
struct Relabel {
    std::vector<std::pair<ModeLabel, ModeLabel>> pairs;
    friend bool operator==(const Relabel&, const Relabel&) = default;
};

using Element = std::variant<BeamSplitter, Phase, Relabel>;

enum class Direction { Forward, Reverse };

struct Circuit {
    std::vector<Element> steps;
    friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// Modes an element reads or writes (both sides of a relabel).
std::vector<ModeLabel> element_modes(const Element& e);

/// Mode set after the element acts on `modes`; validates the element.
ModeSet element_output_modes(const ModeSet& modes, const Element& e, Direction dir);

/// True when the element leaves the mode set untouched (a relabel that only
/// permutes existing labels, or any non-relabel element).
bool preserves_mode_set(const Element& e);

PureState apply_element(const PureState& state, const Element& e,
                        Direction dir = Direction::Forward);

PureState apply_circuit(const PureState& state, const Circuit& c,
                        Direction dir = Direction::Forward);

std::string describe(const Element& e);

}  // namespace qeraser
