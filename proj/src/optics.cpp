#include "qeraser/optics.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace qeraser {
namespace {

void require_mode(const ModeSet& modes, const ModeLabel& m) {
    if (!modes.contains(m)) {
        throw Error(ErrorKind::ConfigurationMismatch,
                    "element references unknown mode '" + m.str() + "'");
    }
}

Relabel inverted(const Relabel& r) {
    Relabel out;
    out.pairs.reserve(r.pairs.size());
    for (const auto& [from, to] : r.pairs) out.pairs.emplace_back(to, from);
    return out;
}

ModeSet relabel_output(const ModeSet& modes, const Relabel& r) {
    std::set<ModeLabel> sources, targets;
    for (const auto& [from, to] : r.pairs) {
        require_mode(modes, from);
        if (!sources.insert(from).second) {
            throw Error(ErrorKind::ConfigurationMismatch,
                        "relabel maps '" + from.str() + "' twice");
        }
        if (!targets.insert(to).second) {
            throw Error(ErrorKind::LabelCollision,
                        "relabel is not injective at '" + to.str() + "'");
        }
    }
    std::vector<ModeLabel> out;
    for (const auto& m : modes) {
        if (sources.contains(m)) continue;
        if (targets.contains(m)) {
            throw Error(ErrorKind::LabelCollision,
                        "relabel target '" + m.str() + "' collides with an untouched mode");
        }
        out.push_back(m);
    }
    out.insert(out.end(), targets.begin(), targets.end());
    return ModeSet(std::move(out));
}

PureState apply_beam_splitter(const PureState& state, const BeamSplitter& bs, Direction dir) {
    if (bs.a == bs.b) {
        throw Error(ErrorKind::ConfigurationMismatch,
                    "beam splitter needs two distinct modes, got '" + bs.a.str() + "' twice");
    }
    const auto& modes = state.modes();
    require_mode(modes, bs.a);
    require_mode(modes, bs.b);
    const std::uint64_t ba = modes.bit(bs.a), bb = modes.bit(bs.b);
    const Amplitude diag{kInvSqrt2, 0.0};
    const Amplitude off = dir == Direction::Forward ? Amplitude{0.0, kInvSqrt2}
                                                    : Amplitude{0.0, -kInvSqrt2};

    PureState::TermMap out;
    for (const auto& [bits, amp] : state.terms()) {
        const bool in_a = bits & ba, in_b = bits & bb;
        if (in_a && in_b) {
            throw Error(ErrorKind::MultiPhotonUnsupported,
                        "both beam-splitter inputs '" + bs.a.str() + "' and '" + bs.b.str() +
                            "' are occupied in one term");
        }
        if (!in_a && !in_b) {
            out[bits] += amp;
            continue;
        }
        out[bits] += diag * amp;
        out[bits ^ ba ^ bb] += off * amp;
    }
    return PureState(modes, std::move(out));
}

PureState apply_phase(const PureState& state, const Phase& ph, Direction dir) {
    const std::uint64_t bit = state.modes().bit(ph.mode);
    const Amplitude factor =
        std::polar(1.0, dir == Direction::Forward ? ph.theta : -ph.theta);
    PureState::TermMap out = state.terms();
    for (auto& [bits, amp] : out)
        if (bits & bit) amp *= factor;
    return PureState(state.modes(), std::move(out));
}

PureState apply_relabel(const PureState& state, const Relabel& r) {
    ModeSet target = relabel_output(state.modes(), r);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> remap;
    for (const auto& m : state.modes()) {
        ModeLabel dest = m;
        for (const auto& [from, to] : r.pairs)
            if (from == m) dest = to;
        remap.emplace_back(state.modes().bit(m), target.bit(dest));
    }
    PureState::TermMap out;
    for (const auto& [bits, amp] : state.terms()) {
        PureState::Bits nb = 0;
        for (const auto& [from, to] : remap)
            if (bits & from) nb |= to;
        out[nb] = amp;
    }
    return PureState(std::move(target), std::move(out));
}

}  // namespace

std::vector<ModeLabel> element_modes(const Element& e) {
    return std::visit(
        [](const auto& el) -> std::vector<ModeLabel> {
            using T = std::decay_t<decltype(el)>;
            if constexpr (std::is_same_v<T, BeamSplitter>) {
                return {el.a, el.b};
            } else if constexpr (std::is_same_v<T, Phase>) {
                return {el.mode};
            } else {
                std::vector<ModeLabel> out;
                for (const auto& [from, to] : el.pairs) {
                    out.push_back(from);
                    out.push_back(to);
                }
                return out;
            }
        },
        e);
}

ModeSet element_output_modes(const ModeSet& modes, const Element& e, Direction dir) {
    if (const auto* r = std::get_if<Relabel>(&e)) {
        return relabel_output(modes, dir == Direction::Forward ? *r : inverted(*r));
    }
    if (const auto* bs = std::get_if<BeamSplitter>(&e)) {
        if (bs->a == bs->b) {
            throw Error(ErrorKind::ConfigurationMismatch,
                        "beam splitter needs two distinct modes");
        }
    }
    for (const auto& m : element_modes(e)) require_mode(modes, m);
    return modes;
}

bool preserves_mode_set(const Element& e) {
    const auto* r = std::get_if<Relabel>(&e);
    if (!r) return true;
    std::set<ModeLabel> sources, targets;
    for (const auto& [from, to] : r->pairs) {
        sources.insert(from);
        targets.insert(to);
    }
    return sources == targets;
}

PureState apply_element(const PureState& state, const Element& e, Direction dir) {
    return std::visit(
        [&](const auto& el) -> PureState {
            using T = std::decay_t<decltype(el)>;
            if constexpr (std::is_same_v<T, BeamSplitter>) {
                return apply_beam_splitter(state, el, dir);
            } else if constexpr (std::is_same_v<T, Phase>) {
                return apply_phase(state, el, dir);
            } else {
                return apply_relabel(state, dir == Direction::Forward ? el : inverted(el));
            }
        },
        e);
}

PureState apply_circuit(const PureState& state, const Circuit& c, Direction dir) {
    PureState out = state;
    if (dir == Direction::Forward) {
        for (const auto& e : c.steps) out = apply_element(out, e, Direction::Forward);
    } else {
        for (auto it = c.steps.rbegin(); it != c.steps.rend(); ++it)
            out = apply_element(out, *it, Direction::Reverse);
    }
    return out;
}

std::string describe(const Element& e) {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& el) {
            using T = std::decay_t<decltype(el)>;
            if constexpr (std::is_same_v<T, BeamSplitter>) {
                os << "bs " << el.a.str() << " " << el.b.str();
            } else if constexpr (std::is_same_v<T, Phase>) {
                os << "phase " << el.mode.str() << " " << el.theta;
            } else {
                os << "relabel";
                for (const auto& [from, to] : el.pairs) os << " " << from.str() << "->" << to.str();
            }
        },
        e);
    return os.str();
}

}  // namespace qeraser
