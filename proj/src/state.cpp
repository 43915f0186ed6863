#include "qeraser/state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qeraser {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ConfigurationMismatch: return "configuration-mismatch";
        case ErrorKind::LabelCollision: return "label-collision";
        case ErrorKind::InvalidLabel: return "invalid-label";
        case ErrorKind::InvalidAmplitude: return "invalid-amplitude";
        case ErrorKind::CapacityExceeded: return "capacity-exceeded";
        case ErrorKind::MultiPhotonUnsupported: return "multi-photon-unsupported";
        case ErrorKind::UndefinedState: return "undefined-state";
        case ErrorKind::AncillaNotFresh: return "ancilla-not-fresh";
        case ErrorKind::EmptyPostselection: return "empty-postselection";
        case ErrorKind::CausalityViolation: return "causality-violation";
        case ErrorKind::ConditioningOnNull: return "conditioning-on-null";
        case ErrorKind::AuditPrecondition: return "audit-precondition";
        case ErrorKind::SyntaxError: return "syntax-error";
        case ErrorKind::SemanticError: return "semantic-error";
        case ErrorKind::UnknownScenario: return "unknown-scenario";
    }
    return "unknown";
}

bool is_valid_identifier(std::string_view name) {
    if (name.empty()) return false;
    auto alpha = [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
    };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(name.front())) return false;
    return std::all_of(name.begin(), name.end(),
                       [&](char c) { return alpha(c) || digit(c); });
}

ModeLabel::ModeLabel(std::string name) : name_(std::move(name)) {
    if (!is_valid_identifier(name_)) {
        throw Error(ErrorKind::InvalidLabel, "invalid mode label '" + name_ + "'");
    }
}

std::vector<ModeLabel> to_labels(const std::vector<std::string>& names) {
    std::vector<ModeLabel> out;
    out.reserve(names.size());
    for (const auto& n : names) out.emplace_back(n);
    return out;
}

// ---------------------------------------------------------------------------
// ModeSet

ModeSet::ModeSet(std::vector<ModeLabel> labels) : labels_(std::move(labels)) {
    std::sort(labels_.begin(), labels_.end());
    auto dup = std::adjacent_find(labels_.begin(), labels_.end());
    if (dup != labels_.end()) {
        throw Error(ErrorKind::LabelCollision, "duplicate mode label '" + dup->str() + "'");
    }
    if (labels_.size() > kMaxModes) {
        throw Error(ErrorKind::CapacityExceeded,
                    "at most " + std::to_string(kMaxModes) + " modes are supported");
    }
}

bool ModeSet::contains(const ModeLabel& m) const {
    return std::binary_search(labels_.begin(), labels_.end(), m);
}

std::optional<std::size_t> ModeSet::index_of(const ModeLabel& m) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), m);
    if (it == labels_.end() || *it != m) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

std::uint64_t ModeSet::bit(const ModeLabel& m) const {
    auto idx = index_of(m);
    if (!idx) {
        throw Error(ErrorKind::ConfigurationMismatch, "unknown mode '" + m.str() + "'");
    }
    return std::uint64_t{1} << (labels_.size() - 1 - *idx);
}

// ---------------------------------------------------------------------------
// BasisConfig

BasisConfig::BasisConfig(std::initializer_list<std::pair<ModeLabel, int>> entries) {
    for (const auto& [m, v] : entries) set(m, v);
}

void BasisConfig::set(const ModeLabel& mode, int occupation) {
    if (occupation != 0 && occupation != 1) {
        throw Error(ErrorKind::ConfigurationMismatch,
                    "occupation of '" + mode.str() + "' must be 0 or 1");
    }
    occ_[mode] = occupation;
}

int BasisConfig::at(const ModeLabel& mode) const {
    auto it = occ_.find(mode);
    if (it == occ_.end()) {
        throw Error(ErrorKind::ConfigurationMismatch,
                    "configuration has no entry for '" + mode.str() + "'");
    }
    return it->second;
}

ModeSet BasisConfig::modes() const {
    std::vector<ModeLabel> labels;
    labels.reserve(occ_.size());
    for (const auto& [m, v] : occ_) labels.push_back(m);
    return ModeSet(std::move(labels));
}

std::string BasisConfig::to_string() const {
    std::string out = "|";
    bool first = true;
    for (const auto& [m, v] : occ_) {
        if (!first) out += ", ";
        first = false;
        out += m.str() + "=" + std::to_string(v);
    }
    return out + ">";
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(ModeSet modes, TermMap terms, double prune_tolerance)
    : modes_(std::move(modes)) {
    const std::uint64_t valid = modes_.size() == 64
                                    ? ~std::uint64_t{0}
                                    : (std::uint64_t{1} << modes_.size()) - 1;
    for (auto& [bits, amp] : terms) {
        if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag())) {
            throw Error(ErrorKind::InvalidAmplitude, "non-finite amplitude");
        }
        if (bits & ~valid) {
            throw Error(ErrorKind::ConfigurationMismatch,
                        "term references bits outside the mode set");
        }
        if (std::abs(amp) < prune_tolerance) continue;
        terms_.emplace_hint(terms_.end(), bits, amp);
        norm_sq_ += std::norm(amp);
    }
}

PureState::Bits PureState::encode(const BasisConfig& config) const {
    if (config.entries().size() != modes_.size()) {
        throw Error(ErrorKind::ConfigurationMismatch,
                    "configuration " + config.to_string() + " does not cover the mode set");
    }
    Bits bits = 0;
    for (const auto& [m, v] : config.entries()) {
        if (v) bits |= modes_.bit(m);
        else (void)modes_.bit(m);
    }
    return bits;
}

BasisConfig PureState::decode(Bits bits) const {
    BasisConfig cfg;
    for (const auto& m : modes_) cfg.set(m, (bits & modes_.bit(m)) ? 1 : 0);
    return cfg;
}

Amplitude PureState::amplitude(const BasisConfig& config) const {
    auto it = terms_.find(encode(config));
    return it == terms_.end() ? Amplitude{} : it->second;
}

std::vector<std::pair<BasisConfig, Amplitude>> PureState::expanded() const {
    std::vector<std::pair<BasisConfig, Amplitude>> out;
    out.reserve(terms_.size());
    for (const auto& [bits, amp] : terms_) out.emplace_back(decode(bits), amp);
    return out;
}

std::string PureState::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    os.precision(15);
    bool first = true;
    for (const auto& [cfg, amp] : expanded()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << amp.real() << (amp.imag() < 0 ? "-" : "+") << std::abs(amp.imag())
           << "i)" << cfg.to_string();
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Free operations

PureState basis_state(const ModeSet& modes, const BasisConfig& config) {
    if (config.modes() != modes) {
        throw Error(ErrorKind::ConfigurationMismatch,
                    "configuration " + config.to_string() + " does not match the mode set");
    }
    PureState probe(modes, {});
    return PureState(modes, {{probe.encode(config), Amplitude{1.0, 0.0}}});
}

PureState superpose(const std::vector<std::pair<BasisConfig, Amplitude>>& terms) {
    if (terms.empty()) {
        throw Error(ErrorKind::ConfigurationMismatch, "superpose needs at least one term");
    }
    ModeSet modes = terms.front().first.modes();
    PureState probe(modes, {});
    PureState::TermMap acc;
    for (const auto& [cfg, amp] : terms) {
        if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag())) {
            throw Error(ErrorKind::InvalidAmplitude, "non-finite amplitude");
        }
        if (cfg.modes() != modes) {
            throw Error(ErrorKind::ConfigurationMismatch,
                        "term " + cfg.to_string() + " has a different mode set");
        }
        acc[probe.encode(cfg)] += amp;
    }
    return PureState(std::move(modes), std::move(acc));
}

Amplitude inner_product(const PureState& a, const PureState& b) {
    if (a.modes() != b.modes()) {
        throw Error(ErrorKind::ConfigurationMismatch, "inner product of different mode sets");
    }
    Amplitude sum{};
    for (const auto& [bits, amp] : a.terms()) {
        auto it = b.terms().find(bits);
        if (it != b.terms().end()) sum += std::conj(amp) * it->second;
    }
    return sum;
}

PureState tensor(const PureState& a, const PureState& b) {
    std::vector<ModeLabel> labels(a.modes().begin(), a.modes().end());
    for (const auto& m : b.modes()) {
        if (a.modes().contains(m)) {
            throw Error(ErrorKind::LabelCollision,
                        "mode '" + m.str() + "' appears in both tensor factors");
        }
        labels.push_back(m);
    }
    ModeSet joint(std::move(labels));

    // Precompute where each factor's bits land in the joint packing.
    auto remap = [&](const PureState& s) {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> map;
        for (const auto& m : s.modes()) map.emplace_back(s.modes().bit(m), joint.bit(m));
        return map;
    };
    auto ma = remap(a), mb = remap(b);
    auto lift = [](PureState::Bits bits, const auto& map) {
        PureState::Bits out = 0;
        for (const auto& [from, to] : map)
            if (bits & from) out |= to;
        return out;
    };

    PureState::TermMap terms;
    for (const auto& [ba, aa] : a.terms())
        for (const auto& [bb, ab] : b.terms())
            terms[lift(ba, ma) | lift(bb, mb)] = aa * ab;
    return PureState(std::move(joint), std::move(terms));
}

PureState vacuum(const ModeSet& modes) {
    return PureState(modes, {{0, Amplitude{1.0, 0.0}}});
}

PureState normalize(const PureState& s) {
    if (s.norm_sq() <= 0.0) {
        throw Error(ErrorKind::UndefinedState, "cannot normalize a zero-norm state");
    }
    return scale(s, 1.0 / std::sqrt(s.norm_sq()));
}

PureState scale(const PureState& s, Amplitude factor) {
    PureState::TermMap terms = s.terms();
    for (auto& [bits, amp] : terms) amp *= factor;
    return PureState(s.modes(), std::move(terms));
}

double fidelity(const PureState& a, const PureState& b) {
    if (a.norm_sq() <= 0.0 || b.norm_sq() <= 0.0) {
        throw Error(ErrorKind::UndefinedState, "fidelity with a zero-norm state");
    }
    return std::norm(inner_product(a, b)) / (a.norm_sq() * b.norm_sq());
}

double max_amplitude_distance(const PureState& a, const PureState& b) {
    if (a.modes() != b.modes()) {
        throw Error(ErrorKind::ConfigurationMismatch, "distance between different mode sets");
    }
    double worst = 0.0;
    for (const auto& [bits, amp] : a.terms()) {
        auto it = b.terms().find(bits);
        worst = std::max(worst, std::abs(amp - (it == b.terms().end() ? Amplitude{} : it->second)));
    }
    for (const auto& [bits, amp] : b.terms()) {
        if (!a.terms().contains(bits)) worst = std::max(worst, std::abs(amp));
    }
    return worst;
}

}  // namespace qeraser
