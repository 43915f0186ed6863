#pragma once

// Sparse pure states over hard-core (0/1) occupation modes.
//
// A mode set is kept sorted by name. Each basis configuration is packed into
// a 64-bit word with the alphabetically first mode in the most significant
// used bit, so ordering the packed words numerically is the same as ordering
// configurations lexicographically by (mode name, occupation).

#include <complex>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qeraser/error.hpp"

namespace qeraser {

using Amplitude = std::complex<double>;

inline constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;
inline constexpr double kDefaultPruneTolerance = 1e-15;
inline constexpr std::size_t kMaxModes = 64;

bool is_valid_identifier(std::string_view name);

class ModeLabel {
public:
    ModeLabel() = default;
    /// Throws InvalidLabel unless `name` matches [A-Za-z_][A-Za-z0-9_]*.
    explicit ModeLabel(std::string name);
    ModeLabel(const char* name) : ModeLabel(std::string(name)) {}

    const std::string& str() const noexcept { return name_; }

    friend auto operator<=>(const ModeLabel&, const ModeLabel&) = default;
    friend bool operator==(const ModeLabel&, const ModeLabel&) = default;

private:
    std::string name_;
};

std::vector<ModeLabel> to_labels(const std::vector<std::string>& names);

/// Sorted, duplicate-free set of mode labels.
class ModeSet {
public:
    ModeSet() = default;
    /// Throws LabelCollision on duplicates, CapacityExceeded beyond kMaxModes.
    explicit ModeSet(std::vector<ModeLabel> labels);
    ModeSet(std::initializer_list<ModeLabel> labels)
        : ModeSet(std::vector<ModeLabel>(labels)) {}

    std::size_t size() const noexcept { return labels_.size(); }
    bool empty() const noexcept { return labels_.empty(); }
    bool contains(const ModeLabel& m) const;
    std::optional<std::size_t> index_of(const ModeLabel& m) const;
    /// Bit mask of `m` in packed configurations; throws ConfigurationMismatch.
    std::uint64_t bit(const ModeLabel& m) const;

    const std::vector<ModeLabel>& labels() const noexcept { return labels_; }
    auto begin() const { return labels_.begin(); }
    auto end() const { return labels_.end(); }

    friend bool operator==(const ModeSet&, const ModeSet&) = default;

private:
    std::vector<ModeLabel> labels_;
};

/// Total assignment ModeLabel -> {0, 1}.
class BasisConfig {
public:
    BasisConfig() = default;
    BasisConfig(std::initializer_list<std::pair<ModeLabel, int>> entries);

    /// Throws ConfigurationMismatch when `occupation` is not 0 or 1.
    void set(const ModeLabel& mode, int occupation);
    int at(const ModeLabel& mode) const;
    bool has(const ModeLabel& mode) const { return occ_.contains(mode); }

    ModeSet modes() const;
    const std::map<ModeLabel, int>& entries() const noexcept { return occ_; }
    std::string to_string() const;

    friend auto operator<=>(const BasisConfig&, const BasisConfig&) = default;
    friend bool operator==(const BasisConfig&, const BasisConfig&) = default;

private:
    std::map<ModeLabel, int> occ_;
};

class PureState {
public:
    using Bits = std::uint64_t;
    using TermMap = std::map<Bits, Amplitude>;

    PureState() = default;
    /// Terms with |amplitude| below `prune_tolerance` are dropped; amplitudes
    /// must be finite (InvalidAmplitude otherwise).
    PureState(ModeSet modes, TermMap terms,
              double prune_tolerance = kDefaultPruneTolerance);

    const ModeSet& modes() const noexcept { return modes_; }
    const TermMap& terms() const noexcept { return terms_; }
    double norm_sq() const noexcept { return norm_sq_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }

    Bits encode(const BasisConfig& config) const;
    BasisConfig decode(Bits bits) const;
    int occupation(Bits bits, const ModeLabel& mode) const {
        return (bits & modes_.bit(mode)) ? 1 : 0;
    }
    Amplitude amplitude(const BasisConfig& config) const;

    /// Terms as (configuration, amplitude) in canonical order.
    std::vector<std::pair<BasisConfig, Amplitude>> expanded() const;
    std::string to_string() const;

private:
    ModeSet modes_;
    TermMap terms_;
    double norm_sq_ = 0.0;
};

/// Single term with amplitude 1. `config` must cover exactly `modes`.
PureState basis_state(const ModeSet& modes, const BasisConfig& config);

/// Sums duplicate configurations; does not normalize.
PureState superpose(const std::vector<std::pair<BasisConfig, Amplitude>>& terms);

/// <a|b>, conjugate-linear in `a`.
Amplitude inner_product(const PureState& a, const PureState& b);

/// Product state over the disjoint union of both mode sets.
PureState tensor(const PureState& a, const PureState& b);

/// All modes empty, amplitude 1.
PureState vacuum(const ModeSet& modes);

/// Throws UndefinedState on a zero-norm input.
PureState normalize(const PureState& s);

PureState scale(const PureState& s, Amplitude factor);

/// |<a|b>|^2 / (|a|^2 |b|^2).
double fidelity(const PureState& a, const PureState& b);

/// Largest per-term amplitude difference, missing terms counted as zero.
double max_amplitude_distance(const PureState& a, const PureState& b);

}  // namespace qeraser
