#pragma once

#include <string>

#include "qeraser/protocol.hpp"

namespace qeraser {

inline constexpr double kDefaultTolerance = 1e-12;

/// Record names written by Measure steps whose modes all lie in `wing`.
std::vector<std::string> wing_records(const Protocol& p, const Wing& wing);

/// Largest difference between the two protocols' marginals on the records of
/// `wing`. The protocols must share their initial state and wing partition
/// and agree on every step that touches the wing (AuditPrecondition).
double no_signaling_audit(const Protocol& a, const Protocol& b, const std::string& wing);

/// `p` with Measure step `k` replaced by pointer entanglement on fresh
/// ancillas, followed at the end by dephasing and a readout of those pointers
/// under the original record name.
Protocol deferred_measurement(const Protocol& p, std::size_t k);

/// Largest distribution difference between `p` and deferred_measurement(p, k).
/// AuditPrecondition if step k is not a Measure; CausalityViolation if a
/// later Conditional reads the record.
double cut_invariance_audit(const Protocol& p, std::size_t k);

/// Indices of Measure steps whose record no later Conditional reads.
std::vector<std::size_t> deferable_measurements(const Protocol& p);

/// Total probability of the forbidden event.
double causal_consistency_audit(const Protocol& p, const RecordPredicate& forbidden);

/// `p_switch` with every Conditional gated on `gate` replaced by its `then`
/// element applied unconditionally. AuditPrecondition when there is none.
Protocol filtered_variant(const Protocol& p_switch, const RecordPredicate& gate);

/// Compares `p_switch` conditioned on `gate` with `p_filter` post-selected on
/// `gate`. `p_filter` must equal filtered_variant(p_switch, gate).
double filtering_vs_switching_equivalence(const Protocol& p_switch, const Protocol& p_filter,
                                          const RecordPredicate& gate);

}  // namespace qeraser
