#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <vector>

#include "fclock/chronology.hpp"
#include "fclock/core.hpp"
#include "fclock/engine.hpp"
#include "fclock/network.hpp"

namespace fclock {

struct LifetimeEstimate {
  NodeId node;
  std::size_t n;
  double mean;
  double std_error;  // sample standard deviation / sqrt(n); 0 for n == 1
  double expected;   // effective lifetime of the node
};

/// Mean excitation-to-decay delay of a node over its completed QAT pairs.
/// Throws InsufficientData when the node has none.
LifetimeEstimate estimate_lifetime(const EventLog& log, const Network& net, const NodeId& node);

/// tau_u = scalar[kind] * lifetime[kind] for every kind given.
struct UnificationResult {
  double tau_u;
  std::map<InteractionKind, double> scalars;
};

/// Relative tolerance for the post-hoc check scalar * lifetime == tau_u.
inline constexpr double kUnificationTolerance = 1e-12;

/// scalar[kind] = tau_u / lifetime[kind]. Throws InvalidParameter for
/// non-positive or non-finite inputs.
UnificationResult unify_lifetimes(const std::map<InteractionKind, double>& lifetimes, double tau_u);

struct SuperluminalChannel {
  ChannelId id;
  double transit;  // effective transit lifetime
  double light;    // distance / c
  double ratio;    // effective speed in units of c
};

/// Channels whose signals outrun light. Zero-length channels are skipped.
std::vector<SuperluminalChannel> superluminal_report(const Network& net);

/// Per interaction kind present in the network: mean effective lifetime of
/// its nodes, unified to the longest of them.
UnificationResult network_unification(const Network& net);

/// Human-readable summary with fixed section and field order.
void write_summary(std::ostream& out, const Network& net, const EventLog& log, const CausalityReport& audit);

}  // namespace fclock
