#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fclock/core.hpp"
#include "fclock/qstate.hpp"

namespace fclock {

/// String identifier tagged by what it names, so node and channel ids
/// cannot be mixed up.
template <typename Tag>
class Id {
public:
  Id() = default;
  explicit Id(std::string value) : value_(std::move(value)) {}

  const std::string& str() const { return value_; }

  friend auto operator<=>(const Id&, const Id&) = default;
  friend bool operator==(const Id&, const Id&) = default;

private:
  std::string value_;
};

using NodeId = Id<struct NodeTag>;
using ChannelId = Id<struct ChannelTag>;
using CenId = Id<struct CenTag>;
using PathId = Id<struct PathTag>;

using Momentum = std::array<double, 3>;

/// A Feynman clock / detector: decays with lifetime zeno * hbar / gamma
/// when in clock mode, re-excites on detection when in detector mode.
struct ClockNode {
  ClockNode(NodeId id, ReconfigurationEnergy gamma, InteractionKind interaction,
            double zeno_factor = 1.0, Momentum momentum = {});

  NodeId id;
  ReconfigurationEnergy gamma;
  InteractionKind interaction;
  double zeno_factor;  // > 1 dilates, < 1 contracts the intrinsic lifetime
  Momentum momentum;
};

/// Directed signal path from a source clock to a target detector. Its
/// transit time acts as the lifetime of a pseudo-clock.
struct SignalChannel {
  SignalChannel(ChannelId id, NodeId source, NodeId target, double distance, double velocity,
                std::optional<double> override_lifetime = std::nullopt, double weight = 1.0);

  ChannelId id;
  NodeId source;
  NodeId target;
  double distance;
  double velocity;
  std::optional<double> override_lifetime;
  double weight;  // share of the source's energy and momentum per decay
};

/// Collective excitation network: a group of coupled clocks acting as one.
struct CENode {
  CENode(CenId id, std::vector<NodeId> members, double coupling_strength);

  CenId id;
  std::vector<NodeId> members;
  double coupling_strength;  // |<Psi_0|H|Psi*>|^2, supplied already squared
};

/// One step of a sequential excitation network. Every hop except the last
/// must carry the channel leading to the next hop's node; the last hop may
/// carry an output channel to a terminal node.
struct SenHop {
  NodeId node;
  std::optional<ChannelId> channel;

  friend bool operator==(const SenHop&, const SenHop&) = default;
};

struct SENPath {
  PathId id;
  std::vector<SenHop> hops;
};

/// Transit time of a signal: the override if present, else distance / velocity.
double transit_lifetime(const SignalChannel& channel);

/// True when the effective signal outruns light over the channel distance.
bool is_superluminal(const SignalChannel& channel, const UnitSystem& units);

Lifetime effective_lifetime(const ClockNode& node, const UnitSystem& units);
Lifetime cen_lifetime(const CENode& cen, const UnitSystem& units);

/// (⊗ member states) ⊗ signal state, in member order.
StateVector cen_composite_state(const CENode& cen, std::span<const StateVector> member_states,
                                const StateVector& signal_state, std::size_t max_dim = kDefaultMaxDim);

inline constexpr double kDefaultMomentumTolerance = 1e-9;

/// True iff the summed incoming and outgoing momenta agree component-wise within tol.
bool check_momentum_conservation(std::span<const Momentum> incoming, std::span<const Momentum> outgoing,
                                 double tol = kDefaultMomentumTolerance);

/// Immutable causal network. Build it with NetworkBuilder.
class Network {
public:
  const UnitSystem& units() const { return units_; }

  std::span<const ClockNode> nodes() const { return nodes_; }
  std::span<const SignalChannel> channels() const { return channels_; }
  std::span<const CENode> cens() const { return cens_; }
  std::span<const SENPath> sen_paths() const { return sen_paths_; }

  const ClockNode* find_node(const NodeId& id) const;
  const SignalChannel* find_channel(const ChannelId& id) const;

  /// Throws TopologyError for unknown ids.
  const ClockNode& node(const NodeId& id) const;
  const SignalChannel& channel(const ChannelId& id) const;

  /// Index into nodes() / channels(); throws TopologyError for unknown ids.
  std::size_t node_index(const NodeId& id) const;
  std::size_t channel_index(const ChannelId& id) const;

  /// Outgoing channel indices of a node, in declaration order.
  std::span<const std::size_t> outgoing(std::size_t node_index) const { return outgoing_[node_index]; }

  Network with_units(UnitSystem units) const {
    Network copy = *this;
    copy.units_ = units;
    return copy;
  }

private:
  friend class NetworkBuilder;

  UnitSystem units_;
  std::vector<ClockNode> nodes_;
  std::vector<SignalChannel> channels_;
  std::vector<CENode> cens_;
  std::vector<SENPath> sen_paths_;
  std::map<NodeId, std::size_t> node_index_;
  std::map<ChannelId, std::size_t> channel_index_;
  std::vector<std::vector<std::size_t>> outgoing_;
};

/// Validates every addition eagerly so callers can attribute errors to the
/// declaration that caused them.
class NetworkBuilder {
public:
  explicit NetworkBuilder(UnitSystem units = UnitSystem::natural()) { net_.units_ = units; }

  void set_units(UnitSystem units) { net_.units_ = units; }

  NetworkBuilder& add_node(ClockNode node);
  NetworkBuilder& add_channel(SignalChannel channel);
  NetworkBuilder& add_cen(CENode cen);
  NetworkBuilder& add_sen_path(SENPath path);

  const Network& peek() const { return net_; }
  Network build() &&;

private:
  Network net_;
};

/// Checks that the path's hops are connected within net; throws TopologyError.
void validate_sen_path(const SENPath& path, const Network& net);

/// Sum over hops of node lifetime plus outgoing transit lifetime, in hop order.
double sen_lifetime(const SENPath& path, const Network& net);

using Cycle = std::vector<NodeId>;

/// Every elementary directed cycle of the channel graph. Each cycle starts
/// at its smallest node id and follows channel direction; the list is
/// sorted lexicographically. Parallel channels do not duplicate a cycle.
std::vector<Cycle> detect_cycles(const Network& net);

}  // namespace fclock
