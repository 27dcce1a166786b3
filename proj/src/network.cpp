#include "fclock/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include <fmt/format.h>

#include "fclock/error.hpp"

namespace fclock {
namespace {

void require_id(const std::string& id, std::string_view what) {
  if (id.empty()) throw InvalidParameter(fmt::format("{} id must not be empty", what));
}

}  // namespace

ClockNode::ClockNode(NodeId id_, ReconfigurationEnergy gamma_, InteractionKind interaction_,
                     double zeno_factor_, Momentum momentum_)
    : id(std::move(id_)), gamma(gamma_), interaction(interaction_), zeno_factor(zeno_factor_),
      momentum(momentum_) {
  require_id(id.str(), "node");
  if (!std::isfinite(zeno_factor) || zeno_factor <= 0.0) {
    throw InvalidParameter(fmt::format("zeno factor must be positive (got {})", zeno_factor));
  }
  for (double p : momentum) {
    if (!std::isfinite(p)) throw InvalidParameter("momentum components must be finite");
  }
}

SignalChannel::SignalChannel(ChannelId id_, NodeId source_, NodeId target_, double distance_,
                             double velocity_, std::optional<double> override_lifetime_, double weight_)
    : id(std::move(id_)), source(std::move(source_)), target(std::move(target_)), distance(distance_),
      velocity(velocity_), override_lifetime(override_lifetime_), weight(weight_) {
  require_id(id.str(), "channel");
  if (!std::isfinite(velocity) || velocity <= 0.0) {
    throw InvalidParameter(fmt::format("velocity must be positive (got {})", velocity));
  }
  if (!std::isfinite(distance) || distance < 0.0) {
    throw InvalidParameter(fmt::format("distance must be non-negative (got {})", distance));
  }
  if (override_lifetime && (!std::isfinite(*override_lifetime) || *override_lifetime <= 0.0)) {
    throw InvalidParameter(fmt::format("override lifetime must be positive (got {})", *override_lifetime));
  }
  if (!std::isfinite(weight) || weight <= 0.0) {
    throw InvalidParameter(fmt::format("channel weight must be positive (got {})", weight));
  }
}

CENode::CENode(CenId id_, std::vector<NodeId> members_, double coupling_strength_)
    : id(std::move(id_)), members(std::move(members_)), coupling_strength(coupling_strength_) {
  require_id(id.str(), "cen");
  if (members.empty()) throw InvalidParameter("cen must have at least one member");
  if (!std::isfinite(coupling_strength) || coupling_strength <= 0.0) {
    throw InvalidParameter(fmt::format("coupling strength must be positive (got {})", coupling_strength));
  }
}

double transit_lifetime(const SignalChannel& channel) {
  return channel.override_lifetime ? *channel.override_lifetime : channel.distance / channel.velocity;
}

bool is_superluminal(const SignalChannel& channel, const UnitSystem& units) {
  return transit_lifetime(channel) < channel.distance / units.c();
}

Lifetime effective_lifetime(const ClockNode& node, const UnitSystem& units) {
  return Lifetime(node.zeno_factor * (units.hbar() / node.gamma.value()));
}

Lifetime cen_lifetime(const CENode& cen, const UnitSystem& units) {
  return Lifetime(units.hbar() / cen.coupling_strength);
}

StateVector cen_composite_state(const CENode& cen, std::span<const StateVector> member_states,
                                const StateVector& signal_state, std::size_t max_dim) {
  if (member_states.size() != cen.members.size()) {
    throw InvalidArgument(fmt::format("cen '{}' has {} members but {} states were given", cen.id.str(),
                                      cen.members.size(), member_states.size()));
  }
  return tensor_product(tensor_product(member_states, max_dim), signal_state, max_dim);
}

bool check_momentum_conservation(std::span<const Momentum> incoming, std::span<const Momentum> outgoing,
                                 double tol) {
  if (!(tol >= 0.0)) throw InvalidParameter("momentum tolerance must be non-negative");
  Momentum in{}, out{};
  for (const auto& p : incoming) {
    for (std::size_t i = 0; i < 3; ++i) in[i] += p[i];
  }
  for (const auto& q : outgoing) {
    for (std::size_t i = 0; i < 3; ++i) out[i] += q[i];
  }
  for (std::size_t i = 0; i < 3; ++i) {
    if (!(std::abs(in[i] - out[i]) <= tol)) return false;
  }
  return true;
}

const ClockNode* Network::find_node(const NodeId& id) const {
  auto it = node_index_.find(id);
  return it == node_index_.end() ? nullptr : &nodes_[it->second];
}

const SignalChannel* Network::find_channel(const ChannelId& id) const {
  auto it = channel_index_.find(id);
  return it == channel_index_.end() ? nullptr : &channels_[it->second];
}

const ClockNode& Network::node(const NodeId& id) const { return nodes_[node_index(id)]; }

const SignalChannel& Network::channel(const ChannelId& id) const { return channels_[channel_index(id)]; }

std::size_t Network::node_index(const NodeId& id) const {
  auto it = node_index_.find(id);
  if (it == node_index_.end()) throw TopologyError(fmt::format("unknown node '{}'", id.str()));
  return it->second;
}

std::size_t Network::channel_index(const ChannelId& id) const {
  auto it = channel_index_.find(id);
  if (it == channel_index_.end()) throw TopologyError(fmt::format("unknown channel '{}'", id.str()));
  return it->second;
}

NetworkBuilder& NetworkBuilder::add_node(ClockNode node) {
  if (net_.node_index_.contains(node.id)) {
    throw TopologyError(fmt::format("duplicate node id '{}'", node.id.str()));
  }
  net_.node_index_.emplace(node.id, net_.nodes_.size());
  net_.nodes_.push_back(std::move(node));
  net_.outgoing_.emplace_back();
  return *this;
}

NetworkBuilder& NetworkBuilder::add_channel(SignalChannel channel) {
  if (net_.channel_index_.contains(channel.id)) {
    throw TopologyError(fmt::format("duplicate channel id '{}'", channel.id.str()));
  }
  const std::size_t src = net_.node_index(channel.source);
  net_.node_index(channel.target);
  net_.channel_index_.emplace(channel.id, net_.channels_.size());
  net_.outgoing_[src].push_back(net_.channels_.size());
  net_.channels_.push_back(std::move(channel));
  return *this;
}

NetworkBuilder& NetworkBuilder::add_cen(CENode cen) {
  for (const auto& existing : net_.cens_) {
    if (existing.id == cen.id) throw TopologyError(fmt::format("duplicate cen id '{}'", cen.id.str()));
  }
  std::set<NodeId> seen;
  for (const auto& m : cen.members) {
    net_.node_index(m);
    if (!seen.insert(m).second) {
      throw TopologyError(fmt::format("cen '{}' lists member '{}' twice", cen.id.str(), m.str()));
    }
  }
  net_.cens_.push_back(std::move(cen));
  return *this;
}

NetworkBuilder& NetworkBuilder::add_sen_path(SENPath path) {
  for (const auto& existing : net_.sen_paths_) {
    if (existing.id == path.id) throw TopologyError(fmt::format("duplicate sen id '{}'", path.id.str()));
  }
  validate_sen_path(path, net_);
  net_.sen_paths_.push_back(std::move(path));
  return *this;
}

Network NetworkBuilder::build() && { return std::move(net_); }

void validate_sen_path(const SENPath& path, const Network& net) {
  if (path.hops.empty()) throw TopologyError(fmt::format("sen '{}' has no hops", path.id.str()));
  for (std::size_t k = 0; k < path.hops.size(); ++k) {
    const auto& hop = path.hops[k];
    net.node_index(hop.node);
    const bool last = k + 1 == path.hops.size();
    if (!hop.channel) {
      if (!last) {
        throw TopologyError(fmt::format("sen '{}': hop {} ('{}') has no channel to the next hop",
                                        path.id.str(), k, hop.node.str()));
      }
      continue;
    }
    const auto& ch = net.channel(*hop.channel);
    if (ch.source != hop.node) {
      throw TopologyError(fmt::format("sen '{}': channel '{}' does not leave node '{}'", path.id.str(),
                                      ch.id.str(), hop.node.str()));
    }
    if (!last && ch.target != path.hops[k + 1].node) {
      throw TopologyError(fmt::format("sen '{}': channel '{}' does not reach node '{}'", path.id.str(),
                                      ch.id.str(), path.hops[k + 1].node.str()));
    }
  }
}

double sen_lifetime(const SENPath& path, const Network& net) {
  validate_sen_path(path, net);
  double total = 0.0;
  for (const auto& hop : path.hops) {
    total += effective_lifetime(net.node(hop.node), net.units()).value();
    if (hop.channel) total += transit_lifetime(net.channel(*hop.channel));
  }
  return total;
}

namespace {

// Johnson's elementary circuit enumeration over vertices ranked by id.
class CircuitFinder {
public:
  explicit CircuitFinder(std::vector<std::vector<std::size_t>> adj)
      : adj_(std::move(adj)), n_(adj_.size()), blocked_(n_), blocked_by_(n_) {}

  std::vector<std::vector<std::size_t>> run() {
    for (start_ = 0; start_ < n_; ++start_) {
      component_ = component_of(start_);
      if (component_.size() == 1 && !has_self_loop(start_)) continue;
      for (std::size_t v : component_) {
        blocked_[v] = false;
        blocked_by_[v].clear();
      }
      circuit(start_);
    }
    return std::move(cycles_);
  }

private:
  bool has_self_loop(std::size_t v) const {
    return std::find(adj_[v].begin(), adj_[v].end(), v) != adj_[v].end();
  }

  bool in_component(std::size_t v) const { return std::binary_search(component_.begin(), component_.end(), v); }

  // Tarjan SCC of the subgraph induced by vertices >= start_, returning the
  // component that contains start_ (sorted).
  std::vector<std::size_t> component_of(std::size_t root) const {
    std::vector<long> index(n_, -1), low(n_, 0);
    std::vector<bool> on_stack(n_, false);
    std::vector<std::size_t> stack;
    std::vector<std::size_t> result;
    long counter = 0;
    std::function<void(std::size_t)> strongconnect = [&](std::size_t v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack[v] = true;
      for (std::size_t w : adj_[v]) {
        if (w < start_) continue;
        if (index[w] < 0) {
          strongconnect(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        if (std::find(comp.begin(), comp.end(), root) != comp.end()) result = std::move(comp);
      }
    };
    strongconnect(root);
    std::sort(result.begin(), result.end());
    return result;
  }

  void unblock(std::size_t u) {
    blocked_[u] = false;
    auto pending = std::move(blocked_by_[u]);
    blocked_by_[u].clear();
    for (std::size_t w : pending) {
      if (blocked_[w]) unblock(w);
    }
  }

  bool circuit(std::size_t v) {
    bool found = false;
    path_.push_back(v);
    blocked_[v] = true;
    for (std::size_t w : adj_[v]) {
      if (!in_component(w)) continue;
      if (w == start_) {
        cycles_.push_back(path_);
        found = true;
      } else if (!blocked_[w] && circuit(w)) {
        found = true;
      }
    }
    if (found) {
      unblock(v);
    } else {
      for (std::size_t w : adj_[v]) {
        if (in_component(w)) blocked_by_[w].insert(v);
      }
    }
    path_.pop_back();
    return found;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::size_t n_;
  std::vector<bool> blocked_;
  std::vector<std::set<std::size_t>> blocked_by_;
  std::vector<std::size_t> component_;
  std::vector<std::size_t> path_;
  std::vector<std::vector<std::size_t>> cycles_;
  std::size_t start_ = 0;
};

}  // namespace

std::vector<Cycle> detect_cycles(const Network& net) {
  const auto nodes = net.nodes();
  std::vector<std::size_t> order(nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return nodes[a].id < nodes[b].id; });
  std::vector<std::size_t> rank(nodes.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;

  std::vector<std::vector<std::size_t>> adj(nodes.size());
  for (const auto& ch : net.channels()) {
    adj[rank[net.node_index(ch.source)]].push_back(rank[net.node_index(ch.target)]);
  }
  for (auto& out : adj) {
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }

  std::vector<Cycle> cycles;
  for (const auto& ranked : CircuitFinder(std::move(adj)).run()) {
    Cycle cycle;
    cycle.reserve(ranked.size());
    for (std::size_t r : ranked) cycle.push_back(nodes[order[r]].id);
    cycles.push_back(std::move(cycle));
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

}  // namespace fclock
