#include "fclock/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "fclock/error.hpp"
#include "fclock/format.hpp"

namespace fclock {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::excitation: return "excitation";
    case EventKind::decay: return "decay";
    case EventKind::emission: return "emission";
    case EventKind::detection: return "detection";
  }
  return "?";
}

std::string_view to_string(RunMode mode) {
  return mode == RunMode::stochastic ? "stochastic" : "deterministic";
}

std::string_view to_string(Termination reason) {
  switch (reason) {
    case Termination::queue_empty: return "queue-empty";
    case Termination::horizon: return "horizon";
    case Termination::max_events: return "max-events";
  }
  return "?";
}

EventKind parse_event_kind(std::string_view name) {
  for (auto kind : {EventKind::excitation, EventKind::decay, EventKind::emission, EventKind::detection}) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidParameter(fmt::format("unknown event kind '{}'", name));
}

RunMode parse_run_mode(std::string_view name) {
  if (name == "deterministic" || name == "det") return RunMode::deterministic;
  if (name == "stochastic" || name == "stoch") return RunMode::stochastic;
  throw InvalidParameter(fmt::format("unknown run mode '{}' (expected deterministic|stochastic)", name));
}

const SimEvent& EventLog::append(EventKind kind, double time, NodeId node, std::optional<SignalId> signal,
                                 std::optional<ChannelId> channel) {
  if (!std::isfinite(time) || time < 0.0) {
    throw CausalityError(fmt::format("event time must be finite and non-negative (got {})", time));
  }
  if (!events_.empty() && time < events_.back().time) {
    throw CausalityError(fmt::format("event at t={} appended after t={}", format_real(time),
                                     format_real(events_.back().time)));
  }
  events_.push_back(SimEvent{events_.size(), time, kind, std::move(node), signal, std::move(channel)});
  return events_.back();
}

void RunConfig::validate() const {
  if (max_events == 0) throw InvalidParameter("max_events must be at least 1");
  if (until && (!std::isfinite(*until) || *until < 0.0)) {
    throw InvalidParameter(fmt::format("until must be non-negative (got {})", *until));
  }
}

double DecayRng::exponential(double mean) {
  constexpr double kTwoPowMinus53 = 1.0 / 9007199254740992.0;
  const double u = (static_cast<double>(engine_() >> 11) + 0.5) * kTwoPowMinus53;
  return -mean * std::log(u);
}

double decay_delay(const ClockNode& node, const UnitSystem& units, RunMode mode, DecayRng& rng) {
  const double tau = effective_lifetime(node, units).value();
  return mode == RunMode::deterministic ? tau : rng.exponential(tau);
}

bool Simulator::Later::operator()(const Pending& a, const Pending& b) const {
  if (a.time != b.time) return a.time > b.time;
  if (a.node_rank != b.node_rank) return a.node_rank > b.node_rank;
  return a.order > b.order;
}

Simulator::Simulator(const Network& net, const RunConfig& cfg)
    : net_(net), cfg_(cfg), rng_(cfg.seed), log_(cfg.seed, cfg.mode, net.units()),
      rank_(net.nodes().size()), excited_(net.nodes().size(), false) {
  cfg_.validate();
  std::vector<std::size_t> order(rank_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto nodes = net.nodes();
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return nodes[a].id < nodes[b].id; });
  for (std::size_t r = 0; r < order.size(); ++r) rank_[order[r]] = r;
}

void Simulator::push(double time, EventKind kind, std::size_t node, std::optional<std::size_t> channel,
                     std::optional<SignalId> signal) {
  queue_.push(Pending{time, rank_[node], next_order_++, kind, node, channel, signal});
}

void Simulator::schedule_excitation(const NodeId& node, double time) {
  const std::size_t index = net_.node_index(node);
  if (!std::isfinite(time) || time < now_) {
    throw CausalityError(fmt::format("cannot excite '{}' at t={} before the current time {}", node.str(),
                                     format_real(time), format_real(now_)));
  }
  push(time, EventKind::excitation, index);
}

std::optional<double> Simulator::next_time() const {
  if (queue_.empty()) return std::nullopt;
  return queue_.top().time;
}

void Simulator::excite(std::size_t node, double time) {
  if (excited_[node]) return;
  excited_[node] = true;
  double at = time + decay_delay(net_.nodes()[node], net_.units(), cfg_.mode, rng_);
  // A lifetime below the resolution of the current time still has to land
  // strictly after the excitation.
  if (!(at > time)) at = std::nextafter(time, std::numeric_limits<double>::infinity());
  push(at, EventKind::decay, node);
}

void Simulator::emit(const Pending& p) {
  const auto& source = net_.nodes()[p.node];
  const auto& ch = net_.channels()[*p.channel];
  double total_weight = 0.0;
  for (std::size_t c : net_.outgoing(p.node)) total_weight += net_.channels()[c].weight;
  const double share = ch.weight / total_weight;
  Momentum momentum{};
  for (std::size_t i = 0; i < 3; ++i) momentum[i] = source.momentum[i] * share;

  const SignalId id = next_signal_++;
  log_.record_signal(Signal{id, ch.id, source.gamma.value() * share, momentum});
  log_.append(EventKind::emission, p.time, source.id, id, ch.id);
  push(p.time + transit_lifetime(ch), EventKind::detection, net_.node_index(ch.target), p.channel, id);
}

std::optional<SimEvent> Simulator::step() {
  if (queue_.empty()) return std::nullopt;
  const Pending p = queue_.top();
  queue_.pop();
  now_ = p.time;
  const NodeId& node = net_.nodes()[p.node].id;

  switch (p.kind) {
    case EventKind::excitation:
      log_.append(EventKind::excitation, p.time, node);
      excite(p.node, p.time);
      break;
    case EventKind::decay:
      log_.append(EventKind::decay, p.time, node);
      excited_[p.node] = false;
      for (std::size_t c : net_.outgoing(p.node)) push(p.time, EventKind::emission, p.node, c);
      break;
    case EventKind::emission:
      emit(p);
      break;
    case EventKind::detection:
      log_.append(EventKind::detection, p.time, node, p.signal, net_.channels()[*p.channel].id);
      excite(p.node, p.time);
      break;
  }
  return log_.events().back();
}

EventLog run(const Network& net, const RunConfig& cfg, std::span<const Excitation> initial) {
  Simulator sim(net, cfg);
  for (const auto& e : initial) sim.schedule_excitation(e.node, e.time);
  Termination reason = Termination::queue_empty;
  while (true) {
    if (sim.log().size() >= cfg.max_events) {
      reason = Termination::max_events;
      break;
    }
    const auto next = sim.next_time();
    if (!next) break;
    if (cfg.until && *next > *cfg.until) {
      reason = Termination::horizon;
      break;
    }
    sim.step();
  }
  EventLog log = std::move(sim).take_log();
  log.set_termination(reason);
  return log;
}

PresetScenario bigbang_scenario(std::size_t k, const UnitSystem& units) {
  if (k == 0) throw InvalidParameter("bigbang needs at least one child clock (k >= 1)");
  const Lifetime root_tau(units.mode() == UnitMode::si ? kPlanckTimePreset : 1.0);
  const ReconfigurationEnergy gamma = gamma_for_lifetime(root_tau, units);
  const std::size_t width = std::to_string(k).size();

  NetworkBuilder builder(units);
  builder.add_node(ClockNode(NodeId("U"), gamma, InteractionKind::grav));
  for (std::size_t i = 1; i <= k; ++i) {
    const std::string suffix = fmt::format("{:0{}}", i, width);
    NodeId child("D" + suffix);
    builder.add_node(ClockNode(child, gamma, InteractionKind::grav));
    builder.add_channel(SignalChannel(ChannelId("s" + suffix), NodeId("U"), child,
                                      static_cast<double>(i) * units.c() * root_tau.value(), units.c()));
  }
  return PresetScenario{std::move(builder).build(), {Excitation{NodeId("U"), 0.0}}};
}

void write_event_log(std::ostream& out, const EventLog& log) {
  out << "# fclock-events v1 seed=" << log.seed() << " mode=" << to_string(log.mode())
      << " units=" << to_string(log.units().mode()) << " rng=" << DecayRng::kName
      << " termination=" << to_string(log.termination()) << '\n';
  out << "seq\ttime\tkind\tnode\tsignal\tchannel\n";
  for (const auto& e : log.events()) {
    out << e.seq << '\t' << format_real(e.time) << '\t' << to_string(e.kind) << '\t' << e.node.str() << '\t';
    if (e.signal) {
      out << *e.signal;
    } else {
      out << '-';
    }
    out << '\t' << (e.channel ? e.channel->str() : std::string("-")) << '\n';
  }
}

}  // namespace fclock
