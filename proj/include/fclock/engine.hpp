#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "fclock/core.hpp"
#include "fclock/network.hpp"

namespace fclock {

enum class EventKind { excitation, decay, emission, detection };
enum class RunMode { deterministic, stochastic };
enum class Termination { queue_empty, horizon, max_events };

std::string_view to_string(EventKind kind);
std::string_view to_string(RunMode mode);
std::string_view to_string(Termination reason);
EventKind parse_event_kind(std::string_view name);
/// Accepts "deterministic"/"det" and "stochastic"/"stoch".
RunMode parse_run_mode(std::string_view name);

using SignalId = std::uint64_t;

struct SimEvent {
  std::uint64_t seq;  // position in the log
  double time;
  EventKind kind;
  NodeId node;  // emitting node for emissions, receiving node for detections
  std::optional<SignalId> signal;
  std::optional<ChannelId> channel;

  friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

/// Payload of one emitted signal.
struct Signal {
  SignalId id;
  ChannelId channel;
  double energy;
  Momentum momentum;

  friend bool operator==(const Signal&, const Signal&) = default;
};

/// Append-only record of a run. Recorded events are never modified.
class EventLog {
public:
  EventLog(std::uint64_t seed, RunMode mode, UnitSystem units) : seed_(seed), mode_(mode), units_(units) {}

  /// Assigns the next seq. Throws CausalityError when time is negative,
  /// non-finite, or earlier than the last recorded event.
  const SimEvent& append(EventKind kind, double time, NodeId node, std::optional<SignalId> signal = std::nullopt,
                         std::optional<ChannelId> channel = std::nullopt);
  void record_signal(Signal signal) { signals_.push_back(std::move(signal)); }
  void set_termination(Termination reason) { termination_ = reason; }

  std::span<const SimEvent> events() const { return events_; }
  std::span<const Signal> signals() const { return signals_; }
  std::size_t size() const { return events_.size(); }
  std::uint64_t seed() const { return seed_; }
  RunMode mode() const { return mode_; }
  const UnitSystem& units() const { return units_; }
  Termination termination() const { return termination_; }

  friend bool operator==(const EventLog&, const EventLog&) = default;

private:
  std::uint64_t seed_;
  RunMode mode_;
  UnitSystem units_;
  Termination termination_ = Termination::queue_empty;
  std::vector<SimEvent> events_;
  std::vector<Signal> signals_;
};

struct RunConfig {
  RunMode mode = RunMode::deterministic;
  std::uint64_t seed = 0;
  std::uint64_t max_events = 1'000'000;
  std::optional<double> until;

  /// Throws InvalidParameter if max_events == 0 or until is negative.
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct Excitation {
  NodeId node;
  double time;

  friend bool operator==(const Excitation&, const Excitation&) = default;
};

/// Exponential delay source. Generator identity is part of the log contract:
/// std::mt19937_64 seeded with the run seed; each draw x maps to
/// u = ((x >> 11) + 0.5) * 2^-53 in (0, 1) and delay = -mean * ln(u).
class DecayRng {
public:
  static constexpr std::string_view kName = "mt19937_64/inverse-transform-v1";

  explicit DecayRng(std::uint64_t seed) : engine_(seed) {}

  double exponential(double mean);

private:
  std::mt19937_64 engine_;
};

/// Deterministic mode: exactly the node's effective lifetime.
/// Stochastic mode: an exponential sample with that mean.
double decay_delay(const ClockNode& node, const UnitSystem& units, RunMode mode, DecayRng& rng);

/// Single-threaded discrete-event core. Each step processes exactly one
/// pending event and appends it to the log. Simultaneous pending events are
/// ordered by (time, node id, scheduling order).
///
/// Node state is binary. Excitations and detections reaching a ground node
/// excite it and schedule its decay; reaching an excited node they are
/// logged and otherwise absorbed. A decay schedules one emission per
/// outgoing channel at the decay time; each emission schedules a detection
/// at the channel's target after the transit lifetime.
class Simulator {
public:
  /// The network must outlive the simulator.
  Simulator(const Network& net, const RunConfig& cfg);

  /// Throws TopologyError for unknown nodes, CausalityError for times
  /// before now().
  void schedule_excitation(const NodeId& node, double time);

  std::optional<SimEvent> step();

  std::optional<double> next_time() const;
  double now() const { return now_; }
  bool is_excited(const NodeId& node) const { return excited_[net_.node_index(node)]; }
  const EventLog& log() const { return log_; }
  EventLog take_log() && { return std::move(log_); }

private:
  struct Pending {
    double time;
    std::size_t node_rank;
    std::uint64_t order;
    EventKind kind;
    std::size_t node;
    std::optional<std::size_t> channel;
    std::optional<SignalId> signal;
  };
  struct Later {
    bool operator()(const Pending& a, const Pending& b) const;
  };

  void push(double time, EventKind kind, std::size_t node, std::optional<std::size_t> channel = std::nullopt,
            std::optional<SignalId> signal = std::nullopt);
  void excite(std::size_t node, double time);
  void emit(const Pending& p);

  const Network& net_;
  RunConfig cfg_;
  DecayRng rng_;
  EventLog log_;
  std::vector<std::size_t> rank_;
  std::vector<bool> excited_;
  std::priority_queue<Pending, std::vector<Pending>, Later> queue_;
  std::uint64_t next_order_ = 0;
  SignalId next_signal_ = 0;
  double now_ = 0.0;
};

/// Steps until the queue is empty, the next event lies beyond cfg.until, or
/// cfg.max_events events are logged. Identical inputs give identical logs.
EventLog run(const Network& net, const RunConfig& cfg, std::span<const Excitation> initial);

struct PresetScenario {
  Network network;
  std::vector<Excitation> excitations;
};

/// Root clock "U" fanning out to k child clocks. The root lifetime is the
/// Planck-time preset in SI units and 1 in natural units; children share
/// it. Child i sits i root-lifetimes of light travel away. Throws
/// InvalidParameter for k == 0.
PresetScenario bigbang_scenario(std::size_t k, const UnitSystem& units);

/// Tab-separated log: one header comment line with run metadata, one
/// column line, then `seq time kind node signal channel` per event. Absent
/// fields print as "-".
void write_event_log(std::ostream& out, const EventLog& log);

}  // namespace fclock
