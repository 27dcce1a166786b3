#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fclock/engine.hpp"
#include "fclock/network.hpp"
#include "fclock/qstate.hpp"

namespace fclock {

/// External periodic reference. Tick n begins at origin + n * period.
class StandardClock {
public:
  explicit StandardClock(double period = 1.0, double origin = 0.0);

  double period() const { return period_; }
  double origin() const { return origin_; }

  /// floor((time - origin) / period); negative before the origin.
  double tick_of(double time) const;

  friend bool operator==(const StandardClock&, const StandardClock&) = default;

private:
  double period_;
  double origin_;
};

/// A detection mapped onto the standard clock through a triplet state.
struct LabeledEvent {
  SimEvent event;
  TripletState triplet;
  double t_e;
  StandardClock clock;
};

/// Builds |t_j> ⊗ |1> ⊗ |induced> with t_j = clock.tick_of(ev.time). The
/// induced state defaults to the 2-dim basis vector |0>. Throws
/// InvalidArgument for anything other than a detection.
LabeledEvent label_event(const SimEvent& ev, const StandardClock& clock,
                         std::optional<StateVector> induced = std::nullopt);

/// The label recovered by disentangling the triplet.
double extract_time(const LabeledEvent& le);

/// Sorted by (t_e, seq) with remaining fields as tiebreak, so the result
/// does not depend on input order.
std::vector<LabeledEvent> build_timeline(std::span<const LabeledEvent> labels);

/// Labels every detection in the log.
std::vector<LabeledEvent> label_detections(const EventLog& log, const StandardClock& clock);

/// Irreversible pointer from the event that excited a node to its decay.
struct QatPointer {
  NodeId node;
  SimEvent excitation;  // an excitation or an exciting detection
  SimEvent decay;
};

/// Replays the per-node ground/excited state machine over the log and pairs
/// each exciting event with the decay that ends it. Excitations still open
/// at the end of the log yield no pointer. Throws IntegrityError for a decay
/// of a node that is not excited.
std::vector<QatPointer> qat_pointers(const EventLog& log);

/// (b.t_e - a.t_e) * period. Throws InvalidArgument unless both events were
/// labeled with clock.
double cat_interval(const LabeledEvent& a, const LabeledEvent& b, const StandardClock& clock);

/// QAT pointers plus CAT intervals between consecutive timeline entries.
class ArrowMap {
public:
  using Key = std::pair<std::uint64_t, std::uint64_t>;  // (seq a, seq b)

  std::vector<QatPointer> qat_pointers;

  void add_interval(std::uint64_t a, std::uint64_t b, double value);
  /// Stored value for (a, b), or the negated value of (b, a).
  std::optional<double> interval(std::uint64_t a, std::uint64_t b) const;
  const std::map<Key, double>& intervals() const { return intervals_; }

private:
  std::map<Key, double> intervals_;
};

ArrowMap build_arrow_map(const EventLog& log, std::span<const LabeledEvent> timeline);

enum class ViolationKind { unmatched_detection, transit_mismatch, non_forward_decay, time_order };

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::uint64_t seq;
  std::string detail;
};

struct CausalityReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

inline constexpr double kTransitTolerance = 1e-12;

/// Checks that each detection follows an emission of the same signal on the
/// same channel, that the gap equals the channel's transit lifetime (to
/// kTransitTolerance relative to the event time scale), and that every decay
/// is strictly later than the excitation it ends.
CausalityReport audit_causality(const EventLog& log, const Network& net);

/// `t_e seq node kind` per line with a column header.
void write_timeline(std::ostream& out, std::span<const LabeledEvent> timeline);

/// `qat node exc_seq exc_time decay_seq decay_time` and `cat seq_a seq_b interval` lines.
void write_arrow_map(std::ostream& out, const ArrowMap& arrows);

}  // namespace fclock
