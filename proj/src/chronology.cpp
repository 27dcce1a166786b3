#include "fclock/chronology.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <tuple>
#include <unordered_map>

#include <fmt/format.h>

#include "fclock/error.hpp"
#include "fclock/format.hpp"

namespace fclock {

StandardClock::StandardClock(double period, double origin) : period_(period), origin_(origin) {
  if (!std::isfinite(period) || period <= 0.0) {
    throw InvalidParameter(fmt::format("clock period must be positive (got {})", period));
  }
  if (!std::isfinite(origin)) throw InvalidParameter("clock origin must be finite");
}

double StandardClock::tick_of(double time) const { return std::floor((time - origin_) / period_); }

LabeledEvent label_event(const SimEvent& ev, const StandardClock& clock, std::optional<StateVector> induced) {
  if (ev.kind != EventKind::detection) {
    throw InvalidArgument(fmt::format("only detections can be labeled (event {} is a {})", ev.seq,
                                      to_string(ev.kind)));
  }
  const double tick = clock.tick_of(ev.time);
  TripletState triplet =
      make_triplet(TimeLabelState(tick), Qubit::on(), induced ? std::move(*induced) : StateVector::basis(2, 0));
  return LabeledEvent{ev, std::move(triplet), tick, clock};
}

double extract_time(const LabeledEvent& le) { return disentangle(le.triplet).t_e; }

std::vector<LabeledEvent> build_timeline(std::span<const LabeledEvent> labels) {
  std::vector<LabeledEvent> out(labels.begin(), labels.end());
  std::sort(out.begin(), out.end(), [](const LabeledEvent& a, const LabeledEvent& b) {
    return std::tie(a.t_e, a.event.seq, a.event.time, a.event.node, a.event.kind) <
           std::tie(b.t_e, b.event.seq, b.event.time, b.event.node, b.event.kind);
  });
  return out;
}

std::vector<LabeledEvent> label_detections(const EventLog& log, const StandardClock& clock) {
  std::vector<LabeledEvent> out;
  for (const auto& e : log.events()) {
    if (e.kind == EventKind::detection) out.push_back(label_event(e, clock));
  }
  return out;
}

namespace {

// Walks the log with the engine's per-node ground/excited rule and reports
// each exciting event and each decay.
template <typename OnPair, typename OnOrphanDecay>
void replay_node_states(const EventLog& log, OnPair on_pair, OnOrphanDecay on_orphan) {
  std::map<NodeId, const SimEvent*> open;
  for (const auto& e : log.events()) {
    switch (e.kind) {
      case EventKind::excitation:
      case EventKind::detection:
        open.try_emplace(e.node, &e);
        break;
      case EventKind::decay: {
        auto it = open.find(e.node);
        if (it == open.end()) {
          on_orphan(e);
        } else {
          on_pair(*it->second, e);
          open.erase(it);
        }
        break;
      }
      case EventKind::emission:
        break;
    }
  }
}

}  // namespace

std::vector<QatPointer> qat_pointers(const EventLog& log) {
  std::vector<QatPointer> out;
  replay_node_states(
      log,
      [&](const SimEvent& exc, const SimEvent& dec) {
        if (!(dec.time > exc.time)) {
          throw IntegrityError(fmt::format("decay {} of '{}' is not later than its excitation {}", dec.seq,
                                           dec.node.str(), exc.seq));
        }
        out.push_back(QatPointer{dec.node, exc, dec});
      },
      [](const SimEvent& dec) {
        throw IntegrityError(
            fmt::format("decay {} of '{}' has no matching excitation", dec.seq, dec.node.str()));
      });
  return out;
}

double cat_interval(const LabeledEvent& a, const LabeledEvent& b, const StandardClock& clock) {
  if (a.clock != clock || b.clock != clock) {
    throw InvalidArgument("CAT interval needs both events labeled with the same standard clock");
  }
  return (b.t_e - a.t_e) * clock.period();
}

void ArrowMap::add_interval(std::uint64_t a, std::uint64_t b, double value) {
  if (a > b) {
    std::swap(a, b);
    value = -value;
  }
  intervals_[{a, b}] = value;
}

std::optional<double> ArrowMap::interval(std::uint64_t a, std::uint64_t b) const {
  if (a == b) return 0.0;
  const bool swapped = a > b;
  auto it = intervals_.find(swapped ? Key{b, a} : Key{a, b});
  if (it == intervals_.end()) return std::nullopt;
  return swapped ? -it->second : it->second;
}

ArrowMap build_arrow_map(const EventLog& log, std::span<const LabeledEvent> timeline) {
  ArrowMap arrows;
  arrows.qat_pointers = qat_pointers(log);
  for (std::size_t i = 1; i < timeline.size(); ++i) {
    const auto& a = timeline[i - 1];
    const auto& b = timeline[i];
    arrows.add_interval(a.event.seq, b.event.seq, cat_interval(a, b, a.clock));
  }
  return arrows;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::unmatched_detection: return "unmatched-detection";
    case ViolationKind::transit_mismatch: return "transit-mismatch";
    case ViolationKind::non_forward_decay: return "non-forward-decay";
    case ViolationKind::time_order: return "time-order";
  }
  return "?";
}

CausalityReport audit_causality(const EventLog& log, const Network& net) {
  CausalityReport report;
  auto flag = [&](ViolationKind kind, const SimEvent& e, std::string detail) {
    report.violations.push_back(Violation{kind, e.seq, std::move(detail)});
  };

  std::unordered_map<SignalId, const SimEvent*> emissions;
  const SimEvent* previous = nullptr;
  for (const auto& e : log.events()) {
    if (previous && e.time < previous->time) {
      flag(ViolationKind::time_order, e, fmt::format("time {} precedes the previous event", format_real(e.time)));
    }
    previous = &e;

    if (e.kind == EventKind::emission && e.signal) {
      emissions.emplace(*e.signal, &e);
      continue;
    }
    if (e.kind != EventKind::detection) continue;

    if (!e.signal || !e.channel) {
      flag(ViolationKind::unmatched_detection, e, "detection without signal or channel");
      continue;
    }
    auto it = emissions.find(*e.signal);
    if (it == emissions.end()) {
      flag(ViolationKind::unmatched_detection, e, fmt::format("no earlier emission of signal {}", *e.signal));
      continue;
    }
    const SimEvent& em = *it->second;
    const SignalChannel* ch = net.find_channel(*e.channel);
    if (!ch || em.channel != e.channel || ch->source != em.node || ch->target != e.node) {
      flag(ViolationKind::unmatched_detection, e,
           fmt::format("signal {} emitted and detected on inconsistent channels", *e.signal));
      continue;
    }
    const double transit = transit_lifetime(*ch);
    const double gap = e.time - em.time;
    const double scale = std::max(transit, std::abs(e.time));
    if (!(std::abs(gap - transit) <= kTransitTolerance * scale)) {
      flag(ViolationKind::transit_mismatch, e,
           fmt::format("signal {} took {} but channel '{}' transit is {}", *e.signal, format_real(gap),
                       ch->id.str(), format_real(transit)));
    }
  }

  replay_node_states(
      log,
      [&](const SimEvent& exc, const SimEvent& dec) {
        if (!(dec.time > exc.time)) {
          flag(ViolationKind::non_forward_decay, dec,
               fmt::format("decay is not later than excitation {}", exc.seq));
        }
      },
      [&](const SimEvent& dec) { flag(ViolationKind::non_forward_decay, dec, "decay without excitation"); });

  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const Violation& a, const Violation& b) { return a.seq < b.seq; });
  return report;
}

void write_timeline(std::ostream& out, std::span<const LabeledEvent> timeline) {
  out << "t_e\tevent_seq\tnode\tkind\n";
  for (const auto& le : timeline) {
    out << format_real(le.t_e) << '\t' << le.event.seq << '\t' << le.event.node.str() << '\t'
        << to_string(le.event.kind) << '\n';
  }
}

void write_arrow_map(std::ostream& out, const ArrowMap& arrows) {
  for (const auto& p : arrows.qat_pointers) {
    out << "qat\t" << p.node.str() << '\t' << p.excitation.seq << '\t' << format_real(p.excitation.time) << '\t'
        << p.decay.seq << '\t' << format_real(p.decay.time) << '\n';
  }
  for (const auto& [key, value] : arrows.intervals()) {
    out << "cat\t" << key.first << '\t' << key.second << '\t' << format_real(value) << '\n';
  }
}

}  // namespace fclock
