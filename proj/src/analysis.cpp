#include "fclock/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "fclock/error.hpp"
#include "fclock/format.hpp"

namespace fclock {

LifetimeEstimate estimate_lifetime(const EventLog& log, const Network& net, const NodeId& node) {
  const double expected = effective_lifetime(net.node(node), net.units()).value();
  // Welford
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  for (const auto& p : qat_pointers(log)) {
    if (p.node != node) continue;
    const double x = p.decay.time - p.excitation.time;
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  if (n == 0) {
    throw InsufficientData(fmt::format("node '{}' has no completed excitation/decay pair", node.str()));
  }
  const double std_error =
      n == 1 ? 0.0 : std::sqrt(m2 / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
  return LifetimeEstimate{node, n, mean, std_error, expected};
}

UnificationResult unify_lifetimes(const std::map<InteractionKind, double>& lifetimes, double tau_u) {
  if (!std::isfinite(tau_u) || tau_u <= 0.0) {
    throw InvalidParameter(fmt::format("tau_u must be positive (got {})", tau_u));
  }
  UnificationResult result{tau_u, {}};
  for (const auto& [kind, tau] : lifetimes) {
    if (!std::isfinite(tau) || tau <= 0.0) {
      throw InvalidParameter(fmt::format("{} lifetime must be positive (got {})", to_string(kind), tau));
    }
    const double scalar = tau_u / tau;
    if (!(std::abs(scalar * tau - tau_u) <= kUnificationTolerance * tau_u)) {
      throw InvalidParameter(fmt::format("{} lifetime {} cannot be unified to {} in double precision",
                                         to_string(kind), tau, tau_u));
    }
    result.scalars.emplace(kind, scalar);
  }
  return result;
}

std::vector<SuperluminalChannel> superluminal_report(const Network& net) {
  std::vector<SuperluminalChannel> out;
  const double c = net.units().c();
  for (const auto& ch : net.channels()) {
    if (ch.distance == 0.0 || !is_superluminal(ch, net.units())) continue;
    const double transit = transit_lifetime(ch);
    out.push_back(SuperluminalChannel{ch.id, transit, ch.distance / c, (ch.distance / transit) / c});
  }
  return out;
}

UnificationResult network_unification(const Network& net) {
  std::map<InteractionKind, std::pair<double, std::size_t>> sums;
  for (const auto& node : net.nodes()) {
    auto& [sum, count] = sums[node.interaction];
    sum += effective_lifetime(node, net.units()).value();
    ++count;
  }
  std::map<InteractionKind, double> lifetimes;
  double tau_u = 0.0;
  for (const auto& [kind, acc] : sums) {
    const double mean = acc.first / static_cast<double>(acc.second);
    lifetimes.emplace(kind, mean);
    tau_u = std::max(tau_u, mean);
  }
  if (lifetimes.empty()) return UnificationResult{0.0, {}};
  return unify_lifetimes(lifetimes, tau_u);
}

void write_summary(std::ostream& out, const Network& net, const EventLog& log, const CausalityReport& audit) {
  out << "[run]\n"
      << "seed\t" << log.seed() << '\n'
      << "mode\t" << to_string(log.mode()) << '\n'
      << "units\t" << to_string(log.units().mode()) << '\n'
      << "rng\t" << DecayRng::kName << '\n'
      << "events\t" << log.size() << '\n'
      << "termination\t" << to_string(log.termination()) << '\n';

  out << "\n[lifetime estimates]\n"
      << "node\tn\tmean\tstderr\texpected\n";
  std::vector<NodeId> ids;
  for (const auto& node : net.nodes()) ids.push_back(node.id);
  std::sort(ids.begin(), ids.end());
  const bool log_intact = std::none_of(audit.violations.begin(), audit.violations.end(), [](const Violation& v) {
    return v.kind == ViolationKind::non_forward_decay;
  });
  for (const auto& id : ids) {
    out << id.str() << '\t';
    if (log_intact) {
      try {
        const auto est = estimate_lifetime(log, net, id);
        out << est.n << '\t' << format_real(est.mean) << '\t' << format_real(est.std_error) << '\t'
            << format_real(est.expected) << '\n';
        continue;
      } catch (const InsufficientData&) {
      }
    }
    out << "0\t-\t-\t" << format_real(effective_lifetime(net.node(id), net.units()).value()) << '\n';
  }

  out << "\n[network lifetimes]\n"
      << "kind\tid\tlifetime\n";
  for (const auto& cen : net.cens()) {
    out << "cen\t" << cen.id.str() << '\t' << format_real(cen_lifetime(cen, net.units()).value()) << '\n';
  }
  for (const auto& path : net.sen_paths()) {
    out << "sen\t" << path.id.str() << '\t' << format_real(sen_lifetime(path, net)) << '\n';
  }

  const auto unification = network_unification(net);
  out << "\n[unification]\n"
      << "tau_u\t" << (unification.scalars.empty() ? std::string("-") : format_real(unification.tau_u)) << '\n'
      << "kind\tscalar\n";
  for (const auto& [kind, scalar] : unification.scalars) {
    out << to_string(kind) << '\t' << format_real(scalar) << '\n';
  }

  out << "\n[superluminal channels]\n"
      << "channel\ttransit\tlight\tratio\n";
  for (const auto& s : superluminal_report(net)) {
    out << s.id.str() << '\t' << format_real(s.transit) << '\t' << format_real(s.light) << '\t'
        << format_real(s.ratio) << '\n';
  }

  out << "\n[causality audit]\n"
      << "violations\t" << audit.violations.size() << '\n';
  for (const auto& v : audit.violations) {
    out << to_string(v.kind) << '\t' << v.seq << '\t' << v.detail << '\n';
  }
}

}  // namespace fclock
