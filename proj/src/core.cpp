#include "fclock/core.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fclock/error.hpp"

namespace fclock {

ReconfigurationEnergy::ReconfigurationEnergy(double gamma) : gamma_(gamma) {
  if (!std::isfinite(gamma) || gamma <= 0.0) {
    throw InvalidParameter(fmt::format("gamma must be positive and finite (got {})", gamma));
  }
}

Lifetime::Lifetime(double tau) : tau_(tau) {
  if (!std::isfinite(tau) || tau <= 0.0) {
    throw InvalidParameter(fmt::format("lifetime must be positive and finite (got {})", tau));
  }
}

std::string_view to_string(InteractionKind kind) {
  switch (kind) {
    case InteractionKind::strong: return "strong";
    case InteractionKind::em: return "em";
    case InteractionKind::weak: return "weak";
    case InteractionKind::grav: return "grav";
  }
  return "?";
}

std::string_view to_string(UnitMode mode) {
  return mode == UnitMode::si ? "si" : "natural";
}

InteractionKind parse_interaction_kind(std::string_view name) {
  for (auto kind : kAllInteractionKinds) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidParameter(fmt::format("unknown interaction kind '{}' (expected strong|em|weak|grav)", name));
}

UnitMode parse_unit_mode(std::string_view name) {
  if (name == "natural") return UnitMode::natural;
  if (name == "si") return UnitMode::si;
  throw InvalidParameter(fmt::format("unknown unit mode '{}' (expected natural|si)", name));
}

Lifetime lifetime_from_gamma(ReconfigurationEnergy gamma, const UnitSystem& units) {
  return Lifetime(units.hbar() / gamma.value());
}

ReconfigurationEnergy gamma_for_lifetime(Lifetime tau, const UnitSystem& units) {
  const double hbar = units.hbar();
  const double target = tau.value();
  // hbar / (hbar / tau) lands within a few ulps of tau. Scan the neighbouring
  // gammas for the one whose forward lifetime is closest (usually exact).
  double best = hbar / target;
  double best_err = std::abs(hbar / best - target);
  for (double dir : {std::numeric_limits<double>::infinity(), 0.0}) {
    double g = hbar / target;
    for (int i = 0; i < 8 && best_err != 0.0; ++i) {
      g = std::nextafter(g, dir);
      const double err = std::abs(hbar / g - target);
      if (err < best_err) {
        best = g;
        best_err = err;
      }
    }
  }
  return ReconfigurationEnergy(best);
}

}  // namespace fclock
