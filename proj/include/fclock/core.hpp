#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace fclock {

enum class UnitMode { natural, si };

/// Selects the value of hbar and c used by every lifetime computation.
/// Natural mode pins both to exactly 1.
class UnitSystem {
public:
  static constexpr double kSiHbar = 1.054571817e-34;  // J*s
  static constexpr double kSiLightSpeed = 2.99792458e8;  // m/s

  constexpr UnitSystem() = default;

  static constexpr UnitSystem natural() { return UnitSystem{UnitMode::natural, 1.0, 1.0}; }
  static constexpr UnitSystem si() { return UnitSystem{UnitMode::si, kSiHbar, kSiLightSpeed}; }
  static UnitSystem of(UnitMode mode) { return mode == UnitMode::si ? si() : natural(); }

  constexpr UnitMode mode() const { return mode_; }
  constexpr double hbar() const { return hbar_; }
  constexpr double c() const { return c_; }

  friend constexpr bool operator==(const UnitSystem&, const UnitSystem&) = default;

private:
  constexpr UnitSystem(UnitMode mode, double hbar, double c) : mode_(mode), hbar_(hbar), c_(c) {}

  UnitMode mode_ = UnitMode::natural;
  double hbar_ = 1.0;
  double c_ = 1.0;
};

/// Planck time as quoted for the first clock tick of the Big Bang preset.
/// CODATA gives 5.391247e-44 s; the preset keeps the quoted value.
inline constexpr double kPlanckTimePreset = 5.39056e-44;

/// Energy released by a reconfiguration. Always strictly positive: a zero
/// matrix element means no clock was created.
class ReconfigurationEnergy {
public:
  explicit ReconfigurationEnergy(double gamma);

  double value() const { return gamma_; }

  friend auto operator<=>(const ReconfigurationEnergy&, const ReconfigurationEnergy&) = default;

private:
  double gamma_;
};

/// A strictly positive, finite decay lifetime.
class Lifetime {
public:
  explicit Lifetime(double tau);

  double value() const { return tau_; }

  friend auto operator<=>(const Lifetime&, const Lifetime&) = default;

private:
  double tau_;
};

enum class InteractionKind { strong, em, weak, grav };

inline constexpr InteractionKind kAllInteractionKinds[] = {
    InteractionKind::strong, InteractionKind::em, InteractionKind::weak, InteractionKind::grav};

std::string_view to_string(InteractionKind kind);
std::string_view to_string(UnitMode mode);

/// Throws InvalidParameter for unrecognized names.
InteractionKind parse_interaction_kind(std::string_view name);
UnitMode parse_unit_mode(std::string_view name);

/// Intrinsic clock lifetime hbar / gamma.
Lifetime lifetime_from_gamma(ReconfigurationEnergy gamma, const UnitSystem& units);

/// Inverse of lifetime_from_gamma: the energy whose recomputed lifetime is
/// closest to tau. Exact whenever some double gamma reproduces tau.
ReconfigurationEnergy gamma_for_lifetime(Lifetime tau, const UnitSystem& units);

}  // namespace fclock
