#include "fclock/qstate.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fclock/error.hpp"

namespace fclock {
namespace {

void check_amplitudes(std::span<const Complex> amplitudes) {
  if (amplitudes.empty()) throw InvalidState("state vector must have dimension >= 1");
  for (const auto& a : amplitudes) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw InvalidState("state vector amplitudes must be finite");
    }
  }
}

std::size_t checked_product_dim(std::size_t a, std::size_t b, std::size_t max_dim) {
  if (a > std::numeric_limits<std::size_t>::max() / b || a * b > max_dim) {
    throw CapacityError(fmt::format("tensor product of dims {} and {} exceeds the cap of {}", a, b, max_dim));
  }
  return a * b;
}

}  // namespace

StateVector::StateVector(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
  check_amplitudes(amplitudes_);
  if (!std::isfinite(norm())) throw InvalidState("state vector norm overflows");
}

StateVector::StateVector(std::initializer_list<Complex> amplitudes)
    : StateVector(std::vector<Complex>(amplitudes)) {}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) {
    throw InvalidState(fmt::format("basis index {} out of range for dimension {}", index, dim));
  }
  std::vector<Complex> amps(dim);
  amps[index] = 1.0;
  return StateVector(std::move(amps));
}

double StateVector::norm() const {
  // Scaled accumulation so that tiny or huge amplitudes don't under/overflow.
  double scale = 0.0;
  for (const auto& a : amplitudes_) scale = std::max(scale, std::abs(a));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& a : amplitudes_) sum += std::norm(a / scale);
  return scale * std::sqrt(sum);
}

Qubit make_qubit(Complex alpha1, Complex alpha2) {
  const double n2 = std::norm(alpha1) + std::norm(alpha2);
  if (!(std::abs(n2 - 1.0) <= Qubit::kNormTolerance)) {
    throw InvalidState(fmt::format("qubit amplitudes must satisfy |a1|^2 + |a2|^2 = 1 (got {})", n2));
  }
  return Qubit(alpha1, alpha2);
}

TimeLabelState::TimeLabelState(double t) : t_j(t) {
  if (!std::isfinite(t)) throw InvalidState("time label must be finite");
}

StateVector tensor_product(const StateVector& a, const StateVector& b, std::size_t max_dim) {
  const std::size_t dim = checked_product_dim(a.dim(), b.dim(), max_dim);
  std::vector<Complex> out;
  out.reserve(dim);
  for (const auto& x : a.amplitudes()) {
    for (const auto& y : b.amplitudes()) out.push_back(x * y);
  }
  return StateVector(std::move(out));
}

StateVector tensor_product(std::span<const StateVector> factors, std::size_t max_dim) {
  if (factors.empty()) throw InvalidState("tensor product needs at least one factor");
  StateVector acc = factors.front();
  for (const auto& f : factors.subspan(1)) acc = tensor_product(acc, f, max_dim);
  return acc;
}

StateVector compose_induced(const StateVector& phi, const StateVector& ce, std::size_t max_dim) {
  return tensor_product(phi, ce, max_dim);
}

TripletState make_triplet(TimeLabelState label, Qubit pulse, StateVector induced, std::size_t max_dim) {
  StateVector product = tensor_product(pulse.as_state(), induced, max_dim);
  return TripletState(label, pulse, std::move(induced), std::move(product));
}

Disentangled disentangle(const TripletState& triplet) {
  const std::size_t discarded = triplet.product().dim();
  return Disentangled{triplet.label().t_j,
                      DisentanglementRecord{discarded, std::log2(static_cast<double>(discarded))}};
}

}  // namespace fclock
