#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace fclock {

using Complex = std::complex<double>;

/// Default cap on the dimension of any realized tensor product.
inline constexpr std::size_t kDefaultMaxDim = std::size_t{1} << 20;

/// Dense, finite-dimensional complex amplitude vector. Not required to be
/// normalized; the norm only has to be finite.
class StateVector {
public:
  explicit StateVector(std::vector<Complex> amplitudes);
  StateVector(std::initializer_list<Complex> amplitudes);

  /// Unit vector |index> in a space of the given dimension.
  static StateVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
  double norm() const;

  friend bool operator==(const StateVector&, const StateVector&) = default;

private:
  std::vector<Complex> amplitudes_;
};

/// Two-level clock pulse state alpha1|0> + alpha2|1>, |0> = off, |1> = on.
class Qubit {
public:
  static constexpr double kNormTolerance = 1e-9;

  static Qubit off() { return Qubit(1.0, 0.0); }
  static Qubit on() { return Qubit(0.0, 1.0); }

  const Complex& alpha1() const { return alpha1_; }
  const Complex& alpha2() const { return alpha2_; }
  StateVector as_state() const { return StateVector{alpha1_, alpha2_}; }

  friend bool operator==(const Qubit&, const Qubit&) = default;
  friend Qubit make_qubit(Complex alpha1, Complex alpha2);

private:
  Qubit(Complex alpha1, Complex alpha2) : alpha1_(alpha1), alpha2_(alpha2) {}

  Complex alpha1_;
  Complex alpha2_;
};

/// Rejects amplitudes whose squared norm differs from 1 by more than
/// Qubit::kNormTolerance. Amplitudes are stored exactly as given.
Qubit make_qubit(Complex alpha1, Complex alpha2);

/// Standard-clock counter reading. Stored as a tagged real rather than a
/// basis vector because the label space is the real line.
struct TimeLabelState {
  explicit TimeLabelState(double t);

  double t_j;
};

/// label ⊗ pulse ⊗ induced, with the product realized. The label is a
/// one-dimensional unit factor, so product.dim() == 2 * induced.dim().
class TripletState {
public:
  const TimeLabelState& label() const { return label_; }
  const Qubit& pulse() const { return pulse_; }
  const StateVector& induced() const { return induced_; }
  const StateVector& product() const { return product_; }

  friend TripletState make_triplet(TimeLabelState label, Qubit pulse, StateVector induced,
                                   std::size_t max_dim);

private:
  TripletState(TimeLabelState label, Qubit pulse, StateVector induced, StateVector product)
      : label_(label), pulse_(pulse), induced_(std::move(induced)), product_(std::move(product)) {}

  TimeLabelState label_;
  Qubit pulse_;
  StateVector induced_;
  StateVector product_;
};

/// What disentanglement throws away: the pulse and induced-state subspace.
struct DisentanglementRecord {
  std::size_t discarded_dim;
  double information_loss_bits;  // log2(discarded_dim)
};

struct Disentangled {
  double t_e;
  DisentanglementRecord remnant;
};

/// Kronecker product; amplitude (i * b.dim() + j) is a[i] * b[j].
StateVector tensor_product(const StateVector& a, const StateVector& b,
                           std::size_t max_dim = kDefaultMaxDim);

/// Left fold of tensor_product over a non-empty sequence.
StateVector tensor_product(std::span<const StateVector> factors, std::size_t max_dim = kDefaultMaxDim);

/// Induced detector state |Phi_n-body> ⊗ |CE_n-body>.
StateVector compose_induced(const StateVector& phi, const StateVector& ce,
                            std::size_t max_dim = kDefaultMaxDim);

TripletState make_triplet(TimeLabelState label, Qubit pulse, StateVector induced,
                          std::size_t max_dim = kDefaultMaxDim);

/// Selects the label factor. t_e is the stored label, bit for bit.
Disentangled disentangle(const TripletState& triplet);

}  // namespace fclock
