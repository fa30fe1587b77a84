// Copyright 2026 The ghzlocc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GHZLOCC_QSTATE_HPP_
#define GHZLOCC_QSTATE_HPP_

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

namespace ghzlocc {

using Complex = std::complex<double>;
using Rng = std::mt19937_64;

// Tolerance tiers. Construction accepts small drift in caller-supplied data,
// verification gates protocol-level checks, algebra bounds the error of a
// single numerical step. Kept apart so drift accumulated over a full protocol
// run never trips a construction check.
inline constexpr double kConstructionTol = 1e-9;
inline constexpr double kVerificationTol = 1e-10;
inline constexpr double kAlgebraTol = 1e-12;

/// Uniform double in [0, 1) built from the top 53 bits of the generator,
/// identical across standard libraries.
inline double sample_uniform(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Stateless seed derivation (splitmix64 step) for per-trial generators.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Normalized pure state of one or more qubits.
///
/// Amplitudes are basis-ordered with wire 0 as the most significant bit of
/// the basis index: for a register |q0 q1 ... q_{n-1}>, the amplitude of the
/// basis ket whose bits read q0 q1 ... q_{n-1} sits at index
/// q0*2^{n-1} + ... + q_{n-1}. Immutable after construction; operations
/// return new states, so sharing across threads is safe.
class StateVector {
 public:
  /// Validates (power-of-two length, norm within kConstructionTol of 1) and
  /// renormalizes residual drift.
  static StateVector normalized(Eigen::VectorXcd amplitudes);

  /// Accepts amplitudes produced by a norm-preserving operation without
  /// renormalizing them. Still rejects malformed lengths and gross
  /// normalization errors.
  static StateVector assume_normalized(Eigen::VectorXcd amplitudes);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Complex amplitude(Eigen::Index index) const { return amplitudes_(index); }
  double norm() const { return amplitudes_.norm(); }

 private:
  StateVector(int num_qubits, Eigen::VectorXcd amplitudes)
      : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {}

  int num_qubits_;
  Eigen::VectorXcd amplitudes_;
};

/// Square complex matrix validated to be unitary within kVerificationTol,
/// with a power-of-two dimension.
class Unitary {
 public:
  explicit Unitary(Eigen::MatrixXcd entries);

  Eigen::Index dim() const { return entries_.rows(); }
  int num_qubits() const { return num_qubits_; }
  const Eigen::MatrixXcd& matrix() const { return entries_; }

 private:
  Eigen::MatrixXcd entries_;
  int num_qubits_;
};

/// A two-sided cut of a register into disjoint, nonempty wire sets.
class Bipartition {
 public:
  Bipartition(std::set<int> side_a, std::set<int> side_b);

  /// Builds the cut side_a | complement for a register of num_qubits wires.
  static Bipartition cut(std::set<int> side_a, int num_qubits);

  Bipartition swapped() const { return Bipartition(side_b_, side_a_); }
  const std::set<int>& side_a() const { return side_a_; }
  const std::set<int>& side_b() const { return side_b_; }

 private:
  std::set<int> side_a_;
  std::set<int> side_b_;
};

/// Builds a normalized state from raw amplitudes. Rejects non-power-of-two
/// lengths and vectors whose norm deviates from 1 beyond kConstructionTol.
StateVector make_state(const Eigen::VectorXcd& amplitudes);

/// Computational basis ket |index> on num_qubits wires.
StateVector basis_state(int num_qubits, Eigen::Index index);

/// (|000> + |111>) / sqrt(2).
StateVector ghz_state();

/// (|00> + |11>) / sqrt(2).
StateVector bell_state();

/// Haar-ish random pure state: normalized vector of complex Gaussians.
StateVector random_state(int num_qubits, Rng& rng);

/// Tensor product; wires of `left` keep their indices, wires of `right`
/// follow them.
StateVector tensor_product(const StateVector& left, const StateVector& right);

/// Applies `gate` to the named wires (wires[0] is the gate's most significant
/// input), leaving all other wires untouched. Requires gate.dim() ==
/// 2^wires.size() and distinct in-range wires.
StateVector apply_gate(const StateVector& state, const Unitary& gate,
                       const std::vector<int>& wires);

struct MeasurementResult {
  int outcome;
  double probability;  // Born probability of the returned outcome
  StateVector post_state;
};

/// Measures one wire in the computational basis. The outcome is drawn from
/// `rng` by the Born rule unless `forced_outcome` is given; forcing a branch
/// of (near-)zero probability throws. The measured wire is removed from the
/// register, so the result has one qubit fewer -- except for a single-qubit
/// register, which cannot shrink further and collapses to |outcome> instead.
MeasurementResult measure_computational(const StateVector& state, int wire,
                                        Rng& rng,
                                        std::optional<int> forced_outcome = {});

struct StateDistance {
  double exact_distance;  // max entrywise amplitude difference
  double fidelity;        // |<s1|s2>|^2, global-phase invariant
};

StateDistance state_distance(const StateVector& s1, const StateVector& s2);

/// Von Neumann entropy (base 2, in ebits) of the reduced state on side_a,
/// obtained from the singular values of the amplitude matrix reshaped along
/// the cut. The cut must cover exactly the state's wires.
double entanglement_entropy(const StateVector& state, const Bipartition& cut);

}  // namespace ghzlocc

#endif  // GHZLOCC_QSTATE_HPP_
