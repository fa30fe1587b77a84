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

#include "ghzlocc/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace ghzlocc {

namespace {

bool is_power_of_two(Eigen::Index x) { return x >= 1 && (x & (x - 1)) == 0; }

int log2_exact(Eigen::Index x) {
  int n = 0;
  while ((Eigen::Index{1} << n) < x) ++n;
  return n;
}

int bit_of(Eigen::Index index, int wire, int num_qubits) {
  return static_cast<int>((index >> (num_qubits - 1 - wire)) & 1);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

StateVector StateVector::normalized(Eigen::VectorXcd amplitudes) {
  if (!is_power_of_two(amplitudes.size()) || amplitudes.size() < 2) {
    throw std::invalid_argument(
        "state length must be a power of two covering at least one qubit, got " +
        std::to_string(amplitudes.size()));
  }
  const double norm = amplitudes.norm();
  if (std::abs(norm - 1.0) > kConstructionTol) {
    if (norm < 0.5) {
      throw std::invalid_argument("state amplitudes form a (near-)zero vector");
    }
    throw std::invalid_argument("state norm " + std::to_string(norm) +
                                " deviates from 1 beyond construction tolerance");
  }
  amplitudes /= norm;
  const int num_qubits = log2_exact(amplitudes.size());
  return StateVector(num_qubits, std::move(amplitudes));
}

StateVector StateVector::assume_normalized(Eigen::VectorXcd amplitudes) {
  if (!is_power_of_two(amplitudes.size()) || amplitudes.size() < 2) {
    throw std::invalid_argument(
        "state length must be a power of two covering at least one qubit, got " +
        std::to_string(amplitudes.size()));
  }
  const double norm = amplitudes.norm();
  if (std::abs(norm - 1.0) > kConstructionTol) {
    throw std::invalid_argument(
        "amplitudes claimed normalized but norm is " + std::to_string(norm));
  }
  const int num_qubits = log2_exact(amplitudes.size());
  return StateVector(num_qubits, std::move(amplitudes));
}

Unitary::Unitary(Eigen::MatrixXcd entries) {
  if (entries.rows() != entries.cols() || !is_power_of_two(entries.rows()) ||
      entries.rows() < 2) {
    throw std::invalid_argument(
        "unitary must be square with power-of-two dimension >= 2");
  }
  const Eigen::Index d = entries.rows();
  const double residual =
      (entries * entries.adjoint() - Eigen::MatrixXcd::Identity(d, d))
          .cwiseAbs()
          .maxCoeff();
  if (residual > kVerificationTol) {
    throw std::invalid_argument("matrix is not unitary: U*U^dag deviates from "
                                "identity by " +
                                std::to_string(residual));
  }
  entries_ = std::move(entries);
  num_qubits_ = log2_exact(d);
}

Bipartition::Bipartition(std::set<int> side_a, std::set<int> side_b)
    : side_a_(std::move(side_a)), side_b_(std::move(side_b)) {
  if (side_a_.empty() || side_b_.empty()) {
    throw std::invalid_argument("both sides of a bipartition must be nonempty");
  }
  for (int w : side_a_) {
    if (side_b_.count(w) != 0) {
      throw std::invalid_argument("bipartition sides must be disjoint, wire " +
                                  std::to_string(w) + " appears on both");
    }
  }
}

Bipartition Bipartition::cut(std::set<int> side_a, int num_qubits) {
  std::set<int> side_b;
  for (int w = 0; w < num_qubits; ++w) {
    if (side_a.count(w) == 0) side_b.insert(w);
  }
  return Bipartition(std::move(side_a), std::move(side_b));
}

StateVector make_state(const Eigen::VectorXcd& amplitudes) {
  return StateVector::normalized(amplitudes);
}

StateVector basis_state(int num_qubits, Eigen::Index index) {
  if (num_qubits < 1) throw std::invalid_argument("need at least one qubit");
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  if (index < 0 || index >= dim) {
    throw std::invalid_argument("basis index out of range");
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(dim);
  amps(index) = 1.0;
  return StateVector::assume_normalized(std::move(amps));
}

StateVector ghz_state() {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(8);
  amps(0) = amps(7) = 1.0 / std::sqrt(2.0);
  return StateVector::assume_normalized(std::move(amps));
}

StateVector bell_state() {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
  amps(0) = amps(3) = 1.0 / std::sqrt(2.0);
  return StateVector::assume_normalized(std::move(amps));
}

StateVector random_state(int num_qubits, Rng& rng) {
  if (num_qubits < 1) throw std::invalid_argument("need at least one qubit");
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd amps(Eigen::Index{1} << num_qubits);
  for (Eigen::Index k = 0; k < amps.size(); ++k) {
    amps(k) = Complex(gauss(rng), gauss(rng));
  }
  amps /= amps.norm();
  return StateVector::assume_normalized(std::move(amps));
}

StateVector tensor_product(const StateVector& left, const StateVector& right) {
  Eigen::VectorXcd amps =
      Eigen::kroneckerProduct(left.amplitudes(), right.amplitudes());
  return StateVector::assume_normalized(std::move(amps));
}

StateVector apply_gate(const StateVector& state, const Unitary& gate,
                       const std::vector<int>& wires) {
  const int n = state.num_qubits();
  const int k = static_cast<int>(wires.size());
  if (gate.dim() != (Eigen::Index{1} << k)) {
    throw std::invalid_argument("gate dimension " + std::to_string(gate.dim()) +
                                " does not match " + std::to_string(k) +
                                " wire(s)");
  }
  std::set<int> seen;
  for (int w : wires) {
    if (w < 0 || w >= n) {
      throw std::invalid_argument("wire " + std::to_string(w) +
                                  " out of range for " + std::to_string(n) +
                                  " qubits");
    }
    if (!seen.insert(w).second) {
      throw std::invalid_argument("repeated wire " + std::to_string(w));
    }
  }

  // Bit shift (from the LSB of the basis index) for each gate wire; gate wire
  // j is the j-th most significant bit of the gate's own index.
  std::vector<int> shift(k);
  Eigen::Index wire_mask = 0;
  for (int j = 0; j < k; ++j) {
    shift[j] = n - 1 - wires[j];
    wire_mask |= Eigen::Index{1} << shift[j];
  }

  const Eigen::Index dim = state.dim();
  const Eigen::Index gate_dim = gate.dim();
  const Eigen::VectorXcd& in = state.amplitudes();
  Eigen::VectorXcd out(dim);
  Eigen::VectorXcd gathered(gate_dim);
  std::vector<Eigen::Index> offset(gate_dim);
  for (Eigen::Index g = 0; g < gate_dim; ++g) {
    Eigen::Index off = 0;
    for (int j = 0; j < k; ++j) {
      off |= ((g >> (k - 1 - j)) & 1) << shift[j];
    }
    offset[g] = off;
  }
  for (Eigen::Index base = 0; base < dim; ++base) {
    if ((base & wire_mask) != 0) continue;
    for (Eigen::Index g = 0; g < gate_dim; ++g) gathered(g) = in(base | offset[g]);
    Eigen::VectorXcd transformed = gate.matrix() * gathered;
    for (Eigen::Index g = 0; g < gate_dim; ++g) out(base | offset[g]) = transformed(g);
  }
  return StateVector::assume_normalized(std::move(out));
}

MeasurementResult measure_computational(const StateVector& state, int wire,
                                        Rng& rng,
                                        std::optional<int> forced_outcome) {
  const int n = state.num_qubits();
  if (wire < 0 || wire >= n) {
    throw std::invalid_argument("wire " + std::to_string(wire) +
                                " out of range for " + std::to_string(n) +
                                " qubits");
  }
  const Eigen::VectorXcd& amps = state.amplitudes();
  const Eigen::Index dim = amps.size();
  const int shift = n - 1 - wire;

  double branch_probability[2] = {0.0, 0.0};
  for (Eigen::Index k = 0; k < dim; ++k) {
    branch_probability[(k >> shift) & 1] += std::norm(amps(k));
  }

  int outcome;
  if (forced_outcome.has_value()) {
    outcome = *forced_outcome;
    if (outcome != 0 && outcome != 1) {
      throw std::invalid_argument("forced outcome must be 0 or 1");
    }
    if (branch_probability[outcome] <= kAlgebraTol) {
      throw std::invalid_argument(
          "forced outcome " + std::to_string(outcome) +
          " has (near-)zero probability " +
          std::to_string(branch_probability[outcome]));
    }
  } else {
    outcome = sample_uniform(rng) < branch_probability[0] ? 0 : 1;
  }
  const double probability = branch_probability[outcome];

  if (n == 1) {
    // A register cannot shrink below one qubit; collapse in place instead.
    Eigen::VectorXcd post = Eigen::VectorXcd::Zero(2);
    post(outcome) = 1.0;
    return {outcome, probability, StateVector::assume_normalized(std::move(post))};
  }

  const double scale = 1.0 / std::sqrt(probability);
  const Eigen::Index low_mask = (Eigen::Index{1} << shift) - 1;
  Eigen::VectorXcd post(dim / 2);
  for (Eigen::Index k = 0; k < dim; ++k) {
    if (((k >> shift) & 1) != outcome) continue;
    const Eigen::Index reduced = ((k >> (shift + 1)) << shift) | (k & low_mask);
    post(reduced) = amps(k) * scale;
  }
  return {outcome, probability, StateVector::assume_normalized(std::move(post))};
}

StateDistance state_distance(const StateVector& s1, const StateVector& s2) {
  if (s1.num_qubits() != s2.num_qubits()) {
    throw std::invalid_argument("states live on different qubit counts");
  }
  const double exact =
      (s1.amplitudes() - s2.amplitudes()).cwiseAbs().maxCoeff();
  const Complex overlap = s1.amplitudes().dot(s2.amplitudes());
  return {exact, std::norm(overlap)};
}

double entanglement_entropy(const StateVector& state, const Bipartition& cut) {
  const int n = state.num_qubits();
  if (static_cast<int>(cut.side_a().size() + cut.side_b().size()) != n) {
    throw std::invalid_argument("bipartition does not cover the register");
  }
  for (int w : cut.side_a()) {
    if (w < 0 || w >= n) throw std::invalid_argument("bipartition wire out of range");
  }
  for (int w : cut.side_b()) {
    if (w < 0 || w >= n) throw std::invalid_argument("bipartition wire out of range");
  }

  const std::vector<int> a(cut.side_a().begin(), cut.side_a().end());
  const std::vector<int> b(cut.side_b().begin(), cut.side_b().end());
  const Eigen::Index rows = Eigen::Index{1} << a.size();
  const Eigen::Index cols = Eigen::Index{1} << b.size();

  Eigen::MatrixXcd reshaped(rows, cols);
  for (Eigen::Index k = 0; k < state.dim(); ++k) {
    Eigen::Index row = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      row |= Eigen::Index{bit_of(k, a[i], n)} << (a.size() - 1 - i);
    }
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      col |= Eigen::Index{bit_of(k, b[i], n)} << (b.size() - 1 - i);
    }
    reshaped(row, col) = state.amplitude(k);
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(reshaped);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double s = svd.singularValues()(i);
    const double p = std::clamp(s * s, 0.0, 1.0);
    if (p > 0.0) entropy -= p * std::log2(p);
  }
  return std::max(entropy, 0.0);
}

}  // namespace ghzlocc
