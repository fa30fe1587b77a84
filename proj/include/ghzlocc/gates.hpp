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

#ifndef GHZLOCC_GATES_HPP_
#define GHZLOCC_GATES_HPP_

#include <cstdint>

#include "ghzlocc/qstate.hpp"

namespace ghzlocc {

/// An ordered pair of equal-dimension unitary blocks (b0, b1). Embedded with
/// a control qubit it realizes the controlled operation that applies b0 when
/// the control is |0> and b1 when it is |1>.
class DiagonalBlockOp {
 public:
  DiagonalBlockOp(Unitary block0, Unitary block1);

  const Unitary& block0() const { return block0_; }
  const Unitary& block1() const { return block1_; }
  const Unitary& block(int i) const { return i == 0 ? block0_ : block1_; }
  int block_qubits() const { return block0_.num_qubits(); }

 private:
  Unitary block0_;
  Unitary block1_;
};

Unitary pauli_x();
Unitary pauli_z();
/// Includes the 1/sqrt(2) normalization.
Unitary hadamard();
/// 4x4 controlled-X, control on the first wire.
Unitary cnot();
Unitary identity_gate(int num_qubits);

/// Block-diagonal unitary on 1 + block_qubits wires: block0 in the upper
/// block, block1 in the lower. The control qubit is the first wire.
Unitary embed_diagonal_block(const DiagonalBlockOp& op);

/// The composite target of running u on (control, B-register) and then v on
/// (control, C-register): a block-diagonal unitary on 1 + N + M wires whose
/// control-i block is block_i(u) (x) block_i(v). Wire order: control, then
/// the B-register, then the C-register.
Unitary compose_w(const DiagonalBlockOp& u, const DiagonalBlockOp& v);

/// Haar-distributed random unitary of the given power-of-two dimension:
/// complex Gaussian matrix, orthonormalized by QR, diagonal phases of R
/// folded back into the columns.
Unitary haar_random_unitary(Eigen::Index dim, Rng& rng);

/// Two independent Haar-random blocks of dimension 2^block_qubits,
/// deterministic for a given seed. block_qubits must lie in [1, 3].
DiagonalBlockOp haar_random_blocks(int block_qubits, std::uint64_t seed);

}  // namespace ghzlocc

#endif  // GHZLOCC_GATES_HPP_
