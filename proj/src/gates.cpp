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

#include "ghzlocc/gates.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace ghzlocc {

DiagonalBlockOp::DiagonalBlockOp(Unitary block0, Unitary block1)
    : block0_(std::move(block0)), block1_(std::move(block1)) {
  if (block0_.dim() != block1_.dim()) {
    throw std::invalid_argument("diagonal blocks must have equal dimensions");
  }
}

Unitary pauli_x() {
  Eigen::MatrixXcd m(2, 2);
  m << 0, 1,  //
      1, 0;
  return Unitary(m);
}

Unitary pauli_z() {
  Eigen::MatrixXcd m(2, 2);
  m << 1, 0,  //
      0, -1;
  return Unitary(m);
}

Unitary hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd m(2, 2);
  m << s, s,  //
      s, -s;
  return Unitary(m);
}

Unitary cnot() {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 0) = m(1, 1) = 1;
  m(2, 3) = m(3, 2) = 1;
  return Unitary(m);
}

Unitary identity_gate(int num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("need at least one qubit");
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  return Unitary(Eigen::MatrixXcd::Identity(d, d));
}

Unitary embed_diagonal_block(const DiagonalBlockOp& op) {
  const Eigen::Index bd = op.block0().dim();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * bd, 2 * bd);
  m.topLeftCorner(bd, bd) = op.block0().matrix();
  m.bottomRightCorner(bd, bd) = op.block1().matrix();
  return Unitary(std::move(m));
}

Unitary compose_w(const DiagonalBlockOp& u, const DiagonalBlockOp& v) {
  const Eigen::Index bd = u.block0().dim() * v.block0().dim();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * bd, 2 * bd);
  m.topLeftCorner(bd, bd) =
      Eigen::kroneckerProduct(u.block0().matrix(), v.block0().matrix());
  m.bottomRightCorner(bd, bd) =
      Eigen::kroneckerProduct(u.block1().matrix(), v.block1().matrix());
  return Unitary(std::move(m));
}

Unitary haar_random_unitary(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      g(i, j) = Complex(gauss(rng), gauss(rng));
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q =
      qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
  const Eigen::VectorXcd diag = qr.matrixQR().diagonal();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double mag = std::abs(diag(i));
    q.col(i) *= mag > 0.0 ? diag(i) / mag : Complex(1.0, 0.0);
  }
  return Unitary(std::move(q));
}

DiagonalBlockOp haar_random_blocks(int block_qubits, std::uint64_t seed) {
  if (block_qubits < 1 || block_qubits > 3) {
    throw std::invalid_argument("block_qubits must lie in [1, 3], got " +
                                std::to_string(block_qubits));
  }
  Rng rng(seed);
  const Eigen::Index dim = Eigen::Index{1} << block_qubits;
  Unitary b0 = haar_random_unitary(dim, rng);
  Unitary b1 = haar_random_unitary(dim, rng);
  return DiagonalBlockOp(std::move(b0), std::move(b1));
}

}  // namespace ghzlocc
