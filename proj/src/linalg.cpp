// SPDX-License-Identifier: Apache-2.0
//
// mimofb: limited-feedback scheduling for the MIMO broadcast channel
// Copyright (C) 2026 The mimofb authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "mimofb/linalg.hpp"

#include <cmath>
#include <random>

#include "mimofb/errors.hpp"

namespace mimofb {

cdouble complex_gaussian(Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

CMatrix complex_gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  CMatrix out(rows, cols);
  // Row-major fill order is part of the reproducibility contract.
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = complex_gaussian(rng);
  return out;
}

CVector random_unit_vector(Rng& rng, Eigen::Index dim) {
  CVector v(dim);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = complex_gaussian(rng);
    norm = v.norm();
  } while (norm == 0.0);
  return v / norm;
}

CMatrix haar_unitary(Rng& rng, Eigen::Index dim) {
  const CMatrix g = complex_gaussian_matrix(rng, dim, dim);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

double logdet_hpd(const CMatrix& a) {
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success) throw SingularityError("logdet_hpd: matrix is not positive definite");
  const auto& l = llt.matrixLLT();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) acc += std::log(l(i, i).real());
  return 2.0 * acc;
}

cdouble canonical_phase(CVector& v, double floor) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > floor) {
      const cdouble phase = v(i) / mag;
      v *= std::conj(phase);
      v(i) = cdouble(std::abs(v(i)), 0.0);
      return phase;
    }
  }
  return {1.0, 0.0};
}

}  // namespace mimofb
