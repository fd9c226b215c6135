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

#ifndef MIMOFB_LINALG_HPP
#define MIMOFB_LINALG_HPP

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "mimofb/rng.hpp"

namespace mimofb {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Entry ~ CN(0, 1): real and imaginary parts each N(0, 1/2).
cdouble complex_gaussian(Rng& rng);
CMatrix complex_gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);

// Uniform on the unit sphere of C^dim.
CVector random_unit_vector(Rng& rng, Eigen::Index dim);

// Haar-distributed dim x dim unitary (QR of a Gaussian matrix with the
// diagonal of R made positive).
CMatrix haar_unitary(Rng& rng, Eigen::Index dim);

// ln det of a Hermitian positive definite matrix. Throws SingularityError
// when the Cholesky factorization fails.
double logdet_hpd(const CMatrix& a);

// Rotates `v` so that its first component with magnitude above `floor` is
// real and nonnegative; returns the unit phase that was removed.
cdouble canonical_phase(CVector& v, double floor = 1e-12);

}  // namespace mimofb

#endif
