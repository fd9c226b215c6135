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

#include "mimofb/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mimofb {

namespace {

void check_users(std::span<const ChannelMatrix> users, const char* where) {
  if (users.empty()) throw InvalidInput(std::string(where) + ": empty user list");
  const auto k = users.front().rx_antennas();
  const auto m = users.front().tx_antennas();
  for (const auto& u : users) {
    if (u.rx_antennas() != k || u.tx_antennas() != m)
      throw InvalidInput(std::string(where) + ": users have different dimensions");
  }
}

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

// S = I + sum_i H_i^H Q_i H_i
CMatrix uplink_covariance(std::span<const ChannelMatrix> users, const CovarianceSet& q) {
  const auto m = users.front().tx_antennas();
  CMatrix s = CMatrix::Identity(m, m);
  for (std::size_t i = 0; i < users.size(); ++i) {
    const CMatrix& h = users[i].entries();
    s.noalias() += h.adjoint() * q.matrices[i] * h;
  }
  return hermitian_part(s);
}

// Best step on [0, 1] of alpha -> ln|S + alpha Delta|. With S = L L^H the
// objective gain is sum_k ln(1 + alpha d_k), d_k the eigenvalues of
// L^{-1} Delta L^{-H}; its derivative is decreasing, so bisection finds the
// maximizer.
struct LineStep {
  double alpha = 0.0;
  double gain = 0.0;
};

LineStep exact_line_search(const Eigen::LLT<CMatrix>& s_llt, const CMatrix& delta) {
  const CMatrix l_inv_delta = s_llt.matrixL().solve(delta);
  const CMatrix whitened = s_llt.matrixL().solve(l_inv_delta.adjoint()).adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian_part(whitened), Eigen::EigenvaluesOnly);
  const RVector d = eig.eigenvalues();

  auto slope = [&](double a) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < d.size(); ++k) acc += d(k) / (1.0 + a * d(k));
    return acc;
  };
  auto gain = [&](double a) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < d.size(); ++k) acc += std::log1p(a * d(k));
    return acc;
  };

  LineStep step;
  if (slope(0.0) <= 0.0) return step;
  if (slope(1.0) >= 0.0) {
    step.alpha = 1.0;
  } else {
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (slope(mid) > 0.0 ? lo : hi) = mid;
    }
    step.alpha = lo;
  }
  step.gain = gain(step.alpha);
  if (!(step.gain > 0.0)) step = {};
  return step;
}

// Joint waterfilling over the eigenmodes of all G_i with total power P.
std::vector<CMatrix> waterfill(const std::vector<CMatrix>& gains, double P) {
  struct Mode {
    std::size_t user;
    Eigen::Index col;
    double inv_gain;
  };
  std::vector<Eigen::SelfAdjointEigenSolver<CMatrix>> eigs;
  eigs.reserve(gains.size());
  std::vector<Mode> modes;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    eigs.emplace_back(hermitian_part(gains[i]));
    const RVector& ev = eigs.back().eigenvalues();
    for (Eigen::Index c = 0; c < ev.size(); ++c) {
      if (ev(c) > 1e-300) modes.push_back({i, c, 1.0 / ev(c)});
    }
  }
  std::sort(modes.begin(), modes.end(),
            [](const Mode& a, const Mode& b) { return a.inv_gain < b.inv_gain; });

  // Largest prefix of modes that stays active at the resulting water level.
  double level = 0.0;
  double prefix = 0.0;
  std::size_t active = 0;
  for (std::size_t n = 0; n < modes.size(); ++n) {
    prefix += modes[n].inv_gain;
    const double candidate = (P + prefix) / static_cast<double>(n + 1);
    if (candidate > modes[n].inv_gain) {
      level = candidate;
      active = n + 1;
    } else {
      break;
    }
  }

  std::vector<CMatrix> out;
  out.reserve(gains.size());
  for (const auto& g : gains) out.push_back(CMatrix::Zero(g.rows(), g.cols()));
  for (std::size_t n = 0; n < active; ++n) {
    const auto& mode = modes[n];
    const double power = level - mode.inv_gain;
    const CVector vec = eigs[mode.user].eigenvectors().col(mode.col);
    out[mode.user].noalias() += power * vec * vec.adjoint();
  }
  return out;
}

// Orthonormal basis of the Hermitian r x r matrices under the Frobenius
// inner product: E_aa, (E_ab + E_ba)/sqrt2, i(E_ab - E_ba)/sqrt2.
std::vector<CMatrix> hermitian_basis(Eigen::Index r) {
  std::vector<CMatrix> out;
  const double s = std::sqrt(0.5);
  for (Eigen::Index a = 0; a < r; ++a) {
    CMatrix e = CMatrix::Zero(r, r);
    e(a, a) = 1.0;
    out.push_back(e);
    for (Eigen::Index b = a + 1; b < r; ++b) {
      CMatrix sym = CMatrix::Zero(r, r);
      sym(a, b) = sym(b, a) = s;
      out.push_back(sym);
      CMatrix anti = CMatrix::Zero(r, r);
      anti(a, b) = std::complex<double>(0.0, s);
      anti(b, a) = std::complex<double>(0.0, -s);
      out.push_back(anti);
    }
  }
  return out;
}

using RMatrix = Eigen::MatrixXd;

// Coordinates of a Hermitian matrix in hermitian_basis(), so that the
// Euclidean norm equals the Frobenius norm.
RVector hermitian_coords(const CMatrix& y) {
  const Eigen::Index r = y.rows();
  RVector out(r * r);
  Eigen::Index j = 0;
  const double s = std::sqrt(2.0);
  for (Eigen::Index a = 0; a < r; ++a) {
    out(j++) = y(a, a).real();
    for (Eigen::Index b = a + 1; b < r; ++b) {
      out(j++) = s * y(a, b).real();
      out(j++) = s * y(a, b).imag();
    }
  }
  return out;
}

// Damped Newton step restricted to the current face: every user with
// nonzero power moves within the range of its covariance, D_i = V_i C_i
// V_i^H, with the total trace held fixed. The objective Hessian on the
// face is J^T J, J mapping the C_i to S^{-1/2} dS S^{-1/2}; it has rank at
// most M^2, so a small ridge keeps the system solvable and directions that
// shrink a vanishing user are stopped by the feasibility cap instead.
//
// Returns the D_i scaled to the largest feasible step (at most the full
// Newton step), or an empty vector when there is no usable direction.
std::vector<CMatrix> face_newton_direction(std::span<const ChannelMatrix> users, const CovarianceSet& q,
                                           const Eigen::LLT<CMatrix>& s_llt,
                                           const std::vector<CMatrix>& grad) {
  struct Face {
    std::size_t user;
    CMatrix basis;  // K x r, orthonormal range of Q_i
    RVector power;  // eigenvalues on that range
    std::size_t offset;
  };
  const double floor = 1e-12 * q.total_power;
  const Eigen::Index m = users.front().tx_antennas();
  std::vector<Face> faces;
  std::size_t nv = 0;
  for (std::size_t i = 0; i < users.size(); ++i) {
    const CMatrix& qi = q.matrices[i];
    if (!(qi.trace().real() > floor)) continue;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian_part(qi));
    std::vector<Eigen::Index> keep;
    for (Eigen::Index c = 0; c < qi.rows(); ++c)
      if (eig.eigenvalues()(c) > floor) keep.push_back(c);
    if (keep.empty()) continue;
    Face f{i, CMatrix(qi.rows(), static_cast<Eigen::Index>(keep.size())),
           RVector(static_cast<Eigen::Index>(keep.size())), nv};
    for (std::size_t c = 0; c < keep.size(); ++c) {
      f.basis.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors().col(keep[c]);
      f.power(static_cast<Eigen::Index>(c)) = eig.eigenvalues()(keep[c]);
    }
    nv += keep.size() * keep.size();
    faces.push_back(std::move(f));
  }
  if (nv < 2) return {};

  const auto n = static_cast<Eigen::Index>(nv);
  RMatrix jac(m * m, n);
  RVector g(n);
  RVector t = RVector::Zero(n);
  for (const auto& f : faces) {
    const Eigen::Index r = f.basis.cols();
    // Whitened uplink directions L^{-1} H_i^H V_i.
    const CMatrix fw = s_llt.matrixL().solve(users[f.user].entries().adjoint() * f.basis);
    const CMatrix g_face = f.basis.adjoint() * grad[f.user] * f.basis;
    const auto basis = hermitian_basis(r);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const auto col = static_cast<Eigen::Index>(f.offset + j);
      jac.col(col) = hermitian_coords(hermitian_part(fw * basis[j] * fw.adjoint()));
      g(col) = (g_face * basis[j]).trace().real();
      t(col) = basis[j].trace().real();
    }
  }

  // (J^T J + mu I) c = g - nu t with t^T c = 0.
  const double mu = 1e-10 * std::max(jac.squaredNorm() / static_cast<double>(n), 1e-300);
  auto solve = [&](const RVector& y) -> RVector {
    if (n <= 256) {
      RMatrix a = jac.transpose() * jac;
      a.diagonal().array() += mu;
      return a.ldlt().solve(y);
    }
    // Woodbury: (mu I + J^T J)^{-1} = (I - J^T (mu I + J J^T)^{-1} J) / mu.
    RMatrix inner = jac * jac.transpose();
    inner.diagonal().array() += mu;
    return (y - jac.transpose() * inner.ldlt().solve(jac * y)) / mu;
  };
  const RVector ag = solve(g);
  const RVector at = solve(t);
  const double tat = t.dot(at);
  if (!(tat > 0.0) || !std::isfinite(tat)) return {};
  const RVector c = ag - (t.dot(ag) / tat) * at;
  if (!c.allFinite()) return {};

  std::vector<CMatrix> d(users.size());
  double cap = 1.0;
  for (const auto& f : faces) {
    const Eigen::Index r = f.basis.cols();
    const auto basis = hermitian_basis(r);
    CMatrix ci = CMatrix::Zero(r, r);
    for (std::size_t j = 0; j < basis.size(); ++j) ci += c(static_cast<Eigen::Index>(f.offset + j)) * basis[j];
    // Largest alpha with diag(power) + alpha C_i still PSD.
    const RVector inv_sqrt = f.power.cwiseSqrt().cwiseInverse();
    const CMatrix scaled = inv_sqrt.asDiagonal() * ci * inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitian_part(scaled), Eigen::EigenvaluesOnly);
    const double lowest = eig.eigenvalues()(0);
    if (lowest < 0.0) cap = std::min(cap, 0.99 / -lowest);
    d[f.user] = f.basis * ci * f.basis.adjoint();
  }
  if (!(cap > 0.0)) return {};
  for (auto& di : d)
    if (di.size() != 0) di *= cap;
  return d;
}

}  // namespace

double CovarianceSet::trace_sum() const {
  double acc = 0.0;
  for (const auto& m : matrices) acc += m.trace().real();
  return acc;
}

EffectiveChannel EffectiveChannel::from_users(std::span<const ChannelMatrix> users,
                                              std::span<const std::size_t> selected) {
  if (selected.empty()) throw InvalidInput("EffectiveChannel: no users selected");
  const auto m = users.front().tx_antennas();
  EffectiveChannel out;
  out.rows.resize(static_cast<Eigen::Index>(selected.size()), m);
  for (std::size_t r = 0; r < selected.size(); ++r) {
    if (selected[r] >= users.size()) throw InvalidInput("EffectiveChannel: user id out of range");
    out.rows.row(static_cast<Eigen::Index>(r)) = users[selected[r]].eigen_row();
  }
  return out;
}

double dual_mac_objective(std::span<const ChannelMatrix> users, const CovarianceSet& q) {
  check_users(users, "dual_mac_objective");
  if (q.matrices.size() != users.size())
    throw InvalidInput("dual_mac_objective: one covariance per user required");
  return logdet_hpd(uplink_covariance(users, q));
}

DualMacResult dual_mac_sum_capacity(std::span<const ChannelMatrix> users, double P,
                                    const DualMacOptions& options) {
  check_users(users, "dual_mac_sum_capacity");
  if (!(P > 0.0) || !std::isfinite(P)) throw DomainError("dual_mac_sum_capacity: P must be positive");
  if (!(options.tol > 0.0)) throw DomainError("dual_mac_sum_capacity: tol must be positive");

  const std::size_t n = users.size();
  const auto k = users.front().rx_antennas();

  DualMacResult res;
  res.argmax.total_power = P;
  const double uniform = P / static_cast<double>(n * static_cast<std::size_t>(k));
  res.argmax.matrices.assign(n, uniform * CMatrix::Identity(k, k));

  CMatrix s = uplink_covariance(users, res.argmax);
  res.value = logdet_hpd(s);
  res.history.push_back(res.value);

  std::vector<CMatrix> grad(n);
  std::vector<CMatrix> others(n);
  for (std::size_t iter = 0;; ++iter) {
    const Eigen::LLT<CMatrix> s_llt(s);
    if (s_llt.info() != Eigen::Success) throw SingularityError("dual_mac_sum_capacity: lost positivity");

    // Gradient H_i S^{-1} H_i^H and the single-user effective gain
    // H_i Z_i^{-1} H_i^H against the interference Z_i = S - H_i^H Q_i H_i.
    double best_vertex = 0.0;
    std::size_t best_user = 0;
    CVector best_dir;
    double linear = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const CMatrix& h = users[i].entries();
      grad[i] = hermitian_part(h * s_llt.solve(h.adjoint()));
      linear += (res.argmax.matrices[i] * grad[i]).trace().real();
      Eigen::SelfAdjointEigenSolver<CMatrix> eig(grad[i]);
      const double top = eig.eigenvalues()(k - 1);
      if (top > best_vertex) {
        best_vertex = top;
        best_user = i;
        best_dir = eig.eigenvectors().col(k - 1);
      }
      const CMatrix z = hermitian_part(s - h.adjoint() * res.argmax.matrices[i] * h);
      others[i] = hermitian_part(h * z.llt().solve(h.adjoint()));
    }
    res.duality_gap = std::max(0.0, P * best_vertex - linear);
    res.iterations = iter;
    if (res.duality_gap <= options.tol * std::max(1.0, std::abs(res.value))) break;
    if (iter >= options.max_iters)
      throw ConvergenceError("dual_mac_sum_capacity: no convergence within max_iters", res);

    // Candidate 1: joint waterfilling target.
    const std::vector<CMatrix> wf = waterfill(others, P);
    CMatrix delta_wf = CMatrix::Zero(s.rows(), s.cols());
    for (std::size_t i = 0; i < n; ++i) {
      const CMatrix& h = users[i].entries();
      delta_wf.noalias() += h.adjoint() * (wf[i] - res.argmax.matrices[i]) * h;
    }
    const LineStep step_wf = exact_line_search(s_llt, hermitian_part(delta_wf));

    // Candidate 2: all power on the steepest eigenmode (Frank-Wolfe vertex).
    CMatrix delta_fw = -(s - CMatrix::Identity(s.rows(), s.cols()));
    {
      const CMatrix& h = users[best_user].entries();
      const CVector hv = h.adjoint() * best_dir;
      delta_fw.noalias() += P * hv * hv.adjoint();
    }
    const LineStep step_fw = exact_line_search(s_llt, hermitian_part(delta_fw));

    // Candidate 3: Newton step on the current face, which converges fast
    // once the active users are known and the first two only crawl.
    const std::vector<CMatrix> d_nt = face_newton_direction(users, res.argmax, s_llt, grad);
    LineStep step_nt;
    if (!d_nt.empty()) {
      CMatrix delta_nt = CMatrix::Zero(s.rows(), s.cols());
      for (std::size_t i = 0; i < n; ++i) {
        if (d_nt[i].size() == 0) continue;
        const CMatrix& h = users[i].entries();
        delta_nt.noalias() += h.adjoint() * d_nt[i] * h;
      }
      step_nt = exact_line_search(s_llt, hermitian_part(delta_nt));
    }

    enum class Pick { kWaterfill, kVertex, kNewton } pick = Pick::kWaterfill;
    LineStep step = step_wf;
    if (step_fw.gain > step.gain) {
      pick = Pick::kVertex;
      step = step_fw;
    }
    if (step_nt.gain > step.gain) {
      pick = Pick::kNewton;
      step = step_nt;
    }
    // The Frank-Wolfe direction has initial slope equal to the gap, so a
    // zero gain means the remaining gap is below rounding.
    if (step.gain <= 0.0) break;
    for (std::size_t i = 0; i < n; ++i) {
      CMatrix& qi = res.argmax.matrices[i];
      switch (pick) {
        case Pick::kWaterfill:
          qi = hermitian_part((1.0 - step.alpha) * qi + step.alpha * wf[i]);
          break;
        case Pick::kVertex: {
          CMatrix target = CMatrix::Zero(k, k);
          if (i == best_user) target = P * best_dir * best_dir.adjoint();
          qi = hermitian_part((1.0 - step.alpha) * qi + step.alpha * target);
          break;
        }
        case Pick::kNewton:
          if (d_nt[i].size() != 0) qi = hermitian_part(qi + step.alpha * d_nt[i]);
          break;
      }
    }
    s = uplink_covariance(users, res.argmax);
    res.value = logdet_hpd(s);
    res.history.push_back(res.value);
  }
  return res;
}

double dpc_sum_rate(std::span<const ChannelMatrix> users, const CovarianceSet& q,
                    std::span<const std::size_t> order) {
  check_users(users, "dpc_sum_rate");
  const std::size_t n = users.size();
  const auto m = users.front().tx_antennas();
  if (q.matrices.size() != n) throw InvalidInput("dpc_sum_rate: one covariance per user required");
  for (const auto& c : q.matrices) {
    if (c.rows() != m || c.cols() != m) throw InvalidInput("dpc_sum_rate: covariances must be M x M");
  }
  if (order.size() != n) throw InvalidInput("dpc_sum_rate: order must cover every user");
  std::vector<bool> seen(n, false);
  for (auto idx : order) {
    if (idx >= n || seen[idx]) throw InvalidInput("dpc_sum_rate: order is not a permutation");
    seen[idx] = true;
  }

  double total = 0.0;
  CMatrix later = CMatrix::Zero(m, m);
  // Walk from the last encoded user backwards so `later` accumulates the
  // covariances encoded after the current one.
  for (std::size_t pos = n; pos-- > 0;) {
    const std::size_t u = order[pos];
    const CMatrix& h = users[u].entries();
    const auto k = h.rows();
    const CMatrix eye = CMatrix::Identity(k, k);
    const CMatrix noise = hermitian_part(eye + h * later * h.adjoint());
    const CMatrix with_own = hermitian_part(noise + h * q.matrices[u] * h.adjoint());
    total += std::max(0.0, logdet_hpd(with_own) - logdet_hpd(noise));
    later += q.matrices[u];
  }
  return total;
}

double gram_condition(const CMatrix& rows) {
  const CMatrix gram = hermitian_part(rows * rows.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
  const RVector& ev = eig.eigenvalues();
  const double lo = ev(0);
  const double hi = ev(ev.size() - 1);
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

double zfbf_rate(const EffectiveChannel& h_eff, double P) {
  const CMatrix& g = h_eff.rows;
  if (g.rows() < 1 || g.cols() < 1) throw InvalidInput("zfbf_rate: empty effective channel");
  if (g.rows() > g.cols()) throw InvalidInput("zfbf_rate: more rows than transmit antennas");
  if (!(P >= 0.0)) throw DomainError("zfbf_rate: P must be nonnegative");
  if (!(gram_condition(g) < kGramConditionLimit))
    throw SingularityError("zfbf_rate: effective channel rows are nearly dependent");
  const CMatrix gram = hermitian_part(g * g.adjoint());
  const CMatrix inv = gram.llt().solve(CMatrix::Identity(g.rows(), g.rows()));
  const double tr = inv.trace().real();
  return static_cast<double>(g.rows()) * std::log1p(P / tr);
}

double tdma_no_csi_rate(const ChannelMatrix& h, double P) {
  if (!(P > 0.0)) throw DomainError("tdma_no_csi_rate: P must be positive");
  const CMatrix& e = h.entries();
  const double scale = P / static_cast<double>(e.cols());
  const CMatrix a = hermitian_part(CMatrix::Identity(e.rows(), e.rows()) + scale * e * e.adjoint());
  return std::max(0.0, logdet_hpd(a));
}

CovarianceDiagnostics covariance_structure_diagnostics(const CovarianceSet& argmax,
                                                       std::span<const ChannelMatrix> users,
                                                       double P) {
  if (argmax.matrices.size() != users.size())
    throw InvalidInput("covariance_structure_diagnostics: one covariance per user required");
  CovarianceDiagnostics out;
  std::vector<CVector> dirs;
  for (std::size_t i = 0; i < users.size(); ++i) {
    const CMatrix q = hermitian_part(argmax.matrices[i]);
    const double tr = q.trace().real();
    if (!(tr > 1e-6 * P)) continue;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(q);
    const auto top = eig.eigenvalues().size() - 1;
    out.active_users.push_back(i);
    out.dominant_fraction.push_back(eig.eigenvalues()(top) / tr);
    out.power_share.push_back(tr / P);
    CVector phi = users[i].entries().adjoint() * eig.eigenvectors().col(top);
    const double norm = phi.norm();
    if (norm > 0.0) phi /= norm;
    dirs.push_back(std::move(phi));
  }
  for (std::size_t a = 0; a < dirs.size(); ++a)
    for (std::size_t b = a + 1; b < dirs.size(); ++b)
      out.pairwise_inner.push_back(std::abs(dirs[a].dot(dirs[b])));
  return out;
}

}  // namespace mimofb
