#include "laplacerf/basis.hpp"

#include <cmath>
#include <stdexcept>

#include "laplacerf/kernels.hpp"

namespace laprf::basis {

int PoleSet::n_out() const {
  int n = 0;
  for (auto s : side) n += (s == geom::DomainSide::Outside);
  return n;
}

int PoleSet::n_in() const { return static_cast<int>(poles.size()) - n_out(); }

std::vector<cplx> PoleSet::outside_poles() const {
  std::vector<cplx> out;
  for (size_t i = 0; i < poles.size(); ++i)
    if (side[i] == geom::DomainSide::Outside) out.push_back(poles[i]);
  return out;
}

void dipole_parts(cplx z, cplx zp, double* phiR, double* phiI) {
  const cplx w = 1.0 / (zp - z);
  *phiR = w.real();
  *phiI = w.imag();
}

cplx PotentialModel::eval(cplx z) const {
  cplx w = has_const ? cplx(a0) : cplx(0.0);
  for (size_t n = 0; n < poles.size(); ++n) w += residues[n] / (poles[n] - z);
  for (size_t j = 0; j < log_coeffs.size(); ++j) w += log_coeffs[j] * std::log(z - log_centers[j]);
  return w;
}

void PotentialModel::eval_many(std::span<const double> x, std::span<const double> y,
                               std::span<double> u, std::span<double> v) const {
  const size_t n = x.size();
  for (size_t i = 0; i < n; ++i) {
    u[i] = has_const ? a0 : 0.0;
    v[i] = 0.0;
  }
  kernels::potential_sum(x.data(), y.data(), n, poles.data(), residues.data(), poles.size(),
                         u.data(), v.data());
  for (size_t j = 0; j < log_coeffs.size(); ++j) {
    for (size_t i = 0; i < n; ++i) {
      const cplx w = std::log(cplx(x[i], y[i]) - log_centers[j]);
      u[i] += log_coeffs[j] * w.real();
      v[i] += log_coeffs[j] * w.imag();
    }
  }
}

namespace {

struct NodeArrays {
  std::vector<double> x, y, sqw;
};

NodeArrays node_arrays(const quad::Rule& rule) {
  NodeArrays a;
  const size_t K = rule.size();
  a.x.resize(K);
  a.y.resize(K);
  a.sqw.resize(K);
  for (size_t k = 0; k < K; ++k) {
    a.x[k] = rule.z[k].real();
    a.y[k] = rule.z[k].imag();
    a.sqw[k] = std::sqrt(rule.w[k]);
  }
  return a;
}

} // namespace

Assembled assemble_dirichlet(const quad::Rule& rule, const PoleSet& poles,
                             std::span<const double> f_samples,
                             std::span<const cplx> log_centers) {
  const size_t K = rule.size();
  if (f_samples.size() != K) throw std::invalid_argument("assemble_dirichlet: sample count mismatch");
  Assembled sys;
  sys.outside_poles = poles.outside_poles();
  const int n_out = static_cast<int>(sys.outside_poles.size());
  const int J = static_cast<int>(log_centers.size());

  ColumnMap& map = sys.map;
  map.const_col = 0;
  map.first_phi_r = 1;
  map.first_phi_i = 1 + n_out;
  map.n_poles = n_out;
  map.first_log = 1 + 2 * n_out;
  map.n_log = J > 0 ? J - 1 : 0;
  map.cols = 1 + 2 * n_out + map.n_log;

  const NodeArrays na = node_arrays(rule);
  sys.A.resize(K, map.cols);
  sys.rhs.resize(K);
  for (size_t k = 0; k < K; ++k) {
    sys.A(k, 0) = na.sqw[k];
    sys.rhs(k) = na.sqw[k] * f_samples[k];
  }
  std::vector<double> phiR(K), phiI(K);
  for (int n = 0; n < n_out; ++n) {
    kernels::dipole_parts(na.x.data(), na.y.data(), K, sys.outside_poles[n], phiR.data(), phiI.data());
    for (size_t k = 0; k < K; ++k) {
      sys.A(k, map.first_phi_r + n) = na.sqw[k] * phiR[k];
      sys.A(k, map.first_phi_i + n) = -na.sqw[k] * phiI[k];
    }
  }
  for (int j = 0; j + 1 < J; ++j) {
    for (size_t k = 0; k < K; ++k) {
      const double lr = std::log(std::abs((rule.z[k] - log_centers[j]) / (rule.z[k] - log_centers[J - 1])));
      sys.A(k, map.first_log + j) = na.sqw[k] * lr;
    }
  }
  if (map.cols == 0) throw std::invalid_argument("assemble_dirichlet: empty basis");
  return sys;
}

Assembled assemble_neumann(const quad::Rule& rule, const PoleSet& poles,
                           std::span<const double> F_samples, int num_contours) {
  const size_t K = rule.size();
  if (F_samples.size() != K) throw std::invalid_argument("assemble_neumann: sample count mismatch");
  Assembled sys;
  sys.outside_poles = poles.outside_poles();
  const int n_out = static_cast<int>(sys.outside_poles.size());

  ColumnMap& map = sys.map;
  map.first_phi_r = 0; // carries a_n^R (multiplying phiI)
  map.first_phi_i = n_out;
  map.n_poles = n_out;
  map.first_v = 2 * n_out;
  map.n_v = num_contours;
  map.cols = 2 * n_out + num_contours;
  if (map.cols == 0) throw std::invalid_argument("assemble_neumann: empty basis");

  const NodeArrays na = node_arrays(rule);
  sys.A = Eigen::MatrixXd::Zero(K, map.cols);
  sys.rhs.resize(K);
  std::vector<double> phiR(K), phiI(K);
  for (int n = 0; n < n_out; ++n) {
    kernels::dipole_parts(na.x.data(), na.y.data(), K, sys.outside_poles[n], phiR.data(), phiI.data());
    for (size_t k = 0; k < K; ++k) {
      sys.A(k, map.first_phi_r + n) = na.sqw[k] * phiI[k];
      sys.A(k, map.first_phi_i + n) = na.sqw[k] * phiR[k];
    }
  }
  for (size_t k = 0; k < K; ++k) {
    sys.A(k, map.first_v + rule.contour_of[k]) = -na.sqw[k];
    sys.rhs(k) = na.sqw[k] * F_samples[k];
  }
  return sys;
}

PotentialModel dirichlet_model(const Assembled& sys, const Eigen::VectorXd& x,
                               std::span<const cplx> log_centers) {
  PotentialModel m;
  m.has_const = true;
  m.a0 = x(sys.map.const_col);
  m.poles = sys.outside_poles;
  m.residues.resize(m.poles.size());
  for (int n = 0; n < sys.map.n_poles; ++n)
    m.residues[n] = cplx(x(sys.map.first_phi_r + n), x(sys.map.first_phi_i + n));
  const int J = static_cast<int>(log_centers.size());
  if (J > 0) {
    m.log_centers.assign(log_centers.begin(), log_centers.end());
    m.log_coeffs.resize(J, 0.0);
    double sum = 0.0;
    for (int j = 0; j + 1 < J; ++j) {
      m.log_coeffs[j] = x(sys.map.first_log + j);
      sum += m.log_coeffs[j];
    }
    m.log_coeffs[J - 1] = -sum; // bounded at infinity by construction
  }
  return m;
}

PotentialModel neumann_model(const Assembled& sys, const Eigen::VectorXd& x,
                             std::span<const double> known_log_coeffs,
                             std::span<const cplx> log_centers) {
  PotentialModel m;
  m.has_const = false;
  m.poles = sys.outside_poles;
  m.residues.resize(m.poles.size());
  for (int n = 0; n < sys.map.n_poles; ++n)
    m.residues[n] = cplx(x(sys.map.first_phi_r + n), x(sys.map.first_phi_i + n));
  m.log_coeffs.assign(known_log_coeffs.begin(), known_log_coeffs.end());
  m.log_centers.assign(log_centers.begin(), log_centers.end());
  m.v_consts.resize(sys.map.n_v);
  for (int j = 0; j < sys.map.n_v; ++j) m.v_consts[j] = x(sys.map.first_v + j);
  return m;
}

} // namespace laprf::basis
