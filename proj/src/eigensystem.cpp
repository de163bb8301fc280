#include "raman/eigensystem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace raman {

namespace {

constexpr int kMaxDimension = 64;
constexpr int kMaxSweeps = 100;

double small_root(double mu, double delta) {
  // root of lambda(lambda - delta) = mu that vanishes with mu
  const double r = std::sqrt(delta * delta + 4.0 * mu);
  return -2.0 * mu / (delta + std::copysign(r, delta));
}

}  // namespace

bool is_hermitian(const Eigen::MatrixXcd &m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i; j < m.cols(); ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol * scale) return false;
  return true;
}

HamiltonianMatrix build_interaction_hamiltonian(const CouplingVectors &c, const DetuningSet &d,
                                                double t) {
  c.validate();
  d.validate(c.levels());
  const Eigen::Index n = c.levels();
  const Complex rot = std::exp(Complex(0.0, -d.delta * t));

  HamiltonianMatrix h = HamiltonianMatrix::Zero(n + 2, n + 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    h(0, i + 2) = 0.5 * c.pump[i];
    h(1, i + 2) = 0.5 * c.stokes[i] * rot;
    h(i + 2, 0) = std::conj(h(0, i + 2));
    h(i + 2, 1) = std::conj(h(1, i + 2));
    h(i + 2, i + 2) = -d.level(i);
  }
  return h;
}

void ScaledSystem::validate() const {
  if (x.size() == 0 || x.size() != y.size())
    throw std::invalid_argument("scaled couplings x and y must have equal, non-zero length");
  if (!(Omega0 > 0.0) || !std::isfinite(Omega0))
    throw std::invalid_argument("Omega0 must be positive");
  if (deltaScaled == 0.0 || !std::isfinite(deltaScaled))
    throw std::invalid_argument("scaled detuning must be finite and non-zero");
}

double natural_scale(const CouplingVectors &c, const DetuningSet &d) {
  c.validate();
  const double m = 0.5 * std::max(c.pump.cwiseAbs().maxCoeff(), c.stokes.cwiseAbs().maxCoeff());
  return m > 0.0 ? m : std::abs(d.Delta);
}

ScaledSystem scale_system(const CouplingVectors &c, const DetuningSet &d, double t,
                          std::optional<double> Omega0) {
  c.validate();
  d.validate(c.levels());
  ScaledSystem s;
  s.Omega0 = Omega0 ? *Omega0 : natural_scale(c, d);
  s.x = c.pump / (2.0 * s.Omega0);
  s.y = c.stokes * std::exp(Complex(0.0, -d.delta * t)) / (2.0 * s.Omega0);
  s.deltaScaled = d.Delta / s.Omega0;
  s.validate();
  return s;
}

namespace {

Eigen::MatrixXcd arrow(const ScaledSystem &s, double diagonal) {
  s.validate();
  const Eigen::Index n = s.x.size();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n + 2, n + 2);
  a.block(0, 2, 1, n) = s.x.transpose();
  a.block(1, 2, 1, n) = s.y.transpose();
  a.block(2, 0, n, 1) = s.x.conjugate();
  a.block(2, 1, n, 1) = s.y.conjugate();
  a.diagonal().tail(n).setConstant(diagonal);
  return a;
}

}  // namespace

Eigen::MatrixXcd expanded_matrix(const ScaledSystem &s) { return arrow(s, s.deltaScaled); }

Eigen::MatrixXcd scaled_interaction_matrix(const ScaledSystem &s) {
  return arrow(s, -s.deltaScaled);
}

Eigen::Matrix2cd ground_gram(const ScaledSystem &s) {
  Eigen::Matrix2cd g;
  const Complex xy = s.y.dot(s.x);  // sum x_i y_i^*
  g << s.x.squaredNorm(), xy,
      std::conj(xy), s.y.squaredNorm();
  return g;
}

double wedge_norm_sq(const Eigen::VectorXcd &x, const Eigen::VectorXcd &y) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    for (Eigen::Index j = i + 1; j < x.size(); ++j) sum += std::norm(x[i] * y[j] - x[j] * y[i]);
  return sum;
}

FiniteEigenvalues finite_eigenvalues(const ScaledSystem &s) {
  s.validate();
  const double X = s.x.squaredNorm(), Y = s.y.squaredNorm();
  const double xy = std::abs(s.y.dot(s.x));
  const double chi = std::sqrt((X - Y) * (X - Y) + 4.0 * xy * xy);
  const double d = s.deltaScaled;
  FiniteEigenvalues f;
  f.plus = (-(X + Y) + chi) / (2.0 * d);
  f.minus = (-(X + Y) - chi) / (2.0 * d);
  f.perturbative = std::abs(d) >= 10.0 * std::sqrt(std::max(X, Y));
  return f;
}

FiniteEigenvalues exact_finite_eigenvalues(const ScaledSystem &s) {
  s.validate();
  const double X = s.x.squaredNorm(), Y = s.y.squaredNorm();
  const double xy = std::abs(s.y.dot(s.x));
  const double chi = std::sqrt((X - Y) * (X - Y) + 4.0 * xy * xy);
  // mu_small from the product of roots avoids cancellation
  const double mu_large = 0.5 * (X + Y + chi);
  const double mu_small = mu_large > 0.0 ? wedge_norm_sq(s.x, s.y) / mu_large : 0.0;
  FiniteEigenvalues f;
  f.plus = small_root(mu_small, s.deltaScaled);
  f.minus = small_root(mu_large, s.deltaScaled);
  f.perturbative = std::abs(s.deltaScaled) >= 10.0 * std::sqrt(std::max(X, Y));
  return f;
}

RabiShift rabi_and_shift_from_eigenvalues(const ScaledSystem &s) {
  const auto f = finite_eigenvalues(s);
  const double d = s.deltaScaled;
  RabiShift r;
  r.OmegaB = s.Omega0 * 2.0 * std::abs(s.y.dot(s.x)) / std::abs(d);
  r.DeltaB = s.Omega0 * (s.y.squaredNorm() - s.x.squaredNorm()) / d;
  r.OmegaTildeB = s.Omega0 * std::abs(f.plus - f.minus);
  return r;
}

DressedRotation dressed_rotation(const ScaledSystem &s) {
  s.validate();
  const double X = s.x.squaredNorm(), Y = s.y.squaredNorm();
  const Complex xy = s.y.dot(s.x);
  DressedRotation r;
  if (xy == Complex(0.0, 0.0)) {
    r.degenerate = X == Y;
    return r;
  }
  const double a = std::abs(xy);
  const double chi = std::sqrt((X - Y) * (X - Y) + 4.0 * a * a);
  r.phi = -std::arg(xy);
  r.theta = X >= Y ? std::atan(2.0 * a / (chi + (X - Y))) : -std::atan(2.0 * a / (chi + (Y - X)));
  return r;
}

double characteristic_determinant(const ScaledSystem &s, double lambda) {
  s.validate();
  const long N = static_cast<long>(s.dimension());
  const double u = s.deltaScaled - lambda;
  const double S = s.x.squaredNorm() + s.y.squaredNorm();
  double det = lambda * lambda * std::pow(u, N - 2) + lambda * S * std::pow(u, N - 3);
  if (N >= 4) det += wedge_norm_sq(s.x, s.y) * std::pow(u, N - 4);
  return det;
}

Eigen::VectorXcd intermediate_amplitudes(const ScaledSystem &s, double lambda, Complex a0,
                                         Complex a1) {
  s.validate();
  return (s.x.conjugate() * a0 + s.y.conjugate() * a1) / (lambda - s.deltaScaled);
}

double ground_weight(double lambda, double deltaScaled) {
  return (deltaScaled - lambda) / (deltaScaled - 2.0 * lambda);
}

NumericEigensystem numeric_eigensystem(const Eigen::MatrixXcd &h, double tol) {
  if (h.rows() != h.cols() || h.rows() == 0)
    throw std::invalid_argument("eigensolver needs a non-empty square matrix");
  if (h.rows() > kMaxDimension)
    throw std::invalid_argument("eigensolver supports at most 64x64 matrices");
  if (!h.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
  if (!is_hermitian(h)) throw std::invalid_argument("matrix is not Hermitian");

  const Eigen::Index n = h.rows();
  Eigen::MatrixXcd a = 0.5 * (h + h.adjoint());
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);
  const double scale = std::max(a.norm(), std::numeric_limits<double>::min());

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) s += std::norm(a(p, q));
    return std::sqrt(2.0 * s);
  };

  NumericEigensystem out;
  while (off_norm() > tol * scale) {
    if (++out.sweeps > kMaxSweeps) throw std::runtime_error("Jacobi iteration did not converge");
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r == 0.0) continue;
        const Complex ph = a(p, q) / r;  // e^{i alpha}
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * r);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        const Complex sp = s * std::conj(ph);

        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sp * akq;
          a(k, q) = s * akp + c * std::conj(ph) * akq;
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sp * vkq;
          v(k, q) = s * vkp + c * std::conj(ph) * vkq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * ph * aqk;
          a(q, k) = s * apk + c * ph * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = app - t * r;
        a(q, q) = aqq + t * r;
      }
    }
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]).normalized();
  }
  return out;
}

}  // namespace raman
