#pragma once

#include <optional>

#include <Eigen/Core>

#include "raman/effective_dynamics.hpp"

namespace raman {

using HamiltonianMatrix = Eigen::MatrixXcd;

bool is_hermitian(const Eigen::MatrixXcd &m, double tol = 1e-12);

/// Interaction-picture Hamiltonian over |0>, |1>, |2>...|N-1>, rad/s.
/// Row 0 carries Omega_P/2, row 1 carries Omega_S exp(-i delta t)/2, the
/// intermediate diagonal carries -Delta_i.
HamiltonianMatrix build_interaction_hamiltonian(const CouplingVectors &c, const DetuningSet &d,
                                                double t);

/// Dimensionless couplings x = Omega_P/(2 Omega0), y = Omega_S exp(-i delta t)/(2 Omega0)
/// and deltaScaled = Delta/Omega0.
struct ScaledSystem {
  Eigen::VectorXcd x;
  Eigen::VectorXcd y;
  double deltaScaled = 0.0;
  double Omega0 = 1.0;

  Eigen::Index dimension() const { return x.size() + 2; }
  void validate() const;
};

/// Largest half-coupling magnitude; |Delta| when every coupling vanishes.
double natural_scale(const CouplingVectors &c, const DetuningSet &d);

ScaledSystem scale_system(const CouplingVectors &c, const DetuningSet &d, double t = 0.0,
                          std::optional<double> Omega0 = {});

/// Matrix whose determinant expansion is worked out by hand: x, y in the first
/// two rows, +deltaScaled on the intermediate diagonal. Its spectrum is the
/// negated spectrum of build_interaction_hamiltonian / Omega0.
Eigen::MatrixXcd expanded_matrix(const ScaledSystem &s);
/// build_interaction_hamiltonian / Omega0 in the same variables (-deltaScaled diagonal).
Eigen::MatrixXcd scaled_interaction_matrix(const ScaledSystem &s);

struct FiniteEigenvalues {
  double plus = 0.0;
  double minus = 0.0;
  bool perturbative = true;  // |deltaScaled| >= 10 max(|x|, |y|)
};

/// Roots of lambda^2 delta^2 + lambda (|x|^2+|y|^2) delta + |x|^2|y|^2 - |x.y*|^2 = 0.
FiniteEigenvalues finite_eigenvalues(const ScaledSystem &s);
/// The same pair without the large-detuning approximation: lambda(lambda - delta) = mu
/// for each eigenvalue mu of the ground-block Gram matrix.
FiniteEigenvalues exact_finite_eigenvalues(const ScaledSystem &s);

struct RabiShift {
  double OmegaB = 0.0;
  double DeltaB = 0.0;
  double OmegaTildeB = 0.0;
};

RabiShift rabi_and_shift_from_eigenvalues(const ScaledSystem &s);

struct DressedRotation {
  double theta = 0.0;
  double phi = 0.0;
  bool degenerate = false;
};

/// Ground-state mixing (cos theta, e^{i phi} sin theta), theta in (-pi/4, pi/4].
DressedRotation dressed_rotation(const ScaledSystem &s);

/// [[|x|^2, x.y*], [y.x*, |y|^2]]
Eigen::Matrix2cd ground_gram(const ScaledSystem &s);

/// |x|^2 |y|^2 - |x.y*|^2 written as 1/2 sum_ij |x_i y_j - x_j y_i|^2.
double wedge_norm_sq(const Eigen::VectorXcd &x, const Eigen::VectorXcd &y);

/// det(expanded_matrix - lambda I) from the closed-form expansion.
double characteristic_determinant(const ScaledSystem &s, double lambda);

/// Intermediate components of the expanded-matrix eigenvector with eigenvalue lambda.
Eigen::VectorXcd intermediate_amplitudes(const ScaledSystem &s, double lambda, Complex a0,
                                         Complex a1);
/// Exact ground-state weight |a0|^2+|a1|^2 of a normalised finite-lambda eigenvector
/// of the expanded matrix.
double ground_weight(double lambda, double deltaScaled);

struct NumericEigensystem {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // columns, unit norm
  int sweeps = 0;
};

/// Cyclic Jacobi diagonalisation of a Hermitian matrix (up to 64x64).
NumericEigensystem numeric_eigensystem(const Eigen::MatrixXcd &h, double tol = 1e-12);

}  // namespace raman
