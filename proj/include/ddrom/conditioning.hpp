#pragma once

#include <utility>

#include "ddrom/types.hpp"

namespace ddrom
{

/// Spectral data of [Q z] for a sub-unitary Q and one appended column z.
///
/// With u = Q Q^H z and v = (I - Q Q^H) z, the Gram matrix Q Q^H + z z^H has n-1
/// unit eigenvalues plus two extremes lying in span{u, v}:
///
///   lambda = (1 + nu^2 +- sqrt((1 + nu^2)^2 - 4 |v|^2)) / 2,   nu = |z|,
///
/// so kappa([Q z]) = sqrt(lambda_max / lambda_min) = lambda_max / |v|, because the
/// product of the two extremes is |v|^2.
struct AppendedColumnAnalysis
{
  double nu = 0.0;
  double v_norm = 0.0;
  double u_norm = 0.0;
  double eta = 0.0;  // v_norm / nu
  double lambda_max = 0.0;
  double lambda_min_nonzero = 0.0;
  double kappa = 0.0;
  double alpha = 0.0;  // sine of the angle between z and Range(Q); equals eta
};

/// Returns (lambda_max, lambda_min_nonzero). Requires 0 < v_norm <= nu; v_norm may
/// exceed nu by roundoff (relative 1e-12) and is clamped. The smaller eigenvalue is
/// formed as v_norm^2 / lambda_max, which avoids the cancellation in the minus branch.
std::pair<double, double> extreme_eigenvalues(double nu, double v_norm);

/// Splits z against an orthonormal Q (two passes of classical Gram-Schmidt) and applies
/// extreme_eigenvalues. Throws Error("rank-deficient append") when z lies in Range(Q)
/// to working precision.
AppendedColumnAnalysis condition_number(const Matrix &Q, const CVector &z);
AppendedColumnAnalysis condition_number(const CMatrix &Q, const CVector &z);

/// Same analysis from precomputed norms.
AppendedColumnAnalysis appended_column_analysis(double nu, double v_norm);

/// K(nu, eta) = kappa^2 of [Q z] with |z| = nu and |v| = eta nu.
double condition_squared(double nu, double eta);

/// delta = 1 / |z|, the scale minimizing kappa([Q delta z]).
double optimal_scale(const CVector &z);

struct AlphaPrediction
{
  double alpha = 0.0;
  bool clamped = false;  // numerator was slightly negative and clamped to zero
  bool informative() const { return alpha > 0.0; }
};

/// Predicted sin(theta) between z(sigma) and Range(U) from system quantities:
///
///   alpha^2 = ((1 + |H|^2) |gamma1|^2 - |xi1_hat|^2) / (|H'|^2 |gamma|^2),
///
/// where xi1_hat is the coefficient block of the Hermite solve against [U v]. The
/// formula is homogeneous, so all three norms may be pre-divided by |gamma|.
AlphaPrediction alpha_predictor(Complex H_val, Complex H_der, double xi1_norm,
                                double gamma_norm, double gamma1_norm);

}  // namespace ddrom
