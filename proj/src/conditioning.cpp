#include "ddrom/conditioning.hpp"

#include <cmath>
#include <limits>

namespace ddrom
{

namespace
{

constexpr double kEps = std::numeric_limits<double>::epsilon();

template <typename QType>
AppendedColumnAnalysis analyze(const QType &Q, const CVector &z)
{
  if (Q.rows() != z.size())
  {
    throw Error("dimension mismatch between Q and z");
  }
  if (Q.cols() >= Q.rows())
  {
    throw Error("Q must have fewer columns than rows");
  }
  const double nu = z.stableNorm();
  if (!(nu > 0.0))
  {
    throw Error("rank-deficient append: z is zero");
  }
  // Work with the unit direction so huge |z| cannot overflow the projection.
  const CVector zhat = z / nu;
  CVector coeff = Q.adjoint() * zhat;
  CVector v = zhat - Q * coeff;
  const CVector again = Q.adjoint() * v;
  v -= Q * again;
  coeff += again;

  const double v_rel = v.stableNorm();
  const double u_rel = coeff.stableNorm();
  const double tol = 10.0 * static_cast<double>(z.size()) * kEps;
  if (!(v_rel > tol))
  {
    throw Error("rank-deficient append: z lies in Range(Q)");
  }
  AppendedColumnAnalysis a = appended_column_analysis(nu, v_rel * nu);
  a.u_norm = u_rel * nu;
  return a;
}

}  // namespace

std::pair<double, double> extreme_eigenvalues(double nu, double v_norm)
{
  if (!(nu > 0.0) || !(v_norm > 0.0))
  {
    throw Error("extreme_eigenvalues requires nu > 0 and v_norm > 0");
  }
  if (v_norm > nu * (1.0 + 1e-12))
  {
    throw Error("v_norm exceeds nu");
  }
  v_norm = std::min(v_norm, nu);
  const double s = 1.0 + nu * nu;
  // (1 + nu^2)^2 - 4 v^2 factored to keep the orthogonal case (v = nu = 1) exact.
  double disc = (s - 2.0 * v_norm) * (s + 2.0 * v_norm);
  if (disc < 0.0)
  {
    if (disc < -1e-14 * s * s)
    {
      throw Error("negative discriminant in extreme eigenvalue formula");
    }
    disc = 0.0;
  }
  const double lambda_max = 0.5 * (s + std::sqrt(disc));
  const double lambda_min = (v_norm / lambda_max) * v_norm;
  return {lambda_max, lambda_min};
}

AppendedColumnAnalysis appended_column_analysis(double nu, double v_norm)
{
  const auto [lmax, lmin] = extreme_eigenvalues(nu, v_norm);
  AppendedColumnAnalysis a;
  a.nu = nu;
  a.v_norm = std::min(v_norm, nu);
  a.u_norm = std::sqrt(std::max(0.0, (nu - a.v_norm) * (nu + a.v_norm)));
  a.eta = a.v_norm / nu;
  a.alpha = a.eta;
  a.lambda_max = lmax;
  a.lambda_min_nonzero = lmin;
  a.kappa = lmax / a.v_norm;
  return a;
}

AppendedColumnAnalysis condition_number(const Matrix &Q, const CVector &z)
{
  return analyze(Q, z);
}

AppendedColumnAnalysis condition_number(const CMatrix &Q, const CVector &z)
{
  return analyze(Q, z);
}

double condition_squared(double nu, double eta)
{
  if (!(nu > 0.0) || !(eta > 0.0) || eta > 1.0)
  {
    throw Error("condition_squared requires nu > 0 and 0 < eta <= 1");
  }
  const double k = appended_column_analysis(nu, eta * nu).kappa;
  return k * k;
}

double optimal_scale(const CVector &z)
{
  const double nrm = z.stableNorm();
  if (!(nrm > 0.0))
  {
    throw Error("optimal_scale of a zero vector");
  }
  return 1.0 / nrm;
}

AlphaPrediction alpha_predictor(Complex H_val, Complex H_der, double xi1_norm,
                                double gamma_norm, double gamma1_norm)
{
  const double hd = std::abs(H_der);
  if (!(hd > 0.0))
  {
    throw Error("zero derivative, predictor undefined");
  }
  const double h2 = std::norm(H_val);
  const double total = (1.0 + h2) * gamma1_norm * gamma1_norm;
  double numerator = total - xi1_norm * xi1_norm;
  AlphaPrediction out;
  if (numerator < 0.0)
  {
    out.clamped = true;
    numerator = 0.0;
  }
  out.alpha = std::sqrt(numerator) / (hd * gamma_norm);
  return out;
}

}  // namespace ddrom
