#include "ddrom/loewner.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace ddrom
{

namespace
{


double max_abs(const CMatrix &M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const CVector &v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

double max_imag(const CMatrix &M) { return M.size() ? M.imag().cwiseAbs().maxCoeff() : 0.0; }
double max_imag(const CVector &v) { return v.size() ? v.imag().cwiseAbs().maxCoeff() : 0.0; }

template <typename PencilMatrix>
CVector fallback_eigenvalues(const PencilMatrix &A, const PencilMatrix &E)
{
  Eigen::JacobiSVD<PencilMatrix> svd(E);
  const auto &s = svd.singularValues();
  const double cond = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1)
                                            : std::numeric_limits<double>::infinity();
  if (!(cond < 1e6))
  {
    throw Error("generalized eigensolver failed and Er is too ill-conditioned to invert");
  }
  const PencilMatrix K = E.partialPivLu().solve(A);
  Eigen::ComplexEigenSolver<CMatrix> es(K.template cast<Complex>(), false);
  return es.eigenvalues();
}

// An eigenvalue alpha / beta with both parts at the underflow level is undetermined.
void check_not_singular(Complex alpha, double beta_abs, double a_norm, double e_norm)
{
  const double tiny = std::numeric_limits<double>::min();
  if (std::abs(alpha) <= tiny * a_norm && beta_abs <= tiny * e_norm)
  {
    throw SingularMatrixError("singular pencil: Ar and Er share a null direction");
  }
}

}  // namespace

Complex HermiteLoewnerROM::transfer(Complex z) const
{
  // Loewner pencils are routinely ill-conditioned near their interpolation points
  // while the interpolant itself stays accurate, so only an exactly singular factor or
  // an overflowing result counts as a pole.
  const CMatrix K = z * Er - Ar;
  Eigen::PartialPivLU<CMatrix> lu(K);
  if (!(lu.rcond() > 0.0))
  {
    throw SingularMatrixError("evaluation at pole");
  }
  const Complex h = cr.transpose() * lu.solve(br);
  if (!std::isfinite(h.real()) || !std::isfinite(h.imag()))
  {
    throw SingularMatrixError("evaluation at pole");
  }
  return h;
}

Complex HermiteLoewnerROM::derivative(Complex z) const
{
  const CMatrix K = z * Er - Ar;
  Eigen::PartialPivLU<CMatrix> lu(K);
  if (!(lu.rcond() > 0.0))
  {
    throw SingularMatrixError("evaluation at pole");
  }
  const CVector x = lu.solve(br);
  const CVector y = lu.transpose().solve(cr);
  const Complex d = -(y.transpose() * (Er * x))(0);
  if (!std::isfinite(d.real()) || !std::isfinite(d.imag()))
  {
    throw SingularMatrixError("evaluation at pole");
  }
  return d;
}

DiscreteLTI HermiteLoewnerROM::as_real_system() const
{
  if (!is_real)
  {
    throw Error("ROM has not been realified");
  }
  DiscreteLTI sys;
  sys.E = Er.real();
  sys.A = Ar.real();
  sys.b = br.real();
  sys.c = cr.real();
  return sys;
}

HermiteLoewnerROM build_hermite_loewner(const CVector &points, const CVector &values,
                                        const CVector &derivatives)
{
  const Index r = points.size();
  if (r < 1)
  {
    throw Error("Loewner construction needs at least one point");
  }
  if (values.size() != r || derivatives.size() != r)
  {
    throw Error("points, values and derivatives must have equal length");
  }
  const double scale = max_abs(points);
  for (Index i = 0; i < r; i++)
  {
    for (Index j = i + 1; j < r; j++)
    {
      if (std::abs(points(i) - points(j)) < 1e-10 * scale)
      {
        throw Error("repeated interpolation points");
      }
    }
  }

  HermiteLoewnerROM rom;
  rom.points = points;
  rom.Er.resize(r, r);
  rom.Ar.resize(r, r);
  for (Index i = 0; i < r; i++)
  {
    const Complex si = points(i);
    const Complex hi = values(i);
    for (Index j = 0; j < r; j++)
    {
      if (i == j)
      {
        rom.Er(i, i) = -derivatives(i);
        rom.Ar(i, i) = -(hi + si * derivatives(i));
        continue;
      }
      const Complex sj = points(j);
      const Complex hj = values(j);
      const Complex ds = si - sj;
      rom.Er(i, j) = -(hi - hj) / ds;
      rom.Ar(i, j) = -(si * hi - sj * hj) / ds;
    }
  }
  rom.br = values;
  rom.cr = values;

  double worst = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < r; i++)
  {
    const CMatrix K = points(i) * rom.Er - rom.Ar;
    const double nrm = K.norm();
    Eigen::JacobiSVD<CMatrix> svd(K);
    const double smin = svd.singularValues()(r - 1);
    const double rel = nrm > 0.0 ? smin / nrm : 0.0;
    // Loewner pencils from clustered points are routinely below eps; only exact
    // singularity is rejected, the ratio itself is kept as a diagnostic.
    if (!(rel > 0.0) || !std::isfinite(nrm))
    {
      throw SingularMatrixError("interpolation pencil singular");
    }
    worst = std::min(worst, rel);
  }
  rom.pencil_min_singular = worst;
  return rom;
}

HermiteLoewnerROM realify(const HermiteLoewnerROM &rom)
{
  const Index r = rom.order();
  const double scale = std::max(max_abs(rom.points), 1.0);
  const double real_tol = 1e-13 * scale;
  const double pair_tol = 1e-10 * scale;

  // Real points first, then (s, conj s) with Im s > 0.
  std::vector<Index> order;
  std::vector<bool> used(r, false);
  std::vector<bool> is_pair_head;
  for (Index i = 0; i < r; i++)
  {
    if (std::abs(rom.points(i).imag()) <= real_tol)
    {
      order.push_back(i);
      is_pair_head.push_back(false);
      used[i] = true;
    }
  }
  for (Index i = 0; i < r; i++)
  {
    if (used[i] || rom.points(i).imag() < 0.0)
    {
      continue;
    }
    Index best = -1;
    double best_dist = pair_tol;
    for (Index j = 0; j < r; j++)
    {
      if (used[j] || j == i || rom.points(j).imag() > 0.0)
      {
        continue;
      }
      const double d = std::abs(rom.points(j) - std::conj(rom.points(i)));
      if (d <= best_dist)
      {
        best = j;
        best_dist = d;
      }
    }
    if (best < 0)
    {
      throw Error("points not conjugate-closed");
    }
    used[i] = used[best] = true;
    order.push_back(i);
    order.push_back(best);
    is_pair_head.push_back(true);
    is_pair_head.push_back(false);
  }
  if (static_cast<Index>(order.size()) != r)
  {
    throw Error("points not conjugate-closed");
  }

  CMatrix E(r, r), A(r, r);
  CVector b(r), c(r), pts(r);
  for (Index i = 0; i < r; i++)
  {
    b(i) = rom.br(order[i]);
    c(i) = rom.cr(order[i]);
    pts(i) = rom.points(order[i]);
    for (Index j = 0; j < r; j++)
    {
      E(i, j) = rom.Er(order[i], order[j]);
      A(i, j) = rom.Ar(order[i], order[j]);
    }
  }

  const double h = 1.0 / std::numbers::sqrt2;
  const Complex I(0.0, 1.0);
  CMatrix T = CMatrix::Zero(r, r);
  for (Index k = 0; k < r; k++)
  {
    if (is_pair_head[k])
    {
      T(k, k) = h;
      T(k, k + 1) = -I * h;
      T(k + 1, k) = h;
      T(k + 1, k + 1) = I * h;
      pts(k + 1) = std::conj(pts(k));
      k++;
    }
    else
    {
      T(k, k) = 1.0;
      pts(k) = pts(k).real();
    }
  }

  HermiteLoewnerROM out;
  const CMatrix En = T.adjoint() * E * T;
  const CMatrix An = T.adjoint() * A * T;
  const CVector bn = T.adjoint() * b;
  const CVector cn = T.transpose() * c;
  const double tol = 1e-8;
  if (max_imag(En) > tol * max_abs(En) || max_imag(An) > tol * max_abs(An) ||
      max_imag(bn) > tol * max_abs(bn) || max_imag(cn) > tol * max_abs(cn))
  {
    throw Error("data not conjugate-symmetric: realification left imaginary parts");
  }
  out.Er = En.real().cast<Complex>();
  out.Ar = An.real().cast<Complex>();
  out.br = bn.real().cast<Complex>();
  out.cr = cn.real().cast<Complex>();
  out.points = pts;
  out.is_real = true;
  out.pencil_min_singular = rom.pencil_min_singular;
  return out;
}

CVector generalized_eigenvalues(const Matrix &A_in, const Matrix &E_in)
{
  const Index n = A_in.rows();
  if (A_in.cols() != n || E_in.rows() != n || E_in.cols() != n)
  {
    throw Error("pencil matrices must be square and of equal size");
  }
  Matrix A = A_in, E = E_in;
  Vector ar(n), ai(n), beta(n);
  const lapack_int info =
    LAPACKE_dggev(LAPACK_COL_MAJOR, 'N', 'N', static_cast<lapack_int>(n), A.data(),
                  static_cast<lapack_int>(n), E.data(), static_cast<lapack_int>(n), ar.data(),
                  ai.data(), beta.data(), nullptr, 1, nullptr, 1);
  if (info != 0)
  {
    return fallback_eigenvalues(A_in, E_in);
  }
  const double a_norm = A_in.cwiseAbs().maxCoeff();
  const double e_norm = E_in.cwiseAbs().maxCoeff();
  CVector out(n);
  for (Index i = 0; i < n; i++)
  {
    const Complex alpha(ar(i), ai(i));
    check_not_singular(alpha, std::abs(beta(i)), a_norm, e_norm);
    out(i) = beta(i) != 0.0 ? alpha / beta(i)
                            : Complex(std::numeric_limits<double>::infinity(), 0.0);
  }
  return out;
}

CVector generalized_eigenvalues(const CMatrix &A_in, const CMatrix &E_in)
{
  const Index n = A_in.rows();
  if (A_in.cols() != n || E_in.rows() != n || E_in.cols() != n)
  {
    throw Error("pencil matrices must be square and of equal size");
  }
  CMatrix A = A_in, E = E_in;
  CVector alpha(n), beta(n);
  const lapack_int info =
    LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'N', static_cast<lapack_int>(n), A.data(),
                  static_cast<lapack_int>(n), E.data(), static_cast<lapack_int>(n),
                  alpha.data(), beta.data(), nullptr, 1, nullptr, 1);
  if (info != 0)
  {
    return fallback_eigenvalues(A_in, E_in);
  }
  const double a_norm = max_abs(A_in);
  const double e_norm = max_abs(E_in);
  CVector out(n);
  for (Index i = 0; i < n; i++)
  {
    check_not_singular(alpha(i), std::abs(beta(i)), a_norm, e_norm);
    out(i) = std::abs(beta(i)) != 0.0
               ? alpha(i) / beta(i)
               : Complex(std::numeric_limits<double>::infinity(), 0.0);
  }
  return out;
}

CVector rom_poles(const HermiteLoewnerROM &rom)
{
  if (rom.is_real)
  {
    return generalized_eigenvalues(Matrix(rom.Ar.real()), Matrix(rom.Er.real()));
  }
  return generalized_eigenvalues(rom.Ar, rom.Er);
}

}  // namespace ddrom
