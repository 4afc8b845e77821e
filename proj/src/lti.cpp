#include "ddrom/lti.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace ddrom
{

const char *to_string(RankCondition c) noexcept
{
  switch (c)
  {
    case RankCondition::Existence:
      return "existence: rank[U z b] != rank[U z]";
    case RankCondition::Uniqueness:
      return "uniqueness: rank[U z] != rank[U] + 1";
    case RankCondition::HermiteExistence:
      return "hermite existence: rank[U z b1] != rank[U z]";
  }
  return "unknown";
}

InformativityError::InformativityError(RankCondition condition, Complex sigma,
                                       const std::string &detail)
  : Error("data not informative at sigma = (" + std::to_string(sigma.real()) + ", " +
          std::to_string(sigma.imag()) + "): " + to_string(condition) +
          (detail.empty() ? "" : " (" + detail + ")")),
    condition_(condition), sigma_(sigma)
{
}

namespace
{

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_shapes(const Matrix &E, const Matrix &A, const Vector &b, const Vector &c)
{
  const auto n = A.rows();
  if (n < 1 || A.cols() != n || E.rows() != n || E.cols() != n || b.size() != n ||
      c.size() != n)
  {
    throw Error("inconsistent system dimensions");
  }
}

bool is_identity(const Matrix &E) { return E.isIdentity(0.0); }

void check_nonsingular(const Matrix &E)
{
  if (is_identity(E))
  {
    return;
  }
  Eigen::PartialPivLU<Matrix> lu(E);
  const double n = static_cast<double>(E.rows());
  if (!(lu.rcond() > n * kEps))
  {
    throw SingularMatrixError("singular descriptor matrix");
  }
}

}  // namespace

DiscreteLTI DiscreteLTI::standard(Matrix A, Vector b, Vector c)
{
  DiscreteLTI sys;
  sys.E = Matrix::Identity(A.rows(), A.cols());
  sys.A = std::move(A);
  sys.b = std::move(b);
  sys.c = std::move(c);
  return sys;
}

void DiscreteLTI::validate() const
{
  check_shapes(E, A, b, c);
  check_nonsingular(E);
}

void ContinuousLTI::validate() const
{
  check_shapes(E, A, b, c);
  check_nonsingular(E);
}

void TimeSeriesData::validate() const
{
  if (U.size() != Y.size())
  {
    throw Error("input and output trajectories differ in length");
  }
  if (U.size() < 2)
  {
    throw Error("trajectories need at least two samples");
  }
}

Simulator::Simulator(const DiscreteLTI &sys) : Simulator(sys, Vector::Zero(sys.order())) {}

Simulator::Simulator(const DiscreteLTI &sys, Vector x0)
  : A_(sys.A), b_(sys.b), c_(sys.c), identity_E_(false)
{
  sys.validate();
  if (x0.size() != sys.order())
  {
    throw Error("initial state has wrong dimension");
  }
  identity_E_ = is_identity(sys.E);
  if (!identity_E_)
  {
    lu_E_.compute(sys.E);
  }
  state_.x = std::move(x0);
  state_.k = 0;
}

double Simulator::step(double u)
{
  const double y = c_.dot(state_.x);
  Vector rhs = A_ * state_.x + b_ * u;
  state_.x = identity_E_ ? rhs : lu_E_.solve(rhs);
  state_.k++;
  return y;
}

TimeSeriesData simulate(const DiscreteLTI &sys, const Vector &U, const Vector &x0)
{
  Simulator sim(sys, x0);
  TimeSeriesData data;
  data.U = U;
  data.Y.resize(U.size());
  for (Index k = 0; k < U.size(); k++)
  {
    data.Y(k) = sim.step(U(k));
  }
  return data;
}

TimeSeriesData simulate(const DiscreteLTI &sys, const Vector &U)
{
  return simulate(sys, U, Vector::Zero(sys.order()));
}

namespace
{

Eigen::PartialPivLU<CMatrix> shifted_lu(const DiscreteLTI &sys, Complex z)
{
  sys.validate();
  CMatrix K = z * sys.E.cast<Complex>() - sys.A.cast<Complex>();
  Eigen::PartialPivLU<CMatrix> lu(K);
  if (!(lu.rcond() > kEps))
  {
    throw SingularMatrixError("evaluation at pole");
  }
  return lu;
}

}  // namespace

Complex transfer_value(const DiscreteLTI &sys, Complex z)
{
  auto lu = shifted_lu(sys, z);
  CVector x = lu.solve(sys.b.cast<Complex>());
  return sys.c.cast<Complex>().transpose() * x;
}

Complex transfer_derivative(const DiscreteLTI &sys, Complex z)
{
  auto lu = shifted_lu(sys, z);
  CVector x = lu.solve(sys.b.cast<Complex>());
  CVector w = lu.solve(sys.E.cast<Complex>() * x);
  return -(sys.c.cast<Complex>().transpose() * w)(0);
}

namespace
{

// LU of (zI - H) for upper Hessenberg H with adjacent-row partial pivoting.
struct HessenbergLU
{
  CMatrix R;                 // upper triangular factor
  CVector multipliers;       // elimination multiplier for row k+1 at step k
  std::vector<char> swapped; // rows k and k+1 exchanged at step k

  HessenbergLU(const Matrix &H, Complex z)
    : R(z * CMatrix::Identity(H.rows(), H.cols()) - H.cast<Complex>()),
      multipliers(CVector::Zero(H.rows())), swapped(H.rows(), 0)
  {
    const Index n = R.rows();
    const double scale = H.lpNorm<Eigen::Infinity>() + std::abs(z);
    const double tiny = kEps * scale;
    for (Index k = 0; k + 1 < n; k++)
    {
      if (std::abs(R(k + 1, k)) > std::abs(R(k, k)))
      {
        R.row(k).segment(k, n - k).swap(R.row(k + 1).segment(k, n - k));
        swapped[k] = 1;
      }
      if (std::abs(R(k, k)) <= tiny)
      {
        throw SingularMatrixError("evaluation at pole");
      }
      const Complex l = R(k + 1, k) / R(k, k);
      multipliers(k) = l;
      R.row(k + 1).segment(k, n - k) -= l * R.row(k).segment(k, n - k);
      R(k + 1, k) = 0.0;
    }
    if (std::abs(R(n - 1, n - 1)) <= tiny)
    {
      throw SingularMatrixError("evaluation at pole");
    }
  }

  CVector solve(CVector rhs) const
  {
    const Index n = R.rows();
    for (Index k = 0; k + 1 < n; k++)
    {
      if (swapped[k])
      {
        std::swap(rhs(k), rhs(k + 1));
      }
      rhs(k + 1) -= multipliers(k) * rhs(k);
    }
    R.triangularView<Eigen::Upper>().solveInPlace(rhs);
    return rhs;
  }
};

}  // namespace

TransferEvaluator::TransferEvaluator(const DiscreteLTI &sys)
{
  sys.validate();
  Matrix F;
  Vector g;
  if (is_identity(sys.E))
  {
    F = sys.A;
    g = sys.b;
  }
  else
  {
    Eigen::PartialPivLU<Matrix> lu(sys.E);
    F = lu.solve(sys.A);
    g = lu.solve(sys.b);
  }
  if (F.rows() > 1)
  {
    Eigen::HessenbergDecomposition<Matrix> hess(F);
    Matrix Q = hess.matrixQ();
    H_ = hess.matrixH();
    b_ = Q.transpose() * g;
    c_ = Q.transpose() * sys.c;
  }
  else
  {
    H_ = F;
    b_ = g;
    c_ = sys.c;
  }
}

Complex TransferEvaluator::value(Complex z) const
{
  HessenbergLU lu(H_, z);
  const CVector x = lu.solve(b_.cast<Complex>());
  return (c_.cast<Complex>().transpose() * x)(0);
}

Complex TransferEvaluator::derivative(Complex z) const
{
  return value_and_derivative(z).second;
}

std::pair<Complex, Complex> TransferEvaluator::value_and_derivative(Complex z) const
{
  HessenbergLU lu(H_, z);
  const CVector x = lu.solve(b_.cast<Complex>());
  const CVector w = lu.solve(x);
  const CVector cc = c_.cast<Complex>();
  return {(cc.transpose() * x)(0), -(cc.transpose() * w)(0)};
}

CVector poles(const DiscreteLTI &sys)
{
  sys.validate();
  if (is_identity(sys.E))
  {
    Eigen::EigenSolver<Matrix> es(sys.A, false);
    return es.eigenvalues();
  }
  Eigen::GeneralizedEigenSolver<Matrix> ges(sys.A, sys.E, false);
  return ges.eigenvalues();
}

double spectral_radius(const DiscreteLTI &sys) { return poles(sys).cwiseAbs().maxCoeff(); }

bool is_stable(const DiscreteLTI &sys) { return spectral_radius(sys) < 1.0; }

CVector poles(const ContinuousLTI &csys)
{
  csys.validate();
  Eigen::GeneralizedEigenSolver<Matrix> ges(csys.A, csys.E, false);
  return ges.eigenvalues();
}

DiscreteLTI zoh_discretize(const ContinuousLTI &csys, double fs)
{
  csys.validate();
  if (!(fs > 0.0))
  {
    throw Error("sampling frequency must be positive");
  }
  const Index n = csys.order();
  const double h = 1.0 / fs;
  Matrix Ac;
  Vector bc;
  if (is_identity(csys.E))
  {
    Ac = csys.A;
    bc = csys.b;
  }
  else
  {
    Eigen::PartialPivLU<Matrix> lu(csys.E);
    Ac = lu.solve(csys.A);
    bc = lu.solve(csys.b);
  }
  // exp([[Ac, bc], [0, 0]] h) = [[A_d, b_d], [0, 1]]
  Matrix aug = Matrix::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = Ac * h;
  aug.topRightCorner(n, 1) = bc * h;
  const Matrix expm = aug.exp();

  DiscreteLTI d;
  d.E = Matrix::Identity(n, n);
  d.A = expm.topLeftCorner(n, n);
  d.b = expm.topRightCorner(n, 1);
  d.c = csys.c;
  d.flagged_stable = csys.flagged_stable;
  return d;
}

}  // namespace ddrom
