#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ddrom/conditioning.hpp"
#include "ddrom/informativity.hpp"
#include "ddrom/models.hpp"
#include "test_support.hpp"

using namespace ddrom;
using ddrom::test::random_complex;
using ddrom::test::random_orthonormal;
using ddrom::test::rel_err;

namespace
{

double svd_kappa(const Matrix &Q, const CVector &z)
{
  CMatrix A(Q.rows(), Q.cols() + 1);
  A.leftCols(Q.cols()) = Q.cast<Complex>();
  A.col(Q.cols()) = z;
  Eigen::JacobiSVD<CMatrix> svd(A);
  const Vector s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

}  // namespace

TEST_CASE("extreme eigenvalues for an orthogonal append")
{
  const auto [hi, lo] = extreme_eigenvalues(2.0, 2.0);
  CHECK(hi == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(lo == doctest::Approx(1.0).epsilon(1e-15));
  const auto [one_hi, one_lo] = extreme_eigenvalues(1.0, 1.0);
  CHECK(one_hi == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(one_lo == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("extreme eigenvalues of e1 appended with [1, 1, 0]")
{
  const auto [hi, lo] = extreme_eigenvalues(std::sqrt(2.0), 1.0);
  CHECK(rel_err(hi, (3.0 + std::sqrt(5.0)) / 2.0) < 1e-15);
  CHECK(rel_err(lo, (3.0 - std::sqrt(5.0)) / 2.0) < 1e-14);

  Matrix Q = Matrix::Zero(3, 1);
  Q(0, 0) = 1.0;
  CVector z(3);
  z << 1.0, 1.0, 0.0;
  const AppendedColumnAnalysis a = condition_number(Q, z);
  CHECK(rel_err(a.kappa, std::sqrt((3.0 + std::sqrt(5.0)) / (3.0 - std::sqrt(5.0)))) < 1e-14);
  CHECK(rel_err(a.kappa, 2.6180339887498949) < 1e-14);
  CHECK(rel_err(a.u_norm, 1.0) < 1e-15);
  CHECK(rel_err(a.v_norm, 1.0) < 1e-15);
}

TEST_CASE("extreme_eigenvalues preconditions")
{
  CHECK_THROWS_AS(extreme_eigenvalues(1.0, 1.5), Error);
  CHECK_THROWS_AS(extreme_eigenvalues(1.0, 0.0), Error);
  CHECK_THROWS_AS(extreme_eigenvalues(0.0, 0.0), Error);
  // Roundoff above nu is clamped.
  CHECK_NOTHROW(extreme_eigenvalues(1.0, 1.0 + 1e-14));
}

TEST_CASE("unit z orthogonal to Q gives kappa 1")
{
  Matrix Q = Matrix::Zero(4, 2);
  Q(0, 0) = 1.0;
  Q(1, 1) = 1.0;
  CVector z = CVector::Zero(4);
  z(3) = Complex(0.0, 1.0);
  CHECK(condition_number(Q, z).kappa == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("z in the range of Q is a rank-deficient append")
{
  Matrix Q = Matrix::Zero(3, 1);
  Q(0, 0) = 1.0;
  CVector z = CVector::Zero(3);
  z(0) = 2.0;
  CHECK_THROWS_WITH_AS(condition_number(Q, z), doctest::Contains("rank-deficient append"), Error);
  CHECK_THROWS_AS(condition_number(Q, CVector::Zero(3)), Error);
}

TEST_CASE("formula matches SVD on random instances, real and complex Q")
{
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<Index> dim(2, 60);
  std::uniform_real_distribution<double> logscale(-3.0, 3.0);
  for (int trial = 0; trial < 200; trial++)
  {
    const Index m = dim(rng);
    const Index n = std::uniform_int_distribution<Index>(1, m - 1)(rng);
    const Matrix Q = random_orthonormal(m, n, rng);
    const CVector z = random_complex(m, rng) * std::pow(10.0, logscale(rng));
    const AppendedColumnAnalysis a = condition_number(Q, z);
    CHECK(rel_err(a.kappa, svd_kappa(Q, z)) < 1e-10);
    CHECK(rel_err(a.u_norm * a.u_norm + a.v_norm * a.v_norm, a.nu * a.nu) < 1e-12);
    CHECK(a.lambda_min_nonzero <= 1.0 + 1e-15);
    CHECK(a.lambda_max >= 1.0 - 1e-15);
    CHECK(a.eta > 0.0);
    CHECK(a.eta <= 1.0);
    CHECK(a.alpha == a.eta);
    const AppendedColumnAnalysis c = condition_number(CMatrix(Q.cast<Complex>()), z);
    CHECK(rel_err(c.kappa, a.kappa) < 1e-12);
  }
}

TEST_CASE("Gram matrix eigenstructure: n-1 unit eigenvalues plus two extremes")
{
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; trial++)
  {
    const Index m = std::uniform_int_distribution<Index>(3, 40)(rng);
    const Index n = std::uniform_int_distribution<Index>(1, m - 1)(rng);
    const Matrix Q = random_orthonormal(m, n, rng);
    const CVector z = random_complex(m, rng);
    const CMatrix Qc = Q.cast<Complex>();
    const CMatrix gram = Qc * Qc.adjoint() + z * z.adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
    const Vector ev = es.eigenvalues();  // ascending; m - n - 1 zeros first
    const AppendedColumnAnalysis a = condition_number(Q, z);
    CHECK(rel_err(ev(m - 1), a.lambda_max) < 1e-10);
    CHECK(rel_err(ev(m - n - 1), a.lambda_min_nonzero) < 1e-10);
    for (Index i = m - n; i < m - 1; i++)
    {
      CHECK(std::abs(ev(i) - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("condition_squared closed form")
{
  CHECK(rel_err(condition_squared(1.0, 0.6), 9.0) < 1e-14);
  CHECK(condition_squared(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  for (double eta : {0.1, 0.5, 0.9})
  {
    CHECK(condition_squared(0.5, eta) > condition_squared(1.0, eta));
    CHECK(condition_squared(2.0, eta) > condition_squared(1.0, eta));
    const double k = appended_column_analysis(1.7, eta * 1.7).kappa;
    CHECK(rel_err(condition_squared(1.7, eta), k * k) < 1e-12);
  }
  CHECK_THROWS_AS(condition_squared(0.0, 0.5), Error);
  CHECK_THROWS_AS(condition_squared(1.0, 0.0), Error);
  CHECK_THROWS_AS(condition_squared(1.0, 1.5), Error);
}

TEST_CASE("optimal_scale is the reciprocal norm")
{
  CVector z(2);
  z << 3.0, 4.0;
  CHECK(optimal_scale(z) == doctest::Approx(0.2).epsilon(1e-15));
  CVector e = CVector::Zero(5);
  e(2) = Complex(0.0, 1.0);
  CHECK(optimal_scale(e) == 1.0);
  CHECK_THROWS_AS(optimal_scale(CVector::Zero(3)), Error);
  // Entries near the top of the double range do not overflow the norm.
  CVector huge = CVector::Constant(4, 1e300);
  CHECK(rel_err(optimal_scale(huge), 0.5e-300) < 1e-14);
}

TEST_CASE("optimal scale minimizes kappa over a log grid")
{
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; trial++)
  {
    const Index m = std::uniform_int_distribution<Index>(4, 40)(rng);
    const Index n = std::uniform_int_distribution<Index>(1, m - 1)(rng);
    const Matrix Q = random_orthonormal(m, n, rng);
    const CVector z = random_complex(m, rng) * 7.0;
    const double best = condition_number(Q, optimal_scale(z) * z).kappa;
    for (int j = 0; j < 50; j++)
    {
      const double delta = std::pow(10.0, -6.0 + 12.0 * j / 49.0);
      CHECK(best <= condition_number(Q, delta * z).kappa * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("alpha determines kappa of the normalized append")
{
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; trial++)
  {
    const Index m = std::uniform_int_distribution<Index>(4, 40)(rng);
    const Index n = std::uniform_int_distribution<Index>(1, m - 1)(rng);
    const Matrix Q = random_orthonormal(m, n, rng);
    CVector z = random_complex(m, rng);
    z /= z.norm();
    const AppendedColumnAnalysis a = condition_number(Q, z);
    CHECK(rel_err(std::sqrt(condition_squared(1.0, a.alpha)), a.kappa) < 1e-10);
  }
}

TEST_CASE("alpha predictor: monotone in the gamma1 ratio, zero numerator, zero derivative")
{
  const Complex H(0.8, -0.3), Hd(-1.2, 0.4);
  const AlphaPrediction base = alpha_predictor(H, Hd, 0.5, 1.0, 0.9);
  const AlphaPrediction doubled = alpha_predictor(H, Hd, 0.5, 1.0, 1.8);
  CHECK(doubled.alpha > base.alpha);

  // H = 0 and |xi1| = |gamma1| make the numerator exactly zero.
  const AlphaPrediction zero = alpha_predictor(0.0, Hd, 0.75, 1.0, 0.75);
  CHECK(zero.alpha == 0.0);
  CHECK_FALSE(zero.clamped);
  CHECK_FALSE(zero.informative());

  const AlphaPrediction clamp = alpha_predictor(0.0, Hd, 0.75 * (1.0 + 1e-15), 1.0, 0.75);
  CHECK(clamp.alpha == 0.0);
  CHECK(clamp.clamped);

  CHECK_THROWS_WITH_AS(alpha_predictor(H, 0.0, 0.5, 1.0, 0.9),
                       doctest::Contains("zero derivative"), Error);
}

TEST_CASE("alpha predictor matches the directly computed angle on recovery data")
{
  // Order-10 systems, informative data; sigma on the unit circle.
  for (std::uint64_t seed = 1; seed <= 20; seed++)
  {
    const DiscreteLTI sys = random_stable_system(10, 0.9, seed);
    const TimeSeriesData data = simulate(sys, ddrom::test::gaussian(101, seed + 100));
    const InformativityWorkspace ws(data, 20);
    const Complex sigma = std::polar(1.0, 0.3 + 0.1 * static_cast<double>(seed));
    FrequencySample s = recover_value(ws, sigma);
    s = recover_derivative(ws, s);
    const GammaVectors g = gamma_vectors(sigma, ws.nhat());
    const AlphaPrediction p =
      alpha_predictor(transfer_value(sys, sigma), transfer_derivative(sys, sigma), s.xi1_norm,
                      1.0, g.norm_ratio);
    CHECK(rel_err(p.alpha, s.alpha) < 1e-8);
  }
}
