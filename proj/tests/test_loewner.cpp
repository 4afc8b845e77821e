#include <doctest.h>

#include <numbers>

#include "ddrom/loewner.hpp"
#include "ddrom/models.hpp"
#include "test_support.hpp"

using namespace ddrom;
using ddrom::test::rel_err;
using ddrom::test::scalar_system;

namespace
{

struct Samples
{
  CVector points, values, derivatives;
};

Samples sample(const DiscreteLTI &sys, const CVector &points)
{
  Samples s{points, CVector(points.size()), CVector(points.size())};
  for (Index i = 0; i < points.size(); i++)
  {
    s.values(i) = transfer_value(sys, points(i));
    s.derivatives(i) = transfer_derivative(sys, points(i));
  }
  return s;
}

HermiteLoewnerROM build(const Samples &s)
{
  return build_hermite_loewner(s.points, s.values, s.derivatives);
}

// max_i min_j |a_i - b_j|, symmetric in the two sets.
double set_distance(const CVector &a, const CVector &b)
{
  const auto one_way = [](const CVector &x, const CVector &y) {
    double worst = 0.0;
    for (Index i = 0; i < x.size(); i++)
    {
      worst = std::max(worst, (y.array() - x(i)).abs().minCoeff());
    }
    return worst;
  };
  return std::max(one_way(a, b), one_way(b, a));
}

CVector sorted(CVector v)
{
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

std::vector<Complex> test_points(int count, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(1.05, 3.0), angle(-std::numbers::pi, std::numbers::pi);
  std::vector<Complex> z;
  for (int i = 0; i < count; i++)
  {
    z.push_back(std::polar(radius(rng), angle(rng)));
  }
  return z;
}

}  // namespace

TEST_CASE("Hermite interpolant of 1 / (z - 0.5) at sigma = 2")
{
  const HermiteLoewnerROM rom = build(sample(scalar_system(0.5), (CVector(1) << 2.0).finished()));
  CHECK(rel_err(rom.transfer(2.0), Complex(2.0 / 3.0)) < 1e-10);
  CHECK(rel_err(rom.derivative(2.0), Complex(-4.0 / 9.0)) < 1e-10);
  CHECK(rom.order() == 1);
}

TEST_CASE("two points of an order-one function give an identically singular pencil")
{
  // For H = 1 / (z - a): M = a L with L rank one, so zL - M = (z - a) L for every z.
  // The pencil is singular only up to roundoff; the diagnostic flags it.
  const Samples s = sample(scalar_system(0.5), (CVector(2) << 2.0, 3.0).finished());
  const HermiteLoewnerROM rom = build(s);
  CHECK(rom.pencil_min_singular < 1e-15);
}

TEST_CASE("evaluation at an exact pole is an error")
{
  HermiteLoewnerROM rom;
  rom.Er = CMatrix::Identity(2, 2);
  rom.Ar = (CMatrix(2, 2) << 0.5, 0.0, 0.0, 0.25).finished();
  rom.br = CVector::Ones(2);
  rom.cr = CVector::Ones(2);
  CHECK_THROWS_WITH_AS(rom.transfer(0.5), "evaluation at pole", SingularMatrixError);
  CHECK_THROWS_WITH_AS(rom.derivative(0.25), "evaluation at pole", SingularMatrixError);
  CHECK(rel_err(rom.transfer(1.0), Complex(2.0 + 4.0 / 3.0)) < 1e-15);
}

TEST_CASE("two-point Hermite interpolant of an order-two function")
{
  const DiscreteLTI sys = DiscreteLTI::standard((Matrix(2, 2) << 0.5, 0, 0, -0.25).finished(),
                                                Vector::Ones(2), Vector::Ones(2));
  const HermiteLoewnerROM rom = build(sample(sys, (CVector(2) << 2.0, 3.0).finished()));
  for (double s : {2.0, 3.0})
  {
    CHECK(rel_err(rom.transfer(s), transfer_value(sys, s)) < 1e-10);
    CHECK(rel_err(rom.derivative(s), transfer_derivative(sys, s)) < 1e-10);
  }
  CHECK(rom.pencil_min_singular > 0.0);
}

TEST_CASE("order-one pencil by hand")
{
  const CVector pts = (CVector(1) << 2.0).finished();
  const HermiteLoewnerROM rom = build_hermite_loewner(pts, (CVector(1) << 0.5).finished(),
                                                      (CVector(1) << -0.1).finished());
  CHECK(std::abs(rom.Er(0, 0) - 0.1) < 1e-15);
  CHECK(std::abs(rom.Ar(0, 0) - (-0.3)) < 1e-15);
  CHECK(rom.br(0) == Complex(0.5));
  CHECK(rom.cr(0) == Complex(0.5));
  CHECK(rel_err(rom.transfer(2.0), Complex(0.5)) < 1e-15);
}

TEST_CASE("Loewner entries follow the divided differences")
{
  const DiscreteLTI sys = random_stable_system(6, 0.8, 2);
  const CVector pts = (CVector(3) << 1.5, Complex(0.3, 1.2), -2.0).finished();
  const Samples s = sample(sys, pts);
  const HermiteLoewnerROM rom = build(s);
  for (Index i = 0; i < 3; i++)
  {
    for (Index j = 0; j < 3; j++)
    {
      Complex L, M;
      if (i == j)
      {
        L = -s.derivatives(i);
        M = -(s.values(i) + pts(i) * s.derivatives(i));
      }
      else
      {
        L = -(s.values(i) - s.values(j)) / (pts(i) - pts(j));
        M = -(pts(i) * s.values(i) - pts(j) * s.values(j)) / (pts(i) - pts(j));
      }
      CHECK(std::abs(rom.Er(i, j) - L) <= 1e-14 * std::abs(L));
      CHECK(std::abs(rom.Ar(i, j) - M) <= 1e-14 * std::abs(M));
    }
  }
}

TEST_CASE("Hermite interpolation holds at every point of a larger set")
{
  const DiscreteLTI sys = random_stable_system(30, 0.9, 4);
  CVector pts(8);
  for (Index k = 0; k < 4; k++)
  {
    const Complex p = std::polar(1.1 + 0.2 * static_cast<double>(k), 0.3 + 0.6 * static_cast<double>(k));
    pts(2 * k) = p;
    pts(2 * k + 1) = std::conj(p);
  }
  const Samples s = sample(sys, pts);
  const HermiteLoewnerROM rom = build(s);
  for (Index i = 0; i < pts.size(); i++)
  {
    CHECK(rel_err(rom.transfer(pts(i)), s.values(i)) < 1e-8);
    CHECK(rel_err(rom.derivative(pts(i)), s.derivatives(i)) < 1e-8);
  }
  // Conjugate data gives a conjugate-closed spectrum.
  const CVector p = rom_poles(rom);
  CHECK(set_distance(p, p.conjugate()) < 1e-8 * p.cwiseAbs().maxCoeff());
}

TEST_CASE("order-matching data is reproduced exactly")
{
  // Order 4 with r = 4 interpolation points.
  const DiscreteLTI sys = random_stable_system(4, 0.8, 5);
  const CVector pts = (CVector(4) << Complex(1.2, 0.5), Complex(1.2, -0.5), 2.0, Complex(-1.5, 0.0)).finished();
  const HermiteLoewnerROM rom = build(sample(sys, pts));
  for (Complex z : test_points(50, 3))
  {
    CHECK(rel_err(rom.transfer(z), transfer_value(sys, z)) < 1e-6);
  }
}

TEST_CASE("repeated points are rejected")
{
  const CVector pts = (CVector(2) << 2.0, 2.0 + 1e-12).finished();
  CHECK_THROWS_WITH_AS(build_hermite_loewner(pts, CVector::Ones(2), CVector::Ones(2)),
                       doctest::Contains("repeated interpolation points"), Error);
  CHECK_THROWS_AS(build_hermite_loewner(pts, CVector::Ones(1), CVector::Ones(2)), Error);
  CHECK_THROWS_AS(build_hermite_loewner(CVector(0), CVector(0), CVector(0)), Error);
}

TEST_CASE("exactly singular pencil is rejected")
{
  // H = 0 at two points: L = M = 0.
  const CVector pts = (CVector(2) << 2.0, 3.0).finished();
  CHECK_THROWS_WITH_AS(build_hermite_loewner(pts, CVector::Zero(2), CVector::Zero(2)),
                       doctest::Contains("interpolation pencil singular"), Error);
}

TEST_CASE("realify: one conjugate pair")
{
  const DiscreteLTI sys = random_stable_system(5, 0.8, 9);
  const Complex p(1.1, 0.7);
  const CVector pts = (CVector(2) << p, std::conj(p)).finished();
  const HermiteLoewnerROM rom = build(sample(sys, pts));
  const HermiteLoewnerROM real = realify(rom);
  CHECK(real.is_real);
  CHECK(real.Er.imag().cwiseAbs().maxCoeff() == 0.0);
  CHECK(real.Ar.imag().cwiseAbs().maxCoeff() == 0.0);
  CHECK(real.br.imag().cwiseAbs().maxCoeff() == 0.0);
  CHECK(real.cr.imag().cwiseAbs().maxCoeff() == 0.0);
  CHECK(rel_err(real.transfer(1.7), rom.transfer(1.7)) < 1e-10);
  for (Complex z : test_points(20, 4))
  {
    CHECK(rel_err(real.transfer(z), rom.transfer(z)) < 1e-10);
  }
  const DiscreteLTI as_sys = real.as_real_system();
  CHECK(rel_err(transfer_value(as_sys, 1.7), rom.transfer(1.7)) < 1e-10);
  CHECK_THROWS_AS(rom.as_real_system(), Error);
}

TEST_CASE("realify: all-real points are an identity transform")
{
  const DiscreteLTI sys = random_stable_system(5, 0.8, 10);
  const CVector pts = (CVector(3) << 1.5, -2.0, 3.0).finished();
  const HermiteLoewnerROM rom = build(sample(sys, pts));
  const HermiteLoewnerROM real = realify(rom);
  CHECK(real.is_real);
  for (Index i = 0; i < 3; i++)
  {
    const Index j = std::find(real.points.begin(), real.points.end(), pts(i)) - real.points.begin();
    REQUIRE(j < 3);
    CHECK(std::abs(real.br(j) - rom.br(i)) == 0.0);
  }
  for (Complex z : test_points(20, 5))
  {
    CHECK(rel_err(real.transfer(z), rom.transfer(z)) < 1e-10);
  }
}

TEST_CASE("realify: real point plus a conjugate pair")
{
  const DiscreteLTI sys = random_stable_system(7, 0.8, 11);
  const Complex p(0.4, 1.3);
  const CVector pts = (CVector(3) << std::conj(p), 1.6, p).finished();
  const HermiteLoewnerROM rom = build(sample(sys, pts));
  const HermiteLoewnerROM real = realify(rom);
  CHECK(real.is_real);
  CHECK(real.points(0) == Complex(1.6));
  CHECK(real.points(1) == p);
  CHECK(real.points(2) == std::conj(p));
  for (Complex z : test_points(20, 6))
  {
    CHECK(rel_err(real.transfer(z), rom.transfer(z)) < 1e-10);
  }
}

TEST_CASE("realify rejects data that is not conjugate-closed")
{
  const DiscreteLTI sys = random_stable_system(5, 0.8, 12);
  const CVector pts = (CVector(2) << Complex(1.1, 0.7), Complex(1.1, -0.6)).finished();
  CHECK_THROWS_AS(realify(build(sample(sys, pts))), Error);

  // Conjugate points but non-conjugate data.
  Samples s = sample(sys, (CVector(2) << Complex(1.1, 0.7), Complex(1.1, -0.7)).finished());
  s.values(1) *= Complex(1.0, 0.1);
  CHECK_THROWS_AS(realify(build(s)), Error);
}

TEST_CASE("rom_poles of exact order-matching data")
{
  const HermiteLoewnerROM one =
    build(sample(scalar_system(0.5), (CVector(1) << 2.0).finished()));
  const CVector p1 = rom_poles(one);
  REQUIRE(p1.size() == 1);
  CHECK(std::abs(p1(0) - 0.5) < 1e-10);

  const DiscreteLTI diag = DiscreteLTI::standard((Matrix(2, 2) << 0.5, 0, 0, -0.3).finished(),
                                                 (Vector(2) << 1.0, 2.0).finished(),
                                                 (Vector(2) << 1.0, -0.5).finished());
  const HermiteLoewnerROM two = realify(build(sample(diag, (CVector(2) << 1.5, 2.5).finished())));
  const CVector p2 = sorted(rom_poles(two));
  CHECK(std::abs(p2(0) - (-0.3)) < 1e-10);
  CHECK(std::abs(p2(1) - 0.5) < 1e-10);
}

TEST_CASE("pencil scaling leaves poles unchanged")
{
  const DiscreteLTI sys = random_stable_system(6, 0.8, 13);
  const CVector pts = (CVector(4) << Complex(1.2, 0.4), Complex(1.2, -0.4), 1.8, -1.4).finished();
  const HermiteLoewnerROM rom = build(sample(sys, pts));
  HermiteLoewnerROM scaled = rom;
  scaled.Er *= 3.0;
  scaled.Ar *= 3.0;
  const CVector a = rom_poles(rom);
  const double scale = a.cwiseAbs().maxCoeff();
  CHECK(set_distance(a, rom_poles(scaled)) < 1e-10 * scale);
  CHECK(set_distance(a, rom_poles(realify(rom))) < 1e-10 * scale);
}

TEST_CASE("generalized eigenvalues with a singular E and a shared null direction")
{
  const Matrix A = (Matrix(2, 2) << 1.0, 0.0, 0.0, 2.0).finished();
  const Matrix E = (Matrix(2, 2) << 1.0, 0.0, 0.0, 0.0).finished();
  CVector ev = generalized_eigenvalues(A, E);
  std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
  CHECK(std::abs(ev(0) - 1.0) < 1e-14);
  CHECK(std::isinf(std::abs(ev(1))));

  const Matrix Z = (Matrix(2, 2) << 1.0, 0.0, 0.0, 0.0).finished();
  HermiteLoewnerROM rom;
  rom.Er = Z.cast<Complex>();
  rom.Ar = Z.cast<Complex>();
  rom.br = CVector::Ones(2);
  rom.cr = CVector::Ones(2);
  rom.is_real = true;
  CHECK_THROWS_WITH_AS(rom_poles(rom), doctest::Contains("singular pencil"), Error);
}

TEST_CASE("complex generalized eigenvalues")
{
  CMatrix A(2, 2), E(2, 2);
  A << Complex(1.0, 1.0), 0.0, 0.0, Complex(0.0, -2.0);
  E << 1.0, 0.0, 0.0, 2.0;
  CVector ev = generalized_eigenvalues(A, E);
  std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) { return a.real() > b.real(); });
  CHECK(std::abs(ev(0) - Complex(1.0, 1.0)) < 1e-14);
  CHECK(std::abs(ev(1) - Complex(0.0, -1.0)) < 1e-14);
}

TEST_CASE("clustered points: ill-conditioned pencil still interpolates")
{
  // Pairs at arguments 0.005 .. 0.63 on radius 1.1; the pencil is singular to working
  // precision at every point, yet the structured solve reproduces the data.
  CVector pts(8);
  for (Index j = 0; j < 4; j++)
  {
    const double w = std::exp(std::log(1e-3) + (j + 1) / 5.0 * (std::log(std::numbers::pi) - std::log(1e-3)));
    pts(2 * j) = std::polar(1.1, w);
    pts(2 * j + 1) = std::polar(1.1, -w);
  }
  const Samples s = sample(random_stable_system(20, 0.9, 7), pts);
  const HermiteLoewnerROM rom = build(s);
  CHECK(rom.pencil_min_singular < 1e-14);
  for (Index i = 0; i < pts.size(); i++)
  {
    CHECK(rel_err(rom.transfer(pts(i)), s.values(i)) < 1e-6);
    CHECK(rel_err(rom.derivative(pts(i)), s.derivatives(i)) < 1e-6);
  }
}
