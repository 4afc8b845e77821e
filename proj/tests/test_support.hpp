#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "ddrom/lti.hpp"

namespace ddrom::test
{

inline double rel_err(Complex got, Complex want)
{
  return std::abs(got - want) / std::abs(want);
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// E = 1, A = a, b = c = 1: H(z) = 1 / (z - a).
inline DiscreteLTI scalar_system(double a, double b = 1.0, double c = 1.0, double e = 1.0)
{
  DiscreteLTI sys;
  sys.E = Matrix::Constant(1, 1, e);
  sys.A = Matrix::Constant(1, 1, a);
  sys.b = Vector::Constant(1, b);
  sys.c = Vector::Constant(1, c);
  return sys;
}

inline Vector gaussian(Index length, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(length);
  for (Index k = 0; k < length; k++)
  {
    v(k) = g(rng);
  }
  return v;
}

inline Matrix random_orthonormal(Index m, Index n, std::mt19937_64 &rng)
{
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix X(m, n);
  for (Index j = 0; j < n; j++)
  {
    for (Index i = 0; i < m; i++)
    {
      X(i, j) = g(rng);
    }
  }
  Eigen::HouseholderQR<Matrix> qr(X);
  return qr.householderQ() * Matrix::Identity(m, n);
}

inline CVector random_complex(Index m, std::mt19937_64 &rng)
{
  std::normal_distribution<double> g(0.0, 1.0);
  CVector z(m);
  for (Index i = 0; i < m; i++)
  {
    z(i) = Complex(g(rng), g(rng));
  }
  return z;
}

}  // namespace ddrom::test
