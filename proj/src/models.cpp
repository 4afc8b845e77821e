#include "ddrom/models.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/QR>

namespace ddrom
{

DiscreteLTI random_stable_system(Index n, double spectral_radius_bound, std::uint64_t seed,
                                 double min_fraction)
{
  if (n < 1)
  {
    throw Error("system order must be positive");
  }
  if (!(min_fraction >= 0.0 && min_fraction <= 1.0))
  {
    throw Error("min_fraction must lie in [0, 1]");
  }
  if (!(spectral_radius_bound > 0.0 && spectral_radius_bound < 1.0))
  {
    throw Error("spectral radius bound must lie in (0, 1)");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Matrix D = Matrix::Zero(n, n);
  Index k = 0;
  for (; k + 1 < n; k += 2)
  {
    const double radius =
      spectral_radius_bound * (min_fraction + (1.0 - min_fraction) * uniform(rng));
    const double angle = std::numbers::pi * uniform(rng);
    const double re = radius * std::cos(angle);
    const double im = radius * std::sin(angle);
    D(k, k) = re;
    D(k, k + 1) = im;
    D(k + 1, k) = -im;
    D(k + 1, k + 1) = re;
  }
  if (k < n)
  {
    const double radius =
      spectral_radius_bound * (min_fraction + (1.0 - min_fraction) * uniform(rng));
    D(k, k) = uniform(rng) < 0.5 ? radius : -radius;
  }

  Matrix G(n, n);
  for (Index j = 0; j < n; j++)
  {
    for (Index i = 0; i < n; i++)
    {
      G(i, j) = gauss(rng);
    }
  }
  Eigen::HouseholderQR<Matrix> qr(G);
  const Matrix Q = qr.householderQ();

  Vector b(n), c(n);
  for (Index i = 0; i < n; i++)
  {
    b(i) = gauss(rng);
  }
  for (Index i = 0; i < n; i++)
  {
    c(i) = gauss(rng);
  }
  DiscreteLTI sys = DiscreteLTI::standard(Q * D * Q.transpose(), std::move(b), std::move(c));
  sys.flagged_stable = true;
  return sys;
}

ContinuousLTI advection_fd_continuous(Index n, double velocity)
{
  if (n < 2)
  {
    throw Error("advection model needs at least two cells");
  }
  if (!(velocity > 0.0))
  {
    throw Error("transport velocity must be positive");
  }
  const double rate = velocity * static_cast<double>(n);  // a / dx
  ContinuousLTI sys;
  sys.E = Matrix::Identity(n, n);
  sys.A = Matrix::Zero(n, n);
  for (Index i = 0; i < n; i++)
  {
    sys.A(i, i) = -rate;
    if (i > 0)
    {
      sys.A(i, i - 1) = rate;
    }
  }
  sys.b = Vector::Zero(n);
  sys.b(0) = rate;
  sys.c = Vector::Zero(n);
  sys.c(n - 1) = 1.0;
  sys.flagged_stable = true;
  return sys;
}

DiscreteLTI advection_fd_model(Index n, double velocity, double fs)
{
  if (!(fs > 0.0))
  {
    throw Error("sampling frequency must be positive");
  }
  const double courant = velocity * static_cast<double>(n) / fs;
  if (courant > 2.0)
  {
    throw Error("Courant number a*n/fs = " + std::to_string(courant) +
                " exceeds 2; raise the sampling frequency");
  }
  return zoh_discretize(advection_fd_continuous(n, velocity), fs);
}

ContinuousLTI heat_fd_continuous(Index n, const HeatParameters &p)
{
  if (n < 3)
  {
    throw Error("heat model needs at least three nodes");
  }
  if (!(p.heat_capacity > 0.0 && p.density > 0.0 && p.conductivity > 0.0))
  {
    throw Error("physical constants must be positive");
  }
  if (!(p.output_x > 0.0 && p.output_x < 1.0))
  {
    throw Error("output location must lie in (0, 1)");
  }
  const double h = 1.0 / static_cast<double>(n);
  const double mass = p.heat_capacity * p.density;
  const double stiffness = p.conductivity / (h * h);

  ContinuousLTI sys;
  sys.E = Matrix::Identity(n, n) * mass;
  sys.E(n - 1, n - 1) = 0.5 * mass;
  sys.A = Matrix::Zero(n, n);
  for (Index i = 0; i < n; i++)
  {
    sys.A(i, i) = -2.0 * stiffness;
    if (i > 0)
    {
      sys.A(i, i - 1) = stiffness;
    }
    if (i + 1 < n)
    {
      sys.A(i, i + 1) = stiffness;
    }
  }
  sys.A(n - 1, n - 1) = -stiffness;
  sys.b = Vector::Zero(n);
  sys.b(n - 1) = 1.0 / h;

  // Linear interpolation between the nodes bracketing output_x (node i sits at i*h,
  // storage index i-1; x = 0 is the Dirichlet boundary).
  sys.c = Vector::Zero(n);
  const double pos = p.output_x / h;
  const auto left = static_cast<Index>(std::floor(pos + 1e-12));
  const double w = std::max(0.0, pos - static_cast<double>(left));
  if (left >= 1)
  {
    sys.c(left - 1) += 1.0 - w;
  }
  if (w > 1e-12 && left + 1 <= n)
  {
    sys.c(left) += w;
  }
  sys.flagged_stable = true;
  return sys;
}

DiscreteLTI heat_fd_model(Index n, const HeatParameters &params, double fs)
{
  return zoh_discretize(heat_fd_continuous(n, params), fs);
}

}  // namespace ddrom
