#include <doctest.h>

#include "ddrom/models.hpp"
#include "test_support.hpp"

using namespace ddrom;

TEST_CASE("random_stable_system respects the radius bound")
{
  const DiscreteLTI small = random_stable_system(2, 0.9, 7);
  CHECK(spectral_radius(small) <= 0.9 + 1e-14);
  CHECK(small.E.isIdentity());

  const DiscreteLTI big = random_stable_system(100, 0.999, 7);
  CHECK(is_stable(big));
  CHECK(spectral_radius(big) <= 0.999 + 1e-12);

  const DiscreteLTI odd = random_stable_system(7, 0.5, 3);
  const CVector p = poles(odd);
  for (Index i = 0; i < p.size(); i++)
  {
    CHECK(std::abs(p(i)) <= 0.5 + 1e-14);
    CHECK(std::abs(p(i)) >= 0.2 * 0.5 - 1e-14);
  }
}

TEST_CASE("random_stable_system is deterministic per seed")
{
  const DiscreteLTI a = random_stable_system(9, 0.8, 123);
  const DiscreteLTI b = random_stable_system(9, 0.8, 123);
  const DiscreteLTI c = random_stable_system(9, 0.8, 124);
  CHECK(a.A == b.A);
  CHECK(a.b == b.b);
  CHECK(a.c == b.c);
  CHECK(a.A != c.A);
}

TEST_CASE("min_fraction confines the eigenvalue moduli")
{
  const CVector p = poles(random_stable_system(20, 0.99, 1, 0.9));
  for (Index i = 0; i < p.size(); i++)
  {
    CHECK(std::abs(p(i)) >= 0.9 * 0.99 - 1e-12);
    CHECK(std::abs(p(i)) <= 0.99 + 1e-12);
  }
}

TEST_CASE("random_stable_system rejects invalid bounds")
{
  CHECK_THROWS_AS(random_stable_system(4, 1.0, 1), Error);
  CHECK_THROWS_AS(random_stable_system(4, 0.0, 1), Error);
  CHECK_THROWS_AS(random_stable_system(0, 0.5, 1), Error);
}

TEST_CASE("advection model passes constants and is stable")
{
  const DiscreteLTI sys = advection_fd_model(10, 20.0, 1e4);
  CHECK(is_stable(sys));
  CHECK(std::abs(transfer_value(sys, 1.0) - 1.0) < 1e-6);
  CHECK(sys.order() == 10);
}

TEST_CASE("advection model preconditions")
{
  CHECK_THROWS_AS(advection_fd_model(10, 0.0, 1e4), Error);
  CHECK_THROWS_AS(advection_fd_model(1, 20.0, 1e4), Error);
  // Courant number a n / fs above 2.
  CHECK_THROWS_AS(advection_fd_model(200, 20.0, 1000.0), Error);
}

TEST_CASE("heat model: real negative spectrum and stable discretization")
{
  const HeatParameters hp;
  CHECK(hp.heat_capacity == 0.896);
  CHECK(hp.density == 2700.0);
  CHECK(hp.conductivity == 167.0);
  CHECK(hp.output_x == 0.8);

  const ContinuousLTI c = heat_fd_continuous(40, hp);
  const CVector p = poles(c);
  for (Index i = 0; i < p.size(); i++)
  {
    CHECK(std::abs(p(i).imag()) < 1e-9 * std::abs(p(i)));
    CHECK(p(i).real() < 0.0);
  }
  const DiscreteLTI d = heat_fd_model(40, hp, 1e3);
  CHECK(is_stable(d));
  const TimeSeriesData z = simulate(d, Vector::Zero(100));
  CHECK(z.Y.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("heat model DC gain equals the steady conduction profile")
{
  // Steady state of K0 T'' = 0, T(0) = 0, K0 T'(1) = u: T(x) = x u / K0.
  const HeatParameters hp;
  const DiscreteLTI d = heat_fd_model(50, hp, 1e3);
  CHECK(ddrom::test::rel_err(transfer_value(d, 1.0).real(), 0.8 / hp.conductivity) < 1e-8);
}

TEST_CASE("heat model preconditions")
{
  HeatParameters hp;
  CHECK_THROWS_AS(heat_fd_model(2, hp, 1e3), Error);
  hp.conductivity = -1.0;
  CHECK_THROWS_AS(heat_fd_model(10, hp, 1e3), Error);
  hp = HeatParameters{};
  hp.output_x = 1.0;
  CHECK_THROWS_AS(heat_fd_model(10, hp, 1e3), Error);
}
