#pragma once

#include <optional>
#include <utility>

#include <Eigen/LU>

#include "ddrom/types.hpp"

namespace ddrom
{

/// SISO descriptor system E x[k+1] = A x[k] + b u[k], y[k] = c^T x[k].
///
/// The output is read at the same index as the state (y[k] = c^T x[k]); the transfer
/// function c^T (zE - A)^{-1} b does not depend on this choice.
struct DiscreteLTI
{
  Matrix E;
  Matrix A;
  Vector b;
  Vector c;
  bool flagged_stable = false;

  static DiscreteLTI standard(Matrix A, Vector b, Vector c);

  Index order() const { return A.rows(); }

  // Throws Error on inconsistent shapes, SingularMatrixError when E is numerically
  // singular (sigma_min <= n * eps * sigma_max, estimated through the LU reciprocal
  // condition number).
  void validate() const;
};

/// Continuous-time counterpart E x' = A x + b u, y = c^T x.
struct ContinuousLTI
{
  Matrix E;
  Matrix A;
  Vector b;
  Vector c;
  bool flagged_stable = false;

  Index order() const { return A.rows(); }
  void validate() const;
};

struct SimulationState
{
  Vector x;
  Index k = 0;
};

/// Paired input/output trajectories u[0..T], y[0..T].
struct TimeSeriesData
{
  Vector U;
  Vector Y;

  Index final_time() const { return U.size() - 1; }
  void validate() const;
};

/// Step-by-step simulator holding a factorization of E.
class Simulator
{
public:
  explicit Simulator(const DiscreteLTI &sys);
  Simulator(const DiscreteLTI &sys, Vector x0);

  // Returns y[k] for the current state, then advances with input u[k].
  double step(double u);
  const SimulationState &state() const { return state_; }

private:
  Matrix A_;
  Vector b_;
  Vector c_;
  bool identity_E_;
  Eigen::PartialPivLU<Matrix> lu_E_;
  SimulationState state_;
};

TimeSeriesData simulate(const DiscreteLTI &sys, const Vector &U, const Vector &x0);
TimeSeriesData simulate(const DiscreteLTI &sys, const Vector &U);

/// Dense reference evaluation of c^T (zE - A)^{-1} b. O(n^3) per call.
Complex transfer_value(const DiscreteLTI &sys, Complex z);
/// -c^T (zE - A)^{-1} E (zE - A)^{-1} b.
Complex transfer_derivative(const DiscreteLTI &sys, Complex z);

/// Fast transfer evaluation: E^{-1}A is reduced once to upper Hessenberg form, after
/// which each value/derivative costs O(n^2). Thread-safe.
class TransferEvaluator
{
public:
  explicit TransferEvaluator(const DiscreteLTI &sys);

  Complex value(Complex z) const;
  Complex derivative(Complex z) const;
  std::pair<Complex, Complex> value_and_derivative(Complex z) const;
  Index order() const { return H_.rows(); }

private:
  Matrix H_;  // Q^T E^{-1} A Q, upper Hessenberg
  Vector b_;  // Q^T E^{-1} b
  Vector c_;  // Q^T c
};

/// Generalized eigenvalues of the pencil (A, E).
CVector poles(const DiscreteLTI &sys);
double spectral_radius(const DiscreteLTI &sys);
bool is_stable(const DiscreteLTI &sys);

CVector poles(const ContinuousLTI &sys);

/// Zero-order-hold discretization with sampling frequency fs (Hz). Returns E_d = I,
/// A_d = exp(E^{-1}A h), b_d = (int_0^h exp(E^{-1}A s) ds) E^{-1} b, c unchanged.
DiscreteLTI zoh_discretize(const ContinuousLTI &csys, double fs);

}  // namespace ddrom
