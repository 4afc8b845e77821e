#pragma once

#include <functional>
#include <vector>

#include "ddrom/informativity.hpp"
#include "ddrom/loewner.hpp"

namespace ddrom
{

/// Value and derivative of a transfer function; both callable concurrently.
struct TransferOracle
{
  std::function<Complex(Complex)> value;
  std::function<Complex(Complex)> derivative;
};

/// Oracle backed by a shared TransferEvaluator.
TransferOracle make_oracle(const DiscreteLTI &sys);

struct IrkaConfig
{
  Index r = 2;
  Index max_iterations = 100;
  double convergence_tol = 1e-6;
  // Empty selects default_initial_points(r, init_radius).
  CVector initial_points;
  double init_radius = 1.05;
  // Reflect poles with |lambda| >= 1 into the disk before inverting them.
  bool stabilization = true;
  // Working order for the data-driven driver.
  Index nhat = 0;
  OverflowPolicy overflow_policy = OverflowPolicy::Scaled;
  RecoveryOptions recovery;
  Execution exec = Execution::Parallel;
};

struct IterationDiagnostics
{
  double max_move = 0.0;
  double max_residual = 0.0;
  double max_kappa = 0.0;
  std::vector<Index> nhat_used;
};

struct IrkaReport
{
  bool converged = false;
  Index iterations = 0;
  CVector final_points;
  std::vector<CVector> point_history;  // iterations + 1 entries
  std::vector<IterationDiagnostics> diagnostics;  // one per iteration
  HermiteLoewnerROM rom;  // realified, interpolating at final_points
  CVector rom_poles;
  // max over final poles of the relative value/derivative mismatch at 1/lambda_i;
  // inf when some final pole is not strictly stable.
  double optimality_defect = 0.0;
};

/// Hermite data at a set of points; index i of the result belongs to points[i].
using HermiteSampler = std::function<std::vector<FrequencySample>(const CVector &points)>;

IrkaReport tf_irka(const TransferOracle &oracle, const IrkaConfig &config);
IrkaReport td_irka(const TimeSeriesData &data, const IrkaConfig &config);
/// Reuses the workspaces of recovery across calls (one trajectory, many r).
IrkaReport td_irka(const FrequencyRecovery &recovery, const IrkaConfig &config);
/// Generic driver: the two variants differ only in the sampler.
IrkaReport irka(const HermiteSampler &sampler, const IrkaConfig &config);

/// radius * exp(+-i w_j), w_j log-spaced strictly inside (1e-3, pi); odd r adds radius.
CVector default_initial_points(Index r, double radius);

/// Pairs eigenvalues with their nearest conjugate (tolerance rel_tol * max|lambda|),
/// replaces each pair by an exact conjugate pair and snaps lone near-real values to
/// the real axis.
CVector enforce_conjugate_closure(const CVector &poles, double rel_tol = 1e-8);

/// Interpolation points 1/lambda after reflecting |lambda| >= 1 to 1/conj(lambda).
CVector stabilize_points(const CVector &poles);

/// Sort by real part, then imaginary part; conjugate pairs become adjacent.
CVector sort_points(const CVector &points);

bool is_conjugate_closed(const CVector &points, double tol = 1e-10);

}  // namespace ddrom
