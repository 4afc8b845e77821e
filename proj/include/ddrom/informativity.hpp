#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "ddrom/lti.hpp"

namespace ddrom
{

/// Positive real stored as mantissa * 10^exponent with mantissa in [1, 10); covers
/// norms like |sigma|^nhat far beyond the double range.
struct ScaledReal
{
  double mantissa = 0.0;
  long exponent = 0;

  static ScaledReal from_log10(double log10_value);
  static ScaledReal from_double(double value);
  // value * 10^pow10 for finite value > 0.
  static ScaledReal from_parts(double value, long pow10);
  double log10() const;
  // Overflows to +inf when out of range.
  double to_double() const;
  bool representable() const;
};

/// Entry (i, j) = V[i + j]; shape (depth+1) x (T-depth+1) for V of length T+1.
Matrix hankel(const Vector &V, Index depth);

/// gamma = [1, s, ..., s^nhat], gamma1 = [0, 1, 2s, ..., nhat s^(nhat-1)] as unit
/// directions plus norms. For |s| > 1 the directions are built from the reversed
/// powers s^(k-nhat), whose magnitudes never exceed 1.
struct GammaVectors
{
  CVector gamma_dir;
  CVector gamma1_dir;
  ScaledReal gamma_norm;
  ScaledReal gamma1_norm;
  // |gamma1| / |gamma| computed from the directions' raw norms, finite even when both
  // norms overflow.
  double norm_ratio = 0.0;

  Index nhat() const { return gamma_dir.size() - 1; }
};

GammaVectors gamma_vectors(Complex sigma, Index nhat);

/// Plain powers in double precision; entries may overflow to inf.
CVector gamma_raw(Complex sigma, Index nhat);
CVector gamma1_raw(Complex sigma, Index nhat);

enum class OverflowPolicy
{
  Scaled,    // both sides of the solve scaled by 1/|gamma|, norm kept in ScaledReal
  HalveNhat  // only z normalized; when |sigma|^nhat overflows, retry with nhat/2
};

enum class SolveMethod
{
  Projection,  // structured QR of [U zhat] = [U q] [[I, U^H zhat], [0, |v|]]
  DenseQR      // Householder QR of the assembled [U zhat]; serial reference
};

struct RecoveryOptions
{
  // Absolute tolerance for the numerical rank of G; <= 0 selects
  // max(rows, cols) * eps * sigma_max(G).
  double rank_tolerance = 0.0;
  // Relative residual |r| / |rhs| above which an existence condition fails.
  double existence_tolerance = 1e-6;
  // Relative residual above which a sample carries the residual warning.
  double residual_warning = 1e-9;
  OverflowPolicy overflow_policy = OverflowPolicy::Scaled;
  Index min_nhat = 1;
  SolveMethod method = SolveMethod::Projection;
  // When false, recoveries return the least-squares solution with the failed flags
  // recorded instead of throwing. Sweeps use this to chart degraded regimes.
  bool enforce_informativity = true;
};

/// Stacked Hankel matrix G = [H_nhat(U); H_nhat(Y)] and an orthonormal basis of its
/// numerical range (left singular vectors above the rank tolerance). Immutable.
class InformativityWorkspace
{
public:
  InformativityWorkspace(std::shared_ptr<const TimeSeriesData> data, Index nhat,
                         double rank_tolerance = 0.0);
  InformativityWorkspace(const TimeSeriesData &data, Index nhat, double rank_tolerance = 0.0);

  const Matrix &G() const { return G_; }
  const Matrix &basis() const { return basis_; }
  const Vector &singular_values() const { return singular_values_; }
  Index rank() const { return basis_.cols(); }
  Index nhat() const { return nhat_; }
  double rank_tolerance() const { return rank_tolerance_; }
  // rank_tolerance / sigma_max, the same threshold for unit-norm columns.
  double relative_rank_tolerance() const { return relative_rank_tolerance_; }
  const std::shared_ptr<const TimeSeriesData> &data() const { return data_; }

private:
  std::shared_ptr<const TimeSeriesData> data_;
  Index nhat_;
  Matrix G_;
  Matrix basis_;
  Vector singular_values_;
  double rank_tolerance_;
  double relative_rank_tolerance_;
};

/// Solution of [Q z][xi; m] = rhs in the least-squares sense for orthonormal Q.
struct AppendedSolve
{
  Complex coefficient;  // m
  double residual = 0.0;
  double v_norm = 0.0;   // |(I - QQ^H) z|
  double xi_norm = 0.0;  // |Q^H rhs|, the Q block of the solve against [Q v]
};

AppendedSolve solve_appended(const Matrix &Q, const CVector &z, const CVector &rhs,
                             SolveMethod method);

struct InformativityFlags
{
  bool existence = false;
  bool unique = false;
  bool hermite = false;
  bool interpolation() const { return existence && unique; }
  bool hermite_informative() const { return interpolation() && hermite; }
};

struct FrequencySample
{
  Complex sigma;
  Complex M0;
  Complex M1;
  bool has_derivative = false;
  double residual0 = 0.0;  // relative to |rhs|
  double residual1 = 0.0;
  double kappa = 0.0;      // kappa([U zhat])
  double alpha = 0.0;      // sine of angle between z(sigma) and Range(U)
  // |U^H b1| / |gamma|: coefficient block of the Hermite solve against [U v].
  double xi1_norm = 0.0;
  Index nhat_used = 0;
  InformativityFlags informativity;
  bool residual_warning = false;
};

/// Evaluates the three rank conditions. Hermite existence is assessed with the value
/// recovered at sigma, since b1(sigma) embeds M0.
InformativityFlags check_informativity(const InformativityWorkspace &ws, Complex sigma,
                                       const RecoveryOptions &opts = {});

/// Recovers M0 ~ H(sigma). Under OverflowPolicy::HalveNhat a workspace at reduced depth
/// is rebuilt from ws.data() whenever |sigma|^nhat is not representable.
FrequencySample recover_value(const InformativityWorkspace &ws, Complex sigma,
                              const RecoveryOptions &opts = {});

/// Fills M1 ~ H'(sigma) on a sample produced by recover_value against the same
/// workspace (or the reduced-depth workspace that produced it).
FrequencySample recover_derivative(const InformativityWorkspace &ws,
                                   const FrequencySample &sample,
                                   const RecoveryOptions &opts = {});

/// |M0(nhat) - M0(2 nhat)| / max(|M0(2 nhat)|, eps). Returns +inf when either recovery
/// is not informative.
double consistency_indicator(const TimeSeriesData &data, Complex sigma, Index nhat,
                             const RecoveryOptions &opts = {});

/// One trajectory, one primary workspace, and lazily built reduced-depth workspaces
/// for the halving fallback. Recoveries are independent and thread-safe.
class FrequencyRecovery
{
public:
  FrequencyRecovery(TimeSeriesData data, Index nhat, RecoveryOptions opts = {});

  FrequencySample recover(Complex sigma, bool with_derivative) const;
  std::vector<FrequencySample> recover_batch(std::span<const Complex> sigmas,
                                             bool with_derivative,
                                             Execution exec = Execution::Parallel) const;

  const InformativityWorkspace &workspace() const { return *primary_; }
  const RecoveryOptions &options() const { return opts_; }
  const TimeSeriesData &data() const { return *data_; }
  // Workspace of depth nhat over the same data, built on first use.
  std::shared_ptr<const InformativityWorkspace> workspace_at(Index nhat) const;

private:
  std::shared_ptr<const TimeSeriesData> data_;
  RecoveryOptions opts_;
  std::shared_ptr<const InformativityWorkspace> primary_;
  mutable std::mutex cache_mutex_;
  mutable std::map<Index, std::shared_ptr<const InformativityWorkspace>> cache_;
};

}  // namespace ddrom
