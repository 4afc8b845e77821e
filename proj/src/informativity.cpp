#include "ddrom/informativity.hpp"

#include <cfloat>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "ddrom/conditioning.hpp"
#include "ddrom/parallel.hpp"

namespace ddrom
{

namespace
{

constexpr double kEps = std::numeric_limits<double>::epsilon();

using WorkspaceSource = std::function<std::shared_ptr<const InformativityWorkspace>(Index)>;

// Q^T x and Q w for real Q and complex vectors, as pairs of real products.
CVector project(const Matrix &Q, const CVector &x)
{
  CVector out(Q.cols());
  out.real() = Q.transpose() * x.real();
  out.imag() = Q.transpose() * x.imag();
  return out;
}

CVector expand(const Matrix &Q, const CVector &w)
{
  CVector out(Q.rows());
  out.real() = Q * w.real();
  out.imag() = Q * w.imag();
  return out;
}

// x - Q Q^T x with one reorthogonalization pass; coeff receives Q^T x.
CVector complement(const Matrix &Q, const CVector &x, CVector &coeff)
{
  coeff = project(Q, x);
  CVector r = x - expand(Q, coeff);
  const CVector again = project(Q, r);
  r -= expand(Q, again);
  coeff += again;
  return r;
}

CVector stack(const CVector &top, const CVector &bottom)
{
  CVector out(top.size() + bottom.size());
  out << top, bottom;
  return out;
}

std::string describe(const char *what, double value)
{
  std::ostringstream os;
  os.precision(3);
  os << what << " = " << value;
  return os.str();
}

double kappa_from_alpha(double alpha)
{
  if (!(alpha > 0.0))
  {
    return std::numeric_limits<double>::infinity();
  }
  return appended_column_analysis(1.0, std::min(alpha, 1.0)).kappa;
}

void finish_value(FrequencySample &s, const InformativityWorkspace &ws,
                  const RecoveryOptions &opts)
{
  s.kappa = kappa_from_alpha(s.alpha);
  s.informativity.unique = s.alpha > ws.relative_rank_tolerance();
  s.informativity.existence = s.residual0 <= opts.existence_tolerance;
  s.residual_warning = s.residual0 > opts.residual_warning;
  if (!opts.enforce_informativity)
  {
    return;
  }
  if (!s.informativity.unique)
  {
    throw InformativityError(RankCondition::Uniqueness, s.sigma, describe("alpha", s.alpha));
  }
  if (!s.informativity.existence)
  {
    throw InformativityError(RankCondition::Existence, s.sigma,
                             describe("relative residual", s.residual0));
  }
}

void finish_derivative(FrequencySample &s, const RecoveryOptions &opts)
{
  s.has_derivative = true;
  s.informativity.hermite = s.residual1 <= opts.existence_tolerance;
  s.residual_warning = s.residual_warning || s.residual1 > opts.residual_warning;
  if (opts.enforce_informativity && !s.informativity.hermite)
  {
    throw InformativityError(RankCondition::HermiteExistence, s.sigma,
                             describe("relative residual", s.residual1));
  }
}

// Depth at which the raw powers of sigma stay finite.
Index representable_depth(Complex sigma, Index nhat, Index min_nhat)
{
  const double limit = std::log10(DBL_MAX);
  const double lmod = std::log10(std::abs(sigma));
  Index nh = nhat;
  while (true)
  {
    const bool small = !(lmod > 0.0) || static_cast<double>(nh) * lmod < limit;
    if (small && gamma_raw(sigma, nh).allFinite() && gamma1_raw(sigma, nh).allFinite() &&
        std::isfinite(gamma_raw(sigma, nh).stableNorm()))
    {
      return nh;
    }
    if (nh / 2 < std::max<Index>(min_nhat, 1))
    {
      throw Error("overflow fallback exhausted: |sigma|^nhat is not representable above "
                  "the minimum working order");
    }
    nh /= 2;
  }
}

FrequencySample value_impl(const InformativityWorkspace &ws, Complex sigma,
                           const RecoveryOptions &opts, const WorkspaceSource &source)
{
  FrequencySample s;
  s.sigma = sigma;
  if (opts.overflow_policy == OverflowPolicy::Scaled)
  {
    const GammaVectors g = gamma_vectors(sigma, ws.nhat());
    const CVector zero = CVector::Zero(g.gamma_dir.size());
    const CVector zhat = stack(zero, -g.gamma_dir);
    const CVector bhat = stack(g.gamma_dir, zero);
    const AppendedSolve sol = solve_appended(ws.basis(), zhat, bhat, opts.method);
    s.M0 = sol.coefficient;
    s.residual0 = sol.residual;  // |bhat| = 1
    s.alpha = sol.v_norm;
    s.nhat_used = ws.nhat();
    finish_value(s, ws, opts);
    return s;
  }

  const Index nh = representable_depth(sigma, ws.nhat(), opts.min_nhat);
  std::shared_ptr<const InformativityWorkspace> held;
  const InformativityWorkspace *target = &ws;
  if (nh != ws.nhat())
  {
    held = source(nh);
    target = held.get();
  }
  const CVector gamma = gamma_raw(sigma, nh);
  const double znorm = gamma.stableNorm();
  const CVector zero = CVector::Zero(gamma.size());
  const CVector zhat = stack(zero, -gamma / znorm);
  const CVector b = stack(gamma, zero);
  const AppendedSolve sol = solve_appended(target->basis(), zhat, b, opts.method);
  s.M0 = sol.coefficient / znorm;
  s.residual0 = sol.residual / znorm;
  s.alpha = sol.v_norm;
  s.nhat_used = nh;
  finish_value(s, *target, opts);
  return s;
}

FrequencySample derivative_impl(const InformativityWorkspace &ws, const FrequencySample &in,
                                const RecoveryOptions &opts, const WorkspaceSource &source)
{
  if (opts.enforce_informativity && !in.informativity.interpolation())
  {
    throw InformativityError(in.informativity.unique ? RankCondition::Existence
                                                     : RankCondition::Uniqueness,
                             in.sigma, "value recovery was not informative");
  }
  FrequencySample s = in;
  std::shared_ptr<const InformativityWorkspace> held;
  const InformativityWorkspace *target = &ws;
  if (in.nhat_used != ws.nhat())
  {
    held = source(in.nhat_used);
    target = held.get();
  }
  const Index nh = target->nhat();

  if (opts.overflow_policy == OverflowPolicy::Scaled)
  {
    const GammaVectors g = gamma_vectors(in.sigma, nh);
    const CVector zero = CVector::Zero(g.gamma_dir.size());
    const CVector zhat = stack(zero, -g.gamma_dir);
    const CVector g1 = g.norm_ratio * g.gamma1_dir;
    const CVector b1hat = stack(g1, in.M0 * g1);
    const AppendedSolve sol = solve_appended(target->basis(), zhat, b1hat, opts.method);
    s.M1 = sol.coefficient;
    s.residual1 = sol.residual / b1hat.stableNorm();
    s.xi1_norm = sol.xi_norm;
  }
  else
  {
    const CVector gamma = gamma_raw(in.sigma, nh);
    const CVector gamma1 = gamma1_raw(in.sigma, nh);
    const double znorm = gamma.stableNorm();
    const CVector zero = CVector::Zero(gamma.size());
    const CVector zhat = stack(zero, -gamma / znorm);
    const CVector b1 = stack(gamma1, in.M0 * gamma1);
    const AppendedSolve sol = solve_appended(target->basis(), zhat, b1, opts.method);
    s.M1 = sol.coefficient / znorm;
    s.residual1 = sol.residual / b1.stableNorm();
    s.xi1_norm = sol.xi_norm / znorm;
  }
  finish_derivative(s, opts);
  return s;
}

WorkspaceSource rebuild_from(const InformativityWorkspace &ws, const RecoveryOptions &opts)
{
  return [&ws, tol = opts.rank_tolerance](Index nh) {
    return std::make_shared<const InformativityWorkspace>(ws.data(), nh, tol);
  };
}

}  // namespace

ScaledReal ScaledReal::from_double(double value)
{
  if (!(value >= 0.0) || !std::isfinite(value))
  {
    throw Error("ScaledReal requires a finite nonnegative value");
  }
  if (value == 0.0)
  {
    return {};
  }
  ScaledReal r;
  r.exponent = static_cast<long>(std::floor(std::log10(value)));
  r.mantissa = value / std::pow(10.0, static_cast<double>(r.exponent));
  // Subnormal powers of ten or rounding in log10 can leave the mantissa just outside [1, 10).
  if (!std::isfinite(r.mantissa))
  {
    r.mantissa = value * 1e300 / std::pow(10.0, static_cast<double>(r.exponent) + 300.0);
  }
  if (r.mantissa >= 10.0)
  {
    r.mantissa /= 10.0;
    r.exponent += 1;
  }
  else if (r.mantissa < 1.0)
  {
    r.mantissa *= 10.0;
    r.exponent -= 1;
  }
  return r;
}

ScaledReal ScaledReal::from_parts(double value, long pow10)
{
  ScaledReal r = from_double(value);
  if (r.mantissa != 0.0)
  {
    r.exponent += pow10;
  }
  return r;
}

ScaledReal ScaledReal::from_log10(double log10_value)
{
  if (!std::isfinite(log10_value))
  {
    throw Error("ScaledReal requires a finite logarithm");
  }
  ScaledReal r;
  const double e = std::floor(log10_value);
  r.exponent = static_cast<long>(e);
  r.mantissa = std::pow(10.0, log10_value - e);
  if (r.mantissa >= 10.0)
  {
    r.mantissa /= 10.0;
    r.exponent += 1;
  }
  return r;
}

double ScaledReal::log10() const
{
  if (mantissa == 0.0)
  {
    return -std::numeric_limits<double>::infinity();
  }
  return std::log10(mantissa) + static_cast<double>(exponent);
}

double ScaledReal::to_double() const
{
  if (mantissa == 0.0)
  {
    return 0.0;
  }
  if (exponent > 310)
  {
    return std::numeric_limits<double>::infinity();
  }
  return mantissa * std::pow(10.0, static_cast<double>(exponent));
}

bool ScaledReal::representable() const { return std::isfinite(to_double()); }

Matrix hankel(const Vector &V, Index depth)
{
  const Index T = V.size() - 1;
  if (T < 0)
  {
    throw Error("hankel of an empty vector");
  }
  if (depth < 0 || depth > T)
  {
    throw Error("Hankel depth " + std::to_string(depth) + " too large for T = " +
                std::to_string(T));
  }
  const Index cols = T - depth + 1;
  Matrix H(depth + 1, cols);
  for (Index j = 0; j < cols; j++)
  {
    H.col(j) = V.segment(j, depth + 1);
  }
  return H;
}

GammaVectors gamma_vectors(Complex sigma, Index nhat)
{
  if (nhat < 1)
  {
    throw Error("gamma vectors need nhat >= 1");
  }
  const double mod = std::abs(sigma);
  CVector w(nhat + 1);
  if (mod <= 1.0)
  {
    w(0) = 1.0;
    for (Index k = 1; k <= nhat; k++)
    {
      w(k) = w(k - 1) * sigma;
    }
  }
  else
  {
    // w_k = sigma^(k - nhat) = gamma_k / sigma^nhat.
    const Complex rho = 1.0 / sigma;
    w(nhat) = 1.0;
    for (Index k = nhat - 1; k >= 0; k--)
    {
      w(k) = w(k + 1) * rho;
    }
  }
  // k sigma^(k-1) carries the same scale as the powers.
  CVector w1(nhat + 1);
  w1(0) = 0.0;
  for (Index k = 1; k <= nhat; k++)
  {
    w1(k) = static_cast<double>(k) * w(k - 1);
  }
  const double nw = w.stableNorm();
  const double nw1 = w1.stableNorm();

  GammaVectors g;
  g.gamma_dir = w / nw;
  g.gamma1_dir = w1 / nw1;
  g.norm_ratio = nw1 / nw;
  if (mod <= 1.0)
  {
    g.gamma_norm = ScaledReal::from_double(nw);
    g.gamma1_norm = ScaledReal::from_double(nw1);
  }
  else
  {
    const ScaledReal base = ScaledReal::from_log10(static_cast<double>(nhat) * std::log10(mod));
    g.gamma_norm = ScaledReal::from_parts(base.mantissa * nw, base.exponent);
    g.gamma1_norm = ScaledReal::from_parts(base.mantissa * nw1, base.exponent);
  }
  return g;
}

CVector gamma_raw(Complex sigma, Index nhat)
{
  CVector g(nhat + 1);
  g(0) = 1.0;
  for (Index k = 1; k <= nhat; k++)
  {
    g(k) = g(k - 1) * sigma;
  }
  return g;
}

CVector gamma1_raw(Complex sigma, Index nhat)
{
  const CVector g = gamma_raw(sigma, nhat);
  CVector g1(nhat + 1);
  g1(0) = 0.0;
  for (Index k = 1; k <= nhat; k++)
  {
    g1(k) = static_cast<double>(k) * g(k - 1);
  }
  return g1;
}

InformativityWorkspace::InformativityWorkspace(std::shared_ptr<const TimeSeriesData> data,
                                               Index nhat, double rank_tolerance)
  : data_(std::move(data)), nhat_(nhat)
{
  if (!data_)
  {
    throw Error("workspace requires data");
  }
  data_->validate();
  if (nhat < 1)
  {
    throw Error("working order nhat must be positive");
  }
  if (nhat > data_->final_time())
  {
    throw Error("insufficient data length: nhat = " + std::to_string(nhat) +
                " exceeds T = " + std::to_string(data_->final_time()));
  }
  const Matrix HU = hankel(data_->U, nhat);
  const Matrix HY = hankel(data_->Y, nhat);
  G_.resize(HU.rows() * 2, HU.cols());
  G_ << HU, HY;

  Eigen::BDCSVD<Matrix> svd(G_, Eigen::ComputeThinU);
  singular_values_ = svd.singularValues();
  const double smax = singular_values_.size() > 0 ? singular_values_(0) : 0.0;
  const double dim = static_cast<double>(std::max(G_.rows(), G_.cols()));
  rank_tolerance_ = rank_tolerance > 0.0 ? rank_tolerance : dim * kEps * smax;
  relative_rank_tolerance_ = smax > 0.0 ? rank_tolerance_ / smax : dim * kEps;
  Index p = 0;
  while (p < singular_values_.size() && singular_values_(p) > rank_tolerance_)
  {
    p++;
  }
  basis_ = svd.matrixU().leftCols(p);
}

InformativityWorkspace::InformativityWorkspace(const TimeSeriesData &data, Index nhat,
                                               double rank_tolerance)
  : InformativityWorkspace(std::make_shared<const TimeSeriesData>(data), nhat,
                           rank_tolerance)
{
}

AppendedSolve solve_appended(const Matrix &Q, const CVector &z, const CVector &rhs,
                             SolveMethod method)
{
  if (Q.rows() != z.size() || rhs.size() != z.size())
  {
    throw Error("dimension mismatch in appended solve");
  }
  AppendedSolve out;
  if (method == SolveMethod::Projection)
  {
    CVector w, c;
    const CVector v = complement(Q, z, w);
    const CVector rperp = complement(Q, rhs, c);
    out.v_norm = v.stableNorm();
    out.xi_norm = c.stableNorm();
    if (out.v_norm > 0.0)
    {
      out.coefficient = v.dot(rperp) / (out.v_norm * out.v_norm);
    }
    out.residual = (rperp - out.coefficient * v).stableNorm();
    return out;
  }

  const Index p = Q.cols();
  CMatrix A(Q.rows(), p + 1);
  A.leftCols(p) = Q.cast<Complex>();
  A.col(p) = z;
  Eigen::HouseholderQR<CMatrix> qr(A);
  const double rpp = std::abs(qr.matrixQR()(p, p));
  out.v_norm = rpp;
  out.xi_norm = project(Q, rhs).stableNorm();
  if (rpp > 0.0)
  {
    const CVector x = qr.solve(rhs);
    out.coefficient = x(p);
    out.residual = (A * x - rhs).stableNorm();
  }
  else
  {
    out.residual = (rhs - expand(Q, project(Q, rhs))).stableNorm();
  }
  return out;
}

InformativityFlags check_informativity(const InformativityWorkspace &ws, Complex sigma,
                                       const RecoveryOptions &opts)
{
  RecoveryOptions relaxed = opts;
  relaxed.enforce_informativity = false;
  const FrequencySample s = recover_value(ws, sigma, relaxed);
  if (!s.informativity.unique)
  {
    return s.informativity;
  }
  return recover_derivative(ws, s, relaxed).informativity;
}

FrequencySample recover_value(const InformativityWorkspace &ws, Complex sigma,
                              const RecoveryOptions &opts)
{
  return value_impl(ws, sigma, opts, rebuild_from(ws, opts));
}

FrequencySample recover_derivative(const InformativityWorkspace &ws,
                                   const FrequencySample &sample, const RecoveryOptions &opts)
{
  return derivative_impl(ws, sample, opts, rebuild_from(ws, opts));
}

double consistency_indicator(const TimeSeriesData &data, Complex sigma, Index nhat,
                             const RecoveryOptions &opts)
{
  if (2 * nhat > data.final_time())
  {
    throw Error("consistency indicator needs 2 nhat <= T");
  }
  auto shared = std::make_shared<const TimeSeriesData>(data);
  RecoveryOptions relaxed = opts;
  relaxed.enforce_informativity = false;
  const InformativityWorkspace low(shared, nhat, opts.rank_tolerance);
  const InformativityWorkspace high(shared, 2 * nhat, opts.rank_tolerance);
  const FrequencySample a = recover_value(low, sigma, relaxed);
  const FrequencySample b = recover_value(high, sigma, relaxed);
  if (!a.informativity.interpolation() || !b.informativity.interpolation())
  {
    return std::numeric_limits<double>::infinity();
  }
  return std::abs(a.M0 - b.M0) / std::max(std::abs(b.M0), kEps);
}

FrequencyRecovery::FrequencyRecovery(TimeSeriesData data, Index nhat, RecoveryOptions opts)
  : data_(std::make_shared<const TimeSeriesData>(std::move(data))), opts_(opts)
{
  primary_ = std::make_shared<const InformativityWorkspace>(data_, nhat, opts_.rank_tolerance);
}

std::shared_ptr<const InformativityWorkspace> FrequencyRecovery::workspace_at(Index nhat) const
{
  if (nhat == primary_->nhat())
  {
    return primary_;
  }
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto it = cache_.find(nhat);
  if (it == cache_.end())
  {
    it = cache_
           .emplace(nhat, std::make_shared<const InformativityWorkspace>(data_, nhat,
                                                                         opts_.rank_tolerance))
           .first;
  }
  return it->second;
}

FrequencySample FrequencyRecovery::recover(Complex sigma, bool with_derivative) const
{
  const WorkspaceSource source = [this](Index nh) { return workspace_at(nh); };
  FrequencySample s = value_impl(*primary_, sigma, opts_, source);
  if (with_derivative)
  {
    s = derivative_impl(*primary_, s, opts_, source);
  }
  return s;
}

std::vector<FrequencySample> FrequencyRecovery::recover_batch(std::span<const Complex> sigmas,
                                                              bool with_derivative,
                                                              Execution exec) const
{
  std::vector<FrequencySample> out(sigmas.size());
  for_each_index(static_cast<Index>(sigmas.size()), exec,
                 [&](Index i) { out[i] = recover(sigmas[i], with_derivative); });
  return out;
}

}  // namespace ddrom
