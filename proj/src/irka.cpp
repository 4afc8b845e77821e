#include "ddrom/irka.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "ddrom/parallel.hpp"

namespace ddrom
{

namespace
{

struct HermiteData
{
  CVector values;
  CVector derivatives;
  IterationDiagnostics diag;
};

// Samples the closed upper half of a conjugate-closed point set and fills the lower
// half by conjugation, so the Loewner data is exactly conjugate-symmetric.
HermiteData sample_closed(const HermiteSampler &sampler, const CVector &points)
{
  const Index r = points.size();
  std::vector<Index> upper;
  std::vector<Index> partner(r, -1);
  for (Index i = 0; i < r; i++)
  {
    if (points(i).imag() >= 0.0)
    {
      partner[i] = static_cast<Index>(upper.size());
      upper.push_back(i);
    }
  }
  CVector up(static_cast<Index>(upper.size()));
  for (std::size_t k = 0; k < upper.size(); k++)
  {
    up(static_cast<Index>(k)) = points(upper[k]);
  }
  const std::vector<FrequencySample> samples = sampler(up);
  if (samples.size() != upper.size())
  {
    throw Error("sampler returned the wrong number of samples");
  }

  HermiteData out;
  out.values.resize(r);
  out.derivatives.resize(r);
  for (Index i = 0; i < r; i++)
  {
    if (partner[i] >= 0)
    {
      const FrequencySample &s = samples[partner[i]];
      out.values(i) = s.M0;
      out.derivatives(i) = s.M1;
      continue;
    }
    const Complex target = std::conj(points(i));
    Index j = -1;
    for (std::size_t k = 0; k < upper.size(); k++)
    {
      if (points(upper[k]) == target)
      {
        j = static_cast<Index>(k);
        break;
      }
    }
    if (j < 0)
    {
      throw Error("points not conjugate-closed");
    }
    out.values(i) = std::conj(samples[j].M0);
    out.derivatives(i) = std::conj(samples[j].M1);
  }
  for (const FrequencySample &s : samples)
  {
    out.diag.max_residual = std::max({out.diag.max_residual, s.residual0, s.residual1});
    out.diag.max_kappa = std::max(out.diag.max_kappa, s.kappa);
    out.diag.nhat_used.push_back(s.nhat_used);
  }
  return out;
}

CVector canonical_points(const CVector &points)
{
  return sort_points(enforce_conjugate_closure(points, 1e-10));
}

double max_relative_move(const CVector &from, const CVector &to)
{
  double worst = 0.0;
  for (Index i = 0; i < from.size(); i++)
  {
    worst = std::max(worst, std::abs(to(i) - from(i)) / std::abs(from(i)));
  }
  return worst;
}

double relative_mismatch(Complex approx, Complex exact)
{
  const double d = std::abs(approx - exact);
  const double s = std::abs(exact);
  return s > 0.0 ? d / s : d;
}

HermiteLoewnerROM build_rom(const CVector &points, const HermiteData &data)
{
  return realify(build_hermite_loewner(points, data.values, data.derivatives));
}

}  // namespace

TransferOracle make_oracle(const DiscreteLTI &sys)
{
  auto ev = std::make_shared<const TransferEvaluator>(sys);
  return {[ev](Complex z) { return ev->value(z); },
          [ev](Complex z) { return ev->derivative(z); }};
}

CVector sort_points(const CVector &points)
{
  std::vector<Complex> v(points.data(), points.data() + points.size());
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  CVector out(points.size());
  for (Index i = 0; i < points.size(); i++)
  {
    out(i) = v[static_cast<std::size_t>(i)];
  }
  return out;
}

bool is_conjugate_closed(const CVector &points, double tol)
{
  const Index n = points.size();
  std::vector<bool> used(n, false);
  for (Index i = 0; i < n; i++)
  {
    if (used[i])
    {
      continue;
    }
    const double scale = std::max(1.0, std::abs(points(i)));
    if (std::abs(points(i).imag()) <= tol * scale)
    {
      used[i] = true;
      continue;
    }
    bool found = false;
    for (Index j = 0; j < n && !found; j++)
    {
      if (!used[j] && j != i && std::abs(points(j) - std::conj(points(i))) <= tol * scale)
      {
        used[i] = used[j] = true;
        found = true;
      }
    }
    if (!found)
    {
      return false;
    }
  }
  return true;
}

CVector enforce_conjugate_closure(const CVector &poles, double rel_tol)
{
  const Index n = poles.size();
  double scale = 0.0;
  for (Index i = 0; i < n; i++)
  {
    if (std::isfinite(std::abs(poles(i))))
    {
      scale = std::max(scale, std::abs(poles(i)));
    }
  }
  const double tol = rel_tol * scale;
  std::vector<bool> used(n, false);
  CVector out(n);
  Index k = 0;
  for (Index i = 0; i < n; i++)
  {
    if (used[i])
    {
      continue;
    }
    used[i] = true;
    const Complex li = poles(i);
    if (!std::isfinite(std::abs(li)) || std::abs(li.imag()) <= tol)
    {
      out(k++) = std::isfinite(std::abs(li)) ? Complex(li.real(), 0.0) : li;
      continue;
    }
    Index best = -1;
    double best_dist = tol;
    for (Index j = 0; j < n; j++)
    {
      if (used[j])
      {
        continue;
      }
      const double d = std::abs(poles(j) - std::conj(li));
      if (d <= best_dist)
      {
        best = j;
        best_dist = d;
      }
    }
    if (best < 0)
    {
      if (std::abs(li.imag()) > 1e-6 * std::abs(li))
      {
        throw Error("eigenvalues are not closed under conjugation");
      }
      out(k++) = li.real();
      continue;
    }
    used[best] = true;
    const Complex mean = 0.5 * (li + std::conj(poles(best)));
    out(k++) = mean;
    out(k++) = std::conj(mean);
  }
  return out;
}

CVector stabilize_points(const CVector &poles)
{
  CVector out(poles.size());
  for (Index i = 0; i < poles.size(); i++)
  {
    Complex l = poles(i);
    if (std::abs(l) >= 1.0)
    {
      l = 1.0 / std::conj(l);
    }
    if (l == 0.0)
    {
      throw Error("pole at zero: interpolation point at infinity");
    }
    out(i) = 1.0 / l;
  }
  return out;
}

CVector default_initial_points(Index r, double radius)
{
  if (r < 1)
  {
    throw Error("reduced order must be positive");
  }
  if (!(radius > 1.0))
  {
    throw Error("initial radius must exceed 1");
  }
  const Index pairs = r / 2;
  CVector pts(r);
  const double lo = std::log(1e-3);
  const double hi = std::log(std::numbers::pi);
  for (Index j = 0; j < pairs; j++)
  {
    const double t = static_cast<double>(j + 1) / static_cast<double>(pairs + 1);
    const double w = std::exp(lo + t * (hi - lo));
    pts(2 * j) = std::polar(radius, w);
    pts(2 * j + 1) = std::polar(radius, -w);
  }
  if (r % 2 == 1)
  {
    pts(r - 1) = radius;
  }
  return pts;
}

IrkaReport irka(const HermiteSampler &sampler, const IrkaConfig &config)
{
  if (config.r < 1)
  {
    throw Error("reduced order must be positive");
  }
  if (config.max_iterations < 1 || !(config.convergence_tol > 0.0))
  {
    throw Error("IRKA needs max_iterations >= 1 and a positive tolerance");
  }
  CVector pts = config.initial_points.size() > 0
                  ? config.initial_points
                  : default_initial_points(config.r, config.init_radius);
  if (pts.size() != config.r)
  {
    throw Error("initial point count differs from r");
  }
  if (!is_conjugate_closed(pts))
  {
    throw Error("initial points not conjugate-closed");
  }
  pts = canonical_points(pts);

  const auto next_points = [&](const CVector &poles) {
    const CVector closed = enforce_conjugate_closure(poles);
    if (config.stabilization)
    {
      return canonical_points(stabilize_points(closed));
    }
    CVector inv(closed.size());
    for (Index i = 0; i < closed.size(); i++)
    {
      if (closed(i) == 0.0)
      {
        throw Error("pole at zero: interpolation point at infinity");
      }
      inv(i) = 1.0 / closed(i);
    }
    return canonical_points(inv);
  };

  IrkaReport report;
  report.point_history.push_back(pts);
  for (Index it = 1; it <= config.max_iterations; it++)
  {
    const HermiteData data = sample_closed(sampler, pts);
    const HermiteLoewnerROM rom = build_rom(pts, data);
    const CVector updated = next_points(rom_poles(rom));

    IterationDiagnostics diag = data.diag;
    diag.max_move = max_relative_move(pts, updated);
    report.diagnostics.push_back(diag);
    report.point_history.push_back(updated);
    report.iterations = it;
    pts = updated;
    if (diag.max_move < config.convergence_tol)
    {
      report.converged = true;
      break;
    }
  }

  report.final_points = pts;
  const HermiteData final_data = sample_closed(sampler, pts);
  report.rom = build_rom(pts, final_data);
  report.rom_poles = rom_poles(report.rom);

  // Hermite mismatch of the final ROM at the reciprocal of its own poles. An unstable
  // or infinite pole leaves no valid check point, so the defect is reported as inf.
  double defect = 0.0;
  const bool all_stable = std::all_of(report.rom_poles.begin(), report.rom_poles.end(),
                                      [](Complex l) { return std::abs(l) < 1.0 && l != 0.0; });
  if (!all_stable)
  {
    defect = std::numeric_limits<double>::infinity();
  }
  else
  {
    const CVector check = sort_points(stabilize_points(enforce_conjugate_closure(report.rom_poles)));
    const HermiteData truth = sample_closed(sampler, check);
    try
    {
      for (Index i = 0; i < check.size(); i++)
      {
        defect = std::max(defect, relative_mismatch(report.rom.transfer(check(i)), truth.values(i)));
        defect = std::max(defect,
                          relative_mismatch(report.rom.derivative(check(i)), truth.derivatives(i)));
      }
    }
    catch (const SingularMatrixError &)
    {
      defect = std::numeric_limits<double>::infinity();
    }
  }
  report.optimality_defect = defect;
  return report;
}

IrkaReport tf_irka(const TransferOracle &oracle, const IrkaConfig &config)
{
  const HermiteSampler sampler = [&](const CVector &points) {
    std::vector<FrequencySample> out(static_cast<std::size_t>(points.size()));
    for_each_index(points.size(), config.exec, [&](Index i) {
      FrequencySample &s = out[static_cast<std::size_t>(i)];
      s.sigma = points(i);
      s.M0 = oracle.value(points(i));
      s.M1 = oracle.derivative(points(i));
      s.has_derivative = true;
      s.informativity = {true, true, true};
    });
    return out;
  };
  return irka(sampler, config);
}

IrkaReport td_irka(const FrequencyRecovery &recovery, const IrkaConfig &config)
{
  const HermiteSampler sampler = [&](const CVector &points) {
    return recovery.recover_batch(std::span<const Complex>(points.data(), points.size()),
                                  true, config.exec);
  };
  return irka(sampler, config);
}

IrkaReport td_irka(const TimeSeriesData &data, const IrkaConfig &config)
{
  if (config.nhat < 1)
  {
    throw Error("td_irka requires a positive working order nhat");
  }
  RecoveryOptions opts = config.recovery;
  opts.overflow_policy = config.overflow_policy;
  const FrequencyRecovery recovery(data, config.nhat, opts);
  return td_irka(recovery, config);
}

}  // namespace ddrom
