#include "ddrom/h2.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ddrom/parallel.hpp"

namespace ddrom
{

namespace
{

double abs2_at(const TransferFunction &H, double w)
{
  return std::norm(H(std::polar(1.0, w)));
}

// Mean of |H|^2 over the circle using nodes k * pi / M (symmetric) or k * 2 pi / N.
class Trapezoid
{
public:
  Trapezoid(const TransferFunction &H, const QuadratureOptions &opts) : H_(H), opts_(opts) {}

  double start(Index intervals)
  {
    intervals_ = intervals;
    if (opts_.real_symmetric)
    {
      // k = 0..M on [0, pi]; interior nodes count twice.
      std::vector<double> f(intervals + 1);
      for_each_index(intervals + 1, opts_.exec, [&](Index k) {
        f[k] = abs2_at(H_, std::numbers::pi * static_cast<double>(k) /
                             static_cast<double>(intervals));
      });
      sum_ = f[0] + f[intervals];
      for (Index k = 1; k < intervals; k++)
      {
        sum_ += 2.0 * f[k];
      }
      nodes_ = intervals + 1;
      return sum_ / (2.0 * static_cast<double>(intervals));
    }
    std::vector<double> f(intervals);
    for_each_index(intervals, opts_.exec, [&](Index k) {
      f[k] = abs2_at(H_, 2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(intervals));
    });
    sum_ = 0.0;
    for (double v : f)
    {
      sum_ += v;
    }
    nodes_ = intervals;
    return sum_ / static_cast<double>(intervals);
  }

  // Doubles the interval count, evaluating only the new midpoints.
  double refine()
  {
    const Index m = intervals_;
    const double span = opts_.real_symmetric ? std::numbers::pi : 2.0 * std::numbers::pi;
    std::vector<double> f(m);
    for_each_index(m, opts_.exec, [&](Index k) {
      f[k] = abs2_at(H_, span * (2.0 * static_cast<double>(k) + 1.0) /
                           (2.0 * static_cast<double>(m)));
    });
    const double weight = opts_.real_symmetric ? 2.0 : 1.0;
    for (double v : f)
    {
      sum_ += weight * v;
    }
    intervals_ = 2 * m;
    nodes_ += m;
    const double denom = opts_.real_symmetric ? 2.0 * static_cast<double>(intervals_)
                                              : static_cast<double>(intervals_);
    return sum_ / denom;
  }

  Index nodes() const { return nodes_; }

private:
  const TransferFunction &H_;
  const QuadratureOptions &opts_;
  Index intervals_ = 0;
  Index nodes_ = 0;
  double sum_ = 0.0;
};

bool near_circle(const DiscreteLTI &sys)
{
  const CVector p = poles(sys);
  for (Index i = 0; i < p.size(); i++)
  {
    if (std::abs(std::abs(p(i)) - 1.0) < 1e-6)
    {
      return true;
    }
  }
  return false;
}

TransferFunction evaluator_of(const DiscreteLTI &sys)
{
  auto ev = std::make_shared<const TransferEvaluator>(sys);
  return [ev](Complex z) { return ev->value(z); };
}

}  // namespace

H2Estimate h2_norm_quadrature(const TransferFunction &H, const QuadratureOptions &opts)
{
  if (!(opts.tolerance > 0.0) || opts.initial_intervals < 2)
  {
    throw Error("quadrature needs a positive tolerance and at least two intervals");
  }
  Trapezoid trap(H, opts);
  double prev = std::sqrt(trap.start(opts.initial_intervals));
  while (true)
  {
    if (trap.nodes() * 2 > opts.max_nodes)
    {
      throw NonConvergenceError("H2 quadrature did not converge within the node budget",
                                prev);
    }
    const double next = std::sqrt(trap.refine());
    if (!std::isfinite(next))
    {
      throw Error("non-finite transfer function value on the unit circle");
    }
    const double change = std::abs(next - prev);
    if (change <= opts.tolerance * next || change <= opts.absolute_tolerance ||
        (next == 0.0 && prev == 0.0))
    {
      return {next, trap.nodes(), false};
    }
    prev = next;
  }
}

H2Estimate h2_norm_quadrature(const DiscreteLTI &sys, const QuadratureOptions &opts)
{
  H2Estimate est = h2_norm_quadrature(evaluator_of(sys), opts);
  est.near_circle_warning = near_circle(sys);
  return est;
}

Complex PoleResidueForm::evaluate(Complex z) const
{
  Complex sum = 0.0;
  for (Index i = 0; i < poles.size(); i++)
  {
    sum += residues(i) / (z - poles(i));
  }
  return sum;
}

void PoleResidueForm::validate() const
{
  if (poles.size() != residues.size())
  {
    throw Error("poles and residues differ in length");
  }
  for (Index i = 0; i < poles.size(); i++)
  {
    if (!(std::abs(poles(i)) < 1.0))
    {
      throw Error("pole on or outside the unit circle");
    }
  }
}

double h2_norm_pole_residue(const PoleResidueForm &pr)
{
  pr.validate();
  const Index n = pr.poles.size();
  double total = 0.0;
  for (Index i = 0; i < n; i++)
  {
    for (Index j = 0; j < n; j++)
    {
      total += (pr.residues(i) * std::conj(pr.residues(j)) /
                (1.0 - pr.poles(i) * std::conj(pr.poles(j))))
                 .real();
    }
  }
  return std::sqrt(std::max(total, 0.0));
}

PoleResidueForm pole_residue_form(const DiscreteLTI &sys)
{
  sys.validate();
  const Eigen::PartialPivLU<Matrix> luE(sys.E);
  const Matrix K = luE.solve(sys.A);
  const Vector eb = luE.solve(sys.b);
  Eigen::EigenSolver<Matrix> es(K, true);
  if (es.info() != Eigen::Success)
  {
    throw Error("eigendecomposition failed");
  }
  const CMatrix V = es.eigenvectors();
  Eigen::PartialPivLU<CMatrix> luV(V);
  if (!(luV.rcond() > 1e-13))
  {
    throw Error("system is not numerically diagonalizable");
  }
  const CVector right = luV.solve(eb.cast<Complex>());
  const CVector left = V.transpose() * sys.c.cast<Complex>();
  PoleResidueForm pr;
  pr.poles = es.eigenvalues();
  pr.residues = left.cwiseProduct(right);
  return pr;
}

double relative_h2_error(const TransferFunction &H, const TransferFunction &Hr,
                         const QuadratureOptions &opts)
{
  const double denom = h2_norm_quadrature(H, opts).norm;
  if (!(denom > 0.0))
  {
    throw Error("relative H2 error undefined for |H| = 0");
  }
  const TransferFunction diff = [&](Complex z) { return H(z) - Hr(z); };
  QuadratureOptions diff_opts = opts;
  diff_opts.absolute_tolerance = std::max(opts.absolute_tolerance, opts.tolerance * denom);
  return h2_norm_quadrature(diff, diff_opts).norm / denom;
}

double relative_h2_error(const DiscreteLTI &full, const DiscreteLTI &rom,
                         const QuadratureOptions &opts)
{
  return relative_h2_error(evaluator_of(full), evaluator_of(rom), opts);
}

}  // namespace ddrom
