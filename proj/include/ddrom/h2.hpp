#pragma once

#include <functional>

#include "ddrom/lti.hpp"

namespace ddrom
{

/// Transfer function callback. Must be safe to call concurrently under
/// Execution::Parallel.
using TransferFunction = std::function<Complex(Complex)>;

struct QuadratureOptions
{
  // Relative change of the norm between successive refinements.
  double tolerance = 1e-10;
  // Absolute change also accepted as converged; lets roundoff-level integrands stop.
  double absolute_tolerance = 0.0;
  Index initial_intervals = 256;
  Index max_nodes = Index(1) << 20;
  // Integrate |H|^2 over [0, pi] and double; valid for real systems.
  bool real_symmetric = true;
  Execution exec = Execution::Parallel;
};

struct H2Estimate
{
  double norm = 0.0;
  Index nodes = 0;
  // Set by the DiscreteLTI overloads when a pole lies within 1e-6 of the unit circle.
  bool near_circle_warning = false;
};

/// sqrt((1/2pi) int |H(e^{iw})|^2 dw) by trapezoidal refinement (node count doubled until
/// the relative change drops below the tolerance). Node values are computed
/// independently, then summed in index order, so Serial and Parallel agree bitwise.
/// Throws NonConvergenceError carrying the last estimate after max_nodes.
H2Estimate h2_norm_quadrature(const TransferFunction &H, const QuadratureOptions &opts = {});
H2Estimate h2_norm_quadrature(const DiscreteLTI &sys, const QuadratureOptions &opts = {});

/// H(z) = sum_i residues_i / (z - poles_i).
struct PoleResidueForm
{
  CVector poles;
  CVector residues;

  Complex evaluate(Complex z) const;
  // Throws on length mismatch or a pole with |lambda| >= 1.
  void validate() const;
};

/// |H|^2 = sum_ij phi_i conj(phi_j) / (1 - lambda_i conj(lambda_j)); simple poles.
double h2_norm_pole_residue(const PoleResidueForm &pr);

/// Diagonalizes E^{-1} A; requires a diagonalizable system.
PoleResidueForm pole_residue_form(const DiscreteLTI &sys);

/// |H - Hr|_H2 / |H|_H2, both by quadrature; the difference is resolved to
/// tolerance * |H| absolutely. Throws when |H| = 0.
double relative_h2_error(const TransferFunction &H, const TransferFunction &Hr,
                         const QuadratureOptions &opts = {});
double relative_h2_error(const DiscreteLTI &full, const DiscreteLTI &rom,
                         const QuadratureOptions &opts = {});

}  // namespace ddrom
