#pragma once

#include "ddrom/lti.hpp"

namespace ddrom
{

/// Hermite interpolant H_r(z) = cr^T (z Er - Ar)^{-1} br built from a Loewner pencil.
/// Before realification Er = L, Ar = M and br = cr = q (the sampled values).
struct HermiteLoewnerROM
{
  CMatrix Er;
  CMatrix Ar;
  CVector br;
  CVector cr;
  CVector points;
  bool is_real = false;
  // min_i sigma_min(sigma_i Er - Ar), normalized by |sigma_i Er - Ar|_F.
  double pencil_min_singular = 0.0;

  Index order() const { return Er.rows(); }
  // Both throw SingularMatrixError only at an exactly singular z Er - Ar.
  Complex transfer(Complex z) const;
  Complex derivative(Complex z) const;
  // Requires is_real.
  DiscreteLTI as_real_system() const;
};

/// L_ij = -(H_i - H_j) / (s_i - s_j),  L_ii = -H'_i,
/// M_ij = -(s_i H_i - s_j H_j) / (s_i - s_j),  M_ii = -(H_i + s_i H'_i).
/// Throws on repeated or near-coincident points (|s_i - s_j| < 1e-10 max|s|) and when
/// some s_i Er - Ar is exactly singular ("interpolation pencil singular"). Pencils that
/// are singular only to working precision are accepted and flagged through
/// pencil_min_singular.
HermiteLoewnerROM build_hermite_loewner(const CVector &points, const CVector &values,
                                        const CVector &derivatives);

/// Real realization through the block-unitary T with 2x2 blocks [[1, -i], [1, i]] / sqrt(2)
/// on each conjugate pair: Er' = T^H Er T, Ar' = T^H Ar T, br' = T^H br, cr' = T^T cr.
/// Points are reordered so that each pair (s, conj(s)) with Im s > 0 is adjacent, real
/// points first.
HermiteLoewnerROM realify(const HermiteLoewnerROM &rom);

/// Generalized eigenvalues of (Ar, Er) by QZ. Infinite eigenvalues come back as inf.
CVector rom_poles(const HermiteLoewnerROM &rom);

/// QZ on a general complex pencil (A, E).
CVector generalized_eigenvalues(const CMatrix &A, const CMatrix &E);
/// QZ on a real pencil; conjugate pairs are exact.
CVector generalized_eigenvalues(const Matrix &A, const Matrix &E);

}  // namespace ddrom
