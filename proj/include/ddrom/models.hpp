#pragma once

#include <cstdint>

#include "ddrom/lti.hpp"

namespace ddrom
{

/// Random stable system with E = I. A = Q D Q^T where D is block diagonal with
/// rotation-scaling 2x2 blocks (conjugate eigenvalue pairs) and, for odd n, one
/// real 1x1 block; all eigenvalue moduli lie in [min_fraction, 1] * spectral_radius_bound.
/// Q is a Haar-like orthogonal matrix. b and c are standard Gaussian.
DiscreteLTI random_stable_system(Index n, double spectral_radius_bound, std::uint64_t seed,
                                 double min_fraction = 0.2);

/// First-order upwind semi-discretization of v_t = -a v_x on (0, 1) with n cells,
/// inflow v(0, t) = u(t), output v at the last cell.
ContinuousLTI advection_fd_continuous(Index n, double velocity);

/// advection_fd_continuous discretized by zero-order hold. ZOH integrates the
/// semi-discrete model exactly in time, so the Courant number a n / fs is only
/// bounded (<= 2) to keep the spatial grid resolved at the sampling rate.
DiscreteLTI advection_fd_model(Index n, double velocity, double fs);

struct HeatParameters
{
  double heat_capacity = 0.896;  // C_p
  double density = 2700.0;       // rho
  double conductivity = 167.0;   // K_0
  double output_x = 0.8;
};

/// Centered differences for Cp rho T_t = K0 T_xx on (0, 1) with T(0, t) = 0 and
/// heat flux K0 T_x(1, t) = u(t) entering at the right end. Nodes x_i = i / n,
/// i = 1..n; the Neumann node carries half a cell of heat capacity, which keeps the
/// pencil symmetric (E diagonal positive, A symmetric negative definite).
ContinuousLTI heat_fd_continuous(Index n, const HeatParameters &params);

DiscreteLTI heat_fd_model(Index n, const HeatParameters &params, double fs);

}  // namespace ddrom
