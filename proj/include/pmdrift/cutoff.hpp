#pragma once

#include "pmdrift/grid.hpp"

namespace pmdrift {

enum class CutoffKind { XiH, OmegaH };

/// Interior cutoff family evaluated at cell centers.
///
/// xi_h(x)    = min(h, d(x)) / h
/// omega_h(x) = eta_h(d(x)) with eta_h the piecewise-exponential profile that
/// vanishes on {d <= c1*h}, equals 1 on {d >= h} and matches value 1/2 at
/// d = c2*h.
struct CutoffFamily {
  CutoffKind kind;
  double h;
  Field values;
  // Profile constants (omega_h only; zero for xi_h).
  double c1 = 0.0;
  double c2 = 0.0;
  double Ch = 0.0;
};

/// Profile eta_h(r) used by omega_h; exposed for direct tests.
double eta_profile(double r, double h);
/// Derivative of eta_h with respect to r (one-sided at the matching point).
double eta_profile_derivative(double r, double h);

/// Constants of the omega_h profile for window width h.
struct OmegaConstants {
  double c1;
  double c2;
  double Ch;
};
OmegaConstants omega_constants(double h);

/// Requires 0 < h < half of the smallest domain extent.
CutoffFamily build_cutoff(const Grid& grid, double h, CutoffKind kind);

}  // namespace pmdrift
