#pragma once

#include "pmdrift/cutoff.hpp"
#include "pmdrift/grid.hpp"

namespace pmdrift {

/// Discrete L^q norm, cell-volume quadrature. q = infinity gives the max norm.
double lq_norm(const Grid& grid, const Field& u, double q);

/// vol * sum |u|^p  (no root).
double power_integral(const Grid& grid, const Field& u, double p);

/// vol * sum a*b.
double inner(const Grid& grid, const Field& a, const Field& b);

double l1_norm(const Grid& grid, const Field& u);
double l1_distance(const Grid& grid, const Field& a, const Field& b);

/// Discrete Dirichlet energy of p with zero ghost values on boundary faces;
/// equals sum_i (L p)_i p_i vol for the discrete Laplacian used by the solver.
double gradient_energy(const Grid& grid, const Field& p);

/// Discrete total variation weighted by a cell field omega (averaged onto
/// faces); interior faces only. Pass an all-ones field for the plain TV.
double tv_weighted(const Grid& grid, const Field& u, const Field& omega);

double tv_plain(const Grid& grid, const Field& u);

/// Discrete Laplacian of a cell field with zero ghost values.
Field discrete_laplacian(const Grid& grid, const Field& u);

/// Per-axis weighted variation sum_faces w |d_axis u| used by the window
/// diagnostics; weights are face-averaged from omega.
double tv_weighted_axis(const Grid& grid, const Field& u, const Field& omega, int axis);

}  // namespace pmdrift
