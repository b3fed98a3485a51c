#include "pmdrift/norms.hpp"

#include <cmath>

namespace pmdrift {

double lq_norm(const Grid& grid, const Field& u, double q) {
  if (std::isinf(q)) return u.max_abs();
  const double vol = grid.cell_volume();
  double s = 0.0;
  if (q == 1.0) {
    for (double x : u) s += std::abs(x);
    return vol * s;
  }
  if (q == 2.0) {
    for (double x : u) s += x * x;
    return std::sqrt(vol * s);
  }
  for (double x : u) s += std::pow(std::abs(x), q);
  return std::pow(vol * s, 1.0 / q);
}

double power_integral(const Grid& grid, const Field& u, double p) {
  double s = 0.0;
  for (double x : u) s += std::pow(std::abs(x), p);
  return grid.cell_volume() * s;
}

double inner(const Grid& grid, const Field& a, const Field& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return grid.cell_volume() * s;
}

double l1_norm(const Grid& grid, const Field& u) { return lq_norm(grid, u, 1.0); }

double l1_distance(const Grid& grid, const Field& a, const Field& b) {
  const double vol = grid.cell_volume();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return vol * s;
}

double gradient_energy(const Grid& grid, const Field& p) {
  const int nx = grid.cells(0);
  const int ny = grid.dim() == 2 ? grid.cells(1) : 1;
  const double vol = grid.cell_volume();
  double e = 0.0;
  const double hx = grid.spacing(0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const double pl = i > 0 ? p[grid.index(i - 1, j)] : 0.0;
      const double pr = i < nx ? p[grid.index(i, j)] : 0.0;
      const double g = (pr - pl) / hx;
      e += g * g;
    }
  }
  if (grid.dim() == 2) {
    const double hy = grid.spacing(1);
    for (int j = 0; j <= ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const double pl = j > 0 ? p[grid.index(i, j - 1)] : 0.0;
        const double pr = j < ny ? p[grid.index(i, j)] : 0.0;
        const double g = (pr - pl) / hy;
        e += g * g;
      }
    }
  }
  return vol * e;
}

double tv_weighted_axis(const Grid& grid, const Field& u, const Field& omega, int axis) {
  const int nx = grid.cells(0);
  const int ny = grid.dim() == 2 ? grid.cells(1) : 1;
  // Face "area" element: cell volume / spacing along the jump axis.
  const double area = grid.cell_volume() / grid.spacing(axis);
  double s = 0.0;
  if (axis == 0) {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i + 1 < nx; ++i) {
        const std::size_t a = grid.index(i, j), b = grid.index(i + 1, j);
        s += 0.5 * (omega[a] + omega[b]) * std::abs(u[b] - u[a]);
      }
  } else {
    for (int j = 0; j + 1 < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const std::size_t a = grid.index(i, j), b = grid.index(i, j + 1);
        s += 0.5 * (omega[a] + omega[b]) * std::abs(u[b] - u[a]);
      }
  }
  return area * s;
}

double tv_weighted(const Grid& grid, const Field& u, const Field& omega) {
  double s = tv_weighted_axis(grid, u, omega, 0);
  if (grid.dim() == 2) s += tv_weighted_axis(grid, u, omega, 1);
  return s;
}

double tv_plain(const Grid& grid, const Field& u) {
  Field ones(u.size(), 1.0);
  return tv_weighted(grid, u, ones);
}

Field discrete_laplacian(const Grid& grid, const Field& u) {
  const int nx = grid.cells(0);
  const int ny = grid.dim() == 2 ? grid.cells(1) : 1;
  Field out = grid.make_field();
  const double ihx2 = 1.0 / (grid.spacing(0) * grid.spacing(0));
  const double ihy2 = grid.dim() == 2 ? 1.0 / (grid.spacing(1) * grid.spacing(1)) : 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double c = u[grid.index(i, j)];
      double lap = 0.0;
      const double xl = i > 0 ? u[grid.index(i - 1, j)] : 0.0;
      const double xr = i + 1 < nx ? u[grid.index(i + 1, j)] : 0.0;
      lap += (xl - 2.0 * c + xr) * ihx2;
      if (grid.dim() == 2) {
        const double yl = j > 0 ? u[grid.index(i, j - 1)] : 0.0;
        const double yr = j + 1 < ny ? u[grid.index(i, j + 1)] : 0.0;
        lap += (yl - 2.0 * c + yr) * ihy2;
      }
      out[grid.index(i, j)] = lap;
    }
  return out;
}

}  // namespace pmdrift
