#include <algorithm>
#include <cmath>

#include "pmdrift/cutoff.hpp"
#include "pmdrift/drift.hpp"
#include "pmdrift/grid.hpp"

namespace pmdrift {

DistanceField build_distance(const Grid& grid) {
  Field d = grid.make_field();
  const std::size_t n = grid.cell_count();
  for (std::size_t c = 0; c < n; ++c) {
    auto x = grid.cell_center(c);
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < grid.dim(); ++a) {
      best = std::min(best, x[a] - grid.lo(a));
      best = std::min(best, grid.hi(a) - x[a]);
    }
    d[c] = best;
  }
  return DistanceField{std::move(d)};
}

OmegaConstants omega_constants(double h) {
  // 2*c2^2 - c1^2 = 1 with c1 = 1/2, and Ch solving the value-matching
  // condition exp(-Ch/Mh) = 1/2 with Mh = (c2^2 - c1^2) h^2.
  const double c1 = 0.5;
  const double c2 = std::sqrt(5.0) / (2.0 * std::sqrt(2.0));
  const double Mh = (c2 * c2 - c1 * c1) * h * h;
  const double Ch = Mh * std::log(2.0);
  return {c1, c2, Ch};
}

double eta_profile(double r, double h) {
  const auto [c1, c2, Ch] = omega_constants(h);
  if (r <= c1 * h) return 0.0;
  if (r >= h) return 1.0;
  if (r <= c2 * h) return std::exp(-Ch / (r * r - c1 * c1 * h * h));
  return 1.0 - std::exp(-Ch / (h * h - r * r));
}

double eta_profile_derivative(double r, double h) {
  const auto [c1, c2, Ch] = omega_constants(h);
  if (r <= c1 * h || r >= h) return 0.0;
  if (r <= c2 * h) {
    const double q = r * r - c1 * c1 * h * h;
    return 2.0 * r * Ch / (q * q) * std::exp(-Ch / q);
  }
  const double q = h * h - r * r;
  return 2.0 * r * Ch / (q * q) * std::exp(-Ch / q);
}

CutoffFamily build_cutoff(const Grid& grid, double h, CutoffKind kind) {
  if (!(h > 0.0) || !(h < 0.5 * grid.min_extent()))
    throw InvalidArgument("build_cutoff: h must lie in (0, min_extent/2)");
  DistanceField dist = build_distance(grid);
  CutoffFamily fam;
  fam.kind = kind;
  fam.h = h;
  fam.values = grid.make_field();
  if (kind == CutoffKind::OmegaH) {
    const auto [c1, c2, Ch] = omega_constants(h);
    fam.c1 = c1;
    fam.c2 = c2;
    fam.Ch = Ch;
    for (std::size_t c = 0; c < fam.values.size(); ++c)
      fam.values[c] = eta_profile(dist.d[c], h);
  } else {
    for (std::size_t c = 0; c < fam.values.size(); ++c)
      fam.values[c] = std::min(h, dist.d[c]) / h;
  }
  return fam;
}

VectorFieldSpec VectorFieldSpec::sample(const Grid& grid, Component vx, Component vy,
                                        Component divergence) {
  VectorFieldSpec V;
  V.grid_ = &grid;
  V.nx_ = grid.cells(0);
  V.ny_ = grid.dim() == 2 ? grid.cells(1) : 1;
  V.faces_x_.assign(static_cast<std::size_t>(V.nx_ + 1) * V.ny_, 0.0);
  for (int j = 0; j < V.ny_; ++j) {
    const double y = grid.dim() == 2 ? grid.center(1, j) : 0.0;
    for (int i = 0; i <= V.nx_; ++i) {
      const double x = grid.lo(0) + i * grid.spacing(0);
      V.faces_x_[j * (V.nx_ + 1) + i] = vx ? vx(x, y) : 0.0;
    }
  }
  if (grid.dim() == 2) {
    V.faces_y_.assign(static_cast<std::size_t>(V.ny_ + 1) * V.nx_, 0.0);
    for (int j = 0; j <= V.ny_; ++j) {
      const double y = grid.lo(1) + j * grid.spacing(1);
      for (int i = 0; i < V.nx_; ++i)
        V.faces_y_[j * V.nx_ + i] = vy ? vy(grid.center(0, i), y) : 0.0;
    }
  }
  if (divergence) {
    V.div_ = grid.make_field();
    for (std::size_t c = 0; c < V.div_.size(); ++c) {
      auto x = grid.cell_center(c);
      V.div_[c] = divergence(x[0], x[1]);
    }
  } else {
    V.div_ = V.discrete_divergence();
  }
  return V;
}

VectorFieldSpec VectorFieldSpec::zero(const Grid& grid) {
  return sample(grid, nullptr, nullptr, nullptr);
}

Field VectorFieldSpec::discrete_divergence() const {
  const Grid& g = *grid_;
  Field out = g.make_field();
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) {
      double d = (face_x(i + 1, j) - face_x(i, j)) / g.spacing(0);
      if (g.dim() == 2) d += (face_y(i, j + 1) - face_y(i, j)) / g.spacing(1);
      out[g.index(i, j)] = d;
    }
  return out;
}

double VectorFieldSpec::divergence_consistency_error() const {
  Field disc = discrete_divergence();
  double worst = 0.0;
  for (std::size_t c = 0; c < disc.size(); ++c)
    worst = std::max(worst, std::abs(disc[c] - div_[c]));
  return worst;
}

double VectorFieldSpec::cell_component(int axis, std::size_t cell) const {
  const Grid& g = *grid_;
  const int i = g.ix(cell), j = g.iy(cell);
  if (axis == 0) return 0.5 * (face_x(i, j) + face_x(i + 1, j));
  return 0.5 * (face_y(i, j) + face_y(i, j + 1));
}

double VectorFieldSpec::div_negative_sup() const {
  double s = 0.0;
  for (double d : div_.values()) s = std::max(s, std::max(-d, 0.0));
  return s;
}

double VectorFieldSpec::lipschitz_sum() const {
  const Grid& g = *grid_;
  double sum = 0.0;
  // d V_x / d x: adjacent x-faces along axis 0.
  {
    double s = 0.0;
    for (int j = 0; j < ny_; ++j)
      for (int i = 0; i < nx_; ++i)
        s = std::max(s, std::abs(face_x(i + 1, j) - face_x(i, j)) / g.spacing(0));
    sum += s;
  }
  if (g.dim() == 2) {
    // d V_x / d y
    double s = 0.0;
    for (int j = 0; j + 1 < ny_; ++j)
      for (int i = 0; i <= nx_; ++i)
        s = std::max(s, std::abs(face_x(i, j + 1) - face_x(i, j)) / g.spacing(1));
    sum += s;
    // d V_y / d x
    s = 0.0;
    for (int j = 0; j <= ny_; ++j)
      for (int i = 0; i + 1 < nx_; ++i)
        s = std::max(s, std::abs(face_y(i + 1, j) - face_y(i, j)) / g.spacing(0));
    sum += s;
    // d V_y / d y
    s = 0.0;
    for (int j = 0; j < ny_; ++j)
      for (int i = 0; i < nx_; ++i)
        s = std::max(s, std::abs(face_y(i, j + 1) - face_y(i, j)) / g.spacing(1));
    sum += s;
  }
  return sum;
}

double VectorFieldSpec::max_face_speed() const {
  double m = 0.0;
  for (double v : faces_x_) m = std::max(m, std::abs(v));
  for (double v : faces_y_) m = std::max(m, std::abs(v));
  return m;
}

bool VectorFieldSpec::outward_on_boundary(double tol) const {
  for (int j = 0; j < ny_; ++j) {
    if (-face_x(0, j) < -tol) return false;       // outward normal -x at the low wall
    if (face_x(nx_, j) < -tol) return false;
  }
  if (grid_->dim() == 2) {
    for (int i = 0; i < nx_; ++i) {
      if (-face_y(i, 0) < -tol) return false;
      if (face_y(i, ny_) < -tol) return false;
    }
  }
  return true;
}

DriftThresholds compute_thresholds(const VectorFieldSpec& V) {
  const double inf = std::numeric_limits<double>::infinity();
  const double dneg = V.div_negative_sup();
  const double lip = V.lipschitz_sum();
  return {dneg > 0.0 ? 1.0 / dneg : inf, lip > 0.0 ? 1.0 / lip : inf};
}

OutpointingCertificate check_outpointing(const VectorFieldSpec& V, const Grid& grid,
                                         double h, double tol) {
  OutpointingCertificate cert;
  cert.tol = tol;
  cert.h = h;
  cert.boundary_ok = true;
  cert.near_boundary_ok = true;
  cert.worst_boundary = std::numeric_limits<double>::infinity();
  cert.worst_near_boundary = std::numeric_limits<double>::infinity();

  const int nx = grid.cells(0);
  const int ny = grid.dim() == 2 ? grid.cells(1) : 1;

  auto consider_boundary = [&](double flux, double x, double y) {
    if (flux < cert.worst_boundary) {
      cert.worst_boundary = flux;
      cert.worst_boundary_at = {x, y};
    }
    if (flux < -tol) cert.boundary_ok = false;
  };
  for (int j = 0; j < ny; ++j) {
    const double y = grid.dim() == 2 ? grid.center(1, j) : 0.0;
    consider_boundary(-V.face_x(0, j), grid.lo(0), y);
    consider_boundary(V.face_x(nx, j), grid.hi(0), y);
  }
  if (grid.dim() == 2) {
    for (int i = 0; i < nx; ++i) {
      const double x = grid.center(0, i);
      consider_boundary(-V.face_y(i, 0), x, grid.lo(1));
      consider_boundary(V.face_y(i, ny), x, grid.hi(1));
    }
  }

  // Near-boundary condition: V . (-grad d) >= -tol for every wall attaining
  // the distance minimum, on cells with d < h.
  DistanceField dist = build_distance(grid);
  const double tie = 1e-14;
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    if (dist.d[c] >= h) continue;
    auto x = grid.cell_center(c);
    for (int a = 0; a < grid.dim(); ++a) {
      const double va = V.cell_component(a, c);
      // Low wall on axis a: -grad d = -e_a.
      if (x[a] - grid.lo(a) <= dist.d[c] + tie) {
        const double val = -va;
        if (val < cert.worst_near_boundary) {
          cert.worst_near_boundary = val;
          cert.worst_near_boundary_at = {x[0], x[1]};
        }
        if (val < -tol) cert.near_boundary_ok = false;
      }
      // High wall on axis a: -grad d = +e_a.
      if (grid.hi(a) - x[a] <= dist.d[c] + tie) {
        const double val = va;
        if (val < cert.worst_near_boundary) {
          cert.worst_near_boundary = val;
          cert.worst_near_boundary_at = {x[0], x[1]};
        }
        if (val < -tol) cert.near_boundary_ok = false;
      }
    }
  }
  return cert;
}

}  // namespace pmdrift
