#pragma once

#include <array>
#include <functional>
#include <limits>
#include <vector>

#include "pmdrift/grid.hpp"

namespace pmdrift {

/// Drift field V stored by face-normal components, with cell-centered
/// divergence. Face arrays are sampled at face centers; the divergence is
/// either the analytic one (closed-form input) or the discrete divergence of
/// the face values.
class VectorFieldSpec {
public:
  using Component = std::function<double(double, double)>;

  /// Sample a closed-form field on the faces of `grid`. When `divergence` is
  /// not supplied the discrete divergence of the sampled faces is stored.
  static VectorFieldSpec sample(const Grid& grid, Component vx,
                                Component vy = nullptr,
                                Component divergence = nullptr);

  static VectorFieldSpec zero(const Grid& grid);

  const Grid& grid() const { return *grid_; }

  // Face accessors. Axis-0 faces: i in [0, nx], j in [0, ny).
  // Axis-1 faces (2D only): i in [0, nx), j in [0, ny].
  double face_x(int i, int j = 0) const { return faces_x_[j * (nx_ + 1) + i]; }
  double face_y(int i, int j) const { return faces_y_[j * nx_ + i]; }

  const std::vector<double>& faces_x() const { return faces_x_; }
  const std::vector<double>& faces_y() const { return faces_y_; }

  /// Stored cell divergence (analytic for closed-form input).
  const Field& divergence() const { return div_; }

  /// Divergence recomputed from face values; used by the consistency check.
  Field discrete_divergence() const;

  /// Max |stored - discrete| divergence over cells.
  double divergence_consistency_error() const;

  /// Cell-centered component value (average of the two bounding faces).
  double cell_component(int axis, std::size_t cell) const;

  /// sup of (div V)^-  over cells.
  double div_negative_sup() const;
  /// Sum over component pairs of the sup discrete difference quotients,
  /// i.e. sum_{i,k} ||d V_k / d x_i||_inf evaluated on the face samples.
  double lipschitz_sum() const;

  double max_face_speed() const;

  bool outward_on_boundary(double tol = 1e-12) const;

private:
  VectorFieldSpec() = default;
  const Grid* grid_ = nullptr;
  int nx_ = 0, ny_ = 1;
  std::vector<double> faces_x_;
  std::vector<double> faces_y_;
  Field div_;
};

/// Time thresholds derived from the drift field; infinity when the
/// corresponding denominator vanishes.
struct DriftThresholds {
  double lambda0;  // 1 / sup (div V)^-
  double lambda1;  // 1 / sum_{i,k} ||d_i V_k||_inf
};

DriftThresholds compute_thresholds(const VectorFieldSpec& V);

/// Result of the boundary-orientation checks. A failing certificate is a
/// value, not an error.
struct OutpointingCertificate {
  bool boundary_ok;       // V . nu >= -tol on every boundary face
  bool near_boundary_ok;  // V . (-grad d) >= -tol on cells with d < h
  double worst_boundary;  // most negative boundary flux
  std::array<double, 2> worst_boundary_at{};
  double worst_near_boundary;
  std::array<double, 2> worst_near_boundary_at{};
  double tol;
  double h;
  bool pass() const { return boundary_ok && near_boundary_ok; }
};

OutpointingCertificate check_outpointing(const VectorFieldSpec& V, const Grid& grid,
                                         double h, double tol = 1e-12);

}  // namespace pmdrift
