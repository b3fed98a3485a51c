#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>

#include "pmdrift/field.hpp"

namespace pmdrift {

/// Thrown on invalid geometric or configuration input.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform Cartesian mesh of an axis-aligned box with homogeneous Dirichlet
/// boundary bookkeeping. Immutable after construction.
class Grid {
public:
  Grid(int dim, std::array<int, 2> cells, std::array<std::array<double, 2>, 2> extents)
      : dim_(dim), cells_(cells), extents_(extents) {
    if (dim != 1 && dim != 2) throw InvalidArgument("grid: dim must be 1 or 2");
    for (int a = 0; a < dim_; ++a) {
      if (cells_[a] < 3) throw InvalidArgument("grid: need at least 3 cells per axis");
      if (!(extents_[a][1] > extents_[a][0]))
        throw InvalidArgument("grid: extent upper bound must exceed lower bound");
      h_[a] = (extents_[a][1] - extents_[a][0]) / cells_[a];
    }
    if (dim_ == 1) {
      cells_[1] = 1;
      h_[1] = 1.0;
      extents_[1] = {0.0, 1.0};
    }
  }

  static Grid make_1d(int n, double a = 0.0, double b = 1.0) {
    return Grid(1, {n, 1}, {{{a, b}, {0.0, 1.0}}});
  }
  static Grid make_2d(int nx, int ny, std::array<double, 2> xext = {0.0, 1.0},
                      std::array<double, 2> yext = {0.0, 1.0}) {
    return Grid(2, {nx, ny}, {{xext, yext}});
  }

  int dim() const { return dim_; }
  int cells(int axis) const { return cells_[axis]; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(cells_[0]) * (dim_ == 2 ? cells_[1] : 1);
  }
  double spacing(int axis) const { return h_[axis]; }
  double lo(int axis) const { return extents_[axis][0]; }
  double hi(int axis) const { return extents_[axis][1]; }
  double extent(int axis) const { return extents_[axis][1] - extents_[axis][0]; }

  /// Measure of one cell.
  double cell_volume() const { return dim_ == 1 ? h_[0] : h_[0] * h_[1]; }
  /// Measure of the whole box.
  double domain_volume() const {
    return dim_ == 1 ? extent(0) : extent(0) * extent(1);
  }
  double min_extent() const {
    return dim_ == 1 ? extent(0) : std::min(extent(0), extent(1));
  }

  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * cells_[0] + i;
  }
  int ix(std::size_t idx) const { return static_cast<int>(idx % cells_[0]); }
  int iy(std::size_t idx) const { return static_cast<int>(idx / cells_[0]); }

  double center(int axis, int i) const { return extents_[axis][0] + (i + 0.5) * h_[axis]; }
  std::array<double, 2> cell_center(std::size_t idx) const {
    return {center(0, ix(idx)), dim_ == 2 ? center(1, iy(idx)) : 0.0};
  }

  bool same_layout(const Grid& o) const {
    return dim_ == o.dim_ && cells_ == o.cells_ && extents_ == o.extents_;
  }

  Field make_field(double value = 0.0) const { return Field(cell_count(), value); }

private:
  int dim_;
  std::array<int, 2> cells_;
  std::array<std::array<double, 2>, 2> extents_;
  std::array<double, 2> h_{};
};

/// Per-cell distance to the box boundary, exact for axis-aligned boxes.
struct DistanceField {
  Field d;
};

/// Exact Euclidean distance from each cell center to the box boundary
/// (min over axes of the distance to the two walls).
DistanceField build_distance(const Grid& grid);

}  // namespace pmdrift
