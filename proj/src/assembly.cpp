#include "pmdrift/assembly.hpp"

#include <Eigen/SparseLU>
#include <Eigen/IterativeLinearSolvers>

namespace pmdrift::fv {

SpMat laplacian_matrix(const Grid& grid) {
  const int nx = grid.cells(0);
  const int ny = grid.dim() == 2 ? grid.cells(1) : 1;
  const double ax = 1.0 / (grid.spacing(0) * grid.spacing(0));
  const double ay = grid.dim() == 2 ? 1.0 / (grid.spacing(1) * grid.spacing(1)) : 0.0;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(grid.cell_count() * 5);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int c = static_cast<int>(grid.index(i, j));
      double diag = 2.0 * ax + (grid.dim() == 2 ? 2.0 * ay : 0.0);
      if (i > 0) trip.emplace_back(c, grid.index(i - 1, j), -ax);
      if (i + 1 < nx) trip.emplace_back(c, grid.index(i + 1, j), -ax);
      if (grid.dim() == 2) {
        if (j > 0) trip.emplace_back(c, grid.index(i, j - 1), -ay);
        if (j + 1 < ny) trip.emplace_back(c, grid.index(i, j + 1), -ay);
      }
      trip.emplace_back(c, c, diag);
    }
  SpMat L(grid.cell_count(), grid.cell_count());
  L.setFromTriplets(trip.begin(), trip.end());
  return L;
}

SpMat upwind_drift_matrix(const VectorFieldSpec& V) {
  const Grid& g = V.grid();
  const int nx = g.cells(0);
  const int ny = g.dim() == 2 ? g.cells(1) : 1;
  const double ihx = 1.0 / g.spacing(0);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(g.cell_count() * 4);
  auto add_face = [&](int left, int right, double vf, double ih) {
    // Flux F = vf * v_up through the face; divergence gets +F/h on the left
    // cell and -F/h on the right cell; negative index marks the exterior.
    const int up = vf > 0.0 ? left : right;
    if (up < 0) return;  // inflow from outside carries value zero
    if (left >= 0) trip.emplace_back(left, up, vf * ih);
    if (right >= 0) trip.emplace_back(right, up, -vf * ih);
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const int left = i > 0 ? static_cast<int>(g.index(i - 1, j)) : -1;
      const int right = i < nx ? static_cast<int>(g.index(i, j)) : -1;
      add_face(left, right, V.face_x(i, j), ihx);
    }
  if (g.dim() == 2) {
    const double ihy = 1.0 / g.spacing(1);
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int left = j > 0 ? static_cast<int>(g.index(i, j - 1)) : -1;
        const int right = j < ny ? static_cast<int>(g.index(i, j)) : -1;
        add_face(left, right, V.face_y(i, j), ihy);
      }
  }
  SpMat D(g.cell_count(), g.cell_count());
  D.setFromTriplets(trip.begin(), trip.end());
  return D;
}

Field apply(const SpMat& A, const Field& x) {
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), x.size());
  Eigen::VectorXd y = A * xv;
  Field out(static_cast<std::size_t>(y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) out[i] = y[i];
  return out;
}

MMatrixCheck check_m_matrix(const SpMat& A) {
  MMatrixCheck r{0.0, std::numeric_limits<double>::infinity()};
  Eigen::VectorXd colsum = Eigen::VectorXd::Zero(A.cols());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      if (it.row() != it.col()) r.worst_offdiag = std::max(r.worst_offdiag, it.value());
      colsum[it.col()] += it.value();
    }
  r.worst_column_sum = colsum.minCoeff();
  return r;
}

Eigen::VectorXd solve_sparse(const SpMat& A, const Eigen::VectorXd& b, const Grid& grid,
                             double lin_tol) {
  if (grid.dim() == 2) {
    Eigen::BiCGSTAB<SpMat, Eigen::DiagonalPreconditioner<double>> it;
    it.setTolerance(lin_tol);
    it.setMaxIterations(8 * static_cast<int>(grid.cell_count()));
    it.compute(A);
    Eigen::VectorXd x = it.solve(b);
    if (it.info() == Eigen::Success) return x;
  }
  Eigen::SparseLU<SpMat> lu;
  lu.compute(A);
  return lu.solve(b);
}

}  // namespace pmdrift::fv
