#pragma once

// Field evaluation off the boundary: P(x, s) from solved densities and
// p(x, t) on rectangular grids by Talbot inversion of M solves per time.

#include <cstdint>

#include "passage/system.hpp"
#include "passage/talbot.hpp"

namespace passage {

struct FieldValue {
  Complex value;
  /// Within five local node spacings of a boundary, where the plain
  /// trapezoid rule loses accuracy (no near-singular correction is applied).
  bool near_boundary = false;
};

/// P(x, s) = G(x - x*) + D[sigma_D](x) + S[sigma_N](x) for x outside all bodies.
FieldValue eval_transform_field(const Vec2& x, const DiscretizedScene& scene, const KernelContext& ctx,
                                const DensitySolution& solution);

struct GridSpec {
  double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
  int nx = 2, ny = 2;

  /// Throws std::invalid_argument for empty ranges or fewer than two points
  /// per axis.
  void validate() const;
  double x(int i) const { return xmin + (xmax - xmin) * i / (nx - 1); }
  double y(int j) const { return ymin + (ymax - ymin) * j / (ny - 1); }
};

enum CellState : std::uint8_t { kCellOpen = 0, kCellInside = 1, kCellFailed = 2 };

struct FieldGrid {
  GridSpec spec;
  double t = 0.0;
  int M = 0;
  int solves = 0;
  /// values(j, i) at (x(i), y(j)); NaN where the cell is not open.
  Eigen::MatrixXd values;
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> state;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> near_boundary;
};

/// Solves the system at the M Talbot nodes for time t, then inverts the
/// field at every open cell. Early-time values may be slightly negative
/// (contour quadrature halo) and are kept as computed.
FieldGrid eval_density_grid(const Scene& scene, int base_n, const GridSpec& grid, double t,
                            int M = kDefaultTalbotNodes, const SolverOptions& options = {});

}  // namespace passage
