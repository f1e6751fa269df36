#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace mmvd {

/// Discretization grid on [0,1] with precomputed trapezoid quadrature
/// weights. Non-equispaced grids are allowed; points must be strictly
/// increasing with first >= 0 and last <= 1.
class Grid {
 public:
  explicit Grid(std::vector<double> points);

  const std::vector<double>& points() const { return points_; }
  const Eigen::VectorXd& quad_weights() const { return weights_; }
  std::size_t size() const { return points_.size(); }

  bool operator==(const Grid& other) const { return points_ == other.points_; }

 private:
  std::vector<double> points_;
  Eigen::VectorXd weights_;
};

/// n_points equispaced values (l-1)/(n_points-1), l = 1..n_points.
Grid make_equispaced_grid(int n_points);

/// Composite-trapezoid approximation of \int_0^1 (f(t)-g(t))^2 dt.
double l2_sq_dist(const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                  const Grid& grid);

/// One group's curves, row per observation, on a shared grid.
class FunctionalSample {
 public:
  FunctionalSample(Grid grid, Eigen::MatrixXd curves);

  const Grid& grid() const { return grid_; }
  const Eigen::MatrixXd& curves() const { return curves_; }
  Eigen::Index size() const { return curves_.rows(); }

 private:
  Grid grid_;
  Eigen::MatrixXd curves_;
};

}  // namespace mmvd
