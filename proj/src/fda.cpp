#include "mmvd/fda.hpp"

#include <cmath>

namespace mmvd {

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
  const std::size_t n = points_.size();
  if (n < 2) throw std::invalid_argument("grid needs at least 2 points");
  if (points_.front() < 0.0 || points_.back() > 1.0)
    throw std::invalid_argument("grid points must lie in [0,1]");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(points_[i] < points_[i + 1]))
      throw std::invalid_argument("grid points must be strictly increasing");
  }
  // Composite trapezoid weights: (t_{l+1} - t_{l-1}) / 2 interior,
  // half-intervals at the ends.
  weights_.resize(static_cast<Eigen::Index>(n));
  weights_[0] = (points_[1] - points_[0]) / 2.0;
  for (std::size_t i = 1; i + 1 < n; ++i)
    weights_[static_cast<Eigen::Index>(i)] =
        (points_[i + 1] - points_[i - 1]) / 2.0;
  weights_[static_cast<Eigen::Index>(n - 1)] =
      (points_[n - 1] - points_[n - 2]) / 2.0;
}

Grid make_equispaced_grid(int n_points) {
  if (n_points < 2) throw std::invalid_argument("n_points must be >= 2");
  std::vector<double> pts(static_cast<std::size_t>(n_points));
  for (int l = 0; l < n_points; ++l)
    pts[static_cast<std::size_t>(l)] =
        static_cast<double>(l) / static_cast<double>(n_points - 1);
  return Grid(std::move(pts));
}

double l2_sq_dist(const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                  const Grid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (f.size() != n || g.size() != n)
    throw std::invalid_argument("curve length does not match grid");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = f[i] - g[i];
    acc += grid.quad_weights()[i] * d * d;
  }
  return acc;
}

FunctionalSample::FunctionalSample(Grid grid, Eigen::MatrixXd curves)
    : grid_(std::move(grid)), curves_(std::move(curves)) {
  if (curves_.rows() < 2)
    throw std::invalid_argument("a sample needs at least 2 curves");
  if (curves_.cols() != static_cast<Eigen::Index>(grid_.size()))
    throw std::invalid_argument("curve length does not match grid");
  if (!curves_.allFinite())
    throw std::invalid_argument("curves must be finite");
}

}  // namespace mmvd
