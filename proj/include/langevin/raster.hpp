#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "langevin/errors.hpp"

namespace langevin {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

using Point = Point2<double>;
using Vector2 = Eigen::Vector2d;

// Axis-aligned rectangle [lo.x, hi.x] x [lo.y, hi.y].
template <typename Scalar>
struct Box {
  Point2<Scalar> lo;
  Point2<Scalar> hi;

  bool contains(const Point2<Scalar>& p) const {
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() &&
           p.y() <= hi.y();
  }

  Point2<Scalar> clamp(const Point2<Scalar>& p) const {
    return p.cwiseMax(lo).cwiseMin(hi);
  }

  Box intersect(const Box& other) const {
    return {lo.cwiseMax(other.lo), hi.cwiseMin(other.hi)};
  }
};

// Square-cell grid. Node (i, j) is the center of the i-th cell along x and
// the j-th cell along y; (x_min, y_min) is the center of the lower-left cell.
template <typename Scalar>
struct GridGeometry {
  Scalar x_min{0};
  Scalar y_min{0};
  Scalar cell_size{1};
  Eigen::Index n_x{2};
  Eigen::Index n_y{2};

  Scalar x_max() const { return x_min + Scalar(n_x - 1) * cell_size; }
  Scalar y_max() const { return y_min + Scalar(n_y - 1) * cell_size; }

  Point2<Scalar> center(Eigen::Index i, Eigen::Index j) const {
    return {x_min + Scalar(i) * cell_size, y_min + Scalar(j) * cell_size};
  }

  // Convex hull of the cell centers, i.e. where the interpolant is defined.
  Box<Scalar> bounds() const {
    return {Point2<Scalar>(x_min, y_min), Point2<Scalar>(x_max(), y_max())};
  }

  Eigen::Index cell_count() const { return n_x * n_y; }

  void validate() const {
    if (!(cell_size > Scalar(0)) || !std::isfinite(double(cell_size)))
      throw InvalidArgument("grid cell_size must be positive and finite");
    if (n_x < 2 || n_y < 2)
      throw InvalidArgument("grid needs at least 2x2 nodes");
    if (!std::isfinite(double(x_min)) || !std::isfinite(double(y_min)))
      throw InvalidArgument("grid origin must be finite");
  }

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

// Immutable covariate grid. Values are stored with rows indexed by y and
// columns by x, so `values()(j, i)` is the node at center(i, j).
template <typename Scalar>
class GridRaster {
 public:
  using Values =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  GridRaster(const GridGeometry<Scalar>& geometry, Values values)
      : geometry_(geometry), values_(std::move(values)) {
    geometry_.validate();
    if (values_.rows() != geometry_.n_y || values_.cols() != geometry_.n_x)
      throw InvalidArgument("raster values do not match grid dimensions");
    if (!values_.allFinite())
      throw InvalidArgument("raster values must be finite");
  }

  const GridGeometry<Scalar>& geometry() const { return geometry_; }
  const Values& values() const { return values_; }

  Scalar operator()(Eigen::Index i, Eigen::Index j) const {
    return values_(j, i);
  }

 private:
  GridGeometry<Scalar> geometry_;
  Values values_;
};

using Raster = GridRaster<double>;
using Geometry = GridGeometry<double>;

namespace detail {

template <typename Scalar>
struct CellLocation {
  Eigen::Index i;
  Eigen::Index j;
  Scalar u;  // fractional offset along x inside the cell, in [0, 1]
  Scalar w;  // same along y
};

// Points on a shared cell edge belong to the cell to the upper-right; the
// last row/column of nodes belongs to the final cell.
template <typename Scalar>
CellLocation<Scalar> locate(const GridGeometry<Scalar>& g,
                            const Point2<Scalar>& p) {
  if (!p.allFinite() || !g.bounds().contains(p)) {
    std::ostringstream msg;
    msg << "point (" << p.x() << ", " << p.y()
        << ") outside interpolation domain [" << g.x_min << ", " << g.x_max()
        << "] x [" << g.y_min << ", " << g.y_max() << "]";
    throw OutOfDomain(msg.str());
  }
  using std::floor;
  const Scalar fx = (p.x() - g.x_min) / g.cell_size;
  const Scalar fy = (p.y() - g.y_min) / g.cell_size;
  const auto i = std::clamp<Eigen::Index>(
      static_cast<Eigen::Index>(floor(fx)), 0, g.n_x - 2);
  const auto j = std::clamp<Eigen::Index>(
      static_cast<Eigen::Index>(floor(fy)), 0, g.n_y - 2);
  return {i, j, fx - Scalar(i), fy - Scalar(j)};
}

}  // namespace detail

// Bilinear interpolant through the four cell-center nodes around `p`.
template <typename Scalar>
Scalar interpolate(const GridRaster<Scalar>& raster, const Point2<Scalar>& p) {
  const auto c = detail::locate(raster.geometry(), p);
  const Scalar v00 = raster(c.i, c.j);
  const Scalar v10 = raster(c.i + 1, c.j);
  const Scalar v01 = raster(c.i, c.j + 1);
  const Scalar v11 = raster(c.i + 1, c.j + 1);
  const Scalar one(1);
  return (one - c.u) * (one - c.w) * v00 + c.u * (one - c.w) * v10 +
         (one - c.u) * c.w * v01 + c.u * c.w * v11;
}

// Exact gradient of the bilinear interpolant inside the enclosing cell.
// Discontinuous across cell edges; edges use the upper-right cell.
template <typename Scalar>
Point2<Scalar> interpolate_gradient(const GridRaster<Scalar>& raster,
                                    const Point2<Scalar>& p) {
  const auto& g = raster.geometry();
  const auto c = detail::locate(g, p);
  const Scalar v00 = raster(c.i, c.j);
  const Scalar v10 = raster(c.i + 1, c.j);
  const Scalar v01 = raster(c.i, c.j + 1);
  const Scalar v11 = raster(c.i + 1, c.j + 1);
  const Scalar one(1);
  const Scalar dx = ((one - c.w) * (v10 - v00) + c.w * (v11 - v01)) / g.cell_size;
  const Scalar dy = ((one - c.u) * (v01 - v00) + c.u * (v11 - v10)) / g.cell_size;
  return {dx, dy};
}

// Fills a raster by evaluating `f` at every cell center.
template <typename Scalar, typename Fn>
GridRaster<Scalar> sample_on_grid(const GridGeometry<Scalar>& geometry, Fn&& f) {
  geometry.validate();
  typename GridRaster<Scalar>::Values values(geometry.n_y, geometry.n_x);
  for (Eigen::Index j = 0; j < geometry.n_y; ++j)
    for (Eigen::Index i = 0; i < geometry.n_x; ++i)
      values(j, i) = f(geometry.center(i, j));
  return GridRaster<Scalar>(geometry, std::move(values));
}

}  // namespace langevin
