#include "langevin/covariates.hpp"

#include <numbers>
#include <sstream>
#include <vector>

#include "langevin/random.hpp"

namespace langevin {

WaveletParams scenario1_wavelet(int j, SineAxis axis) {
  WaveletParams w;
  switch (j) {
    case 1:
      w = {6.0, 0.0, 0.0, 0.6, 0.2, 0.4, 0.4, axis};
      break;
    case 2:
      w = {6.0, -2.0, std::numbers::pi / 2, 0.1, 0.5, 0.4, 0.4, axis};
      break;
    default:
      throw InvalidArgument("scenario-1 wavelet index must be 1 or 2");
  }
  return w;
}

CovariateProvider CovariateProvider::wavelet(const WaveletParams& params) {
  params.validate();
  return CovariateProvider(Wavelet{params});
}

CovariateProvider CovariateProvider::squared_distance(const Point& center) {
  if (!center.allFinite()) throw InvalidArgument("center must be finite");
  return CovariateProvider(SquaredDistance{center});
}

CovariateProvider CovariateProvider::gridded(Raster raster) {
  return gridded(std::make_shared<const Raster>(std::move(raster)));
}

CovariateProvider CovariateProvider::gridded(std::shared_ptr<const Raster> raster) {
  if (!raster) throw InvalidArgument("null raster");
  return CovariateProvider(Gridded{std::move(raster)});
}

double CovariateProvider::value(const Point& p) const {
  return std::visit(
      [&](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Wavelet>)
          return wavelet_value(c.params, p);
        else if constexpr (std::is_same_v<T, SquaredDistance>)
          return (p - c.center).squaredNorm();
        else
          return interpolate(*c.raster, p);
      },
      variant_);
}

Vector2 CovariateProvider::gradient(const Point& p) const {
  return std::visit(
      [&](const auto& c) -> Vector2 {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Wavelet>)
          return wavelet_gradient(c.params, p);
        else if constexpr (std::is_same_v<T, SquaredDistance>)
          return 2.0 * (p - c.center);
        else
          return interpolate_gradient(*c.raster, p);
      },
      variant_);
}

ValueAndGradient CovariateProvider::value_and_gradient(const Point& p) const {
  return {value(p), gradient(p)};
}

std::optional<Box<double>> CovariateProvider::domain() const {
  if (const auto* g = std::get_if<Gridded>(&variant_))
    return g->raster->geometry().bounds();
  return std::nullopt;
}

std::string CovariateProvider::describe() const {
  std::ostringstream out;
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Wavelet>) {
          const auto& w = c.params;
          out << "wavelet(alpha=" << w.alpha << ", a=(" << w.a1 << ", " << w.a2
              << "), omega=(" << w.omega1 << ", " << w.omega2 << "), sigma=("
              << w.sigma1 << ", " << w.sigma2 << "), second_sine_axis="
              << (w.second_sine_axis == SineAxis::z1 ? "z1" : "z2") << ")";
        } else if constexpr (std::is_same_v<T, SquaredDistance>) {
          out << "sqdist(center=(" << c.center.x() << ", " << c.center.y() << "))";
        } else {
          const auto& g = c.raster->geometry();
          out << "raster(" << g.n_x << "x" << g.n_y << ", cell=" << g.cell_size << ")";
        }
      },
      variant_);
  return out.str();
}

Raster rasterize(const CovariateProvider& c, const Geometry& geometry) {
  return sample_on_grid(geometry, [&](const Point& p) { return c.value(p); });
}

Raster generate_random_field(const RandomFieldSpec& spec) {
  spec.validate();
  const auto& g = spec.geometry;

  Rng rng(spec.seed);
  Raster::Values noise(g.n_y, g.n_x);
  for (Eigen::Index j = 0; j < g.n_y; ++j)
    for (Eigen::Index i = 0; i < g.n_x; ++i) noise(j, i) = rng.uniform();

  // Kernel offsets: cell centers at distance <= rho (inclusive).
  const double reach = spec.rho / g.cell_size;
  const auto r = static_cast<Eigen::Index>(std::floor(reach));
  std::vector<std::pair<Eigen::Index, Eigen::Index>> offsets;
  for (Eigen::Index dj = -r; dj <= r; ++dj)
    for (Eigen::Index di = -r; di <= r; ++di)
      if (double(di * di + dj * dj) <= reach * reach) offsets.emplace_back(di, dj);

  Raster::Values smooth(g.n_y, g.n_x);
  for (Eigen::Index j = 0; j < g.n_y; ++j) {
    for (Eigen::Index i = 0; i < g.n_x; ++i) {
      double sum = 0.0;
      int count = 0;
      for (const auto& [di, dj] : offsets) {
        const Eigen::Index ii = i + di;
        const Eigen::Index jj = j + dj;
        if (ii < 0 || jj < 0 || ii >= g.n_x || jj >= g.n_y) continue;
        sum += noise(jj, ii);
        ++count;
      }
      smooth(j, i) = sum / count;
    }
  }

  const double lo = smooth.minCoeff();
  const double hi = smooth.maxCoeff();
  if (!(hi > lo)) throw DegenerateField("smoothed field is constant; cannot normalize");
  smooth = (smooth.array() - lo) / (hi - lo);
  return Raster(g, std::move(smooth));
}

}  // namespace langevin
