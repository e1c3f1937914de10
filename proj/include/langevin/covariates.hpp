#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "langevin/raster.hpp"

namespace langevin {

// Which coordinate feeds the second sine factor of the wavelet covariate.
// The default `z1` applies both sines to z1; `z2` gives the
// separable two-dimensional variant.
enum class SineAxis { z1, z2 };

// c(z) = alpha * exp(-(z-a)' diag(sigma1, sigma2) (z-a))
//              * sin(omega1 (z1 - a1)) * sin(omega2 (s - a2)),
// with s = z1 or z2 according to `second_sine_axis`.
struct WaveletParams {
  double alpha = 1.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double omega1 = 1.0;
  double omega2 = 1.0;
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  SineAxis second_sine_axis = SineAxis::z1;

  void validate() const {
    if (!(sigma1 > 0) || !(sigma2 > 0))
      throw InvalidArgument("wavelet sigma1 and sigma2 must be positive");
  }
};

template <typename Scalar>
Scalar wavelet_value(const WaveletParams& w, const Point2<Scalar>& p) {
  using std::exp;
  using std::sin;
  const Scalar d1 = p.x() - Scalar(w.a1);
  const Scalar d2 = p.y() - Scalar(w.a2);
  const Scalar s = w.second_sine_axis == SineAxis::z1 ? p.x() : p.y();
  const Scalar gauss = exp(-(Scalar(w.sigma1) * d1 * d1 + Scalar(w.sigma2) * d2 * d2));
  return Scalar(w.alpha) * gauss * sin(Scalar(w.omega1) * d1) *
         sin(Scalar(w.omega2) * (s - Scalar(w.a2)));
}

template <typename Scalar>
Point2<Scalar> wavelet_gradient(const WaveletParams& w, const Point2<Scalar>& p) {
  using std::cos;
  using std::exp;
  using std::sin;
  const Scalar d1 = p.x() - Scalar(w.a1);
  const Scalar d2 = p.y() - Scalar(w.a2);
  const Scalar s = w.second_sine_axis == SineAxis::z1 ? p.x() : p.y();
  const Scalar gauss = exp(-(Scalar(w.sigma1) * d1 * d1 + Scalar(w.sigma2) * d2 * d2));
  const Scalar sin1 = sin(Scalar(w.omega1) * d1);
  const Scalar sin2 = sin(Scalar(w.omega2) * (s - Scalar(w.a2)));
  const Scalar dsin1 = Scalar(w.omega1) * cos(Scalar(w.omega1) * d1);
  const Scalar dsin2 = Scalar(w.omega2) * cos(Scalar(w.omega2) * (s - Scalar(w.a2)));

  // Product rule over gauss * sin1 * sin2.
  Scalar gx = -Scalar(2 * w.sigma1) * d1 * sin1 * sin2 + dsin1 * sin2;
  Scalar gy = -Scalar(2 * w.sigma2) * d2 * sin1 * sin2;
  if (w.second_sine_axis == SineAxis::z1)
    gx += sin1 * dsin2;
  else
    gy += sin1 * dsin2;
  return Point2<Scalar>(gx, gy) * (Scalar(w.alpha) * gauss);
}

// The two scenario-1 wavelets, j = 1, 2.
WaveletParams scenario1_wavelet(int j, SineAxis axis = SineAxis::z1);

struct ValueAndGradient {
  double value;
  Vector2 gradient;
};

// Uniform value+gradient access over analytic and gridded covariates.
class CovariateProvider {
 public:
  struct Wavelet {
    WaveletParams params;
  };
  struct SquaredDistance {
    Point center;
  };
  struct Gridded {
    std::shared_ptr<const Raster> raster;
  };
  using Variant = std::variant<Wavelet, SquaredDistance, Gridded>;

  static CovariateProvider wavelet(const WaveletParams& params);
  static CovariateProvider squared_distance(const Point& center = Point::Zero());
  static CovariateProvider gridded(Raster raster);
  static CovariateProvider gridded(std::shared_ptr<const Raster> raster);

  const Variant& variant() const { return variant_; }

  double value(const Point& p) const;
  Vector2 gradient(const Point& p) const;
  ValueAndGradient value_and_gradient(const Point& p) const;

  // Interpolation domain for gridded covariates; analytic ones are defined
  // on the whole plane and return nullopt.
  std::optional<Box<double>> domain() const;

  std::string describe() const;

 private:
  explicit CovariateProvider(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

inline ValueAndGradient covariate_value_and_gradient(const CovariateProvider& c,
                                                     const Point& p) {
  return c.value_and_gradient(p);
}

// Samples a covariate at the nodes of `geometry`.
Raster rasterize(const CovariateProvider& c, const Geometry& geometry);

struct RandomFieldSpec {
  Geometry geometry;
  double rho = 1.0;  // smoothing radius, coordinate units
  std::uint64_t seed = 0;

  void validate() const {
    geometry.validate();
    if (!(rho > 0)) throw InvalidArgument("rho must be positive");
  }
};

// Uniform(0,1) noise (drawn row by row, x fastest) smoothed by a circular
// moving average over every cell whose center is within rho of the target
// center, truncated at the grid edge, then min-max normalized to [0, 1].
// Throws DegenerateField when the smoothed field is constant.
Raster generate_random_field(const RandomFieldSpec& spec);

}  // namespace langevin
