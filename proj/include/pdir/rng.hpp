#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "pdir/common.hpp"

namespace pdir {

// Reproducible random stream. The algorithm is part of the file-format level
// contract: mt19937_64 seeded directly with the given seed; uniforms take the
// top 53 bits shifted into (0,1); normals via Box-Muller with a cached spare;
// gamma variates via Marsaglia-Tsang (shape >= 1) with the standard
// power-of-uniform boost for shape < 1, computed in log space so tiny shapes
// cannot underflow to zero.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {
    // (x >> 11) in [0, 2^53); +0.5 keeps the result strictly inside (0,1).
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // log of a Gamma(shape, 1) variate.
  double log_gamma_draw(double shape) {
    if (!(shape > 0.0)) fail("NonPositiveParameter", "gamma shape must be positive");
    if (shape < 1.0) return log_gamma_draw(shape + 1.0) + std::log(uniform()) / shape;
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double t = 1.0 + c * x;
      if (t <= 0.0) continue;
      double v = t * t * t;
      double u = uniform();
      double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2 || std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
        return std::log(d) + std::log(v);
    }
  }

  // Dirichlet draw by normalized gammas; strictly positive components.
  std::vector<double> dirichlet(std::span<const double> shapes) {
    std::vector<double> lg(shapes.size());
    double lse = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < shapes.size(); ++i) {
      lg[i] = log_gamma_draw(shapes[i]);
      lse = std::max(lse, lg[i]);
    }
    double sum = 0.0;
    for (double v : lg) sum += std::exp(v - lse);
    double log_total = lse + std::log(sum);
    std::vector<double> out(shapes.size());
    for (size_t i = 0; i < shapes.size(); ++i) out[i] = std::exp(lg[i] - log_total);
    return out;
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pdir
