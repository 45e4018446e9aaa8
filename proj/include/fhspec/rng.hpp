#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace fhspec {

// FNV-1a 64-bit hash; used for content digests and child-seed derivation.
inline uint64_t fnv1a64(std::string_view s, uint64_t h = 14695981039346656037ull) {
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

inline uint64_t fnv1a64_u64(uint64_t v, uint64_t h = 14695981039346656037ull) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= 1099511628211ull;
  }
  return h;
}

// Deterministic random stream.  All samplers are implemented on top of the
// raw mt19937_64 output so that draws are bit-identical across standard
// library implementations (std::*_distribution makes no such promise).
class RngStream {
 public:
  explicit RngStream(uint64_t seed) : seed_(seed), eng_(seed) {}

  uint64_t seed() const { return seed_; }
  uint64_t raw() { return eng_(); }

  // Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53; }

  // Uniform integer in [0, n).
  int uniform_int(int n) {
    const uint64_t un = static_cast<uint64_t>(n);
    const uint64_t lim = UINT64_MAX - UINT64_MAX % un;  // rejection: no modulo bias
    uint64_t x;
    do {
      x = eng_();
    } while (x >= lim);
    return static_cast<int>(x % un);
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double cauchy(double loc, double scale) {
    return loc + scale * std::tan(3.141592653589793238462643383279502884 * (uniform() - 0.5));
  }

  // Gamma(shape, rate) via Marsaglia-Tsang; shape < 1 handled by boosting.
  double gamma(double shape, double rate) {
    return std::exp(log_gamma(shape)) / rate;
  }

  // log of a Gamma(shape, 1) draw; stays finite for arbitrarily small shapes
  // where the draw itself would underflow to zero.
  double log_gamma(double shape) {
    if (shape < 1.0) {
      // Gamma(a) = Gamma(a+1) * U^(1/a)
      return log_gamma(shape + 1.0) + std::log(uniform()) / shape;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return std::log(d * v);
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return std::log(d * v);
    }
  }

  double beta(double a, double b) {
    // log-space ratio keeps tiny-shape draws from collapsing to 0/0
    return 1.0 / (1.0 + std::exp(-beta_logit(a, b)));
  }

  // logit of a Beta(a, b) draw
  double beta_logit(double a, double b) { return log_gamma(a) - log_gamma(b); }

  // Derive an independent child stream labelled by purpose.  Depends only on
  // this stream's seed and the label, not on how much has been consumed.
  RngStream child(std::string_view label) const {
    return RngStream(fnv1a64(label, fnv1a64_u64(seed_)));
  }

 private:
  uint64_t seed_;
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fhspec
