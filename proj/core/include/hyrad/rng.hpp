#pragma once

#include <cstdint>
#include <random>

#include "hyrad/types.hpp"

namespace hyrad {

/// splitmix64 step; used to derive independent substream seeds from a
/// master seed so that parallel and sequential runs draw identical values.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0x632be59bd9b4e019ULL * (stream + 1));
  splitmix64(s);
  return splitmix64(s);
}

/// Deterministic RNG with explicit Box-Muller normals. std::normal_distribution
/// is implementation-defined, so the normal path is spelled out here to keep
/// emitted numbers stable for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Circularly-symmetric complex normal, E|z|^2 = 1.
  cdouble cnormal() {
    const double re = normal();
    const double im = normal();
    return cdouble(re, im) * M_SQRT1_2;
  }

  Vec cnormal_vec(Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = cnormal();
    return v;
  }

  /// Random +/-1 entries.
  RealVec rademacher(Eigen::Index n) {
    RealVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = (gen_() & 1u) ? 1.0 : -1.0;
    return v;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace hyrad
