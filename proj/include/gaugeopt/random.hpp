#pragma once

#include <cstdint>
#include <random>

#include "gaugeopt/types.hpp"

namespace gaugeopt {

/// Seeded 64-bit generator (mt19937_64) with portable variate transforms.
///
/// The standard library distributions are implementation-defined, so the
/// uniform, normal and gamma transforms are written out here to keep
/// instances identical across toolchains. Independent streams are derived
/// with splitmix64 so each generated array can be re-created on its own.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Child generator for stream `index`; does not advance this generator.
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next() { return engine_(); }
  double uniform();  // [0, 1), 53 random bits
  double uniform_open();  // (0, 1)
  double normal();
  double gamma(double shape);  // unit scale
  /// sign * G^{1/beta}, G ~ Gamma(1/beta, 1).
  double generalized_normal(double beta);

  Vec normal_vec(Eigen::Index n);
  Mat normal_mat(Eigen::Index rows, Eigen::Index cols);
  Vec unit_vec(Eigen::Index n);  // uniform on the sphere

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace gaugeopt
