#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "polykin/vec3.hpp"

namespace polykin {

/// Result of a Monte Carlo estimator.
struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  double min_sample = 0.0;
  double max_sample = 0.0;
};

using Rng = std::mt19937_64;

/// Samples are processed in chunks of this size. Each chunk owns an RNG stream
/// derived from (seed, chunk index), so results do not depend on the number of
/// worker threads.
inline constexpr std::size_t kChunkSize = 4096;

/// Worker count: hardware concurrency, or POLYKIN_THREADS (at most 256) when set.
[[nodiscard]] unsigned worker_count();

/// RNG for one chunk of one estimator.
[[nodiscard]] Rng chunk_rng(std::uint64_t seed, std::uint64_t chunk);

/// Running sum statistics; merged pairwise in chunk order.
struct SampleStats {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double min = 0.0;
  double max = 0.0;

  void add(double x);
  static SampleStats merge(const SampleStats& a, const SampleStats& b);
};

/// Runs `sample(rng)` N times and returns mean and standard error of the mean.
/// `sample` must be safe to call concurrently from several threads.
[[nodiscard]] MCEstimate run_mc(std::size_t N, std::uint64_t seed, const std::function<double(Rng&)>& sample);

// Sampling helpers. Distributions are constructed per call so a draw depends
// only on the generator state.
[[nodiscard]] double sample_uniform(Rng& rng);  // [0, 1)
[[nodiscard]] double sample_gamma(Rng& rng, double shape, double scale);
[[nodiscard]] double sample_beta(Rng& rng, double a, double b);
[[nodiscard]] Vec3 sample_sphere(Rng& rng);
/// Each component N(mean_c, sd^2).
[[nodiscard]] Vec3 sample_gaussian(Rng& rng, const Vec3& mean, double sd);

}  // namespace polykin
