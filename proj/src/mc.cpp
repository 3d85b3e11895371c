#include "polykin/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

namespace polykin {

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("POLYKIN_THREADS")) {
    try {
      const long cap = std::stol(env);
      // an explicit value may exceed the core count so layouts can be compared anywhere
      if (cap >= 1) n = static_cast<unsigned>(std::min(cap, 256L));
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return n;
}

Rng chunk_rng(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return Rng(seq);
}

void SampleStats::add(double x) {
  if (n == 0) {
    min = max = x;
  } else {
    min = std::min(min, x);
    max = std::max(max, x);
  }
  ++n;
  const double d = x - mean;
  mean += d / static_cast<double>(n);
  m2 += d * (x - mean);
}

SampleStats SampleStats::merge(const SampleStats& a, const SampleStats& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  SampleStats s;
  s.n = a.n + b.n;
  const double na = static_cast<double>(a.n), nb = static_cast<double>(b.n), nt = static_cast<double>(s.n);
  const double d = b.mean - a.mean;
  s.mean = a.mean + d * nb / nt;
  s.m2 = a.m2 + b.m2 + d * d * na * nb / nt;
  s.min = std::min(a.min, b.min);
  s.max = std::max(a.max, b.max);
  return s;
}

namespace {

SampleStats reduce_pairwise(const std::vector<SampleStats>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return v[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return SampleStats::merge(reduce_pairwise(v, lo, mid), reduce_pairwise(v, mid, hi));
}

}  // namespace

MCEstimate run_mc(std::size_t N, std::uint64_t seed, const std::function<double(Rng&)>& sample) {
  if (N == 0) throw std::invalid_argument("run_mc: sample count must be at least 1");
  const std::size_t n_chunks = (N + kChunkSize - 1) / kChunkSize;
  std::vector<SampleStats> chunks(n_chunks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      try {
        Rng rng = chunk_rng(seed, c);
        const std::size_t begin = c * kChunkSize;
        const std::size_t end = std::min(N, begin + kChunkSize);
        SampleStats s;
        for (std::size_t k = begin; k < end; ++k) s.add(sample(rng));
        chunks[c] = s;
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n_chunks);
        return;
      }
    }
  };

  const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n_chunks));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  const SampleStats total = reduce_pairwise(chunks, 0, n_chunks);
  MCEstimate est;
  est.value = total.mean;
  est.n_samples = total.n;
  est.seed = seed;
  est.min_sample = total.min;
  est.max_sample = total.max;
  est.std_error = total.n > 1 ? std::sqrt(total.m2 / static_cast<double>(total.n - 1) / static_cast<double>(total.n)) : 0.0;
  return est;
}

double sample_uniform(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

double sample_gamma(Rng& rng, double shape, double scale) {
  return std::gamma_distribution<double>(shape, scale)(rng);
}

double sample_beta(Rng& rng, double a, double b) {
  // X/(X+Y) with independent gammas; redraw the rare exact 0 or 1
  for (;;) {
    const double x = sample_gamma(rng, a, 1.0);
    const double y = sample_gamma(rng, b, 1.0);
    const double s = x + y;
    if (!(s > 0.0)) continue;
    const double t = x / s;
    if (t > 0.0 && t < 1.0) return t;
  }
}

Vec3 sample_sphere(Rng& rng) {
  const double z = 2.0 * sample_uniform(rng) - 1.0;
  const double phi = 2.0 * std::numbers::pi * sample_uniform(rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

Vec3 sample_gaussian(Rng& rng, const Vec3& mean, double sd) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const double a = nd(rng), b = nd(rng), c = nd(rng);
  return {mean.x + sd * a, mean.y + sd * b, mean.z + sd * c};
}

}  // namespace polykin
