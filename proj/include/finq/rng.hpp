#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include "finq/linalg.hpp"

namespace finq {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Per-sample random stream: sample i of a run seeded with s draws from a
// generator keyed on (s, i). Results are therefore identical for any
// partition of the sample range across workers.
class SampleRng {
 public:
  SampleRng(std::uint64_t seed, std::uint64_t index)
      : eng_(splitmix64(splitmix64(seed) + index)) {}

  // [0, 1) with 53-bit resolution
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // (0, hi]
  double positive(double hi) { return hi * (1.0 - uniform01()); }

  double normal() {
    const double u = 1.0 - uniform01();
    const double v = uniform01();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.2831853071795864769 * v);
  }

  Vector uniform_vec(int dim, double lo = -1.0, double hi = 1.0) {
    Vector out(dim);
    for (int i = 0; i < dim; ++i) out[i] = uniform(lo, hi);
    return out;
  }

  Vector unit_vector(int dim) {
    Vector y(dim);
    double n = 0.0;
    do {
      for (int i = 0; i < dim; ++i) y[i] = normal();
      n = y.norm();
    } while (n < 1e-8);
    return y / n;
  }

 private:
  std::mt19937_64 eng_;
};

// Deterministic sharded reduction over seeded samples. merge must be
// associative and insensitive to element order within a shard boundary
// (max / min / AND style accumulators); workers only change scheduling,
// never the merged result. Shards are merged in index order, so ties may
// be resolved toward the lowest sample index.
template <class State, class PerSample, class Merge>
State scan_reduce(int samples, std::uint64_t seed, int workers, State init,
                  PerSample per_sample, Merge merge) {
  workers = std::clamp(workers, 1, std::max(1, samples));
  if (workers == 1) {
    State acc = init;
    for (int i = 0; i < samples; ++i) {
      SampleRng rng(seed, static_cast<std::uint64_t>(i));
      per_sample(acc, i, rng);
    }
    return acc;
  }
  std::vector<State> parts(static_cast<std::size_t>(workers), init);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const int chunk = (samples + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = w * chunk;
    const int hi = std::min(samples, lo + chunk);
    pool.emplace_back([&parts, &per_sample, &init, seed, w, lo, hi] {
      State acc = init;
      for (int i = lo; i < hi; ++i) {
        SampleRng rng(seed, static_cast<std::uint64_t>(i));
        per_sample(acc, i, rng);
      }
      parts[static_cast<std::size_t>(w)] = std::move(acc);
    });
  }
  for (auto& t : pool) t.join();
  State acc = init;
  for (const auto& p : parts) merge(acc, p);
  return acc;
}

// Max-deviation accumulator. The first index achieving the maximum wins,
// which keeps the reported worst sample independent of the worker count.
struct DeviationScan {
  double max_deviation = 0.0;
  long long worst_index = -1;

  void offer(double dev, long long index) {
    if (worst_index < 0 || dev > max_deviation) {
      max_deviation = dev;
      worst_index = index;
    }
  }

  void merge(const DeviationScan& other) {
    if (other.worst_index < 0) return;
    if (worst_index < 0 || other.max_deviation > max_deviation) {
      max_deviation = other.max_deviation;
      worst_index = other.worst_index;
    }
  }
};

}  // namespace finq
