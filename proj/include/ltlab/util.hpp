#pragma once

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ltlab {

/// Neumaier-compensated accumulator. Deterministic for a fixed visit order.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

/// Compensated sum of an array in ascending index order.
inline double compensated_total(const Eigen::Ref<const Eigen::ArrayXd>& v) {
  CompensatedSum acc;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc.add(v[i]);
  return acc.value();
}

/// SplitMix64 finalizer; full-avalanche 64-bit mix.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a over raw bytes; used for content digests in tests and provenance.
inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

/// Run fn(i) for i in [0, count). Results must be written to disjoint
/// per-index slots; the work split never affects the output.
template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  if (count <= 0) return;
  if (threads <= 1 || count == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_workers = std::min(threads, count);
  pool.reserve(static_cast<std::size_t>(n_workers));
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline Eigen::ArrayXd linspace(double lo, double hi, Eigen::Index n) {
  if (n < 2) throw std::invalid_argument("linspace: need at least 2 points");
  return Eigen::ArrayXd::LinSpaced(n, lo, hi);
}

/// n log-spaced points in [lo, hi], lo > 0.
inline Eigen::ArrayXd logspace(double lo, double hi, Eigen::Index n) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("logspace: need 0 < lo < hi");
  if (n < 2) throw std::invalid_argument("logspace: need at least 2 points");
  Eigen::ArrayXd e = Eigen::ArrayXd::LinSpaced(n, std::log(lo), std::log(hi));
  return e.exp();
}

/// Shortest round-trip decimal form of a double (%.17g trimmed).
inline std::string format_double(double x) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace ltlab
