#pragma once

// Seeded Monte Carlo oracle for every fading-averaged quantity.
//
// Draws are grouped into fixed-size blocks; block b always uses the stream
// seeded from (seed, b), so results do not depend on the number of workers.
// Per-block Welford accumulators are merged in block order.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "fblrelay/link_layer.hpp"
#include "fblrelay/types.hpp"

namespace fblrelay {

struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

/// Streaming mean/variance (Welford), mergeable (Chan et al.).
class Welford {
 public:
  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  void merge(const Welford& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double n = static_cast<double>(n_ + o.n_);
    const double delta = o.mean_ - mean_;
    mean_ += delta * static_cast<double>(o.n_) / n;
    m2_ += o.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(o.n_) / n;
    n_ += o.n_;
  }

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance.
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Independent substream `stream` of the generator family selected by `seed`.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream);

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

/// Three independent Exp(1) gains by inversion, z = -ln u.
FadingDraw draw_fading(StreamRng& rng);

inline constexpr std::uint64_t kMcBlockSize = 1u << 15;

/// Runs n draws split into blocks of kMcBlockSize, in parallel over blocks.
/// Each block gets a fresh Acc and calls step(rng, acc) once per draw; the
/// block accumulators are merged in block order. `step` must be callable
/// concurrently.
template <class Acc, class Step>
Acc run_blocks_with(std::uint64_t n, std::uint64_t seed, const Step& step, unsigned workers = 0) {
  const std::uint64_t blocks = (n + kMcBlockSize - 1) / kMcBlockSize;
  std::vector<Acc> partial(blocks);
  std::atomic<std::uint64_t> next{0};

  auto work = [&] {
    for (std::uint64_t b = next++; b < blocks; b = next++) {
      StreamRng rng(seed, b);
      const std::uint64_t count = std::min(kMcBlockSize, n - b * kMcBlockSize);
      Acc acc{};
      for (std::uint64_t i = 0; i < count; ++i) step(rng, acc);
      partial[b] = std::move(acc);
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  if (workers > blocks) workers = static_cast<unsigned>(std::max<std::uint64_t>(blocks, 1));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  Acc total{};
  for (const auto& p : partial) total.merge(p);
  return total;
}

/// Mean and variance of sample(rng) over n draws.
template <class Sample>
Welford run_blocks(std::uint64_t n, std::uint64_t seed, const Sample& sample,
                   unsigned workers = 0) {
  return run_blocks_with<Welford>(
      n, seed, [&sample](StreamRng& rng, Welford& acc) { acc.add(sample(rng)); }, workers);
}

McEstimate to_estimate(const Welford& acc, std::uint64_t seed);

/// Twin of expected_error_single: mean of block_error(z g, r, m).
McEstimate mc_expected_error_single(double mean_gain, double r, Blocklength m,
                                    const SystemParams& params, std::uint64_t n,
                                    std::uint64_t seed);

/// Twin of expected_error_mrc: mean of block_error(z1 g1 + z3 g3, r, m).
McEstimate mc_expected_error_mrc(double r, Blocklength m, const LinkGains& gains,
                                 const SystemParams& params, std::uint64_t n, std::uint64_t seed);

/// Twin of expected_overall_error: mean of the per-period overall error.
McEstimate mc_expected_overall_error(double r, Blocklength m, const LinkGains& gains,
                                     const SystemParams& params, std::uint64_t n,
                                     std::uint64_t seed);

/// Twin of bl_throughput_relay, simulating decode events: the relay decodes
/// with probability 1 - eps_2, then the destination with probability 1 - eps_MRC.
McEstimate mc_bl_throughput(double r, Blocklength m, const LinkGains& gains,
                            const SystemParams& params, std::uint64_t n, std::uint64_t seed);

struct McServiceStats {
  McEstimate mean;              ///< bits per period
  double variance = 0.0;        ///< sample variance of s_i
  double variance_std_err = 0.0;
  double eps_bar = 0.0;         ///< empirical decode-failure frequency
};

/// Empirical moments of s_i = r m * 1{period decoded}.
McServiceStats mc_service_stats(double r, Blocklength m, const LinkGains& gains,
                                const SystemParams& params, std::uint64_t n, std::uint64_t seed);

}  // namespace fblrelay
