// Copyright 2026 The entpow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "entpow/entangling.hpp"
#include "entpow/parallel.hpp"
#include "entpow/random.hpp"

namespace entpow {

/// Fixed-width histogram of the entangling power of Haar-random unitaries.
struct Histogram {
  Bipartition part{1, 1};
  std::vector<double> bin_edges;  // n_bins + 1 strictly increasing edges
  std::vector<std::size_t> counts;
  std::size_t n_samples = 0;
  SeedSpec seed{};
  double empirical_mean = 0.0;
  double empirical_stddev = 0.0;
  double empirical_max = 0.0;

  std::size_t n_bins() const { return counts.size(); }
  double bin_width(std::size_t k) const { return bin_edges[k + 1] - bin_edges[k]; }

  /// count / (n_samples * width), integrating to one.
  double density(std::size_t k) const {
    return static_cast<double>(counts[k]) / (static_cast<double>(n_samples) * bin_width(k));
  }
};

/// Unitaries per random stream when sampling q(e).
inline constexpr std::size_t kSpectrumBlock = 256;

/// Samples ep_closed over Haar unitaries, binned on [0, upper_bound(part)].
/// When the bound is zero (a trivial factor) the range [0, 1] is used so the
/// edges stay strictly increasing; all mass then falls in bin 0.
inline Histogram sample_q(Bipartition part, std::size_t n_samples, std::size_t n_bins,
                          SeedSpec seed, std::size_t threads = 0) {
  if (n_samples == 0) throw ValidationError("sample_q: n_samples must be positive");
  if (n_bins < 2) throw ValidationError("sample_q: n_bins must be at least 2");
  const double bound = upper_bound(part);
  const double top = bound > 0.0 ? bound : 1.0;

  const std::size_t n_blocks = (n_samples + kSpectrumBlock - 1) / kSpectrumBlock;
  const auto blocks = map_tasks(n_blocks, threads, [&](std::size_t k) {
    RandomStream rng(seed.child(k));
    const std::size_t begin = k * kSpectrumBlock;
    const std::size_t end = std::min(n_samples, begin + kSpectrumBlock);
    std::vector<double> values;
    values.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      values.push_back(detail::closed_form_value(rng.unitary(part.dim()), part));
    }
    return values;
  });

  Histogram h;
  h.part = part;
  h.n_samples = n_samples;
  h.seed = seed;
  h.counts.assign(n_bins, 0);
  h.bin_edges.resize(n_bins + 1);
  for (std::size_t k = 0; k <= n_bins; ++k) {
    h.bin_edges[k] = top * static_cast<double>(k) / static_cast<double>(n_bins);
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  h.empirical_max = -std::numeric_limits<double>::infinity();
  for (const auto& block : blocks) {
    for (const double v : block) {
      sum += v;
      sum_sq += v * v;
      h.empirical_max = std::max(h.empirical_max, v);
      // Values within rounding of either end land in the outer bins.
      const double scaled = v / top * static_cast<double>(n_bins);
      const auto k = static_cast<std::size_t>(std::clamp(scaled, 0.0, static_cast<double>(n_bins - 1)));
      ++h.counts[k];
    }
  }
  const double n = static_cast<double>(n_samples);
  h.empirical_mean = sum / n;
  h.empirical_stddev =
      n_samples > 1 ? std::sqrt(std::max(0.0, (sum_sq - n * h.empirical_mean * h.empirical_mean) / (n - 1.0)))
                    : 0.0;
  return h;
}

namespace detail {

inline std::vector<double> average_ranks(const std::vector<double>& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j);
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace detail

/// Minimum number of bins up to the last nonempty one for monotonicity_score.
inline constexpr std::size_t kMinScoredBins = 10;

/// Spearman rank correlation between bin index and count, over bins 0 up to
/// the last nonempty bin. +1 for strictly increasing counts.
inline double monotonicity_score(const Histogram& h) {
  std::size_t last = h.counts.size();
  while (last > 0 && h.counts[last - 1] == 0) --last;
  if (last < kMinScoredBins) {
    throw ValidationError("monotonicity_score: need at least " + std::to_string(kMinScoredBins) +
                          " bins up to the last nonempty bin, got " + std::to_string(last));
  }
  std::vector<double> index(last);
  std::vector<double> count(last);
  for (std::size_t k = 0; k < last; ++k) {
    index[k] = static_cast<double>(k);
    count[k] = static_cast<double>(h.counts[k]);
  }
  const auto ri = detail::average_ranks(index);
  const auto rc = detail::average_ranks(count);
  const double mi = std::accumulate(ri.begin(), ri.end(), 0.0) / static_cast<double>(last);
  const double mc = std::accumulate(rc.begin(), rc.end(), 0.0) / static_cast<double>(last);
  double cov = 0.0;
  double vi = 0.0;
  double vc = 0.0;
  for (std::size_t k = 0; k < last; ++k) {
    cov += (ri[k] - mi) * (rc[k] - mc);
    vi += (ri[k] - mi) * (ri[k] - mi);
    vc += (rc[k] - mc) * (rc[k] - mc);
  }
  if (vc == 0.0) throw ValidationError("monotonicity_score: all scored bins hold the same count");
  return cov / std::sqrt(vi * vc);
}

struct TailSummary {
  std::size_t first_nonempty = 0;
  std::size_t last_nonempty = 0;
  std::size_t modal_bin = 0;
  std::size_t first_count = 0;
  std::size_t last_count = 0;
  std::size_t modal_count = 0;

  /// Both outer nonempty bins hold less than half the modal count.
  bool has_vanishing_tails() const { return 2 * first_count < modal_count && 2 * last_count < modal_count; }
};

inline TailSummary tail_summary(const Histogram& h) {
  TailSummary t;
  bool seen = false;
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    if (h.counts[k] == 0) continue;
    if (!seen) t.first_nonempty = k;
    seen = true;
    t.last_nonempty = k;
    if (h.counts[k] > t.modal_count) {
      t.modal_count = h.counts[k];
      t.modal_bin = k;
    }
  }
  if (!seen) throw ValidationError("tail_summary: histogram is empty");
  t.first_count = h.counts[t.first_nonempty];
  t.last_count = h.counts[t.last_nonempty];
  return t;
}

}  // namespace entpow
