#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "hprec/errors.hpp"
#include "hprec/precoding.hpp"

namespace hprec {

double combination_count(int n_cb, int n_rf) {
  if (n_rf < 0 || n_rf > n_cb) return 0.0;
  double c = 1.0;
  for (int j = 1; j <= n_rf; ++j) c = c * (n_cb - n_rf + j) / j;
  return std::round(c);
}

AlgorithmResult exhaustive_hp(const LinkCache& cache, int n_rf, double rho, int n_s) {
  const Codebook* cb = cache.codebook();
  if (!cb) throw InvalidArgument("exhaustive search needs a codebook in the link cache");
  const int n_cb = cb->size();
  if (n_rf < 1 || n_rf > n_cb) throw InvalidArgument("n_rf must be in [1, n_cb]");
  if (n_s < 1 || n_s > n_rf) throw InvalidArgument("n_s must be in [1, n_rf]");
  const double count = combination_count(n_cb, n_rf);
  if (count > kExhaustiveLimit)
    throw TooLarge("exhaustive search over " + std::to_string(static_cast<long long>(count)) +
                   " RF subsets exceeds the limit");

  std::vector<int> subset(n_rf);
  std::iota(subset.begin(), subset.end(), 0);
  CMatrix f_rf(cb->antennas(), n_rf);

  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> best_subset;
  std::vector<CMatrix> best_bb;
  for (;;) {
    for (int c = 0; c < n_rf; ++c) f_rf.col(c) = cb->words.col(subset[c]);
    try {
      auto bb = optimal_baseband(f_rf, cache, n_s);
      const double rate = mutual_information(cache.channel(), f_rf, bb, rho, n_s);
      if (rate > best) {
        best = rate;
        best_subset = subset;
        best_bb = std::move(bb);
      }
    } catch (const RankDeficient&) {
      // collinear codewords: not a feasible RF matrix
    }

    // Next subset in lexicographic order.
    int pos = n_rf - 1;
    while (pos >= 0 && subset[pos] == n_cb - n_rf + pos) --pos;
    if (pos < 0) break;
    ++subset[pos];
    for (int j = pos + 1; j < n_rf; ++j) subset[j] = subset[j - 1] + 1;
  }
  if (best_subset.empty()) throw RankDeficient("every RF subset is rank deficient");

  HybridPrecoder p;
  p.f_rf.resize(cb->antennas(), n_rf);
  for (int c = 0; c < n_rf; ++c) p.f_rf.col(c) = cb->words.col(best_subset[c]);
  p.rf_indices = std::move(best_subset);
  p.baseband = std::move(best_bb);

  AlgorithmResult r;
  r.algorithm = Algorithm::Exhaustive;
  r.rate = best;
  r.precoder = std::move(p);
  return r;
}

AlgorithmResult exhaustive_hp(const ChannelRealization& channel, const Codebook& codebook,
                              int n_rf, double rho, int n_s) {
  return exhaustive_hp(LinkCache(channel, &codebook), n_rf, rho, n_s);
}

}  // namespace hprec
