#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "hprec/channel.hpp"
#include "hprec/codebook.hpp"
#include "hprec/types.hpp"

namespace hprec {

enum class Algorithm { Exhaustive, DGHP, GSHP, ApproxGSHP, SvdBound };

std::string_view to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view tag);

struct HybridPrecoder {
  std::vector<int> rf_indices;    // codebook columns, in selection order
  CMatrix f_rf;                   // n_bs x n_rf
  std::vector<CMatrix> baseband;  // K matrices, each n_rf x n_s
};

struct AlgorithmResult {
  Algorithm algorithm = Algorithm::SvdBound;
  std::optional<HybridPrecoder> precoder;
  std::vector<double> mi_trace;  // greedy algorithms only, bits/s/Hz
  double rate = 0.0;             // final mutual information, bits/s/Hz
};

// Top-n_s singular values (descending) and right singular vectors of each H[k].
struct SpectrumSummary {
  std::vector<RVector> sigma;  // K vectors of length n_s
  std::vector<CMatrix> v;      // K matrices n_bs x n_s
};

// Per-subcarrier SVD plus the channel seen through every codeword. Building it
// once per channel lets all algorithms share the expensive decompositions.
class LinkCache {
 public:
  explicit LinkCache(const ChannelRealization& channel, const Codebook* codebook = nullptr);

  const ChannelRealization& channel() const { return *channel_; }
  const Codebook* codebook() const { return codebook_; }
  int subcarriers() const { return channel_->subcarriers(); }

  // Singular values of H[k], descending, length min(n_ms, n_bs).
  const RVector& singular_values(int k) const { return sigma_[k]; }
  // Thin right singular vectors of H[k], n_bs x min(n_ms, n_bs).
  const CMatrix& right_vectors(int k) const { return v_[k]; }
  // H[k] * codebook.words, n_ms x n_cb. Requires a codebook.
  const CMatrix& codebook_response(int k) const;

  SpectrumSummary spectrum(int n_s) const;

 private:
  const ChannelRealization* channel_;
  const Codebook* codebook_;
  std::vector<RVector> sigma_;
  std::vector<CMatrix> v_;
  std::vector<CMatrix> hw_;
};

// Hermitian inverse square root of F^* F. Throws RankDeficient when the
// smallest Gram eigenvalue is below kRankTolerance times the largest.
CMatrix inv_sqrt_gram(const CMatrix& f_rf);

// I - F (F^* F)^{-1} F^*, of size n_rows x n_rows; identity for zero columns.
CMatrix orth_complement_projector(const CMatrix& f_rf, int n_rows);
inline CMatrix orth_complement_projector(const CMatrix& f_rf) {
  return orth_complement_projector(f_rf, static_cast<int>(f_rf.rows()));
}

SpectrumSummary spectrum_summary(const ChannelRealization& channel, int n_s);

// Baseband precoders maximizing the rate for a fixed RF matrix:
// F[k] = (F^*F)^{-1/2} [Vbar[k]]_{:,1:n_s}, with Vbar[k] the right singular
// vectors of Sigma[k] V[k]^* F (F^*F)^{-1/2}.
std::vector<CMatrix> optimal_baseband(const CMatrix& f_rf, const ChannelRealization& channel,
                                      int n_s);
std::vector<CMatrix> optimal_baseband(const CMatrix& f_rf, const LinkCache& cache, int n_s);

// (1/K) sum_k log2 det(I + rho/n_s * H F_RF F[k] F[k]^* F_RF^* H^*).
// Throws ShapeMismatch when the pieces do not conform.
double mutual_information(const ChannelRealization& channel, const CMatrix& f_rf,
                          const std::vector<CMatrix>& baseband, double rho, int n_s);

// Rate with the projector onto span(F_RF):
// (1/K) sum_k sum_{l<=n_streams} log2(1 + rho/n_streams * lambda_l(H P_F H^*)).
double projector_mi(const ChannelRealization& channel, const CMatrix& f_rf, double rho,
                    int n_streams);

struct GreedyOptions {
  // Score GS-HP candidates through the secular-equation rank-one update of the
  // previous iteration's eigenvalues instead of a fresh eigensolve.
  bool fast_eig_path = false;
};

// Direct greedy: each iteration tries every unused codeword appended to the
// current RF matrix and keeps the one with the largest projected rate.
AlgorithmResult dg_hp(const ChannelRealization& channel, const Codebook& codebook, int n_rf,
                      double rho, int n_s);
AlgorithmResult dg_hp(const LinkCache& cache, int n_rf, double rho, int n_s);

// Gram-Schmidt greedy: same selection, scoring only the orthogonalized
// candidate direction on top of the fixed previous projected Gram matrix.
AlgorithmResult gs_hp(const ChannelRealization& channel, const Codebook& codebook, int n_rf,
                      double rho, int n_s, GreedyOptions options = {});
AlgorithmResult gs_hp(const LinkCache& cache, int n_rf, double rho, int n_s,
                      GreedyOptions options = {});

// RF selection of the approximate Gram-Schmidt algorithm. SNR-independent.
std::vector<int> approx_gs_hp_select(const LinkCache& cache, int n_rf, int n_s);

AlgorithmResult approx_gs_hp(const ChannelRealization& channel, const Codebook& codebook,
                             int n_rf, int n_s, double rho);
AlgorithmResult approx_gs_hp(const LinkCache& cache, int n_rf, int n_s, double rho);

// Completes a fixed RF selection with the optimal baseband and its rate.
AlgorithmResult finish_with_optimal_baseband(Algorithm algorithm, const LinkCache& cache,
                                             std::vector<int> rf_indices, double rho, int n_s);

inline constexpr double kExhaustiveLimit = 1e6;

// Number of size-n_rf subsets of n_cb codewords, as a double (no overflow).
double combination_count(int n_cb, int n_rf);

// Optimal hybrid precoder over all distinct n_rf-subsets of the codebook.
// Throws TooLarge above kExhaustiveLimit subsets. Rank-deficient subsets are
// skipped. Ties keep the lexicographically first subset.
AlgorithmResult exhaustive_hp(const ChannelRealization& channel, const Codebook& codebook,
                              int n_rf, double rho, int n_s);
AlgorithmResult exhaustive_hp(const LinkCache& cache, int n_rf, double rho, int n_s);

// Unconstrained fully digital bound with equal power per stream.
AlgorithmResult svd_bound(const ChannelRealization& channel, double rho, int n_s);
AlgorithmResult svd_bound(const LinkCache& cache, double rho, int n_s);

}  // namespace hprec
