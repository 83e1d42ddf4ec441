#include <cmath>
#include <limits>
#include <vector>

#include "hprec/errors.hpp"
#include "hprec/linalg.hpp"
#include "hprec/precoding.hpp"

namespace hprec {

namespace {

void check_greedy_args(const LinkCache& cache, int n_rf, int n_s) {
  const Codebook* cb = cache.codebook();
  if (!cb) throw InvalidArgument("greedy precoding needs a codebook in the link cache");
  if (n_rf < 1 || n_rf > cb->size()) throw InvalidArgument("n_rf must be in [1, n_cb]");
  if (n_rf > cb->antennas()) throw InvalidArgument("n_rf must not exceed n_bs");
  if (n_s < 1 || n_s > n_rf) throw InvalidArgument("n_s must be in [1, n_rf]");
}

// Codeword whose component outside span(q) is negligible; appending it would
// make the RF Gram matrix singular.
bool inside_span(const CMatrix& q, const CVector& f) {
  const double r = linalg::orthogonal_component(q, f).squaredNorm();
  return r <= linalg::kRankTolerance * f.squaredNorm();
}

}  // namespace

// The per-iteration prefactor is rho / n_rf for every candidate, so the trace
// is the paper's projected rate and grows with each added column.
AlgorithmResult dg_hp(const LinkCache& cache, int n_rf, double rho, int n_s) {
  check_greedy_args(cache, n_rf, n_s);
  const Codebook& cb = *cache.codebook();
  const int K = cache.subcarriers();
  const double scale = rho / n_rf;

  std::vector<int> selected;
  std::vector<bool> used(cb.size(), false);
  std::vector<double> trace;

  for (int i = 1; i <= n_rf; ++i) {
    double best = -std::numeric_limits<double>::infinity();
    int best_n = -1;
    std::vector<int> cols = selected;
    cols.push_back(-1);
    CMatrix f(cb.antennas(), i);
    for (int c = 0; c + 1 < i; ++c) f.col(c) = cb.words.col(selected[c]);

    for (int n = 0; n < cb.size(); ++n) {
      if (used[n]) continue;
      f.col(i - 1) = cb.words.col(n);
      cols.back() = n;
      CMatrix m;
      try {
        m = inv_sqrt_gram(f);
      } catch (const RankDeficient&) {
        continue;
      }
      double score = 0.0;
      for (int k = 0; k < K; ++k) {
        const CMatrix& hw = cache.codebook_response(k);
        CMatrix hf(hw.rows(), i);
        for (int c = 0; c < i; ++c) hf.col(c) = hw.col(cols[c]);
        const CMatrix e = hf * m;
        const CMatrix g = linalg::hermitian_part(e.adjoint() * e);
        score += linalg::log_sum(linalg::eigenvalues_desc(g), scale, i);
      }
      score /= K;
      if (score > best) {
        best = score;
        best_n = n;
      }
    }
    if (best_n < 0) throw RankDeficient("no codeword extends the RF precoder");
    selected.push_back(best_n);
    used[best_n] = true;
    trace.push_back(best);
  }

  auto result = finish_with_optimal_baseband(Algorithm::DGHP, cache, selected, rho, n_s);
  result.mi_trace = std::move(trace);
  return result;
}

AlgorithmResult dg_hp(const ChannelRealization& channel, const Codebook& codebook, int n_rf,
                      double rho, int n_s) {
  return dg_hp(LinkCache(channel, &codebook), n_rf, rho, n_s);
}

// Keeps Q, an orthonormal basis of the selected codewords, and HQ[k]. A
// candidate f contributes only u = P_perp f / |P_perp f|, so the new projected
// Gram matrix is the previous one bordered by b = (HQ)^* H u and c = |H u|^2.
AlgorithmResult gs_hp(const LinkCache& cache, int n_rf, double rho, int n_s,
                      GreedyOptions options) {
  check_greedy_args(cache, n_rf, n_s);
  const Codebook& cb = *cache.codebook();
  const int K = cache.subcarriers();
  const int n_ms = cache.channel().n_ms();
  const double scale = rho / n_rf;

  CMatrix q(cb.antennas(), 0);
  std::vector<CMatrix> hq(K, CMatrix(n_ms, 0));
  std::vector<CMatrix> gram(K, CMatrix(0, 0));  // (HQ)^* HQ
  // Eigen-decomposition of each gram[k], for the rank-one fast path.
  std::vector<RVector> lambda(K);
  std::vector<CMatrix> basis(K);

  std::vector<int> selected;
  std::vector<bool> used(cb.size(), false);
  std::vector<double> trace;

  for (int i = 1; i <= n_rf; ++i) {
    double best = -std::numeric_limits<double>::infinity();
    int best_n = -1;
    CVector best_coeff;
    double best_norm = 0.0;

    for (int n = 0; n < cb.size(); ++n) {
      if (used[n]) continue;
      const CVector f = cb.words.col(n);
      // Two Gram-Schmidt passes; coeff accumulates Q^* f so that
      // P_perp f = f - Q coeff exactly.
      CVector coeff = CVector::Zero(q.cols());
      CVector r = f;
      for (int pass = 0; pass < 2 && q.cols() > 0; ++pass) {
        const CVector c = q.adjoint() * r;
        coeff += c;
        r -= q * c;
      }
      const double norm = r.norm();
      if (norm * norm <= linalg::kRankTolerance * f.squaredNorm()) continue;

      double score = 0.0;
      for (int k = 0; k < K; ++k) {
        CVector hu = cache.codebook_response(k).col(n);
        if (q.cols() > 0) hu.noalias() -= hq[k] * coeff;
        hu /= norm;
        const CVector b = hq[k].adjoint() * hu;
        const double c = hu.squaredNorm();

        RVector eig;
        if (options.fast_eig_path) {
          // diag(lambda, 0) + z z^* in the eigenbasis of the previous Gram;
          // the last coordinate carries the part of H u outside range(T).
          const RVector& lam = lambda[k];
          const Eigen::Index m = lam.size();
          RVector d = RVector::Zero(m + 1);
          RVector w = RVector::Zero(m + 1);
          const CVector proj = basis[k].adjoint() * b;
          const double lmax = m > 0 ? lam.maxCoeff() : 0.0;
          double captured = 0.0;
          for (Eigen::Index j = 0; j < m; ++j) {
            d(j) = lam(j);
            if (lam(j) > 1e-13 * lmax && lam(j) > 0.0) {
              w(j) = std::norm(proj(j)) / lam(j);
              captured += w(j);
            }
          }
          w(m) = std::max(0.0, c - captured);
          eig = linalg::rank_one_update_eigenvalues(d, w);
        } else {
          CMatrix bordered(i, i);
          bordered.topLeftCorner(i - 1, i - 1) = gram[k];
          bordered.topRightCorner(i - 1, 1) = b;
          bordered.bottomLeftCorner(1, i - 1) = b.adjoint();
          bordered(i - 1, i - 1) = c;
          eig = linalg::eigenvalues_desc(linalg::hermitian_part(bordered));
        }
        score += linalg::log_sum(eig, scale, i);
      }
      score /= K;
      if (score > best) {
        best = score;
        best_n = n;
        best_coeff = coeff;
        best_norm = norm;
      }
    }
    if (best_n < 0) throw RankDeficient("no codeword extends the RF precoder");

    const CVector u = (cb.words.col(best_n) - q * best_coeff) / best_norm;
    q.conservativeResize(Eigen::NoChange, i);
    q.col(i - 1) = u;
    for (int k = 0; k < K; ++k) {
      CVector hu = cache.codebook_response(k).col(best_n);
      if (i > 1) hu.noalias() -= hq[k].leftCols(i - 1) * best_coeff;
      hu /= best_norm;
      hq[k].conservativeResize(Eigen::NoChange, i);
      hq[k].col(i - 1) = hu;
      gram[k] = linalg::hermitian_part(hq[k].adjoint() * hq[k]);
      if (options.fast_eig_path) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(gram[k]);
        lambda[k] = es.eigenvalues();
        basis[k] = es.eigenvectors();
      }
    }
    selected.push_back(best_n);
    used[best_n] = true;
    trace.push_back(best);
  }

  // The stored precoder uses the original codewords, not their orthogonalized images.
  auto result = finish_with_optimal_baseband(Algorithm::GSHP, cache, selected, rho, n_s);
  result.mi_trace = std::move(trace);
  return result;
}

AlgorithmResult gs_hp(const ChannelRealization& channel, const Codebook& codebook, int n_rf,
                      double rho, int n_s, GreedyOptions options) {
  return gs_hp(LinkCache(channel, &codebook), n_rf, rho, n_s, options);
}

std::vector<int> approx_gs_hp_select(const LinkCache& cache, int n_rf, int n_s) {
  check_greedy_args(cache, n_rf, n_s);
  const Codebook& cb = *cache.codebook();
  const int K = cache.subcarriers();
  const int n_bs = cb.antennas();

  // Pi stacks sigma_k V_k^* vertically: (K n_s) x n_bs.
  const SpectrumSummary spectrum = cache.spectrum(n_s);
  CMatrix pi(static_cast<Eigen::Index>(K) * n_s, n_bs);
  for (int k = 0; k < K; ++k)
    pi.middleRows(static_cast<Eigen::Index>(k) * n_s, n_s) =
        spectrum.sigma[k].asDiagonal() * spectrum.v[k].adjoint();

  std::vector<int> selected;
  std::vector<bool> used(cb.size(), false);
  CMatrix f_rf(n_bs, 0);
  CMatrix q(n_bs, 0);

  for (int i = 1; i <= n_rf; ++i) {
    const CMatrix psi = pi * cb.words;
    double best = -1.0;
    int best_n = -1;
    for (int n = 0; n < cb.size(); ++n) {
      if (used[n] || inside_span(q, cb.words.col(n))) continue;
      const double score = psi.col(n).squaredNorm();
      if (score > best) {
        best = score;
        best_n = n;
      }
    }
    if (best_n < 0) throw RankDeficient("no codeword extends the RF precoder");
    selected.push_back(best_n);
    used[best_n] = true;
    f_rf.conservativeResize(Eigen::NoChange, i);
    f_rf.col(i - 1) = cb.words.col(best_n);
    q = linalg::orthonormal_basis(f_rf);
    pi = pi * orth_complement_projector(f_rf);
  }
  return selected;
}

AlgorithmResult approx_gs_hp(const LinkCache& cache, int n_rf, int n_s, double rho) {
  return finish_with_optimal_baseband(Algorithm::ApproxGSHP, cache,
                                      approx_gs_hp_select(cache, n_rf, n_s), rho, n_s);
}

AlgorithmResult approx_gs_hp(const ChannelRealization& channel, const Codebook& codebook,
                             int n_rf, int n_s, double rho) {
  return approx_gs_hp(LinkCache(channel, &codebook), n_rf, n_s, rho);
}

}  // namespace hprec
