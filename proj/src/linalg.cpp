#include "hprec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "hprec/errors.hpp"

namespace hprec::linalg {

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

RVector eigenvalues_desc(const CMatrix& hermitian) {
  if (hermitian.rows() == 0) return RVector();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

double log_sum(const RVector& eig_desc, double scale, int n_terms) {
  double total = 0.0;
  const int n = std::min<int>(n_terms, static_cast<int>(eig_desc.size()));
  for (int l = 0; l < n; ++l) total += std::log2(1.0 + scale * std::max(0.0, eig_desc(l)));
  return total;
}

CMatrix orthonormal_basis(const CMatrix& columns) {
  CMatrix q(columns.rows(), columns.cols());
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    CVector v = columns.col(c);
    const double original = v.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index p = 0; p < c; ++p) v -= q.col(p).dot(v) * q.col(p);
    }
    const double residual = v.norm();
    if (!(original > 0.0) || residual * residual <= kRankTolerance * original * original)
      throw RankDeficient("column " + std::to_string(c) + " lies in the span of earlier columns");
    q.col(c) = v / residual;
  }
  return q;
}

CVector orthogonal_component(const CMatrix& q, const CVector& v) {
  CVector r = v;
  if (q.cols() == 0) return r;
  for (int pass = 0; pass < 2; ++pass) r -= q * (q.adjoint() * r);
  return r;
}

namespace {

// Root of 1 + sum_j w_j / (d_j - mu) on the open interval (lo, hi). The
// function is increasing there, going from -inf to +inf.
double secular_root(const std::vector<double>& d, const std::vector<double>& w, double lo,
                    double hi) {
  auto f = [&](double mu) {
    double s = 1.0;
    for (std::size_t j = 0; j < d.size(); ++j) s += w[j] / (d[j] - mu);
    return s;
  };
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

RVector rank_one_update_eigenvalues(const RVector& d, const RVector& weights) {
  const Eigen::Index n = d.size();
  if (weights.size() != n) throw ShapeMismatch("rank-one update: size mismatch");
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return d(a) > d(b); });

  double wsum = 0.0;
  double dmax = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    wsum += std::max(0.0, weights(j));
    dmax = std::max(dmax, std::abs(d(j)));
  }
  const double tol = 1e-14 * (wsum + dmax);

  std::vector<double> result;
  std::vector<double> dd, ww;
  for (auto j : order) {
    const double w = std::max(0.0, weights(j));
    if (w <= tol) {
      result.push_back(d(j));  // deflated: eigenvalue unchanged
      continue;
    }
    if (!dd.empty() && dd.back() - d(j) <= tol) {
      // Repeated pole: rotate the weight onto one copy; the other keeps d_j.
      ww.back() += w;
      result.push_back(d(j));
      continue;
    }
    dd.push_back(d(j));
    ww.push_back(w);
  }
  const double wtotal = std::accumulate(ww.begin(), ww.end(), 0.0);
  // Roots interlace the poles; the top one is bounded by d_0 + sum(w), where
  // the secular function is already nonnegative.
  for (std::size_t j = 0; j < dd.size(); ++j) {
    const double hi = j == 0 ? dd[0] + wtotal : dd[j - 1];
    result.push_back(secular_root(dd, ww, dd[j], hi));
  }
  std::sort(result.begin(), result.end(), std::greater<>());
  return Eigen::Map<RVector>(result.data(), static_cast<Eigen::Index>(result.size()));
}

}  // namespace hprec::linalg
