#include "hprec/precoding.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>

#include "hprec/errors.hpp"
#include "hprec/linalg.hpp"

namespace hprec {

namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 5> kTags{{
    {Algorithm::Exhaustive, "exhaustive"},
    {Algorithm::DGHP, "dg_hp"},
    {Algorithm::GSHP, "gs_hp"},
    {Algorithm::ApproxGSHP, "approx_gs_hp"},
    {Algorithm::SvdBound, "svd_bound"},
}};

std::string squash(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '_' || c == '-') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  for (const auto& [a, tag] : kTags)
    if (a == algorithm) return tag;
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view tag) {
  const std::string key = squash(tag);
  for (const auto& [a, name] : kTags)
    if (squash(name) == key) return a;
  if (key == "svd") return Algorithm::SvdBound;
  if (key == "approx" || key == "approxgs") return Algorithm::ApproxGSHP;
  return std::nullopt;
}

LinkCache::LinkCache(const ChannelRealization& channel, const Codebook* codebook)
    : channel_(&channel), codebook_(codebook) {
  const int K = channel.subcarriers();
  if (codebook && codebook->antennas() != channel.n_bs())
    throw ShapeMismatch("codebook has " + std::to_string(codebook->antennas()) +
                        " antennas, channel has " + std::to_string(channel.n_bs()));
  sigma_.reserve(K);
  v_.reserve(K);
  if (codebook) hw_.reserve(K);
  for (const auto& hk : channel.h) {
    Eigen::JacobiSVD<CMatrix> svd(hk, Eigen::ComputeThinV);
    sigma_.push_back(svd.singularValues());
    v_.push_back(svd.matrixV());
    if (codebook) hw_.push_back(hk * codebook->words);
  }
}

const CMatrix& LinkCache::codebook_response(int k) const {
  if (!codebook_) throw InvalidArgument("link cache was built without a codebook");
  return hw_[k];
}

SpectrumSummary LinkCache::spectrum(int n_s) const {
  const int rank = static_cast<int>(std::min(channel_->n_ms(), channel_->n_bs()));
  if (n_s < 1 || n_s > rank) throw InvalidArgument("n_s must be in [1, min(n_ms, n_bs)]");
  SpectrumSummary s;
  for (int k = 0; k < subcarriers(); ++k) {
    s.sigma.push_back(sigma_[k].head(n_s));
    s.v.push_back(v_[k].leftCols(n_s));
  }
  return s;
}

SpectrumSummary spectrum_summary(const ChannelRealization& channel, int n_s) {
  return LinkCache(channel).spectrum(n_s);
}

CMatrix inv_sqrt_gram(const CMatrix& f_rf) {
  if (f_rf.cols() == 0) return CMatrix(0, 0);
  const CMatrix gram = linalg::hermitian_part(f_rf.adjoint() * f_rf);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
  const RVector& lambda = es.eigenvalues();  // ascending
  const double largest = lambda(lambda.size() - 1);
  if (!(largest > 0.0) || lambda(0) <= linalg::kRankTolerance * largest)
    throw RankDeficient("RF precoder Gram matrix is singular");
  const RVector inv_root = lambda.cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * inv_root.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix orth_complement_projector(const CMatrix& f_rf, int n_rows) {
  if (f_rf.cols() == 0) return CMatrix::Identity(n_rows, n_rows);
  if (f_rf.rows() != n_rows) throw ShapeMismatch("projector: row count mismatch");
  const CMatrix m = inv_sqrt_gram(f_rf);
  const CMatrix basis = f_rf * m;
  return CMatrix::Identity(n_rows, n_rows) - basis * basis.adjoint();
}

std::vector<CMatrix> optimal_baseband(const CMatrix& f_rf, const LinkCache& cache, int n_s) {
  const auto& channel = cache.channel();
  if (f_rf.rows() != channel.n_bs()) throw ShapeMismatch("F_RF rows must equal n_bs");
  if (n_s < 1 || n_s > f_rf.cols()) throw InvalidArgument("n_s must be in [1, n_rf]");
  const CMatrix m = inv_sqrt_gram(f_rf);
  const CMatrix whitened = f_rf * m;

  std::vector<CMatrix> out;
  out.reserve(cache.subcarriers());
  for (int k = 0; k < cache.subcarriers(); ++k) {
    // Sigma V^* F (F^*F)^{-1/2}, using the thin SVD; U drops out of the
    // right singular vectors.
    const CMatrix b =
        cache.singular_values(k).asDiagonal() * (cache.right_vectors(k).adjoint() * whitened);
    Eigen::JacobiSVD<CMatrix> svd(b, Eigen::ComputeFullV);
    out.push_back(m * svd.matrixV().leftCols(n_s));
  }
  return out;
}

std::vector<CMatrix> optimal_baseband(const CMatrix& f_rf, const ChannelRealization& channel,
                                      int n_s) {
  return optimal_baseband(f_rf, LinkCache(channel), n_s);
}

double mutual_information(const ChannelRealization& channel, const CMatrix& f_rf,
                          const std::vector<CMatrix>& baseband, double rho, int n_s) {
  if (static_cast<int>(baseband.size()) != channel.subcarriers())
    throw ShapeMismatch("need one baseband matrix per subcarrier");
  if (f_rf.rows() != channel.n_bs()) throw ShapeMismatch("F_RF rows must equal n_bs");
  if (n_s < 1) throw ShapeMismatch("n_s must be >= 1");
  if (rho < 0.0) throw InvalidArgument("rho must be nonnegative");
  const int n_ms = channel.n_ms();
  const double scale = rho / n_s;

  double total = 0.0;
  for (int k = 0; k < channel.subcarriers(); ++k) {
    const CMatrix& fk = baseband[k];
    if (fk.rows() != f_rf.cols() || fk.cols() != n_s)
      throw ShapeMismatch("baseband matrix " + std::to_string(k) + " is not n_rf x n_s");
    const CMatrix e = channel.h[k] * (f_rf * fk);
    CMatrix a = CMatrix::Identity(n_ms, n_ms);
    a.noalias() += scale * (e * e.adjoint());
    Eigen::LLT<CMatrix> llt(a);
    if (llt.info() != Eigen::Success) throw Error("mutual_information: Cholesky failed");
    const auto& l = llt.matrixLLT();
    for (int r = 0; r < n_ms; ++r) total += 2.0 * std::log2(l(r, r).real());
  }
  return total / channel.subcarriers();
}

double projector_mi(const ChannelRealization& channel, const CMatrix& f_rf, double rho,
                    int n_streams) {
  if (f_rf.rows() != channel.n_bs()) throw ShapeMismatch("F_RF rows must equal n_bs");
  if (n_streams < 1 || n_streams > f_rf.cols())
    throw InvalidArgument("n_streams must be in [1, columns(F_RF)]");
  const CMatrix basis = f_rf * inv_sqrt_gram(f_rf);
  const CMatrix projector = basis * basis.adjoint();
  double total = 0.0;
  for (const auto& hk : channel.h) {
    const CMatrix t = linalg::hermitian_part(hk * projector * hk.adjoint());
    total += linalg::log_sum(linalg::eigenvalues_desc(t), rho / n_streams, n_streams);
  }
  return total / channel.subcarriers();
}

AlgorithmResult finish_with_optimal_baseband(Algorithm algorithm, const LinkCache& cache,
                                             std::vector<int> rf_indices, double rho, int n_s) {
  const Codebook* cb = cache.codebook();
  if (!cb) throw InvalidArgument("link cache was built without a codebook");
  HybridPrecoder p;
  p.f_rf.resize(cb->antennas(), static_cast<Eigen::Index>(rf_indices.size()));
  for (std::size_t c = 0; c < rf_indices.size(); ++c) p.f_rf.col(c) = cb->words.col(rf_indices[c]);
  p.rf_indices = std::move(rf_indices);
  p.baseband = optimal_baseband(p.f_rf, cache, n_s);

  AlgorithmResult r;
  r.algorithm = algorithm;
  r.rate = mutual_information(cache.channel(), p.f_rf, p.baseband, rho, n_s);
  r.precoder = std::move(p);
  return r;
}

AlgorithmResult svd_bound(const LinkCache& cache, double rho, int n_s) {
  const auto& channel = cache.channel();
  if (n_s < 1 || n_s > std::min(channel.n_ms(), channel.n_bs()))
    throw InvalidArgument("n_s must be in [1, min(n_ms, n_bs)]");
  double total = 0.0;
  for (int k = 0; k < cache.subcarriers(); ++k) {
    const RVector power = cache.singular_values(k).array().square();
    total += linalg::log_sum(power, rho / n_s, n_s);
  }
  AlgorithmResult r;
  r.algorithm = Algorithm::SvdBound;
  r.rate = total / cache.subcarriers();
  return r;
}

AlgorithmResult svd_bound(const ChannelRealization& channel, double rho, int n_s) {
  return svd_bound(LinkCache(channel), rho, n_s);
}

}  // namespace hprec
