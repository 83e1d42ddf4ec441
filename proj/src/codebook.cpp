#include "hprec/codebook.hpp"

#include <cmath>
#include <fstream>

#include "hprec/errors.hpp"

namespace hprec {

Codebook beamsteering_codebook(int n_antennas, int n_cb) {
  if (n_antennas < 1 || n_cb < 1) throw InvalidArgument("codebook dimensions must be >= 1");
  Codebook cb;
  cb.words.resize(n_antennas, n_cb);
  cb.steering_angles.resize(n_cb);
  for (int n = 0; n < n_cb; ++n) {
    const double omega = 2.0 * kPi * n / n_cb;
    cb.steering_angles(n) = omega;
    for (int m = 0; m < n_antennas; ++m) {
      // Reduce m*n modulo n_cb first so the phase stays exactly on the grid.
      const long long idx = (static_cast<long long>(m) * n) % n_cb;
      cb.words(m, n) = std::polar(1.0, 2.0 * kPi * static_cast<double>(idx) / n_cb);
    }
  }
  return cb;
}

CVector quantize_phases(const CVector& v, int bits) {
  if (bits < 1 || bits > 30) throw InvalidArgument("bits must be in [1, 30]");
  const long long levels = 1LL << bits;
  const double step = 2.0 * kPi / static_cast<double>(levels);
  CVector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) == cd(0.0, 0.0)) throw InvalidArgument("cannot quantize the phase of a zero entry");
    double phase = std::arg(v(i));
    if (phase < 0.0) phase += 2.0 * kPi;
    const double x = phase / step;
    const double lower = std::floor(x);
    // Exact half-way points round toward the lower index.
    long long idx = static_cast<long long>(x - lower > 0.5 ? lower + 1.0 : lower);
    idx %= levels;
    out(i) = std::polar(1.0, step * static_cast<double>(idx));
  }
  return out;
}

void write_codebook_csv(const Codebook& codebook, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string());
  os.precision(17);
  for (int m = 0; m < codebook.antennas(); ++m) {
    for (int n = 0; n < codebook.size(); ++n) {
      if (n) os << ',';
      os << '"' << codebook.words(m, n).real() << ',' << codebook.words(m, n).imag() << '"';
    }
    os << '\n';
  }
  if (!os) throw IoError("write failed: " + path.string());
}

}  // namespace hprec
