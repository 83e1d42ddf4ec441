#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "hprec/codebook.hpp"
#include "hprec/errors.hpp"
#include "test_support.hpp"

using namespace hprec;

TEST_CASE("square codebook is the unnormalized DFT matrix") {
  const Codebook cb = beamsteering_codebook(4, 4);
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      const cd dft = std::polar(1.0, 2.0 * kPi * m * n / 4.0);
      CHECK(std::abs(cb.words(m, n) - dft) < 1e-14);
    }
  }
  CHECK(std::abs(cb.words(1, 1) - cd(0, 1)) < 1e-15);
  CHECK(std::abs(cb.words(2, 1) - cd(-1, 0)) < 1e-15);
}

TEST_CASE("codewords have unit modulus and the zero-frequency word is all ones") {
  const Codebook cb = beamsteering_codebook(8, 64);
  CHECK(cb.size() == 64);
  CHECK(cb.antennas() == 8);
  for (int m = 0; m < 8; ++m)
    for (int n = 0; n < 64; ++n) CHECK(std::abs(std::abs(cb.words(m, n)) - 1.0) < 1e-12);
  for (int m = 0; m < 8; ++m) CHECK(cb.words(m, 0) == cd(1, 0));
}

TEST_CASE("columns are pairwise distinct") {
  const Codebook cb = beamsteering_codebook(8, 64);
  for (int a = 0; a < cb.size(); ++a)
    for (int b = a + 1; b < cb.size(); ++b) CHECK((cb.words.col(a) - cb.words.col(b)).norm() > 1e-6);
}

TEST_CASE("square codebook Gram matrix is n * I") {
  for (int n : {1, 4, 16}) {
    const Codebook cb = beamsteering_codebook(n, n);
    const CMatrix gram = cb.words.adjoint() * cb.words;
    CHECK((gram - n * CMatrix::Identity(n, n)).norm() < 1e-11);
  }
}

TEST_CASE("quantize_phases snaps to the nearest grid point") {
  CVector v(2);
  v << cd(1, 0), cd(0, 1);
  CVector q = quantize_phases(v, 2);
  CHECK(std::abs(q(0) - cd(1, 0)) < 1e-15);
  CHECK(std::abs(q(1) - cd(0, 1)) < 1e-15);

  CVector w(1);
  w << std::polar(1.0, 0.1);
  CHECK(std::abs(quantize_phases(w, 1)(0) - cd(1, 0)) < 1e-15);

  CVector third(2);
  third << std::polar(1.0, kPi / 3), std::polar(1.0, -kPi / 3);
  q = quantize_phases(third, 2);
  CHECK(std::abs(q(0) - cd(0, 1)) < 1e-15);
  CHECK(std::abs(q(1) - cd(0, -1)) < 1e-15);
}

TEST_CASE("quantize_phases ties round to the lower grid index") {
  CVector v(1);
  v << std::polar(2.0, kPi / 4);  // half way between index 0 and 1 of the 4-point grid
  CHECK(std::abs(quantize_phases(v, 2)(0) - cd(1, 0)) < 1e-15);
}

TEST_CASE("quantize_phases rejects a zero entry") {
  CVector v(2);
  v << cd(1, 1), cd(0, 0);
  CHECK_THROWS_AS(quantize_phases(v, 3), InvalidArgument);
}

TEST_CASE("quantize_phases is idempotent with unit-modulus output") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int bits = 1 + trial % 6;
    const CVector v = testing::random_matrix(rng, 12, 1).col(0);
    const CVector once = quantize_phases(v, bits);
    const CVector twice = quantize_phases(once, bits);
    CHECK((once - twice).norm() < 1e-12);
    for (Eigen::Index i = 0; i < once.size(); ++i) CHECK(std::abs(std::abs(once(i)) - 1.0) < 1e-12);
  }
}

TEST_CASE("CSV export writes one codeword per column") {
  const Codebook cb = beamsteering_codebook(3, 4);
  const auto path = std::filesystem::temp_directory_path() / "hprec_codebook.csv";
  write_codebook_csv(cb, path);
  std::ifstream is(path);
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) {
    int quotes = 0;
    for (char c : line) quotes += c == '"';
    CHECK(quotes == 2 * 4);
    ++rows;
  }
  CHECK(rows == 3);
  std::filesystem::remove(path);
}
