#pragma once

#include <filesystem>

#include "hprec/types.hpp"

namespace hprec {

// Quantized RF beamforming codebook; columns of `words` are codewords.
struct Codebook {
  CMatrix words;            // n_antennas x n_cb, unit-modulus entries
  RVector steering_angles;  // spatial frequency of each column, radians

  int size() const { return static_cast<int>(words.cols()); }
  int antennas() const { return static_cast<int>(words.rows()); }
};

// Column n is the steering vector with spatial frequency 2*pi*n/n_cb:
// entry m equals exp(j*m*2*pi*n/n_cb). n_cb == n_antennas gives the DFT matrix.
Codebook beamsteering_codebook(int n_antennas, int n_cb);

// Snap every phase to the nearest point of the uniform 2^bits grid. Ties go
// to the lower grid index. Throws InvalidArgument on a zero entry.
CVector quantize_phases(const CVector& v, int bits);

// One codeword per column, each cell written as a quoted "re,im" pair.
void write_codebook_csv(const Codebook& codebook, const std::filesystem::path& path);

}  // namespace hprec
