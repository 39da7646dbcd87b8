#pragma once

#include <span>

#include "subres/common.hpp"

namespace subres::fft {

/// Unnormalized DFT, X_k = sum_j x_j exp(sign * 2 pi i jk / n) with sign = -1
/// for forward. Thin FFTW wrapper; plan creation is serialized internally so
/// the calls are safe from OpenMP regions.
void dft(std::span<cplx> data, bool forward = true);

/// Unnormalized forward 2D DFT of a column-major matrix, in place.
void dft2(CMatrix& m, bool forward = true);

}  // namespace subres::fft
