#pragma once

#include <Eigen/Dense>

#include "subres/specfun.hpp"

namespace subres {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Serial runs are kept as the reference path; parallel runs must produce
/// bit-identical output.
enum class Execution { serial, parallel };

/// Position of signed Fourier mode m in a length 2F+1 block.
constexpr int mode_index(int m, int F) { return m + F; }
/// Wrap a signed frequency into a length-Q DFT bin (negative modes in the upper half).
constexpr int dft_bin(int k, int Q) { return ((k % Q) + Q) % Q; }

}  // namespace subres
