#pragma once

#include "dlat/small_matrix.hpp"

namespace dlat {

/// Unitary discrete Fourier transform of nu interleaved components on an
/// n^d periodic grid (row-major, axis 0 slowest, component fastest):
///   F(q) = N^{-1/2} sum_k u(k) exp(-2 pi i k.q / n),  N = n^d.
/// In place; plans are cached and shared between threads.
void fft_forward(int d, int n, int nu, cplx* data);
void fft_inverse(int d, int n, int nu, cplx* data);

}  // namespace dlat
