#pragma once

#include <complex>
#include <span>
#include <vector>

namespace steklov {

using cplx = std::complex<double>;

// Thin wrapper over FFTW with per-size plan caching. Plans use FFTW_ESTIMATE
// so results are bit-reproducible from run to run.
//
// forward:  X[k] = sum_j x[j] e^{-2 pi i jk/n}
// backward: x[j] = sum_k X[k] e^{+2 pi i jk/n}   (unnormalized)
void fft_forward(std::span<const cplx> in, std::span<cplx> out);
void fft_backward(std::span<const cplx> in, std::span<cplx> out);

}  // namespace steklov
