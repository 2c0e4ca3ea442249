#pragma once

// Thin wrapper over FFTW. All transforms are unnormalized:
//   forward:  X_k = sum_j x_j exp(-2 pi i j k / n)
//   backward: x_j = sum_k X_k exp(+2 pi i j k / n)

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace phasespace::fourier {

using cplx = std::complex<double>;

enum class Direction { Forward, Backward };

void fft(std::span<cplx> data, Direction dir);

/// 2-D transform of a row-major rows x cols array.
void fft2(std::span<cplx> data, std::size_t rows, std::size_t cols, Direction dir);

/// 1-D transform of every row (along the contiguous axis).
void fft_rows(std::span<cplx> data, std::size_t rows, std::size_t cols, Direction dir);

/// 1-D transform of every column (along the strided axis).
void fft_cols(std::span<cplx> data, std::size_t rows, std::size_t cols, Direction dir);

/// Angular wavenumbers 2 pi k / (n spacing) in FFT storage order, with the
/// Nyquist bin reported as negative.
std::vector<double> angular_frequencies(std::size_t n, double spacing);

/// Band-limited periodic interpolation onto a grid with half the spacing.
/// Output has 2n samples; even indices reproduce the input.
std::vector<cplx> upsample2(std::span<const cplx> samples);

}  // namespace phasespace::fourier
