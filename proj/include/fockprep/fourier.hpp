#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fockprep {

class SpatialGrid;

/// Angular wavenumbers of the discrete Fourier modes in FFTW order:
/// k_j = 2 pi j / (N dx) for j < N/2, k_j = 2 pi (j - N) / (N dx) otherwise.
std::vector<double> wavenumbers(const SpatialGrid& grid);

/// In-place complex FFT of fixed length on an aligned buffer. Transforms are
/// unnormalized. Owns its buffer and plans; not copyable.
class ComplexFft {
 public:
  explicit ComplexFft(std::size_t n);
  ~ComplexFft();
  ComplexFft(ComplexFft&&) noexcept;
  ComplexFft& operator=(ComplexFft&&) noexcept;
  ComplexFft(const ComplexFft&) = delete;
  ComplexFft& operator=(const ComplexFft&) = delete;

  std::span<std::complex<double>> data();
  std::span<const std::complex<double>> data() const;
  void forward();
  void backward();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Kinetic operator -1/2 d^2/dx^2 (hbar = M = 1) applied spectrally to real
/// grid functions. This is the same operator the split-step propagator uses.
class SpectralKinetic {
 public:
  explicit SpectralKinetic(const SpatialGrid& grid);
  ~SpectralKinetic();
  SpectralKinetic(SpectralKinetic&&) noexcept;
  SpectralKinetic& operator=(SpectralKinetic&&) noexcept;
  SpectralKinetic(const SpectralKinetic&) = delete;
  SpectralKinetic& operator=(const SpectralKinetic&) = delete;

  std::size_t size() const;
  void apply(std::span<const double> in, std::span<double> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fockprep
