#include "fockprep/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "fockprep/constants.hpp"
#include "fockprep/errors.hpp"
#include "fockprep/grid.hpp"

namespace fockprep {

namespace {

// FFTW planning is not thread safe; execution with distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

std::vector<double> wavenumbers(const SpatialGrid& grid) {
  const std::size_t n = grid.size();
  const double dk = 2.0 * constants::kPi / (static_cast<double>(n) * grid.dx());
  std::vector<double> k(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<double>(j);
    k[j] = (j < n / 2) ? jj * dk : (jj - static_cast<double>(n)) * dk;
  }
  return k;
}

struct ComplexFft::Impl {
  std::size_t n;
  std::unique_ptr<fftw_complex, FftwFree> buf;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit Impl(std::size_t size) : n(size), buf(fftw_alloc_complex(size)) {
    if (!buf) throw NumericalError("fft: allocation failed");
    std::fill_n(reinterpret_cast<double*>(buf.get()), 2 * n, 0.0);
    std::lock_guard lock(planner_mutex());
    const int ni = static_cast<int>(n);
    fwd = fftw_plan_dft_1d(ni, buf.get(), buf.get(), FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(ni, buf.get(), buf.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!fwd || !bwd) throw NumericalError("fft: planning failed");
  }
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
};

ComplexFft::ComplexFft(std::size_t n) : impl_(std::make_unique<Impl>(n)) {}
ComplexFft::~ComplexFft() = default;
ComplexFft::ComplexFft(ComplexFft&&) noexcept = default;
ComplexFft& ComplexFft::operator=(ComplexFft&&) noexcept = default;

std::span<std::complex<double>> ComplexFft::data() {
  return {reinterpret_cast<std::complex<double>*>(impl_->buf.get()), impl_->n};
}
std::span<const std::complex<double>> ComplexFft::data() const {
  return {reinterpret_cast<const std::complex<double>*>(impl_->buf.get()), impl_->n};
}
void ComplexFft::forward() { fftw_execute(impl_->fwd); }
void ComplexFft::backward() { fftw_execute(impl_->bwd); }

struct SpectralKinetic::Impl {
  std::size_t n;
  std::unique_ptr<double, FftwFree> real;
  std::unique_ptr<fftw_complex, FftwFree> spec;
  std::vector<double> factor;  // k^2 / 2 / N per retained bin
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  explicit Impl(const SpatialGrid& grid)
      : n(grid.size()), real(fftw_alloc_real(n)), spec(fftw_alloc_complex(n / 2 + 1)) {
    if (!real || !spec) throw NumericalError("fft: allocation failed");
    const auto k = wavenumbers(grid);
    factor.resize(n / 2 + 1);
    for (std::size_t j = 0; j <= n / 2; ++j) {
      // Bin n/2 (even n) is the Nyquist mode, wavenumber -pi/dx.
      const double kj = (j == n / 2 && n % 2 == 0) ? k[n / 2] : k[j];
      factor[j] = 0.5 * kj * kj / static_cast<double>(n);
    }
    std::lock_guard lock(planner_mutex());
    const int ni = static_cast<int>(n);
    r2c = fftw_plan_dft_r2c_1d(ni, real.get(), spec.get(), FFTW_ESTIMATE);
    c2r = fftw_plan_dft_c2r_1d(ni, spec.get(), real.get(), FFTW_ESTIMATE);
    if (!r2c || !c2r) throw NumericalError("fft: planning failed");
  }
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
  }
};

SpectralKinetic::SpectralKinetic(const SpatialGrid& grid) : impl_(std::make_unique<Impl>(grid)) {}
SpectralKinetic::~SpectralKinetic() = default;
SpectralKinetic::SpectralKinetic(SpectralKinetic&&) noexcept = default;
SpectralKinetic& SpectralKinetic::operator=(SpectralKinetic&&) noexcept = default;

std::size_t SpectralKinetic::size() const { return impl_->n; }

void SpectralKinetic::apply(std::span<const double> in, std::span<double> out) {
  auto& d = *impl_;
  if (in.size() != d.n || out.size() != d.n) throw InvalidArgument("kinetic: size mismatch");
  std::copy(in.begin(), in.end(), d.real.get());
  fftw_execute(d.r2c);
  for (std::size_t j = 0; j <= d.n / 2; ++j) {
    d.spec.get()[j][0] *= d.factor[j];
    d.spec.get()[j][1] *= d.factor[j];
  }
  fftw_execute(d.c2r);
  std::copy(d.real.get(), d.real.get() + d.n, out.begin());
}

}  // namespace fockprep
