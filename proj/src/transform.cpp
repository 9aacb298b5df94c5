#include "vectormix/transform.hpp"

#include <fftw3.h>

#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

namespace vectormix {

namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void init_threads_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { fftw_init_threads(); });
}

}  // namespace

int transform_threads() {
  const char* env = std::getenv("VECTORMIX_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  const int n = std::atoi(env);
  if (n <= 0) return std::max(1u, std::thread::hardware_concurrency());
  return n;
}

struct FourierTransform::Plans {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

FourierTransform::FourierTransform(int size) : size_(size), plans_(std::make_unique<Plans>()) {
  if (size < 1) throw std::invalid_argument("FourierTransform: size must be positive");
  const std::size_t half = std::size_t(size / 2 + 1);
  const std::size_t nreal = std::size_t(size) * std::size_t(size);
  init_threads_once();
  std::lock_guard<std::mutex> lock(planner_mutex());
  plans_->real = fftw_alloc_real(nreal);
  plans_->spec = fftw_alloc_complex(std::size_t(size) * half);
  fftw_plan_with_nthreads(transform_threads());
  plans_->r2c = fftw_plan_dft_r2c_2d(size, size, plans_->real, plans_->spec, FFTW_ESTIMATE);
  plans_->c2r = fftw_plan_dft_c2r_2d(size, size, plans_->spec, plans_->real, FFTW_ESTIMATE);
  if (plans_->r2c == nullptr || plans_->c2r == nullptr)
    throw std::runtime_error("FFTW planning failed");
}

FourierTransform::~FourierTransform() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plans_->r2c);
  fftw_destroy_plan(plans_->c2r);
  fftw_free(plans_->real);
  fftw_free(plans_->spec);
}

void FourierTransform::backward(const CoeffMatrix<double>& coeffs, SampleMatrix<double>& out) {
  const int m = static_cast<int>(coeffs.rows());
  const int n = (m - 1) / 2;
  if (m != coeffs.cols() || m % 2 == 0)
    throw ShapeError("coefficient lattice must be square with odd side");
  if (2 * n + 1 > size_) throw RepresentabilityError("lattice too large for transform size");
  const int half = size_ / 2 + 1;
  auto* spec = reinterpret_cast<std::complex<double>*>(plans_->spec);
  std::fill(spec, spec + std::size_t(size_) * half, std::complex<double>(0.0));
  for (int kx = -n; kx <= n; ++kx) {
    const int row = (kx + size_) % size_;
    for (int ky = 0; ky <= n; ++ky) spec[std::size_t(row) * half + ky] = coeffs(kx + n, ky + n);
  }
  fftw_execute(plans_->c2r);
  out.resize(size_, size_);
  out = Eigen::Map<const SampleMatrix<double>>(plans_->real, size_, size_);
}

void FourierTransform::forward(const SampleMatrix<double>& samples, int n, CoeffMatrix<double>& out) {
  if (samples.rows() != size_ || samples.cols() != size_)
    throw ShapeError("sample grid does not match transform size");
  if (2 * n + 1 > size_) throw RepresentabilityError("cutoff too large for transform size");
  Eigen::Map<SampleMatrix<double>>(plans_->real, size_, size_) = samples;
  fftw_execute(plans_->r2c);
  const int half = size_ / 2 + 1;
  const double norm = 1.0 / (double(size_) * double(size_));
  const auto* spec = reinterpret_cast<const std::complex<double>*>(plans_->spec);
  const int m = 2 * n + 1;
  out.resize(m, m);
  for (int kx = -n; kx <= n; ++kx) {
    const int row = (kx + size_) % size_;
    for (int ky = 0; ky <= n; ++ky) out(kx + n, ky + n) = spec[std::size_t(row) * half + ky] * norm;
  }
  for (int kx = -n; kx <= n; ++kx)
    for (int ky = -n; ky < 0; ++ky) out(kx + n, ky + n) = std::conj(out(-kx + n, -ky + n));
  // The ky = 0 column is Hermitian only up to rounding; make it exact.
  for (int kx = 1; kx <= n; ++kx) {
    const auto sym = 0.5 * (out(kx + n, n) + std::conj(out(-kx + n, n)));
    out(kx + n, n) = sym;
    out(-kx + n, n) = std::conj(sym);
  }
  out(n, n) = out(n, n).real();
}

FourierTransform& transform_workspace(int size) {
  thread_local std::map<int, std::unique_ptr<FourierTransform>> cache;
  auto& slot = cache[size];
  if (!slot) slot = std::make_unique<FourierTransform>(size);
  return *slot;
}

}  // namespace vectormix
