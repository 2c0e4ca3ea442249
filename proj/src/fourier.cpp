#include "phasespace/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "phasespace/error.hpp"

namespace phasespace::fourier {

namespace {

// (rank, n0, n1, howmany, stride, dist, sign)
using PlanKey = std::tuple<int, int, int, int, int, int, int>;

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const PlanKey& key) {
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const auto [rank, n0, n1, howmany, stride, dist, sign] = key;
    const std::size_t total = static_cast<std::size_t>(rank == 2 ? n0 * n1 : (howmany - 1) * dist + (n0 - 1) * stride + 1);
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = nullptr;
    if (rank == 2) {
      plan = fftw_plan_dft_2d(n0, n1, buf, buf, sign, flags);
    } else {
      int n[1] = {n0};
      plan = fftw_plan_many_dft(1, n, howmany, buf, nullptr, stride, dist, buf, nullptr, stride, dist, sign, flags);
    }
    fftw_free(buf);
    if (!plan) throw Error(ErrorCode::InvalidArgument, "FFTW could not create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

int sign_of(Direction dir) { return dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD; }

fftw_complex* as_fftw(std::span<cplx> data) { return reinterpret_cast<fftw_complex*>(data.data()); }

}  // namespace

void fft(std::span<cplx> data, Direction dir) {
  if (data.empty()) return;
  const int n = static_cast<int>(data.size());
  fftw_execute_dft(cache().get({1, n, 0, 1, 1, n, sign_of(dir)}), as_fftw(data), as_fftw(data));
}

void fft2(std::span<cplx> data, std::size_t rows, std::size_t cols, Direction dir) {
  if (data.size() != rows * cols) throw Error(ErrorCode::InvalidArgument, "fft2 size mismatch");
  fftw_execute_dft(cache().get({2, static_cast<int>(rows), static_cast<int>(cols), 1, 1, 0, sign_of(dir)}),
                   as_fftw(data), as_fftw(data));
}

void fft_rows(std::span<cplx> data, std::size_t rows, std::size_t cols, Direction dir) {
  if (data.size() != rows * cols) throw Error(ErrorCode::InvalidArgument, "fft_rows size mismatch");
  const int c = static_cast<int>(cols);
  fftw_execute_dft(cache().get({1, c, 0, static_cast<int>(rows), 1, c, sign_of(dir)}), as_fftw(data),
                   as_fftw(data));
}

void fft_cols(std::span<cplx> data, std::size_t rows, std::size_t cols, Direction dir) {
  if (data.size() != rows * cols) throw Error(ErrorCode::InvalidArgument, "fft_cols size mismatch");
  const int r = static_cast<int>(rows);
  const int c = static_cast<int>(cols);
  fftw_execute_dft(cache().get({1, r, 0, c, c, 1, sign_of(dir)}), as_fftw(data), as_fftw(data));
}

std::vector<double> angular_frequencies(std::size_t n, double spacing) {
  std::vector<double> k(n);
  const double base = 2.0 * std::numbers::pi / (static_cast<double>(n) * spacing);
  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = static_cast<long>(i);
    const long signed_idx = (2 * i >= n) ? idx - static_cast<long>(n) : idx;
    k[i] = base * static_cast<double>(signed_idx);
  }
  return k;
}

std::vector<cplx> upsample2(std::span<const cplx> samples) {
  const std::size_t n = samples.size();
  std::vector<cplx> spec(samples.begin(), samples.end());
  fft(spec, Direction::Forward);
  std::vector<cplx> wide(2 * n, cplx(0.0, 0.0));
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k < (n + 1) / 2; ++k) wide[k] = spec[k];
  for (std::size_t k = half + 1; k < n; ++k) wide[n + k] = spec[k];
  if (n % 2 == 0) {
    wide[half] = 0.5 * spec[half];
    wide[2 * n - half] = 0.5 * spec[half];
  }
  fft(wide, Direction::Backward);
  const double inv = 1.0 / static_cast<double>(n);
  for (auto& v : wide) v *= inv;
  return wide;
}

}  // namespace phasespace::fourier
