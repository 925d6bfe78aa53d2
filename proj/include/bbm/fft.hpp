#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <vector>

namespace bbm::fft {

/// fftw_malloc-backed complex buffer (SIMD-aligned, as the cached plans expect).
class Buffer {
 public:
  explicit Buffer(std::size_t n) : n_(n), data_(fftw_alloc_complex(n)) {
    if (!data_) throw std::bad_alloc();
    for (std::size_t i = 0; i < n_; ++i) data_[i][0] = data_[i][1] = 0.0;
  }
  ~Buffer() { fftw_free(data_); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;

  std::size_t size() const noexcept { return n_; }
  fftw_complex* data() noexcept { return data_; }
  std::complex<double>& operator[](std::size_t i) noexcept {
    return *reinterpret_cast<std::complex<double>*>(&data_[i]);
  }
  const std::complex<double>& operator[](std::size_t i) const noexcept {
    return *reinterpret_cast<const std::complex<double>*>(&data_[i]);
  }

 private:
  std::size_t n_;
  fftw_complex* data_;
};

/// Smallest n >= target whose prime factors are all in {2, 3, 5, 7}.
inline std::size_t good_size(std::size_t target) {
  for (std::size_t n = target > 0 ? target : 1;; ++n) {
    std::size_t r = n;
    for (std::size_t p : {2u, 3u, 5u, 7u}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return n;
  }
}

/// Process-wide cache of FFTW plans keyed by (size, direction). Planning is
/// serialized; execution through the new-array interface is reentrant.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    Buffer in(n), out(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), in.data(), out.data(), sign, FFTW_ESTIMATE);
    plans_.emplace(key, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [key, p] : plans_) fftw_destroy_plan(p);
  }

 private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

inline void forward(Buffer& in, Buffer& out) {
  fftw_execute_dft(PlanCache::instance().get(in.size(), FFTW_FORWARD), in.data(), out.data());
}

inline void backward(Buffer& in, Buffer& out) {
  fftw_execute_dft(PlanCache::instance().get(in.size(), FFTW_BACKWARD), in.data(), out.data());
}

/// Full linear convolution (length a.size() + b.size() - 1) through zero-padded transforms.
inline std::vector<std::complex<double>> linear_convolution(const std::vector<std::complex<double>>& a,
                                                            const std::vector<std::complex<double>>& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t full = a.size() + b.size() - 1;
  const std::size_t n = good_size(std::max(full, 2 * std::max(a.size(), b.size())));
  Buffer pa(n), pb(n), fa(n), fb(n);
  for (std::size_t i = 0; i < a.size(); ++i) pa[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) pb[i] = b[i];
  forward(pa, fa);
  forward(pb, fb);
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  backward(fa, pa);
  std::vector<std::complex<double>> out(full);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < full; ++i) out[i] = pa[i] * scale;
  return out;
}

}  // namespace bbm::fft
