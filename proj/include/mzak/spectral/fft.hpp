#pragma once

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

namespace mzak::detail {

// The FFTW planner is not thread safe; executing existing plans on new arrays is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

template <typename Scalar>
struct FftwTraits;

template <>
struct FftwTraits<double> {
  using plan_type = fftw_plan;
  using complex_type = fftw_complex;

  static plan_type plan(int rank, const int* n, complex_type* in, complex_type* out, int sign,
                        unsigned flags) {
    return fftw_plan_dft(rank, n, in, out, sign, flags);
  }
  static void execute(plan_type p, complex_type* in, complex_type* out) {
    fftw_execute_dft(p, in, out);
  }
  static void destroy(plan_type p) { fftw_destroy_plan(p); }
  static complex_type* alloc(std::size_t n) { return fftw_alloc_complex(n); }
  static void release(complex_type* p) { fftw_free(p); }
  static int alignment_of(complex_type* p) { return fftw_alignment_of(reinterpret_cast<double*>(p)); }
};

template <>
struct FftwTraits<float> {
  using plan_type = fftwf_plan;
  using complex_type = fftwf_complex;

  static plan_type plan(int rank, const int* n, complex_type* in, complex_type* out, int sign,
                        unsigned flags) {
    return fftwf_plan_dft(rank, n, in, out, sign, flags);
  }
  static void execute(plan_type p, complex_type* in, complex_type* out) {
    fftwf_execute_dft(p, in, out);
  }
  static void destroy(plan_type p) { fftwf_destroy_plan(p); }
  static complex_type* alloc(std::size_t n) { return fftwf_alloc_complex(n); }
  static void release(complex_type* p) { fftwf_free(p); }
  static int alignment_of(complex_type* p) { return fftwf_alignment_of(reinterpret_cast<float*>(p)); }
};

/// Pair of unnormalized forward/backward multidimensional complex DFT plans.
///
/// Plans use FFTW_ESTIMATE, so the chosen algorithm depends only on the shape and
/// repeated runs are bit-identical. Buffers that lack SIMD alignment are staged
/// through an aligned copy so every call runs the same plan.
template <typename Scalar>
class FftPlanPair {
 public:
  using Traits = FftwTraits<Scalar>;
  using Complex = std::complex<Scalar>;

  explicit FftPlanPair(std::vector<int> shape) : shape_(std::move(shape)) {
    std::size_t total = 1;
    for (int n : shape_) total *= static_cast<std::size_t>(n);
    size_ = total;
    const unsigned flags = FFTW_ESTIMATE;
    std::lock_guard lock(fftw_planner_mutex());
    auto* buf = Traits::alloc(total);
    if (!buf) throw std::bad_alloc();
    forward_ = Traits::plan(static_cast<int>(shape_.size()), shape_.data(), buf, buf,
                            FFTW_FORWARD, flags);
    backward_ = Traits::plan(static_cast<int>(shape_.size()), shape_.data(), buf, buf,
                             FFTW_BACKWARD, flags);
    Traits::release(buf);
    if (!forward_ || !backward_) throw std::runtime_error("FFTW failed to create a plan");
  }

  FftPlanPair(const FftPlanPair&) = delete;
  FftPlanPair& operator=(const FftPlanPair&) = delete;

  ~FftPlanPair() {
    std::lock_guard lock(fftw_planner_mutex());
    if (forward_) Traits::destroy(forward_);
    if (backward_) Traits::destroy(backward_);
  }

  std::size_t size() const noexcept { return size_; }

  /// In-place e^{-i k x} sum, no normalization.
  void forward(std::span<Complex> data) const { run(forward_, data); }
  /// In-place e^{+i k x} sum, no normalization.
  void backward(std::span<Complex> data) const { run(backward_, data); }

 private:
  void run(typename Traits::plan_type p, std::span<Complex> data) const {
    if (data.size() != size_) throw std::invalid_argument("FFT buffer size mismatch");
    auto* buf = reinterpret_cast<typename Traits::complex_type*>(data.data());
    if (Traits::alignment_of(buf) == 0) {
      Traits::execute(p, buf, buf);
      return;
    }
    std::unique_ptr<typename Traits::complex_type[], void (*)(typename Traits::complex_type*)>
        staged(Traits::alloc(size_), &Traits::release);
    if (!staged) throw std::bad_alloc();
    std::copy(data.begin(), data.end(), reinterpret_cast<Complex*>(staged.get()));
    Traits::execute(p, staged.get(), staged.get());
    std::copy_n(reinterpret_cast<const Complex*>(staged.get()), size_, data.begin());
  }

  std::vector<int> shape_;
  std::size_t size_ = 0;
  typename Traits::plan_type forward_ = nullptr;
  typename Traits::plan_type backward_ = nullptr;
};

}  // namespace mzak::detail
