#include "ksplit/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace ksplit::fft {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per shape and kept for the process.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int n1, int n2, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(n1, n2, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<cplx> a(static_cast<size_t>(n1) * n2), b(a.size());
    auto* in = reinterpret_cast<fftw_complex*>(a.data());
    auto* out = reinterpret_cast<fftw_complex*>(b.data());
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = n1 == 1 ? fftw_plan_dft_1d(n2, in, out, sign, flags)
                             : fftw_plan_dft_2d(n1, n2, in, out, sign, flags);
    if (plan == nullptr) throw std::runtime_error("fftw plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

void execute(std::span<const cplx> in, std::span<cplx> out, int n1, int n2,
             int sign) {
  const size_t total = static_cast<size_t>(n1) * n2;
  if (in.size() != total || out.size() != total)
    throw std::invalid_argument("fft: buffer size does not match shape");
  fftw_plan plan = PlanCache::instance().get(n1, n2, sign);
  if (in.data() == out.data()) {
    std::vector<cplx> tmp(in.begin(), in.end());
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(tmp.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
  } else {
    // FFTW does not modify the input of an out-of-place complex DFT.
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
  }
}

}  // namespace

void forward(std::span<const cplx> in, std::span<cplx> out, int n1, int n2) {
  execute(in, out, n1, n2, FFTW_FORWARD);
  const double scale = 1.0 / (static_cast<double>(n1) * n2);
  for (auto& c : out) c *= scale;
}

void inverse(std::span<const cplx> in, std::span<cplx> out, int n1, int n2) {
  execute(in, out, n1, n2, FFTW_BACKWARD);
}

}  // namespace ksplit::fft
