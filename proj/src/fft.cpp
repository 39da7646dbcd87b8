#include "subres/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

namespace subres::fft {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Buffer {
  explicit Buffer(std::size_t n) : ptr(fftw_alloc_complex(n)) {}
  ~Buffer() { fftw_free(ptr); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  fftw_complex* ptr;
};

struct Plan {
  explicit Plan(fftw_plan p) : plan(p) {}
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  fftw_plan plan;
};

void run(cplx* data, std::size_t total, int rank, const int* dims, bool forward) {
  Buffer buf(total);
  std::memcpy(buf.ptr, data, total * sizeof(cplx));
  fftw_plan raw;
  {
    std::lock_guard lock(planner_mutex());
    raw = fftw_plan_dft(rank, dims, buf.ptr, buf.ptr, forward ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  Plan plan(raw);
  fftw_execute(plan.plan);
  std::memcpy(static_cast<void*>(data), buf.ptr, total * sizeof(cplx));
}

}  // namespace

void dft(std::span<cplx> data, bool forward) {
  if (data.empty()) return;
  const int n = static_cast<int>(data.size());
  run(data.data(), data.size(), 1, &n, forward);
}

void dft2(CMatrix& m, bool forward) {
  if (m.size() == 0) return;
  // Column-major storage is row-major with the dimensions swapped.
  const int dims[2] = {static_cast<int>(m.cols()), static_cast<int>(m.rows())};
  run(m.data(), static_cast<std::size_t>(m.size()), 2, dims, forward);
}

}  // namespace subres::fft
