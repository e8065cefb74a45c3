#pragma once

#include <fftw3.h>

#include <mutex>

namespace emhd::detail {

/// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& fftw_planner_mutex();

/// Out-of-place 3-D complex plans for one grid size. Planned with
/// FFTW_ESTIMATE so the chosen algorithm, and therefore every rounding
/// decision, is identical from run to run.
struct FftPlans {
  explicit FftPlans(int n);
  ~FftPlans();
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

}  // namespace emhd::detail
