#include "emhd/grid.hpp"

#include <cmath>
#include <string>

#include "emhd/errors.hpp"
#include "fft_plans.hpp"

namespace emhd {

namespace detail {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

FftPlans::FftPlans(int n) {
  std::lock_guard lock(fftw_planner_mutex());
  const std::size_t count = static_cast<std::size_t>(n) * n * n;
  auto* in = fftw_alloc_complex(count);
  auto* out = fftw_alloc_complex(count);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward = fftw_plan_dft_3d(n, n, n, in, out, FFTW_FORWARD, flags);
  backward = fftw_plan_dft_3d(n, n, n, in, out, FFTW_BACKWARD, flags);
  fftw_free(in);
  fftw_free(out);
  if (forward == nullptr || backward == nullptr) throw Error("FFTW planning failed");
}

FftPlans::~FftPlans() {
  std::lock_guard lock(fftw_planner_mutex());
  if (forward != nullptr) fftw_destroy_plan(forward);
  if (backward != nullptr) fftw_destroy_plan(backward);
}

struct GridData {
  int n = 0;
  double box_length = 0.0;
  double cutoff = 0.0;
  double scale = 0.0;
  std::vector<int> k_axis;
  std::vector<int> kd_axis;
  std::vector<std::int32_t> radial;
  std::vector<std::uint8_t> band;
  std::int32_t max_radial = 0;
  mutable std::once_flag plans_once;
  mutable std::unique_ptr<FftPlans> plans;
};

}  // namespace detail

Grid3::Grid3(int n_per_axis, double box_length, double dealias_cutoff) {
  if (n_per_axis < 4 || n_per_axis % 2 != 0)
    throw PreconditionError("Grid3: n_per_axis must be an even integer >= 4, got " +
                            std::to_string(n_per_axis));
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw PreconditionError("Grid3: box_length must be positive");
  if (dealias_cutoff < 0.0) dealias_cutoff = n_per_axis / 3.0;
  if (!(dealias_cutoff > 0.0) || dealias_cutoff > n_per_axis / 2.0)
    throw PreconditionError("Grid3: dealias_cutoff must lie in (0, n/2]");

  auto d = std::make_shared<detail::GridData>();
  const int n = n_per_axis;
  d->n = n;
  d->box_length = box_length;
  d->cutoff = dealias_cutoff;
  d->scale = 2.0 * std::numbers::pi / box_length;
  d->k_axis.resize(n);
  d->kd_axis.resize(n);
  for (int i = 0; i < n; ++i) {
    const int k = i < n / 2 ? i : i - n;
    d->k_axis[i] = k;
    d->kd_axis[i] = (i == n / 2) ? 0 : k;
  }
  const std::size_t total = static_cast<std::size_t>(n) * n * n;
  d->radial.resize(total);
  d->band.resize(total);
  std::size_t flat = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l, ++flat) {
        const int kx = d->k_axis[i], ky = d->k_axis[j], kz = d->k_axis[l];
        d->radial[flat] = kx * kx + ky * ky + kz * kz;
        d->band[flat] = (std::abs(kx) <= dealias_cutoff && std::abs(ky) <= dealias_cutoff &&
                         std::abs(kz) <= dealias_cutoff)
                            ? 1
                            : 0;
      }
    }
  }
  d->max_radial = 3 * (n / 2) * (n / 2);
  data_ = std::move(d);
}

int Grid3::n() const noexcept { return data_->n; }
double Grid3::box_length() const noexcept { return data_->box_length; }
double Grid3::dealias_cutoff() const noexcept { return data_->cutoff; }
std::size_t Grid3::size() const noexcept { return data_->radial.size(); }
double Grid3::wavenumber_scale() const noexcept { return data_->scale; }
int Grid3::wavenumber(int i) const noexcept { return data_->k_axis[i]; }
int Grid3::derivative_wavenumber(int i) const noexcept { return data_->kd_axis[i]; }
std::int32_t Grid3::radial_index(std::size_t flat) const noexcept { return data_->radial[flat]; }
std::int32_t Grid3::max_radial_index() const noexcept { return data_->max_radial; }

double Grid3::magnitude(std::int32_t radial_index) const noexcept {
  return data_->scale * std::sqrt(static_cast<double>(radial_index));
}

double Grid3::max_magnitude() const noexcept { return magnitude(data_->max_radial); }

bool Grid3::in_dealias_band(std::size_t flat) const noexcept { return data_->band[flat] != 0; }

void Grid3::unflatten(std::size_t flat, int& i, int& j, int& l) const noexcept {
  const std::size_t n = static_cast<std::size_t>(data_->n);
  l = static_cast<int>(flat % n);
  j = static_cast<int>((flat / n) % n);
  i = static_cast<int>(flat / (n * n));
}

std::size_t Grid3::flatten(int i, int j, int l) const noexcept {
  const std::size_t n = static_cast<std::size_t>(data_->n);
  return (static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)) * n +
         static_cast<std::size_t>(l);
}

std::size_t Grid3::conjugate_index(std::size_t flat) const noexcept {
  int i, j, l;
  unflatten(flat, i, j, l);
  const int n = data_->n;
  return flatten((n - i) % n, (n - j) % n, (n - l) % n);
}

double Grid3::coordinate(int i) const noexcept { return data_->box_length * i / data_->n; }

const detail::FftPlans& Grid3::fft_plans() const {
  std::call_once(data_->plans_once,
                 [this] { data_->plans = std::make_unique<detail::FftPlans>(data_->n); });
  return *data_->plans;
}

bool operator==(const Grid3& a, const Grid3& b) noexcept {
  if (a.data_ == b.data_) return true;
  return a.data_->n == b.data_->n && a.data_->box_length == b.data_->box_length &&
         a.data_->cutoff == b.data_->cutoff;
}

}  // namespace emhd
