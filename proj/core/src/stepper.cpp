#include "emhd/stepper.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "emhd/spectral_ops.hpp"

namespace emhd {

namespace {

struct EtdTables {
  double dt = 0.0;
  std::vector<double> decay;  // e^{-c h}
  std::vector<double> hphi1;  // h phi1(-c h)
  std::vector<double> hphi2;  // h phi2(-c h)
};

EtdTables make_tables(const Grid3& grid, const ModelParams& p, double dt) {
  EtdTables t;
  t.dt = dt;
  t.decay = radial_table(grid, [&](double k) { return std::exp(-linear_decay_rate(p, k) * dt); });
  t.hphi1 = radial_table(grid, [&](double k) { return dt * etd_phi1(-linear_decay_rate(p, k) * dt); });
  t.hphi2 = radial_table(grid, [&](double k) { return dt * etd_phi2(-linear_decay_rate(p, k) * dt); });
  return t;
}

// out = a .* x + b .* y, tables indexed by |k|^2.
SpectralVectorField combine(const std::vector<double>& a, const SpectralVectorField& x,
                            const std::vector<double>& b, const SpectralVectorField& y) {
  const Grid3& grid = x.grid();
  SpectralVectorField out(grid, x.is_real() && y.is_real());
  for (int c = 0; c < 3; ++c)
    for (std::size_t f = 0; f < grid.size(); ++f) {
      const auto m = static_cast<std::size_t>(grid.radial_index(f));
      out(c, f) = a[m] * x(c, f) + b[m] * y(c, f);
    }
  return out;
}

SpectralVectorField finish_state(const SpectralVectorField& x, double t_new) {
  SpectralVectorField out = dealias(leray_project(x));
  const double norm = l2_norm(out);
  if (!std::isfinite(norm) || norm > kBlowUpThreshold)
    throw BlowUpError(t_new, "state norm " + std::to_string(norm) + " left the finite range at t = " +
                                 std::to_string(t_new));
  return out;
}

SpectralVectorField nonlinear(const SpectralVectorField& B, double t, const QProvider& q,
                              const ModelParams& p) {
  return hall_nonlinearity(B, q(t, B), p);
}

SpectralVectorField step_with(const SpectralVectorField& B, double t, const EtdTables& tab,
                              const QProvider& q, const ModelParams& p, Scheme scheme) {
  const SpectralVectorField n0 = nonlinear(B, t, q, p);
  SpectralVectorField a = combine(tab.decay, B, tab.hphi1, n0);
  if (scheme == Scheme::etd2rk) {
    SpectralVectorField dn = nonlinear(a, t + tab.dt, q, p);
    dn -= n0;
    const Grid3& grid = B.grid();
    for (int c = 0; c < 3; ++c)
      for (std::size_t f = 0; f < grid.size(); ++f)
        a(c, f) += tab.hphi2[static_cast<std::size_t>(grid.radial_index(f))] * dn(c, f);
  }
  return finish_state(a, t + tab.dt);
}

const SpectralVectorField& self_coupled(double, const SpectralVectorField& stage) { return stage; }

void require_initial_state(const SpectralVectorField& B0) {
  require_mean_free(B0, "evolve");
  const double peak = max_abs(B0);
  const double div = max_abs(divergence(B0));
  if (div > 1e-10 * B0.grid().max_magnitude() * peak)
    throw PreconditionError("evolve: initial field is not divergence-free (max |div| = " +
                            std::to_string(div) + ")");
}

}  // namespace

std::string to_string(Scheme s) { return s == Scheme::etd1 ? "etd1" : "etd2rk"; }

Scheme scheme_from_string(const std::string& name) {
  if (name == "etd1") return Scheme::etd1;
  if (name == "etd2rk") return Scheme::etd2rk;
  throw PreconditionError("unknown scheme '" + name + "' (expected etd1 or etd2rk)");
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blew_up: return "blew_up";
    case RunStatus::diverged: return "diverged";
  }
  return "completed";
}

void StepperConfig::validate() const {
  if (!(dt > 0.0) || !(t_end > 0.0) || !(dt < t_end) || !std::isfinite(t_end))
    throw PreconditionError("stepper needs 0 < dt < t_end");
  if (snapshot_every < 1) throw PreconditionError("snapshot_every must be at least 1");
}

FrozenQ::FrozenQ(std::vector<double> times, std::vector<SpectralVectorField> states)
    : times_(std::move(times)), states_(std::move(states)) {
  if (times_.empty() || times_.size() != states_.size())
    throw ShapeError("FrozenQ: times and states must be nonempty and of equal length");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1])) throw ShapeError("FrozenQ: times must increase strictly");
}

const SpectralVectorField& FrozenQ::at(double t) const {
  // Tolerate rounding in step times so t_{m+1} selects q_{m+1}.
  const double span = times_.back() - times_.front();
  const double slack = 1e-9 * (span > 0.0 ? span / static_cast<double>(times_.size()) : 1.0);
  std::size_t lo = 0, hi = times_.size();
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (times_[mid] <= t + slack) lo = mid;
    else hi = mid;
  }
  return states_[lo];
}

QProvider FrozenQ::provider() const {
  return [this](double t, const SpectralVectorField&) -> const SpectralVectorField& { return at(t); };
}

SpectralVectorField heat_semigroup(const SpectralVectorField& B, double t, const ModelParams& p) {
  if (t < 0.0) throw PreconditionError("heat_semigroup: negative time");
  if (t == 0.0) return B;
  return apply_radial_multiplier(B, [&](double k) { return std::exp(-linear_decay_rate(p, k) * t); });
}

double etd_phi1(double z) {
  if (std::abs(z) < 1e-4)
    return 1.0 + z * (1.0 / 2 + z * (1.0 / 6 + z * (1.0 / 24 + z * (1.0 / 120 + z / 720))));
  return std::expm1(z) / z;
}

double etd_phi2(double z) {
  if (std::abs(z) < 1e-4)
    return 1.0 / 2 + z * (1.0 / 6 + z * (1.0 / 24 + z * (1.0 / 120 + z * (1.0 / 720 + z / 5040))));
  return (std::expm1(z) - z) / (z * z);
}

SpectralVectorField etd_step(const SpectralVectorField& B, double t, double dt, const QProvider& q,
                             const ModelParams& p, Scheme scheme) {
  if (!(dt > 0.0)) throw PreconditionError("etd_step: dt must be positive");
  return step_with(B, t, make_tables(B.grid(), p, dt), q ? q : QProvider(self_coupled), p, scheme);
}

long step_count(const StepperConfig& stepper) {
  const double ratio = stepper.t_end / stepper.dt;
  long full = static_cast<long>(std::floor(ratio + 1e-9));
  const double rest = stepper.t_end - static_cast<double>(full) * stepper.dt;
  return rest > 1e-9 * stepper.dt ? full + 1 : full;
}

double step_time(const StepperConfig& stepper, long m) {
  return m >= step_count(stepper) ? stepper.t_end
                                  : std::min(stepper.t_end, static_cast<double>(m) * stepper.dt);
}

RunRecord evolve(const SpectralVectorField& B0, const ModelParams& p, const StepperConfig& stepper,
                 const EvolveOptions& options) {
  p.validate();
  stepper.validate();
  require_initial_state(B0);

  const Grid3& grid = B0.grid();
  const QProvider q = options.frozen_q ? options.frozen_q : QProvider(self_coupled);
  const long total = step_count(stepper);
  const EtdTables full = make_tables(grid, p, stepper.dt);
  const double last_dt = stepper.t_end - static_cast<double>(total - 1) * stepper.dt;
  const bool short_last = std::abs(last_dt - stepper.dt) > 1e-9 * stepper.dt;
  const EtdTables last = short_last ? make_tables(grid, p, last_dt) : EtdTables{};

  RunRecord rec;
  rec.params = p;
  rec.stepper = stepper;
  rec.band_max_magnitude = std::sqrt(3.0) * grid.dealias_cutoff() * grid.wavenumber_scale();

  auto record = [&](long m, double t, const SpectralVectorField& B) {
    rec.times.push_back(t);
    rec.steps.push_back(m);
    rec.l2.push_back(l2_norm(B));
    rec.hs_sigma_c.push_back(sobolev_norm(B, p.sigma_c()));
    rec.hs_sigma_c_half_kappa.push_back(sobolev_norm(B, p.sigma_c() + 0.5 * p.kappa));
    const double hk = sobolev_norm(B, 0.5 * p.kappa);
    rec.h_half_kappa.push_back(hk);
    double d = p.mu * hk * hk;
    if (p.eps_visc != 0.0) d += p.eps_visc * std::pow(sobolev_norm(B, 2.0), 2);
    rec.dissipation.push_back(d);
    rec.lambda_hat.push_back(std::numeric_limits<double>::quiet_NaN());
    rec.gevrey_r2.push_back(std::numeric_limits<double>::quiet_NaN());
    if (options.keep_states) rec.states.push_back(B);
    if (options.observer) options.observer(rec, B);
  };

  SpectralVectorField B = dealias(B0);
  record(0, 0.0, B);
  for (long m = 1; m <= total; ++m) {
    const double t = static_cast<double>(m - 1) * stepper.dt;
    const EtdTables& tab = (m == total && short_last) ? last : full;
    try {
      B = step_with(B, t, tab, q, p, stepper.scheme);
    } catch (const BlowUpError& e) {
      auto partial = std::make_shared<RunRecord>(std::move(rec));
      partial->status = RunStatus::blew_up;
      partial->status_time = e.time();
      throw BlowUpError(e.time(), e.what(), std::move(partial));
    }
    if (m % stepper.snapshot_every == 0 || m == total) record(m, step_time(stepper, m), B);
  }
  rec.status = RunStatus::completed;
  rec.status_time = stepper.t_end;
  return rec;
}

}  // namespace emhd
