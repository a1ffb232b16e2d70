#pragma once

// Bang-bang control view of a QAOA schedule: H(t) = s(t) H_C + (1 - s(t)) H_B with s in {0, 1}.
// State and costate are propagated piecewise exactly, and the switching function
//   Phi(t) = 2 Re[ lambda(t)^dagger (-i)(H_C - H_B) c(t) ]
// is checked against the minimum-principle sign conditions for the cost J = -|c_N(t_f)|^2.
//
// Costate convention: lambda(t_f) = dJ/d(conj c) = -c_N(t_f) e_N, paired with the state through
// 2 Re[lambda^dagger cdot]. Under this convention lambda obeys the same equation as the state,
// d lambda/dt = -i H(s) lambda, integrated backward from t_f.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string_view>
#include <vector>

#include "xyqaoa/error.hpp"
#include "xyqaoa/schedule.hpp"
#include "xyqaoa/subspace.hpp"

namespace xyqaoa {

struct ControlSegment {
  int s = 0;  ///< 0: H_B, 1: H_C
  double duration = 0.0;

  friend bool operator==(const ControlSegment&, const ControlSegment&) = default;
};

class PiecewiseControl {
 public:
  PiecewiseControl() = default;

  /// Drops zero-duration pieces and merges neighbours with equal s.
  explicit PiecewiseControl(const std::vector<ControlSegment>& raw) {
    for (const auto& seg : raw) {
      if (seg.s != 0 && seg.s != 1) throw InvalidConstraint("control value must be 0 or 1");
      if (!(seg.duration >= 0.0) || !std::isfinite(seg.duration))
        throw InvalidConstraint("control segment durations must be finite and nonnegative");
      if (seg.duration == 0.0) continue;
      if (!segments_.empty() && segments_.back().s == seg.s)
        segments_.back().duration += seg.duration;
      else
        segments_.push_back(seg);
    }
  }

  const std::vector<ControlSegment>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }

  double total_time() const {
    double t = 0.0;
    for (const auto& seg : segments_) t += seg.duration;
    return t;
  }

  /// Segment start times, plus t_f as the final entry.
  std::vector<double> boundaries() const {
    std::vector<double> out{0.0};
    for (const auto& seg : segments_) out.push_back(out.back() + seg.duration);
    return out;
  }

  /// Interior times where s changes.
  std::vector<double> switch_times() const {
    auto b = boundaries();
    if (b.size() <= 2) return {};
    return {b.begin() + 1, b.end() - 1};
  }

  friend bool operator==(const PiecewiseControl&, const PiecewiseControl&) = default;

 private:
  std::vector<ControlSegment> segments_;
};

inline PiecewiseControl schedule_to_control(const Schedule& schedule) {
  std::vector<ControlSegment> raw;
  raw.reserve(2 * schedule.depth());
  for (const auto& d : schedule.pairs()) {
    raw.push_back({0, d.hop});
    raw.push_back({1, d.phase});
  }
  return PiecewiseControl(raw);
}

namespace detail {

inline void propagate_segment(Eigen::VectorXcd& v, int s, double dt, const SpectralDecomposition& spect) {
  if (s == 0)
    hop_in_place(v, dt, spect);
  else
    phase_in_place(v, dt);
}

}  // namespace detail

/// Piecewise-exact trajectory with values stored at segment boundaries and sampled checkpoints.
class Trajectory {
 public:
  struct Checkpoint {
    double time;
    Eigen::VectorXcd value;
  };

  Trajectory(PiecewiseControl control, std::shared_ptr<const SpectralDecomposition> spect,
             std::vector<Eigen::VectorXcd> at_boundaries, std::vector<Checkpoint> checkpoints)
      : control_(std::move(control)),
        spect_(std::move(spect)),
        bounds_(control_.boundaries()),
        at_bounds_(std::move(at_boundaries)),
        checkpoints_(std::move(checkpoints)) {}

  const PiecewiseControl& control() const { return control_; }
  const std::vector<Checkpoint>& checkpoints() const { return checkpoints_; }
  const Eigen::VectorXcd& initial() const { return at_bounds_.front(); }
  const Eigen::VectorXcd& final_value() const { return at_bounds_.back(); }
  /// Value at the start of segment k (k = size() gives t_f).
  const Eigen::VectorXcd& at_boundary(std::size_t k) const { return at_bounds_.at(k); }

  /// Exact value at any t in [0, t_f].
  Eigen::VectorXcd at(double t) const {
    const double tf = bounds_.back();
    if (t < 0.0 || t > tf) throw InvalidConstraint("trajectory time outside [0, t_f]");
    if (control_.empty()) return at_bounds_.front();
    auto it = std::upper_bound(bounds_.begin(), bounds_.end(), t);
    std::size_t k = static_cast<std::size_t>(it - bounds_.begin());
    k = std::min(k == 0 ? 0 : k - 1, control_.size() - 1);
    Eigen::VectorXcd v = at_bounds_[k];
    detail::propagate_segment(v, control_.segments()[k].s, t - bounds_[k], *spect_);
    return v;
  }

 private:
  PiecewiseControl control_;
  std::shared_ptr<const SpectralDecomposition> spect_;
  std::vector<double> bounds_;
  std::vector<Eigen::VectorXcd> at_bounds_;
  std::vector<Checkpoint> checkpoints_;
};

using StateTrajectory = Trajectory;
using CostateTrajectory = Trajectory;

inline constexpr int kDefaultSamplesPerSegment = 64;

namespace detail {

// Propagates v from t = 0 forward, or from t_f backward, recording checkpoints.
inline Trajectory integrate(const PiecewiseControl& control, std::size_t n_sites, Eigen::VectorXcd v, bool backward,
                            int samples) {
  if (samples < 1) throw InvalidConstraint("need at least one sample per segment");
  if (static_cast<std::size_t>(v.size()) != n_sites) throw InvalidDimension("trajectory vector has wrong size");
  auto spect = shared_spectrum(n_sites);
  const auto& segs = control.segments();
  const auto bounds = control.boundaries();
  std::vector<Eigen::VectorXcd> at_bounds(segs.size() + 1);

  if (!backward) {
    at_bounds[0] = v;
    for (std::size_t k = 0; k < segs.size(); ++k) {
      propagate_segment(v, segs[k].s, segs[k].duration, *spect);
      at_bounds[k + 1] = v;
    }
  } else {
    at_bounds[segs.size()] = v;
    for (std::size_t k = segs.size(); k-- > 0;) {
      propagate_segment(v, segs[k].s, -segs[k].duration, *spect);
      at_bounds[k] = v;
    }
  }

  std::vector<Trajectory::Checkpoint> checkpoints;
  checkpoints.push_back({0.0, at_bounds[0]});
  for (std::size_t k = 0; k < segs.size(); ++k) {
    for (int j = 1; j < samples; ++j) {
      const double dt = segs[k].duration * j / samples;
      Eigen::VectorXcd w = at_bounds[k];
      propagate_segment(w, segs[k].s, dt, *spect);
      checkpoints.push_back({bounds[k] + dt, std::move(w)});
    }
    checkpoints.push_back({bounds[k + 1], at_bounds[k + 1]});
  }
  return Trajectory(control, std::move(spect), std::move(at_bounds), std::move(checkpoints));
}

}  // namespace detail

/// c(t) from c(0) = |1>.
inline StateTrajectory integrate_state(const PiecewiseControl& control, std::size_t n_sites,
                                       int samples_per_segment = kDefaultSamplesPerSegment) {
  require_chain_length(n_sites);
  Eigen::VectorXcd c0 = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n_sites));
  c0(0) = 1.0;
  return detail::integrate(control, n_sites, std::move(c0), false, samples_per_segment);
}

/// Terminal costate -c_N(t_f) e_N.
inline Eigen::VectorXcd terminal_costate(const Eigen::VectorXcd& final_state) {
  Eigen::VectorXcd p = Eigen::VectorXcd::Zero(final_state.size());
  p(final_state.size() - 1) = -final_state(final_state.size() - 1);
  return p;
}

inline CostateTrajectory integrate_costate(const PiecewiseControl& control, const Eigen::VectorXcd& final_state,
                                           std::size_t n_sites, int samples_per_segment = kDefaultSamplesPerSegment) {
  require_chain_length(n_sites);
  return detail::integrate(control, n_sites, terminal_costate(final_state), true, samples_per_segment);
}

namespace detail {

// 2 Re[p^dagger (-i) A c] = 2 Im[p^dagger A c]
inline double pairing(const Eigen::VectorXcd& p, const Eigen::VectorXcd& a_times_c) {
  return 2.0 * std::imag(p.dot(a_times_c));
}

inline Eigen::VectorXcd apply_hc(const Eigen::VectorXcd& c) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(c.size());
  out(c.size() - 1) = c(c.size() - 1);
  return out;
}

}  // namespace detail

/// Phi at time t given both trajectories.
inline double switching_value(const StateTrajectory& state, const CostateTrajectory& costate, double t) {
  const Eigen::VectorXcd c = state.at(t);
  const Eigen::VectorXcd p = costate.at(t);
  return detail::pairing(p, detail::apply_hc(c) - detail::apply_hb(c));
}

inline std::vector<double> switching_function(const PiecewiseControl& control, std::size_t n_sites,
                                              const std::vector<double>& time_grid) {
  const auto state = integrate_state(control, n_sites);
  const auto costate = integrate_costate(control, state.final_value(), n_sites);
  std::vector<double> out;
  out.reserve(time_grid.size());
  for (double t : time_grid) out.push_back(switching_value(state, costate, t));
  return out;
}

/// dF/d(duration of segment k), from the control Hamiltonian, which is constant on each segment.
inline std::vector<double> segment_duration_gradient(const PiecewiseControl& control, std::size_t n_sites) {
  const auto state = integrate_state(control, n_sites, 1);
  const auto costate = integrate_costate(control, state.final_value(), n_sites, 1);
  std::vector<double> out;
  for (std::size_t k = 0; k < control.size(); ++k) {
    const Eigen::VectorXcd& c = state.at_boundary(k);
    const Eigen::VectorXcd& p = costate.at_boundary(k);
    const Eigen::VectorXcd hc = control.segments()[k].s == 0 ? detail::apply_hb(c) : detail::apply_hc(c);
    out.push_back(-detail::pairing(p, hc));
  }
  return out;
}

enum class PontryaginVerdict { consistent, violated, vacuous };

inline std::string_view to_string(PontryaginVerdict v) {
  switch (v) {
    case PontryaginVerdict::consistent: return "consistent";
    case PontryaginVerdict::violated: return "violated";
    case PontryaginVerdict::vacuous: return "vacuous";
  }
  return "unknown";
}

struct SegmentViolation {
  std::size_t segment = 0;
  double fraction = 0.0;  ///< share of sampled points where the sign condition fails
};

struct PontryaginReport {
  std::vector<double> switch_times;
  std::vector<double> switching_values;
  std::vector<SegmentViolation> segment_sign_violations;
  PontryaginVerdict verdict = PontryaginVerdict::vacuous;
  double tolerance = 1e-3;
  double final_overlap = 0.0;  ///< |c_N(t_f)|
};

inline constexpr double kVacuousOverlap = 1e-12;
inline constexpr double kMaxViolationFraction = 1e-3;

inline PontryaginReport verify_pontryagin(const PiecewiseControl& control, std::size_t n_sites,
                                          double tolerance = 1e-3,
                                          int samples_per_segment = kDefaultSamplesPerSegment) {
  if (!(tolerance >= 0.0)) throw InvalidConstraint("tolerance must be nonnegative");
  const auto state = integrate_state(control, n_sites, 1);
  const auto costate = integrate_costate(control, state.final_value(), n_sites, 1);

  PontryaginReport report;
  report.tolerance = tolerance;
  report.final_overlap = std::abs(state.final_value()(state.final_value().size() - 1));
  report.switch_times = control.switch_times();
  for (double t : report.switch_times) report.switching_values.push_back(switching_value(state, costate, t));

  const auto bounds = control.boundaries();
  for (std::size_t k = 0; k < control.size(); ++k) {
    const auto& seg = control.segments()[k];
    int failures = 0;
    for (int j = 0; j < samples_per_segment; ++j) {
      const double t = bounds[k] + seg.duration * (j + 0.5) / samples_per_segment;
      const double phi = switching_value(state, costate, t);
      // s = 0 is optimal where Phi > 0, s = 1 where Phi < 0.
      if ((seg.s == 0 && phi < -tolerance) || (seg.s == 1 && phi > tolerance)) ++failures;
    }
    report.segment_sign_violations.push_back({k, static_cast<double>(failures) / samples_per_segment});
  }

  if (report.final_overlap < kVacuousOverlap) {
    report.verdict = PontryaginVerdict::vacuous;
    return report;
  }
  const bool switches_ok = std::all_of(report.switching_values.begin(), report.switching_values.end(),
                                       [&](double v) { return std::abs(v) < tolerance; });
  const bool signs_ok =
      std::all_of(report.segment_sign_violations.begin(), report.segment_sign_violations.end(),
                  [](const SegmentViolation& v) { return v.fraction < kMaxViolationFraction; });
  report.verdict = switches_ok && signs_ok ? PontryaginVerdict::consistent : PontryaginVerdict::violated;
  return report;
}

inline PontryaginReport verify_pontryagin(const Schedule& schedule, std::size_t n_sites, double tolerance = 1e-3) {
  return verify_pontryagin(schedule_to_control(schedule), n_sites, tolerance);
}

}  // namespace xyqaoa
