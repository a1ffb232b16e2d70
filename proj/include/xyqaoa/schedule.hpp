#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xyqaoa/error.hpp"
#include "xyqaoa/format.hpp"

namespace xyqaoa {

/// One QAOA iteration: hop under H_B for `hop`, then phase under H_C for `phase`.
struct DurationPair {
  double hop = 0.0;
  double phase = 0.0;

  friend bool operator==(const DurationPair&, const DurationPair&) = default;
};

/// Depth-p list of duration pairs. All durations are finite and nonnegative.
class Schedule {
 public:
  Schedule() = default;

  explicit Schedule(std::vector<DurationPair> pairs) : pairs_(std::move(pairs)) {
    for (const auto& d : pairs_) {
      check(d.hop);
      check(d.phase);
    }
  }

  /// Build from the flat layout (hop_1, phase_1, hop_2, phase_2, ...).
  static Schedule from_flat(std::span<const double> flat) {
    if (flat.size() % 2 != 0)
      throw InvalidDimension("schedule: flat duration list must have even length");
    std::vector<DurationPair> pairs(flat.size() / 2);
    for (std::size_t k = 0; k < pairs.size(); ++k) pairs[k] = {flat[2 * k], flat[2 * k + 1]};
    return Schedule(std::move(pairs));
  }

  std::size_t depth() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  const std::vector<DurationPair>& pairs() const { return pairs_; }
  const DurationPair& operator[](std::size_t k) const { return pairs_[k]; }

  double total_time() const {
    double t = 0.0;
    for (const auto& d : pairs_) t += d.hop + d.phase;
    return t;
  }

  std::vector<double> flat() const {
    std::vector<double> out;
    out.reserve(2 * pairs_.size());
    for (const auto& d : pairs_) {
      out.push_back(d.hop);
      out.push_back(d.phase);
    }
    return out;
  }

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  static void check(double v) {
    if (!std::isfinite(v) || v < 0.0)
      throw InvalidConstraint("schedule: durations must be finite and nonnegative");
  }

  std::vector<DurationPair> pairs_;
};

/// Parse "dB1;dC1;dB2;dC2;..." (empty string is the empty schedule).
inline Schedule parse_schedule(std::string_view text) {
  text = trim(text);
  std::vector<double> flat;
  if (!text.empty()) {
    std::size_t start = 0;
    while (true) {
      std::size_t pos = text.find(';', start);
      flat.push_back(parse_double(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
  }
  if (flat.size() % 2 != 0) throw ParseError("schedule: expected an even number of durations");
  try {
    return Schedule::from_flat(flat);
  } catch (const InvalidConstraint& e) {
    throw ParseError(e.what());
  }
}

inline std::string format_schedule(const Schedule& s, int significant = 17) {
  std::string out;
  for (double v : s.flat()) {
    if (!out.empty()) out += ';';
    out += format_double(v, significant);
  }
  return out;
}

}  // namespace xyqaoa
