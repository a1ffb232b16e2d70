#pragma once

// MATLAB-style ranges: "a:b:c" (start:step:stop), "a:c" (unit step), or a single number.

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "xyqaoa/error.hpp"
#include "xyqaoa/format.hpp"

namespace xyqaoa {

inline constexpr double kRangeEndpointTolerance = 1e-12;
inline constexpr std::size_t kMaxRangeLength = 10'000'000;

/// Values are snapped to 12 significant digits so "0.2:0.2:1.6" yields 0.6, not 0.6000000000000001.
inline std::vector<double> parse_range(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::string_view rest = trim(spec);
  if (rest.empty()) throw ParseError("empty range");
  while (true) {
    const auto colon = rest.find(':');
    parts.push_back(trim(rest.substr(0, colon)));
    if (colon == std::string_view::npos) break;
    rest = rest.substr(colon + 1);
  }
  if (parts.size() > 3) throw ParseError("range has too many fields: '" + std::string(spec) + "'");
  std::vector<double> v;
  for (auto p : parts) {
    const double x = parse_double(p);
    if (!std::isfinite(x)) throw ParseError("range bounds must be finite: '" + std::string(spec) + "'");
    v.push_back(x);
  }
  if (v.size() == 1) return v;

  const double start = v.front();
  const double stop = v.back();
  const double step = v.size() == 3 ? v[1] : 1.0;
  if (step == 0.0) throw ParseError("range step is zero: '" + std::string(spec) + "'");
  if (step < 0.0 && stop > start) throw ParseError("negative step with increasing bounds: '" + std::string(spec) + "'");

  const double tol = kRangeEndpointTolerance * std::max(1.0, std::abs(stop));
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double x = start + static_cast<double>(i) * step;
    if (step > 0.0 ? x > stop + tol : x < stop - tol) break;
    if (out.size() >= kMaxRangeLength) throw ResourceLimit("range longer than " + std::to_string(kMaxRangeLength));
    out.push_back(parse_double(format_double(x, 12)));
  }
  return out;
}

/// parse_range restricted to integers.
inline std::vector<int> parse_int_range(std::string_view spec) {
  std::vector<int> out;
  for (double x : parse_range(spec)) {
    if (x != std::round(x)) throw ParseError("range must contain integers: '" + std::string(spec) + "'");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

}  // namespace xyqaoa
