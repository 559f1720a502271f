#pragma once

#include <cmath>
#include <vector>

#include "entbound/qstate.hpp"

namespace entbound::testing {

inline PureState bell_pure() {
  Vector v = Vector::Zero(4);
  v(0) = 1.0 / std::sqrt(2.0);
  v(3) = 1.0 / std::sqrt(2.0);
  return PureState({2, 2}, v, "bell");
}

inline MultipartiteState bell_state() { return bell_pure().to_state(); }

inline PureState ghz_pure() {
  Vector v = Vector::Zero(8);
  v(0) = 1.0 / std::sqrt(2.0);
  v(7) = 1.0 / std::sqrt(2.0);
  return PureState({2, 2, 2}, v, "ghz");
}

inline PureState w_pure() {
  Vector v = Vector::Zero(8);
  v(1) = 1.0 / std::sqrt(3.0);
  v(2) = 1.0 / std::sqrt(3.0);
  v(4) = 1.0 / std::sqrt(3.0);
  return PureState({2, 2, 2}, v, "w");
}

inline MultipartiteState maximally_mixed(const std::vector<int>& dims) {
  long total = 1;
  for (int d : dims) total *= d;
  return MultipartiteState(dims,
                           Matrix::Identity(total, total) / static_cast<double>(total),
                           "maximally-mixed");
}

inline MultipartiteState singlet_state() {
  Vector v = Vector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  return PureState({2, 2}, v, "singlet").to_state();
}

// Frozen scalar oracles, computed from closed forms ahead of the
// implementation and kept to full double precision.
inline constexpr double kEntropyOneThird = 0.91829583405448951;   // H(1/3, 2/3)
inline constexpr double kWMarginalEf = 0.55004775958275744;       // h((1+sqrt(5)/3)/2)
inline constexpr double kWSumSlack = -0.18179968511102537;        // H(1/3,2/3) - 2 EF
inline constexpr double kHalfInvLn2 = 0.7213475204444817;         // 1/(2 ln 2)
inline constexpr double kLog2Three = 1.5849625007211562;

}  // namespace entbound::testing
