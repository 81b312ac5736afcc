#pragma once

#include "stratclass/harness.hpp"

#include <initializer_list>
#include <random>

namespace testing_support {

inline stratclass::Vector vec(std::initializer_list<double> xs) {
  stratclass::Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline stratclass::Vector gaussian(std::mt19937_64& gen, int d, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  stratclass::Vector v(d);
  for (int i = 0; i < d; ++i) v[i] = n(gen);
  return v;
}

// One of each norm kind in dimension d, with random positive weights for wl1.
inline std::vector<stratclass::NormKind> all_norms(std::mt19937_64& gen, int d) {
  std::uniform_real_distribution<double> w(0.5, 2.0);
  stratclass::Vector weights(d);
  for (int i = 0; i < d; ++i) weights[i] = w(gen);
  return {stratclass::NormKind::l2(),     stratclass::NormKind::l1(),    stratclass::NormKind::linf(),
          stratclass::NormKind::lp(3.0),  stratclass::NormKind::lp(1.5), stratclass::NormKind::weighted_l1(weights)};
}

inline std::vector<stratclass::Agent> six_point_agents() {
  return {{vec({-1, 1}), 1}, {vec({0, 1}), 1},    {vec({1, 1}), 1},
          {vec({2, 1}), 1},  {vec({-1, -1}), -1}, {vec({1, -1}), -1}};
}

}  // namespace testing_support
