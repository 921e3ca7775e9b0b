#pragma once

// Set match of a branch search against the closed-form Heun / CHE catalogs.

#include "heunforge/che.hpp"
#include "heunforge/heun.hpp"

#include <algorithm>
#include <vector>

namespace heunforge::testing {

/// Each of the 8 catalog entries (pi, g) matched by exactly one found branch.
template <class Catalog>
bool catalog_match(const std::vector<nu::PiBranch<Complex>>& found, Catalog catalog, double tol) {
  if (found.size() != 8) return false;
  std::vector<int> used(found.size(), 0);
  for (int k = 1; k <= 8; ++k) {
    auto [pi, g] = catalog(k);
    int hits = 0;
    for (std::size_t i = 0; i < found.size(); ++i)
      if (approx_equal(found[i].pi, pi, tol) && approx_equal(found[i].g, g, tol)) {
        ++hits;
        ++used[i];
      }
    if (hits != 1) return false;
  }
  return std::all_of(used.begin(), used.end(), [](int u) { return u == 1; });
}

inline bool heun_catalog_match(const std::vector<nu::PiBranch<Complex>>& found, const heun::HeunParams<Complex>& p,
                               double tol) {
  return catalog_match(
      found,
      [&](int k) {
        const heun::HeunClass c = heun::class_of_branch(k);
        return std::make_pair(heun::catalog_pi(c, p.gamma, p.delta, p.epsilon, p.a), heun::catalog_g((k + 1) / 2, p));
      },
      tol);
}

inline bool che_catalog_match(const std::vector<nu::PiBranch<Complex>>& found, const che::CheParams<Complex>& p,
                              double tol) {
  return catalog_match(
      found,
      [&](int k) {
        return std::make_pair(che::catalog_pi(k, p.alpha, p.beta, p.gamma), che::catalog_g((k + 1) / 2, p));
      },
      tol);
}

}  // namespace heunforge::testing
