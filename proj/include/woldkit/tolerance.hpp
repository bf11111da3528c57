// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdlib>
#include <string>

namespace woldkit {

struct TolerancePolicy {
  double rank = 1e-10;  // relative singular-value cutoff
  double orth = 1e-10;
  double psd = 1e-9;
  double sub = 1e-8;
  // Largest admissible column count d^n * m for lifted and iterated matrices.
  std::size_t max_columns = 20000;

  bool valid() const noexcept {
    return rank > 0 && orth > 0 && psd > 0 && sub > 0 && max_columns > 0;
  }

  // Defaults with the budget taken from WOLDKIT_BUDGET when set.
  static TolerancePolicy from_env() {
    TolerancePolicy p;
    if (const char* env = std::getenv("WOLDKIT_BUDGET")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && v > 0) p.max_columns = static_cast<std::size_t>(v);
    }
    return p;
  }
};

}  // namespace woldkit
