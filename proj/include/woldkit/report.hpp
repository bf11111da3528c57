// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "woldkit/io.hpp"

namespace woldkit {

struct AnalyzeOptions {
  TolerancePolicy pol;
  int horizon = 0;  // 0 = default horizon
  std::string input;
};

struct Analysis {
  Json report;
  std::string text;
  int exit_code = 0;  // 0 completed, 2 preconditions failed
};

Analysis analyze(const Instance& inst, const AnalyzeOptions& opts);

Json tolerance_json(const TolerancePolicy& pol);
// Non-finite values become the string "infeasible".
Json number_json(double x);

}  // namespace woldkit
