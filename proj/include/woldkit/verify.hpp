// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "woldkit/io.hpp"

namespace woldkit {

enum class CaseStatus { passed, failed, filtered };

struct CaseResult {
  CaseStatus status = CaseStatus::passed;
  std::string detail;  // first failed check, or why the instance was filtered
  Json instance;       // serialized input for reproduction
  bool decided = true;
};

using CaseFn = CaseResult (*)(std::uint64_t seed, int index, const TolerancePolicy& pol);

struct Suite {
  const char* name;
  const char* summary;
  CaseFn run;
};

const std::vector<Suite>& suites();

struct VerifyOptions {
  std::vector<std::string> names;  // empty = all
  int count = 25;
  std::uint64_t seed = 1;
  TolerancePolicy pol;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct SuiteOutcome {
  std::string name;
  int passed = 0;
  int failed = 0;
  int filtered = 0;
  int undecided = 0;
  struct Failure {
    int index = 0;
    std::uint64_t seed = 0;
    std::string detail;
    Json instance;
  };
  std::vector<Failure> failures;
};

struct VerifyReport {
  std::vector<SuiteOutcome> suites;
  bool all_passed() const;
  Json to_json(const VerifyOptions& opts) const;
  std::string text() const;
};

// Per-case seed derived from (base seed, suite position, case index).
std::uint64_t case_seed(std::uint64_t seed, std::size_t suite, int index);

// Throws InvalidParams for an unknown suite name.
VerifyReport run_verify(const VerifyOptions& opts);

}  // namespace woldkit
