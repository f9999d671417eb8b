#pragma once

#include <string>
#include <vector>

#include "core/config.hpp"

namespace fkm {

struct InvariantResult {
  std::string name;
  long samples = 0;
  double maxDefect = 0.0;
  double tolerance = 0.0;
  bool pass = false;  // maxDefect <= tolerance
};

struct VerificationReport {
  uint64_t seed = 42;
  std::string metric = "euclidean";
  double a = 1.0;
  int dimension = 2;
  long samplesOverride = 0;
  std::vector<InvariantResult> entries;
  bool pass = false;
};

/// Runs every module invariant against seed-driven samples. Each
/// invariant appears as exactly one named entry; cfg.samples > 0
/// overrides the per-entry point counts.
VerificationReport runVerification(const RunConfig& cfg);

std::string verificationJson(const VerificationReport& rep);
std::string verificationCsv(const VerificationReport& rep);

/// The fixed set of invariant names (the coverage audit compares the
/// report against this list).
const std::vector<std::string>& canonicalInvariantNames();

}  // namespace fkm
