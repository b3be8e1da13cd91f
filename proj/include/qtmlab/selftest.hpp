#pragma once

#include <cstdint>
#include <string>

namespace qtmlab {

struct selftest_result {
  bool ok = true;
  std::string report;  // one line per check, byte-identical for a given seed
};

// Cross-module invariant suites driven by a seeded generator: fixture
// validation, step isometry, spectra, coding, compression, roundtrips and a
// quick approximate-mode pass. sabotage flips one expected value so the
// harness can demonstrate a failure.
selftest_result run_selftest(uint64_t seed, bool sabotage = false,
                             const std::string& fixture_dir = QTMLAB_FIXTURE_DIR);

}  // namespace qtmlab
