#pragma once

// Seeded property suites.  Every acceptance criterion is a deterministic
// function of its sub-seed; reports carry no timing or environment data, so
// identical seeds produce byte-identical reports.

#include "medf/funspec.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace medf {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;
};

// splitmix64: small, portable, stable across platforms
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  uint64_t below(uint64_t m) { return m == 0 ? 0 : next() % m; }
};

// Random finitely-described functions.
FunSpecPtr gen_base_spec(Rng& rng);        // eventually constant or periodic
FunSpecPtr gen_spec_any_class(Rng& rng);   // plus image classes

// Criteria are numbered 1..12; names: coding, emap, adf, tangled, hset,
// evdiff, witness, classify, mangle, span, tree, determinism.
CriterionResult run_criterion(int id, uint64_t seed);
std::vector<CriterionResult> run_all_criteria(uint64_t seed);

int criterion_id_by_name(const std::string& name);  // -1 when unknown
std::string report_line(const CriterionResult& r);

// The deterministic report of criteria 1..11 (used by the determinism check).
std::string base_report(uint64_t seed);

}  // namespace medf
