#pragma once
/// @file
/// @brief Ground-truth solvers for desk-scale models: exhaustive and
/// restricted enumeration, and a seeded single-flip simulated annealer.

#include <cstdint>
#include <vector>

#include "qmuse/qubo.hpp"

namespace qmuse {

/// Annealer parameters. The inverse temperature follows a geometric schedule
/// from beta_start to beta_end over the sweeps of each read; every read runs
/// from an independent substream derived from (seed, read index).
struct SaParams {
  std::uint64_t num_reads = 100;
  std::uint64_t sweeps_per_read = 1000;
  double beta_start = 0.1;
  double beta_end = 10.0;
  std::uint64_t seed = 0;
};

/// Samples sorted ascending by (energy, lexicographic assignment).
struct SampleSet {
  std::vector<Sample> samples;
  std::uint64_t model_fingerprint = 0;

  const Sample& best() const;
};

/// Enumerates all 2^n assignments and returns the complete ground-state set
/// (every assignment achieving the minimum). Errors above `limit` variables.
SampleSet brute_force(const QuboModel& model, std::size_t limit = 24);

/// `num_reads` independent restarts of sequential single-bit Metropolis
/// sweeps; returns the final state of each read, duplicates merged. Equal
/// (model, params) inputs produce identical output.
SampleSet simulated_annealing(const QuboModel& model, const SaParams& params);

/// Exact minimum over a restricted space: `groups` partition the variables
/// and each group ranges over its own list of allowed local patterns.
/// Returns every restricted configuration achieving the minimum.
SampleSet restricted_enumerate(
    const QuboModel& model, const std::vector<std::vector<VarId>>& groups,
    const std::vector<std::vector<Assignment>>& choices_per_group);

/// Merges two sample sets over the same model, summing occurrence counts of
/// identical assignments; the result is sorted.
SampleSet merge_sample_sets(const SampleSet& a, const SampleSet& b);

}  // namespace qmuse
