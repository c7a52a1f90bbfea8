#include "qmuse/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <random>

namespace qmuse {

namespace {

bool sample_before(const Sample& a, const Sample& b) {
  if (a.energy != b.energy) return a.energy < b.energy;
  return a.assignment < b.assignment;
}

/// Flat adjacency form of a QuboModel for tight solver loops.
struct CompiledQubo {
  std::size_t n = 0;
  double offset = 0.0;
  std::vector<double> linear;
  // Undirected neighbor lists for single-flip deltas.
  std::vector<std::size_t> adj_start;
  std::vector<VarId> adj_var;
  std::vector<double> adj_coeff;

  explicit CompiledQubo(const QuboModel& model)
      : n(model.num_vars()), offset(model.offset()), linear(n, 0.0) {
    for (const auto& [i, c] : model.linear()) linear[i] = c;
    std::vector<std::size_t> degree(n, 0);
    for (const auto& [key, c] : model.quadratic()) {
      ++degree[key.first];
      ++degree[key.second];
    }
    adj_start.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      adj_start[i + 1] = adj_start[i] + degree[i];
    }
    adj_var.resize(adj_start[n]);
    adj_coeff.resize(adj_start[n]);
    std::vector<std::size_t> fill(adj_start.begin(), adj_start.end() - 1);
    for (const auto& [key, c] : model.quadratic()) {
      adj_var[fill[key.first]] = key.second;
      adj_coeff[fill[key.first]++] = c;
      adj_var[fill[key.second]] = key.first;
      adj_coeff[fill[key.second]++] = c;
    }
  }

  double energy_of(const Assignment& x) const {
    double total = offset;
    for (std::size_t i = 0; i < n; ++i) {
      if (!x[i]) continue;
      total += linear[i];
      for (std::size_t k = adj_start[i]; k < adj_start[i + 1]; ++k) {
        if (adj_var[k] > i && x[adj_var[k]]) total += adj_coeff[k];
      }
    }
    return total;
  }

  /// Energy change of flipping bit i under the current assignment.
  double flip_delta(const Assignment& x, std::size_t i) const {
    double local = linear[i];
    for (std::size_t k = adj_start[i]; k < adj_start[i + 1]; ++k) {
      if (x[adj_var[k]]) local += adj_coeff[k];
    }
    return x[i] ? -local : local;
  }
};

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic, platform-independent uniform in [0,1).
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void finalize(SampleSet& set) {
  std::sort(set.samples.begin(), set.samples.end(), sample_before);
}

}  // namespace

const Sample& SampleSet::best() const {
  if (samples.empty()) {
    fail(ErrorKind::invalid_input, "sample set is empty");
  }
  return samples.front();
}

SampleSet brute_force(const QuboModel& model, std::size_t limit) {
  if (model.num_vars() > limit) {
    fail(ErrorKind::size_limit,
         "brute force over " + std::to_string(model.num_vars()) +
             " variables exceeds the limit of " + std::to_string(limit));
  }
  SampleSet out;
  out.model_fingerprint = fingerprint(model);

  const std::size_t n = model.num_vars();
  if (n == 0) {
    out.samples.push_back(Sample{{}, model.offset(), 1});
    return out;
  }

  CompiledQubo compiled(model);
  const std::uint64_t count = std::uint64_t(1) << n;

  // Pass 1: Gray-code scan for the running minimum.
  Assignment x(n, 0);
  double e = compiled.offset;
  double min_e = e;
  for (std::uint64_t s = 1; s < count; ++s) {
    std::size_t i = std::countr_zero(s);
    e += compiled.flip_delta(x, i);
    x[i] ^= 1;
    if (e < min_e) min_e = e;
  }

  // Pass 2: collect candidates near the minimum, then keep the exact set.
  const double tol = 1e-9 * (1.0 + std::abs(min_e));
  const std::size_t max_ground = std::size_t(1) << 22;
  std::vector<Sample> candidates;
  std::fill(x.begin(), x.end(), 0);
  e = compiled.offset;
  if (e <= min_e + tol) candidates.push_back(Sample{x, energy(model, x), 1});
  for (std::uint64_t s = 1; s < count; ++s) {
    std::size_t i = std::countr_zero(s);
    e += compiled.flip_delta(x, i);
    x[i] ^= 1;
    if (e <= min_e + tol) {
      if (candidates.size() >= max_ground) {
        fail(ErrorKind::size_limit,
             "ground-state set exceeds 2^22 assignments");
      }
      candidates.push_back(Sample{x, energy(model, x), 1});
    }
  }
  double exact_min = candidates.front().energy;
  for (const auto& sample : candidates) {
    exact_min = std::min(exact_min, sample.energy);
  }
  for (auto& sample : candidates) {
    if (sample.energy == exact_min) out.samples.push_back(std::move(sample));
  }
  finalize(out);
  return out;
}

SampleSet simulated_annealing(const QuboModel& model, const SaParams& params) {
  if (model.num_vars() == 0) {
    fail(ErrorKind::invalid_input,
         "simulated annealing needs at least one variable");
  }
  if (params.num_reads == 0) {
    fail(ErrorKind::invalid_input, "num_reads must be at least 1");
  }
  if (!(params.beta_start < params.beta_end) || params.beta_start <= 0.0) {
    fail(ErrorKind::invalid_input,
         "beta schedule requires 0 < beta_start < beta_end");
  }

  CompiledQubo compiled(model);
  const std::size_t n = compiled.n;
  const std::uint64_t sweeps = std::max<std::uint64_t>(params.sweeps_per_read, 1);
  const double ratio = params.beta_end / params.beta_start;
  const double denom = sweeps > 1 ? static_cast<double>(sweeps - 1) : 1.0;

  std::map<Assignment, std::uint64_t> seen;
  for (std::uint64_t read = 0; read < params.num_reads; ++read) {
    std::mt19937_64 rng(splitmix64(params.seed ^ splitmix64(read)));
    Assignment x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rng() & 1;

    for (std::uint64_t t = 0; t < sweeps; ++t) {
      double beta =
          params.beta_start * std::pow(ratio, static_cast<double>(t) / denom);
      for (std::size_t i = 0; i < n; ++i) {
        double delta = compiled.flip_delta(x, i);
        if (delta <= 0.0 || uniform01(rng) < std::exp(-beta * delta)) {
          x[i] ^= 1;
        }
      }
    }
    ++seen[x];
  }

  SampleSet out;
  out.model_fingerprint = fingerprint(model);
  for (const auto& [assignment, occurrences] : seen) {
    out.samples.push_back(
        Sample{assignment, energy(model, assignment), occurrences});
  }
  finalize(out);
  return out;
}

SampleSet restricted_enumerate(
    const QuboModel& model, const std::vector<std::vector<VarId>>& groups,
    const std::vector<std::vector<Assignment>>& choices_per_group) {
  const std::size_t n = model.num_vars();
  if (groups.size() != choices_per_group.size()) {
    fail(ErrorKind::invalid_input,
         "got " + std::to_string(groups.size()) + " groups but " +
             std::to_string(choices_per_group.size()) + " choice lists");
  }
  std::vector<char> covered(n, 0);
  std::size_t total_covered = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (VarId v : groups[g]) {
      if (v >= n || covered[v]) {
        fail(ErrorKind::invalid_input,
             "groups do not partition the variables (variable " +
                 std::to_string(v) + ")");
      }
      covered[v] = 1;
      ++total_covered;
    }
    if (choices_per_group[g].empty()) {
      fail(ErrorKind::invalid_input,
           "group " + std::to_string(g) + " has an empty choice set");
    }
    for (const auto& pattern : choices_per_group[g]) {
      if (pattern.size() != groups[g].size()) {
        fail(ErrorKind::invalid_input,
             "pattern width mismatch in group " + std::to_string(g));
      }
    }
  }
  if (total_covered != n) {
    fail(ErrorKind::invalid_input,
         "groups cover " + std::to_string(total_covered) + " of " +
             std::to_string(n) + " variables");
  }

  double log_total = 0.0;
  for (const auto& choices : choices_per_group) {
    log_total += std::log2(static_cast<double>(choices.size()));
  }
  if (log_total > 27.0) {
    fail(ErrorKind::size_limit,
         "restricted space has more than 2^27 configurations");
  }

  CompiledQubo compiled(model);
  Assignment x(n, 0);
  std::vector<std::size_t> index(groups.size(), 0);
  auto apply = [&](std::size_t g) {
    const auto& vars = groups[g];
    const auto& pattern = choices_per_group[g][index[g]];
    for (std::size_t k = 0; k < vars.size(); ++k) x[vars[k]] = pattern[k];
  };
  for (std::size_t g = 0; g < groups.size(); ++g) apply(g);

  double min_e = compiled.energy_of(x);
  std::vector<Sample> candidates{Sample{x, energy(model, x), 1}};
  const auto advance = [&]() -> bool {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (++index[g] < choices_per_group[g].size()) {
        apply(g);
        return true;
      }
      index[g] = 0;
      apply(g);
    }
    return false;
  };
  while (advance()) {
    double e = compiled.energy_of(x);
    double tol = 1e-9 * (1.0 + std::abs(min_e));
    if (e < min_e - tol) {
      min_e = e;
      candidates.clear();
    }
    if (e <= min_e + tol) candidates.push_back(Sample{x, energy(model, x), 1});
  }

  double exact_min = candidates.front().energy;
  for (const auto& sample : candidates) {
    exact_min = std::min(exact_min, sample.energy);
  }
  SampleSet out;
  out.model_fingerprint = fingerprint(model);
  for (auto& sample : candidates) {
    if (sample.energy == exact_min) out.samples.push_back(std::move(sample));
  }
  finalize(out);
  return out;
}

SampleSet merge_sample_sets(const SampleSet& a, const SampleSet& b) {
  if (a.model_fingerprint != b.model_fingerprint) {
    fail(ErrorKind::invalid_input,
         "cannot merge sample sets from different models");
  }
  std::map<Assignment, Sample> merged;
  for (const auto& set : {a, b}) {
    for (const auto& sample : set.samples) {
      auto [it, inserted] = merged.try_emplace(sample.assignment, sample);
      if (!inserted) it->second.num_occurrences += sample.num_occurrences;
    }
  }
  SampleSet out;
  out.model_fingerprint = a.model_fingerprint;
  for (auto& [assignment, sample] : merged) {
    out.samples.push_back(std::move(sample));
  }
  finalize(out);
  return out;
}

}  // namespace qmuse
