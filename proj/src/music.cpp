#include "qmuse/music.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace qmuse {

namespace {

std::string slot_var(int position, const std::string& token) {
  return "p" + std::to_string(position + 1) + "." + token;
}

bool parse_int(const std::string& token, int& out) {
  if (token.empty()) return false;
  char* end = nullptr;
  long v = std::strtol(token.c_str(), &end, 10);
  if (end == nullptr || *end != '\0') return false;
  out = static_cast<int>(v);
  return true;
}

void check_unique(const std::vector<std::string>& elements) {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i].empty()) {
      fail(ErrorKind::invalid_input, "empty domain element");
    }
    for (std::size_t j = i + 1; j < elements.size(); ++j) {
      if (elements[i] == elements[j]) {
        fail(ErrorKind::invalid_input,
             "duplicate domain element '" + elements[i] + "'");
      }
    }
  }
}

double mean_nonzero_weight(const WeightMap& weights) {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& [key, w] : weights) {
    if (w != 0.0) {
      total += std::abs(w);
      ++count;
    }
  }
  return count == 0 ? 1.0 : total / static_cast<double>(count);
}

}  // namespace

PitchDomain PitchDomain::named(std::vector<std::string> pitches) {
  PitchDomain d;
  d.kind = DomainKind::named_pitch;
  d.elements = std::move(pitches);
  if (d.elements.empty()) fail(ErrorKind::invalid_input, "empty pitch set");
  check_unique(d.elements);
  return d;
}

PitchDomain PitchDomain::semitones(std::vector<int> offsets) {
  PitchDomain d;
  d.kind = DomainKind::semitone_offset;
  for (int o : offsets) d.elements.push_back(std::to_string(o));
  if (d.elements.empty()) fail(ErrorKind::invalid_input, "empty offset set");
  check_unique(d.elements);
  return d;
}

PitchDomain PitchDomain::degrees(std::vector<int> degs) {
  PitchDomain d;
  d.kind = DomainKind::scale_degree;
  for (int deg : degs) {
    if (deg < 1 || deg > 8) {
      fail(ErrorKind::invalid_input,
           "scale degree " + std::to_string(deg) + " outside 1..8");
    }
    d.elements.push_back(std::to_string(deg));
  }
  if (d.elements.empty()) fail(ErrorKind::invalid_input, "empty degree set");
  check_unique(d.elements);
  return d;
}

std::size_t PitchDomain::index_of(const std::string& element) const {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i] == element) return i;
  }
  fail(ErrorKind::invalid_input, "'" + element + "' is not in the pitch set");
}

std::optional<int> PitchDomain::value_of(std::size_t index) const {
  const std::string& token = elements.at(index);
  if (kind == DomainKind::named_pitch) {
    try {
      return parse_pitch(token);
    } catch (const Error&) {
      return std::nullopt;  // rest or other non-pitch token
    }
  }
  int v = 0;
  if (!parse_int(token, v)) return std::nullopt;
  return v;
}

std::optional<int> PitchDomain::interval(std::size_t a, std::size_t b) const {
  auto va = value_of(a);
  auto vb = value_of(b);
  if (!va || !vb) return std::nullopt;
  return std::abs(*va - *vb);
}

int RhythmSpec::duration_of(const std::string& name) const {
  for (const auto& [dname, len] : durations) {
    if (dname == name) return len;
  }
  fail(ErrorKind::invalid_input, "unknown duration '" + name + "'");
}

std::vector<std::pair<std::string, int>> standard_durations() {
  return {{"E", 1}, {"Q", 2}, {"DQ", 3}, {"H", 4}};
}

std::size_t SequenceLayout::slot_of(const std::string& label) const {
  for (std::size_t s = 0; s < slot_labels.size(); ++s) {
    if (slot_labels[s] == label) return s;
  }
  fail(ErrorKind::invalid_input, "'" + label + "' is not a slot of this model");
}

Assignment SequenceLayout::encode_selection(
    const std::vector<std::vector<std::size_t>>& selection) const {
  if (selection.size() != static_cast<std::size_t>(num_positions)) {
    fail(ErrorKind::dimension, "selection has " +
                                   std::to_string(selection.size()) +
                                   " positions, model has " +
                                   std::to_string(num_positions));
  }
  Assignment x(vars.num_vars, 0);
  for (int i = 0; i < num_positions; ++i) {
    for (std::size_t slot : selection[i]) {
      if (slot >= num_slots()) {
        fail(ErrorKind::invalid_input, "slot index out of range");
      }
      x[var(i, slot)] = 1;
    }
  }
  vars.complete_assignment(ilp, x);
  return x;
}

Assignment SequenceLayout::encode_tokens(
    const std::vector<std::string>& tokens) const {
  std::vector<std::vector<std::size_t>> selection;
  selection.reserve(tokens.size());
  for (const auto& token : tokens) selection.push_back({slot_of(token)});
  return encode_selection(selection);
}

namespace {

/// Shared scaffolding for position-major one-hot sequence models.
///
/// Hard constraints (one-hot blocks, rest/count/length equalities) default to
/// a penalty of 1 + N + U, where N bounds the total harvestable reward mass
/// and U is the soft energy of a canonical hard-feasible assignment supplied
/// by the builder. Any hard violation then costs at least 1 + U while some
/// feasible assignment costs at most U, so the ground-state set is preserved
/// while barriers stay small enough for single-flip annealing.
struct SeqModel {
  int n;
  std::vector<std::string> slots;
  IlpModel ilp;
  double neg_mass = 0.0;  // sum of per-term minimum harvests

  struct PendingHard {
    Constraint c;
    std::optional<double> explicit_penalty;
  };
  std::vector<PendingHard> hard;

  SeqModel(int positions, std::vector<std::string> slot_labels)
      : n(positions), slots(std::move(slot_labels)) {
    for (int i = 0; i < n; ++i) {
      for (const auto& s : slots) ilp.add_variable(slot_var(i, s), 0, 1);
    }
  }

  std::string var(int i, std::size_t slot) const {
    return slot_var(i, slots[slot]);
  }

  void add_reward(int i, std::size_t a, std::size_t b, double w) {
    if (w == 0.0) return;
    ilp.objective.add_quadratic(var(i, a), var(i + 1, b), -w);
    neg_mass += std::abs(w);
  }

  // x_{i,a} + x_{i+1,b} <= 1 with penalty p (compiles to p * x * x').
  void forbid_consecutive(const std::string& name, int i, std::size_t a,
                          std::size_t b, double p) {
    Constraint c;
    c.name = name;
    c.lhs.add(var(i, a), 1.0).add(var(i + 1, b), 1.0);
    c.relation = Relation::less_equal;
    c.rhs = 1.0;
    c.penalty = p;
    ilp.constraints.push_back(std::move(c));
  }

  void pin(const std::string& name, const std::string& variable, double p) {
    Constraint c;
    c.name = name;
    c.lhs.add(variable, 1.0);
    c.relation = Relation::equal;
    c.rhs = 1.0;
    c.penalty = p;
    ilp.constraints.push_back(std::move(c));
  }

  void add_hard(Constraint c, std::optional<double> explicit_penalty) {
    hard.push_back({std::move(c), explicit_penalty});
  }

  // The one-hot backbone always uses the derived hard value (finish() takes
  // the explicit override, when any, as that value directly).
  void hard_one_hot(double target) {
    for (int i = 0; i < n; ++i) {
      Constraint c;
      c.name = "onehot.p" + std::to_string(i + 1);
      for (std::size_t s = 0; s < slots.size(); ++s) c.lhs.add(var(i, s), 1.0);
      c.relation = Relation::equal;
      c.rhs = target;
      add_hard(std::move(c), std::nullopt);
    }
  }

  BuiltModel finish(std::optional<double> one_hot_penalty,
                    const std::vector<std::vector<std::size_t>>& canonical,
                    std::size_t select_count) {
    double auto_value;
    if (one_hot_penalty) {
      auto_value = *one_hot_penalty;
    } else {
      // Probe compile with unit hard penalties: at a hard-feasible
      // assignment the hard terms contribute zero, so the probe energy is
      // exactly the soft value U.
      IlpModel probe = ilp;
      for (const auto& h : hard) {
        Constraint c = h.c;
        c.penalty = 1.0;
        probe.constraints.push_back(std::move(c));
      }
      CompileResult probed = compile(probe);
      SequenceLayout probe_layout;
      probe_layout.num_positions = n;
      probe_layout.slot_labels = slots;
      probe_layout.select_count = select_count;
      probe_layout.ilp = std::move(probe);
      probe_layout.vars = std::move(probed.map);
      double u = energy(probed.model, probe_layout.encode_selection(canonical));
      auto_value = 1.0 + neg_mass + u;
    }

    for (auto& h : hard) {
      Constraint c = std::move(h.c);
      c.penalty = h.explicit_penalty.value_or(auto_value);
      ilp.constraints.push_back(std::move(c));
    }
    hard.clear();
    CompileResult compiled = compile(ilp);
    BuiltModel out;
    out.model = std::move(compiled.model);
    out.layout.num_positions = n;
    out.layout.slot_labels = slots;
    out.layout.select_count = select_count;
    out.layout.ilp = std::move(ilp);
    out.layout.vars = std::move(compiled.map);
    return out;
  }
};

void check_positive(double value, const char* family) {
  if (value <= 0.0) {
    fail(ErrorKind::invalid_input,
         std::string(family) + " penalty must be positive");
  }
}

void check_melody_spec(const MelodySpec& spec) {
  if (spec.n < 2) {
    fail(ErrorKind::invalid_input, "melody length must be at least 2");
  }
  check_positive(spec.penalties.succession, "succession");
  check_positive(spec.penalties.interval, "interval");
  check_positive(spec.penalties.triple, "triple");
  check_positive(spec.penalties.anchor, "anchor");
  if (spec.penalties.one_hot) check_positive(*spec.penalties.one_hot, "one-hot");
  if (spec.penalties.tendency) check_positive(*spec.penalties.tendency, "tendency");
  if (spec.penalties.rest) check_positive(*spec.penalties.rest, "rest");
  for (const auto& [a, b] : spec.forbidden_successions) {
    spec.domain.index_of(a);
    spec.domain.index_of(b);
  }
  for (const auto& [key, w] : spec.weights) {
    spec.domain.index_of(key.first);
    spec.domain.index_of(key.second);
    if (w < 0.0) {
      fail(ErrorKind::invalid_input, "transition weights must be >= 0");
    }
  }
  if (spec.rest) {
    spec.domain.index_of(spec.rest->first);
    if (spec.rest->second < 0 || spec.rest->second > spec.n) {
      fail(ErrorKind::invalid_input,
           "rest count " + std::to_string(spec.rest->second) +
               " outside 0.." + std::to_string(spec.n));
    }
  }
  if (spec.tendency_rules && spec.domain.kind != DomainKind::scale_degree) {
    fail(ErrorKind::invalid_input,
         "tendency rules need a scale-degree pitch set");
  }
}

constexpr std::pair<int, int> kTendencyPairs[] = {
    {2, 1}, {4, 3}, {6, 5}, {7, 8}};

// Canonical hard-feasible pitch selection: rests first, then the non-rest
// elements in rotation (a rotation of two or more elements never repeats a
// pitch three times in a row).
std::vector<std::size_t> canonical_pitches(const MelodySpec& spec) {
  std::optional<std::size_t> rest_slot;
  if (spec.rest) rest_slot = spec.domain.index_of(spec.rest->first);
  std::vector<std::size_t> non_rest;
  for (std::size_t e = 0; e < spec.domain.size(); ++e) {
    if (!rest_slot || e != *rest_slot) non_rest.push_back(e);
  }
  int rests = spec.rest ? spec.rest->second : 0;
  if (non_rest.empty() && rests < spec.n) {
    fail(ErrorKind::invalid_input,
         "the pitch set needs a non-rest element");
  }
  std::vector<std::size_t> out;
  for (int i = 0; i < spec.n; ++i) {
    if (i < rests) {
      out.push_back(*rest_slot);
    } else {
      out.push_back(non_rest[(i - rests) % non_rest.size()]);
    }
  }
  return out;
}

// Appends the melody rule set (everything except the one-hot backbone) to a
// sequence model; shared between the plain and the joint pitch+duration
// builders via the slots_of indirection (a pitch may span several slots).
template <typename SlotsOf>
void add_melody_rules(SeqModel& m, const MelodySpec& spec,
                      const SlotsOf& slots_of) {
  const auto& dom = spec.domain;

  for (const auto& [a, b] : spec.forbidden_successions) {
    std::size_t pa = dom.index_of(a);
    std::size_t pb = dom.index_of(b);
    for (int i = 0; i + 1 < m.n; ++i) {
      for (std::size_t sa : slots_of(pa)) {
        for (std::size_t sb : slots_of(pb)) {
          m.forbid_consecutive("succ." + m.slots[sa] + ">" + m.slots[sb] +
                                   ".p" + std::to_string(i + 1),
                               i, sa, sb, spec.penalties.succession);
        }
      }
    }
  }

  if (!spec.forbidden_intervals.empty()) {
    for (std::size_t a = 0; a < dom.size(); ++a) {
      for (std::size_t b = 0; b < dom.size(); ++b) {
        auto gap = dom.interval(a, b);
        if (!gap || !spec.forbidden_intervals.count(*gap)) continue;
        for (int i = 0; i + 1 < m.n; ++i) {
          for (std::size_t sa : slots_of(a)) {
            for (std::size_t sb : slots_of(b)) {
              m.forbid_consecutive("interval." + m.slots[sa] + ">" +
                                       m.slots[sb] + ".p" +
                                       std::to_string(i + 1),
                                   i, sa, sb, spec.penalties.interval);
            }
          }
        }
      }
    }
  }

  if (spec.anchor_first_last) {
    for (int position : {0, m.n - 1}) {
      Constraint c;
      c.name = "anchor.p" + std::to_string(position + 1);
      for (std::size_t s : slots_of(0)) c.lhs.add(m.var(position, s), 1.0);
      c.relation = Relation::equal;
      c.rhs = 1.0;
      c.penalty = spec.penalties.anchor;
      m.ilp.constraints.push_back(std::move(c));
    }
  }

  if (spec.tendency_rules) {
    double p = spec.penalties.tendency.value_or(mean_nonzero_weight(spec.weights));
    for (const auto& [src, tgt] : kTendencyPairs) {
      std::size_t ps = 0, pt = 0;
      try {
        ps = dom.index_of(std::to_string(src));
        pt = dom.index_of(std::to_string(tgt));
      } catch (const Error&) {
        continue;  // rule inactive when either degree is absent
      }
      for (int i = 0; i + 1 < m.n; ++i) {
        // x_{i,src} (1 - x_{i+1,tgt}) summed over the slots of each. The
        // term value is at least -p*S*(T-1), harvestable only off one-hot.
        double s_count = static_cast<double>(slots_of(ps).size());
        double t_count = static_cast<double>(slots_of(pt).size());
        m.neg_mass += p * s_count * std::max(t_count - 1.0, 0.0);
        for (std::size_t ss : slots_of(ps)) {
          m.ilp.objective.add_linear(m.var(i, ss), p);
          for (std::size_t st : slots_of(pt)) {
            m.ilp.objective.add_quadratic(m.var(i, ss), m.var(i + 1, st), -p);
          }
        }
      }
    }
  }

  if (spec.no_triple_repeat) {
    for (std::size_t e = 0; e < dom.size(); ++e) {
      for (int i = 0; i + 2 < m.n; ++i) {
        for (std::size_t s1 : slots_of(e)) {
          for (std::size_t s2 : slots_of(e)) {
            for (std::size_t s3 : slots_of(e)) {
              m.ilp.objective.add_term(
                  {m.var(i, s1), m.var(i + 1, s2), m.var(i + 2, s3)},
                  spec.penalties.triple);
            }
          }
        }
      }
    }
  }

  if (spec.rest) {
    Constraint c;
    c.name = "rests";
    std::size_t pr = dom.index_of(spec.rest->first);
    for (int i = 0; i < m.n; ++i) {
      for (std::size_t s : slots_of(pr)) c.lhs.add(m.var(i, s), 1.0);
    }
    c.relation = Relation::equal;
    c.rhs = static_cast<double>(spec.rest->second);
    m.add_hard(std::move(c), spec.penalties.rest);
  }
}

}  // namespace

BuiltModel build_melody(const MelodySpec& spec) {
  check_melody_spec(spec);
  SeqModel m(spec.n, spec.domain.elements);

  for (int i = 0; i + 1 < m.n; ++i) {
    for (const auto& [key, w] : spec.weights) {
      m.add_reward(i, spec.domain.index_of(key.first),
                   spec.domain.index_of(key.second), w);
    }
  }

  auto single = [](std::size_t p) { return std::vector<std::size_t>{p}; };
  add_melody_rules(m, spec, single);
  m.hard_one_hot(1.0);

  std::vector<std::vector<std::size_t>> canonical;
  for (std::size_t slot : canonical_pitches(spec)) canonical.push_back({slot});
  return m.finish(spec.penalties.one_hot, canonical, 1);
}

namespace {

// Per-duration counts honoring the minimum counts, the note count, and the
// exact total length when set; nullopt when no such sequence exists.
std::optional<std::vector<int>> feasible_duration_counts(
    const RhythmSpec& spec) {
  const std::size_t nd = spec.durations.size();
  std::vector<int> counts(nd, std::max(spec.min_count_each, 0));
  int used = 0;
  for (int c : counts) used += c;
  if (used > spec.n) return std::nullopt;
  int open = spec.n - used;

  if (!spec.total_length) {
    for (int i = 0; i < open; ++i) ++counts[i % nd];
    return counts;
  }
  int base = 0;
  for (std::size_t d = 0; d < nd; ++d) {
    base += counts[d] * spec.durations[d].second;
  }
  int extra = *spec.total_length - base;
  if (extra < 0) return std::nullopt;

  std::vector<std::vector<char>> reachable(
      open + 1, std::vector<char>(extra + 1, 0));
  reachable[0][0] = 1;
  for (int s = 1; s <= open; ++s) {
    for (int t = 0; t <= extra; ++t) {
      for (std::size_t d = 0; d < nd && !reachable[s][t]; ++d) {
        int len = spec.durations[d].second;
        if (t >= len && reachable[s - 1][t - len]) reachable[s][t] = 1;
      }
    }
  }
  if (!reachable[open][extra]) return std::nullopt;
  int t = extra;
  for (int s = open; s >= 1; --s) {
    for (std::size_t d = 0; d < nd; ++d) {
      int len = spec.durations[d].second;
      if (t >= len && reachable[s - 1][t - len]) {
        ++counts[d];
        t -= len;
        break;
      }
    }
  }
  return counts;
}

}  // namespace

BuiltModel build_rhythm(const RhythmSpec& spec) {
  if (spec.n < 1) fail(ErrorKind::invalid_input, "rhythm needs a length");
  if (spec.durations.empty()) {
    fail(ErrorKind::invalid_input, "rhythm needs a duration set");
  }
  std::vector<std::string> names;
  for (const auto& [name, len] : spec.durations) {
    if (len < 1) {
      fail(ErrorKind::invalid_input,
           "duration '" + name + "' must last at least one eighth");
    }
    names.push_back(name);
  }
  check_unique(names);
  for (const auto& [key, w] : spec.weights) {
    spec.duration_of(key.first);
    spec.duration_of(key.second);
  }
  auto counts = feasible_duration_counts(spec);
  if (!counts) {
    fail(ErrorKind::infeasible,
         "no sequence of " + std::to_string(spec.n) + " notes meets the "
         "duration counts" +
             (spec.total_length
                  ? " and the total length of " +
                        std::to_string(*spec.total_length) + " eighths"
                  : std::string()));
  }

  SeqModel m(spec.n, names);
  for (int i = 0; i + 1 < m.n; ++i) {
    for (const auto& [key, w] : spec.weights) {
      std::size_t a = std::find(names.begin(), names.end(), key.first) -
                      names.begin();
      std::size_t b = std::find(names.begin(), names.end(), key.second) -
                      names.begin();
      m.add_reward(i, a, b, w);
    }
  }

  if (spec.min_count_each > 0) {
    for (std::size_t d = 0; d < names.size(); ++d) {
      Constraint c;
      c.name = "count." + names[d];
      for (int i = 0; i < m.n; ++i) c.lhs.add(m.var(i, d), 1.0);
      c.relation = Relation::greater_equal;
      c.rhs = static_cast<double>(spec.min_count_each);
      m.add_hard(std::move(c), spec.penalties.min_count);
    }
  }
  if (spec.total_length) {
    Constraint c;
    c.name = "length";
    for (int i = 0; i < m.n; ++i) {
      for (std::size_t d = 0; d < names.size(); ++d) {
        c.lhs.add(m.var(i, d), static_cast<double>(spec.durations[d].second));
      }
    }
    c.relation = Relation::equal;
    c.rhs = static_cast<double>(*spec.total_length);
    m.add_hard(std::move(c), spec.penalties.length);
  }
  m.hard_one_hot(1.0);

  std::vector<std::vector<std::size_t>> canonical;
  for (std::size_t d = 0; d < names.size(); ++d) {
    for (int repeat = 0; repeat < (*counts)[d]; ++repeat) {
      canonical.push_back({d});
    }
  }
  return m.finish(spec.penalties.one_hot, canonical, 1);
}

BuiltModel build_pitch_duration(const MelodySpec& melody,
                                const RhythmSpec& rhythm,
                                const WeightMap& joint_weights) {
  check_melody_spec(melody);
  if (melody.n != rhythm.n) {
    fail(ErrorKind::invalid_input,
         "pitch and duration specs disagree on the number of notes");
  }
  std::vector<std::string> slots;
  for (const auto& pitch : melody.domain.elements) {
    for (const auto& [dname, len] : rhythm.durations) {
      slots.push_back(pitch + ":" + dname);
    }
  }
  const std::size_t nd = rhythm.durations.size();
  SeqModel m(melody.n, slots);

  for (const auto& [key, w] : joint_weights) {
    std::size_t a = std::find(slots.begin(), slots.end(), key.first) -
                    slots.begin();
    std::size_t b = std::find(slots.begin(), slots.end(), key.second) -
                    slots.begin();
    if (a >= slots.size() || b >= slots.size()) {
      fail(ErrorKind::invalid_input,
           "joint weight references unknown pair '" + key.first + "' -> '" +
               key.second + "'");
    }
    for (int i = 0; i + 1 < m.n; ++i) m.add_reward(i, a, b, w);
  }

  auto slots_of = [nd](std::size_t pitch) {
    std::vector<std::size_t> out(nd);
    for (std::size_t d = 0; d < nd; ++d) out[d] = pitch * nd + d;
    return out;
  };
  add_melody_rules(m, melody, slots_of);
  m.hard_one_hot(1.0);

  std::vector<std::vector<std::size_t>> canonical;
  for (std::size_t pitch : canonical_pitches(melody)) {
    canonical.push_back({pitch * nd});  // first duration of that pitch
  }
  return m.finish(melody.penalties.one_hot, canonical, 1);
}

BuiltModel build_harmony(const HarmonySpec& spec) {
  const int n = static_cast<int>(spec.melody.size());
  if (n < 2) fail(ErrorKind::invalid_input, "harmony needs at least 2 chords");
  if (spec.chord_size < 1 || spec.chord_size > 8) {
    fail(ErrorKind::invalid_input, "chord size must be within 1..8");
  }
  for (int degree : spec.melody) {
    if (degree < 1 || degree > 8) {
      fail(ErrorKind::invalid_input,
           "melody degree " + std::to_string(degree) + " outside 1..8");
    }
  }
  if (spec.anchor_first_last_triad &&
      (spec.melody.front() != 1 || spec.melody.back() != 1)) {
    fail(ErrorKind::invalid_input,
         "anchored harmonization assumes the melody starts and ends on "
         "degree 1");
  }

  std::vector<std::string> slots;
  for (int d = 1; d <= 8; ++d) slots.push_back(std::to_string(d));
  SeqModel m(n, slots);

  if (spec.anchor_first_last_triad) {
    for (int position : {0, n - 1}) {
      for (int degree : {1, 3, 5}) {
        m.pin("anchor." + std::to_string(degree) + ".p" +
                  std::to_string(position + 1),
              m.var(position, degree - 1), spec.penalties.anchor);
      }
    }
  }
  for (int i = 1; i + 1 < n; ++i) {
    m.pin("melody.p" + std::to_string(i + 1), m.var(i, spec.melody[i] - 1),
          spec.penalties.membership);
  }
  for (int i = 1; i + 1 < n; ++i) {
    for (int a = 1; a <= 8; ++a) {
      for (int b = a + 1; b <= 8; ++b) {
        if (!spec.forbidden_within.count(b - a)) continue;
        Constraint c;
        c.name = "clash." + std::to_string(a) + "-" + std::to_string(b) +
                 ".p" + std::to_string(i + 1);
        c.lhs.add(m.var(i, a - 1), 1.0).add(m.var(i, b - 1), 1.0);
        c.relation = Relation::less_equal;
        c.rhs = 1.0;
        c.penalty = spec.penalties.forbidden;
        m.ilp.constraints.push_back(std::move(c));
      }
    }
  }

  m.hard_one_hot(static_cast<double>(spec.chord_size));
  // The 1-3-5 triad everywhere is always chord-size feasible.
  std::vector<std::size_t> triad = {0, 2, 4};
  if (spec.chord_size != 3) {
    triad.clear();
    for (int d = 0; d < spec.chord_size; ++d) triad.push_back(d);
  }
  std::vector<std::vector<std::size_t>> canonical(n, triad);
  return m.finish(spec.penalties.chord_size, canonical,
                  static_cast<std::size_t>(spec.chord_size));
}

ChordBuild build_chord_mrf(const ChordProgressionSpec& spec) {
  if (spec.n < 2) {
    fail(ErrorKind::invalid_input, "chord progression needs at least 2 steps");
  }
  if (spec.chords.empty()) {
    fail(ErrorKind::invalid_input, "chord progression needs a chord set");
  }
  ChordBuild out;
  out.layout.n = spec.n;
  out.layout.chords = spec.chords;
  const std::size_t k = spec.chords.size();

  for (int t = 0; t < spec.n; ++t) {
    for (const auto& chord : spec.chords) {
      out.network.add_node(chord + std::to_string(t + 1));
    }
  }

  const double base = spec.potential_base;
  PairPotential neutral{base, base, base, base};
  PairPotential conflict{base, base, base, spec.potential_conflict};
  PairPotential cadence{base, base, base, spec.cadence_reward};

  std::size_t v_index = k, i_index = k;
  for (std::size_t c = 0; c < k; ++c) {
    if (spec.chords[c] == "V") v_index = c;
    if (spec.chords[c] == "I") i_index = c;
  }

  // Two chords at the same time point conflict.
  for (int t = 0; t < spec.n; ++t) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        out.network.set_edge(out.layout.var(t, a), out.layout.var(t, b),
                             conflict);
      }
    }
  }
  // Consecutive time points: repeats conflict, V->I is rewarded, the rest of
  // the pairs stay neutral.
  for (int t = 0; t + 1 < spec.n; ++t) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        PairPotential p = neutral;
        if (a == b) p = conflict;
        if (a == v_index && b == i_index) p = cadence;
        out.network.set_edge(out.layout.var(t, a), out.layout.var(t + 1, b), p);
      }
    }
  }
  return out;
}

IsingModel build_qharmony(const QHarmonySpec& spec) {
  if (spec.notes.empty()) {
    fail(ErrorKind::invalid_input, "qharmony needs a note set");
  }
  check_unique(spec.notes);
  if (spec.input_notes.empty()) {
    fail(ErrorKind::invalid_input, "qharmony needs at least one input note");
  }
  std::set<std::size_t> inputs;
  for (const auto& note : spec.input_notes) {
    auto it = std::find(spec.notes.begin(), spec.notes.end(), note);
    if (it == spec.notes.end()) {
      fail(ErrorKind::invalid_input,
           "input note '" + note + "' is not in the note set");
    }
    inputs.insert(static_cast<std::size_t>(it - spec.notes.begin()));
  }

  const std::size_t k = spec.notes.size();
  IsingBuilder b(k);
  for (std::size_t i = 0; i < k; ++i) {
    b.add_bias(static_cast<VarId>(i), inputs.count(i) ? -7.0 : 1.0);
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      b.add_coupling(static_cast<VarId>(i), static_cast<VarId>(j),
                     7.0 - 2.0 * static_cast<double>(j - i));
    }
  }
  return b.build();
}

PieceWeights extract_weights(
    const std::vector<std::pair<std::string, std::string>>& piece) {
  if (piece.size() < 2) {
    fail(ErrorKind::invalid_input,
         "need at least two notes to extract transition weights");
  }
  std::vector<std::string> pitches, durations;
  pitches.reserve(piece.size());
  durations.reserve(piece.size());
  for (const auto& [pitch, duration] : piece) {
    pitches.push_back(pitch);
    durations.push_back(duration);
  }
  PieceWeights out;
  out.pitch = transition_counts(pitches);
  out.duration = transition_counts(durations);
  return out;
}

std::vector<std::string> DecodedSequence::tokens() const {
  std::vector<std::string> out;
  out.reserve(positions.size());
  for (const auto& selected : positions) {
    if (selected.size() != 1) {
      fail(ErrorKind::invalid_input,
           "sequence has a position without exactly one selection");
    }
    out.push_back(selected.front());
  }
  return out;
}

DecodedSequence decode_sequence(const Assignment& x,
                                const SequenceLayout& layout) {
  if (x.size() != layout.vars.num_vars) {
    fail(ErrorKind::dimension,
         "assignment has " + std::to_string(x.size()) + " bits, layout has " +
             std::to_string(layout.vars.num_vars));
  }
  DecodedSequence out;
  for (int i = 0; i < layout.num_positions; ++i) {
    std::vector<std::string> selected;
    for (std::size_t s = 0; s < layout.num_slots(); ++s) {
      if (x[layout.var(i, s)]) selected.push_back(layout.slot_labels[s]);
    }
    if (selected.size() != layout.select_count) {
      out.invalid.push_back({i, selected.size()});
    }
    out.positions.push_back(std::move(selected));
  }
  return out;
}

int token_to_midi(const std::string& token, DomainKind kind,
                  const Scale& scale) {
  switch (kind) {
    case DomainKind::named_pitch:
      return parse_pitch(token);
    case DomainKind::semitone_offset: {
      int offset = 0;
      if (!parse_int(token, offset)) {
        fail(ErrorKind::invalid_input, "bad semitone offset '" + token + "'");
      }
      return scale.offset_to_midi(offset);
    }
    case DomainKind::scale_degree: {
      int degree = 0;
      if (!parse_int(token, degree)) {
        fail(ErrorKind::invalid_input, "bad scale degree '" + token + "'");
      }
      return scale.degree_to_midi(degree);
    }
  }
  fail(ErrorKind::invalid_input, "unknown domain kind");
}

std::vector<std::string> render(const std::vector<std::string>& tokens,
                                DomainKind kind, const Scale& scale) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) {
    out.push_back(
        pitch_name(token_to_midi(token, kind, scale), scale.prefer_flats()));
  }
  return out;
}

std::vector<std::string> validate_melody(const std::vector<std::string>& tokens,
                                         const MelodySpec& spec) {
  std::vector<std::string> issues;
  if (tokens.size() != static_cast<std::size_t>(spec.n)) {
    issues.push_back("expected " + std::to_string(spec.n) + " notes, got " +
                     std::to_string(tokens.size()));
    return issues;
  }
  for (const auto& token : tokens) spec.domain.index_of(token);

  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (spec.forbidden_successions.count({tokens[i], tokens[i + 1]})) {
      issues.push_back("forbidden succession " + tokens[i] + " -> " +
                       tokens[i + 1] + " at position " + std::to_string(i + 1));
    }
    auto gap = spec.domain.interval(spec.domain.index_of(tokens[i]),
                                    spec.domain.index_of(tokens[i + 1]));
    if (gap && spec.forbidden_intervals.count(*gap)) {
      issues.push_back("forbidden interval of " + std::to_string(*gap) +
                       " at position " + std::to_string(i + 1));
    }
  }
  if (spec.no_triple_repeat) {
    for (std::size_t i = 0; i + 2 < tokens.size(); ++i) {
      if (tokens[i] == tokens[i + 1] && tokens[i] == tokens[i + 2]) {
        issues.push_back("'" + tokens[i] + "' repeated three times at position " +
                         std::to_string(i + 1));
      }
    }
  }
  if (spec.anchor_first_last) {
    const std::string& anchor = spec.domain.elements.front();
    if (tokens.front() != anchor) {
      issues.push_back("first note is " + tokens.front() + ", expected " +
                       anchor);
    }
    if (tokens.back() != anchor) {
      issues.push_back("last note is " + tokens.back() + ", expected " +
                       anchor);
    }
  }
  if (spec.tendency_rules) {
    for (const auto& [src, tgt] : kTendencyPairs) {
      for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        if (tokens[i] == std::to_string(src) &&
            tokens[i + 1] != std::to_string(tgt)) {
          issues.push_back("degree " + std::to_string(src) +
                           " does not resolve to " + std::to_string(tgt) +
                           " at position " + std::to_string(i + 1));
        }
      }
    }
  }
  if (spec.rest) {
    auto count = std::count(tokens.begin(), tokens.end(), spec.rest->first);
    if (count != spec.rest->second) {
      issues.push_back("piece has " + std::to_string(count) + " rests, expected " +
                       std::to_string(spec.rest->second));
    }
  }
  return issues;
}

std::vector<std::string> validate_rhythm(const std::vector<std::string>& tokens,
                                         const RhythmSpec& spec) {
  std::vector<std::string> issues;
  if (tokens.size() != static_cast<std::size_t>(spec.n)) {
    issues.push_back("expected " + std::to_string(spec.n) + " notes, got " +
                     std::to_string(tokens.size()));
    return issues;
  }
  int total = 0;
  for (const auto& token : tokens) total += spec.duration_of(token);
  for (const auto& [name, len] : spec.durations) {
    auto count = std::count(tokens.begin(), tokens.end(), name);
    if (count < spec.min_count_each) {
      issues.push_back("duration " + name + " appears " +
                       std::to_string(count) + " times, needs at least " +
                       std::to_string(spec.min_count_each));
    }
  }
  if (spec.total_length && total != *spec.total_length) {
    issues.push_back("total length is " + std::to_string(total) +
                     " eighths, expected " +
                     std::to_string(*spec.total_length));
  }
  return issues;
}

std::vector<std::string> validate_harmony(
    const std::vector<std::vector<std::string>>& triads,
    const HarmonySpec& spec) {
  std::vector<std::string> issues;
  const std::size_t n = spec.melody.size();
  if (triads.size() != n) {
    issues.push_back("expected " + std::to_string(n) + " chords, got " +
                     std::to_string(triads.size()));
    return issues;
  }
  auto degrees_of = [](const std::vector<std::string>& triad) {
    std::set<int> degrees;
    for (const auto& token : triad) degrees.insert(std::stoi(token));
    return degrees;
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::set<int> degrees = degrees_of(triads[i]);
    std::string at = " in chord " + std::to_string(i + 1);
    if (degrees.size() != static_cast<std::size_t>(spec.chord_size)) {
      issues.push_back("expected " + std::to_string(spec.chord_size) +
                       " distinct notes" + at);
      continue;
    }
    bool interior = i > 0 && i + 1 < n;
    if (!interior && spec.anchor_first_last_triad &&
        degrees != std::set<int>{1, 3, 5}) {
      issues.push_back("anchored chord is not the 1-3-5 triad" + at);
    }
    if (interior) {
      if (!degrees.count(spec.melody[i])) {
        issues.push_back("melody degree " + std::to_string(spec.melody[i]) +
                         " missing" + at);
      }
      for (auto a = degrees.begin(); a != degrees.end(); ++a) {
        for (auto b = std::next(a); b != degrees.end(); ++b) {
          if (spec.forbidden_within.count(*b - *a)) {
            issues.push_back("degrees " + std::to_string(*a) + " and " +
                             std::to_string(*b) + " clash" + at);
          }
        }
      }
    }
  }
  return issues;
}

Restriction onehot_restriction(const SequenceLayout& layout) {
  Restriction out;
  const std::size_t k = layout.num_slots();

  std::vector<Assignment> patterns;
  if (layout.select_count == 1) {
    for (std::size_t s = 0; s < k; ++s) {
      Assignment p(k, 0);
      p[s] = 1;
      patterns.push_back(std::move(p));
    }
  } else {
    // All subsets of the requested size.
    Assignment p(k, 0);
    std::vector<std::size_t> idx(layout.select_count);
    auto emit = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
      if (depth == layout.select_count) {
        Assignment q(k, 0);
        for (std::size_t i : idx) q[i] = 1;
        patterns.push_back(std::move(q));
        return;
      }
      for (std::size_t s = start; s < k; ++s) {
        idx[depth] = s;
        self(self, s + 1, depth + 1);
      }
    };
    emit(emit, 0, 0);
  }

  for (int i = 0; i < layout.num_positions; ++i) {
    std::vector<VarId> group;
    for (std::size_t s = 0; s < k; ++s) group.push_back(layout.var(i, s));
    out.groups.push_back(std::move(group));
    out.choices.push_back(patterns);
  }
  // Slack and auxiliary bits roam freely.
  for (VarId v = static_cast<VarId>(layout.num_positions * k);
       v < layout.vars.num_vars; ++v) {
    out.groups.push_back({v});
    out.choices.push_back({{0}, {1}});
  }
  return out;
}

Restriction chord_restriction(const ChordLayout& layout) {
  Restriction out;
  const std::size_t k = layout.chords.size();
  std::vector<Assignment> patterns;
  patterns.emplace_back(k, 0);  // no chord at this step
  for (std::size_t c = 0; c < k; ++c) {
    Assignment p(k, 0);
    p[c] = 1;
    patterns.push_back(std::move(p));
  }
  for (int t = 0; t < layout.n; ++t) {
    std::vector<VarId> group;
    for (std::size_t c = 0; c < k; ++c) group.push_back(layout.var(t, c));
    out.groups.push_back(std::move(group));
    out.choices.push_back(patterns);
  }
  return out;
}

}  // namespace qmuse
