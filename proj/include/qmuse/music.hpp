#pragma once
/// @file
/// @brief Rule-based music formulations: melody, rhythm, joint pitch+duration,
/// triad harmonization, chord-progression networks, and the qHarmony Ising
/// harmonizer. Builders compile declarative rule sets into models; decoders
/// and validators bring solver output back to note sequences.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qmuse/compiler.hpp"
#include "qmuse/mrf.hpp"
#include "qmuse/pitch.hpp"
#include "qmuse/qubo.hpp"

namespace qmuse {

enum class DomainKind { named_pitch, semitone_offset, scale_degree };

/// Ordered element set a melody draws from: concrete pitches, semitone
/// offsets from a tonic, or diatonic scale degrees. Element 0 is the anchor
/// element (the tonic / first degree).
struct PitchDomain {
  DomainKind kind = DomainKind::named_pitch;
  std::vector<std::string> elements;

  static PitchDomain named(std::vector<std::string> pitches);
  static PitchDomain semitones(std::vector<int> offsets);
  static PitchDomain degrees(std::vector<int> degs);

  std::size_t size() const { return elements.size(); }
  std::size_t index_of(const std::string& element) const;
  /// Numeric value of an element (MIDI, semitone offset, or degree);
  /// nullopt for non-pitch tokens such as a rest symbol.
  std::optional<int> value_of(std::size_t index) const;
  /// Element distance in the domain's natural unit (semitones for pitch and
  /// offset domains, degree steps for degree domains); nullopt when either
  /// element has no pitch value.
  std::optional<int> interval(std::size_t a, std::size_t b) const;
};

using WeightMap = std::map<std::pair<std::string, std::string>, double>;

/// Per-rule-family penalty weights. Mandatory families (one_hot, rest)
/// default to a derived value that no combination of rewards can pay for.
struct MelodyPenalties {
  std::optional<double> one_hot;
  double succession = 1.0;
  double interval = 1.0;
  double triple = 1.0;
  double anchor = 1.0;
  std::optional<double> tendency;  // unset: mean nonzero weight, else 1
  std::optional<double> rest;      // unset: the one-hot (hard) value
};

struct MelodySpec {
  int n = 0;
  PitchDomain domain;
  std::set<std::pair<std::string, std::string>> forbidden_successions;
  std::set<int> forbidden_intervals;
  bool no_triple_repeat = false;
  bool anchor_first_last = false;
  bool tendency_rules = false;
  WeightMap weights;
  std::optional<std::pair<std::string, int>> rest;  // (symbol, exact count)
  MelodyPenalties penalties;
  std::optional<Scale> scale;  // rendering only
};

struct RhythmPenalties {
  std::optional<double> one_hot;    // mandatory; unset: derived
  std::optional<double> min_count;  // mandatory; unset: the one-hot value
  std::optional<double> length;     // mandatory; unset: the one-hot value
};

struct RhythmSpec {
  int n = 0;
  std::vector<std::pair<std::string, int>> durations;  // (name, eighths)
  WeightMap weights;
  int min_count_each = 2;
  std::optional<int> total_length;  // eighth-note units
  RhythmPenalties penalties;

  int duration_of(const std::string& name) const;
};

/// Standard duration alphabet: E=1, Q=2, DQ=3, H=4 eighth-note units.
std::vector<std::pair<std::string, int>> standard_durations();

struct HarmonyPenalties {
  std::optional<double> chord_size;  // mandatory; unset: derived
  double anchor = 1.0;
  double membership = 1.0;
  double forbidden = 1.0;
};

struct HarmonySpec {
  std::vector<int> melody;  // degrees 1..8, one per position
  int chord_size = 3;
  std::set<int> forbidden_within = {1, 6, 7};  // degree differences
  bool anchor_first_last_triad = true;
  HarmonyPenalties penalties;
  std::optional<Scale> scale;
};

struct ChordProgressionSpec {
  int n = 0;
  std::vector<std::string> chords = {"I", "ii",  "iii",   "IV",
                                     "V", "vi", "VIIdim"};
  double potential_base = 50.0;
  double potential_conflict = 100.0;
  double cadence_reward = 0.0;
  std::optional<Scale> scale;
};

struct QHarmonySpec {
  std::vector<std::string> notes = {"C4", "D4", "E4", "F4",
                                    "G4", "A4", "B4", "C5"};
  std::vector<std::string> input_notes;
};

/// Variable layout of a compiled sequence model: position-major slots, then
/// slack bits, then quadratization auxiliaries. Keeps the source IlpModel so
/// assignments can be completed consistently.
struct SequenceLayout {
  int num_positions = 0;
  std::vector<std::string> slot_labels;
  std::size_t select_count = 1;
  IlpModel ilp;
  VarMap vars;

  std::size_t num_slots() const { return slot_labels.size(); }
  VarId var(int position, std::size_t slot) const {
    return static_cast<VarId>(position * num_slots() + slot);
  }
  std::size_t slot_of(const std::string& label) const;

  /// Assignment selecting the given slots per position, with slack and
  /// auxiliary bits completed consistently.
  Assignment encode_selection(
      const std::vector<std::vector<std::size_t>>& selection) const;
  /// Single-token-per-position convenience (melody/rhythm sequences).
  Assignment encode_tokens(const std::vector<std::string>& tokens) const;
};

struct BuiltModel {
  QuboModel model;
  SequenceLayout layout;
};

BuiltModel build_melody(const MelodySpec& spec);
BuiltModel build_rhythm(const RhythmSpec& spec);

/// Joint model over (pitch, duration) pairs; slot labels are
/// "<pitch>:<duration>". Melody pitch rules apply marginally over durations;
/// the objective comes from consecutive pair-of-pairs weights keyed by the
/// composite labels.
BuiltModel build_pitch_duration(const MelodySpec& melody,
                                const RhythmSpec& rhythm,
                                const WeightMap& joint_weights);

BuiltModel build_harmony(const HarmonySpec& spec);

struct ChordLayout {
  int n = 0;
  std::vector<std::string> chords;
  VarId var(int timestep, std::size_t chord) const {
    return static_cast<VarId>(timestep * chords.size() + chord);
  }
};

struct ChordBuild {
  MarkovNetwork network;
  ChordLayout layout;
};

ChordBuild build_chord_mrf(const ChordProgressionSpec& spec);

IsingModel build_qharmony(const QHarmonySpec& spec);

struct PieceWeights {
  std::map<std::pair<std::string, std::string>, std::int64_t> pitch;
  std::map<std::pair<std::string, std::string>, std::int64_t> duration;
};

/// Consecutive-pair counts of a (pitch, duration) piece, pitches and
/// durations counted separately.
PieceWeights extract_weights(
    const std::vector<std::pair<std::string, std::string>>& piece);

struct DecodedSequence {
  struct InvalidPosition {
    int position = 0;
    std::size_t selected = 0;
  };
  std::vector<std::vector<std::string>> positions;
  std::vector<InvalidPosition> invalid;

  bool clean() const { return invalid.empty(); }
  /// Flattens singleton selections; requires clean() and select_count 1.
  std::vector<std::string> tokens() const;
};

/// Per position, the selected slot labels; positions whose selection count
/// differs from the layout's select_count are reported, not rejected.
DecodedSequence decode_sequence(const Assignment& x,
                                const SequenceLayout& layout);

int token_to_midi(const std::string& token, DomainKind kind,
                  const Scale& scale);

/// Domain tokens -> concrete pitch names under a scale.
std::vector<std::string> render(const std::vector<std::string>& tokens,
                                DomainKind kind, const Scale& scale);

/// Rule checks on decoded sequences; returns one message per violation.
std::vector<std::string> validate_melody(const std::vector<std::string>& tokens,
                                         const MelodySpec& spec);
std::vector<std::string> validate_rhythm(const std::vector<std::string>& tokens,
                                         const RhythmSpec& spec);
std::vector<std::string> validate_harmony(
    const std::vector<std::vector<std::string>>& triads,
    const HarmonySpec& spec);

/// Variable groups and allowed local patterns for restricted enumeration.
struct Restriction {
  std::vector<std::vector<VarId>> groups;
  std::vector<std::vector<Assignment>> choices;
};

/// Positions range over their select_count-subsets; slack and auxiliary bits
/// are enumerated exhaustively as singleton groups.
Restriction onehot_restriction(const SequenceLayout& layout);

/// One chord or none per timestep.
Restriction chord_restriction(const ChordLayout& layout);

}  // namespace qmuse
