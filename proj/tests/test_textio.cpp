#include "doctest.h"

#include <sstream>

#include "qmuse/textio.hpp"

using namespace qmuse;

namespace {

std::string qubo_to_text(const QuboModel& m) {
  std::ostringstream out;
  write_qubo(out, m);
  return out.str();
}

}  // namespace

TEST_CASE("doubles survive the text round trip bit-exactly") {
  for (double v : {0.1, -6.0, 1.0 / 3.0, 2.3, 1e-17, 12345678.875}) {
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK_THROWS_AS(parse_double("abc"), Error);
  CHECK_THROWS_AS(parse_double("1.5x"), Error);
}

TEST_CASE("qubo files round trip byte-identically") {
  QuboBuilder b(3);
  b.add_linear(0, 0.1).add_linear(2, -7.25);
  b.add_quadratic(0, 1, 1.0 / 3.0).add_quadratic(1, 2, -6);
  b.add_offset(2.3);
  b.set_label(0, "x1").set_label(2, "slack[0]");
  QuboModel model = b.build();

  std::string first = qubo_to_text(model);
  std::istringstream in(first);
  QuboModel reread = read_qubo(in);
  CHECK(reread == model);
  CHECK(reread.labels() == model.labels());
  CHECK(qubo_to_text(reread) == first);
}

TEST_CASE("ising files round trip byte-identically") {
  IsingBuilder b(2);
  b.add_bias(0, -0.5).add_coupling(0, 1, 1.75).add_offset(0.125);
  IsingModel model = b.build();

  std::ostringstream out;
  write_ising(out, model);
  std::istringstream in(out.str());
  IsingModel reread = read_ising(in);
  CHECK(reread == model);
  std::ostringstream again;
  write_ising(again, reread);
  CHECK(again.str() == out.str());
}

TEST_CASE("ilp files carry variables, objectives, and constraints") {
  IlpModel m;
  m.add_variable("y1", 0, 3);
  m.add_variable("y2", -1, 1);
  m.objective.add_linear("y1", 1.5);
  m.objective.add_quadratic("y1", "y2", -2);
  m.objective.add_term({"y1", "y1", "y2"}, 0.5);
  m.objective.add_constant(4);
  Constraint c;
  c.name = "cap";
  c.lhs.add("y1", 1).add("y2", -1).add_constant(0.5);
  c.relation = Relation::less_equal;
  c.rhs = 2;
  c.penalty = 9;
  c.hardness = Hardness::hard;
  m.constraints.push_back(c);

  std::ostringstream out;
  write_ilp(out, m);
  std::istringstream in(out.str());
  IlpModel reread = read_ilp(in);
  CHECK(reread.variables.size() == 2);
  CHECK(reread.variables[1].lower == -1);
  CHECK(reread.objective.monomials() == m.objective.monomials());
  REQUIRE(reread.constraints.size() == 1);
  CHECK(reread.constraints[0].name == "cap");
  CHECK(reread.constraints[0].relation == Relation::less_equal);
  CHECK(reread.constraints[0].rhs == 2.0);
  CHECK(reread.constraints[0].penalty == 9.0);
  CHECK(reread.constraints[0].hardness == Hardness::hard);
  CHECK(reread.constraints[0].lhs.constant() == 0.5);

  std::ostringstream again;
  write_ilp(again, reread);
  CHECK(again.str() == out.str());
}

TEST_CASE("varmap files round trip") {
  VarMap map;
  map.num_vars = 5;
  BinaryEncoding enc;
  enc.source = "y1";
  enc.offset = -1;
  enc.bits = {{0, 1}, {1, 2}};
  map.index_of["y1"] = 0;
  map.encodings.push_back(enc);
  SlackVar slack;
  slack.name = "c0.slack";
  slack.constraint_index = 0;
  slack.encoding.source = "c0.slack";
  slack.encoding.offset = 0;
  slack.encoding.bits = {{2, 1}, {3, 1}};
  map.slacks.push_back(slack);
  map.aux.push_back(AuxVar{4, 0, 2});

  std::ostringstream out;
  write_varmap(out, map);
  std::istringstream in(out.str());
  VarMap reread = read_varmap(in);
  CHECK(reread.num_vars == 5);
  REQUIRE(reread.encodings.size() == 1);
  CHECK(reread.encodings[0].offset == -1);
  CHECK(reread.encodings[0].bits == enc.bits);
  REQUIRE(reread.slacks.size() == 1);
  CHECK(reread.slacks[0].constraint_index == 0);
  REQUIRE(reread.aux.size() == 1);
  CHECK(reread.aux[0].parent_b == 2);

  std::ostringstream again;
  write_varmap(again, reread);
  CHECK(again.str() == out.str());
}

TEST_CASE("sample tables round trip") {
  SampleSet set;
  set.model_fingerprint = 0xdeadbeef12345678ULL;
  set.samples = {{{0, 0}, 0.0, 2}, {{1, 0}, 5.0, 1}};
  std::ostringstream out;
  write_samples(out, set);
  std::istringstream in(out.str());
  SampleSet reread = read_samples(in);
  CHECK(reread.model_fingerprint == set.model_fingerprint);
  REQUIRE(reread.samples.size() == 2);
  CHECK(reread.samples[0].assignment == Assignment{0, 0});
  CHECK(reread.samples[0].num_occurrences == 2);
  CHECK(reread.samples[1].energy == 5.0);
}

TEST_CASE("the one sample of a constant model serializes as a dash") {
  SampleSet set;
  set.samples = {{{}, 3.5, 1}};
  std::ostringstream out;
  write_samples(out, set);
  CHECK(out.str().find("- 3.5 1\n") != std::string::npos);
  std::istringstream in(out.str());
  SampleSet reread = read_samples(in);
  REQUIRE(reread.samples.size() == 1);
  CHECK(reread.samples[0].assignment.empty());
  CHECK(reread.samples[0].energy == 3.5);
}

TEST_CASE("melody specs parse every field") {
  std::istringstream in(R"(format melody
# a small rule set
n 5
domain named C4 D4 E4 G4
scale C major
forbid-succession D4 G4
forbid-interval 6
no-triple-repeat
anchor-first-last
weight C4 D4 2
rest G4 1
penalty one-hot 31
penalty succession 2
)");
  MelodySpec spec = read_melody_spec(in);
  CHECK(spec.n == 5);
  CHECK(spec.domain.kind == DomainKind::named_pitch);
  CHECK(spec.domain.elements.size() == 4);
  CHECK(spec.forbidden_successions.count({"D4", "G4"}) == 1);
  CHECK(spec.forbidden_intervals.count(6) == 1);
  CHECK(spec.no_triple_repeat);
  CHECK(spec.anchor_first_last);
  CHECK(spec.weights.at({"C4", "D4"}) == 2.0);
  REQUIRE(spec.rest.has_value());
  CHECK(spec.rest->first == "G4");
  CHECK(spec.penalties.one_hot == 31.0);
  CHECK(spec.penalties.succession == 2.0);
  REQUIRE(spec.scale.has_value());
  CHECK(spec.scale->tonic == 60);
}

TEST_CASE("rhythm specs accept standard and custom durations") {
  std::istringstream in(R"(format rhythm
n 4
durations Q H W:8
min-count 1
total-length 10
weight Q Q 11
)");
  RhythmSpec spec = read_rhythm_spec(in);
  CHECK(spec.n == 4);
  REQUIRE(spec.durations.size() == 3);
  CHECK(spec.durations[2] == std::pair<std::string, int>{"W", 8});
  CHECK(spec.min_count_each == 1);
  CHECK(spec.total_length == 10);
  CHECK(spec.weights.at({"Q", "Q"}) == 11.0);
}

TEST_CASE("harmony, chords, and qharmony specs parse") {
  std::istringstream h(R"(format harmony
melody 1 5 4 1
scale G minor
penalty forbidden 3
)");
  HarmonySpec harmony = read_harmony_spec(h);
  CHECK(harmony.melody == std::vector<int>{1, 5, 4, 1});
  CHECK(harmony.penalties.forbidden == 3.0);
  REQUIRE(harmony.scale.has_value());
  CHECK(harmony.scale->mode == Mode::natural_minor);

  std::istringstream c(R"(format chords
n 4
base 50
conflict 100
cadence 0
)");
  ChordProgressionSpec chords = read_chords_spec(c);
  CHECK(chords.n == 4);
  CHECK(chords.chords.size() == 7);
  CHECK(chords.cadence_reward == 0.0);

  std::istringstream q(R"(format qharmony
input C4 E4
)");
  QHarmonySpec qh = read_qharmony_spec(q);
  CHECK(qh.notes.size() == 8);
  CHECK(qh.input_notes == std::vector<std::string>{"C4", "E4"});
}

TEST_CASE("piece files and weight output") {
  std::istringstream in(R"(format piece
# excerpt
F#4 Q
E4 H
)");
  auto piece = read_piece(in);
  REQUIRE(piece.size() == 2);
  CHECK(piece[0] == std::pair<std::string, std::string>{"F#4", "Q"});

  PieceWeights w = extract_weights(piece);
  std::ostringstream out;
  write_weights(out, w);
  CHECK(out.str() == "format weights\npitch F#4 E4 1\nduration Q H 1\n");
}

TEST_CASE("format detection and header errors") {
  CHECK(detect_format("# comment\nformat qubo\n") == "qubo");
  CHECK_THROWS_AS(detect_format("linear 0 1\n"), Error);
  std::istringstream wrong("format ising\n");
  CHECK_THROWS_AS(read_qubo(wrong), Error);
  std::istringstream junk("format qubo\nnot a section\n");
  CHECK_THROWS_AS(read_qubo(junk), Error);
}
