#pragma once
/// @file
/// @brief Structured text formats for models, specs, and sample tables.
///
/// Every file starts with `format <kind>`; `#` starts a comment. Numbers are
/// written with the shortest decimal representation that round-trips the
/// exact binary value, so write -> read -> write is byte-identical.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qmuse/compiler.hpp"
#include "qmuse/music.hpp"
#include "qmuse/qubo.hpp"
#include "qmuse/solvers.hpp"

namespace qmuse {

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);
double parse_double(const std::string& token);
std::int64_t parse_int64(const std::string& token);

/// Returns the `format` keyword of the file ("qubo", "melody", ...).
std::string detect_format(const std::string& text);

void write_qubo(std::ostream& out, const QuboModel& model);
QuboModel read_qubo(std::istream& in);

void write_ising(std::ostream& out, const IsingModel& model);
IsingModel read_ising(std::istream& in);

void write_ilp(std::ostream& out, const IlpModel& model);
IlpModel read_ilp(std::istream& in);

void write_varmap(std::ostream& out, const VarMap& map);
VarMap read_varmap(std::istream& in);

/// One row per sample: assignment bits, energy, occurrence count.
void write_samples(std::ostream& out, const SampleSet& samples);
SampleSet read_samples(std::istream& in);

MelodySpec read_melody_spec(std::istream& in);
RhythmSpec read_rhythm_spec(std::istream& in);
HarmonySpec read_harmony_spec(std::istream& in);
ChordProgressionSpec read_chords_spec(std::istream& in);
QHarmonySpec read_qharmony_spec(std::istream& in);

/// Piece file: one `<pitch> <duration>` pair per line.
std::vector<std::pair<std::string, std::string>> read_piece(std::istream& in);

void write_weights(std::ostream& out, const PieceWeights& weights);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace qmuse
