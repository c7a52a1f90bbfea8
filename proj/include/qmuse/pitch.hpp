#pragma once
/// @file
/// @brief Pitch names, scales, degree/semitone rendering, and ABC output.

#include <optional>
#include <string>
#include <vector>

namespace qmuse {

/// Scientific pitch notation ("C4" = 60, "F#4" = 66, "Bb3" = 58) -> MIDI.
int parse_pitch(const std::string& name);

/// MIDI -> pitch name; accidentals spelled as sharps or flats.
std::string pitch_name(int midi, bool prefer_flats = false);

enum class Mode { major, natural_minor, chromatic };

struct Scale {
  int tonic = 60;  // MIDI
  Mode mode = Mode::major;

  /// Diatonic degree 1..8 -> MIDI (degree 8 is the octave).
  int degree_to_midi(int degree) const;
  /// Semitone offset from the tonic -> MIDI.
  int offset_to_midi(int offset) const;
  bool prefer_flats() const { return mode == Mode::natural_minor; }
};

/// Parses "C major", "G minor", "C4 chromatic"; a tonic without an octave
/// defaults to octave 4.
Scale parse_scale(const std::string& text);
std::string scale_name(const Scale& scale);

/// One rendered note: a pitch set (usually a single pitch, three for a
/// triad, empty for a rest) and a length in eighth-note units.
struct ScoreNote {
  std::vector<int> midi;
  int eighths = 2;
};

/// Minimal ABC tune: X/T/M/L/K headers plus one line of notes. Uses M:none
/// (free meter) and L:1/8 so note lengths are plain eighth-unit counts; key
/// signatures and accidental state are handled properly.
std::string abc_score(const std::string& title, const Scale& scale,
                      const std::vector<ScoreNote>& notes);

}  // namespace qmuse
