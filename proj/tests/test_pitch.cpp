#include "doctest.h"

#include "qmuse/error.hpp"
#include "qmuse/pitch.hpp"

using namespace qmuse;

TEST_CASE("pitch names parse to MIDI numbers") {
  CHECK(parse_pitch("C4") == 60);
  CHECK(parse_pitch("F#4") == 66);
  CHECK(parse_pitch("Bb3") == 58);
  CHECK(parse_pitch("C5") == 72);
  CHECK(parse_pitch("A0") == 21);
  CHECK_THROWS_AS(parse_pitch("H4"), Error);
  CHECK_THROWS_AS(parse_pitch("C"), Error);
  CHECK_THROWS_AS(parse_pitch(""), Error);
}

TEST_CASE("pitch names format with either accidental preference") {
  CHECK(pitch_name(60) == "C4");
  CHECK(pitch_name(66) == "F#4");
  CHECK(pitch_name(66, true) == "Gb4");
  CHECK(pitch_name(70, true) == "Bb4");
  for (int midi = 24; midi <= 96; ++midi) {
    CHECK(parse_pitch(pitch_name(midi)) == midi);
    CHECK(parse_pitch(pitch_name(midi, true)) == midi);
  }
}

TEST_CASE("scales map degrees and offsets") {
  Scale c_major{60, Mode::major};
  CHECK(c_major.degree_to_midi(1) == 60);
  CHECK(c_major.degree_to_midi(4) == 65);
  CHECK(c_major.degree_to_midi(8) == 72);
  CHECK(c_major.offset_to_midi(7) == 67);
  CHECK_THROWS_AS(c_major.degree_to_midi(0), Error);
  CHECK_THROWS_AS(c_major.degree_to_midi(9), Error);

  Scale g_minor{67, Mode::natural_minor};
  CHECK(g_minor.degree_to_midi(3) == 70);  // Bb4
  CHECK(g_minor.degree_to_midi(6) == 75);  // Eb5

  Scale chromatic{60, Mode::chromatic};
  CHECK(chromatic.offset_to_midi(1) == 61);
  CHECK_THROWS_AS(chromatic.degree_to_midi(1), Error);
}

TEST_CASE("scale parsing accepts tonal names with optional octaves") {
  Scale s = parse_scale("C major");
  CHECK(s.tonic == 60);
  CHECK(s.mode == Mode::major);
  CHECK(scale_name(s) == "C major");

  Scale g = parse_scale("G minor");
  CHECK(g.tonic == 67);
  CHECK(g.mode == Mode::natural_minor);

  Scale c3 = parse_scale("C3 chromatic");
  CHECK(c3.tonic == 48);
  CHECK_THROWS_AS(parse_scale("C"), Error);
  CHECK_THROWS_AS(parse_scale("C dorian"), Error);
}

TEST_CASE("abc output carries headers and plain in-key notes") {
  Scale c_major{60, Mode::major};
  std::vector<ScoreNote> notes = {{{60}, 2}, {{62}, 2}, {{64}, 2}};
  CHECK(abc_score("demo", c_major, notes) ==
        "X:1\nT:demo\nM:none\nL:1/8\nK:C\nC2 D2 E2\n");
}

TEST_CASE("abc accidentals respect the key signature") {
  // F#4 is in the D-major signature: written as a bare F.
  Scale d_major{62, Mode::major};
  CHECK(abc_score("t", d_major, {{{66}, 1}}).find("\nF\n") != std::string::npos);
  // In C major the same pitch needs an explicit sharp.
  Scale c_major{60, Mode::major};
  CHECK(abc_score("t", c_major, {{{66}, 1}}).find("\n^F\n") !=
        std::string::npos);
  // An explicit natural cancels the signature and persists, so the later
  // F# and F both need their signs again.
  std::string line = abc_score("t", d_major, {{{65}, 1}, {{66}, 1}, {{65}, 1}});
  CHECK(line.find("=F ^F =F") != std::string::npos);
  // G minor carries flats: Bb4 is a bare B, B natural needs the sign.
  Scale g_minor{67, Mode::natural_minor};
  CHECK(abc_score("t", g_minor, {{{70}, 1}}).find("\nB\n") !=
        std::string::npos);
  CHECK(abc_score("t", g_minor, {{{71}, 1}}).find("\n=B\n") !=
        std::string::npos);
  CHECK(abc_score("t", g_minor, {{{60}, 1}}).find("K:Gm") != std::string::npos);
}

TEST_CASE("abc octave marks, chords, rests, and lengths") {
  Scale c_major{60, Mode::major};
  std::vector<ScoreNote> notes = {
      {{72}, 1},          // c
      {{48}, 4},          // C,4
      {{}, 2},            // z2
      {{60, 64, 67}, 2},  // [CEG]2
  };
  CHECK(abc_score("t", c_major, notes) ==
        "X:1\nT:t\nM:none\nL:1/8\nK:C\nc C,4 z2 [CEG]2\n");
}
