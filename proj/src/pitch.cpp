#include "qmuse/pitch.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <sstream>

#include "qmuse/error.hpp"

namespace qmuse {

namespace {

constexpr std::array<int, 7> kLetterPc = {9, 11, 0, 2, 4, 5, 7};  // A..G

const char* kSharpNames[12] = {"C",  "C#", "D",  "D#", "E",  "F",
                               "F#", "G",  "G#", "A",  "A#", "B"};
const char* kFlatNames[12] = {"C",  "Db", "D",  "Eb", "E",  "F",
                              "Gb", "G",  "Ab", "A",  "Bb", "B"};

constexpr std::array<int, 8> kMajorSteps = {0, 2, 4, 5, 7, 9, 11, 12};
constexpr std::array<int, 8> kMinorSteps = {0, 2, 3, 5, 7, 8, 10, 12};

// Circle-of-fifths index per tonic pitch class, major keys. Positive means
// that many sharps, negative flats.
constexpr std::array<int, 12> kMajorFifths = {0, -5, 2,  -3, 4, -1,
                                              6, 1,  -4, 3,  -2, 5};

int fifths_of(int tonic_pc, Mode mode) {
  if (mode == Mode::chromatic) return 0;
  int pc = (mode == Mode::natural_minor) ? (tonic_pc + 3) % 12 : tonic_pc;
  return kMajorFifths[pc];
}

// Order in which key signatures alter letters.
constexpr const char* kSharpOrder = "FCGDAEB";
constexpr const char* kFlatOrder = "BEADGCF";

}  // namespace

int parse_pitch(const std::string& name) {
  if (name.empty()) fail(ErrorKind::invalid_input, "empty pitch name");
  std::size_t pos = 0;
  char letter = static_cast<char>(std::toupper(name[pos++]));
  if (letter < 'A' || letter > 'G') {
    fail(ErrorKind::invalid_input, "bad pitch name '" + name + "'");
  }
  int pc = kLetterPc[letter - 'A'];
  while (pos < name.size() && (name[pos] == '#' || name[pos] == 'b')) {
    pc += name[pos] == '#' ? 1 : -1;
    ++pos;
  }
  if (pos >= name.size()) {
    fail(ErrorKind::invalid_input, "pitch '" + name + "' is missing an octave");
  }
  bool negative = name[pos] == '-';
  if (negative) ++pos;
  if (pos >= name.size() || !std::isdigit(static_cast<unsigned char>(name[pos]))) {
    fail(ErrorKind::invalid_input, "bad octave in pitch '" + name + "'");
  }
  int octave = 0;
  for (; pos < name.size(); ++pos) {
    if (!std::isdigit(static_cast<unsigned char>(name[pos]))) {
      fail(ErrorKind::invalid_input, "bad pitch name '" + name + "'");
    }
    octave = octave * 10 + (name[pos] - '0');
  }
  if (negative) octave = -octave;
  int midi = (octave + 1) * 12 + pc;
  if (midi < 0 || midi > 127) {
    fail(ErrorKind::invalid_input, "pitch '" + name + "' outside MIDI range");
  }
  return midi;
}

std::string pitch_name(int midi, bool prefer_flats) {
  if (midi < 0 || midi > 127) {
    fail(ErrorKind::invalid_input,
         "MIDI value " + std::to_string(midi) + " outside range");
  }
  int pc = midi % 12;
  int octave = midi / 12 - 1;
  const char* base = prefer_flats ? kFlatNames[pc] : kSharpNames[pc];
  return std::string(base) + std::to_string(octave);
}

int Scale::degree_to_midi(int degree) const {
  if (mode == Mode::chromatic) {
    fail(ErrorKind::invalid_input, "a chromatic scale has no degrees");
  }
  if (degree < 1 || degree > 8) {
    fail(ErrorKind::invalid_input,
         "scale degree " + std::to_string(degree) + " outside 1..8");
  }
  const auto& steps = mode == Mode::major ? kMajorSteps : kMinorSteps;
  return tonic + steps[degree - 1];
}

int Scale::offset_to_midi(int offset) const { return tonic + offset; }

Scale parse_scale(const std::string& text) {
  std::istringstream in(text);
  std::string tonic_token, mode_token;
  if (!(in >> tonic_token >> mode_token)) {
    fail(ErrorKind::invalid_input,
         "scale '" + text + "' should look like 'C major'");
  }
  if (tonic_token.find_first_of("0123456789") == std::string::npos) {
    tonic_token += "4";
  }
  Scale scale;
  scale.tonic = parse_pitch(tonic_token);
  std::transform(mode_token.begin(), mode_token.end(), mode_token.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (mode_token == "major") {
    scale.mode = Mode::major;
  } else if (mode_token == "minor") {
    scale.mode = Mode::natural_minor;
  } else if (mode_token == "chromatic") {
    scale.mode = Mode::chromatic;
  } else {
    fail(ErrorKind::invalid_input, "unknown mode '" + mode_token + "'");
  }
  return scale;
}

std::string scale_name(const Scale& scale) {
  std::string tonic = pitch_name(scale.tonic, scale.prefer_flats());
  while (!tonic.empty() && (std::isdigit(static_cast<unsigned char>(tonic.back())) ||
                            tonic.back() == '-')) {
    tonic.pop_back();
  }
  switch (scale.mode) {
    case Mode::major:
      return tonic + " major";
    case Mode::natural_minor:
      return tonic + " minor";
    case Mode::chromatic:
      return tonic + " chromatic";
  }
  return tonic;
}

namespace {

struct AbcSpelling {
  char letter;     // A..G
  int accidental;  // -1 flat, 0 natural, +1 sharp
  int octave;      // scientific octave of the letter
};

AbcSpelling spell(int midi, bool flats) {
  int pc = midi % 12;
  int octave = midi / 12 - 1;
  for (int l = 0; l < 7; ++l) {
    if (kLetterPc[l] == pc) return {static_cast<char>('A' + l), 0, octave};
  }
  if (flats) {
    int letter_pc = (pc + 1) % 12;
    for (int l = 0; l < 7; ++l) {
      if (kLetterPc[l] == letter_pc) {
        // Cb belongs to the octave above its sounding pitch.
        return {static_cast<char>('A' + l), -1, letter_pc == 0 ? octave + 1 : octave};
      }
    }
  }
  int letter_pc = (pc + 11) % 12;
  for (int l = 0; l < 7; ++l) {
    if (kLetterPc[l] == letter_pc) {
      return {static_cast<char>('A' + l), 1, letter_pc == 11 ? octave - 1 : octave};
    }
  }
  fail(ErrorKind::invalid_input, "unspellable pitch");
}

std::string abc_letter(char letter, int octave) {
  std::string out;
  if (octave >= 5) {
    out += static_cast<char>(std::tolower(letter));
    for (int i = 5; i < octave; ++i) out += '\'';
  } else {
    out += letter;
    for (int i = octave; i < 4; ++i) out += ',';
  }
  return out;
}

std::string length_suffix(int eighths) {
  return eighths == 1 ? std::string() : std::to_string(eighths);
}

}  // namespace

std::string abc_score(const std::string& title, const Scale& scale,
                      const std::vector<ScoreNote>& notes) {
  int fifths = fifths_of(scale.tonic % 12, scale.mode);
  bool flats = fifths < 0;

  std::string key = pitch_name(scale.tonic, flats);
  while (!key.empty() && std::isdigit(static_cast<unsigned char>(key.back()))) {
    key.pop_back();
  }
  if (scale.mode == Mode::natural_minor) key += "m";
  if (scale.mode == Mode::chromatic) key = "C";

  // Accidental state per letter+octave; starts at the key signature and,
  // with M:none, persists for the whole line.
  std::map<char, int> signature;
  for (int i = 0; i < std::abs(fifths); ++i) {
    signature[(fifths > 0 ? kSharpOrder : kFlatOrder)[i]] = fifths > 0 ? 1 : -1;
  }
  std::map<std::pair<char, int>, int> state;
  auto state_of = [&](char letter, int octave) {
    auto it = state.find({letter, octave});
    if (it != state.end()) return it->second;
    auto sig = signature.find(letter);
    return sig == signature.end() ? 0 : sig->second;
  };

  std::string line;
  for (const auto& note : notes) {
    if (!line.empty()) line += ' ';
    if (note.midi.empty()) {
      line += "z" + length_suffix(note.eighths);
      continue;
    }
    std::string body;
    for (int midi : note.midi) {
      AbcSpelling sp = spell(midi, flats);
      if (state_of(sp.letter, sp.octave) != sp.accidental) {
        body += sp.accidental == 0 ? "=" : (sp.accidental > 0 ? "^" : "_");
        state[{sp.letter, sp.octave}] = sp.accidental;
      }
      body += abc_letter(sp.letter, sp.octave);
    }
    if (note.midi.size() > 1) body = "[" + body + "]";
    line += body + length_suffix(note.eighths);
  }

  std::string out;
  out += "X:1\n";
  out += "T:" + title + "\n";
  out += "M:none\n";
  out += "L:1/8\n";
  out += "K:" + key + "\n";
  out += line + "\n";
  return out;
}

}  // namespace qmuse
