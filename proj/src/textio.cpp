#include "qmuse/textio.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace qmuse {

namespace {

struct Lines {
  std::vector<std::vector<std::string>> tokens;  // per meaningful line
  std::size_t pos = 0;

  bool done() const { return pos >= tokens.size(); }
  const std::vector<std::string>& peek() const { return tokens[pos]; }
  const std::vector<std::string>& next() { return tokens[pos++]; }
};

Lines tokenize(std::istream& in) {
  Lines out;
  std::string line;
  while (std::getline(in, line)) {
    // '#' opens a comment at the start of a line or after whitespace;
    // mid-token it is literal (pitch names like F#4).
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line.erase(i);
        break;
      }
    }
    std::istringstream split(line);
    std::vector<std::string> tokens;
    std::string token;
    while (split >> token) tokens.push_back(token);
    if (!tokens.empty()) out.tokens.push_back(std::move(tokens));
  }
  return out;
}

[[noreturn]] void bad_line(const std::string& what,
                           const std::vector<std::string>& tokens) {
  std::string line;
  for (const auto& t : tokens) line += (line.empty() ? "" : " ") + t;
  fail(ErrorKind::invalid_input, what + " near '" + line + "'");
}

void expect_format(Lines& lines, const std::string& kind) {
  if (lines.done() || lines.peek().size() != 2 ||
      lines.peek()[0] != "format" || lines.peek()[1] != kind) {
    fail(ErrorKind::invalid_input, "expected a 'format " + kind + "' header");
  }
  lines.next();
}

VarId parse_var_id(const std::string& token) {
  return static_cast<VarId>(parse_int64(token));
}

Relation parse_relation(const std::string& token) {
  if (token == "<=") return Relation::less_equal;
  if (token == "=") return Relation::equal;
  if (token == ">=") return Relation::greater_equal;
  fail(ErrorKind::invalid_input, "unknown relation '" + token + "'");
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) fail(ErrorKind::invalid_input, "unprintable number");
  return std::string(buf, end);
}

double parse_double(const std::string& token) {
  double value = 0.0;
  auto [end, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || end != token.data() + token.size()) {
    fail(ErrorKind::invalid_input, "bad number '" + token + "'");
  }
  return value;
}

std::int64_t parse_int64(const std::string& token) {
  std::int64_t value = 0;
  auto [end, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || end != token.data() + token.size()) {
    fail(ErrorKind::invalid_input, "bad integer '" + token + "'");
  }
  return value;
}

std::string detect_format(const std::string& text) {
  std::istringstream in(text);
  Lines lines = tokenize(in);
  if (lines.done() || lines.peek().size() != 2 || lines.peek()[0] != "format") {
    fail(ErrorKind::invalid_input, "missing 'format <kind>' header");
  }
  return lines.peek()[1];
}

void write_qubo(std::ostream& out, const QuboModel& model) {
  out << "format qubo\n";
  out << "num_vars " << model.num_vars() << "\n";
  out << "offset " << format_double(model.offset()) << "\n";
  out << "linear\n";
  for (const auto& [i, c] : model.linear()) {
    out << i << " " << format_double(c) << "\n";
  }
  out << "quadratic\n";
  for (const auto& [key, c] : model.quadratic()) {
    out << key.first << " " << key.second << " " << format_double(c) << "\n";
  }
  out << "labels\n";
  for (const auto& [i, label] : model.labels()) {
    out << i << " " << label << "\n";
  }
}

QuboModel read_qubo(std::istream& in) {
  Lines lines = tokenize(in);
  expect_format(lines, "qubo");
  std::size_t num_vars = 0;
  double offset = 0.0;
  enum class Section { none, linear, quadratic, labels };
  Section section = Section::none;

  std::vector<std::tuple<VarId, double>> linear;
  std::vector<std::tuple<VarId, VarId, double>> quadratic;
  std::vector<std::pair<VarId, std::string>> labels;
  while (!lines.done()) {
    const auto& t = lines.next();
    if (t[0] == "num_vars" && t.size() == 2) {
      num_vars = static_cast<std::size_t>(parse_int64(t[1]));
    } else if (t[0] == "offset" && t.size() == 2) {
      offset = parse_double(t[1]);
    } else if (t[0] == "linear" && t.size() == 1) {
      section = Section::linear;
    } else if (t[0] == "quadratic" && t.size() == 1) {
      section = Section::quadratic;
    } else if (t[0] == "labels" && t.size() == 1) {
      section = Section::labels;
    } else if (section == Section::linear && t.size() == 2) {
      linear.emplace_back(parse_var_id(t[0]), parse_double(t[1]));
    } else if (section == Section::quadratic && t.size() == 3) {
      quadratic.emplace_back(parse_var_id(t[0]), parse_var_id(t[1]),
                             parse_double(t[2]));
    } else if (section == Section::labels && t.size() == 2) {
      labels.emplace_back(parse_var_id(t[0]), t[1]);
    } else {
      bad_line("unexpected line in qubo file", t);
    }
  }
  QuboBuilder builder(num_vars);
  builder.add_offset(offset);
  for (const auto& [i, c] : linear) builder.add_linear(i, c);
  for (const auto& [i, j, c] : quadratic) builder.add_quadratic(i, j, c);
  for (const auto& [i, label] : labels) builder.set_label(i, label);
  return builder.build();
}

void write_ising(std::ostream& out, const IsingModel& model) {
  out << "format ising\n";
  out << "num_spins " << model.num_spins() << "\n";
  out << "offset " << format_double(model.offset()) << "\n";
  out << "h\n";
  for (const auto& [i, c] : model.h()) {
    out << i << " " << format_double(c) << "\n";
  }
  out << "j\n";
  for (const auto& [key, c] : model.j()) {
    out << key.first << " " << key.second << " " << format_double(c) << "\n";
  }
}

IsingModel read_ising(std::istream& in) {
  Lines lines = tokenize(in);
  expect_format(lines, "ising");
  std::size_t num_spins = 0;
  double offset = 0.0;
  enum class Section { none, h, j };
  Section section = Section::none;
  std::vector<std::tuple<VarId, double>> biases;
  std::vector<std::tuple<VarId, VarId, double>> couplings;
  while (!lines.done()) {
    const auto& t = lines.next();
    if (t[0] == "num_spins" && t.size() == 2) {
      num_spins = static_cast<std::size_t>(parse_int64(t[1]));
    } else if (t[0] == "offset" && t.size() == 2) {
      offset = parse_double(t[1]);
    } else if (t[0] == "h" && t.size() == 1) {
      section = Section::h;
    } else if (t[0] == "j" && t.size() == 1) {
      section = Section::j;
    } else if (section == Section::h && t.size() == 2) {
      biases.emplace_back(parse_var_id(t[0]), parse_double(t[1]));
    } else if (section == Section::j && t.size() == 3) {
      couplings.emplace_back(parse_var_id(t[0]), parse_var_id(t[1]),
                             parse_double(t[2]));
    } else {
      bad_line("unexpected line in ising file", t);
    }
  }
  IsingBuilder builder(num_spins);
  builder.add_offset(offset);
  for (const auto& [i, c] : biases) builder.add_bias(i, c);
  for (const auto& [i, j, c] : couplings) builder.add_coupling(i, j, c);
  return builder.build();
}

void write_ilp(std::ostream& out, const IlpModel& model) {
  out << "format ilp\n";
  for (const auto& v : model.variables) {
    out << "var " << v.name << " " << v.lower << " " << v.upper << "\n";
  }
  out << "objective\n";
  for (const auto& [names, coeff] : model.objective.monomials()) {
    if (names.empty()) {
      out << "const " << format_double(coeff) << "\n";
    } else if (names.size() == 1) {
      out << "linear " << names[0] << " " << format_double(coeff) << "\n";
    } else if (names.size() == 2) {
      out << "quad " << names[0] << " " << names[1] << " "
          << format_double(coeff) << "\n";
    } else {
      out << "poly " << names.size();
      for (const auto& n : names) out << " " << n;
      out << " " << format_double(coeff) << "\n";
    }
  }
  for (const auto& c : model.constraints) {
    out << "constraint" << (c.name.empty() ? "" : " " + c.name) << "\n";
    for (const auto& [name, coeff] : c.lhs.terms()) {
      out << "linear " << name << " " << format_double(coeff) << "\n";
    }
    if (c.lhs.constant() != 0.0) {
      out << "const " << format_double(c.lhs.constant()) << "\n";
    }
    out << "relation " << relation_symbol(c.relation) << "\n";
    out << "rhs " << format_double(c.rhs) << "\n";
    if (c.penalty) out << "penalty " << format_double(*c.penalty) << "\n";
    if (c.hardness == Hardness::hard) out << "hard\n";
  }
}

IlpModel read_ilp(std::istream& in) {
  Lines lines = tokenize(in);
  expect_format(lines, "ilp");
  IlpModel model;
  enum class Section { none, objective, constraint };
  Section section = Section::none;
  Constraint* current = nullptr;

  while (!lines.done()) {
    const auto& t = lines.next();
    if (t[0] == "var" && t.size() == 4) {
      model.add_variable(t[1], parse_int64(t[2]), parse_int64(t[3]));
    } else if (t[0] == "objective" && t.size() == 1) {
      section = Section::objective;
      current = nullptr;
    } else if (t[0] == "constraint" && t.size() <= 2) {
      section = Section::constraint;
      model.constraints.emplace_back();
      current = &model.constraints.back();
      if (t.size() == 2) current->name = t[1];
    } else if (section == Section::objective) {
      if (t[0] == "linear" && t.size() == 3) {
        model.objective.add_linear(t[1], parse_double(t[2]));
      } else if (t[0] == "quad" && t.size() == 4) {
        model.objective.add_quadratic(t[1], t[2], parse_double(t[3]));
      } else if (t[0] == "poly" && t.size() >= 2) {
        auto k = static_cast<std::size_t>(parse_int64(t[1]));
        if (t.size() != k + 3) bad_line("bad poly term", t);
        std::vector<std::string> names(t.begin() + 2, t.begin() + 2 + k);
        model.objective.add_term(std::move(names), parse_double(t.back()));
      } else if (t[0] == "const" && t.size() == 2) {
        model.objective.add_constant(parse_double(t[1]));
      } else {
        bad_line("unexpected objective line", t);
      }
    } else if (section == Section::constraint && current != nullptr) {
      if (t[0] == "linear" && t.size() == 3) {
        current->lhs.add(t[1], parse_double(t[2]));
      } else if (t[0] == "const" && t.size() == 2) {
        current->lhs.add_constant(parse_double(t[1]));
      } else if (t[0] == "relation" && t.size() == 2) {
        current->relation = parse_relation(t[1]);
      } else if (t[0] == "rhs" && t.size() == 2) {
        current->rhs = parse_double(t[1]);
      } else if (t[0] == "penalty" && t.size() == 2) {
        current->penalty = parse_double(t[1]);
      } else if (t[0] == "hard" && t.size() == 1) {
        current->hardness = Hardness::hard;
      } else {
        bad_line("unexpected constraint line", t);
      }
    } else {
      bad_line("unexpected line in ilp file", t);
    }
  }
  return model;
}

namespace {

void write_encoding_line(std::ostream& out, const char* keyword,
                         const BinaryEncoding& enc) {
  out << keyword << " " << enc.source << " " << enc.offset;
  for (const auto& [id, coeff] : enc.bits) out << " " << id << ":" << coeff;
  out << "\n";
}

BinaryEncoding parse_encoding_tokens(const std::vector<std::string>& t,
                                     std::size_t first_bit) {
  BinaryEncoding enc;
  enc.source = t[1];
  enc.offset = parse_int64(t[2]);
  for (std::size_t i = first_bit; i < t.size(); ++i) {
    auto colon = t[i].find(':');
    if (colon == std::string::npos) bad_line("bad bit token", t);
    enc.bits.emplace_back(parse_var_id(t[i].substr(0, colon)),
                          parse_int64(t[i].substr(colon + 1)));
  }
  return enc;
}

}  // namespace

void write_varmap(std::ostream& out, const VarMap& map) {
  out << "format varmap\n";
  out << "num_vars " << map.num_vars << "\n";
  for (const auto& enc : map.encodings) {
    write_encoding_line(out, "encoding", enc);
  }
  for (const auto& slack : map.slacks) {
    out << "slack " << slack.name << " " << slack.constraint_index << " "
        << slack.encoding.offset;
    for (const auto& [id, coeff] : slack.encoding.bits) {
      out << " " << id << ":" << coeff;
    }
    out << "\n";
  }
  for (const auto& a : map.aux) {
    out << "aux " << a.id << " " << a.parent_a << " " << a.parent_b << "\n";
  }
}

VarMap read_varmap(std::istream& in) {
  Lines lines = tokenize(in);
  expect_format(lines, "varmap");
  VarMap map;
  while (!lines.done()) {
    const auto& t = lines.next();
    if (t[0] == "num_vars" && t.size() == 2) {
      map.num_vars = static_cast<std::size_t>(parse_int64(t[1]));
    } else if (t[0] == "encoding" && t.size() >= 3) {
      map.index_of[t[1]] = map.encodings.size();
      map.encodings.push_back(parse_encoding_tokens(t, 3));
    } else if (t[0] == "slack" && t.size() >= 4) {
      SlackVar slack;
      slack.name = t[1];
      slack.constraint_index = static_cast<std::size_t>(parse_int64(t[2]));
      slack.encoding.source = t[1];
      slack.encoding.offset = parse_int64(t[3]);
      for (std::size_t i = 4; i < t.size(); ++i) {
        auto colon = t[i].find(':');
        if (colon == std::string::npos) bad_line("bad bit token", t);
        slack.encoding.bits.emplace_back(
            parse_var_id(t[i].substr(0, colon)),
            parse_int64(t[i].substr(colon + 1)));
      }
      map.slacks.push_back(std::move(slack));
    } else if (t[0] == "aux" && t.size() == 4) {
      map.aux.push_back(AuxVar{parse_var_id(t[1]), parse_var_id(t[2]),
                               parse_var_id(t[3])});
    } else {
      bad_line("unexpected line in varmap file", t);
    }
  }
  return map;
}

void write_samples(std::ostream& out, const SampleSet& set) {
  out << "format samples\n";
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0')
      << set.model_fingerprint;
  out << "fingerprint " << hex.str() << "\n";
  out << "samples\n";
  for (const auto& sample : set.samples) {
    for (std::uint8_t bit : sample.assignment) out << (bit ? '1' : '0');
    if (sample.assignment.empty()) out << "-";
    out << " " << format_double(sample.energy) << " "
        << sample.num_occurrences << "\n";
  }
}

SampleSet read_samples(std::istream& in) {
  Lines lines = tokenize(in);
  expect_format(lines, "samples");
  SampleSet set;
  bool in_samples = false;
  while (!lines.done()) {
    const auto& t = lines.next();
    if (t[0] == "fingerprint" && t.size() == 2) {
      set.model_fingerprint = std::stoull(t[1], nullptr, 16);
    } else if (t[0] == "samples" && t.size() == 1) {
      in_samples = true;
    } else if (in_samples && t.size() == 3) {
      Sample sample;
      if (t[0] != "-") {
        for (char c : t[0]) {
          if (c != '0' && c != '1') bad_line("bad assignment bits", t);
          sample.assignment.push_back(c == '1');
        }
      }
      sample.energy = parse_double(t[1]);
      sample.num_occurrences = static_cast<std::uint64_t>(parse_int64(t[2]));
      set.samples.push_back(std::move(sample));
    } else {
      bad_line("unexpected line in samples file", t);
    }
  }
  return set;
}

namespace {

PitchDomain parse_domain(const std::vector<std::string>& t) {
  if (t.size() < 3) bad_line("domain needs a kind and elements", t);
  std::vector<std::string> elements(t.begin() + 2, t.end());
  if (t[1] == "named") return PitchDomain::named(std::move(elements));
  if (t[1] == "semitones") {
    std::vector<int> offsets;
    for (const auto& e : elements) {
      offsets.push_back(static_cast<int>(parse_int64(e)));
    }
    return PitchDomain::semitones(offsets);
  }
  if (t[1] == "degrees") {
    std::vector<int> degrees;
    for (const auto& e : elements) {
      degrees.push_back(static_cast<int>(parse_int64(e)));
    }
    return PitchDomain::degrees(degrees);
  }
  bad_line("domain kind must be named, semitones, or degrees", t);
}

Scale parse_scale_tokens(const std::vector<std::string>& t) {
  std::string text;
  for (std::size_t i = 1; i < t.size(); ++i) {
    text += (i > 1 ? " " : "") + t[i];
  }
  return parse_scale(text);
}

}  // namespace

MelodySpec read_melody_spec(std::istream& in) {
  Lines lines = tokenize(in);
  expect_format(lines, "melody");
  MelodySpec spec;
  bool has_domain = false;
  while (!lines.done()) {
    const auto& t = lines.next();
    if (t[0] == "n" && t.size() == 2) {
      spec.n = static_cast<int>(parse_int64(t[1]));
    } else if (t[0] == "domain") {
      spec.domain = parse_domain(t);
      has_domain = true;
    } else if (t[0] == "scale" && t.size() >= 2) {
      spec.scale = parse_scale_tokens(t);
    } else if (t[0] == "forbid-succession" && t.size() == 3) {
      spec.forbidden_successions.insert({t[1], t[2]});
    } else if (t[0] == "forbid-interval" && t.size() == 2) {
      spec.forbidden_intervals.insert(static_cast<int>(parse_int64(t[1])));
    } else if (t[0] == "no-triple-repeat" && t.size() == 1) {
      spec.no_triple_repeat = true;
    } else if (t[0] == "anchor-first-last" && t.size() == 1) {
      spec.anchor_first_last = true;
    } else if (t[0] == "tendency-rules" && t.size() == 1) {
      spec.tendency_rules = true;
    } else if (t[0] == "weight" && t.size() == 4) {
      spec.weights[{t[1], t[2]}] = parse_double(t[3]);
    } else if (t[0] == "rest" && t.size() == 3) {
      spec.rest = {t[1], static_cast<int>(parse_int64(t[2]))};
    } else if (t[0] == "penalty" && t.size() == 3) {
      double value = parse_double(t[2]);
      if (t[1] == "one-hot") {
        spec.penalties.one_hot = value;
      } else if (t[1] == "succession") {
        spec.penalties.succession = value;
      } else if (t[1] == "interval") {
        spec.penalties.interval = value;
      } else if (t[1] == "triple") {
        spec.penalties.triple = value;
      } else if (t[1] == "anchor") {
        spec.penalties.anchor = value;
      } else if (t[1] == "tendency") {
        spec.penalties.tendency = value;
      } else if (t[1] == "rest") {
        spec.penalties.rest = value;
      } else {
        bad_line("unknown melody penalty family", t);
      }
    } else {
      bad_line("unexpected line in melody spec", t);
    }
  }
  if (!has_domain) fail(ErrorKind::invalid_input, "melody spec needs a domain");
  return spec;
}

RhythmSpec read_rhythm_spec(std::istream& in) {
  Lines lines = tokenize(in);
  expect_format(lines, "rhythm");
  RhythmSpec spec;
  while (!lines.done()) {
    const auto& t = lines.next();
    if (t[0] == "n" && t.size() == 2) {
      spec.n = static_cast<int>(parse_int64(t[1]));
    } else if (t[0] == "durations" && t.size() >= 2) {
      auto standard = standard_durations();
      for (std::size_t i = 1; i < t.size(); ++i) {
        auto colon = t[i].find(':');
        if (colon != std::string::npos) {
          spec.durations.emplace_back(
              t[i].substr(0, colon),
              static_cast<int>(parse_int64(t[i].substr(colon + 1))));
          continue;
        }
        bool known = false;
        for (const auto& [name, len] : standard) {
          if (name == t[i]) {
            spec.durations.emplace_back(name, len);
            known = true;
            break;
          }
        }
        if (!known) bad_line("unknown duration '" + t[i] + "'", t);
      }
    } else if (t[0] == "min-count" && t.size() == 2) {
      spec.min_count_each = static_cast<int>(parse_int64(t[1]));
    } else if (t[0] == "total-length" && t.size() == 2) {
      spec.total_length = static_cast<int>(parse_int64(t[1]));
    } else if (t[0] == "weight" && t.size() == 4) {
      spec.weights[{t[1], t[2]}] = parse_double(t[3]);
    } else if (t[0] == "penalty" && t.size() == 3) {
      double value = parse_double(t[2]);
      if (t[1] == "one-hot") {
        spec.penalties.one_hot = value;
      } else if (t[1] == "min-count") {
        spec.penalties.min_count = value;
      } else if (t[1] == "length") {
        spec.penalties.length = value;
      } else {
        bad_line("unknown rhythm penalty family", t);
      }
    } else {
      bad_line("unexpected line in rhythm spec", t);
    }
  }
  return spec;
}

HarmonySpec read_harmony_spec(std::istream& in) {
  Lines lines = tokenize(in);
  expect_format(lines, "harmony");
  HarmonySpec spec;
  while (!lines.done()) {
    const auto& t = lines.next();
    if (t[0] == "melody" && t.size() >= 2) {
      for (std::size_t i = 1; i < t.size(); ++i) {
        spec.melody.push_back(static_cast<int>(parse_int64(t[i])));
      }
    } else if (t[0] == "scale" && t.size() >= 2) {
      spec.scale = parse_scale_tokens(t);
    } else if (t[0] == "anchor-first-last" && t.size() == 1) {
      spec.anchor_first_last_triad = true;
    } else if (t[0] == "no-anchor" && t.size() == 1) {
      spec.anchor_first_last_triad = false;
    } else if (t[0] == "penalty" && t.size() == 3) {
      double value = parse_double(t[2]);
      if (t[1] == "chord-size") {
        spec.penalties.chord_size = value;
      } else if (t[1] == "anchor") {
        spec.penalties.anchor = value;
      } else if (t[1] == "membership") {
        spec.penalties.membership = value;
      } else if (t[1] == "forbidden") {
        spec.penalties.forbidden = value;
      } else {
        bad_line("unknown harmony penalty family", t);
      }
    } else {
      bad_line("unexpected line in harmony spec", t);
    }
  }
  return spec;
}

ChordProgressionSpec read_chords_spec(std::istream& in) {
  Lines lines = tokenize(in);
  expect_format(lines, "chords");
  ChordProgressionSpec spec;
  while (!lines.done()) {
    const auto& t = lines.next();
    if (t[0] == "n" && t.size() == 2) {
      spec.n = static_cast<int>(parse_int64(t[1]));
    } else if (t[0] == "base" && t.size() == 2) {
      spec.potential_base = parse_double(t[1]);
    } else if (t[0] == "conflict" && t.size() == 2) {
      spec.potential_conflict = parse_double(t[1]);
    } else if (t[0] == "cadence" && t.size() == 2) {
      spec.cadence_reward = parse_double(t[1]);
    } else if (t[0] == "chords" && t.size() >= 2) {
      spec.chords.assign(t.begin() + 1, t.end());
    } else if (t[0] == "scale" && t.size() >= 2) {
      spec.scale = parse_scale_tokens(t);
    } else {
      bad_line("unexpected line in chords spec", t);
    }
  }
  return spec;
}

QHarmonySpec read_qharmony_spec(std::istream& in) {
  Lines lines = tokenize(in);
  expect_format(lines, "qharmony");
  QHarmonySpec spec;
  while (!lines.done()) {
    const auto& t = lines.next();
    if (t[0] == "notes" && t.size() >= 2) {
      spec.notes.assign(t.begin() + 1, t.end());
    } else if (t[0] == "input" && t.size() >= 2) {
      spec.input_notes.assign(t.begin() + 1, t.end());
    } else {
      bad_line("unexpected line in qharmony spec", t);
    }
  }
  return spec;
}

std::vector<std::pair<std::string, std::string>> read_piece(std::istream& in) {
  Lines lines = tokenize(in);
  expect_format(lines, "piece");
  std::vector<std::pair<std::string, std::string>> piece;
  while (!lines.done()) {
    const auto& t = lines.next();
    if (t.size() != 2) bad_line("piece lines are '<pitch> <duration>'", t);
    piece.emplace_back(t[0], t[1]);
  }
  return piece;
}

void write_weights(std::ostream& out, const PieceWeights& weights) {
  out << "format weights\n";
  for (const auto& [key, count] : weights.pitch) {
    out << "pitch " << key.first << " " << key.second << " " << count << "\n";
  }
  for (const auto& [key, count] : weights.duration) {
    out << "duration " << key.first << " " << key.second << " " << count
        << "\n";
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::invalid_input, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::invalid_input, "cannot write '" + path + "'");
  out << content;
}

}  // namespace qmuse
