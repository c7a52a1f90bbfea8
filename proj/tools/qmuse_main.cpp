// Command-line front end: compiles model files, runs the solvers, and
// renders decoded music, with byte-reproducible output for fixed seeds.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qmuse/compiler.hpp"
#include "qmuse/error.hpp"
#include "qmuse/mrf.hpp"
#include "qmuse/music.hpp"
#include "qmuse/pitch.hpp"
#include "qmuse/qubo.hpp"
#include "qmuse/solvers.hpp"
#include "qmuse/textio.hpp"

namespace {

using namespace qmuse;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitSize = 3;

struct SolverFlags {
  std::string solver = "brute";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::uint64_t reads = 100;
  std::uint64_t sweeps = 1000;
  double beta_start = 0.1;
  double beta_end = 10.0;
  std::size_t limit = 24;
};

struct OutputFlags {
  std::string format;  // per-command default when empty
  std::string output;  // stdout when empty
};

void add_solver_flags(CLI::App* cmd, SolverFlags& flags,
                      bool allow_restricted) {
  std::vector<std::string> solvers = {"brute", "sa"};
  if (allow_restricted) solvers.push_back("restricted");
  cmd->add_option("--solver", flags.solver, "brute, sa" +
                      std::string(allow_restricted ? ", or restricted" : ""))
      ->check(CLI::IsMember(solvers));
  cmd->add_option("--seed", flags.seed, "RNG seed (required for sa)")
      ->each([&flags](const std::string&) { flags.seed_set = true; });
  cmd->add_option("--reads", flags.reads, "independent annealing restarts");
  cmd->add_option("--sweeps", flags.sweeps, "sweeps per read");
  cmd->add_option("--beta-start", flags.beta_start, "initial inverse temperature");
  cmd->add_option("--beta-end", flags.beta_end, "final inverse temperature");
  cmd->add_option("--limit", flags.limit, "brute-force variable limit");
}

void add_output_flags(CLI::App* cmd, OutputFlags& flags,
                      const std::string& formats) {
  cmd->add_option("--format", flags.format, "one of: " + formats);
  cmd->add_option("--output,-o", flags.output, "output path (default stdout)");
}

SaParams sa_params(const SolverFlags& flags) {
  if (!flags.seed_set) {
    fail(ErrorKind::invalid_input,
         "--seed is required for the sa solver (runs must be reproducible)");
  }
  SaParams params;
  params.num_reads = flags.reads;
  params.sweeps_per_read = flags.sweeps;
  params.beta_start = flags.beta_start;
  params.beta_end = flags.beta_end;
  params.seed = flags.seed;
  return params;
}

SampleSet run_solver(const QuboModel& model, const SolverFlags& flags,
                     const std::optional<Restriction>& restriction,
                     std::uint64_t seed_offset = 0) {
  if (flags.solver == "brute") return brute_force(model, flags.limit);
  if (flags.solver == "sa") {
    SaParams params = sa_params(flags);
    params.seed += seed_offset;
    return simulated_annealing(model, params);
  }
  if (!restriction) {
    fail(ErrorKind::invalid_input,
         "the restricted solver needs a structured music model");
  }
  return restricted_enumerate(model, restriction->groups,
                              restriction->choices);
}

// Output paths are validated before any solving starts.
void check_writable(const std::string& path) {
  if (path.empty()) return;
  std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty() && !std::filesystem::is_directory(parent)) {
    fail(ErrorKind::invalid_input,
         "output directory '" + parent.string() + "' does not exist");
  }
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
  } else {
    write_file(output, text);
  }
}

void warn_violations(const DecodedSequence& decoded,
                     const std::vector<std::string>& issues) {
  for (const auto& bad : decoded.invalid) {
    std::cerr << "warning: position " << (bad.position + 1) << " selects "
              << bad.selected << " elements\n";
  }
  for (const auto& issue : issues) {
    std::cerr << "warning: " << issue << "\n";
  }
}

std::string samples_text(const SampleSet& set) {
  std::ostringstream out;
  write_samples(out, set);
  return out.str();
}

std::string qubo_text(const QuboModel& model) {
  std::ostringstream out;
  write_qubo(out, model);
  return out.str();
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string line;
  for (const auto& token : tokens) {
    line += (line.empty() ? "" : " ") + token;
  }
  return line + "\n";
}

// ---------------------------------------------------------------------------
// compile / solve
// ---------------------------------------------------------------------------

int cmd_compile(const std::string& input, const std::string& output,
                const std::string& varmap_path) {
  check_writable(output);
  check_writable(varmap_path);
  std::istringstream in(read_file(input));
  if (detect_format(in.str()) != "ilp") {
    fail(ErrorKind::invalid_input, "'" + input + "' is not an ilp file");
  }
  IlpModel model = read_ilp(in);
  CompileResult result = compile(model);
  emit(qubo_text(result.model), output);
  if (!varmap_path.empty()) {
    std::ostringstream vm;
    write_varmap(vm, result.map);
    write_file(varmap_path, vm.str());
  }
  return kExitOk;
}

int cmd_solve(const std::string& input, const SolverFlags& flags,
              const OutputFlags& out) {
  check_writable(out.output);
  std::string text = read_file(input);
  std::string kind = detect_format(text);
  QuboModel model;
  if (kind == "qubo") {
    std::istringstream in(text);
    model = read_qubo(in);
  } else if (kind == "ising") {
    std::istringstream in(text);
    model = ising_to_qubo(read_ising(in));
  } else {
    fail(ErrorKind::invalid_input,
         "'" + input + "' is neither a qubo nor an ising file");
  }
  SampleSet samples = run_solver(model, flags, std::nullopt);
  emit(samples_text(samples), out.output);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// music commands
// ---------------------------------------------------------------------------

Scale scale_or_default(const std::optional<Scale>& scale) {
  return scale.value_or(Scale{60, Mode::major});
}

std::vector<ScoreNote> melody_score_notes(
    const std::vector<std::string>& tokens,
    const std::vector<int>& eighths, const MelodySpec& spec,
    const Scale& scale) {
  std::vector<ScoreNote> notes;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    ScoreNote note;
    note.eighths = eighths.empty() ? 2 : eighths[i];
    // Rests and undecodable positions (reported as warnings) render as z.
    bool silent = tokens[i] == "?" ||
                  (spec.rest && tokens[i] == spec.rest->first);
    if (!silent) {
      note.midi.push_back(token_to_midi(tokens[i], spec.domain.kind, scale));
    }
    notes.push_back(std::move(note));
  }
  return notes;
}

int cmd_melody(const std::string& input, const std::string& rhythm_path,
               const SolverFlags& flags, const OutputFlags& out) {
  check_writable(out.output);
  std::istringstream in(read_file(input));
  MelodySpec spec = read_melody_spec(in);
  BuiltModel built = build_melody(spec);
  std::string format = out.format.empty() ? "score-text" : out.format;

  if (format == "model-text") {
    emit(qubo_text(built.model), out.output);
    return kExitOk;
  }

  Restriction restriction = onehot_restriction(built.layout);
  SampleSet samples = run_solver(built.model, flags, restriction);
  if (format == "samples-table") {
    emit(samples_text(samples), out.output);
    return kExitOk;
  }

  DecodedSequence decoded = decode_sequence(samples.best().assignment,
                                            built.layout);
  std::vector<std::string> tokens;
  for (const auto& selected : decoded.positions) {
    tokens.push_back(selected.size() == 1 ? selected.front() : "?");
  }
  warn_violations(decoded,
                  decoded.clean() ? validate_melody(tokens, spec)
                                  : std::vector<std::string>{});

  // Optional rhythm: solved independently and zipped with the pitches.
  std::vector<int> eighths;
  std::vector<std::string> duration_tokens;
  if (!rhythm_path.empty()) {
    std::istringstream rin(read_file(rhythm_path));
    RhythmSpec rspec = read_rhythm_spec(rin);
    if (rspec.n != spec.n) {
      fail(ErrorKind::invalid_input,
           "rhythm spec length does not match the melody length");
    }
    BuiltModel rbuilt = build_rhythm(rspec);
    Restriction rrestriction = onehot_restriction(rbuilt.layout);
    SampleSet rsamples = run_solver(rbuilt.model, flags, rrestriction, 1);
    DecodedSequence rdecoded =
        decode_sequence(rsamples.best().assignment, rbuilt.layout);
    for (const auto& selected : rdecoded.positions) {
      duration_tokens.push_back(selected.size() == 1 ? selected.front() : "?");
    }
    warn_violations(rdecoded, rdecoded.clean()
                                  ? validate_rhythm(duration_tokens, rspec)
                                  : std::vector<std::string>{});
    for (const auto& token : duration_tokens) {
      eighths.push_back(token == "?" ? 2 : rspec.duration_of(token));
    }
  }

  if (format == "abc") {
    Scale scale = scale_or_default(spec.scale);
    std::string title = rhythm_path.empty() ? "melody" : "melody+rhythm";
    emit(abc_score(title, scale, melody_score_notes(tokens, eighths, spec, scale)),
         out.output);
    return kExitOk;
  }
  if (format != "score-text") {
    fail(ErrorKind::invalid_input, "unknown format '" + format + "'");
  }
  if (duration_tokens.empty()) {
    emit(join_tokens(tokens), out.output);
  } else {
    std::vector<std::string> joined;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      joined.push_back(tokens[i] + ":" + duration_tokens[i]);
    }
    emit(join_tokens(joined), out.output);
  }
  return kExitOk;
}

int cmd_rhythm(const std::string& input, const SolverFlags& flags,
               const OutputFlags& out) {
  check_writable(out.output);
  std::istringstream in(read_file(input));
  RhythmSpec spec = read_rhythm_spec(in);
  BuiltModel built = build_rhythm(spec);
  std::string format = out.format.empty() ? "score-text" : out.format;

  if (format == "model-text") {
    emit(qubo_text(built.model), out.output);
    return kExitOk;
  }
  Restriction restriction = onehot_restriction(built.layout);
  SampleSet samples = run_solver(built.model, flags, restriction);
  if (format == "samples-table") {
    emit(samples_text(samples), out.output);
    return kExitOk;
  }
  if (format != "score-text") {
    fail(ErrorKind::invalid_input,
         "rhythm output supports score-text, samples-table, or model-text");
  }
  DecodedSequence decoded =
      decode_sequence(samples.best().assignment, built.layout);
  std::vector<std::string> tokens;
  for (const auto& selected : decoded.positions) {
    tokens.push_back(selected.size() == 1 ? selected.front() : "?");
  }
  warn_violations(decoded, decoded.clean() ? validate_rhythm(tokens, spec)
                                           : std::vector<std::string>{});
  emit(join_tokens(tokens), out.output);
  return kExitOk;
}

int cmd_harmony(const std::string& input, const SolverFlags& flags,
                const OutputFlags& out) {
  check_writable(out.output);
  std::istringstream in(read_file(input));
  HarmonySpec spec = read_harmony_spec(in);
  BuiltModel built = build_harmony(spec);
  std::string format = out.format.empty() ? "score-text" : out.format;

  if (format == "model-text") {
    emit(qubo_text(built.model), out.output);
    return kExitOk;
  }
  Restriction restriction = onehot_restriction(built.layout);
  SampleSet samples = run_solver(built.model, flags, restriction);
  if (format == "samples-table") {
    emit(samples_text(samples), out.output);
    return kExitOk;
  }

  DecodedSequence decoded =
      decode_sequence(samples.best().assignment, built.layout);
  warn_violations(decoded, decoded.clean()
                               ? validate_harmony(decoded.positions, spec)
                               : std::vector<std::string>{});
  Scale scale = scale_or_default(spec.scale);

  if (format == "abc") {
    std::vector<ScoreNote> notes;
    for (const auto& triad : decoded.positions) {
      ScoreNote note;
      for (const auto& token : triad) {
        note.midi.push_back(
            token_to_midi(token, DomainKind::scale_degree, scale));
      }
      std::sort(note.midi.begin(), note.midi.end());
      notes.push_back(std::move(note));
    }
    emit(abc_score("harmony", scale, notes), out.output);
    return kExitOk;
  }
  if (format != "score-text") {
    fail(ErrorKind::invalid_input, "unknown format '" + format + "'");
  }
  std::vector<std::string> tokens;
  for (const auto& triad : decoded.positions) {
    std::string chord;
    std::vector<std::string> names =
        render(triad, DomainKind::scale_degree, scale);
    for (const auto& name : names) {
      chord += (chord.empty() ? "" : "+") + name;
    }
    tokens.push_back(chord.empty() ? "?" : chord);
  }
  emit(join_tokens(tokens), out.output);
  return kExitOk;
}

// Triad on a (1-based) scale degree root, octave-folding past the 8th.
std::vector<int> triad_midi(int root_degree, const Scale& scale) {
  std::vector<int> out;
  for (int step : {0, 2, 4}) {
    int d = root_degree + step;
    out.push_back(scale.degree_to_midi((d - 1) % 7 + 1) + 12 * ((d - 1) / 7));
  }
  return out;
}

int cmd_chords(const std::string& input, const SolverFlags& flags,
               const OutputFlags& out) {
  check_writable(out.output);
  std::istringstream in(read_file(input));
  ChordProgressionSpec spec = read_chords_spec(in);
  ChordBuild built = build_chord_mrf(spec);
  QuboModel model = mrf_to_qubo(built.network);
  std::string format = out.format.empty() ? "score-text" : out.format;

  if (format == "model-text") {
    emit(qubo_text(model), out.output);
    return kExitOk;
  }
  Restriction restriction = chord_restriction(built.layout);
  SampleSet samples = run_solver(model, flags, restriction);
  if (format == "samples-table") {
    emit(samples_text(samples), out.output);
    return kExitOk;
  }

  const Assignment& best = samples.best().assignment;
  std::vector<std::string> tokens;
  std::vector<int> roots;
  for (int t = 0; t < built.layout.n; ++t) {
    std::vector<std::size_t> selected;
    for (std::size_t c = 0; c < built.layout.chords.size(); ++c) {
      if (best[built.layout.var(t, c)]) selected.push_back(c);
    }
    if (selected.size() != 1) {
      std::cerr << "warning: step " << (t + 1) << " selects "
                << selected.size() << " chords\n";
      tokens.push_back("?");
      roots.push_back(0);
    } else {
      tokens.push_back(built.layout.chords[selected.front()]);
      roots.push_back(static_cast<int>(selected.front()) + 1);
    }
  }

  if (format == "abc") {
    Scale scale = scale_or_default(spec.scale);
    std::vector<ScoreNote> notes;
    for (int root : roots) {
      ScoreNote note;
      if (root > 0) note.midi = triad_midi(root, scale);
      notes.push_back(std::move(note));
    }
    emit(abc_score("chord progression", scale, notes), out.output);
    return kExitOk;
  }
  if (format != "score-text") {
    fail(ErrorKind::invalid_input, "unknown format '" + format + "'");
  }
  emit(join_tokens(tokens), out.output);
  return kExitOk;
}

int cmd_qharmony(const std::string& input, const SolverFlags& flags,
                 const OutputFlags& out) {
  check_writable(out.output);
  std::istringstream in(read_file(input));
  QHarmonySpec spec = read_qharmony_spec(in);
  IsingModel ising = build_qharmony(spec);
  QuboModel model = ising_to_qubo(ising);
  std::string format = out.format.empty() ? "score-text" : out.format;

  if (format == "model-text") {
    emit(qubo_text(model), out.output);
    return kExitOk;
  }
  SampleSet samples = run_solver(model, flags, std::nullopt);
  if (format == "samples-table") {
    emit(samples_text(samples), out.output);
    return kExitOk;
  }

  SpinAssignment spins = bits_to_spins(samples.best().assignment);
  std::vector<std::string> selected;
  for (std::size_t i = 0; i < spec.notes.size(); ++i) {
    if (spins[i] == 1) selected.push_back(spec.notes[i]);
  }
  for (const auto& note : spec.input_notes) {
    if (std::find(selected.begin(), selected.end(), note) == selected.end()) {
      std::cerr << "warning: input note " << note
                << " missing from the chord\n";
    }
  }

  if (format == "abc") {
    std::vector<ScoreNote> notes;
    ScoreNote chord;
    chord.eighths = 4;
    for (const auto& name : selected) chord.midi.push_back(parse_pitch(name));
    notes.push_back(std::move(chord));
    emit(abc_score("qharmony chord", Scale{60, Mode::major}, notes),
         out.output);
    return kExitOk;
  }
  if (format != "score-text") {
    fail(ErrorKind::invalid_input, "unknown format '" + format + "'");
  }
  std::string chord;
  for (const auto& name : selected) chord += (chord.empty() ? "" : "+") + name;
  emit((chord.empty() ? "-" : chord) + "\n", out.output);
  return kExitOk;
}

int cmd_extract_weights(const std::string& input, const OutputFlags& out) {
  check_writable(out.output);
  std::istringstream in(read_file(input));
  auto piece = read_piece(in);
  PieceWeights weights = extract_weights(piece);
  std::ostringstream text;
  write_weights(text, weights);
  emit(text.str(), out.output);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QUBO-based music generation toolkit"};
  app.require_subcommand(1);

  std::string input, rhythm_path, output, varmap_path;
  SolverFlags solver;
  OutputFlags out;

  auto* compile_cmd =
      app.add_subcommand("compile", "compile an ilp file into a qubo file");
  compile_cmd->add_option("input", input)->required();
  compile_cmd->add_option("--output,-o", output, "qubo output path");
  compile_cmd->add_option("--varmap", varmap_path, "variable map output path");

  auto* solve_cmd =
      app.add_subcommand("solve", "sample a qubo or ising model file");
  solve_cmd->add_option("input", input)->required();
  add_solver_flags(solve_cmd, solver, false);
  add_output_flags(solve_cmd, out, "samples-table");

  auto* melody_cmd = app.add_subcommand("melody", "generate a melody");
  melody_cmd->add_option("input", input)->required();
  melody_cmd->add_option("--rhythm", rhythm_path,
                         "rhythm spec solved alongside the melody");
  add_solver_flags(melody_cmd, solver, true);
  add_output_flags(melody_cmd, out,
                   "score-text, abc, samples-table, model-text");

  auto* rhythm_cmd = app.add_subcommand("rhythm", "generate a rhythm");
  rhythm_cmd->add_option("input", input)->required();
  add_solver_flags(rhythm_cmd, solver, true);
  add_output_flags(rhythm_cmd, out, "score-text, samples-table, model-text");

  auto* harmony_cmd =
      app.add_subcommand("harmony", "harmonize a melody with triads");
  harmony_cmd->add_option("input", input)->required();
  add_solver_flags(harmony_cmd, solver, true);
  add_output_flags(harmony_cmd, out,
                   "score-text, abc, samples-table, model-text");

  auto* chords_cmd =
      app.add_subcommand("chords", "generate a chord progression");
  chords_cmd->add_option("input", input)->required();
  add_solver_flags(chords_cmd, solver, true);
  add_output_flags(chords_cmd, out,
                   "score-text, abc, samples-table, model-text");

  auto* qharmony_cmd =
      app.add_subcommand("qharmony", "harmonize notes with the Ising model");
  qharmony_cmd->add_option("input", input)->required();
  add_solver_flags(qharmony_cmd, solver, false);
  add_output_flags(qharmony_cmd, out,
                   "score-text, abc, samples-table, model-text");

  auto* weights_cmd = app.add_subcommand(
      "extract-weights", "count consecutive-pair weights from a piece");
  weights_cmd->add_option("input", input)->required();
  add_output_flags(weights_cmd, out, "weights");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitInput;
  }

  try {
    if (compile_cmd->parsed()) return cmd_compile(input, output, varmap_path);
    if (solve_cmd->parsed()) return cmd_solve(input, solver, out);
    if (melody_cmd->parsed()) return cmd_melody(input, rhythm_path, solver, out);
    if (rhythm_cmd->parsed()) return cmd_rhythm(input, solver, out);
    if (harmony_cmd->parsed()) return cmd_harmony(input, solver, out);
    if (chords_cmd->parsed()) return cmd_chords(input, solver, out);
    if (qharmony_cmd->parsed()) return cmd_qharmony(input, solver, out);
    if (weights_cmd->parsed()) return cmd_extract_weights(input, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::size_limit ? kExitSize : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
