#include "qmuse/compiler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <set>

namespace qmuse {

namespace {

constexpr double kEps = 1e-9;
// Slack encodings beyond this range signal effectively unbounded constraints.
constexpr std::int64_t kMaxSlackRange = std::int64_t(1) << 32;

std::string bit_label(const std::string& name, std::size_t bit_index,
                      std::size_t bit_count) {
  if (bit_count == 1) return name;
  return name + "[" + std::to_string(bit_index) + "]";
}

}  // namespace

LinearExpr& LinearExpr::add(const std::string& var, double coeff) {
  if (coeff == 0.0) return *this;
  auto [it, inserted] = terms_.try_emplace(var, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
  return *this;
}

LinearExpr& LinearExpr::add_constant(double value) {
  constant_ += value;
  return *this;
}

double LinearExpr::coefficient(const std::string& var) const {
  auto it = terms_.find(var);
  return it == terms_.end() ? 0.0 : it->second;
}

std::string relation_symbol(Relation r) {
  switch (r) {
    case Relation::less_equal:
      return "<=";
    case Relation::equal:
      return "=";
    case Relation::greater_equal:
      return ">=";
  }
  return "?";
}

PolyExpr& PolyExpr::add_term(std::vector<VarId> vars, double coeff) {
  if (coeff == 0.0) return *this;
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  auto [it, inserted] = monomials_.try_emplace(std::move(vars), coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) monomials_.erase(it);
  }
  return *this;
}

PolyExpr& PolyExpr::add(const PolyExpr& other) {
  for (const auto& [vars, coeff] : other.monomials_) add_term(vars, coeff);
  return *this;
}

PolyExpr& PolyExpr::scale(double factor) {
  if (factor == 0.0) {
    monomials_.clear();
    return *this;
  }
  for (auto& [vars, coeff] : monomials_) coeff *= factor;
  return *this;
}

PolyExpr PolyExpr::product(const PolyExpr& a, const PolyExpr& b) {
  PolyExpr out;
  for (const auto& [va, ca] : a.monomials_) {
    for (const auto& [vb, cb] : b.monomials_) {
      std::vector<VarId> merged;
      merged.reserve(va.size() + vb.size());
      merged.insert(merged.end(), va.begin(), va.end());
      merged.insert(merged.end(), vb.begin(), vb.end());
      out.add_term(std::move(merged), ca * cb);
    }
  }
  return out;
}

int PolyExpr::degree() const {
  std::size_t deg = 0;
  for (const auto& [vars, coeff] : monomials_) deg = std::max(deg, vars.size());
  return static_cast<int>(deg);
}

double PolyExpr::constant() const {
  auto it = monomials_.find({});
  return it == monomials_.end() ? 0.0 : it->second;
}

VarId PolyExpr::width() const {
  VarId w = 0;
  for (const auto& [vars, coeff] : monomials_) {
    if (!vars.empty()) w = std::max(w, vars.back() + 1);
  }
  return w;
}

double PolyExpr::value_at(const Assignment& x) const {
  double total = 0.0;
  for (const auto& [vars, coeff] : monomials_) {
    bool active = true;
    for (VarId v : vars) {
      if (v >= x.size()) {
        fail(ErrorKind::dimension, "polynomial references variable " +
                                       std::to_string(v) +
                                       " beyond assignment width");
      }
      if (!x[v]) {
        active = false;
        break;
      }
    }
    if (active) total += coeff;
  }
  return total;
}

NamePoly& NamePoly::add_term(std::vector<std::string> names, double coeff) {
  if (coeff == 0.0) return *this;
  std::sort(names.begin(), names.end());
  auto [it, inserted] = monomials_.try_emplace(std::move(names), coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) monomials_.erase(it);
  }
  return *this;
}

IntVar& IlpModel::add_variable(std::string name, std::int64_t lower,
                               std::int64_t upper) {
  if (name.empty()) fail(ErrorKind::invalid_input, "variable name is empty");
  if (lower > upper) {
    fail(ErrorKind::invalid_input, "variable '" + name + "' has lower bound " +
                                       std::to_string(lower) +
                                       " above upper bound " +
                                       std::to_string(upper));
  }
  if (find_variable(name) != nullptr) {
    fail(ErrorKind::invalid_input, "variable '" + name + "' declared twice");
  }
  variables.push_back(IntVar{std::move(name), lower, upper});
  return variables.back();
}

const IntVar* IlpModel::find_variable(const std::string& name) const {
  for (const auto& v : variables) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

std::int64_t BinaryEncoding::decode(const Assignment& x) const {
  std::int64_t value = offset;
  for (const auto& [id, coeff] : bits) {
    if (id >= x.size()) {
      fail(ErrorKind::dimension, "encoding of '" + source +
                                     "' references bit beyond assignment");
    }
    if (x[id]) value += coeff;
  }
  return value;
}

void BinaryEncoding::encode(std::int64_t value, Assignment& x) const {
  std::int64_t remaining = value - offset;
  // Greedy from the highest coefficient covers the whole range: the final
  // coefficient is at most 2^(k-1) and the lower bits span [0, 2^(k-1)-1].
  for (auto it = bits.rbegin(); it != bits.rend(); ++it) {
    if (it->first >= x.size()) {
      fail(ErrorKind::dimension, "encoding of '" + source +
                                     "' references bit beyond assignment");
    }
    if (remaining >= it->second && it->second > 0) {
      x[it->first] = 1;
      remaining -= it->second;
    } else {
      x[it->first] = 0;
    }
  }
  if (remaining != 0) {
    fail(ErrorKind::invalid_input,
         "value " + std::to_string(value) + " not representable for '" +
             source + "'");
  }
}

const BinaryEncoding& VarMap::encoding_of(const std::string& name) const {
  auto it = index_of.find(name);
  if (it != index_of.end()) return encodings[it->second];
  for (const auto& slack : slacks) {
    if (slack.name == name) return slack.encoding;
  }
  fail(ErrorKind::invalid_input, "no encoding for variable '" + name + "'");
}

void VarMap::complete_assignment(const IlpModel& model, Assignment& x) const {
  for (const auto& slack : slacks) {
    const Constraint& c = model.constraints.at(slack.constraint_index);
    double lhs = c.lhs.constant();
    for (const auto& [name, coeff] : c.lhs.terms()) {
      lhs += coeff * static_cast<double>(encoding_of(name).decode(x));
    }
    double v = (c.relation == Relation::less_equal) ? c.rhs - lhs : lhs - c.rhs;
    std::int64_t lo = slack.encoding.offset;
    std::int64_t hi = lo;
    for (const auto& [id, coeff] : slack.encoding.bits) hi += coeff;
    std::int64_t value = std::llround(v);
    value = std::clamp(value, lo, hi);
    slack.encoding.encode(value, x);
  }
  for (const auto& a : aux) {
    x.at(a.id) = (x.at(a.parent_a) && x.at(a.parent_b)) ? 1 : 0;
  }
}

EqualityForm to_equality(const Constraint& c,
                         const std::map<std::string, IntVar>& bounds) {
  if (c.relation == Relation::equal) {
    fail(ErrorKind::invalid_input,
         "constraint '" + c.name + "' is already an equality");
  }
  double lo = c.lhs.constant();
  double hi = c.lhs.constant();
  for (const auto& [name, coeff] : c.lhs.terms()) {
    auto it = bounds.find(name);
    if (it == bounds.end()) {
      fail(ErrorKind::invalid_input, "constraint '" + c.name +
                                         "' references undeclared variable '" +
                                         name + "'");
    }
    const IntVar& v = it->second;
    lo += coeff * static_cast<double>(coeff > 0 ? v.lower : v.upper);
    hi += coeff * static_cast<double>(coeff > 0 ? v.upper : v.lower);
  }

  double range = (c.relation == Relation::less_equal) ? c.rhs - lo : hi - c.rhs;
  if (range < -kEps) {
    fail(ErrorKind::infeasible,
         "constraint '" + c.name + "' is infeasible: lhs " +
             relation_symbol(c.relation) + " " + std::to_string(c.rhs) +
             " can never hold under the variable bounds");
  }
  auto upper = static_cast<std::int64_t>(std::floor(range + kEps));
  if (upper > kMaxSlackRange) {
    fail(ErrorKind::invalid_input,
         "constraint '" + c.name +
             "' needs a slack range of " + std::to_string(upper) +
             "; a variable is effectively unbounded");
  }

  EqualityForm out;
  out.slack = IntVar{c.name + ".slack", 0, upper};
  out.equality = c;
  out.equality.relation = Relation::equal;
  out.equality.lhs.add(out.slack.name,
                       c.relation == Relation::less_equal ? 1.0 : -1.0);
  return out;
}

BinaryEncoding binarize(const IntVar& v) {
  if (v.lower > v.upper) {
    fail(ErrorKind::invalid_input,
         "variable '" + v.name + "' has inverted bounds");
  }
  BinaryEncoding enc;
  enc.source = v.name;
  enc.offset = v.lower;
  std::uint64_t range = static_cast<std::uint64_t>(v.upper - v.lower);
  if (range == 0) return enc;
  int k = std::bit_width(range);
  for (int i = 0; i + 1 < k; ++i) {
    enc.bits.emplace_back(static_cast<VarId>(i), std::int64_t(1) << i);
  }
  std::int64_t covered = (std::int64_t(1) << (k - 1)) - 1;
  enc.bits.emplace_back(static_cast<VarId>(k - 1),
                        static_cast<std::int64_t>(range) - covered);
  return enc;
}

std::optional<PolyExpr> penalty_pattern(const BinaryTermConstraint& c,
                                        double penalty) {
  auto terms = c.terms;
  std::sort(terms.begin(), terms.end());
  PolyExpr p;

  if (terms.size() == 2) {
    VarId a = terms[0].first;
    VarId b = terms[1].first;
    bool unit = terms[0].second == 1.0 && terms[1].second == 1.0;
    if (unit && c.rhs == 1.0) {
      switch (c.relation) {
        case Relation::less_equal:  // x1 + x2 <= 1  ->  x1 x2
          p.add_term({a, b}, penalty);
          return p;
        case Relation::greater_equal:  // x1 + x2 >= 1  ->  1 - x1 - x2 + x1 x2
          p.add_term({}, penalty);
          p.add_term({a}, -penalty);
          p.add_term({b}, -penalty);
          p.add_term({a, b}, penalty);
          return p;
        case Relation::equal:  // x1 + x2 = 1  ->  1 - x1 - x2 + 2 x1 x2
          p.add_term({}, penalty);
          p.add_term({a}, -penalty);
          p.add_term({b}, -penalty);
          p.add_term({a, b}, 2.0 * penalty);
          return p;
      }
    }
    bool mixed = (terms[0].second == 1.0 && terms[1].second == -1.0) ||
                 (terms[0].second == -1.0 && terms[1].second == 1.0);
    if (mixed && c.rhs == 0.0) {
      VarId pos = terms[0].second == 1.0 ? a : b;
      VarId neg = terms[0].second == 1.0 ? b : a;
      if (c.relation == Relation::less_equal ||
          c.relation == Relation::greater_equal) {
        // x1 <= x2  ->  x1 - x1 x2 (>= is the same row with roles swapped)
        VarId small = c.relation == Relation::less_equal ? pos : neg;
        p.add_term({small}, penalty);
        p.add_term({pos, neg}, -penalty);
        return p;
      }
      // x1 = x2  ->  x1 + x2 - 2 x1 x2
      p.add_term({pos}, penalty);
      p.add_term({neg}, penalty);
      p.add_term({pos, neg}, -2.0 * penalty);
      return p;
    }
  }

  if (terms.size() == 3 && c.relation == Relation::less_equal &&
      c.rhs == 1.0 && terms[0].second == 1.0 && terms[1].second == 1.0 &&
      terms[2].second == 1.0) {
    // x1 + x2 + x3 <= 1  ->  x1 x2 + x2 x3 + x3 x1
    p.add_term({terms[0].first, terms[1].first}, penalty);
    p.add_term({terms[1].first, terms[2].first}, penalty);
    p.add_term({terms[2].first, terms[0].first}, penalty);
    return p;
  }

  return std::nullopt;
}

PolyExpr squared_penalty(const PolyExpr& lhs, double rhs, double penalty) {
  PolyExpr shifted = lhs;
  shifted.add_term({}, -rhs);
  PolyExpr squared = PolyExpr::product(shifted, shifted);
  squared.scale(penalty);
  return squared;
}

namespace {

// One Rosenberg pass over `poly`; penalty per auxiliary comes from `pick_p`.
QuadratizeResult quadratize_impl(PolyExpr poly, VarId next_id,
                                 const std::function<double(double)>& pick_p) {
  QuadratizeResult out;
  while (poly.degree() >= 3) {
    std::map<std::pair<VarId, VarId>, std::uint32_t> counts;
    for (const auto& [vars, coeff] : poly.monomials()) {
      if (vars.size() < 3) continue;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        for (std::size_t j = i + 1; j < vars.size(); ++j) {
          ++counts[{vars[i], vars[j]}];
        }
      }
    }
    std::pair<VarId, VarId> best{};
    std::uint32_t best_count = 0;
    for (const auto& [pair, count] : counts) {
      if (count > best_count) {  // map order breaks ties at the lowest pair
        best = pair;
        best_count = count;
      }
    }

    double touched_mass = 0.0;
    PolyExpr reduced;
    for (const auto& [vars, coeff] : poly.monomials()) {
      bool has_a = std::binary_search(vars.begin(), vars.end(), best.first);
      bool has_b = std::binary_search(vars.begin(), vars.end(), best.second);
      if (has_a && has_b) {
        touched_mass += std::abs(coeff);
        std::vector<VarId> rest;
        rest.reserve(vars.size() - 1);
        for (VarId v : vars) {
          if (v != best.first && v != best.second) rest.push_back(v);
        }
        rest.push_back(next_id);
        reduced.add_term(std::move(rest), coeff);
      } else {
        reduced.add_term(vars, coeff);
      }
    }

    double p = pick_p(touched_mass);
    reduced.add_term({best.first, best.second}, p);
    reduced.add_term({best.first, next_id}, -2.0 * p);
    reduced.add_term({best.second, next_id}, -2.0 * p);
    reduced.add_term({next_id}, 3.0 * p);

    out.aux.push_back(AuxVar{next_id, best.first, best.second});
    poly = std::move(reduced);
    ++next_id;
  }
  out.poly = std::move(poly);
  return out;
}

}  // namespace

QuadratizeResult quadratize(const PolyExpr& p, double penalty) {
  return quadratize(p, penalty, p.width());
}

QuadratizeResult quadratize(const PolyExpr& p, double penalty,
                            VarId first_aux) {
  if (penalty <= 0.0) {
    fail(ErrorKind::invalid_input, "quadratization penalty must be positive");
  }
  return quadratize_impl(p, first_aux, [penalty](double) { return penalty; });
}

double quadratize_penalty_bound(const PolyExpr& p) {
  double mass = 0.0;
  for (const auto& [vars, coeff] : p.monomials()) {
    if (!vars.empty()) mass += std::abs(coeff);
  }
  return 1.0 + mass;
}

namespace {

// Linear polynomial over bit ids for one encoded integer variable.
PolyExpr encoding_poly(const BinaryEncoding& enc) {
  PolyExpr p;
  p.add_term({}, static_cast<double>(enc.offset));
  for (const auto& [id, coeff] : enc.bits) {
    p.add_term({id}, static_cast<double>(coeff));
  }
  return p;
}

BinaryEncoding rebase(const BinaryEncoding& local, VarId& next) {
  BinaryEncoding out = local;
  for (auto& [id, coeff] : out.bits) id = next++;
  return out;
}

// Single-bit unit-coefficient view of a constraint, if every variable allows
// it; constants fold into the rhs.
std::optional<BinaryTermConstraint> binary_view(const Constraint& c,
                                                const VarMap& map) {
  BinaryTermConstraint view;
  view.relation = c.relation;
  view.rhs = c.rhs - c.lhs.constant();
  for (const auto& [name, coeff] : c.lhs.terms()) {
    const BinaryEncoding& enc = map.encoding_of(name);
    if (enc.bits.size() != 1 || enc.offset != 0 || enc.bits[0].second != 1) {
      return std::nullopt;
    }
    view.terms.emplace_back(enc.bits[0].first, coeff);
  }
  return view;
}

}  // namespace

CompileResult compile(const IlpModel& model, const CompileConfig& config) {
  std::map<std::string, IntVar> bounds;
  for (const auto& v : model.variables) {
    if (v.lower > v.upper) {
      fail(ErrorKind::invalid_input,
           "variable '" + v.name + "' has inverted bounds");
    }
    if (!bounds.emplace(v.name, v).second) {
      fail(ErrorKind::invalid_input,
           "variable '" + v.name + "' declared twice");
    }
  }
  for (const auto& [names, coeff] : model.objective.monomials()) {
    for (const auto& name : names) {
      if (!bounds.count(name)) {
        fail(ErrorKind::invalid_input,
             "objective references undeclared variable '" + name + "'");
      }
    }
  }

  std::vector<Constraint> constraints = model.constraints;
  std::set<std::string> constraint_names;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    Constraint& c = constraints[i];
    if (c.name.empty()) c.name = "c" + std::to_string(i);
    // Slack variables are keyed by "<name>.slack", so names must be unique
    // and must not shadow a declared variable.
    if (!constraint_names.insert(c.name).second) {
      fail(ErrorKind::invalid_input,
           "constraint name '" + c.name + "' used twice");
    }
    if (bounds.count(c.name + ".slack")) {
      fail(ErrorKind::invalid_input,
           "variable '" + c.name + ".slack' collides with a slack name");
    }
    if (c.penalty && *c.penalty <= 0.0) {
      fail(ErrorKind::invalid_input,
           "constraint '" + c.name + "' has non-positive penalty");
    }
    for (const auto& [name, coeff] : c.lhs.terms()) {
      if (!bounds.count(name)) {
        fail(ErrorKind::invalid_input,
             "constraint '" + c.name + "' references undeclared variable '" +
                 name + "'");
      }
    }
  }

  VarMap map;
  VarId next = 0;
  for (const auto& v : model.variables) {
    map.index_of[v.name] = map.encodings.size();
    map.encodings.push_back(rebase(binarize(v), next));
  }

  PolyExpr total;
  for (const auto& [names, coeff] : model.objective.monomials()) {
    PolyExpr term;
    term.add_term({}, coeff);
    for (const auto& name : names) {
      term = PolyExpr::product(term, encoding_poly(map.encoding_of(name)));
    }
    total.add(term);
  }

  double default_penalty;
  if (config.default_penalty) {
    if (*config.default_penalty <= 0.0) {
      fail(ErrorKind::invalid_input, "default penalty must be positive");
    }
    default_penalty = *config.default_penalty;
  } else {
    double mass = 0.0;
    for (const auto& [vars, coeff] : total.monomials()) {
      if (!vars.empty()) mass += std::abs(coeff);
    }
    default_penalty = 1.0 + mass;
  }

  // Route every constraint before allocating slacks so that pattern-matched
  // inequalities never leave dead slack bits behind.
  struct Routed {
    std::size_t index;
    double penalty;
    std::optional<PolyExpr> pattern;
    std::optional<Constraint> equality;  // slack already in lhs if any
  };
  std::vector<Routed> routed;
  std::vector<std::pair<std::size_t, IntVar>> pending_slacks;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const Constraint& c = constraints[i];
    double p = c.penalty.value_or(default_penalty) *
               (c.hardness == Hardness::hard ? config.hard_factor : 1.0);
    Routed r{i, p, std::nullopt, std::nullopt};
    if (auto view = binary_view(c, map)) {
      if (auto pattern = penalty_pattern(*view, p)) {
        r.pattern = std::move(pattern);
        routed.push_back(std::move(r));
        continue;
      }
    }
    if (c.relation == Relation::equal) {
      r.equality = c;
    } else {
      EqualityForm eq = to_equality(c, bounds);
      pending_slacks.emplace_back(i, eq.slack);
      r.equality = std::move(eq.equality);
    }
    routed.push_back(std::move(r));
  }

  for (auto& [ci, slack] : pending_slacks) {
    SlackVar sv;
    sv.name = slack.name;
    sv.constraint_index = ci;
    sv.encoding = rebase(binarize(slack), next);
    map.slacks.push_back(std::move(sv));
  }

  for (const auto& r : routed) {
    if (r.pattern) {
      total.add(*r.pattern);
      continue;
    }
    const Constraint& eq = *r.equality;
    PolyExpr lhs;
    lhs.add_term({}, eq.lhs.constant());
    for (const auto& [name, coeff] : eq.lhs.terms()) {
      PolyExpr scaled = encoding_poly(map.encoding_of(name));
      scaled.scale(coeff);
      lhs.add(scaled);
    }
    total.add(squared_penalty(lhs, eq.rhs, r.penalty));
  }

  if (total.degree() >= 3) {
    QuadratizeResult q = quadratize_impl(
        total, next, [](double touched) { return 1.0 + touched; });
    map.aux = q.aux;
    total = std::move(q.poly);
    next += static_cast<VarId>(map.aux.size());
  }

  map.num_vars = next;
  QuboBuilder builder(next);
  for (const auto& [vars, coeff] : total.monomials()) {
    switch (vars.size()) {
      case 0:
        builder.add_offset(coeff);
        break;
      case 1:
        builder.add_linear(vars[0], coeff);
        break;
      default:
        builder.add_quadratic(vars[0], vars[1], coeff);
        break;
    }
  }
  for (const auto& enc : map.encodings) {
    for (std::size_t b = 0; b < enc.bits.size(); ++b) {
      builder.set_label(enc.bits[b].first,
                        bit_label(enc.source, b, enc.bits.size()));
    }
  }
  for (const auto& slack : map.slacks) {
    const auto& enc = slack.encoding;
    for (std::size_t b = 0; b < enc.bits.size(); ++b) {
      builder.set_label(enc.bits[b].first,
                        bit_label(slack.name, b, enc.bits.size()));
    }
  }
  for (std::size_t a = 0; a < map.aux.size(); ++a) {
    builder.set_label(map.aux[a].id, "aux" + std::to_string(a));
  }

  return CompileResult{builder.build(), std::move(map)};
}

DecodeResult decode(const Assignment& x, const VarMap& map,
                    const IlpModel& model) {
  if (x.size() != map.num_vars) {
    fail(ErrorKind::dimension,
         "assignment has " + std::to_string(x.size()) + " bits, compiled " +
             "model has " + std::to_string(map.num_vars));
  }
  DecodeResult out;
  for (const auto& enc : map.encodings) {
    out.values[enc.source] = enc.decode(x);
  }
  for (std::size_t i = 0; i < model.constraints.size(); ++i) {
    const Constraint& c = model.constraints[i];
    ConstraintReport report;
    report.name = c.name.empty() ? "c" + std::to_string(i) : c.name;
    double lhs = c.lhs.constant();
    for (const auto& [name, coeff] : c.lhs.terms()) {
      lhs += coeff * static_cast<double>(out.values.at(name));
    }
    report.lhs_value = lhs;
    switch (c.relation) {
      case Relation::less_equal:
        report.satisfied = lhs <= c.rhs + kEps;
        break;
      case Relation::equal:
        report.satisfied = std::abs(lhs - c.rhs) <= kEps;
        break;
      case Relation::greater_equal:
        report.satisfied = lhs >= c.rhs - kEps;
        break;
    }
    for (const auto& slack : map.slacks) {
      if (slack.constraint_index == i) {
        report.slack_value = slack.encoding.decode(x);
      }
    }
    out.feasible = out.feasible && report.satisfied;
    out.constraints.push_back(std::move(report));
  }
  return out;
}

}  // namespace qmuse
