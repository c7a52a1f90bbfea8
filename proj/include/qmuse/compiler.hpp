#pragma once
/// @file
/// @brief Compilation of constrained integer programs into QUBO form:
/// slack variables for inequalities, binary encodings for bounded integers,
/// penalty synthesis (table patterns or squared penalties), and Rosenberg
/// quadratization for higher-order terms.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qmuse/qubo.hpp"

namespace qmuse {

/// Bounded integer decision variable.
struct IntVar {
  std::string name;
  std::int64_t lower = 0;
  std::int64_t upper = 0;
};

/// Linear expression over named integer variables plus a constant.
/// Zero coefficients are never stored.
class LinearExpr {
 public:
  LinearExpr& add(const std::string& var, double coeff);
  LinearExpr& add_constant(double value);

  const std::map<std::string, double>& terms() const { return terms_; }
  double constant() const { return constant_; }
  double coefficient(const std::string& var) const;

 private:
  std::map<std::string, double> terms_;
  double constant_ = 0.0;
};

enum class Relation { less_equal, equal, greater_equal };
enum class Hardness { soft, hard };

std::string relation_symbol(Relation r);

struct Constraint {
  std::string name;  // diagnostics; compile() assigns "c<i>" when empty
  LinearExpr lhs;
  Relation relation = Relation::equal;
  double rhs = 0.0;
  std::optional<double> penalty;  // must be > 0 when set; defaulted otherwise
  Hardness hardness = Hardness::soft;
};

/// Multilinear polynomial over binary variables. A monomial is a sorted set
/// of distinct VarIds (x^2 = x); the empty monomial is the constant term.
/// Zero coefficients are pruned on insertion.
class PolyExpr {
 public:
  using Monomials = std::map<std::vector<VarId>, double>;

  PolyExpr& add_term(std::vector<VarId> vars, double coeff);
  PolyExpr& add(const PolyExpr& other);
  PolyExpr& scale(double factor);

  static PolyExpr product(const PolyExpr& a, const PolyExpr& b);

  const Monomials& monomials() const { return monomials_; }
  int degree() const;
  double constant() const;
  /// Largest referenced VarId + 1 (0 when constant-only).
  VarId width() const;
  double value_at(const Assignment& x) const;

  bool operator==(const PolyExpr& other) const {
    return monomials_ == other.monomials_;
  }

 private:
  Monomials monomials_;
};

/// Polynomial objective over named integer variables. Monomial keys are
/// sorted name lists; a repeated name expresses a power of that variable.
class NamePoly {
 public:
  NamePoly& add_term(std::vector<std::string> names, double coeff);
  NamePoly& add_linear(const std::string& name, double coeff) {
    return add_term({name}, coeff);
  }
  NamePoly& add_quadratic(const std::string& a, const std::string& b,
                          double coeff) {
    return add_term({a, b}, coeff);
  }
  NamePoly& add_constant(double value) { return add_term({}, value); }

  const std::map<std::vector<std::string>, double>& monomials() const {
    return monomials_;
  }

 private:
  std::map<std::vector<std::string>, double> monomials_;
};

struct IlpModel {
  std::vector<IntVar> variables;
  NamePoly objective;
  std::vector<Constraint> constraints;

  IntVar& add_variable(std::string name, std::int64_t lower,
                       std::int64_t upper);
  const IntVar* find_variable(const std::string& name) const;
};

/// Binary encoding of one bounded integer:
///   value = offset + sum coefficient_b * bit_b,
/// surjective onto [lower, upper] and never outside it.
struct BinaryEncoding {
  std::string source;
  std::int64_t offset = 0;
  std::vector<std::pair<VarId, std::int64_t>> bits;

  std::int64_t decode(const Assignment& x) const;
  /// Writes a bit pattern for `value` into x (greedy, high coefficient first).
  void encode(std::int64_t value, Assignment& x) const;
};

struct SlackVar {
  std::string name;
  std::size_t constraint_index = 0;  // index into IlpModel::constraints
  BinaryEncoding encoding;
};

/// Auxiliary product variable introduced by quadratization: id = a*b.
struct AuxVar {
  VarId id = 0;
  VarId parent_a = 0;
  VarId parent_b = 0;
};

/// Registry of every variable the compiler introduced. Bit ids are assigned
/// in three disjoint blocks: declared variables (declaration order), then
/// slacks (constraint order), then quadratization auxiliaries.
struct VarMap {
  std::size_t num_vars = 0;
  std::vector<BinaryEncoding> encodings;
  std::map<std::string, std::size_t> index_of;  // name -> encodings index
  std::vector<SlackVar> slacks;
  std::vector<AuxVar> aux;

  const BinaryEncoding& encoding_of(const std::string& name) const;
  /// Completes slack values (from the original constraints) and auxiliary
  /// bits (products of their parents) for an assignment whose declared-
  /// variable bits are already set.
  void complete_assignment(const IlpModel& model, Assignment& x) const;
};

struct CompileConfig {
  /// Per-constraint penalty when a constraint carries none. Unset: use
  /// 1 + sum |coefficients| of the binarized objective.
  std::optional<double> default_penalty;
  /// Multiplier applied on top for Hardness::hard constraints.
  double hard_factor = 10.0;
};

struct CompileResult {
  QuboModel model;
  VarMap map;
};

/// Inequality -> equality with a fresh bounded slack variable. Slack bounds
/// come from interval arithmetic over the variable bounds.
struct EqualityForm {
  Constraint equality;  // lhs includes the slack term; relation == equal
  IntVar slack;
};
EqualityForm to_equality(const Constraint& c,
                         const std::map<std::string, IntVar>& bounds);

/// k = ceil(log2(upper-lower+1)) bits with coefficients 2^0..2^(k-2) and a
/// final coefficient (upper - lower - (2^(k-1) - 1)); offset = lower.
/// Bit ids are local (0..k-1).
BinaryEncoding binarize(const IntVar& v);

/// Constraint over single-bit binary variables, constants folded into rhs.
struct BinaryTermConstraint {
  std::vector<std::pair<VarId, double>> terms;
  Relation relation = Relation::equal;
  double rhs = 0.0;
};

/// Table lookup of closed-form penalties for common binary constraint
/// shapes. Returns the penalty-scaled expression, or nullopt when no row
/// matches (caller falls back to squared_penalty).
std::optional<PolyExpr> penalty_pattern(const BinaryTermConstraint& c,
                                        double penalty);

/// penalty * (lhs - rhs)^2, expanded and simplified over binary variables.
PolyExpr squared_penalty(const PolyExpr& lhs, double rhs, double penalty);

struct QuadratizeResult {
  PolyExpr poly;
  std::vector<AuxVar> aux;
};

/// Rosenberg reduction: repeatedly substitute the pair occurring in the most
/// degree>=3 monomials (ties: lowest (i,j)) with a fresh variable and add
/// P*(x_i x_j - 2 x_i y - 2 x_j y + 3 y). Terminates with degree <= 2.
QuadratizeResult quadratize(const PolyExpr& p, double penalty);
QuadratizeResult quadratize(const PolyExpr& p, double penalty,
                            VarId first_aux);

/// Uniform penalty that guarantees per-assignment min-preservation for the
/// given polynomial: 1 + sum |non-constant coefficients|.
double quadratize_penalty_bound(const PolyExpr& p);

/// Full pipeline: inequalities -> equalities, integers -> binaries, penalty
/// synthesis (patterns preferred for matching binary constraints), then
/// quadratization if any degree >= 3 appeared.
CompileResult compile(const IlpModel& model, const CompileConfig& config = {});

struct ConstraintReport {
  std::string name;
  bool satisfied = false;
  double lhs_value = 0.0;
  std::optional<std::int64_t> slack_value;
};

struct DecodeResult {
  std::map<std::string, std::int64_t> values;
  std::vector<ConstraintReport> constraints;
  bool feasible = true;
};

/// Decodes integers via the recorded encodings and re-checks every original
/// constraint on the decoded values.
DecodeResult decode(const Assignment& x, const VarMap& map,
                    const IlpModel& model);

}  // namespace qmuse
