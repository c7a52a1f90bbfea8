#pragma once
/// @file
/// @brief Binary quadratic models (QUBO and Ising), exact energy evaluation,
/// and lossless conversion between the two forms.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qmuse/error.hpp"

namespace qmuse {

using VarId = std::uint32_t;

/// 0/1 values, one per variable.
using Assignment = std::vector<std::uint8_t>;

/// -1/+1 values, one per spin.
using SpinAssignment = std::vector<std::int8_t>;

using LinearTerms = std::map<VarId, double>;
using QuadraticTerms = std::map<std::pair<VarId, VarId>, double>;
using LabelMap = std::map<VarId, std::string>;

class QuboBuilder;
class IsingBuilder;

/// Upper-triangular binary quadratic model
///   f(x) = sum_i linear_i x_i + sum_{i<j} quad_ij x_i x_j + offset.
///
/// Canonical form: every quadratic key satisfies i < j, no stored coefficient
/// is zero, and all indices are < num_vars. Immutable after construction
/// (build with QuboBuilder); evaluation is safe from many threads.
class QuboModel {
 public:
  QuboModel() = default;

  std::size_t num_vars() const { return num_vars_; }
  const LinearTerms& linear() const { return linear_; }
  const QuadraticTerms& quadratic() const { return quadratic_; }
  double offset() const { return offset_; }
  const LabelMap& labels() const { return labels_; }

  /// Coefficient lookup; absent terms read as 0.
  double linear_at(VarId i) const;
  double quadratic_at(VarId i, VarId j) const;

  /// Coefficient equality (labels are annotations and do not participate).
  bool operator==(const QuboModel& other) const {
    return num_vars_ == other.num_vars_ && offset_ == other.offset_ &&
           linear_ == other.linear_ && quadratic_ == other.quadratic_;
  }

 private:
  friend class QuboBuilder;
  std::size_t num_vars_ = 0;
  LinearTerms linear_;
  QuadraticTerms quadratic_;
  double offset_ = 0.0;
  LabelMap labels_;
};

/// Ising model H(s) = sum_i h_i s_i + sum_{i<j} J_ij s_i s_j + offset
/// over spins s in {-1,+1}. Same canonical form as QuboModel.
class IsingModel {
 public:
  IsingModel() = default;

  std::size_t num_spins() const { return num_spins_; }
  const LinearTerms& h() const { return h_; }
  const QuadraticTerms& j() const { return j_; }
  double offset() const { return offset_; }

  bool operator==(const IsingModel& other) const {
    return num_spins_ == other.num_spins_ && offset_ == other.offset_ &&
           h_ == other.h_ && j_ == other.j_;
  }

 private:
  friend class IsingBuilder;
  std::size_t num_spins_ = 0;
  LinearTerms h_;
  QuadraticTerms j_;
  double offset_ = 0.0;
};

/// Accumulating builder. Repeated terms add; off-triangle pairs fold into
/// (min,max); diagonal pairs fold into linear terms (x^2 = x for binary x).
/// build() drops exact-zero coefficients so insertion order never matters.
class QuboBuilder {
 public:
  explicit QuboBuilder(std::size_t num_vars) : num_vars_(num_vars) {}

  QuboBuilder& add_linear(VarId i, double coeff);
  QuboBuilder& add_quadratic(VarId i, VarId j, double coeff);
  QuboBuilder& add_offset(double value);
  QuboBuilder& set_label(VarId i, std::string label);

  QuboModel build() const;

 private:
  std::size_t num_vars_;
  LinearTerms linear_;
  QuadraticTerms quadratic_;
  double offset_ = 0.0;
  LabelMap labels_;
};

class IsingBuilder {
 public:
  explicit IsingBuilder(std::size_t num_spins) : num_spins_(num_spins) {}

  IsingBuilder& add_bias(VarId i, double coeff);
  IsingBuilder& add_coupling(VarId i, VarId j, double coeff);
  IsingBuilder& add_offset(double value);

  IsingModel build() const;

 private:
  std::size_t num_spins_;
  LinearTerms h_;
  QuadraticTerms j_;
  double offset_ = 0.0;
};

/// One solver result: an assignment, its energy under the producing model,
/// and how many times it was observed.
struct Sample {
  Assignment assignment;
  double energy = 0.0;
  std::uint64_t num_occurrences = 1;
};

/// f(x); throws ErrorKind::dimension on width mismatch.
double energy(const QuboModel& model, const Assignment& x);

/// H(s); throws on width mismatch or a spin outside {-1,+1}.
double ising_energy(const IsingModel& model, const SpinAssignment& s);

/// Exact conversion via x_i = (1 - s_i)/2. Energy-identical on every
/// configuration; constants move into the offset.
IsingModel qubo_to_ising(const QuboModel& model);

/// Inverse mapping s_i = 1 - 2 x_i; round trips are energy identities.
QuboModel ising_to_qubo(const IsingModel& model);

/// Spin/bit views of the same configuration under the mapping above.
SpinAssignment bits_to_spins(const Assignment& x);
Assignment spins_to_bits(const SpinAssignment& s);

/// Deterministic 64-bit digest of the coefficient structure (FNV-1a over a
/// canonical byte stream). Stable across runs and platforms.
std::uint64_t fingerprint(const QuboModel& model);

}  // namespace qmuse
