#include "qmuse/qubo.hpp"

#include <bit>
#include <cstring>

namespace qmuse {

namespace {

void check_index(VarId i, std::size_t num_vars, const char* what) {
  if (i >= num_vars) {
    fail(ErrorKind::invalid_input,
         std::string(what) + " index " + std::to_string(i) +
             " out of range for " + std::to_string(num_vars) + " variables");
  }
}

template <typename Map>
void prune_zeros(Map& map) {
  for (auto it = map.begin(); it != map.end();) {
    it = (it->second == 0.0) ? map.erase(it) : std::next(it);
  }
}

std::uint64_t fnv1a(std::uint64_t hash, const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t fnv1a_u64(std::uint64_t hash, std::uint64_t v) {
  return fnv1a(hash, &v, sizeof(v));
}

std::uint64_t fnv1a_double(std::uint64_t hash, double v) {
  return fnv1a_u64(hash, std::bit_cast<std::uint64_t>(v));
}

}  // namespace

double QuboModel::linear_at(VarId i) const {
  auto it = linear_.find(i);
  return it == linear_.end() ? 0.0 : it->second;
}

double QuboModel::quadratic_at(VarId i, VarId j) const {
  if (i > j) std::swap(i, j);
  auto it = quadratic_.find({i, j});
  return it == quadratic_.end() ? 0.0 : it->second;
}

QuboBuilder& QuboBuilder::add_linear(VarId i, double coeff) {
  check_index(i, num_vars_, "linear");
  linear_[i] += coeff;
  return *this;
}

QuboBuilder& QuboBuilder::add_quadratic(VarId i, VarId j, double coeff) {
  check_index(i, num_vars_, "quadratic");
  check_index(j, num_vars_, "quadratic");
  if (i == j) return add_linear(i, coeff);  // x^2 = x on binaries
  if (i > j) std::swap(i, j);
  quadratic_[{i, j}] += coeff;
  return *this;
}

QuboBuilder& QuboBuilder::add_offset(double value) {
  offset_ += value;
  return *this;
}

QuboBuilder& QuboBuilder::set_label(VarId i, std::string label) {
  check_index(i, num_vars_, "label");
  labels_[i] = std::move(label);
  return *this;
}

QuboModel QuboBuilder::build() const {
  QuboModel model;
  model.num_vars_ = num_vars_;
  model.linear_ = linear_;
  model.quadratic_ = quadratic_;
  model.offset_ = offset_;
  model.labels_ = labels_;
  prune_zeros(model.linear_);
  prune_zeros(model.quadratic_);
  return model;
}

IsingBuilder& IsingBuilder::add_bias(VarId i, double coeff) {
  check_index(i, num_spins_, "bias");
  h_[i] += coeff;
  return *this;
}

IsingBuilder& IsingBuilder::add_coupling(VarId i, VarId j, double coeff) {
  check_index(i, num_spins_, "coupling");
  check_index(j, num_spins_, "coupling");
  if (i == j) {
    // s^2 = 1: a diagonal coupling is a constant.
    offset_ += coeff;
    return *this;
  }
  if (i > j) std::swap(i, j);
  j_[{i, j}] += coeff;
  return *this;
}

IsingBuilder& IsingBuilder::add_offset(double value) {
  offset_ += value;
  return *this;
}

IsingModel IsingBuilder::build() const {
  IsingModel model;
  model.num_spins_ = num_spins_;
  model.h_ = h_;
  model.j_ = j_;
  model.offset_ = offset_;
  prune_zeros(model.h_);
  prune_zeros(model.j_);
  return model;
}

double energy(const QuboModel& model, const Assignment& x) {
  if (x.size() != model.num_vars()) {
    fail(ErrorKind::dimension,
         "assignment has " + std::to_string(x.size()) + " bits, model has " +
             std::to_string(model.num_vars()) + " variables");
  }
  double total = model.offset();
  for (const auto& [i, c] : model.linear()) {
    if (x[i]) total += c;
  }
  for (const auto& [key, c] : model.quadratic()) {
    if (x[key.first] && x[key.second]) total += c;
  }
  return total;
}

double ising_energy(const IsingModel& model, const SpinAssignment& s) {
  if (s.size() != model.num_spins()) {
    fail(ErrorKind::dimension,
         "spin assignment has " + std::to_string(s.size()) +
             " entries, model has " + std::to_string(model.num_spins()) +
             " spins");
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != 1 && s[i] != -1) {
      fail(ErrorKind::invalid_input,
           "spin " + std::to_string(i) + " is " + std::to_string(int(s[i])) +
               ", expected -1 or +1");
    }
  }
  double total = model.offset();
  for (const auto& [i, c] : model.h()) total += c * s[i];
  for (const auto& [key, c] : model.j()) {
    total += c * s[key.first] * s[key.second];
  }
  return total;
}

IsingModel qubo_to_ising(const QuboModel& model) {
  IsingBuilder out(model.num_vars());
  // x = (1-s)/2: a*x -> a/2 - (a/2) s.
  for (const auto& [i, a] : model.linear()) {
    out.add_bias(i, -a / 2.0);
    out.add_offset(a / 2.0);
  }
  // b*x_i*x_j -> b/4 (1 - s_i - s_j + s_i s_j).
  for (const auto& [key, b] : model.quadratic()) {
    out.add_bias(key.first, -b / 4.0);
    out.add_bias(key.second, -b / 4.0);
    out.add_coupling(key.first, key.second, b / 4.0);
    out.add_offset(b / 4.0);
  }
  out.add_offset(model.offset());
  return out.build();
}

QuboModel ising_to_qubo(const IsingModel& model) {
  QuboBuilder out(model.num_spins());
  // s = 1 - 2x: h*s -> h - 2h*x.
  for (const auto& [i, h] : model.h()) {
    out.add_linear(i, -2.0 * h);
    out.add_offset(h);
  }
  // J*s_i*s_j -> J (1 - 2x_i - 2x_j + 4 x_i x_j).
  for (const auto& [key, j] : model.j()) {
    out.add_linear(key.first, -2.0 * j);
    out.add_linear(key.second, -2.0 * j);
    out.add_quadratic(key.first, key.second, 4.0 * j);
    out.add_offset(j);
  }
  out.add_offset(model.offset());
  return out.build();
}

SpinAssignment bits_to_spins(const Assignment& x) {
  SpinAssignment s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] ? -1 : 1;
  return s;
}

Assignment spins_to_bits(const SpinAssignment& s) {
  Assignment x(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) x[i] = (s[i] == -1) ? 1 : 0;
  return x;
}

std::uint64_t fingerprint(const QuboModel& model) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  hash = fnv1a_u64(hash, model.num_vars());
  hash = fnv1a_double(hash, model.offset());
  for (const auto& [i, c] : model.linear()) {
    hash = fnv1a_u64(hash, i);
    hash = fnv1a_double(hash, c);
  }
  for (const auto& [key, c] : model.quadratic()) {
    hash = fnv1a_u64(hash, key.first);
    hash = fnv1a_u64(hash, key.second);
    hash = fnv1a_double(hash, c);
  }
  return hash;
}

}  // namespace qmuse
