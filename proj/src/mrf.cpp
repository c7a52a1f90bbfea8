#include "qmuse/mrf.hpp"

#include <algorithm>

namespace qmuse {

std::size_t TransitionMatrix::index_of(const std::string& state) const {
  auto it = std::find(states.begin(), states.end(), state);
  if (it == states.end()) {
    fail(ErrorKind::invalid_input, "unknown state '" + state + "'");
  }
  return static_cast<std::size_t>(it - states.begin());
}

double TransitionMatrix::at(const std::string& from,
                            const std::string& to) const {
  return probs[index_of(from)][index_of(to)];
}

double PairPotential::at(int a, int b) const {
  if (a) return b ? v11 : v10;
  return b ? v01 : v00;
}

VarId MarkovNetwork::add_node(std::string label) {
  labels_.push_back(std::move(label));
  return static_cast<VarId>(labels_.size() - 1);
}

void MarkovNetwork::set_unary(VarId node, double phi0, double phi1) {
  if (node >= labels_.size()) {
    fail(ErrorKind::invalid_input,
         "unary potential on undeclared node " + std::to_string(node));
  }
  unary_[node] = {phi0, phi1};
}

void MarkovNetwork::set_edge(VarId i, VarId j, PairPotential potential) {
  if (i >= labels_.size() || j >= labels_.size()) {
    fail(ErrorKind::invalid_input, "edge endpoint is not a declared node");
  }
  if (i == j) {
    fail(ErrorKind::invalid_input, "self-edges are not pairwise cliques");
  }
  if (i > j) {
    std::swap(i, j);
    std::swap(potential.v01, potential.v10);
  }
  edges_[{i, j}] = potential;
}

double MarkovNetwork::total_potential(const Assignment& x) const {
  if (x.size() != num_nodes()) {
    fail(ErrorKind::dimension, "configuration width does not match network");
  }
  double total = 0.0;
  for (const auto& [node, phi] : unary_) {
    total += x[node] ? phi.second : phi.first;
  }
  for (const auto& [key, p] : edges_) {
    total += p.at(x[key.first], x[key.second]);
  }
  return total;
}

QuboModel mrf_to_qubo(const MarkovNetwork& net) {
  QuboBuilder builder(net.num_nodes());
  for (std::size_t i = 0; i < net.num_nodes(); ++i) {
    builder.set_label(static_cast<VarId>(i), net.labels()[i]);
  }
  for (const auto& [node, phi] : net.unary()) {
    builder.add_linear(node, phi.second - phi.first);
    builder.add_offset(phi.first);
  }
  // (p10-p00) x_i + (p01-p00) x_j + (p11-p10-p01+p00) x_i x_j + p00
  for (const auto& [key, p] : net.edges()) {
    builder.add_linear(key.first, p.v10 - p.v00);
    builder.add_linear(key.second, p.v01 - p.v00);
    builder.add_quadratic(key.first, key.second, p.v11 - p.v10 - p.v01 + p.v00);
    builder.add_offset(p.v00);
  }
  return builder.build();
}

TransitionMatrix transition_matrix(const std::vector<std::string>& seq) {
  if (seq.size() < 2) {
    fail(ErrorKind::invalid_input,
         "need at least two observations to estimate transitions");
  }
  TransitionMatrix out;
  std::map<std::string, std::size_t> index;
  for (const auto& state : seq) {
    if (index.emplace(state, out.states.size()).second) {
      out.states.push_back(state);
    }
  }
  const std::size_t k = out.states.size();
  std::vector<std::vector<std::int64_t>> counts(
      k, std::vector<std::int64_t>(k, 0));
  for (std::size_t t = 0; t + 1 < seq.size(); ++t) {
    ++counts[index[seq[t]]][index[seq[t + 1]]];
  }
  out.probs.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    std::int64_t row_total = 0;
    for (std::int64_t c : counts[i]) row_total += c;
    if (row_total == 0) {
      out.probs[i][i] = 1.0;  // absorbing: observed only as a final target
      continue;
    }
    for (std::size_t j = 0; j < k; ++j) {
      out.probs[i][j] =
          static_cast<double>(counts[i][j]) / static_cast<double>(row_total);
    }
  }
  return out;
}

std::map<std::pair<std::string, std::string>, std::int64_t> transition_counts(
    const std::vector<std::string>& seq) {
  if (seq.size() < 2) {
    fail(ErrorKind::invalid_input,
         "need at least two observations to count transitions");
  }
  std::map<std::pair<std::string, std::string>, std::int64_t> counts;
  for (std::size_t t = 0; t + 1 < seq.size(); ++t) {
    ++counts[{seq[t], seq[t + 1]}];
  }
  return counts;
}

}  // namespace qmuse
