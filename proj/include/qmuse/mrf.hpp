#pragma once
/// @file
/// @brief Markov chains over labeled states and binary pairwise Markov
/// networks with clique potentials, convertible to QUBO form.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qmuse/qubo.hpp"

namespace qmuse {

/// Row-stochastic transition matrix over an ordered state list.
struct TransitionMatrix {
  std::vector<std::string> states;
  std::vector<std::vector<double>> probs;  // probs[from][to]

  std::size_t index_of(const std::string& state) const;
  double at(const std::string& from, const std::string& to) const;
};

/// Potential table for one binary pair: value(a,b) for a,b in {0,1}.
struct PairPotential {
  double v00 = 0.0;
  double v01 = 0.0;
  double v10 = 0.0;
  double v11 = 0.0;

  double at(int a, int b) const;
};

/// Binary Markov network: labeled nodes with optional unary potentials
/// (phi0, phi1) and pairwise potentials on edges (stored with i < j).
class MarkovNetwork {
 public:
  VarId add_node(std::string label);
  void set_unary(VarId node, double phi0, double phi1);
  void set_edge(VarId i, VarId j, PairPotential potential);

  std::size_t num_nodes() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::map<VarId, std::pair<double, double>>& unary() const {
    return unary_;
  }
  const std::map<std::pair<VarId, VarId>, PairPotential>& edges() const {
    return edges_;
  }

  /// Sum of all clique potentials at a configuration.
  double total_potential(const Assignment& x) const;

 private:
  std::vector<std::string> labels_;
  std::map<VarId, std::pair<double, double>> unary_;
  std::map<std::pair<VarId, VarId>, PairPotential> edges_;
};

/// Exact QUBO image of a pairwise network: the QUBO energy at every
/// configuration equals the summed potentials. Node labels carry over.
QuboModel mrf_to_qubo(const MarkovNetwork& net);

/// Empirical transition matrix from an observed state sequence,
/// probs[i][j] = count(i -> j) / count(i as source). States are listed in
/// first-appearance order; a state never observed as a source becomes
/// absorbing (self-loop probability 1) so rows always normalize.
TransitionMatrix transition_matrix(const std::vector<std::string>& seq);

/// Raw consecutive-pair counts, no normalization. Unobserved pairs are
/// absent (downstream treats them as weight 0).
std::map<std::pair<std::string, std::string>, std::int64_t> transition_counts(
    const std::vector<std::string>& seq);

}  // namespace qmuse
