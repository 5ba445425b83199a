// nfa.hh -- internal NFA plumbing (subset construction); not part of the API
#pragma once

#include <vector>

#include "hier/dfa.hh"

namespace hier {

struct Nfa {
  Alphabet alphabet;
  int n = 0;
  // edges[q][a] = successor list
  std::vector<std::vector<std::vector<int>>> edges;
  std::vector<int> inits;
  std::vector<std::uint8_t> acc;

  explicit Nfa(const Alphabet& a, int states)
      : alphabet(a), n(states),
        edges(states, std::vector<std::vector<int>>(static_cast<size_t>(a.size()))),
        acc(static_cast<size_t>(states), 0) {}

  void add_edge(int from, int letter_idx, int to) {
    edges[static_cast<size_t>(from)][static_cast<size_t>(letter_idx)].push_back(to);
  }
};

// Subset construction followed by canonicalization.
Dfa determinize(const Nfa& nfa);

}  // namespace hier
