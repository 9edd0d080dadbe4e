#pragma once

#include "thurston/machine.hpp"

namespace thurston {

// Machine whose words are compared either exactly in its group, or, when
// `tree_equality` is set, by the action on the tree of basis words.
struct Nucleus {
  Machine machine;
  bool tree_equality = false;
  std::vector<Word> states;  // identity first, then shortlex
};

Search<Nucleus> nucleus(const Machine& B, int bound);

struct NucleusEdge {
  int from, to;
  int in, out;  // basis positions: in . from = to . out
};

struct NucleusMachine {
  std::vector<Word> vertices;
  std::vector<NucleusEdge> edges;
};

NucleusMachine nucleus_machine(const Nucleus& N);

// Re-reads B over the orbisphere group with the given orders (0 = infinite).
// All-finite profiles other than (2,2,2,2) keep the first generator of the
// relator free and fall back to tree equality.
Machine quotient_machine(const Machine& B, const std::vector<int>& orders, bool* tree_equality = nullptr);

Search<Nucleus> is_contracting(const Machine& B, const std::vector<int>& orders, int bound);

// Biset element h.s
struct BisetElement {
  Word h;
  int s = 0;
  bool operator==(const BisetElement&) const = default;
};

BisetElement right_mul(const Machine& B, const BisetElement& b, const Word& g);
// least l with l.b = c.l
Search<Word> conj_in_biset(const Machine& B, const BisetElement& b, const BisetElement& c, int bound);

struct PortraitOfBisets {
  std::vector<int> dyn;              // B_* on the index set
  std::vector<Word> group;           // generator of G_a (empty for extra points)
  std::vector<BisetElement> element;  // b_a with G_a b_a inside B_a
};

PortraitOfBisets minimal_portrait(const Machine& B);
PortraitOfBisets conjugate_portrait(const Machine& B, const PortraitOfBisets& P, const std::vector<Word>& ell);

// (l_a) with g_a = l_a^-1 g'_a l_a and l_a . b_a = b'_a . l_{B_*(a)}
Search<std::vector<Word>> portrait_conjugate(const Machine& B, const PortraitOfBisets& P,
                                             const PortraitOfBisets& Q, int bound);

}  // namespace thurston
