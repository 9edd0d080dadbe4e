#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thurston/group.hpp"

namespace thurston {

// s_i . g = h . s_to
struct Entry {
  Word h;
  int to = 0;
  bool operator==(const Entry&) const = default;
};

using Wreath = std::vector<Entry>;

// Left-free H-G biset given by a wreath recursion on the generators of G.
struct Machine {
  SphereGroup left, right;
  std::vector<std::string> basis;
  std::vector<Wreath> trans;  // one per generator of `right`, eliminated included

  int degree() const { return int(basis.size()); }
  bool operator==(const Machine& o) const {
    return left == o.left && right == o.right && trans == o.trans;
  }
};

std::vector<std::string> default_basis(int d);

// Normalizes the entries; checks sizes and permutation targets.
Machine make_machine(SphereGroup left, SphereGroup right, std::vector<std::string> basis,
                     std::vector<Wreath> trans);
// Recomputes the eliminated generator's transition from the others.
void fill_eliminated(Machine& m);

Wreath wreath_mul(const SphereGroup& H, const Wreath& x, const Wreath& y);
Wreath wreath_inv(const SphereGroup& H, const Wreath& x);
Wreath wreath_one(int d);
bool is_identity(const Wreath& x);
std::vector<int> perm_of(const Wreath& x);

// Product of the generator transitions along a formal word.
Wreath wreath(const Machine& m, const Word& g);
std::pair<Word, int> act(const Machine& m, int s, const Word& g);
int basis_index(const Machine& m, const std::string& label);

struct Lift {
  int degree = 1;
  ConjClass cls;
  Word rep;               // cycle product h_s h_pi(s) ...
  std::vector<int> cycle;  // basis positions in orbit order
};

std::vector<Lift> lifts(const Machine& m, const Word& g, bool oriented);
std::vector<Lift> lifts(const Machine& m, const ConjClass& c);

struct PortraitEntry {
  int target = -1;  // generator of the right group
  int degree = 0;
  bool operator==(const PortraitEntry&) const = default;
};
using Portrait = std::vector<PortraitEntry>;  // indexed by left generator

struct CheckReport {
  bool relator = false, orders = false, transitive = false, rh = false, lifts = false;
  int rh_sum = 0;
  std::vector<std::string> failures;
  Portrait portrait;
  bool ok() const { return failures.empty(); }
};

CheckReport check_sphere_biset(const Machine& m);
Portrait portrait(const Machine& m);  // throws std::runtime_error on failure

Machine tensor(const Machine& b, const Machine& c);
Machine tensor(std::initializer_list<Machine> ms);

// New label i is prefix_i . old label (old index).
using BasisChange = std::vector<std::pair<Word, int>>;
Machine change_basis(const Machine& m, const BasisChange& nb);
BasisChange parse_basis_change(const Machine& m, const std::vector<std::string>& items);

// Degree-1 machine with g = <phi(g)>, as for a Dehn twist.
Machine auto_machine(const GroupMap& phi);
Machine identity_machine(const SphereGroup& G);
Machine twist(const Machine& m, const std::optional<GroupMap>& pre,
              const std::optional<GroupMap>& post);

// Identifies the generators of m's groups with those of H/G by relator position.
Machine relabel(const Machine& m, const SphereGroup& H, const SphereGroup& G);

struct IsoWitness {
  BasisChange basis;
};
bool iso_verify(const Machine& b, const Machine& c, const IsoWitness& w);
Search<IsoWitness> iso_search(const Machine& b, const Machine& c, int bound);

// Entry per generator of the (common) group; 0 encodes infinity.
std::vector<int> ord_min(const Machine& m);

std::vector<int> tree_action(const Machine& m, const Word& g, int level);

std::string str(const Machine& m, const Wreath& w);

}  // namespace thurston
