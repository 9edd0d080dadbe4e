#pragma once

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Dense>

#include "thurston/machine.hpp"

namespace thurston {

using Rational = boost::multiprecision::mpq_rational;
using RMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;

// Unoriented essential classes, sorted and distinct.
struct Multicurve {
  std::vector<ConjClass> curves;
  int size() const { return int(curves.size()); }
  int find(const ConjClass& c) const;
  bool operator==(const Multicurve&) const = default;
};

Multicurve make_multicurve(const SphereGroup& G, const std::vector<Word>& words);
std::string str(const SphereGroup& G, const Multicurve& C);

struct InvarianceReport {
  bool backward_closed = true, surjective = true;
  std::vector<std::string> offending;
  bool invariant() const { return backward_closed && surjective; }
};

InvarianceReport is_invariant(const Machine& B, const Multicurve& C);
Search<Multicurve> generate_invariant(const Machine& B, const Multicurve& seed, int bound);

RMatrix thurston_matrix(const Machine& B, const Multicurve& C);
bool spectral_ge_one(const RMatrix& T);
std::string print_matrix(const RMatrix& T, const std::vector<std::string>& labels);

struct CurveEdge {
  int from, to, degree;
  bool operator==(const CurveEdge&) const = default;
};

struct CurveGraph {
  Multicurve curves;
  std::vector<CurveEdge> edges;
};

CurveGraph curve_graph(const Machine& B, const Multicurve& C);

struct CurveClassification {
  std::vector<std::vector<int>> sccs;  // cycle-bearing components only
  std::vector<int> bicycles, unicycles, primitive;  // indices into sccs
  std::vector<std::vector<int>> levy_cycles;        // vertex sequences
  bool cantor = false, anti_cantor = false, levy = false, anti_levy = false;
  std::vector<int> cantor_part, levy_part;  // maximal sub-multicurves
};

CurveClassification classify_multicurve(const CurveGraph& g);

// Levy cycle found from the least essential seed of length <= bound.
Search<Multicurve> levy_search(const Machine& B, int bound, int closure_cap = 64);

}  // namespace thurston
