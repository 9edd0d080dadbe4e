#pragma once

#include <optional>

#include "thurston/machine.hpp"

namespace thurston {

// Certificate text, one item per line:
//   basis v.l1, v.l2, (u*w)^-1.l3          adapted basis (optional)
//   let r = v*y                             ambient abbreviation
//   sphere G1 <U, X, S | U*X*S> = u^w, x^(v^-1), s^-1
//   curve r = r
//   vertex B1 rho G1 lambda G2 basis l1, l2, l3      lambda: sphere, curve or 1
//   edge E1 B1 B2 at l1 curve r degree 1 lift r twist 1, r^-1
struct SphereVertex {
  std::string name;
  SphereGroup group;
  std::vector<Word> images;  // in the ambient group, one per generator
};

struct CurveVertex {
  std::string name;
  Word word;
};

struct SphereTree {
  SphereGroup ambient;
  std::vector<SphereVertex> spheres;
  std::vector<CurveVertex> curves;
  int sphere(const std::string& name) const;
  int curve(const std::string& name) const;
};

struct CertVertex {
  std::string name, rho, lambda;
  std::vector<std::string> basis;
};

struct CertEdge {
  std::string name, a, b, at, curve;
  int degree = 1;
  Word lift, twist_a, twist_b;
};

struct Certificate {
  std::vector<std::string> basis;
  std::map<std::string, Word> aliases;
  SphereTree tree;
  std::vector<CertVertex> vertices;
  std::vector<CertEdge> edges;
};

Certificate parse_certificate(const Machine& B, std::string_view text);

struct DecompositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class VertexKind { essential, annular, trivial };
std::string str(VertexKind k);

struct TreeVertex {
  std::string name;
  int rho = -1;
  int lambda_sphere = -1, lambda_curve = -1;  // both -1: trivial target
  BasisChange items;                          // prefix . adapted label
  std::vector<Wreath> ambient;                // per rho generator; to = item index
  std::optional<Machine> machine;             // when lambda is a sphere
  VertexKind kind = VertexKind::essential;
};

struct TreeOfBisets {
  Machine adapted;
  std::map<std::string, Word> aliases;
  SphereTree tree;
  std::vector<TreeVertex> vertices;
  std::vector<CertEdge> edges;
  int vertex(const std::string& name) const;
};

TreeOfBisets decompose(const Machine& B, const Certificate& cert);

struct TreeCheck {
  std::string name;
  bool ok = true;
  std::vector<std::string> failures;
};
std::vector<TreeCheck> verify_tree(const TreeOfBisets& T);

struct ReturnBiset {
  std::vector<int> cycle;  // tree vertices in tensor order
  Machine machine;
};
std::vector<ReturnBiset> return_bisets(const TreeOfBisets& T);

// Ambient wreath recursion of a vertex on an ambient word of its rho group.
Wreath vertex_recursion(const TreeOfBisets& T, int v, const Word& g);
std::string print_tree(const TreeOfBisets& T);

}  // namespace thurston
