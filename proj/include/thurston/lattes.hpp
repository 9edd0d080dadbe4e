#pragma once

#include <array>

#include <Eigen/Core>

#include "thurston/machine.hpp"

namespace thurston {

using Mat2 = Eigen::Matrix<long, 2, 2>;
using Vec2 = Eigen::Matrix<long, 2, 1>;

// (n, sign) in Z^2 x| {+-1}
struct KElement {
  Vec2 n = Vec2::Zero();
  int sign = 1;
  bool operator==(const KElement& o) const { return n == o.n && sign == o.sign; }
};

KElement kmul(const KElement& a, const KElement& b);
// The (2,2,2,2) group's generators in relator order are
// ((0,1),-), ((1,1),-), ((1,0),-), ((0,0),-).
KElement k_value(const SphereGroup& G, const Word& w);
Word k_word(const SphereGroup& G, const KElement& k);

struct AffinePair {
  Mat2 M = Mat2::Identity();
  Vec2 v = Vec2::Zero();
};

SphereGroup group_2222();
Machine build_Bmv(const AffinePair& P, const SphereGroup& G = group_2222());

struct Extraction {
  AffinePair pair;
  bool verified = false;  // rebuilt machine found isomorphic
};
Extraction extract_Mv(const Machine& B, int iso_bound = 2);

// n -> Mn + v mod 2 on {0,1}^2, indexed by 2*n_x + n_y
std::array<int, 4> class_map(const AffinePair& P);
bool iso_2222(const AffinePair& P, const AffinePair& Q);
bool is_geometric(const Mat2& M);

Search<Mat2> sl2_conj_search(const Mat2& M, const Mat2& N, int bound);

std::string str(const Mat2& M);
std::string str(const Vec2& v);
Mat2 parse_mat2(std::string_view s);
Vec2 parse_vec2(std::string_view s);

}  // namespace thurston
