#include <doctest.h>

#include <random>

#include <Eigen/LU>

#include "thurston/constructors.hpp"
#include "thurston/lattes.hpp"

using namespace thurston;

namespace {

long det(const Mat2& M) { return M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0); }

Mat2 mat(long a, long b, long c, long d) {
  Mat2 M;
  M << a, b, c, d;
  return M;
}

}  // namespace

TEST_CASE("K element arithmetic matches the 2222 normal form") {
  auto G = group_2222();
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> gen(0, G.rank() - 1);
  for (int it = 0; it < 200; ++it) {
    Word a, b;
    for (int i = 0; i < 6; ++i) a = G.mul(a, G.gen(gen(rng)));
    for (int i = 0; i < 6; ++i) b = G.mul(b, G.gen(gen(rng)));
    CHECK(k_value(G, G.mul(a, b)) == kmul(k_value(G, a), k_value(G, b)));
    CHECK(G.normal_form(k_word(G, k_value(G, a))) == G.normal_form(a));
  }
}

TEST_CASE("build and extract round trip") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> U(-5, 5), B(0, 1);
  int done = 0;
  while (done < 100) {
    Mat2 M = mat(U(rng), U(rng), U(rng), U(rng));
    if (det(M) <= 0 || det(M) > 30) continue;
    ++done;
    AffinePair P{M, Vec2(B(rng), B(rng))};
    auto m = build_Bmv(P);
    CAPTURE(str(M));
    REQUIRE(check_sphere_biset(m).ok());
    CHECK(m.degree() == det(M));
    auto e = extract_Mv(m);
    CHECK(e.verified);
    CHECK(iso_2222(e.pair, P));
  }
}

TEST_CASE("tensor products compose affine maps") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> U(-4, 4), B(0, 1);
  int done = 0;
  while (done < 25) {
    Mat2 M = mat(U(rng), U(rng), U(rng), U(rng)), N = mat(U(rng), U(rng), U(rng), U(rng));
    if (det(M) <= 0 || det(N) <= 0 || det(M) * det(N) > 30) continue;
    ++done;
    Vec2 v(B(rng), B(rng)), w(B(rng), B(rng));
    auto e = extract_Mv(tensor(build_Bmv({M, v}), build_Bmv({N, w})));
    CHECK(iso_2222(e.pair, {N * M, N * v + w}));
  }
}

TEST_CASE("torus32 fixture") {
  auto e = extract_Mv(fixture("torus32").machine);
  CHECK(e.verified);
  CHECK(e.pair.M == mat(3, 0, 0, 2));
  CHECK(e.pair.v == Vec2(0, 0));
  CHECK(is_geometric(e.pair.M));
}

TEST_CASE("geometric and exceptional matrices") {
  CHECK(is_geometric(mat(2, 0, 0, 2)));
  CHECK(is_geometric(mat(1, 1, -1, 1)));
  CHECK_FALSE(is_geometric(mat(1, 1, 0, 2)));
  CHECK_FALSE(is_geometric(mat(2, 1, 0, 1)));
  CHECK_FALSE(is_geometric(mat(-1, 0, 0, 3)));
}

TEST_CASE("iso_2222 identifies -M and rejects other classes") {
  Mat2 M = mat(2, 1, 1, 1);
  CHECK(iso_2222({M, Vec2(0, 0)}, {Mat2(-M), Vec2(0, 0)}));
  CHECK_FALSE(iso_2222({M, Vec2(0, 0)}, {mat(3, 0, 0, 1), Vec2(0, 0)}));
  CHECK(iso_2222({M, Vec2(1, 1)}, {Mat2(-M), Vec2(1, 1)}));
  CHECK_FALSE(iso_2222({M, Vec2(1, 0)}, {M, Vec2(0, 1)}));
  CHECK(iso_2222({M, Vec2(1, 0)}, {M, Vec2(3, -2)}));
}

TEST_CASE("SL2 conjugacy search") {
  Mat2 M = mat(2, 1, 1, 1);
  Mat2 X = mat(2, 1, 1, 1) * mat(0, -1, 1, 0);
  Mat2 Xi = mat(X(1, 1), -X(0, 1), -X(1, 0), X(0, 0));
  Mat2 N = X * M * Xi;
  auto s = sl2_conj_search(M, N, 6);
  REQUIRE(s);
  CHECK(*s.value * M * mat((*s.value)(1, 1), -(*s.value)(0, 1), -(*s.value)(1, 0), (*s.value)(0, 0)) == N);
  CHECK(sl2_conj_search(M, mat(3, 0, 0, 1), 4).status == Status::none);
}

TEST_CASE("matrix and vector parsing") {
  CHECK(parse_mat2("[[3,0],[0,2]]") == mat(3, 0, 0, 2));
  CHECK(parse_vec2("[1,0]") == Vec2(1, 0));
  CHECK(parse_mat2(str(mat(-1, 2, 3, 4))) == mat(-1, 2, 3, 4));
  CHECK_THROWS(parse_mat2("[[1,2],[3]]"));
}
