#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "thurston/curves.hpp"
#include "thurston/machine.hpp"

namespace thurston::testing {

inline Machine random_machine(std::mt19937& rng) {
  int n = 3 + int(rng() % 3), d = 1 + int(rng() % 4);
  std::vector<std::string> names;
  std::vector<int> orders, rel;
  for (int i = 0; i < n; ++i) {
    names.push_back(std::string(1, char('a' + i)) + (rng() % 4 == 0 ? "_" + std::to_string(i) : ""));
    orders.push_back(rng() % 3 == 0 ? 2 + int(rng() % 3) : kInf);
    rel.push_back(i);
  }
  std::shuffle(rel.begin(), rel.end(), rng);
  orders[rel[0]] = kInf;
  SphereGroup G(names, orders, rel);
  std::vector<Wreath> trans;
  for (int g = 0; g < n; ++g) {
    std::vector<int> p(d);
    for (int i = 0; i < d; ++i) p[i] = i;
    std::shuffle(p.begin(), p.end(), rng);
    Wreath w(d);
    for (int i = 0; i < d; ++i) {
      Word h;
      for (int k = int(rng() % 4); k > 0; --k) h.push_back({int(rng() % n), rng() % 2 ? 1 : -2});
      w[i] = {G.normal_form(h), p[i]};
    }
    trans.push_back(w);
  }
  std::vector<std::string> basis = default_basis(d);
  if (rng() % 3 == 0)
    for (int i = 0; i < d; ++i) basis[i] = "x" + std::to_string(d - i);
  return make_machine(G, G, basis, trans);
}

inline RMatrix random_nonneg(std::mt19937& rng) {
  int n = 2 + int(rng() % 4);
  RMatrix T(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      int num = rng() % 3 == 0 ? 0 : int(rng() % 4);
      T(r, c) = Rational(num, 1 + int(rng() % 6));
    }
  return T;
}

// Power iteration on T + I: Collatz-Wielandt bounds, then the norm ratio
// for reducible matrices; 0 when within the margin of rho(T) = 1.
inline int float_oracle(const RMatrix& T) {
  int n = int(T.rows());
  std::vector<double> A(n * n), x(n, 1.0), y(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) A[i * n + k] = T(i, k).convert_to<double>() + (i == k ? 1.0 : 0.0);
  double ratio = 0;
  for (int it = 0; it < 20000; ++it) {
    double lo = INFINITY, hi = 0, norm = 0, old = 0;
    for (double v : x) old = std::max(old, v);
    for (int i = 0; i < n; ++i) {
      y[i] = 0;
      for (int k = 0; k < n; ++k) y[i] += A[i * n + k] * x[k];
      lo = std::min(lo, y[i] / x[i]);
      hi = std::max(hi, y[i] / x[i]);
      norm = std::max(norm, y[i]);
    }
    if (lo > 2 + 1e-9) return 1;
    if (hi < 2 - 1e-9) return -1;
    ratio = norm / old;
    for (int i = 0; i < n; ++i) x[i] = y[i] / norm + 1e-300;
  }
  if (std::abs(ratio - 2) < 1e-9) return 0;
  return ratio > 2 ? 1 : -1;
}

}  // namespace thurston::testing
