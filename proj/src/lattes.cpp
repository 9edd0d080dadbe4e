#include "thurston/lattes.hpp"

#include <deque>
#include <map>
#include <regex>

namespace thurston {

namespace {

const long kSlot[4][2] = {{0, 1}, {1, 1}, {1, 0}, {0, 0}};

Mat2 adj(const Mat2& M) {
  Mat2 A;
  A << M(1, 1), -M(0, 1), -M(1, 0), M(0, 0);
  return A;
}

long det(const Mat2& M) { return M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0); }

long mod(long a, long m) { return ((a % m) + m) % m; }

bool in_lattice(const Mat2& M, const Vec2& u) {
  long D = det(M);
  Vec2 w = adj(M) * u;
  return mod(w(0), D) == 0 && mod(w(1), D) == 0;
}

Vec2 solve(const Mat2& M, const Vec2& u) { return adj(M) * u / det(M); }

void require_2222(const SphereGroup& G) {
  if (!G.is_2222()) throw std::invalid_argument("group is not of (2,2,2,2) type");
}

std::vector<long> parse_ints(std::string_view s) {
  std::vector<long> out;
  std::string t(s);
  static const std::regex num("-?[0-9]+");
  for (auto it = std::sregex_iterator(t.begin(), t.end(), num); it != std::sregex_iterator(); ++it)
    out.push_back(std::stol(it->str()));
  std::string rest = std::regex_replace(t, num, "");
  for (char c : rest)
    if (!std::isspace((unsigned char)c) && c != '[' && c != ']' && c != ',')
      throw std::invalid_argument("bad integer list '" + t + "'");
  return out;
}

}  // namespace

KElement kmul(const KElement& a, const KElement& b) { return {a.n + a.sign * b.n, a.sign * b.sign}; }

KElement k_value(const SphereGroup& G, const Word& w) {
  require_2222(G);
  KElement acc;
  for (auto& s : w) {
    if (s.exp % 2 == 0) continue;
    int i = int(std::find(G.relator().begin(), G.relator().end(), s.gen) - G.relator().begin());
    acc = kmul(acc, {Vec2(kSlot[i][0], kSlot[i][1]), -1});
  }
  return acc;
}

Word k_word(const SphereGroup& G, const KElement& k) {
  require_2222(G);
  const auto& r = G.relator();
  Word f;
  int x1 = r[0], x3 = r[2], x4 = r[3];
  for (long i = 0; i < std::labs(k.n(0)); ++i) {
    if (k.n(0) > 0) { f.push_back({x3, 1}); f.push_back({x4, 1}); }
    else { f.push_back({x4, 1}); f.push_back({x3, 1}); }
  }
  for (long i = 0; i < std::labs(k.n(1)); ++i) {
    if (k.n(1) > 0) { f.push_back({x1, 1}); f.push_back({x4, 1}); }
    else { f.push_back({x4, 1}); f.push_back({x1, 1}); }
  }
  if (k.sign < 0) f.push_back({x4, 1});
  return G.normal_form(f);
}

SphereGroup group_2222() { return SphereGroup({"a", "b", "c", "d"}, {2, 2, 2, 2}, {3, 2, 1, 0}); }

Machine build_Bmv(const AffinePair& P, const SphereGroup& G) {
  require_2222(G);
  const Mat2& M = P.M;
  long D = det(M);
  if (D <= 0) throw std::invalid_argument("det(M) must be positive");
  std::vector<Vec2> reps;
  for (long x = 0; x < D && long(reps.size()) < D; ++x)
    for (long y = 0; y < D && long(reps.size()) < D; ++y) {
      Vec2 r(x, y);
      bool fresh = true;
      for (auto& q : reps) fresh &= !in_lattice(M, r - q);
      if (fresh) reps.push_back(r);
    }
  auto find_rep = [&](const Vec2& u) {
    for (int j = 0; j < int(reps.size()); ++j)
      if (in_lattice(M, u - reps[j])) return j;
    throw std::logic_error("coset representative missing");
  };
  std::vector<Wreath> trans(G.rank(), Wreath(D));
  for (int g = 0; g < G.rank(); ++g) {
    KElement k = k_value(G, G.gen(g));
    for (int i = 0; i < D; ++i) {
      Vec2 ri = reps[i];
      int j;
      KElement h;
      if (k.sign > 0) {
        j = find_rep(ri + k.n);
        h = {solve(M, ri + k.n - reps[j]), 1};
      } else {
        j = find_rep(P.v - ri - k.n);
        h = {solve(M, ri + k.n + reps[j] - P.v), -1};
      }
      trans[g][i] = {k_word(G, h), j};
    }
  }
  std::vector<std::string> basis;
  for (auto& r : reps) basis.push_back("(" + std::to_string(r(0)) + "," + std::to_string(r(1)) + ")");
  return make_machine(G, G, basis, trans);
}

Extraction extract_Mv(const Machine& B, int iso_bound) {
  const SphereGroup& G = B.right;
  require_2222(G);
  if (!(B.left == G)) throw std::invalid_argument("extract needs a self-biset");
  long d = B.degree();
  Mat2 A;
  for (int c = 0; c < 2; ++c) {
    KElement m{Vec2::Zero(), 1};
    m.n(c) = d;
    auto [h, t] = act(B, 0, k_word(G, m));
    KElement hk = k_value(G, h);
    if (t != 0 || hk.sign != 1) throw std::runtime_error("biset is not of affine torus type");
    A.col(c) = hk.n;
  }
  Extraction ex;
  ex.pair.M = adj(A);
  if (det(ex.pair.M) != d) throw std::runtime_error("biset is not of affine torus type");
  Portrait p = portrait(B);
  int x4 = G.relator()[3];
  KElement tv = k_value(G, G.gen(p[x4].target));
  ex.pair.v = Vec2(mod(tv.n(0), 2), mod(tv.n(1), 2));
  Machine rebuilt = build_Bmv(ex.pair, G);
  ex.verified = bool(iso_search(rebuilt, B, iso_bound));
  return ex;
}

std::array<int, 4> class_map(const AffinePair& P) {
  std::array<int, 4> out{};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      Vec2 w = P.M * Vec2(x, y) + P.v;
      out[2 * x + y] = int(2 * mod(w(0), 2) + mod(w(1), 2));
    }
  return out;
}

bool iso_2222(const AffinePair& P, const AffinePair& Q) {
  if (P.M != Q.M && P.M != -Q.M) return false;
  return class_map(P) == class_map(Q);
}

bool is_geometric(const Mat2& M) {
  long tr = M.trace(), D = det(M);
  return 1 - tr + D != 0 && 1 + tr + D != 0;
}

Search<Mat2> sl2_conj_search(const Mat2& M, const Mat2& N, int bound) {
  Search<Mat2> out;
  if (M.trace() != N.trace() || det(M) != det(N)) {
    out.note = "trace or determinant differ";
    return out;
  }
  Mat2 S, T;
  S << 0, -1, 1, 0;
  T << 1, 1, 0, 1;
  const Mat2 gens[4] = {S, adj(S), T, adj(T)};
  auto key = [](const Mat2& X) { return std::array<long, 4>{X(0, 0), X(0, 1), X(1, 0), X(1, 1)}; };
  std::map<std::array<long, 4>, int> seen;
  std::deque<std::pair<Mat2, int>> q{{Mat2::Identity(), 0}};
  seen[key(Mat2::Identity())] = 0;
  while (!q.empty()) {
    auto [X, len] = q.front();
    q.pop_front();
    if (X * M * adj(X) == N) {
      out.status = Status::found;
      out.value = X;
      return out;
    }
    if (len == bound) continue;
    for (auto& g : gens) {
      Mat2 Y = X * g;
      if (seen.emplace(key(Y), len + 1).second) q.push_back({Y, len + 1});
    }
  }
  out.status = Status::bound_exceeded;
  out.note = "no conjugator of word length <= " + std::to_string(bound);
  return out;
}

std::string str(const Mat2& M) {
  return "[[" + std::to_string(M(0, 0)) + "," + std::to_string(M(0, 1)) + "],[" + std::to_string(M(1, 0)) +
         "," + std::to_string(M(1, 1)) + "]]";
}

std::string str(const Vec2& v) { return "[" + std::to_string(v(0)) + "," + std::to_string(v(1)) + "]"; }

Mat2 parse_mat2(std::string_view s) {
  auto v = parse_ints(s);
  if (v.size() != 4) throw std::invalid_argument("matrix needs 4 integers");
  Mat2 M;
  M << v[0], v[1], v[2], v[3];
  return M;
}

Vec2 parse_vec2(std::string_view s) {
  auto v = parse_ints(s);
  if (v.size() != 2) throw std::invalid_argument("vector needs 2 integers");
  return Vec2(v[0], v[1]);
}

}  // namespace thurston
