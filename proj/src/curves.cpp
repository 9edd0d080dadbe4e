#include "thurston/curves.hpp"
#include "thurston/scc.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace thurston {

namespace {

bool curve_less(const ConjClass& a, const ConjClass& b) {
  int la = cyclic_length(a), lb = cyclic_length(b);
  if (la != lb) return la < lb;
  return a.form < b.form;
}

void normalize(Multicurve& C) {
  std::sort(C.curves.begin(), C.curves.end(), curve_less);
  C.curves.erase(std::unique(C.curves.begin(), C.curves.end()), C.curves.end());
}

std::vector<Lift> essential_lifts(const Machine& B, const ConjClass& c) {
  std::vector<Lift> out;
  for (auto& l : lifts(B, c.form, false))
    if (classify_class(B.left, l.cls).kind == ClassKind::essential) out.push_back(l);
  return out;
}

// Shortest cycle through v inside comp.
std::vector<int> cycle_through(int v, const std::vector<int>& comp,
                               const std::vector<std::vector<int>>& adj) {
  std::set<int> in(comp.begin(), comp.end());
  std::map<int, int> parent;
  std::deque<int> q{v};
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (int y : adj[x]) {
      if (!in.count(y)) continue;
      if (y == v) {
        std::vector<int> cyc{x};
        while (cyc.back() != v) cyc.push_back(parent[cyc.back()]);
        std::reverse(cyc.begin(), cyc.end());
        return cyc;
      }
      if (!parent.count(y)) {
        parent[y] = x;
        q.push_back(y);
      }
    }
  }
  return {};
}

std::vector<int> reach(int n, const std::vector<std::vector<int>>& adj, const std::vector<int>& from) {
  std::vector<char> seen(n, 0);
  std::deque<int> q;
  for (int v : from)
    if (!seen[v]) { seen[v] = 1; q.push_back(v); }
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (int y : adj[x])
      if (!seen[y]) { seen[y] = 1; q.push_back(y); }
  }
  std::vector<int> out;
  for (int v = 0; v < n; ++v)
    if (seen[v]) out.push_back(v);
  return out;
}

}  // namespace

int Multicurve::find(const ConjClass& c) const {
  for (int i = 0; i < size(); ++i)
    if (curves[i] == c) return i;
  return -1;
}

Multicurve make_multicurve(const SphereGroup& G, const std::vector<Word>& words) {
  Multicurve C;
  for (auto& w : words) {
    ConjClass c = conj_class(G, w, false);
    if (classify_class(G, c).kind != ClassKind::essential)
      throw std::invalid_argument("curve " + G.str(w) + " is not essential");
    C.curves.push_back(c);
  }
  normalize(C);
  return C;
}

std::string str(const SphereGroup& G, const Multicurve& C) {
  std::string r = "{";
  for (int i = 0; i < C.size(); ++i) r += (i ? ", " : "") + str(G, C.curves[i]);
  return r + "}";
}

InvarianceReport is_invariant(const Machine& B, const Multicurve& C) {
  InvarianceReport r;
  std::vector<char> hit(C.size(), 0);
  for (auto& c : C.curves)
    for (auto& l : essential_lifts(B, c)) {
      int j = C.find(l.cls);
      if (j < 0) {
        r.backward_closed = false;
        r.offending.push_back(str(B.left, l.cls) + " lifts " + str(B.right, c));
      } else {
        hit[j] = 1;
      }
    }
  for (int i = 0; i < C.size(); ++i)
    if (!hit[i]) {
      r.surjective = false;
      r.offending.push_back(str(B.left, C.curves[i]) + " is no lift");
    }
  return r;
}

Search<Multicurve> generate_invariant(const Machine& B, const Multicurve& seed, int bound) {
  Search<Multicurve> out;
  Multicurve C = seed;
  std::deque<ConjClass> q(seed.curves.begin(), seed.curves.end());
  std::set<ConjClass> have(seed.curves.begin(), seed.curves.end());
  while (!q.empty()) {
    ConjClass c = q.front();
    q.pop_front();
    for (auto& l : essential_lifts(B, c)) {
      if (have.count(l.cls)) continue;
      if (int(have.size()) >= bound) {
        out.status = Status::bound_exceeded;
        out.note = "more than " + std::to_string(bound) + " curves";
        return out;
      }
      have.insert(l.cls);
      C.curves.push_back(l.cls);
      q.push_back(l.cls);
    }
  }
  normalize(C);
  out.status = Status::found;
  out.value = C;
  return out;
}

RMatrix thurston_matrix(const Machine& B, const Multicurve& C) {
  int n = C.size();
  RMatrix T = RMatrix::Zero(n, n);
  for (int g = 0; g < n; ++g)
    for (auto& l : essential_lifts(B, C.curves[g])) {
      int e = C.find(l.cls);
      if (e < 0) throw std::invalid_argument("multicurve is not invariant: lift " + str(B.left, l.cls));
      T(e, g) += Rational(1, l.degree);
    }
  return T;
}

bool spectral_ge_one(const RMatrix& T) {
  int n = int(T.rows());
  if (n == 0) return false;
  RMatrix A = RMatrix::Identity(n, n) - T;
  Eigen::FullPivLU<RMatrix> lu(A);
  if (!lu.isInvertible()) return true;
  RMatrix inv = lu.inverse();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (inv(i, j) < 0) return true;
  return false;
}

std::string print_matrix(const RMatrix& T, const std::vector<std::string>& labels) {
  std::ostringstream o;
  for (size_t i = 0; i < labels.size(); ++i) o << (i ? " " : "") << labels[i];
  o << "\n";
  for (int i = 0; i < T.rows(); ++i) {
    for (int j = 0; j < T.cols(); ++j) o << (j ? " " : "") << T(i, j).str();
    o << "\n";
  }
  return o.str();
}

CurveGraph curve_graph(const Machine& B, const Multicurve& C) {
  CurveGraph g{C, {}};
  for (int i = 0; i < C.size(); ++i)
    for (auto& l : essential_lifts(B, C.curves[i])) {
      int j = C.find(l.cls);
      if (j < 0) throw std::invalid_argument("multicurve is not invariant: lift " + str(B.left, l.cls));
      g.edges.push_back({i, j, l.degree});
    }
  return g;
}

CurveClassification classify_multicurve(const CurveGraph& g) {
  CurveClassification r;
  int n = g.curves.size();
  std::vector<std::vector<int>> adj(n), adj1(n);
  for (auto& e : g.edges) {
    adj[e.from].push_back(e.to);
    if (e.degree == 1) adj1[e.from].push_back(e.to);
  }
  auto comps = scc(n, adj);
  std::reverse(comps.begin(), comps.end());
  std::sort(comps.begin(), comps.end());
  std::vector<int> comp_of(n, -1);
  for (auto& c : comps)
    if (has_cycle(c, adj)) {
      for (int v : c) comp_of[v] = int(r.sccs.size());
      r.sccs.push_back(c);
    }
  for (int k = 0; k < int(r.sccs.size()); ++k) {
    bool uni = true, prim = true;
    for (int v : r.sccs[k]) {
      int inside = 0;
      for (int w : adj[v]) inside += comp_of[w] == k;
      if (inside != 1) uni = false;
    }
    for (auto& e : g.edges)
      if (comp_of[e.to] == k && comp_of[e.from] != k) prim = false;
    (uni ? r.unicycles : r.bicycles).push_back(k);
    if (prim) r.primitive.push_back(k);
  }
  auto comps1 = scc(n, adj1);
  std::sort(comps1.begin(), comps1.end());
  std::vector<int> levy_vertices;
  for (auto& c : comps1)
    if (has_cycle(c, adj1)) {
      r.levy_cycles.push_back(cycle_through(c[0], c, adj1));
      for (int v : r.levy_cycles.back()) levy_vertices.push_back(v);
    }
  std::vector<int> bi_vertices;
  for (int k : r.bicycles)
    for (int v : r.sccs[k]) bi_vertices.push_back(v);
  r.cantor_part = reach(n, adj, bi_vertices);
  r.levy_part = reach(n, adj, levy_vertices);
  r.anti_cantor = r.bicycles.empty();
  r.cantor = !r.anti_cantor && int(r.cantor_part.size()) == n;
  r.anti_levy = r.levy_cycles.empty();
  r.levy = !r.anti_levy && int(r.levy_part.size()) == n;
  return r;
}

Search<Multicurve> levy_search(const Machine& B, int bound, int closure_cap) {
  Search<Multicurve> out;
  const SphereGroup& G = B.right;
  std::vector<ConjClass> seeds;
  for (auto& w : enumerate_words(G, bound)) {
    ConjClass c = conj_class(G, w, false);
    if (classify_class(G, c).kind == ClassKind::essential) seeds.push_back(c);
  }
  std::sort(seeds.begin(), seeds.end(), curve_less);
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  int capped = 0;
  for (auto& s : seeds) {
    auto closure = generate_invariant(B, Multicurve{{s}}, closure_cap);
    if (!closure) {
      ++capped;
      continue;
    }
    CurveGraph g = curve_graph(B, *closure.value);
    auto cls = classify_multicurve(g);
    if (cls.levy_cycles.empty()) continue;
    Multicurve L;
    for (int v : cls.levy_cycles[0]) L.curves.push_back(closure.value->curves[v]);
    normalize(L);
    out.status = Status::found;
    out.value = L;
    return out;
  }
  out.status = Status::bound_exceeded;
  out.note = "no Levy cycle from " + std::to_string(seeds.size()) + " seeds of length <= " +
             std::to_string(bound);
  if (capped) out.note += " (" + std::to_string(capped) + " closures exceeded " + std::to_string(closure_cap) + ")";
  return out;
}

}  // namespace thurston
