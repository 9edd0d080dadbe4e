#include "thurston/contraction.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "thurston/scc.hpp"

namespace thurston {

namespace {

// Element store with lazy state computation.
class Store {
 public:
  Store(const Machine& m, bool tree) : m_(m), tree_(tree) {}

  int get(const Word& w) {
    auto it = id_.find(w);
    if (it != id_.end()) return it->second;
    int found = -1;
    std::vector<int> sig;
    if (tree_) {
      sig = signature(w);
      for (int e : by_sig_[sig])
        if (trivial(m_.left.mul(w, m_.left.inv(elems_[e])))) { found = e; break; }
    }
    if (found < 0) {
      found = int(elems_.size());
      elems_.push_back(w);
      succ_.emplace_back();
      if (tree_) by_sig_[sig].push_back(found);
    }
    id_[w] = found;
    return found;
  }

  const std::vector<int>& states(int i) {
    if (succ_[i].empty()) {
      Wreath x = wreath(m_, elems_[i]);
      std::vector<int> s;
      for (auto& e : x) s.push_back(get(e.h));
      succ_[i] = s;
    }
    return succ_[i];
  }

  const Word& word(int i) const { return elems_[i]; }
  int size() const { return int(elems_.size()); }

  // Forward closure; false if it outgrows cap.
  bool closure(std::vector<int> from, int cap, int max_len, std::vector<int>& out) {
    std::set<int> seen(from.begin(), from.end());
    std::deque<int> q(seen.begin(), seen.end());
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int y : states(x))
        if (seen.insert(y).second) {
          if (int(seen.size()) > cap || word_length(elems_[y]) > max_len) return false;
          q.push_back(y);
        }
    }
    out.assign(seen.begin(), seen.end());
    return true;
  }

 private:
  const Machine& m_;
  bool tree_;
  std::map<Word, int> id_;
  std::vector<Word> elems_;
  std::vector<std::vector<int>> succ_;
  std::map<std::vector<int>, std::vector<int>> by_sig_;

  std::vector<int> signature(const Word& w) const {
    std::vector<int> s;
    for (int k = 1; k <= 2; ++k) {
      auto p = tree_action(m_, w, k);
      s.insert(s.end(), p.begin(), p.end());
    }
    return s;
  }

  bool trivial(const Word& k) const {
    int cap = std::max(32, 2 * word_length(k));
    std::set<Word> seen{k};
    std::deque<Word> q{k};
    while (!q.empty()) {
      Wreath x = wreath(m_, q.front());
      q.pop_front();
      for (int s = 0; s < int(x.size()); ++s) {
        if (x[s].to != s) return false;
        if (word_length(x[s].h) > cap) return false;
        if (seen.insert(x[s].h).second) {
          if (seen.size() > 4000) return false;
          q.push_back(x[s].h);
        }
      }
    }
    return true;
  }
};

// Elements reachable from a cycle of the state graph restricted to C.
std::vector<int> recurrent(Store& st, const std::vector<int>& C) {
  std::map<int, int> loc;
  for (int i = 0; i < int(C.size()); ++i) loc[C[i]] = i;
  int n = int(C.size());
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int y : st.states(C[i])) adj[i].push_back(loc.at(y));
  std::vector<char> mark(n, 0);
  std::deque<int> q;
  for (auto& comp : scc(n, adj))
    if (has_cycle(comp, adj))
      for (int v : comp) { mark[v] = 1; q.push_back(v); }
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (int y : adj[x])
      if (!mark[y]) { mark[y] = 1; q.push_back(y); }
  }
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (mark[i]) out.push_back(C[i]);
  return out;
}

bool shortlex(const Word& a, const Word& b) {
  int la = word_length(a), lb = word_length(b);
  if (la != lb) return la < lb;
  return a < b;
}

Search<Nucleus> run_nucleus(const Machine& m, bool tree, int bound) {
  Search<Nucleus> out;
  if (!(m.left == m.right)) throw std::invalid_argument("nucleus needs a self-biset");
  Store st(m, tree);
  const SphereGroup& G = m.left;
  int cap = 20 * bound;
  auto exceeded = [&](const std::vector<int>& ids) {
    Word w;
    for (int i : ids)
      if (word_length(st.word(i)) > word_length(w)) w = st.word(i);
    out.status = Status::bound_exceeded;
    std::string ws = G.str(w);
    if (ws.size() > 120) ws = ws.substr(0, 120) + "... (length " + std::to_string(word_length(w)) + ")";
    out.note = "growth witness " + ws;
    return out;
  };
  std::vector<int> base{st.get({})};
  for (int g = 0; g < G.rank(); ++g) {
    base.push_back(st.get(G.gen(g)));
    base.push_back(st.get(G.gen(g, -1)));
  }
  std::vector<int> S;
  if (!st.closure(base, cap, bound, S)) {
    std::vector<int> all(st.size());
    for (int i = 0; i < st.size(); ++i) all[i] = i;
    return exceeded(all);
  }
  std::vector<int> rs = recurrent(st, S);
  std::set<int> N(rs.begin(), rs.end()), C;
  auto absorb = [&](const std::vector<int>& from) {
    std::deque<int> q;
    for (int x : from)
      if (C.insert(x).second) q.push_back(x);
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      if (int(C.size()) > cap) return false;
      for (int y : st.states(x)) {
        if (word_length(st.word(y)) > bound) { C.insert(y); return false; }
        if (C.insert(y).second) q.push_back(y);
      }
    }
    return int(C.size()) <= cap;
  };
  std::vector<int> fresh(N.begin(), N.end());
  while (!fresh.empty()) {
    std::vector<int> X = fresh;
    for (int n : fresh)
      for (int s : S) X.push_back(st.get(G.mul(st.word(n), st.word(s))));
    if (!absorb(X)) return exceeded(std::vector<int>(C.begin(), C.end()));
    fresh.clear();
    for (int r : recurrent(st, std::vector<int>(C.begin(), C.end())))
      if (N.insert(r).second) fresh.push_back(r);
    if (int(N.size()) > bound) return exceeded(std::vector<int>(N.begin(), N.end()));
  }
  Nucleus nu{m, tree, {}};
  for (int i : N) nu.states.push_back(st.word(i));
  std::sort(nu.states.begin(), nu.states.end(), shortlex);
  out.status = Status::found;
  out.value = nu;
  return out;
}

}  // namespace

Search<Nucleus> nucleus(const Machine& B, int bound) { return run_nucleus(B, false, bound); }

NucleusMachine nucleus_machine(const Nucleus& N) {
  NucleusMachine nm{N.states, {}};
  const Machine& m = N.machine;
  auto index_of = [&](const Word& w) {
    for (int i = 0; i < int(N.states.size()); ++i)
      if (N.states[i] == w) return i;
    if (N.tree_equality) {
      for (int i = 0; i < int(N.states.size()); ++i) {
        Word k = m.left.mul(w, m.left.inv(N.states[i]));
        bool triv = true;
        for (int lv = 1; lv <= 4 && triv; ++lv) {
          auto p = tree_action(m, k, lv);
          for (int j = 0; j < int(p.size()); ++j) triv &= p[j] == j;
        }
        if (triv) return i;
      }
    }
    throw std::logic_error("nucleus not state-closed at " + m.left.str(w));
  };
  for (int i = 0; i < int(N.states.size()); ++i)
    for (int s = 0; s < m.degree(); ++s) {
      auto [h, t] = act(m, s, N.states[i]);
      nm.edges.push_back({i, index_of(h), s, t});
    }
  return nm;
}

Machine quotient_machine(const Machine& B, const std::vector<int>& orders, bool* tree_equality) {
  const SphereGroup& G = B.right;
  if (!(B.left == B.right)) throw std::invalid_argument("profile change needs a self-biset");
  if (int(orders.size()) != G.rank()) throw std::invalid_argument("profile length mismatch");
  std::vector<int> o = orders;
  bool tree = false;
  bool any_inf = std::count(o.begin(), o.end(), kInf) > 0;
  bool tor = G.rank() == 4 && std::count(o.begin(), o.end(), 2) == 4;
  if (!any_inf && !tor) {
    o[G.relator()[0]] = kInf;
    tree = true;
  }
  // order-1 classes are deleted from the presentation
  std::vector<int> keep, idx(G.rank(), -1);
  std::vector<std::string> names;
  std::vector<int> qo, rel;
  for (int g = 0; g < G.rank(); ++g)
    if (o[g] != 1) {
      idx[g] = int(keep.size());
      keep.push_back(g);
      names.push_back(G.name(g));
      qo.push_back(o[g]);
    }
  for (int g : G.relator())
    if (idx[g] >= 0) rel.push_back(idx[g]);
  SphereGroup Q(names, qo, rel);
  auto image = [&](const Word& w) {
    Word v;
    for (auto& sy : w)
      if (idx[sy.gen] >= 0) v.push_back({idx[sy.gen], sy.exp});
    return Q.normal_form(v);
  };
  Machine r{Q, Q, B.basis, {}};
  for (int g : keep) {
    Wreath x = B.trans[g];
    for (auto& e : x) e.h = image(e.h);
    r.trans.push_back(x);
  }
  if (tree_equality) *tree_equality = tree;
  return r;
}

Search<Nucleus> is_contracting(const Machine& B, const std::vector<int>& orders, int bound) {
  auto om = ord_min(B);
  for (int i = 0; i < B.right.rank(); ++i) {
    bool ok = orders[i] == kInf ? om[i] == kInf : (om[i] != kInf && orders[i] % om[i] == 0);
    if (!ok) throw std::invalid_argument("profile not bounded by ord_min at " + B.right.name(i));
  }
  bool tree = false;
  Machine q = quotient_machine(B, orders, &tree);
  return run_nucleus(q, tree, bound);
}

BisetElement right_mul(const Machine& B, const BisetElement& b, const Word& g) {
  auto [h, t] = act(B, b.s, g);
  return {B.left.mul(b.h, h), t};
}

Search<Word> conj_in_biset(const Machine& B, const BisetElement& b, const BisetElement& c, int bound) {
  Search<Word> out;
  const SphereGroup& G = B.left;
  for (auto& l : enumerate_words(G, bound)) {
    BisetElement lhs{G.mul(l, b.h), b.s};
    if (right_mul(B, c, l) == lhs) {
      out.status = Status::found;
      out.value = l;
      return out;
    }
  }
  out.status = Status::bound_exceeded;
  out.note = "no conjugator of length <= " + std::to_string(bound);
  return out;
}

PortraitOfBisets minimal_portrait(const Machine& B) {
  const SphereGroup& G = B.right;
  auto rep = check_sphere_biset(B);
  if (!rep.ok()) throw std::runtime_error("not a sphere biset: " + rep.failures.front());
  PortraitOfBisets P;
  int n = B.left.rank();
  P.dyn.assign(n, -1);
  P.group.assign(n, {});
  P.element.assign(n, {});
  for (int a = 0; a < n; ++a) {
    P.dyn[a] = rep.portrait[a].target;
    P.group[a] = B.left.gen(a);
  }
  // b_a = c.s where s.g^k = (c^-1 a c).s
  for (int g = 0; g < G.rank(); ++g)
    for (auto& l : lifts(B, G.gen(g), true)) {
      auto cl = classify_class(B.left, l.cls);
      if (cl.kind != ClassKind::peripheral || P.dyn[cl.gen] != g) continue;
      auto c = are_conjugate(B.left, B.left.gen(cl.gen), l.rep, true);
      if (!c) continue;
      P.element[cl.gen] = {*c, l.cycle[0]};
    }
  return P;
}

PortraitOfBisets conjugate_portrait(const Machine& B, const PortraitOfBisets& P, const std::vector<Word>& ell) {
  const SphereGroup& G = B.left;
  PortraitOfBisets Q = P;
  for (size_t a = 0; a < P.dyn.size(); ++a) {
    Q.group[a] = G.mul({ell[a], P.group[a], G.inv(ell[a])});
    BisetElement b = right_mul(B, P.element[a], G.inv(ell[P.dyn[a]]));
    Q.element[a] = {G.mul(ell[a], b.h), b.s};
  }
  return Q;
}

Search<std::vector<Word>> portrait_conjugate(const Machine& B, const PortraitOfBisets& P,
                                             const PortraitOfBisets& Q, int bound) {
  Search<std::vector<Word>> out;
  const SphereGroup& G = B.left;
  int n = int(P.dyn.size());
  if (P.dyn != Q.dyn) {
    out.note = "dynamics differ";
    return out;
  }
  auto words = enumerate_words(G, bound);
  auto group_ok = [&](int a, const Word& l) {
    return G.mul({G.inv(l), Q.group[a], l}) == P.group[a];
  };
  // l_{a*} with b'_a . l_{a*} = l_a . b_a
  auto forward = [&](int a, const Word& la) -> std::optional<Word> {
    BisetElement target{G.mul(la, P.element[a].h), P.element[a].s};
    for (auto& l : words)
      if (right_mul(B, Q.element[a], l) == target) return l;
    return std::nullopt;
  };
  std::vector<std::optional<Word>> ell(n);
  std::vector<char> periodic(n, 0);
  for (int a = 0; a < n; ++a) {
    int x = a;
    for (int k = 0; k < n; ++k) x = P.dyn[x];
    for (int k = 0; k < n; ++k, x = P.dyn[x]) periodic[x] = 1;
  }
  for (int a0 = 0; a0 < n; ++a0) {
    if (!periodic[a0] || ell[a0]) continue;
    std::vector<int> cyc{a0};
    for (int x = P.dyn[a0]; x != a0; x = P.dyn[x]) cyc.push_back(x);
    bool solved = false;
    for (auto& l0 : words) {
      if (!group_ok(a0, l0)) continue;
      std::vector<Word> ls{l0};
      bool ok = true;
      for (size_t i = 0; i < cyc.size() && ok; ++i) {
        auto nx = forward(cyc[i], ls.back());
        if (!nx) { ok = false; break; }
        if (i + 1 == cyc.size()) ok = *nx == l0;
        else if (!group_ok(cyc[i + 1], *nx)) ok = false;
        else ls.push_back(*nx);
      }
      if (!ok) continue;
      for (size_t i = 0; i < cyc.size(); ++i) ell[cyc[i]] = ls[i];
      solved = true;
      break;
    }
    if (!solved) {
      out.status = Status::bound_exceeded;
      out.note = "no conjugator of length <= " + std::to_string(bound) + " along the cycle of " + G.name(a0);
      return out;
    }
  }
  // preperiodic indices: l_a . (h.s) = b'_a . l_{a*}
  for (bool ch = true; ch;) {
    ch = false;
    for (int a = 0; a < n; ++a) {
      if (ell[a] || !ell[P.dyn[a]]) continue;
      BisetElement r = right_mul(B, Q.element[a], *ell[P.dyn[a]]);
      if (r.s != P.element[a].s) {
        out.note = "basis mismatch at " + G.name(a);
        return out;
      }
      Word la = G.mul(r.h, G.inv(P.element[a].h));
      if (!group_ok(a, la)) {
        out.note = "peripheral subgroup mismatch at " + G.name(a);
        return out;
      }
      ell[a] = la;
      ch = true;
    }
  }
  std::vector<Word> res;
  for (auto& l : ell) res.push_back(l.value_or(Word{}));
  out.status = Status::found;
  out.value = res;
  return out;
}

}  // namespace thurston
