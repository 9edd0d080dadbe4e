#include "thurston/machine.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace thurston {

std::vector<std::string> default_basis(int d) {
  std::vector<std::string> b;
  for (int i = 1; i <= d; ++i) b.push_back("l" + std::to_string(i));
  return b;
}

namespace {

void check_perm(const Wreath& w, int d) {
  if (int(w.size()) != d) throw std::invalid_argument("transition arity differs from degree");
  std::vector<int> seen(d, 0);
  for (auto& e : w)
    if (e.to < 0 || e.to >= d || seen[e.to]++) throw std::invalid_argument("transition permutation is not a bijection");
}

}  // namespace

Machine make_machine(SphereGroup left, SphereGroup right, std::vector<std::string> basis,
                     std::vector<Wreath> trans) {
  Machine m{std::move(left), std::move(right), std::move(basis), std::move(trans)};
  int d = m.degree();
  if (d < 1) throw std::invalid_argument("machine needs a nonempty basis");
  if (int(m.trans.size()) != m.right.rank()) throw std::invalid_argument("one transition per generator required");
  bool fill = false;
  for (int g = 0; g < m.right.rank(); ++g) {
    if (m.trans[g].empty() && g == m.right.eliminated()) { fill = true; continue; }
    check_perm(m.trans[g], d);
    for (auto& e : m.trans[g]) e.h = m.left.normal_form(e.h);
  }
  if (fill) fill_eliminated(m);
  return m;
}

void fill_eliminated(Machine& m) {
  int e = m.right.eliminated();
  if (e < 0) return;
  m.trans[e] = wreath_one(m.degree());
  m.trans[e] = wreath(m, m.right.gen(e));
}

Wreath wreath_one(int d) {
  Wreath w(d);
  for (int i = 0; i < d; ++i) w[i].to = i;
  return w;
}

Wreath wreath_mul(const SphereGroup& H, const Wreath& x, const Wreath& y) {
  Wreath z(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const Entry& f = y[x[i].to];
    z[i] = {H.mul(x[i].h, f.h), f.to};
  }
  return z;
}

Wreath wreath_inv(const SphereGroup& H, const Wreath& x) {
  Wreath z(x.size());
  for (size_t i = 0; i < x.size(); ++i) z[x[i].to] = {H.inv(x[i].h), int(i)};
  return z;
}

bool is_identity(const Wreath& x) {
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i].to != int(i) || !x[i].h.empty()) return false;
  return true;
}

std::vector<int> perm_of(const Wreath& x) {
  std::vector<int> p;
  for (auto& e : x) p.push_back(e.to);
  return p;
}

Wreath wreath(const Machine& m, const Word& g) {
  int d = m.degree();
  std::vector<Word> raw(d);
  std::vector<int> cur(d);
  for (int i = 0; i < d; ++i) cur[i] = i;
  for (auto& s : g) {
    if (s.gen < 0 || s.gen >= m.right.rank()) throw std::invalid_argument("unknown generator");
    Wreath b = s.exp > 0 ? m.trans[s.gen] : wreath_inv(m.left, m.trans[s.gen]);
    for (int k = 0; k < std::abs(s.exp); ++k)
      for (int i = 0; i < d; ++i) {
        const Entry& e = b[cur[i]];
        raw[i].insert(raw[i].end(), e.h.begin(), e.h.end());
        cur[i] = e.to;
      }
  }
  Wreath r(d);
  for (int i = 0; i < d; ++i) r[i] = {m.left.normal_form(raw[i]), cur[i]};
  return r;
}

std::pair<Word, int> act(const Machine& m, int s, const Word& g) {
  if (s < 0 || s >= m.degree()) throw std::invalid_argument("unknown basis label");
  Word h;
  int cur = s;
  for (auto& y : g) {
    const Wreath& t = m.trans.at(y.gen);
    for (int i = 0; i < std::abs(y.exp); ++i) {
      if (y.exp > 0) {
        h.insert(h.end(), t[cur].h.begin(), t[cur].h.end());
        cur = t[cur].to;
      } else {
        int j = 0;
        while (t[j].to != cur) ++j;
        Word v = m.left.inv(t[j].h);
        h.insert(h.end(), v.begin(), v.end());
        cur = j;
      }
    }
  }
  return {m.left.normal_form(h), cur};
}

int basis_index(const Machine& m, const std::string& label) {
  for (int i = 0; i < m.degree(); ++i)
    if (m.basis[i] == label) return i;
  throw std::invalid_argument("unknown basis label '" + label + "'");
}

std::vector<Lift> lifts(const Machine& m, const Word& g, bool oriented) {
  Wreath w = wreath(m, g);
  int d = m.degree();
  std::vector<char> seen(d, 0);
  std::vector<Lift> out;
  for (int s = 0; s < d; ++s) {
    if (seen[s]) continue;
    Lift l;
    Word rep;
    for (int c = s; !seen[c]; c = w[c].to) {
      seen[c] = 1;
      l.cycle.push_back(c);
      rep = m.left.mul(rep, w[c].h);
    }
    l.degree = int(l.cycle.size());
    l.rep = rep;
    l.cls = conj_class(m.left, rep, oriented);
    out.push_back(std::move(l));
  }
  return out;
}

std::vector<Lift> lifts(const Machine& m, const ConjClass& c) { return lifts(m, c.form, c.oriented); }

CheckReport check_sphere_biset(const Machine& m) {
  CheckReport r;
  int d = m.degree();
  r.relator = is_identity(wreath(m, m.right.relator_word()));
  if (!r.relator) r.failures.push_back("relator does not act trivially");
  r.orders = true;
  for (int i = 0; i < m.right.rank(); ++i) {
    int e = m.right.order(i);
    if (e != kInf && !is_identity(wreath(m, Word{{i, e}}))) {
      r.orders = false;
      r.failures.push_back("order relation fails for " + m.right.name(i));
    }
  }
  std::vector<char> seen(d, 0);
  std::deque<int> q{0};
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    int s = q.front();
    q.pop_front();
    for (auto& t : m.trans) {
      int u = t[s].to;
      if (!seen[u]) { seen[u] = 1; ++reached; q.push_back(u); }
    }
  }
  r.transitive = reached == d;
  if (!r.transitive) r.failures.push_back("permutation group is not transitive");
  for (auto& t : m.trans) {
    std::vector<char> v(d, 0);
    for (int s = 0; s < d; ++s) {
      if (v[s]) continue;
      int len = 0;
      for (int c = s; !v[c]; c = t[c].to) { v[c] = 1; ++len; }
      r.rh_sum += len - 1;
    }
  }
  r.rh = r.rh_sum == 2 * d - 2;
  if (!r.rh) r.failures.push_back("Riemann-Hurwitz sum " + std::to_string(r.rh_sum) + " != " + std::to_string(2 * d - 2));
  r.portrait.assign(m.left.rank(), {});
  r.lifts = true;
  std::vector<int> hits(m.left.rank(), 0);
  for (int i = 0; i < m.right.rank(); ++i) {
    for (auto& l : lifts(m, m.right.gen(i), true)) {
      Classification c = classify_class(m.left, l.cls);
      if (c.kind == ClassKind::trivial) continue;
      if (c.kind == ClassKind::peripheral && c.power == 1) {
        if (hits[c.gen]++ == 0) r.portrait[c.gen] = {i, l.degree};
        continue;
      }
      r.lifts = false;
      r.failures.push_back("lift " + m.left.str(l.rep) + " of " + m.right.name(i) + " is neither trivial nor peripheral");
    }
  }
  for (int j = 0; j < m.left.rank(); ++j)
    if (hits[j] != 1) {
      r.lifts = false;
      r.failures.push_back("peripheral class " + m.left.name(j) + " occurs " + std::to_string(hits[j]) + " times among lifts");
    }
  return r;
}

Portrait portrait(const Machine& m) {
  CheckReport r = check_sphere_biset(m);
  if (!r.ok()) throw std::runtime_error("not a sphere biset: " + r.failures.front());
  return r.portrait;
}

namespace {

std::string join_label(const std::string& a, const std::string& b) {
  if (a == "*") return b;
  if (b == "*") return a;
  return a + b;
}

}  // namespace

Machine tensor(const Machine& b, const Machine& c) {
  if (!(b.right == c.left)) throw std::invalid_argument("tensor: group mismatch");
  int db = b.degree(), dc = c.degree();
  Machine m{b.left, c.right, {}, {}};
  for (int t = 0; t < dc; ++t)
    for (int s = 0; s < db; ++s) m.basis.push_back(join_label(b.basis[s], c.basis[t]));
  for (int x = 0; x < c.right.rank(); ++x) {
    Wreath w(db * dc);
    for (int t = 0; t < dc; ++t) {
      const Entry& e = c.trans[x][t];
      for (int s = 0; s < db; ++s) {
        auto [h, s2] = act(b, s, e.h);
        w[s + db * t] = {h, s2 + db * e.to};
      }
    }
    m.trans.push_back(std::move(w));
  }
  return m;
}

Machine tensor(std::initializer_list<Machine> ms) {
  auto it = ms.begin();
  Machine r = *it++;
  for (; it != ms.end(); ++it) r = tensor(r, *it);
  return r;
}

Machine change_basis(const Machine& m, const BasisChange& nb) {
  int d = m.degree();
  if (int(nb.size()) != d) throw std::invalid_argument("basis change has wrong size");
  std::vector<int> newof(d, -1);
  for (int i = 0; i < d; ++i) {
    int o = nb[i].second;
    if (o < 0 || o >= d || newof[o] >= 0) throw std::invalid_argument("basis change is not bijective");
    newof[o] = i;
  }
  Machine r{m.left, m.right, {}, {}};
  for (int i = 0; i < d; ++i) {
    const auto& [p, o] = nb[i];
    r.basis.push_back(p.empty() ? m.basis[o] : m.left.str(p) + "." + m.basis[o]);
  }
  for (auto& t : m.trans) {
    Wreath w(d);
    for (int i = 0; i < d; ++i) {
      const Entry& e = t[nb[i].second];
      int j = newof[e.to];
      w[i] = {m.left.mul({nb[i].first, e.h, m.left.inv(nb[j].first)}), j};
    }
    r.trans.push_back(std::move(w));
  }
  return r;
}

BasisChange parse_basis_change(const Machine& m, const std::vector<std::string>& items) {
  BasisChange nb;
  for (auto& it : items) {
    auto dot = it.rfind('.');
    if (dot == std::string::npos) {
      nb.push_back({{}, basis_index(m, it)});
    } else {
      nb.push_back({m.left.parse_word(it.substr(0, dot)), basis_index(m, it.substr(dot + 1))});
    }
  }
  return nb;
}

Machine auto_machine(const GroupMap& phi) {
  Machine m{phi.target, phi.source, {"*"}, {}};
  for (auto& w : phi.images) m.trans.push_back({Entry{w, 0}});
  return m;
}

Machine identity_machine(const SphereGroup& G) { return auto_machine(identity_map(G)); }

Machine twist(const Machine& m, const std::optional<GroupMap>& pre, const std::optional<GroupMap>& post) {
  Machine r = m;
  if (pre) r = tensor(auto_machine(*pre), r);
  if (post) r = tensor(r, auto_machine(*post));
  return r;
}

namespace {

std::vector<int> position_map(const SphereGroup& from, const SphereGroup& to) {
  if (from.rank() != to.rank()) throw std::invalid_argument("relabel: rank mismatch");
  std::vector<int> f(from.rank());
  for (int k = 0; k < from.rank(); ++k) {
    int a = from.relator()[k], b = to.relator()[k];
    if (from.order(a) != to.order(b)) throw std::invalid_argument("relabel: order mismatch");
    f[a] = b;
  }
  return f;
}

Word map_word(const SphereGroup& to, const std::vector<int>& f, const Word& w) {
  Word x;
  for (auto& s : w) x.push_back({f[s.gen], s.exp});
  return to.normal_form(x);
}

}  // namespace

Machine relabel(const Machine& m, const SphereGroup& H, const SphereGroup& G) {
  auto fl = position_map(m.left, H), fr = position_map(m.right, G);
  Machine r{H, G, m.basis, std::vector<Wreath>(G.rank())};
  for (int g = 0; g < m.right.rank(); ++g) {
    Wreath w = m.trans[g];
    for (auto& e : w) e.h = map_word(H, fl, e.h);
    r.trans[fr[g]] = std::move(w);
  }
  return r;
}

bool iso_verify(const Machine& b, const Machine& c, const IsoWitness& w) {
  if (!(b.left == c.left) || !(b.right == c.right) || b.degree() != c.degree()) return false;
  return change_basis(b, w.basis) == c;
}

Search<IsoWitness> iso_search(const Machine& b, const Machine& c, int bound) {
  Search<IsoWitness> out;
  if (!(b.left == c.left) || !(b.right == c.right) || b.degree() != c.degree()) {
    out.note = "groups or degrees differ";
    return out;
  }
  auto pb = check_sphere_biset(b), pc = check_sphere_biset(c);
  if (pb.ok() && pc.ok() && !(pb.portrait == pc.portrait)) {
    out.note = "portraits differ";
    return out;
  }
  const SphereGroup& H = b.left;
  int d = b.degree();
  std::vector<int> gens;
  for (int g = 0; g < b.right.rank(); ++g)
    if (g != b.right.eliminated()) gens.push_back(g);
  std::vector<Wreath> binv, cinv;
  for (int g = 0; g < b.right.rank(); ++g) {
    binv.push_back(wreath_inv(H, b.trans[g]));
    cinv.push_back(wreath_inv(H, c.trans[g]));
  }
  auto words = enumerate_words(H, bound);
  for (int j0 = 0; j0 < d; ++j0) {
    for (auto& p0 : words) {
      std::vector<int> sigma(d, -1);
      std::vector<Word> pre(d);
      sigma[0] = j0;
      pre[0] = p0;
      std::deque<int> q{0};
      bool ok = true;
      while (ok && !q.empty()) {
        int i = q.front();
        q.pop_front();
        for (int g : gens) {
          for (int dir = 0; dir < 2 && ok; ++dir) {
            const Entry& ec = (dir ? cinv[g] : c.trans[g])[i];
            const Entry& eb = (dir ? binv[g] : b.trans[g])[sigma[i]];
            Word pj = H.mul({H.inv(ec.h), pre[i], eb.h});
            int j = ec.to;
            if (sigma[j] < 0) {
              if (std::find(sigma.begin(), sigma.end(), eb.to) != sigma.end()) { ok = false; break; }
              sigma[j] = eb.to;
              pre[j] = pj;
              q.push_back(j);
            } else if (sigma[j] != eb.to || pre[j] != pj) {
              ok = false;
            }
          }
        }
      }
      if (!ok || std::find(sigma.begin(), sigma.end(), -1) != sigma.end()) continue;
      IsoWitness w;
      for (int i = 0; i < d; ++i) w.basis.push_back({pre[i], sigma[i]});
      if (iso_verify(b, c, w)) {
        out.status = Status::found;
        out.value = w;
        return out;
      }
    }
  }
  out.status = Status::bound_exceeded;
  out.note = "no basis change with first prefix of length <= " + std::to_string(bound);
  return out;
}

std::vector<int> ord_min(const Machine& m) {
  if (!(m.left == m.right)) throw std::invalid_argument("ord_min needs a self-biset");
  int n = m.right.rank();
  std::vector<std::vector<std::pair<int, int>>> edges(n);  // (degree, target) ; target -1 trivial
  for (int a = 0; a < n; ++a) {
    for (auto& l : lifts(m, m.right.gen(a), true)) {
      Classification c = classify_class(m.left, l.cls);
      if (c.kind == ClassKind::trivial) edges[a].push_back({l.degree, -1});
      else if (c.kind == ClassKind::peripheral) edges[a].push_back({l.degree, c.gen});
      else throw std::runtime_error("ord_min: non-peripheral lift");
    }
  }
  // infinite iff a reachable cycle carries an edge of degree > 1
  std::vector<int> inf(n, 0);
  for (int a = 0; a < n; ++a)
    for (auto& [k, c] : edges[a]) {
      if (c < 0 || k == 1) continue;
      // edge a->c of degree k lies on a cycle iff a is reachable from c
      std::vector<char> seen(n, 0);
      std::deque<int> q{c};
      seen[c] = 1;
      while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        for (auto& [k2, y] : edges[x])
          if (y >= 0 && !seen[y]) { seen[y] = 1; q.push_back(y); }
      }
      if (seen[a]) inf[a] = 1;
    }
  // propagate: anything reaching an infinite vertex is infinite
  for (bool ch = true; ch;) {
    ch = false;
    for (int a = 0; a < n; ++a)
      if (!inf[a])
        for (auto& [k, c] : edges[a])
          if (c >= 0 && inf[c]) { inf[a] = 1; ch = true; break; }
  }
  std::vector<long> L(n, 1);
  for (bool ch = true; ch;) {
    ch = false;
    for (int a = 0; a < n; ++a) {
      if (inf[a]) continue;
      long v = L[a];
      for (auto& [k, c] : edges[a]) v = std::lcm(v, long(k) * (c < 0 ? 1 : L[c]));
      if (v != L[a]) { L[a] = v; ch = true; }
    }
  }
  std::vector<int> out(n);
  for (int a = 0; a < n; ++a) out[a] = inf[a] ? kInf : int(L[a]);
  return out;
}

namespace {

std::pair<Word, long> act_level(const Machine& m, int level, long idx, const Word& g) {
  if (level == 0) return {g, idx};
  long d = m.degree();
  auto [g2, rest] = act_level(m, level - 1, idx / d, g);
  auto [h, s] = act(m, int(idx % d), g2);
  return {h, s + d * rest};
}

}  // namespace

std::vector<int> tree_action(const Machine& m, const Word& g, int level) {
  if (!(m.left == m.right)) throw std::invalid_argument("tree_action needs a self-biset");
  long n = 1;
  for (int i = 0; i < level; ++i) n *= m.degree();
  std::vector<int> p(n);
  for (long i = 0; i < n; ++i) p[i] = int(act_level(m, level, i, g).second);
  return p;
}

std::string str(const Machine& m, const Wreath& w) {
  std::string r = "<";
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) r += ", ";
    r += m.left.str(w[i].h);
  }
  r += ">";
  std::vector<char> seen(w.size(), 0);
  std::string cyc;
  for (size_t i = 0; i < w.size(); ++i) {
    if (seen[i] || w[i].to == int(i)) continue;
    cyc += "(";
    for (size_t c = i; !seen[c]; c = w[c].to) {
      if (c != i) cyc += ",";
      seen[c] = 1;
      cyc += std::to_string(c + 1);
    }
    cyc += ")";
  }
  return r + " " + (cyc.empty() ? "()" : cyc);
}

}  // namespace thurston
