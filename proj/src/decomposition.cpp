#include "thurston/decomposition.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "thurston/format.hpp"

namespace thurston {

int SphereTree::sphere(const std::string& name) const {
  for (size_t i = 0; i < spheres.size(); ++i)
    if (spheres[i].name == name) return int(i);
  return -1;
}

int SphereTree::curve(const std::string& name) const {
  for (size_t i = 0; i < curves.size(); ++i)
    if (curves[i].name == name) return int(i);
  return -1;
}

int TreeOfBisets::vertex(const std::string& name) const {
  for (size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].name == name) return int(i);
  return -1;
}

std::string str(VertexKind k) {
  switch (k) {
    case VertexKind::essential: return "essential";
    case VertexKind::annular: return "annular";
    default: return "trivial";
  }
}

namespace {

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

// keyword -> text up to the next keyword
std::map<std::string, std::string> keyed(const std::vector<std::string>& toks, size_t from,
                                         const std::set<std::string>& keys, int no) {
  std::map<std::string, std::string> out;
  std::string cur;
  for (size_t i = from; i < toks.size(); ++i) {
    if (keys.count(toks[i])) {
      cur = toks[i];
      if (out.count(cur)) throw ParseError("repeated keyword '" + cur + "'", no, 1);
      out[cur] = "";
    } else if (cur.empty()) {
      throw ParseError("unexpected '" + toks[i] + "'", no, 1);
    } else {
      out[cur] += (out[cur].empty() ? "" : " ") + toks[i];
    }
  }
  return out;
}

std::vector<std::string> items(const std::string& s) {
  std::vector<std::string> out;
  for (auto& x : split_top(s, ',')) out.push_back(trim(x));
  return out;
}

std::pair<std::string, std::string> split_item(const std::string& it) {
  auto dot = it.rfind('.');
  if (dot == std::string::npos) return {"", it};
  return {it.substr(0, dot), it.substr(dot + 1)};
}

}  // namespace

Certificate parse_certificate(const Machine& B, std::string_view text) {
  if (!(B.left == B.right)) throw std::invalid_argument("decomposition needs a self-biset");
  const SphereGroup& G = B.right;
  Certificate c;
  c.tree.ambient = G;
  auto word = [&](const std::string& s, int no) {
    try {
      return G.parse_word(s, c.aliases);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), no, e.col);
    } catch (const std::exception& e) {
      throw ParseError(e.what(), no, 1);
    }
  };
  for (auto& [no, raw] : logical_lines(text)) {
    std::string line = trim(raw);
    auto toks = tokens(line);
    const std::string& kw = toks[0];
    std::string rest = trim(line.substr(kw.size()));
    if (kw == "basis") {
      c.basis = items(rest);
    } else if (kw == "let") {
      auto eq = rest.find('=');
      if (eq == std::string::npos) throw ParseError("let needs '='", no, 1);
      c.aliases[trim(rest.substr(0, eq))] = word(trim(rest.substr(eq + 1)), no);
    } else if (kw == "sphere") {
      auto lt = rest.find('<'), gt = rest.find('>');
      auto eq = rest.find('=', gt == std::string::npos ? 0 : gt);
      if (lt == std::string::npos || gt == std::string::npos || eq == std::string::npos)
        throw ParseError("sphere needs 'NAME <gens | relator> = images'", no, 1);
      SphereVertex v;
      v.name = trim(rest.substr(0, lt));
      v.group = parse_group(rest.substr(lt, gt - lt + 1));
      for (auto& it : items(rest.substr(eq + 1))) v.images.push_back(word(it, no));
      if (int(v.images.size()) != v.group.rank()) throw ParseError("one image per generator required", no, 1);
      c.tree.spheres.push_back(v);
    } else if (kw == "curve") {
      auto eq = rest.find('=');
      if (eq == std::string::npos) throw ParseError("curve needs '='", no, 1);
      c.tree.curves.push_back({trim(rest.substr(0, eq)), word(trim(rest.substr(eq + 1)), no)});
    } else if (kw == "vertex") {
      if (toks.size() < 2) throw ParseError("vertex needs a name", no, 1);
      auto k = keyed(toks, 2, {"rho", "lambda", "basis"}, no);
      if (!k.count("rho") || !k.count("lambda") || !k.count("basis"))
        throw ParseError("vertex needs rho, lambda and basis", no, 1);
      c.vertices.push_back({toks[1], k["rho"], k["lambda"], items(k["basis"])});
    } else if (kw == "edge") {
      if (toks.size() < 4) throw ParseError("edge needs a name and two vertices", no, 1);
      auto k = keyed(toks, 4, {"at", "curve", "degree", "lift", "twist"}, no);
      for (auto key : {"at", "curve", "lift"})
        if (!k.count(key)) throw ParseError(std::string("edge needs '") + key + "'", no, 1);
      CertEdge e;
      e.name = toks[1];
      e.a = toks[2];
      e.b = toks[3];
      e.at = k["at"];
      e.curve = k["curve"];
      if (k.count("degree")) e.degree = std::stoi(k["degree"]);
      e.lift = word(k["lift"], no);
      if (k.count("twist")) {
        auto tw = items(k["twist"]);
        if (tw.size() != 2) throw ParseError("edge twist needs two words", no, 1);
        e.twist_a = word(tw[0], no);
        e.twist_b = word(tw[1], no);
      }
      c.edges.push_back(e);
    } else {
      throw ParseError("unknown certificate line '" + kw + "'", no, 1);
    }
  }
  return c;
}

namespace {

bool commute(const SphereGroup& H, const Word& x, const Word& y) { return H.mul(x, y) == H.mul(y, x); }

VertexKind kind_of(const SphereGroup& H, const std::vector<Wreath>& amb) {
  std::vector<Word> nontriv;
  for (auto& w : amb)
    for (auto& e : w)
      if (!e.h.empty()) nontriv.push_back(e.h);
  if (nontriv.empty()) return VertexKind::trivial;
  for (auto& x : nontriv)
    for (auto& y : nontriv)
      if (!commute(H, x, y)) return VertexKind::essential;
  auto cls = classify_class(H, conj_class(H, nontriv[0], false));
  return cls.kind == ClassKind::essential ? VertexKind::annular : VertexKind::trivial;
}

}  // namespace

TreeOfBisets decompose(const Machine& B, const Certificate& cert) {
  if (!(B.left == B.right)) throw std::invalid_argument("decomposition needs a self-biset");
  const SphereGroup& H = B.left;
  TreeOfBisets T;
  T.aliases = cert.aliases;
  T.tree = cert.tree;
  T.edges = cert.edges;
  T.adapted = B;
  if (!cert.basis.empty()) {
    BasisChange nb;
    for (auto& it : cert.basis) {
      auto [p, l] = split_item(it);
      nb.push_back({p.empty() ? Word{} : H.parse_word(p, cert.aliases), basis_index(B, l)});
    }
    T.adapted = change_basis(B, nb);
    for (size_t i = 0; i < nb.size(); ++i) T.adapted.basis[i] = B.basis[nb[i].second];
  }
  const Machine& A = T.adapted;
  for (auto& cv : cert.vertices) {
    TreeVertex v;
    v.name = cv.name;
    v.rho = T.tree.sphere(cv.rho);
    if (v.rho < 0) throw DecompositionError(cv.name + ": unknown rho target '" + cv.rho + "'");
    if (cv.lambda != "1") {
      v.lambda_sphere = T.tree.sphere(cv.lambda);
      v.lambda_curve = T.tree.curve(cv.lambda);
      if (v.lambda_sphere < 0 && v.lambda_curve < 0)
        throw DecompositionError(cv.name + ": unknown lambda target '" + cv.lambda + "'");
    }
    std::vector<std::string> labels;
    for (auto& it : cv.basis) {
      auto [p, l] = split_item(it);
      v.items.push_back({p.empty() ? Word{} : H.parse_word(p, cert.aliases), basis_index(A, l)});
      labels.push_back(l);
    }
    const SphereVertex& down = T.tree.spheres[v.rho];
    int k = int(v.items.size());
    for (int j = 0; j < down.group.rank(); ++j) {
      Wreath w(k);
      for (int a = 0; a < k; ++a) {
        auto [h, t] = act(A, v.items[a].second, down.images[j]);
        int b = -1;
        for (int x = 0; x < k; ++x)
          if (v.items[x].second == t) b = x;
        if (b < 0)
          throw DecompositionError(cv.name + ": generator " + down.group.name(j) + " leaves the sub-basis at " +
                                   labels[a]);
        w[a] = {H.mul({v.items[a].first, h, H.inv(v.items[b].first)}), b};
      }
      v.ambient.push_back(w);
    }
    auto fail = [&](int j, int a, const std::string& where) {
      throw DecompositionError(cv.name + ": entry " + H.str(v.ambient[j][a].h) + " of " + down.group.name(j) +
                               " at " + labels[a] + " is not in " + where);
    };
    if (v.lambda_sphere >= 0) {
      const SphereVertex& up = T.tree.spheres[v.lambda_sphere];
      std::vector<Wreath> trans(down.group.rank(), Wreath(k));
      for (int j = 0; j < down.group.rank(); ++j)
        for (int a = 0; a < k; ++a) {
          auto r = subgroup_rewrite(H, up.images, v.ambient[j][a].h);
          if (!r) fail(j, a, up.name);
          trans[j][a] = {up.group.normal_form(*r), v.ambient[j][a].to};
        }
      v.machine = make_machine(up.group, down.group, labels, trans);
      v.kind = kind_of(H, v.ambient);
    } else if (v.lambda_curve >= 0) {
      const CurveVertex& cu = T.tree.curves[v.lambda_curve];
      for (int j = 0; j < down.group.rank(); ++j)
        for (int a = 0; a < k; ++a)
          if (!subgroup_rewrite(H, {cu.word}, v.ambient[j][a].h)) fail(j, a, "<" + cu.name + ">");
      v.kind = kind_of(H, v.ambient) == VertexKind::trivial ? VertexKind::trivial : VertexKind::annular;
    } else {
      for (int j = 0; j < down.group.rank(); ++j)
        for (int a = 0; a < k; ++a)
          if (!v.ambient[j][a].h.empty()) fail(j, a, "the trivial group");
      v.kind = VertexKind::trivial;
    }
    T.vertices.push_back(std::move(v));
  }
  return T;
}

Wreath vertex_recursion(const TreeOfBisets& T, int vi, const Word& g) {
  const SphereGroup& H = T.adapted.left;
  const TreeVertex& v = T.vertices[vi];
  const SphereVertex& down = T.tree.spheres[v.rho];
  auto over = subgroup_rewrite(H, down.images, g);
  if (!over) throw std::invalid_argument("word is not in the rho group of " + v.name);
  int k = int(v.items.size());
  if (v.machine) {
    Wreath w = wreath(*v.machine, down.group.normal_form(*over));
    const auto& up = T.tree.spheres[v.lambda_sphere];
    for (auto& e : w) e.h = evaluate(H, up.images, e.h);
    return w;
  }
  Wreath w = wreath_one(k);
  for (auto& s : *over) {
    Wreath x = s.exp > 0 ? v.ambient[s.gen] : wreath_inv(H, v.ambient[s.gen]);
    for (int i = 0; i < std::abs(s.exp); ++i) w = wreath_mul(H, w, x);
  }
  return w;
}

std::vector<TreeCheck> verify_tree(const TreeOfBisets& T) {
  const SphereGroup& H = T.adapted.left;
  const SphereTree& S = T.tree;
  std::vector<TreeCheck> out;

  TreeCheck tags{"tags", true, {}};
  std::vector<int> point_hits(H.rank(), 0), curve_hits(S.curves.size(), 0);
  std::vector<std::set<int>> curve_spheres(S.curves.size());
  for (size_t v = 0; v < S.spheres.size(); ++v) {
    const auto& sv = S.spheres[v];
    for (int j = 0; j < sv.group.rank(); ++j) {
      ConjClass c = conj_class(H, sv.images[j], false);
      auto k = classify_class(H, c);
      if (k.kind == ClassKind::peripheral && std::abs(k.power) == 1) {
        ++point_hits[k.gen];
        continue;
      }
      bool found = false;
      for (size_t i = 0; i < S.curves.size(); ++i)
        if (conj_class(H, S.curves[i].word, false) == c) {
          ++curve_hits[i];
          curve_spheres[i].insert(int(v));
          found = true;
        }
      if (!found)
        tags.failures.push_back(sv.name + "." + sv.group.name(j) + " is neither a marked point nor a listed curve");
    }
  }
  for (int g = 0; g < H.rank(); ++g)
    if (point_hits[g] != 1)
      tags.failures.push_back("marked point " + H.name(g) + " tagged " + std::to_string(point_hits[g]) + " times");
  for (size_t i = 0; i < S.curves.size(); ++i)
    if (curve_hits[i] != 2 || curve_spheres[i].size() != 2)
      tags.failures.push_back("curve " + S.curves[i].name + " is not shared by exactly two spheres");
  out.push_back(tags);

  TreeCheck tree{"tree", true, {}};
  {
    int n = int(S.spheres.size());
    if (int(S.curves.size()) != n - 1) tree.failures.push_back("a tree needs one curve fewer than spheres");
    std::vector<std::vector<int>> adj(n);
    for (auto& cs : curve_spheres)
      if (cs.size() == 2) {
        adj[*cs.begin()].push_back(*cs.rbegin());
        adj[*cs.rbegin()].push_back(*cs.begin());
      }
    std::vector<char> seen(n, 0);
    std::deque<int> q;
    if (n) { seen[0] = 1; q.push_back(0); }
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int y : adj[x])
        if (!seen[y]) { seen[y] = 1; q.push_back(y); }
    }
    if (std::count(seen.begin(), seen.end(), 1) != n) tree.failures.push_back("sphere tree is not connected");
  }
  out.push_back(tree);

  TreeCheck fibers{"fibers", true, {}};
  for (size_t s = 0; s < S.spheres.size(); ++s) {
    std::vector<int> hits(T.adapted.degree(), 0);
    bool any = false;
    for (auto& v : T.vertices)
      if (v.rho == int(s)) {
        any = true;
        for (auto& it : v.items) ++hits[it.second];
      }
    for (int i = 0; any && i < T.adapted.degree(); ++i)
      if (hits[i] != 1)
        fibers.failures.push_back("label " + T.adapted.basis[i] + " occurs " + std::to_string(hits[i]) +
                                  " times above " + S.spheres[s].name);
    if (!any) fibers.failures.push_back("no vertex above " + S.spheres[s].name);
  }
  out.push_back(fibers);

  TreeCheck round{"roundtrip", true, {}};
  for (size_t vi = 0; vi < T.vertices.size(); ++vi) {
    const auto& v = T.vertices[vi];
    const auto& down = S.spheres[v.rho];
    for (int j = 0; j < down.group.rank(); ++j) {
      Wreath w = vertex_recursion(T, int(vi), down.images[j]);
      if (w != v.ambient[j]) round.failures.push_back(v.name + "." + down.group.name(j));
    }
  }
  out.push_back(round);

  TreeCheck tagk{"kinds", true, {}};
  for (auto& v : T.vertices)
    if (v.kind == VertexKind::essential && v.lambda_sphere < 0)
      tagk.failures.push_back(v.name + " is essential without a sphere target");
  out.push_back(tagk);

  TreeCheck edges{"edges", true, {}};
  for (auto& e : T.edges) {
    auto [ps, l] = split_item(e.at);
    Word p = ps.empty() ? Word{} : H.parse_word(ps, T.aliases);
    int s = basis_index(T.adapted, l);
    int ci = S.curve(e.curve);
    if (ci < 0) {
      edges.failures.push_back(e.name + ": unknown curve " + e.curve);
      continue;
    }
    auto [h, t] = act(T.adapted, s, H.pow(S.curves[ci].word, e.degree));
    if (t != s || H.mul({p, h, H.inv(p)}) != e.lift)
      edges.failures.push_back(e.name + ": the edge element does not intertwine " + e.curve);
    for (int side = 0; side < 2; ++side) {
      int vi = T.vertex(side ? e.b : e.a);
      if (vi < 0) {
        edges.failures.push_back(e.name + ": unknown vertex");
        continue;
      }
      const auto& v = T.vertices[vi];
      const Word& tw = side ? e.twist_b : e.twist_a;
      bool placed = false;
      for (auto& it : v.items)
        if (it.second == s) placed = H.mul(tw, it.first) == p;
      if (!placed) edges.failures.push_back(e.name + ": inclusion into " + v.name + " misses the edge element");
      bool inside = true;
      if (v.lambda_sphere >= 0) inside = bool(subgroup_rewrite(H, S.spheres[v.lambda_sphere].images, e.lift));
      else if (v.lambda_curve >= 0) inside = bool(subgroup_rewrite(H, {S.curves[v.lambda_curve].word}, e.lift));
      else inside = e.lift.empty();
      if (!inside) edges.failures.push_back(e.name + ": lift is not in the target of " + v.name);
    }
  }
  out.push_back(edges);

  TreeCheck dyn{"dynamics", true, {}};
  std::map<int, std::string> seen;
  for (auto& v : T.vertices)
    if (v.kind == VertexKind::essential) {
      if (seen.count(v.lambda_sphere))
        dyn.failures.push_back(v.name + " and " + seen[v.lambda_sphere] + " share a target");
      seen[v.lambda_sphere] = v.name;
    }
  out.push_back(dyn);

  for (auto& c : out) c.ok = c.failures.empty();
  return out;
}

std::vector<ReturnBiset> return_bisets(const TreeOfBisets& T) {
  int n = int(T.tree.spheres.size());
  std::vector<int> next(n, -1);
  for (size_t i = 0; i < T.vertices.size(); ++i) {
    const auto& v = T.vertices[i];
    if (v.kind != VertexKind::essential) continue;
    if (next[v.lambda_sphere] >= 0) throw DecompositionError("essential dynamics is not well defined");
    next[v.lambda_sphere] = int(i);
  }
  std::vector<ReturnBiset> out;
  std::vector<char> done(n, 0);
  for (int s = 0; s < n; ++s) {
    if (done[s]) continue;
    std::vector<int> cyc;
    std::set<int> visited;
    int x = s;
    while (next[x] >= 0 && !visited.count(x)) {
      visited.insert(x);
      cyc.push_back(next[x]);
      x = T.vertices[next[x]].rho;
    }
    if (x != s || cyc.empty()) continue;
    for (int z : cyc) done[T.vertices[z].lambda_sphere] = 1;
    Machine m = *T.vertices[cyc[0]].machine;
    for (size_t i = 1; i < cyc.size(); ++i) m = tensor(m, *T.vertices[cyc[i]].machine);
    out.push_back({cyc, m});
  }
  return out;
}

std::string print_tree(const TreeOfBisets& T) {
  const SphereGroup& H = T.adapted.left;
  std::ostringstream o;
  for (auto& s : T.tree.spheres) {
    o << "sphere " << s.name << " " << s.group.describe() << " =";
    for (int j = 0; j < s.group.rank(); ++j) o << (j ? ", " : " ") << H.str(s.images[j]);
    o << "\n";
  }
  for (auto& c : T.tree.curves) o << "curve " << c.name << " = " << H.str(c.word) << "\n";
  for (auto& v : T.vertices) {
    o << "vertex " << v.name << " rho " << T.tree.spheres[v.rho].name << " lambda "
      << (v.lambda_sphere >= 0   ? T.tree.spheres[v.lambda_sphere].name
          : v.lambda_curve >= 0 ? T.tree.curves[v.lambda_curve].name
                                : std::string("1"))
      << " " << str(v.kind) << " basis";
    for (size_t i = 0; i < v.items.size(); ++i) {
      auto& [p, l] = v.items[i];
      o << (i ? ", " : " ") << (p.empty() ? "" : "(" + H.str(p) + ").") << T.adapted.basis[l];
    }
    o << "\n";
    const auto& down = T.tree.spheres[v.rho];
    for (int j = 0; j < down.group.rank(); ++j) {
      o << "  " << down.group.name(j) << " = ";
      if (v.machine) o << str(*v.machine, v.machine->trans[j]);
      else o << str(T.adapted, v.ambient[j]);
      o << "\n";
    }
  }
  for (auto& e : T.edges)
    o << "edge " << e.name << " " << e.a << " " << e.b << " at " << e.at << " curve " << e.curve << " degree "
      << e.degree << " lift " << H.str(e.lift) << " twist " << H.str(e.twist_a) << ", " << H.str(e.twist_b) << "\n";
  return o.str();
}

}  // namespace thurston
