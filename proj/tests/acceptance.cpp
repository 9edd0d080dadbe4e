// One line per acceptance criterion; nonzero exit if any fails.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <Eigen/LU>

#include "thurston/constructors.hpp"
#include "thurston/contraction.hpp"
#include "thurston/curves.hpp"
#include "thurston/decomposition.hpp"
#include "thurston/format.hpp"
#include "thurston/lattes.hpp"

#include "support.hpp"

using namespace thurston;

namespace {

struct Log {
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  void need(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

bool same(const Machine& a, const Machine& b) {
  if (!(a.left == b.left) || !(a.right == b.right) || a.degree() != b.degree()) return false;
  for (size_t g = 0; g < a.trans.size(); ++g)
    for (int i = 0; i < a.degree(); ++i) {
      if (a.trans[g][i].to != b.trans[g][i].to) return false;
      if (a.left.normal_form(a.trans[g][i].h) != b.left.normal_form(b.trans[g][i].h)) return false;
    }
  return true;
}

Multicurve curves_of(const Fixture& f, const std::vector<std::string>& names) {
  std::vector<Word> ws;
  for (auto& n : names)
    for (auto& c : f.curves)
      if (c.name == n) ws.push_back(c.word);
  if (ws.size() != names.size()) throw std::runtime_error("fixture " + f.name + " lacks a named curve");
  return make_multicurve(f.machine.right, ws);
}

RMatrix rmat(int n, std::vector<const char*> xs) {
  RMatrix T(n, n);
  for (int i = 0; i < n * n; ++i) T(i / n, i % n) = Rational(xs[i]);
  return T;
}

// Matrix of C in the order given by names.
RMatrix ordered_matrix(const Machine& B, const Fixture& f, const std::vector<std::string>& names) {
  Multicurve C = curves_of(f, names);
  RMatrix T = thurston_matrix(B, C);
  int n = int(names.size());
  RMatrix out(n, n);
  std::vector<int> idx;
  for (auto& nm : names) idx.push_back(C.find(curves_of(f, {nm}).curves[0]));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) out(i, k) = T(idx[i], idx[k]);
  return out;
}

bool singular_I_minus(const RMatrix& T) {
  RMatrix A = RMatrix::Identity(T.rows(), T.cols()) - T;
  return A.fullPivLu().rank() < A.rows();
}

const Machine& vertex_machine(const TreeOfBisets& T, const std::string& v) {
  auto& x = T.vertices[T.vertex(v)];
  if (!x.machine) throw std::runtime_error(v + " has no vertex machine");
  return *x.machine;
}

bool tree_verifies(const TreeOfBisets& T, Log& log, const std::string& tag) {
  bool all = true;
  for (auto& c : verify_tree(T)) {
    log.need(c.ok, tag + " check " + c.name);
    all &= c.ok;
  }
  return all;
}

GroupMap map_power(const GroupMap& f, int k) {
  GroupMap base = f, out = identity_map(f.source);
  if (k < 0) {
    auto inv = invert_auto(f, 1000);
    if (!inv.value) throw std::runtime_error("automorphism not inverted");
    base = *inv.value;
    k = -k;
  }
  for (int i = 0; i < k; ++i) out = compose_maps(out, base);
  return out;
}

void c1(Log& log) {
  struct C {
    const char *theta, *name;
  } cases[] = {{"1/6", "z2pi"}, {"1/3", "z2m1"}, {"1/2", "z2m2"}};
  for (auto& c : cases) {
    Machine a = angle_to_biset(2, parse_angle(c.theta));
    Machine p = fixture(c.name).machine;
    auto s = iso_search(relabel(a, p.left, p.right), p, 3);
    log.need(bool(s) && iso_verify(relabel(a, p.left, p.right), p, *s.value),
             std::string("angle ") + c.theta + " vs " + c.name);
  }
  log.note("3 angles, iso bound 3");
}

void c2(Log& log) {
  for (int n = 0; n <= 2; ++n) {
    auto f = fixture("z2pi_twist", n);
    Multicurve C = curves_of(f, {"r"});
    std::string tag = "n=" + std::to_string(n);
    log.need(str(f.machine.right, C) == "{c*b}", tag + " curve is cb");
    log.need(is_invariant(f.machine, C).invariant(), tag + " invariant");
    log.need(thurston_matrix(f.machine, C) == rmat(1, {"1"}), tag + " matrix (1)");
    auto L = levy_search(f.machine, 2);
    log.need(bool(L) && *L.value == C, tag + " Levy cycle {cb} at bound 2");
  }
  log.note("n = 0, 1, 2");
}

void c3(Log& log) {
  Machine z = fixture("z2m1").machine;
  auto f = fixture("basilica_mating");
  Machine m = mate(z, z, {"A", "B"});
  log.need(m == f.machine && print_machine(m) == print_machine(f.machine), "mating equals the reference machine");
  RMatrix ba = thurston_matrix(m, curves_of(f, {"ba"}));
  log.need(ba == rmat(1, {"1/2"}), "ba matrix (1/2)");
  log.need(!spectral_ge_one(ba), "ba spectral test false");
  Multicurve x = curves_of(f, {"x"});
  log.need(thurston_matrix(m, x) == rmat(1, {"1"}), "A*a matrix (1)");
  auto cl = classify_multicurve(curve_graph(m, x));
  log.need(cl.levy && cl.levy_cycles.size() == 1, "A*a Levy cycle");
}

void c4(Log& log) {
  auto fx = fixture("f512_mating");
  Machine f = fixture("f512").machine;
  Machine m = mate(f, f, {"h1", "h2", "h3", "h4"});
  log.need(m == fx.machine, "mating equals the shipped machine");
  log.need(check_sphere_biset(m).ok(), "mating admissible");
  std::string text = print_machine(fx.machine);
  std::string good = "h2 = <h3*h2*h1, h1^-1*h2^-1*h3^-1> (1,2)";
  auto at = text.find(good);
  log.need(at != std::string::npos, "h2 line located");
  if (at != std::string::npos) {
    std::string bad = text;
    bad.replace(at, good.size(), "let t = h4*h3*h2*h1\nh2 = <h4^-1*t^-1, t*h4> (1,2)");
    log.need(!check_sphere_biset(parse_machine(bad)).ok(), "sign-swapped h2 variant rejected");
  }
  Multicurve u = curves_of(fx, {"u"});
  log.need(!is_invariant(m, u).invariant(), "{u} alone not invariant");
  auto g = generate_invariant(m, u, 8);
  log.need(bool(g) && *g.value == curves_of(fx, {"u", "v"}), "generated {u,v}");
  RMatrix T = ordered_matrix(m, fx, {"u", "v"});
  log.need(T == rmat(2, {"0", "1", "2", "0"}), "{u,v} matrix [[0,1],[2,0]]");
  log.need(spectral_ge_one(T), "{u,v} spectral test true");
  for (const char* c : {"g0", "h0"}) {
    Multicurve C = curves_of(fx, {c});
    log.need(thurston_matrix(m, C) == rmat(1, {"1"}), std::string(c) + " matrix (1)");
    log.need(classify_multicurve(curve_graph(m, C)).levy, std::string(c) + " Levy cycle");
  }
  Multicurve rs = curves_of(fx, {"r", "s"});
  auto G = curve_graph(m, rs);
  int r = rs.find(curves_of(fx, {"r"}).curves[0]), s = rs.find(curves_of(fx, {"s"}).curves[0]);
  std::vector<CurveEdge> want{{r, s, 1}, {s, r, 1}}, got = G.edges;
  std::sort(want.begin(), want.end(), [](auto& a, auto& b) { return a.from < b.from; });
  std::sort(got.begin(), got.end(), [](auto& a, auto& b) { return a.from < b.from; });
  log.need(got == want, "{r,s} edges r->s->r of degree 1");
  log.need(classify_multicurve(G).levy, "{r,s} Levy multicurve");
}

void c5(Log& log) {
  auto f = fixture("f512_mating");
  auto T = decompose(f.machine, parse_certificate(f.machine, f.certificate));
  tree_verifies(T, log, "tree");
  const Machine& B2 = vertex_machine(T, "B2");
  auto& H = B2.left;
  Word g0 = H.parse_word("k3*g1");
  GroupMap c = identity_map(H);
  for (int i = 0; i < H.rank(); ++i) c.images[i] = H.mul({H.inv(g0), H.gen(i), g0});
  Machine sq = tensor(B2, B2);
  log.need(sq.degree() == 1, "B2 (x) B2 has degree 1");
  log.need(same(sq, auto_machine(c)), "B2 (x) B2 is conjugation by g0 = k3*g1");
  log.note("k3 = g3^g2 in the vertex group");
}

void c6(Log& log) {
  auto f = fixture("torus32");
  Multicurve C = curves_of(f, {"x"});
  log.need(C == make_multicurve(f.machine.right, {f.machine.right.parse_word("a*d")}), "curve is ad");
  log.need(is_invariant(f.machine, C).invariant(), "{ad} invariant");
  log.need(thurston_matrix(f.machine, C) == rmat(1, {"3/2"}), "matrix (3/2)");
  auto e = extract_Mv(f.machine);
  Mat2 D;
  D << 3, 0, 0, 2;
  log.need(e.verified && (e.pair.M == D || e.pair.M == Mat2(-D)), "extract gives diag(3,2) up to sign");
  log.need(is_geometric(e.pair.M), "geometric");
  log.note("M = " + str(e.pair.M) + ", v = " + str(e.pair.v));
}

void c7(Log& log) {
  auto f = fixture("pilgrim5");
  Multicurve C = curves_of(f, {"x"});
  log.need(C == make_multicurve(f.machine.right, {f.machine.right.parse_word("a*c")}), "curve is ac");
  log.need(is_invariant(f.machine, C).invariant(), "{ac} invariant");
  RMatrix T = thurston_matrix(f.machine, C);
  log.need(T == rmat(1, {"1"}), "matrix (1)");
  auto cl = classify_multicurve(curve_graph(f.machine, C));
  log.need(cl.cantor && !cl.bicycles.empty(), "bicycle, Cantor multicurve");
  log.need(!cl.levy, "no Levy cycle");
  log.need(spectral_ge_one(T), "spectral test true");
}

void c8(Log& log) {
  auto f = fixture("tanlei");
  const Machine& B = f.machine;
  Multicurve C = curves_of(f, {"r", "s"});
  log.need(is_invariant(B, C).invariant(), "{r,s} invariant");
  RMatrix T = ordered_matrix(B, f, {"r", "s"});
  log.need(T == rmat(2, {"0", "1", "1/2", "1/2"}), "matrix [[0,1],[1/2,1/2]]");
  log.need(spectral_ge_one(T) && singular_I_minus(T), "spectral test true with I - T singular");
  auto L = levy_search(B, 4);
  log.need(L.status != Status::found, "no Levy cycle within bound 4");
  log.note(std::string("levy bound 4: ") + (L.status == Status::none ? "none" : "bound exceeded"));

  auto tree = decompose(B, parse_certificate(B, f.certificate));
  tree_verifies(tree, log, "tree");
  auto expect = [&](const std::string& v, const char* text) {
    log.need(same(vertex_machine(tree, v), parse_machine(text)), v + " matches the reference recursion");
  };
  expect("B1",
         "group <U,X,S | U*X*S>\nleft <w,z,r,s | z*w*s*r>\n"
         "U = <1, w, 1> (1,2,3)\nX = <1, s^-1, w^-1*r^-1> (2,3)\nS = <1, r, s> (1,3)\n");
  expect("B2",
         "group <w,z,r,s | z*w*s*r>\nleft <v,y,R | v*y*R>\n"
         "w = <v>\nz = <y^(v^-1)>\nr = <1>\ns = <R>\n");
  expect("B3",
         "group <v,y,R | v*y*R>\nleft <U,X,S | U*X*S>\n"
         "v = <1, U>\ny = <1, X> (1,2)\nR = <S, 1> (1,2)\n");
  int b4 = tree.vertex("B4");
  log.need(tree.vertices[b4].kind == VertexKind::annular, "B4 annular");
  {
    auto& A = tree.adapted.left;
    auto& sph = tree.tree.spheres[tree.vertices[b4].rho].images;
    Word s = tree.aliases.at("s");
    auto wr = [&](int gen) { return vertex_recursion(tree, b4, sph[gen]); };
    auto entries = [&](const Wreath& w, std::vector<Word> hs, std::vector<int> p) {
      if (perm_of(w) != p || w.size() != hs.size()) return false;
      for (size_t i = 0; i < hs.size(); ++i)
        if (A.normal_form(w[i].h) != A.normal_form(hs[i])) return false;
      return true;
    };
    log.need(entries(wr(0), {{}, {}}, {0, 1}) && entries(wr(1), {{}, {}}, {0, 1}), "B4: w, z trivial");
    log.need(entries(wr(2), {{}, s}, {1, 0}), "B4: r = <1, s> (1,2)");
    log.need(entries(wr(3), {A.inv(s), {}}, {1, 0}), "B4: s = <s^-1, 1> (1,2)");
  }
  log.need(tree.vertices[tree.vertex("B5")].kind == VertexKind::trivial, "B5 trivial");
  auto rb = return_bisets(tree);
  log.need(rb.size() == 1, "one return biset");
  if (!rb.empty())
    log.need(same(rb[0].machine,
                  parse_machine("group <U,X,S | U*X*S>\n"
                                "basis l1l2l1 l3l2l1 l1l2l2 l3l2l2 l1l2l3 l3l2l3\n"
                                "U = <1, 1, 1, U, 1, 1> (1,3,5)(2,4,6)\n"
                                "X = <1, 1, 1, U*X, 1, U^-1> (3,6,4,5)\n"
                                "S = <1, 1, 1, 1, S, 1> (1,5,2,6)\n")),
             "return machine C matches");
}

void c9(Log& log) {
  auto f = fixture("infinite_centralizer");
  const Machine& B = f.machine;
  auto& G = B.left;
  std::map<std::string, GroupMap> M;
  for (auto& [n, m] : f.maps) M.emplace(n, m);
  std::map<std::string, Word> al{{"s", G.parse_word("x3*x4")}, {"t", G.parse_word("x2*x3*x4*x5")}};
  auto prod = [&](std::vector<std::pair<std::string, int>> fs) {
    GroupMap r = identity_map(G);
    for (auto& [n, k] : fs) r = compose_maps(r, map_power(M.at(n), k));
    return r;
  };
  auto basis = [&](std::vector<const char*> ps) {
    BasisChange nb;
    for (int i = 0; i < int(ps.size()); ++i) nb.push_back({G.parse_word(ps[i], al), i});
    return nb;
  };
  std::vector<const char*> one(6, "1");
  struct Rel {
    std::string name;
    std::vector<std::pair<std::string, int>> lhs, rhs;
    std::vector<const char*> basis;
  } rels[] = {
      {"sigma", {{"sigma", 1}}, {{"sigma", 1}}, one},
      {"tau", {{"tau", 1}}, {{"sigma", 2}, {"tau", 3}}, {"s^2*t^3", "s*t^3", "s*t^3", "t^2", "t^2", "1"}},
      {"alpha", {{"alpha", 1}}, {{"alpha", 1}, {"sigma", 2}}, {"s^2", "s^2", "1", "1", "1", "1"}},
      {"beta", {{"beta", 1}}, {{"beta", 1}}, one},
  };
  for (auto& r : rels) {
    std::vector<std::pair<std::string, int>> inv;
    for (auto it = r.lhs.rbegin(); it != r.lhs.rend(); ++it) inv.push_back({it->first, -it->second});
    Machine lhs = twist(B, prod(r.rhs), prod(inv));
    log.need(same(change_basis(lhs, basis(r.basis)), B), r.name + " relation");
  }
  log.note("tau basis s^2t^3, st^3, st^3, t^2, t^2, 1; alpha basis s^2, s^2, 1, 1, 1, 1");
}

void c10(Log& log) {
  Machine z2m2 = angle_to_biset(2, Angle(1, 2));
  for (int n = 0; n <= 2; ++n) {
    std::string tag = "n=" + std::to_string(n) + " ";
    auto f = fixture("z2pi_twist", n);
    auto T = decompose(f.machine, parse_certificate(f.machine, f.certificate));
    tree_verifies(T, log, tag + "tree");
    auto conj = [](const std::string& x, int k) {
      return k == 0 ? x : x + "^(r^" + std::to_string(k) + ")";
    };
    const Machine& B1 = vertex_machine(T, "B1");
    log.need(same(B1, parse_machine("group <a,r,d | d*r*a>\n"
                                    "a = <a^-1, a> (1,2)\nr = <a, r>\nd = <d, 1> (1,2)\n")),
             tag + "B1 matches");
    std::string b2 = "group <b,c,R | c*b*R>\nbasis l2\nlet r = R^-1\nb = <" + conj("c", n) + ">\nc = <" +
                     conj("b", n - 1) + ">\nR = <R>\n";
    log.need(same(vertex_machine(T, "B2"), parse_machine(b2)), tag + "B2 matches");
    log.need(same(vertex_machine(T, "B3"), parse_machine("group <b,c,R | c*b*R>\nleft <a,r,d | d*r*a>\n"
                                                         "b = <a>\nc = <1>\nR = <a^-1>\n")),
             tag + "B3 matches");
    Machine a = relabel(z2m2, B1.left, B1.right);
    auto s = iso_search(a, B1, 3);
    log.need(bool(s) && iso_verify(a, B1, *s.value), tag + "B1 iso to the 1/2 angle machine");
  }
}

void c11(Log& log) {
  std::vector<std::string> contracting, not_contracting;
  for (auto& name : fixture_names()) {
    Machine B = fixture(name).machine;
    if (name == "torus32" || B.degree() < 2) continue;
    auto N = is_contracting(B, ord_min(B), 500);
    auto L = levy_search(B, 3);
    bool yes = N.status == Status::found;
    log.need(yes == (L.status != Status::found), name + ": contracting iff no Levy cycle");
    (yes ? contracting : not_contracting).push_back(name);
  }
  auto has = [](const std::vector<std::string>& v, const char* n) { return std::find(v.begin(), v.end(), n) != v.end(); };
  for (auto n : {"z2m1", "z2pi", "pilgrim5", "tanlei"}) log.need(has(contracting, n), std::string(n) + " contracting");
  for (auto n : {"z2pi_twist", "basilica_mating"}) log.need(has(not_contracting, n), std::string(n) + " not contracting");
  std::string s = "contracting:";
  for (auto& n : contracting) s += " " + n;
  s += "; not:";
  for (auto& n : not_contracting) s += " " + n;
  log.note(s);
}

void c12(Log& log) {
  int count = 0;
  auto check = [&](const Machine& m, const std::string& what) {
    auto r = check_sphere_biset(m);
    ++count;
    log.need(r.ok(), what + " admissible");
    log.need(r.rh_sum == 2 * m.degree() - 2, what + " RH sum 2d-2");
  };
  for (auto& name : fixture_names())
    for (int n : {0, 1, 2}) check(fixture(name, n).machine, name + " n=" + std::to_string(n));
  for (auto t : {"1/6", "1/3", "1/2", "1/7", "3/8", "5/12", "1/14"}) check(angle_to_biset(2, parse_angle(t)), t);
  for (auto t : {"1/4", "1/9", "1/6"}) check(angle_to_biset(3, parse_angle(t)), std::string("cubic ") + t);
  Machine z = fixture("z2m1").machine, f = fixture("f512").machine;
  check(mate(z, z, {"A", "B"}), "basilica mating");
  check(mate(f, f, {"h1", "h2", "h3", "h4"}), "5/12 mating");
  check(reverse_machine(z), "reversed z2m1");
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> U(-4, 4), bit(0, 1);
  for (int done = 0; done < 20;) {
    Mat2 M;
    M << U(rng), U(rng), U(rng), U(rng);
    long d = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    if (d <= 0 || d > 20) continue;
    ++done;
    check(build_Bmv({M, Vec2(bit(rng), bit(rng))}), "lattes " + str(M));
  }
  auto ic = fixture("infinite_centralizer");
  for (auto& [n, m] : ic.maps) check(twist(ic.machine, m, std::nullopt), "twist by " + n);
  log.note(std::to_string(count) + " machines");
}

void c13(Log& log) {
  std::mt19937 rng(99);
  int compared = 0, margin = 0;
  for (int i = 0; i < 500; ++i) {
    RMatrix T = testing::random_nonneg(rng);
    int o = testing::float_oracle(T);
    if (o == 0) {
      ++margin;
      continue;
    }
    ++compared;
    log.need(spectral_ge_one(T) == (o > 0), "disagreement on " + print_matrix(T, {}));
  }
  log.need(compared >= 450, "too many matrices within the oracle margin");
  for (auto& T : {rmat(1, {"1"}), rmat(2, {"0", "1", "1/2", "1/2"}), rmat(2, {"0", "2", "1/2", "0"}),
                  rmat(3, {"0", "1", "0", "0", "0", "1", "1", "0", "0"})})
    log.need(spectral_ge_one(T) && singular_I_minus(T), "boundary case " + print_matrix(T, {}));
  log.need(!spectral_ge_one(rmat(2, {"0", "1", "1/2", "0"})), "boundary case below 1");
  log.note(std::to_string(compared) + " compared, " + std::to_string(margin) + " within 1e-9 of rho = 1");
}

void c14(Log& log) {
  for (auto& name : fixture_names()) {
    auto f = fixture(name);
    std::string t = print_machine(f.machine);
    Machine back = parse_machine(t);
    log.need(back == f.machine && print_machine(back) == t, name + " round trip");
    log.need(parse_named_words(f.machine.right, print_named_words(f.machine.right, f.curves)) == f.curves,
             name + " curves round trip");
  }
  std::mt19937 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    Machine m = testing::random_machine(rng);
    std::string t = print_machine(m);
    Machine back = parse_machine(t);
    log.need(back == m && print_machine(back) == t, "random machine " + std::to_string(i));
  }
  std::string cmd = std::string("\"") + CMAKE_BIN + "\" -DCLI=\"" + CLI_BIN + "\" -DDATA=\"" + DATA_DIR +
                    "\" -P \"" + CLI_SCRIPT + "\" > /dev/null 2>&1";
  log.need(std::system(cmd.c_str()) == 0, "CLI exit codes (tests/cli_test.cmake)");
  log.note("fixtures + 1000 random machines + CLI pipelines");
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<void(Log&)>>> criteria = {
      {"angle conversion", c1},         {"Levy detection, z^2+i twists", c2},
      {"basilica mating", c3},          {"5/12 mating", c4},
      {"5/12 decomposition", c5},       {"torus maps", c6},
      {"Pilgrim's map", c7},            {"Shishikura-Tan Lei map", c8},
      {"twist identities", c9},         {"z^2+i decomposition", c10},
      {"contraction vs Levy", c11},     {"admissibility", c12},
      {"spectral oracle", c13},         {"format round trip and CLI", c14},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Log log;
    auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(log);
    } catch (const std::exception& e) {
      log.failures.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 10) log.failures.push_back("took " + std::to_string(secs) + " s");
    bool ok = log.failures.empty();
    failed += !ok;
    char head[128];
    std::snprintf(head, sizeof head, "%-4s %2zu  %-30s %6.2fs", ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs);
    std::cout << head;
    for (auto& n : log.notes) std::cout << "  [" << n << "]";
    std::cout << "\n";
    for (auto& f : log.failures) std::cout << "      - " << f << "\n";
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed\n" : "all criteria pass\n");
  return failed ? 1 : 0;
}
