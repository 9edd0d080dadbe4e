#include "thurston/constructors.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "thurston/lattes.hpp"

namespace thurston {

namespace {

// a + b * eta, eta a positive infinitesimal
struct Pos {
  Angle a, b;
  auto operator<=>(const Pos& o) const {
    if (a != o.a) return a < o.a ? std::strong_ordering::less : std::strong_ordering::greater;
    if (b != o.b) return b < o.b ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  bool operator==(const Pos& o) const { return a == o.a && b == o.b; }
};

Angle frac(const Angle& x) {
  using boost::multiprecision::mpz_int;
  mpz_int q = numerator(x) / denominator(x);
  if (q * denominator(x) > numerator(x)) q -= 1;
  return x - Angle(q);
}

}  // namespace

Angle parse_angle(std::string_view s) {
  std::string t = trim(s);
  auto slash = t.find('/');
  if (slash != std::string::npos && t.find_first_not_of("0", slash + 1) == std::string::npos)
    throw std::invalid_argument("bad angle '" + t + "'");
  try {
    Angle q(t);
    return q;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad angle '" + t + "'");
  }
}

AngleOrbit angle_orbit(int d, const Angle& theta) {
  if (d < 2) throw std::invalid_argument("degree must be at least 2");
  Angle x = frac(theta);
  if (denominator(x) == 1) throw std::invalid_argument("angle with denominator 1 marks a fixed critical value");
  AngleOrbit o;
  o.degree = d;
  while (std::find(o.angles.begin(), o.angles.end(), x) == o.angles.end()) {
    o.angles.push_back(x);
    x = frac(x * d);
  }
  o.preperiod = int(std::find(o.angles.begin(), o.angles.end(), x) - o.angles.begin());
  o.period = int(o.angles.size()) - o.preperiod;
  for (int i = 0; i < d; ++i) o.cuts.push_back((o.angles[0] + i) / d);
  return o;
}

Machine angle_to_biset(int d, const Angle& theta) {
  AngleOrbit o = angle_orbit(d, theta);
  int m = int(o.angles.size());
  std::vector<Angle> pos(m);  // angle 0 sits at 1, after the basepoint
  for (int k = 0; k < m; ++k) pos[k] = o.angles[k] == 0 ? Angle(1) : o.angles[k];
  std::vector<int> asc(m);
  std::iota(asc.begin(), asc.end(), 0);
  std::sort(asc.begin(), asc.end(), [&](int x, int y) { return pos[x] < pos[y]; });

  std::vector<std::string> names;
  for (int k = 0; k < m; ++k) names.push_back("p" + std::to_string(k + 1));
  names.push_back("inf");
  std::vector<int> rel{m};
  for (int r = m - 1; r >= 0; --r) rel.push_back(asc[r]);
  SphereGroup G(names, rel);

  // crossing loop of the r-th point in ascending order, as a word in the generators
  std::vector<Word> gamma(m);
  Word prev;
  for (int r = 0; r < m; ++r) {
    Word cur = G.mul(G.gen(asc[r]), prev);
    gamma[asc[r]] = G.mul(G.inv(prev), cur);
    prev = cur;
  }

  auto travel = [&](Word& w, const Pos& from, const Pos& to) {
    bool up = from < to;
    const Pos& lo = up ? from : to;
    const Pos& hi = up ? to : from;
    std::vector<std::pair<Pos, int>> hits;
    for (int k = 0; k < m; ++k)
      for (int n = -2; n <= 2; ++n) {
        Pos x{pos[k] + n, 0};
        if (lo < x && x < hi) hits.push_back({x, k});
      }
    std::sort(hits.begin(), hits.end(), [](auto& x, auto& y) { return x.first < y.first; });
    if (!up) std::reverse(hits.begin(), hits.end());
    for (auto& [x, k] : hits) w = G.mul(w, up ? gamma[k] : G.inv(gamma[k]));
  };

  std::vector<Wreath> trans(G.rank());
  for (int k = 0; k < m; ++k) {
    trans[k].resize(d);
    for (int i = 0; i < d; ++i) {
      int to = k == 0 ? (i + 1) % d : i;
      Word w;
      Pos p0{0, 1};
      Pos p1{Angle(i) / d, Angle(1) / d};
      Pos p2{p1.a + pos[k] / d, p1.b};
      Pos p3 = k == 0 ? Pos{p2.a + Angle(1) / d, Angle(-1) / d} : Pos{p2.a, Angle(-1) / d};
      Pos p4{p3.a - pos[k] / d, Angle(1) / d};
      travel(w, p0, p1);
      travel(w, p1, p2);
      travel(w, p3, p4);
      if (p4.a >= 1) p4.a -= 1;
      travel(w, p4, p0);
      trans[k][i] = {w, to};
    }
  }
  return make_machine(G, G, default_basis(d), trans);
}

Machine reverse_machine(const Machine& m) {
  int d = m.degree();
  Machine r = m;
  for (auto& w : r.trans)
    for (int i = 0; i < d; ++i) {
      const Entry& e = m.trans[&w - &r.trans[0]][d - 1 - i];
      w[i] = {e.h, d - 1 - e.to};
    }
  return r;
}

namespace {

int equator(const Machine& m) {
  const SphereGroup& G = m.right;
  int d = m.degree();
  for (int g = 0; g < G.rank(); ++g) {
    const Wreath& w = m.trans[g];
    int pos = 0, len = 1;
    while (w[pos].to != 0 && len <= d) { pos = w[pos].to; ++len; }
    if (len != d) continue;
    int hits = 0;
    bool ok = true;
    for (auto& e : w) {
      if (e.h == G.gen(g)) ++hits;
      else if (!e.h.empty()) ok = false;
    }
    if (ok && hits == 1) return g;
  }
  throw std::invalid_argument("machine is not in equator-standard form");
}

std::vector<int> after(const SphereGroup& G, int t) {
  const auto& r = G.relator();
  int k = int(std::find(r.begin(), r.end(), t) - r.begin());
  std::vector<int> out;
  for (size_t i = 1; i < r.size(); ++i) out.push_back(r[(k + i) % r.size()]);
  return out;
}

}  // namespace

Machine mate(const Machine& p, const Machine& q, std::vector<std::string> bar_names) {
  if (p.degree() != q.degree()) throw std::invalid_argument("mating needs equal degrees");
  if (!(p.left == p.right) || !(q.left == q.right)) throw std::invalid_argument("mating needs self-bisets");
  const SphereGroup &P = p.right, &Q = q.right;
  int tp = equator(p), tq = equator(q);
  std::vector<int> pmap(P.rank(), -1), qmap(Q.rank(), -1);
  std::vector<std::string> names;
  std::vector<int> orders;
  for (int g = 0; g < P.rank(); ++g)
    if (g != tp) {
      pmap[g] = int(names.size());
      names.push_back(P.name(g));
      orders.push_back(P.order(g));
    }
  if (bar_names.empty())
    for (int g = 0; g < Q.rank(); ++g)
      if (g != tq) bar_names.push_back(Q.name(g) + "'");
  if (int(bar_names.size()) != Q.rank() - 1) throw std::invalid_argument("wrong number of bar names");
  int j = 0;
  for (int g = 0; g < Q.rank(); ++g)
    if (g != tq) {
      qmap[g] = int(names.size());
      names.push_back(bar_names[j++]);
      orders.push_back(Q.order(g));
    }
  std::vector<int> rel, pr = after(P, tp), qr = after(Q, tq);
  Word pprod, qprod;
  for (int g : pr) { rel.push_back(pmap[g]); pprod.push_back({pmap[g], 1}); }
  for (int g : qr) { rel.push_back(qmap[g]); qprod.push_back({qmap[g], 1}); }
  SphereGroup G(names, orders, rel);

  auto image = [&](const Word& w, const std::vector<int>& map, int t, const Word& tword) {
    Word out;
    for (auto& s : w)
      if (s.gen == t) out = G.mul(out, G.pow(tword, s.exp));
      else out = G.mul(out, G.gen(map[s.gen], s.exp));
    return out;
  };
  Machine rq = reverse_machine(q);
  std::vector<Wreath> trans(G.rank());
  for (int g = 0; g < P.rank(); ++g)
    if (g != tp) {
      Wreath w = p.trans[g];
      for (auto& e : w) e.h = image(e.h, pmap, tp, qprod);
      trans[pmap[g]] = w;
    }
  for (int g = 0; g < Q.rank(); ++g)
    if (g != tq) {
      Wreath w = rq.trans[g];
      for (auto& e : w) e.h = image(e.h, qmap, tq, pprod);
      trans[qmap[g]] = w;
    }
  int e = G.eliminated();
  if (e >= 0) trans[e].clear();
  return make_machine(G, G, default_basis(p.degree()), trans);
}

namespace {

std::string z2pi_twist_text(int n) {
  auto pw = [](int k) { return "(r^" + std::to_string(k) + ")"; };
  return "group <a,b,c,d | d*c*b*a>\n"
         "let r = c*b\n"
         "a = <a^-1, a> (1,2)\n"
         "b = <a, c^" + pw(n) + ">\n"
         "c = <1, b^" + pw(n - 1) + ">\n"
         "d = <d, 1> (1,2)\n";
}

const char* kZ2pi =
    "group <a,b,c,d | d*c*b*a>\n"
    "a = <d*c, b*a> (1,2)\n"
    "b = <a, c>\n"
    "c = <b, 1>\n"
    "d = <d, 1> (1,2)\n";

const char* kZ2m1 =
    "group <a,b,t | t*b*a>\n"
    "a = <a^-1, b*a> (1,2)\n"
    "b = <a, 1>\n"
    "t = <t, 1> (1,2)\n";

const char* kZ2m2 =
    "group <a,r,d | d*r*a>\n"
    "a = <a^-1, a> (1,2)\n"
    "r = <a, r>\n"
    "d = <d, 1> (1,2)\n";

const char* kBasilicaMating =
    "group <a,b,A,B | b*a*B*A>\n"
    "a = <a^-1, b*a> (1,2)\n"
    "b = <a, 1>\n"
    "A = <B*A, A^-1> (1,2)\n"
    "B = <1, A>\n";

const char* kF512 =
    "group <t,g1,g2,g3,g4 | g4*g3*g2*g1*t>\n"
    "t = <t, 1> (1,2)\n"
    "g1 = <1, g3>\n"
    "g2 = <g1^-1*g2^-1*g3^-1, g3*g2*g1> (1,2)\n"
    "g3 = <g1, g4>\n"
    "g4 = <g2, 1>\n";

const char* kF512Mating =
    "group <g1,g2,g3,g4,h1,h2,h3,h4 | g4*g3*g2*g1*h4*h3*h2*h1>\n"
    "let t = h4*h3*h2*h1\n"
    "g1 = <1, g3>\n"
    "g2 = <t*g4, g4^-1*t^-1> (1,2)\n"
    "g3 = <g1, g4>\n"
    "g4 = <g2, 1>\n"
    "h1 = <h3, 1>\n"
    "h2 = <h4^-1*t, t^-1*h4> (1,2)\n"
    "h3 = <h4, h1>\n"
    "h4 = <1, h2>\n";

const char* kPilgrim =
    "group <a,b,c,d | d*c*b*a>\n"
    "a = <c^-1, 1, 1, 1, c> (1,5)(2,4,3)\n"
    "b = <1, 1, 1, d, d^-1> (1,2)(4,5)\n"
    "c = <a, 1, 1, a^-1, 1> (1,4)(2,3,5)\n"
    "d = <b, 1, d, a, c>\n";

const char* kTanlei =
    "group <u,v,w,x,y,z | u*w*v*x*y*z>\n"
    "let t = u*w*v\n"
    "u = <v^-1, u^-1, t> (1,2,3)\n"
    "v = <1, 1, u>\n"
    "w = <1, v, 1>\n"
    "x = <1, y*z, y^-1> (2,3)\n"
    "y = <t^-1, 1, t*x> (1,3)\n"
    "z = <1, y, 1>\n";

const char* kCentralizer =
    "group <x1,x2,x3,x4,x5,x6,x7 | x1*x2*x3*x4*x5*x6*x7>\n"
    "let s = x3*x4\n"
    "let t = x2*x3*x4*x5\n"
    "x1 = <1, s, s^-1, t, t^-1, x1> (2,3)(4,5)\n"
    "x2 = <1, 1, s^-1, x2*s, t^-1, t> (1,2)(3,4)(5,6)\n"
    "x3 = <x3, 1, 1, 1, 1, 1>\n"
    "x4 = <x4, 1, 1, 1, 1, 1>\n"
    "x5 = <1, 1, x5, 1, 1, 1> (1,2)(3,4)(5,6)\n"
    "x6 = <1, 1, 1, 1, 1, x6> (2,3)\n"
    "x7 = <1, 1, 1, 1, 1, x7> (4,5)\n";

std::vector<NamedWord> curves(const SphereGroup& G, const std::string& text) {
  return parse_named_words(G, text);
}

GroupMap map_of(const SphereGroup& G, const std::map<std::string, std::string>& moved,
                const std::string& lets = "") {
  std::map<std::string, Word> aliases;
  for (auto& nw : parse_named_words(G, lets)) aliases[nw.name] = nw.word;
  GroupMap f;
  f.source = f.target = G;
  f.automorphism = true;
  for (int g = 0; g < G.rank(); ++g) {
    auto it = moved.find(G.name(g));
    f.images.push_back(it == moved.end() ? G.gen(g) : G.parse_word(it->second, aliases));
  }
  return f;
}

GroupMap power(const GroupMap& f, int n) {
  GroupMap r = identity_map(f.source);
  if (n == 0) return r;
  GroupMap step = f;
  if (n < 0) {
    auto inv = invert_auto(f, 1000);
    if (!inv) throw std::runtime_error("cannot invert twist");
    step = *inv.value;
  }
  for (int i = 0; i < std::abs(n); ++i) r = compose_maps(r, step);
  return r;
}

std::string pow_str(const std::string& w, int n) { return "(" + w + ")^" + std::to_string(n); }

// Certificates (see decomposition.hpp for the format).
std::string dehn_cert(int n) {
  return "let r = c*b\n"
         "sphere G1 <a, r, d | d*r*a> = a, r, d\n"
         "sphere G2 <b, c, R | c*b*R> = b, c, r^-1\n"
         "curve r = r\n"
         "vertex B1 rho G1 lambda G1 basis l1\n"
         "vertex B2 rho G2 lambda G2 basis " + pow_str("r", n) + ".l1\n"
         "edge E1 B1 B2 at l1 curve r degree 1 lift r twist 1, " + pow_str("r", -n) + "\n";
}

const char* kZ2piCert =
    "let r = c*b\n"
    "sphere G1 <a, r, d | d*r*a> = a, r, d\n"
    "sphere G2 <b, c, R | c*b*R> = b, c, r^-1\n"
    "curve r = r\n"
    "vertex B1 rho G1 lambda G1 basis l1, l2\n"
    "vertex B2 rho G2 lambda G2 basis l2\n"
    "vertex B3 rho G2 lambda G1 basis l1\n"
    "edge E2 B1 B2 at l2 curve r degree 1 lift r twist 1, 1\n"
    "edge E3 B1 B3 at l1 curve r degree 1 lift a twist 1, 1\n";

const char* kMatingCert =
    "basis l1, A.l2\n"
    "let x = A*a\n"
    "sphere G1 <a, A, X | A*a*X> = a, A, x^-1\n"
    "sphere G2 <P, B, x | P*B*x> = b^a, B, x\n"
    "curve x = x\n"
    "vertex B1 rho G1 lambda G2 basis l1, l2\n"
    "vertex B2 rho G2 lambda G1 basis l2\n"
    "vertex B3 rho G2 lambda 1 basis l1\n"
    "edge E2 B1 B2 at l2 curve x degree 1 lift x^-1 twist 1, 1\n"
    "edge E3 B1 B3 at l1 curve x degree 1 lift 1 twist 1, 1\n";

const char* kF512MatingCert =
    "let t = h4*h3*h2*h1\n"
    "let u = h2*g2\n"
    "let v = g4^(t^-1)*h4\n"
    "sphere G1 <g2, h2, U | h2*g2*U> = g2, h2, u^-1\n"
    "sphere G2 <g1, k3, k1, h3, u, v | v*h3*u*k1*k3*g1> = g1, g3^g2, h1^g2, h3, u, v\n"
    "sphere G3 <k4, h4, V | k4*h4*V> = g4^(t^-1), h4, v^-1\n"
    "curve u = u\n"
    "curve v = v\n"
    "vertex B1 rho G1 lambda v basis l1, (g1^-1*g2^-1*g3^-1).l2\n"
    "vertex B2 rho G2 lambda G2 basis (g1^-1*g2^-1*g3^-1).l2\n"
    "vertex B3 rho G3 lambda G1 basis l2\n"
    "vertex B4 rho G2 lambda G3 basis l1\n"
    "vertex B5 rho G3 lambda 1 basis l1\n";

const char* kTanleiCert =
    "basis v.l1, v.l2, (u*w)^-1.l3\n"
    "let r = v*y\n"
    "let s = u^w*x^(v^-1)\n"
    "sphere G1 <U, X, S | U*X*S> = u^w, x^(v^-1), s^-1\n"
    "sphere G2 <w, z, r, s | z*w*s*r> = w, z, r, s\n"
    "sphere G3 <v, y, R | v*y*R> = v, y, r^-1\n"
    "curve r = r\n"
    "curve s = s\n"
    "vertex B1 rho G1 lambda G2 basis l1, l2, l3\n"
    "vertex B2 rho G2 lambda G3 basis l2\n"
    "vertex B3 rho G3 lambda G1 basis l1, l3\n"
    "vertex B4 rho G2 lambda s basis l1, l3\n"
    "vertex B5 rho G3 lambda 1 basis l2\n";

}  // namespace

std::vector<std::string> fixture_names() {
  return {"z2pi", "z2pi_twist", "z2m1", "z2m2", "dehn_twist", "basilica_mating", "f512",
          "f512_mating", "torus32", "pilgrim5", "tanlei", "infinite_centralizer"};
}

Fixture fixture(const std::string& name, int n) {
  Fixture f;
  f.name = name;
  auto with_text = [&](const std::string& text) {
    f.machine = parse_machine(text);
    return f.machine.right;
  };
  if (name == "z2pi" || name == "z2pi_twist") {
    const SphereGroup& G = with_text(name == "z2pi" ? std::string(kZ2pi) : z2pi_twist_text(n));
    f.summary = name == "z2pi" ? "z^2+i" : "T^n o f, obstructed cousin of z^2+i (n = " + std::to_string(n) + ")";
    f.curves = curves(G, "r = c*b");
    f.maps.push_back({"T", map_of(G, {{"b", "b^r"}, {"c", "c^r"}}, "r = c*b")});
    f.maps.push_back({"U", map_of(G, {{"a", "a^(b*a)"}, {"b", "b^a"}})});
    if (name == "z2pi_twist") f.certificate = kZ2piCert;
  } else if (name == "z2m1") {
    with_text(kZ2m1);
    f.summary = "z^2-1";
  } else if (name == "z2m2") {
    with_text(kZ2m2);
    f.summary = "z^2-2";
  } else if (name == "dehn_twist") {
    SphereGroup G = parse_group("<a,b,c,d | d*c*b*a>");
    GroupMap T = map_of(G, {{"b", "b^r"}, {"c", "c^r"}}, "r = c*b");
    f.machine = auto_machine(power(T, n));
    f.machine.basis = default_basis(1);
    f.summary = "T^n, Dehn twist about cb (n = " + std::to_string(n) + ")";
    f.curves = curves(G, "r = c*b");
    f.maps.push_back({"T", T});
    f.certificate = dehn_cert(n);
  } else if (name == "basilica_mating") {
    const SphereGroup& G = with_text(kBasilicaMating);
    f.summary = "formal mating of z^2-1 with itself";
    f.curves = curves(G, "ba = b*a\nx = A*a");
    f.certificate = kMatingCert;
  } else if (name == "f512") {
    const SphereGroup& G = with_text(kF512);
    f.summary = "topological polynomial with lamination angle 5/12";
    f.curves = curves(G, "g0 = g3^g2*g1");
  } else if (name == "f512_mating") {
    const SphereGroup& G = with_text(kF512Mating);
    f.summary = "formal mating of f_5/12 with itself";
    f.curves = curves(G,
                      "t = h4*h3*h2*h1\n"
                      "g0 = g3^g2*g1\nh0 = h3^h2*h1\nr = g3*h1\ns = g1*h3\n"
                      "u = h2*g2\nv = g4^(t^-1)*h4");
    f.curves.erase(f.curves.begin());
    f.certificate = kF512MatingCert;
  } else if (name == "torus32") {
    Mat2 M;
    M << 3, 0, 0, 2;
    f.machine = build_Bmv({M, Vec2::Zero()}, group_2222());
    f.summary = "map doubly covered by the torus endomorphism diag(3,2)";
    f.curves = curves(f.machine.right, "x = a*d");
  } else if (name == "pilgrim5") {
    const SphereGroup& G = with_text(kPilgrim);
    f.summary = "degree-5 arc blow-up of the doubling torus map";
    f.curves = curves(G, "x = a*c");
  } else if (name == "tanlei") {
    const SphereGroup& G = with_text(kTanlei);
    f.summary = "cubic example with an annular obstruction and no Levy cycle";
    f.curves = curves(G, "r = v*y\ns = u^w*x^(v^-1)");
    f.certificate = kTanleiCert;
  } else if (name == "infinite_centralizer") {
    const SphereGroup& G = with_text(kCentralizer);
    f.summary = "degree-6 map with infinitely generated centralizer";
    f.curves = curves(G, "s = x3*x4\nt = x2*x3*x4*x5");
    std::string lets = "s = x3*x4\nt = x2*x3*x4*x5";
    f.maps.push_back({"sigma", map_of(G, {{"x3", "x3^s"}, {"x4", "x4^s"}}, lets)});
    f.maps.push_back({"tau", map_of(G, {{"x2", "x2^t"}, {"x3", "x3^t"}, {"x4", "x4^t"}, {"x5", "x5^t"}}, lets)});
    f.maps.push_back({"alpha", map_of(G, {{"x1", "x1^(t*x6*t^-1)"}, {"x6", "x6^(t^-1*x1*t*x6)"}}, lets)});
    f.maps.push_back({"beta", map_of(G, {{"x6", "x6^(x6*x7)"}, {"x7", "x7^(x6*x7)"}}, lets)});
  } else {
    throw std::invalid_argument("unknown example '" + name + "'");
  }
  return f;
}

}  // namespace thurston
