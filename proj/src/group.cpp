#include "thurston/group.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace thurston {

namespace {

struct K {
  long x = 0, y = 0;
  int s = 1;
};

K kmul(K a, K b) { return {a.x + a.s * b.x, a.y + a.s * b.y, a.s * b.s}; }

Word reverse_inverse(const Word& w) {
  Word r;
  for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back({it->gen, -it->exp});
  return r;
}

}  // namespace

SphereGroup::SphereGroup(std::vector<std::string> names, std::vector<int> orders,
                         std::vector<int> relator)
    : names_(std::move(names)), orders_(std::move(orders)), relator_(std::move(relator)) {
  int n = rank();
  if (n < 2) throw std::invalid_argument("sphere group needs at least 2 generators");
  if (int(orders_.size()) != n) throw std::invalid_argument("order list length mismatch");
  std::vector<int> seen(n, 0);
  if (int(relator_.size()) != n) throw std::invalid_argument("relator must list every generator once");
  for (int g : relator_) {
    if (g < 0 || g >= n || seen[g]++) throw std::invalid_argument("relator must list every generator once");
  }
  for (int i = 0; i < n; ++i) {
    if (orders_[i] != kInf && orders_[i] < 2) throw std::invalid_argument("orders must be >= 2 or infinite");
    for (int j = 0; j < i; ++j)
      if (names_[i] == names_[j]) throw std::invalid_argument("duplicate generator " + names_[i]);
  }
  for (int g : relator_)
    if (orders_[g] == kInf) { elim_ = g; break; }
  if (elim_ < 0) {
    bool tor = n == 4 && std::all_of(orders_.begin(), orders_.end(), [](int e) { return e == 2; });
    if (!tor) throw std::invalid_argument("unsupported orbisphere profile");
    tor_ = true;
    for (int i = 0; i < 4; ++i) slot_[i] = relator_[i];
    return;
  }
  int p = int(std::find(relator_.begin(), relator_.end(), elim_) - relator_.begin());
  for (int i = p - 1; i >= 0; --i) push(elim_word_, {relator_[i], -1});
  for (int i = n - 1; i > p; --i) push(elim_word_, {relator_[i], -1});
}

int SphereGroup::index(std::string_view n) const {
  for (int i = 0; i < rank(); ++i)
    if (names_[i] == n) return i;
  return -1;
}

bool SphereGroup::all_free() const {
  if (tor_) return false;
  for (int i = 0; i < rank(); ++i)
    if (i != elim_ && orders_[i] != kInf) return false;
  return true;
}

int SphereGroup::canon_exp(int g, long k) const {
  int e = orders_[g];
  if (e == kInf) return int(k);
  long r = ((k % e) + e) % e;
  if (r > e / 2) r -= e;
  return int(r);
}

void SphereGroup::push(Word& w, Syl s) const {
  int k = canon_exp(s.gen, s.exp);
  if (k == 0) return;
  if (!w.empty() && w.back().gen == s.gen) {
    int m = canon_exp(s.gen, long(w.back().exp) + k);
    if (m == 0)
      w.pop_back();
    else
      w.back().exp = m;
    return;
  }
  w.push_back({s.gen, k});
}

namespace {

K k_of_gen(const int* slot, int g) {
  // x1=(0,1) x2=(1,1) x3=(1,0) x4=(0,0), all with sign -1
  static const long vx[4] = {0, 1, 1, 0}, vy[4] = {1, 1, 0, 0};
  for (int i = 0; i < 4; ++i)
    if (slot[i] == g) return {vx[i], vy[i], -1};
  return {};
}

}  // namespace

Word SphereGroup::normal_form(const Word& formal) const {
  for (auto& s : formal)
    if (s.gen < 0 || s.gen >= rank()) throw std::invalid_argument("unknown generator");
  if (tor_) {
    K acc;
    for (auto& s : formal)
      if (s.exp % 2) acc = kmul(acc, k_of_gen(slot_, s.gen));
    Word w;
    int x1 = slot_[0], x3 = slot_[2], x4 = slot_[3];
    int last = -1;
    if (acc.s < 0) {
      long rx = ((acc.x % 2) + 2) % 2, ry = ((acc.y % 2) + 2) % 2;
      last = slot_[rx ? (ry ? 1 : 2) : (ry ? 0 : 3)];
      acc.x -= rx;
      acc.y -= ry;
    }
    for (long i = 0; i < std::labs(acc.x); ++i) {
      if (acc.x > 0) { push(w, {x3, 1}); push(w, {x4, 1}); }
      else { push(w, {x4, 1}); push(w, {x3, 1}); }
    }
    for (long i = 0; i < std::labs(acc.y); ++i) {
      if (acc.y > 0) { push(w, {x1, 1}); push(w, {x4, 1}); }
      else { push(w, {x4, 1}); push(w, {x1, 1}); }
    }
    if (last >= 0) push(w, {last, 1});
    return w;
  }
  Word w;
  for (auto& s : formal) {
    if (s.gen == elim_) {
      const Word& e = s.exp > 0 ? elim_word_ : reverse_inverse(elim_word_);
      for (long i = 0; i < std::labs(long(s.exp)); ++i)
        for (auto& t : e) push(w, t);
    } else {
      push(w, s);
    }
  }
  return w;
}

Word SphereGroup::mul(const Word& u, const Word& v) const {
  if (tor_) {
    Word c = u;
    c.insert(c.end(), v.begin(), v.end());
    return normal_form(c);
  }
  Word w = u;
  for (auto& s : v) push(w, s);
  return w;
}

Word SphereGroup::mul(std::initializer_list<Word> ws) const {
  Word r;
  for (auto& w : ws) r = mul(r, w);
  return r;
}

Word SphereGroup::inv(const Word& u) const {
  if (tor_) return normal_form(reverse_inverse(u));
  Word r;
  for (auto it = u.rbegin(); it != u.rend(); ++it) push(r, {it->gen, -it->exp});
  return r;
}

Word SphereGroup::pow(const Word& u, long k) const {
  Word b = k < 0 ? inv(u) : u, r;
  for (long i = 0; i < std::labs(k); ++i) r = mul(r, b);
  return r;
}

Word SphereGroup::relator_word() const {
  Word f;
  for (int g : relator_) f.push_back({g, 1});
  return f;
}

// word := "1" | factor ("*" factor)* ; factor := primary ("^" exponent)*
// primary := ident | "(" word ")" ; exponent := int | "-"? primary
namespace {

struct WordParser {
  const SphereGroup& G;
  std::string_view s;
  const std::map<std::string, Word>* aliases = nullptr;
  size_t p = 0;

  [[noreturn]] void fail(const std::string& m) const {
    throw ParseError(m, 0, int(p) + 1);
  }
  void ws() {
    while (p < s.size() && std::isspace((unsigned char)s[p])) ++p;
  }
  bool eat(char c) {
    ws();
    if (p < s.size() && s[p] == c) { ++p; return true; }
    return false;
  }
  static bool idstart(char c) { return std::isalpha((unsigned char)c) || c == '_'; }
  static bool idchar(char c) { return std::isalnum((unsigned char)c) || c == '_' || c == '\''; }

  Word word() {
    ws();
    Word w = factor();
    while (eat('*')) w = G.mul(w, factor());
    return w;
  }
  Word primary() {
    ws();
    if (eat('(')) {
      Word w = word();
      if (!eat(')')) fail("expected ')'");
      return w;
    }
    if (p < s.size() && s[p] == '1' && (p + 1 == s.size() || !std::isdigit((unsigned char)s[p + 1]))) {
      ++p;
      return {};
    }
    if (p >= s.size() || !idstart(s[p])) fail("expected generator");
    size_t b = p;
    while (p < s.size() && idchar(s[p])) ++p;
    std::string id(s.substr(b, p - b));
    int g = G.index(id);
    if (g >= 0) return G.gen(g);
    if (aliases) {
      auto it = aliases->find(id);
      if (it != aliases->end()) return it->second;
    }
    p = b;
    fail("unknown generator '" + id + "'");
  }
  Word factor() {
    Word w = primary();
    while (eat('^')) {
      ws();
      bool neg = false;
      if (p < s.size() && s[p] == '-') { neg = true; ++p; ws(); }
      if (p < s.size() && std::isdigit((unsigned char)s[p])) {
        long k = 0;
        while (p < s.size() && std::isdigit((unsigned char)s[p])) k = k * 10 + (s[p++] - '0');
        w = G.pow(w, neg ? -k : k);
      } else {
        Word c = primary();
        w = G.conj(w, c);
        if (neg) w = G.inv(w);
      }
    }
    return w;
  }
};

}  // namespace

Word SphereGroup::parse_word(std::string_view s) const {
  static const std::map<std::string, Word> none;
  return parse_word(s, none);
}

Word SphereGroup::parse_word(std::string_view s, const std::map<std::string, Word>& aliases) const {
  WordParser P{*this, s, &aliases};
  Word w = P.word();
  P.ws();
  if (P.p != s.size()) P.fail("unexpected character");
  return w;
}

namespace {

std::string syl_str(const SphereGroup& G, int g, int k) {
  std::string r = G.name(g);
  if (k != 1) r += "^" + std::to_string(k);
  return r;
}

}  // namespace

std::string SphereGroup::str(const Word& w) const {
  if (w.empty()) return "1";
  std::vector<Syl> letters;
  for (auto& s : w)
    for (int i = 0; i < std::abs(s.exp); ++i) letters.push_back({s.gen, s.exp > 0 ? 1 : -1});
  std::vector<Syl> out;
  if (!tor_ && !elim_word_.empty()) {
    std::vector<Syl> P, Q;
    for (auto& s : elim_word_)
      for (int i = 0; i < std::abs(s.exp); ++i) P.push_back({s.gen, s.exp > 0 ? 1 : -1});
    for (auto it = P.rbegin(); it != P.rend(); ++it) {
      int e = orders_[it->gen] == 2 ? 1 : -it->exp;
      Q.push_back({it->gen, e});
    }
    size_t i = 0;
    while (i < letters.size()) {
      auto match = [&](const std::vector<Syl>& pat) {
        return i + pat.size() <= letters.size() &&
               std::equal(pat.begin(), pat.end(), letters.begin() + long(i));
      };
      if (P.size() > 1 && match(P)) { out.push_back({elim_, 1}); i += P.size(); }
      else if (P.size() > 1 && match(Q)) { out.push_back({elim_, -1}); i += Q.size(); }
      else out.push_back(letters[i++]);
    }
  } else {
    out = letters;
  }
  std::string r;
  for (size_t i = 0; i < out.size();) {
    size_t j = i;
    int k = 0;
    while (j < out.size() && out[j].gen == out[i].gen && out[j].exp == out[i].exp) k += out[j++].exp;
    if (!r.empty()) r += "*";
    r += syl_str(*this, out[i].gen, k);
    i = j;
  }
  return r;
}

std::string SphereGroup::describe() const {
  std::string r = "<";
  for (int i = 0; i < rank(); ++i) {
    if (i) r += ",";
    r += names_[i];
  }
  r += " | ";
  for (int i = 0; i < rank(); ++i) {
    if (i) r += "*";
    r += names_[relator_[i]];
  }
  for (int i = 0; i < rank(); ++i)
    if (orders_[i] != kInf) r += ", " + names_[i] + "^" + std::to_string(orders_[i]);
  return r + ">";
}

int word_length(const Word& w) {
  int n = 0;
  for (auto& s : w) n += std::abs(s.exp);
  return n;
}

namespace {

K k_of_word(const SphereGroup& G, const Word& w) {
  // normal forms of the 2222 group are products of generators
  K acc;
  std::vector<int> slot(4);
  for (int i = 0; i < 4; ++i) slot[i] = G.relator()[i];
  for (auto& s : w)
    if (s.exp % 2) acc = kmul(acc, k_of_gen(slot.data(), s.gen));
  return acc;
}

Word word_of_k(const SphereGroup& G, K k) {
  int x1 = G.relator()[0], x3 = G.relator()[2], x4 = G.relator()[3];
  Word f;
  for (long i = 0; i < std::labs(k.x); ++i) {
    if (k.x > 0) { f.push_back({x3, 1}); f.push_back({x4, 1}); }
    else { f.push_back({x4, 1}); f.push_back({x3, 1}); }
  }
  for (long i = 0; i < std::labs(k.y); ++i) {
    if (k.y > 0) { f.push_back({x1, 1}); f.push_back({x4, 1}); }
    else { f.push_back({x4, 1}); f.push_back({x1, 1}); }
  }
  if (k.s < 0) f.push_back({x4, 1});
  return G.normal_form(f);
}

Word least_rotation(const Word& w) {
  Word best = w;
  for (size_t i = 1; i < w.size(); ++i) {
    Word r(w.begin() + long(i), w.end());
    r.insert(r.end(), w.begin(), w.begin() + long(i));
    if (r < best) best = r;
  }
  return best;
}

}  // namespace

CyclicForm cyclic_reduce(const SphereGroup& G, const Word& w) {
  if (G.is_2222()) {
    K k = k_of_word(G, w);
    if (k.s > 0) {
      bool flip = k.x < 0 || (k.x == 0 && k.y < 0);
      K r{flip ? -k.x : k.x, flip ? -k.y : k.y, 1};
      Word c = flip ? G.gen(G.relator()[3]) : Word{};
      return {c, word_of_k(G, r)};
    }
    auto md = [](long v) { return ((v % 2) + 2) % 2; };
    K r{md(k.x), md(k.y), -1};
    K m{(r.x - k.x) / 2, (r.y - k.y) / 2, 1};
    return {word_of_k(G, m), word_of_k(G, r)};
  }
  Word c, r = G.normal_form(w);
  while (r.size() >= 2 && r.front().gen == r.back().gen) {
    Word s{r.front()};
    r = G.mul({G.inv(s), r, s});
    c = G.mul(c, s);
  }
  return {c, r};
}

ConjClass conj_class(const SphereGroup& G, const Word& w, bool oriented) {
  CyclicForm f = cyclic_reduce(G, w);
  if (G.is_2222()) return {oriented, f.reduced};
  Word best = least_rotation(f.reduced);
  if (!oriented) {
    Word alt = least_rotation(cyclic_reduce(G, G.inv(f.reduced)).reduced);
    if (alt < best) best = alt;
  }
  return {oriented, best};
}

std::optional<Word> are_conjugate(const SphereGroup& G, const Word& u, const Word& v,
                                  bool oriented) {
  CyclicForm cu = cyclic_reduce(G, u);
  std::vector<Word> targets{v};
  if (!oriented) targets.push_back(G.inv(v));
  for (auto& t : targets) {
    CyclicForm ct = cyclic_reduce(G, t);
    if (G.is_2222()) {
      if (cu.reduced == ct.reduced) return G.mul(cu.conj, G.inv(ct.conj));
      continue;
    }
    const Word& r = cu.reduced;
    if (r.size() != ct.reduced.size()) continue;
    if (r.empty()) return G.mul(cu.conj, G.inv(ct.conj));
    for (size_t i = 0; i < r.size(); ++i) {
      Word A(r.begin(), r.begin() + long(i));
      if (G.conj(r, A) == ct.reduced) return G.mul({cu.conj, A, G.inv(ct.conj)});
    }
  }
  return std::nullopt;
}

Classification classify_class(const SphereGroup& G, const ConjClass& c) {
  const Word& f = c.form;
  if (f.empty()) return {ClassKind::trivial, -1, 0};
  if (f.size() == 1) {
    int k = f[0].exp;
    return {ClassKind::peripheral, f[0].gen, c.oriented ? k : std::abs(k)};
  }
  if (G.is_2222()) return {ClassKind::essential, -1, 0};
  Word e = G.gen(G.eliminated());
  int m = int(e.size());
  if (m > 0 && int(f.size()) % m == 0) {
    int k = int(f.size()) / m;
    for (int sg : {1, -1})
      if (conj_class(G, G.pow(e, sg * k), c.oriented).form == f)
        return {ClassKind::peripheral, G.eliminated(), c.oriented ? sg * k : k};
  }
  return {ClassKind::essential, -1, 0};
}

int cyclic_length(const ConjClass& c) { return word_length(c.form); }

std::string str(const SphereGroup& G, const ConjClass& c) {
  if (c.oriented) return G.str(c.form);
  auto neg = [](const Word& w) {
    long n = 0;
    for (auto& s : w) n += s.exp < 0 ? -s.exp : 0;
    return n;
  };
  Word inv = G.inv(c.form);
  return G.str(neg(inv) < neg(c.form) ? inv : c.form);
}

Word GroupMap::apply(const Word& w) const {
  Word r;
  for (auto& s : w) r = target.mul(r, target.pow(images[s.gen], s.exp));
  return r;
}

bool GroupMap::is_homomorphism() const {
  if (int(images.size()) != source.rank()) return false;
  if (!apply(source.relator_word()).empty()) return false;
  for (int i = 0; i < source.rank(); ++i)
    if (source.order(i) != kInf && !target.pow(images[i], source.order(i)).empty()) return false;
  return true;
}

GroupMap identity_map(const SphereGroup& G) {
  GroupMap m{G, G, {}, true};
  for (int i = 0; i < G.rank(); ++i) m.images.push_back(G.gen(i));
  return m;
}

GroupMap make_map(const SphereGroup& S, const SphereGroup& T,
                  const std::vector<std::string>& images, bool aut) {
  if (int(images.size()) != S.rank()) throw std::invalid_argument("image count mismatch");
  GroupMap m{S, T, {}, aut};
  for (auto& s : images) m.images.push_back(T.parse_word(s));
  return m;
}

GroupMap compose_maps(const GroupMap& first, const GroupMap& second) {
  if (!(first.target == second.source)) throw std::invalid_argument("maps do not compose");
  GroupMap m{first.source, second.target, {}, first.automorphism && second.automorphism};
  for (auto& w : first.images) m.images.push_back(second.apply(w));
  return m;
}

namespace {

bool round_trip(const GroupMap& m, const GroupMap& inv) {
  for (int i = 0; i < m.source.rank(); ++i)
    if (inv.apply(m.images[i]) != m.source.gen(i)) return false;
  for (int i = 0; i < m.target.rank(); ++i)
    if (m.apply(inv.images[i]) != m.target.gen(i)) return false;
  return true;
}

}  // namespace

Search<GroupMap> invert_auto(const GroupMap& m, int bound) {
  Search<GroupMap> out;
  if (!m.automorphism) throw std::invalid_argument("map is not claimed to be an automorphism");
  const SphereGroup &S = m.source, &T = m.target;
  GroupMap inv{T, S, std::vector<Word>(T.rank()), true};
  std::vector<int> live;
  for (int i = 0; i < S.rank(); ++i)
    if (i != S.eliminated()) live.push_back(i);
  if (T.all_free()) {
    std::vector<Word> imgs;
    for (int i : live) imgs.push_back(m.images[i]);
    for (int j = 0; j < T.rank(); ++j) {
      auto r = subgroup_rewrite(T, imgs, T.gen(j));
      if (!r) {
        out.status = Status::none;
        out.note = "image misses generator " + T.name(j);
        return out;
      }
      if (word_length(*r) > bound) {
        out.status = Status::bound_exceeded;
        out.note = "inverse image of " + T.name(j) + " longer than " + std::to_string(bound);
        return out;
      }
      Word v;
      for (auto& s : *r) v = S.mul(v, S.pow(S.gen(live[s.gen]), s.exp));
      inv.images[j] = v;
    }
  } else {
    auto words = enumerate_words(S, bound);
    for (int j = 0; j < T.rank(); ++j) {
      Word want = T.gen(j);
      bool ok = false;
      for (auto& w : words)
        if (m.apply(w) == want) { inv.images[j] = w; ok = true; break; }
      if (!ok) {
        out.status = Status::bound_exceeded;
        out.note = "no preimage of " + T.name(j) + " up to length " + std::to_string(bound);
        return out;
      }
    }
  }
  if (!round_trip(m, inv)) {
    out.status = Status::none;
    out.note = "round trip failed";
    return out;
  }
  out.status = Status::found;
  out.value = inv;
  return out;
}

namespace {

Word free_push(Word w, Syl s) {
  if (!w.empty() && w.back().gen == s.gen) {
    w.back().exp += s.exp;
    if (w.back().exp == 0) w.pop_back();
  } else if (s.exp) {
    w.push_back(s);
  }
  return w;
}

Word free_mul(const Word& a, const Word& b) {
  Word r = a;
  for (auto& s : b) r = free_push(r, s);
  return r;
}

Word free_inv(const Word& a) { return reverse_inverse(a); }

struct FEdge {
  int from, to, gen;
  Word label;
  bool alive = true;
};

}  // namespace

std::optional<Word> subgroup_rewrite(const SphereGroup& G, const std::vector<Word>& gens,
                                     const Word& g) {
  if (!G.all_free()) throw std::domain_error("subgroup membership: unsupported group profile");
  if (gens.empty()) throw std::invalid_argument("subgroup needs generators");
  std::vector<FEdge> E;
  int nv = 1;
  for (int j = 0; j < int(gens.size()); ++j) {
    std::vector<Syl> L;
    for (auto& s : gens[j])
      for (int i = 0; i < std::abs(s.exp); ++i) L.push_back({s.gen, s.exp > 0 ? 1 : -1});
    if (L.empty()) continue;
    int cur = 0;
    for (size_t p = 0; p < L.size(); ++p) {
      int next = p + 1 == L.size() ? 0 : nv++;
      Word lab = p == 0 ? Word{{j, 1}} : Word{};
      if (L[p].exp > 0) E.push_back({cur, next, L[p].gen, lab});
      else E.push_back({next, cur, L[p].gen, free_inv(lab)});
      cur = next;
    }
  }
  // fold until deterministic
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t a = 0; a < E.size() && !changed; ++a) {
      if (!E[a].alive) continue;
      for (size_t b = a + 1; b < E.size() && !changed; ++b) {
        if (!E[b].alive || E[a].gen != E[b].gen) continue;
        int v = -1, v1 = -1, v2 = -1;
        Word l1, l2;
        if (E[a].from == E[b].from) {
          v = E[a].from; v1 = E[a].to; v2 = E[b].to; l1 = E[a].label; l2 = E[b].label;
        } else if (E[a].to == E[b].to) {
          v = E[a].to; v1 = E[a].from; v2 = E[b].from;
          l1 = free_inv(E[a].label); l2 = free_inv(E[b].label);
        } else {
          continue;
        }
        (void)v;
        changed = true;
        E[b].alive = false;
        if (v1 == v2) break;
        int keep = v1, gone = v2;
        if (gone == 0) { std::swap(keep, gone); std::swap(l1, l2); }
        Word t = free_mul(free_inv(l1), l2);
        for (auto& e : E) {
          if (!e.alive) continue;
          if (e.from == gone) { e.label = free_mul(t, e.label); e.from = keep; }
          if (e.to == gone) { e.label = free_mul(e.label, free_inv(t)); e.to = keep; }
        }
      }
    }
  }
  int cur = 0;
  Word acc;
  for (auto& s : g) {
    for (int i = 0; i < std::abs(s.exp); ++i) {
      bool fwd = s.exp > 0, ok = false;
      for (auto& e : E) {
        if (!e.alive || e.gen != s.gen) continue;
        if (fwd && e.from == cur) { acc = free_mul(acc, e.label); cur = e.to; ok = true; break; }
        if (!fwd && e.to == cur) { acc = free_mul(acc, free_inv(e.label)); cur = e.from; ok = true; break; }
      }
      if (!ok) return std::nullopt;
    }
  }
  if (cur != 0) return std::nullopt;
  return acc;
}

Word evaluate(const SphereGroup& G, const std::vector<Word>& gens, const Word& over) {
  Word r;
  for (auto& s : over) r = G.mul(r, G.pow(gens.at(s.gen), s.exp));
  return r;
}

std::vector<Word> enumerate_words(const SphereGroup& G, int bound) {
  std::vector<Word> letters;
  for (int i = 0; i < G.rank(); ++i) {
    if (i == G.eliminated()) continue;
    letters.push_back(G.gen(i));
    if (G.order(i) != 2) letters.push_back(G.gen(i, -1));
  }
  std::set<Word> seen{Word{}};
  std::vector<Word> all{Word{}}, level{Word{}};
  for (int L = 1; L <= bound; ++L) {
    std::vector<Word> next;
    for (auto& w : level)
      for (auto& l : letters) {
        Word x = G.mul(w, l);
        if (seen.insert(x).second) next.push_back(x);
      }
    all.insert(all.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return all;
}

}  // namespace thurston
