#include "thurston/format.hpp"

#include <cctype>
#include <sstream>

namespace thurston {

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace((unsigned char)s[b])) ++b;
  while (e > b && std::isspace((unsigned char)s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::pair<int, std::string>> logical_lines(std::string_view text) {
  std::vector<std::pair<int, std::string>> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    if (trim(line).empty()) continue;
    out.push_back({no, line});
  }
  return out;
}

std::vector<std::string> split_top(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  size_t b = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == sep && depth == 0) {
      out.emplace_back(s.substr(b, i - b));
      b = i + 1;
    }
  }
  out.emplace_back(s.substr(b));
  return out;
}

namespace {

[[noreturn]] void fail(const std::string& m, int line, int col) { throw ParseError(m, line, col); }

bool is_ident(const std::string& s) {
  if (s.empty() || !(std::isalpha((unsigned char)s[0]) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum((unsigned char)c) || c == '_' || c == '\'')) return false;
  return true;
}

SphereGroup group_at(std::string_view text, int line, int col0) {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '<' || t.back() != '>') fail("group must be written <gens | relator>", line, col0);
  std::string body = t.substr(1, t.size() - 2);
  auto bar = body.find('|');
  if (bar == std::string::npos) fail("group needs '|'", line, col0);
  std::vector<std::string> names;
  for (auto& n : split_top(body.substr(0, bar), ',')) {
    std::string x = trim(n);
    if (!is_ident(x)) fail("bad generator name '" + x + "'", line, col0);
    names.push_back(x);
  }
  auto rels = split_top(body.substr(bar + 1), ',');
  std::vector<int> relator, orders(names.size(), kInf);
  auto idx = [&](const std::string& n) {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return int(i);
    fail("unknown generator '" + n + "'", line, col0);
  };
  for (auto& f : split_top(rels[0], '*')) relator.push_back(idx(trim(f)));
  for (size_t i = 1; i < rels.size(); ++i) {
    std::string r = trim(rels[i]);
    auto c = r.find('^');
    if (c == std::string::npos) fail("order relation must be g^k", line, col0);
    int k = 0;
    try { k = std::stoi(r.substr(c + 1)); } catch (...) { fail("bad order in '" + r + "'", line, col0); }
    orders[idx(trim(r.substr(0, c)))] = k;
  }
  try {
    return SphereGroup(names, orders, relator);
  } catch (const std::invalid_argument& e) {
    fail(e.what(), line, col0);
  }
}

std::vector<int> parse_perm(const std::string& s, int d, int line, int col0) {
  std::vector<int> p(d);
  for (int i = 0; i < d; ++i) p[i] = i;
  size_t i = 0;
  auto ws = [&] { while (i < s.size() && std::isspace((unsigned char)s[i])) ++i; };
  std::vector<int> seen(d, 0);
  ws();
  while (i < s.size()) {
    if (s[i] != '(') fail("expected '(' in permutation", line, col0 + int(i));
    ++i;
    std::vector<int> cyc;
    ws();
    if (i < s.size() && s[i] == ')') { ++i; ws(); continue; }
    while (true) {
      ws();
      size_t b = i;
      while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
      if (b == i) fail("expected integer in permutation", line, col0 + int(i));
      int v = std::stoi(s.substr(b, i - b));
      if (v < 1 || v > d) fail("arity mismatch: point " + std::to_string(v) + " exceeds degree " + std::to_string(d), line, col0 + int(b));
      if (seen[v - 1]++) fail("repeated point in permutation", line, col0 + int(b));
      cyc.push_back(v - 1);
      ws();
      if (i < s.size() && s[i] == ',') { ++i; continue; }
      if (i < s.size() && s[i] == ')') { ++i; break; }
      fail("expected ',' or ')' in permutation", line, col0 + int(i));
    }
    if (cyc.size() < 2) fail("cycle needs at least two points", line, col0 + int(i));
    for (size_t k = 0; k < cyc.size(); ++k) p[cyc[k]] = cyc[(k + 1) % cyc.size()];
    ws();
  }
  return p;
}

}  // namespace

SphereGroup parse_group(std::string_view text) { return group_at(text, 1, 1); }

std::string print_group(const SphereGroup& G) { return G.describe(); }

Machine parse_machine(std::string_view text) {
  std::optional<SphereGroup> right, left;
  int degree = -1;
  std::vector<std::string> basis;
  std::map<std::string, Word> lets;
  std::vector<Wreath> trans;
  std::vector<int> have;
  auto lines = logical_lines(text);
  for (auto& [no, raw] : lines) {
    std::string line = trim(raw);
    int col0 = int(raw.find_first_not_of(" \t")) + 1;
    auto kw = line.substr(0, line.find_first_of(" \t<"));
    std::string rest = trim(line.substr(kw.size()));
    if (kw == "group" || kw == "left") {
      (kw == "group" ? right : left) = group_at(rest, no, col0);
      continue;
    }
    if (kw == "degree") {
      try { degree = std::stoi(rest); } catch (...) { fail("bad degree", no, col0); }
      if (degree < 1) fail("degree must be positive", no, col0);
      continue;
    }
    if (kw == "basis") {
      std::istringstream in(rest);
      std::string b;
      basis.clear();
      while (in >> b) basis.push_back(b);
      continue;
    }
    if (!right) fail("group line must come first", no, col0);
    const SphereGroup& H = left ? *left : *right;
    if (trans.empty()) {
      trans.assign(right->rank(), {});
      have.assign(right->rank(), 0);
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected '='", no, col0);
    if (kw == "let") {
      std::string name = trim(line.substr(3, eq - 3));
      if (!is_ident(name)) fail("bad abbreviation name", no, col0);
      try {
        lets[name] = H.parse_word(line.substr(eq + 1), lets);
      } catch (const ParseError& e) {
        fail(e.what(), no, col0 + int(eq) + e.col);
      }
      continue;
    }
    std::string gname = trim(line.substr(0, eq));
    int g = right->index(gname);
    if (g < 0) fail("unknown generator '" + gname + "'", no, col0);
    if (have[g]++) fail("duplicate transition for " + gname, no, col0);
    auto lt = line.find('<', eq), gt = line.rfind('>');
    if (lt == std::string::npos || gt == std::string::npos || gt < lt) fail("expected <...>", no, col0 + int(eq) + 1);
    auto slots = split_top(std::string_view(line).substr(lt + 1, gt - lt - 1), ',');
    if (degree < 0) degree = int(slots.size());
    std::vector<int> perm = parse_perm(line.substr(gt + 1), degree, no, col0 + int(gt) + 1);
    if (int(slots.size()) != degree)
      fail("arity mismatch: " + std::to_string(slots.size()) + " entries for degree " + std::to_string(degree), no, col0 + int(lt));
    Wreath w(degree);
    size_t off = lt + 1;
    for (int i = 0; i < degree; ++i) {
      if (trim(slots[i]).empty()) fail("empty entry", no, col0 + int(off));
      try {
        w[i] = {H.parse_word(slots[i], lets), perm[i]};
      } catch (const ParseError& e) {
        fail(e.what(), no, col0 + int(off) + e.col - 1);
      }
      off += slots[i].size() + 1;
    }
    trans[g] = std::move(w);
  }
  if (!right) fail("missing group line", 1, 1);
  if (trans.empty()) fail("no transitions", 1, 1);
  for (int g = 0; g < right->rank(); ++g)
    if (!have[g] && g != right->eliminated()) fail("missing transition for " + right->name(g), lines.back().first, 1);
  if (basis.empty()) basis = default_basis(degree);
  if (int(basis.size()) != degree) fail("basis size differs from degree", 1, 1);
  try {
    return make_machine(left ? *left : *right, *right, basis, trans);
  } catch (const std::invalid_argument& e) {
    fail(e.what(), 1, 1);
  }
}

std::string print_machine(const Machine& m) {
  std::ostringstream o;
  o << "group " << print_group(m.right) << "\n";
  if (!(m.left == m.right)) o << "left " << print_group(m.left) << "\n";
  o << "degree " << m.degree() << "\n";
  if (m.basis != default_basis(m.degree())) {
    o << "basis";
    for (auto& b : m.basis) o << " " << b;
    o << "\n";
  }
  for (int g = 0; g < m.right.rank(); ++g) o << m.right.name(g) << " = " << str(m, m.trans[g]) << "\n";
  return o.str();
}

std::vector<NamedWord> parse_named_words(const SphereGroup& G, std::string_view text) {
  std::vector<NamedWord> out;
  std::map<std::string, Word> seen;
  for (auto& [no, raw] : logical_lines(text)) {
    auto eq = raw.find('=');
    if (eq == std::string::npos) fail("expected 'name = word'", no, 1);
    std::string name = trim(raw.substr(0, eq));
    if (!is_ident(name)) fail("bad name '" + name + "'", no, 1);
    try {
      Word w = G.parse_word(raw.substr(eq + 1), seen);
      seen[name] = w;
      out.push_back({name, w});
    } catch (const ParseError& e) {
      fail(e.what(), no, int(eq) + 1 + e.col);
    }
  }
  return out;
}

std::string print_named_words(const SphereGroup& G, const std::vector<NamedWord>& ws) {
  std::string r;
  for (auto& w : ws) r += w.name + " = " + G.str(w.word) + "\n";
  return r;
}

GroupMap parse_map(const SphereGroup& G, std::string_view text) {
  GroupMap f{G, G, {}, true};
  for (int g = 0; g < G.rank(); ++g) f.images.push_back(G.gen(g));
  std::map<std::string, Word> lets;
  std::vector<int> set(G.rank(), 0);
  for (auto& [no, raw] : logical_lines(text)) {
    auto eq = raw.find('=');
    if (eq == std::string::npos) fail("expected 'generator = word'", no, 1);
    std::string lhs = trim(raw.substr(0, eq));
    bool let = lhs.rfind("let ", 0) == 0;
    std::string name = let ? trim(lhs.substr(4)) : lhs;
    Word w;
    try {
      w = G.parse_word(raw.substr(eq + 1), lets);
    } catch (const ParseError& e) {
      fail(e.what(), no, int(eq) + 1 + e.col);
    }
    if (let) {
      if (!is_ident(name)) fail("bad abbreviation name", no, 1);
      lets[name] = w;
      continue;
    }
    int g = G.index(name);
    if (g < 0) fail("unknown generator '" + name + "'", no, 1);
    if (set[g]++) fail("duplicate image for " + name, no, 1);
    f.images[g] = w;
  }
  return f;
}

std::string print_map(const GroupMap& f) {
  std::string r;
  for (int g = 0; g < f.source.rank(); ++g)
    if (f.images[g] != f.source.gen(g)) r += f.source.name(g) + " = " + f.target.str(f.images[g]) + "\n";
  return r;
}

}  // namespace thurston
