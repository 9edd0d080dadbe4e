#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "thurston/constructors.hpp"
#include "thurston/contraction.hpp"
#include "thurston/curves.hpp"
#include "thurston/decomposition.hpp"
#include "thurston/format.hpp"
#include "thurston/lattes.hpp"

using namespace thurston;
using json = nlohmann::ordered_json;

namespace {

enum Exit { ok = 0, negative = 1, exceeded = 2, usage = 64, data = 65, internal = 70 };

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Out {
  bool as_json = false;
  json j = json::object();
  std::ostringstream text;
};

std::string slurp(const std::string& path) {
  std::ostringstream s;
  if (path.empty() || path == "-") {
    s << std::cin.rdbuf();
  } else {
    std::ifstream f(path);
    if (!f) throw Usage("cannot read " + path);
    s << f.rdbuf();
  }
  return s.str();
}

// A machine document is machine text or the JSON printed with --json.
std::string unwrap(const std::string& doc, const char* key) {
  auto b = doc.find_first_not_of(" \t\r\n");
  if (b == std::string::npos || doc[b] != '{') return doc;
  json j = json::parse(doc);
  if (j.contains(key) && j[key].is_string()) return j[key].get<std::string>();
  if (j.contains("machine") && j["machine"].is_object() && j["machine"].contains(key))
    return j["machine"][key].get<std::string>();
  throw ParseError(std::string("JSON input has no '") + key + "' field", 1, 1);
}

Machine read_machine(const std::string& path) { return parse_machine(unwrap(slurp(path), "text")); }

json machine_json(const Machine& m) {
  json t = json::object();
  for (int g = 0; g < m.right.rank(); ++g) {
    json e = json::array(), p = json::array();
    for (auto& x : m.trans[g]) {
      e.push_back(m.left.str(x.h));
      p.push_back(x.to + 1);
    }
    t[m.right.name(g)] = {{"entries", e}, {"perm", p}};
  }
  json j = {{"group", print_group(m.right)}};
  if (!(m.left == m.right)) j["left"] = print_group(m.left);
  j["degree"] = m.degree();
  j["basis"] = m.basis;
  j["transitions"] = t;
  j["text"] = print_machine(m);
  return j;
}

void emit_machine(Out& o, const Machine& m) {
  o.j["machine"] = machine_json(m);
  o.j["text"] = print_machine(m);
  o.text << print_machine(m);
}

const char* status_name(Status s) {
  switch (s) {
    case Status::found: return "found";
    case Status::none: return "none";
    default: return "bound_exceeded";
  }
}

int status_exit(Status s) { return s == Status::found ? ok : s == Status::none ? negative : exceeded; }

int bound_or(int given, int fallback) {
  if (given > 0) return given;
  if (const char* e = std::getenv("THURSTON_BOUND")) {
    int b = std::atoi(e);
    if (b > 0) return b;
  }
  return fallback;
}

std::vector<int> parse_profile(const SphereGroup& G, const std::string& s) {
  std::vector<int> o;
  for (auto& item : split_top(s, ',')) {
    std::string t = trim(item);
    if (t == "inf" || t == "oo" || t == "0") o.push_back(kInf);
    else o.push_back(std::stoi(t));
  }
  if (int(o.size()) != G.rank()) throw Usage("profile needs " + std::to_string(G.rank()) + " entries");
  return o;
}

std::string profile_str(const std::vector<int>& o) {
  std::string r;
  for (size_t i = 0; i < o.size(); ++i) r += (i ? "," : "") + (o[i] == kInf ? std::string("inf") : std::to_string(o[i]));
  return r;
}

struct CurveDoc {
  std::vector<NamedWord> named;
  Multicurve C;
  std::vector<std::string> labels;
};

CurveDoc read_curves(const Machine& B, const std::string& path) {
  CurveDoc d;
  d.named = parse_named_words(B.right, slurp(path));
  std::vector<Word> ws;
  for (auto& n : d.named) ws.push_back(n.word);
  d.C = make_multicurve(B.right, ws);
  d.labels.assign(d.C.size(), "");
  for (auto& n : d.named) {
    auto one = make_multicurve(B.right, {n.word});
    if (one.size() != 1) throw std::invalid_argument("curve " + n.name + " is not essential");
    int k = d.C.find(one.curves[0]);
    if (d.labels[k].empty()) d.labels[k] = n.name;
  }
  return d;
}

json matrix_json(const RMatrix& T) {
  json rows = json::array();
  for (int i = 0; i < T.rows(); ++i) {
    json r = json::array();
    for (int k = 0; k < T.cols(); ++k) r.push_back(T(i, k).str());
    rows.push_back(r);
  }
  return rows;
}

RMatrix read_matrix(const std::string& doc) {
  std::vector<std::vector<Rational>> rows;
  auto b = doc.find_first_not_of(" \t\r\n");
  if (b != std::string::npos && doc[b] == '{') {
    json j = json::parse(doc);
    if (!j.contains("matrix")) throw ParseError("JSON input has no 'matrix' field", 1, 1);
    for (auto& r : j["matrix"]) {
      rows.emplace_back();
      for (auto& x : r) rows.back().emplace_back(x.get<std::string>());
    }
  } else {
    std::string text = doc;
    if (b != std::string::npos && doc[b] == '[') {
      for (char& c : text) c = c == ']' ? '\n' : (c == '[' || c == ',') ? ' ' : c;
    }
    for (auto& [no, line] : logical_lines(text)) {
      std::istringstream in(line);
      std::string tok;
      in >> tok;
      if (tok == "matrix") continue;
      rows.emplace_back();
      do {
        try {
          rows.back().emplace_back(tok);
        } catch (const std::exception&) {
          throw ParseError("bad matrix entry '" + tok + "'", no, 1);
        }
      } while (in >> tok);
    }
  }
  int n = int(rows.size());
  RMatrix T(n, n);
  for (int i = 0; i < n; ++i) {
    if (int(rows[i].size()) != n) throw ParseError("matrix is not square", i + 1, 1);
    for (int k = 0; k < n; ++k) T(i, k) = rows[i][k];
  }
  return T;
}

// ---- commands

int cmd_check(Out& o, const Machine& B) {
  auto r = check_sphere_biset(B);
  o.j["ok"] = r.ok();
  o.j["checks"] = {{"relator", r.relator}, {"orders", r.orders}, {"transitive", r.transitive},
                   {"riemann_hurwitz", r.rh}, {"lifts", r.lifts}};
  o.j["rh_sum"] = r.rh_sum;
  o.j["expected_rh_sum"] = 2 * B.degree() - 2;
  o.j["failures"] = r.failures;
  o.text << (r.ok() ? "sphere biset: yes" : "sphere biset: no") << "\n";
  o.text << "riemann-hurwitz sum " << r.rh_sum << " (2d-2 = " << 2 * B.degree() - 2 << ")\n";
  for (auto& f : r.failures) o.text << "  " << f << "\n";
  return r.ok() ? ok : negative;
}

int cmd_portrait(Out& o, const Machine& B) {
  auto r = check_sphere_biset(B);
  if (!r.ok()) {
    o.j["failures"] = r.failures;
    o.text << "not a sphere biset: " << r.failures.front() << "\n";
    return negative;
  }
  json p = json::array();
  for (int a = 0; a < B.left.rank(); ++a) {
    auto& e = r.portrait[a];
    std::string tgt = e.target >= 0 ? B.right.name(e.target) : "-";
    p.push_back({{"point", B.left.name(a)}, {"image", tgt}, {"degree", e.degree}});
    o.text << B.left.name(a) << " -> " << tgt << " degree " << e.degree << "\n";
  }
  o.j["portrait"] = p;
  auto om = ord_min(B);
  o.j["ord_min"] = profile_str(om);
  o.text << "ord_min " << profile_str(om) << "\n";
  return ok;
}

int cmd_lifts(Out& o, const Machine& B, const std::string& cls) {
  Word w = B.right.parse_word(cls);
  json arr = json::array();
  for (auto& l : lifts(B, w, false)) {
    auto c = classify_class(B.left, l.cls);
    std::string kind = c.kind == ClassKind::trivial ? "trivial" : c.kind == ClassKind::peripheral ? "peripheral" : "essential";
    std::string cyc;
    for (int s : l.cycle) cyc += (cyc.empty() ? "" : " ") + B.basis[s];
    arr.push_back({{"class", str(B.left, l.cls)}, {"degree", l.degree}, {"kind", kind}, {"cycle", cyc}});
    o.text << str(B.left, l.cls) << "  degree " << l.degree << "  " << kind << "  [" << cyc << "]\n";
  }
  o.j["lifts"] = arr;
  return ok;
}

int cmd_nucleus(Out& o, const Machine& B, int bound, const std::string& prof) {
  auto orders = prof.empty() ? ord_min(B) : parse_profile(B.right, prof);
  auto r = is_contracting(B, orders, bound);
  o.j["profile"] = profile_str(orders);
  o.j["status"] = status_name(r.status);
  o.j["note"] = r.note;
  if (r) {
    auto& N = *r.value;
    json st = json::array();
    for (auto& w : N.states) st.push_back(N.machine.left.str(w));
    o.j["contracting"] = true;
    o.j["states"] = st;
    o.j["tree_equality"] = N.tree_equality;
    o.text << "contracting, nucleus of " << N.states.size() << " states (profile " << profile_str(orders) << ")\n";
    for (auto& w : N.states) o.text << "  " << N.machine.left.str(w) << "\n";
  } else {
    o.j["contracting"] = nullptr;
    o.text << "no nucleus within bound " << bound << ": " << r.note << "\n";
  }
  return status_exit(r.status);
}

int cmd_tmatrix(Out& o, const Machine& B, const std::string& file) {
  auto d = read_curves(B, file);
  auto inv = is_invariant(B, d.C);
  o.j["labels"] = d.labels;
  o.j["invariant"] = inv.invariant();
  if (!inv.invariant()) {
    o.j["offending"] = inv.offending;
    o.text << "not invariant\n";
    for (auto& s : inv.offending) o.text << "  " << s << "\n";
    return negative;
  }
  RMatrix T = thurston_matrix(B, d.C);
  o.j["matrix"] = matrix_json(T);
  o.text << "matrix";
  for (auto& l : d.labels) o.text << " " << l;
  o.text << "\n" << print_matrix(T, {}).substr(1);
  return ok;
}

int cmd_spectral(Out& o, const RMatrix& T) {
  bool ge = spectral_ge_one(T);
  o.j["spectral_radius_ge_1"] = ge;
  o.text << (ge ? "spectral radius >= 1: obstruction" : "spectral radius < 1") << "\n";
  return ge ? ok : negative;
}

json classification_json(const CurveClassification& c, const std::vector<std::string>& labels) {
  auto names = [&](const std::vector<int>& v) {
    json a = json::array();
    for (int i : v) a.push_back(labels[i]);
    return a;
  };
  json levy = json::array();
  for (auto& cyc : c.levy_cycles) levy.push_back(names(cyc));
  return {{"cantor", c.cantor}, {"anti_cantor", c.anti_cantor}, {"levy", c.levy}, {"anti_levy", c.anti_levy},
          {"bicycles", c.bicycles.size()}, {"unicycles", c.unicycles.size()}, {"levy_cycles", levy},
          {"cantor_part", names(c.cantor_part)}, {"levy_part", names(c.levy_part)}};
}

int cmd_classify(Out& o, const Machine& B, const std::string& file) {
  auto d = read_curves(B, file);
  auto inv = is_invariant(B, d.C);
  if (!inv.invariant()) {
    o.j["invariant"] = false;
    o.j["offending"] = inv.offending;
    o.text << "not invariant\n";
    return negative;
  }
  auto g = curve_graph(B, d.C);
  auto c = classify_multicurve(g);
  json edges = json::array();
  for (auto& e : g.edges) {
    edges.push_back({{"from", d.labels[e.from]}, {"to", d.labels[e.to]}, {"degree", e.degree}});
    o.text << d.labels[e.from] << " lifts to " << d.labels[e.to] << ", degree " << e.degree << "\n";
  }
  o.j["invariant"] = true;
  o.j["edges"] = edges;
  o.j["classification"] = classification_json(c, d.labels);
  o.text << (c.cantor ? "cantor (bicycle present)" : "anti-cantor") << "\n";
  o.text << (c.levy ? "levy cycle present" : "no levy cycle") << "\n";
  for (auto& cyc : c.levy_cycles) {
    o.text << "  levy:";
    for (int i : cyc) o.text << " " << d.labels[i];
    o.text << "\n";
  }
  return ok;
}

int cmd_levy(Out& o, const Machine& B, int bound) {
  auto r = levy_search(B, bound);
  o.j["status"] = status_name(r.status);
  o.j["note"] = r.note;
  if (r) {
    json cs = json::array();
    for (auto& c : r.value->curves) cs.push_back(str(B.right, c));
    o.j["curves"] = cs;
    o.text << "levy cycle " << str(B.right, *r.value) << "\n";
  } else {
    o.text << "no levy cycle: " << r.note << "\n";
  }
  return status_exit(r.status);
}

TreeOfBisets load_tree(const Machine& B, const std::string& file) {
  return decompose(B, parse_certificate(B, slurp(file)));
}

int cmd_decompose(Out& o, const Machine& B, const std::string& file) {
  auto T = load_tree(B, file);
  auto checks = verify_tree(T);
  json vs = json::array();
  for (auto& v : T.vertices) {
    json x = {{"name", v.name}, {"kind", str(v.kind)}};
    if (v.machine) x["machine"] = machine_json(*v.machine);
    vs.push_back(x);
  }
  json cs = json::array();
  bool all = true;
  for (auto& c : checks) {
    cs.push_back({{"name", c.name}, {"ok", c.ok}, {"failures", c.failures}});
    all &= c.ok;
  }
  o.j["vertices"] = vs;
  o.j["checks"] = cs;
  o.j["ok"] = all;
  o.text << print_tree(T);
  for (auto& c : checks) {
    o.text << "check " << c.name << ": " << (c.ok ? "ok" : "FAILED") << "\n";
    for (auto& f : c.failures) o.text << "  " << f << "\n";
  }
  return all ? ok : negative;
}

int cmd_returns(Out& o, const Machine& B, const std::string& file) {
  auto T = load_tree(B, file);
  json arr = json::array();
  for (auto& r : return_bisets(T)) {
    std::string cyc;
    for (int v : r.cycle) cyc += (cyc.empty() ? "" : " (x) ") + T.vertices[v].name;
    arr.push_back({{"cycle", cyc}, {"machine", machine_json(r.machine)}});
    o.text << "# return " << cyc << "\n" << print_machine(r.machine);
  }
  o.j["returns"] = arr;
  return ok;
}

int cmd_extract(Out& o, const Machine& B) {
  auto e = extract_Mv(B);
  o.j["M"] = str(e.pair.M);
  o.j["v"] = str(e.pair.v);
  o.j["verified"] = e.verified;
  o.j["geometric"] = is_geometric(e.pair.M);
  o.text << "M = " << str(e.pair.M) << "\nv = " << str(e.pair.v) << "\n";
  o.text << "verified " << (e.verified ? "yes" : "no") << ", geometric " << (is_geometric(e.pair.M) ? "yes" : "no") << "\n";
  return e.verified ? ok : negative;
}

int cmd_iso(Out& o, const Machine& A, const Machine& B, int bound) {
  auto r = iso_search(A, B, bound);
  o.j["status"] = status_name(r.status);
  o.j["note"] = r.note;
  if (r) {
    json items = json::array();
    for (auto& [p, i] : r.value->basis)
      items.push_back(p.empty() ? A.basis[i] : "(" + A.left.str(p) + ")." + A.basis[i]);
    o.j["basis"] = items;
    o.text << "isomorphic via basis";
    for (auto& s : items) o.text << " " << s.get<std::string>();
    o.text << "\n";
  } else {
    o.text << "no isomorphism: " << r.note << "\n";
  }
  return status_exit(r.status);
}

int cmd_example(Out& o, const std::string& name, int n, bool curves, bool cert, bool maps) {
  auto f = fixture(name, n);
  o.j["name"] = f.name;
  o.j["summary"] = f.summary;
  if (curves) {
    std::string t = print_named_words(f.machine.right, f.curves);
    o.j["curves"] = t;
    o.text << t;
    return ok;
  }
  if (cert) {
    if (f.certificate.empty()) throw Usage("fixture " + name + " ships no certificate");
    o.j["certificate"] = f.certificate;
    o.text << f.certificate;
    return ok;
  }
  if (maps) {
    json m = json::object();
    for (auto& [k, g] : f.maps) {
      m[k] = print_map(g);
      o.text << "# " << k << "\n" << print_map(g);
    }
    o.j["maps"] = m;
    return ok;
  }
  emit_machine(o, f.machine);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thurston maps as bisets: checks, obstructions, decompositions"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "structured output")->configurable(false);
  app.fallthrough();

  std::string in = "-", a_file, b_file, cls, map_file, pre_file, post_file, curves_file, cert_file, profile;
  std::string mat, vec, theta, name;
  std::vector<std::string> bar;
  int bound = 0, degree = 2, n = 0;
  bool ex_curves = false, ex_cert = false, ex_maps = false;

  auto input = [&](CLI::App* s) { s->add_option("input", in, "machine file (default stdin)"); };
  auto* check = app.add_subcommand("check", "sphere-biset admissibility");
  input(check);
  auto* portrait = app.add_subcommand("portrait", "portrait and minimal orders");
  input(portrait);
  auto* lifts_c = app.add_subcommand("lifts", "lifts of a conjugacy class");
  lifts_c->add_option("--class", cls)->required();
  input(lifts_c);
  auto* tensor_c = app.add_subcommand("tensor", "tensor product A (x) B");
  tensor_c->add_option("A", a_file)->required();
  tensor_c->add_option("B", b_file)->required();
  auto* basis = app.add_subcommand("basis", "change of basis");
  basis->add_option("--map", map_file, "basis items prefix.label")->required();
  input(basis);
  auto* twist_c = app.add_subcommand("twist", "pre- and post-compose with automorphisms");
  twist_c->add_option("--pre", pre_file);
  twist_c->add_option("--post", post_file);
  input(twist_c);
  auto* iso = app.add_subcommand("iso", "bounded isomorphism search");
  iso->add_option("A", a_file)->required();
  iso->add_option("B", b_file)->required();
  iso->add_option("--bound", bound);
  auto* nuc = app.add_subcommand("nucleus", "contraction test");
  nuc->add_option("--bound", bound);
  nuc->add_option("--orders", profile, "e.g. 2,2,2,inf (default: ord_min)");
  input(nuc);
  auto* tm = app.add_subcommand("tmatrix", "Thurston matrix of a multicurve");
  tm->add_option("--curves", curves_file)->required();
  input(tm);
  auto* spec = app.add_subcommand("spectral", "spectral radius >= 1 test on a matrix");
  input(spec);
  auto* cl = app.add_subcommand("classify", "curve graph classification");
  cl->add_option("--curves", curves_file)->required();
  input(cl);
  auto* levy = app.add_subcommand("levy", "bounded Levy cycle search");
  levy->add_option("--bound", bound);
  input(levy);
  auto* dec = app.add_subcommand("decompose", "tree of bisets from a certificate");
  dec->add_option("--cert", cert_file)->required();
  input(dec);
  auto* ret = app.add_subcommand("returns", "return bisets of a decomposition");
  ret->add_option("--cert", cert_file)->required();
  input(ret);
  auto* lat = app.add_subcommand("lattes", "machine of z -> Mz + v");
  lat->add_option("--matrix", mat)->required();
  lat->add_option("--v", vec)->required();
  auto* ext = app.add_subcommand("extract", "recover (M, v) from a 2222 machine");
  input(ext);
  auto* ang = app.add_subcommand("angle", "machine of a polynomial from an external angle");
  ang->add_option("--degree", degree);
  ang->add_option("--theta", theta)->required();
  auto* mt = app.add_subcommand("mate", "formal mating");
  mt->add_option("A", a_file)->required();
  mt->add_option("B", b_file)->required();
  mt->add_option("--bar", bar, "names for the second polynomial's generators")->delimiter(',');
  auto* ex = app.add_subcommand("example", "shipped fixtures");
  ex->add_option("name", name)->required();
  ex->add_option("--n", n);
  ex->add_flag("--curves", ex_curves);
  ex->add_flag("--cert", ex_cert);
  ex->add_flag("--maps", ex_maps);
  std::string fixtures;
  for (auto& f : fixture_names()) fixtures += (fixtures.empty() ? "" : ", ") + f;
  ex->footer("fixtures: " + fixtures);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }

  Out o;
  o.as_json = as_json;
  int code = ok;
  try {
    auto* s = app.get_subcommands().front();
    std::string cmd = s->get_name();
    o.j["command"] = cmd;
    if (cmd == "check") code = cmd_check(o, read_machine(in));
    else if (cmd == "portrait") code = cmd_portrait(o, read_machine(in));
    else if (cmd == "lifts") code = cmd_lifts(o, read_machine(in), cls);
    else if (cmd == "tensor") emit_machine(o, tensor(read_machine(a_file), read_machine(b_file)));
    else if (cmd == "basis") {
      Machine B = read_machine(in);
      std::vector<std::string> items;
      for (auto& line : logical_lines(slurp(map_file)))
        for (auto& it : split_top(line.second, ','))
          if (!trim(it).empty()) items.push_back(trim(it));
      emit_machine(o, change_basis(B, parse_basis_change(B, items)));
    } else if (cmd == "twist") {
      Machine B = read_machine(in);
      std::optional<GroupMap> pre, post;
      if (!pre_file.empty()) pre = parse_map(B.left, slurp(pre_file));
      if (!post_file.empty()) post = parse_map(B.right, slurp(post_file));
      emit_machine(o, twist(B, pre, post));
    } else if (cmd == "iso") code = cmd_iso(o, read_machine(a_file), read_machine(b_file), bound_or(bound, 3));
    else if (cmd == "nucleus") code = cmd_nucleus(o, read_machine(in), bound_or(bound, 500), profile);
    else if (cmd == "tmatrix") code = cmd_tmatrix(o, read_machine(in), curves_file);
    else if (cmd == "spectral") code = cmd_spectral(o, read_matrix(slurp(in)));
    else if (cmd == "classify") code = cmd_classify(o, read_machine(in), curves_file);
    else if (cmd == "levy") code = cmd_levy(o, read_machine(in), bound_or(bound, 3));
    else if (cmd == "decompose") code = cmd_decompose(o, read_machine(in), cert_file);
    else if (cmd == "returns") code = cmd_returns(o, read_machine(in), cert_file);
    else if (cmd == "lattes") emit_machine(o, build_Bmv({parse_mat2(mat), parse_vec2(vec)}));
    else if (cmd == "extract") code = cmd_extract(o, read_machine(in));
    else if (cmd == "angle") emit_machine(o, angle_to_biset(degree, parse_angle(theta)));
    else if (cmd == "mate") emit_machine(o, mate(read_machine(a_file), read_machine(b_file), bar));
    else if (cmd == "example") code = cmd_example(o, name, n, ex_curves, ex_cert, ex_maps);
  } catch (const Usage& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return usage;
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.line << ":" << e.col << ": " << e.what() << "\n";
    return data;
  } catch (const json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return data;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return data;
  } catch (const DecompositionError& e) {
    std::cerr << "certificate rejected: " << e.what() << "\n";
    return data;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return internal;
  }
  o.j["exit"] = code;
  if (o.as_json)
    std::cout << o.j.dump(2) << "\n";
  else
    std::cout << o.text.str();
  return code;
}
