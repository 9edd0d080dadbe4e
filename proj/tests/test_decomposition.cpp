#include <doctest.h>

#include "thurston/constructors.hpp"
#include "thurston/decomposition.hpp"
#include "thurston/format.hpp"

using namespace thurston;

namespace {

std::map<std::string, bool> checks(const Machine& m, const std::string& cert) {
  std::map<std::string, bool> r;
  for (auto& c : verify_tree(decompose(m, parse_certificate(m, cert)))) r[c.name] = c.ok;
  return r;
}

bool verifies(const Machine& m, const std::string& cert) {
  try {
    for (auto& c : verify_tree(decompose(m, parse_certificate(m, cert))))
      if (!c.ok) return false;
    return true;
  } catch (const DecompositionError&) {
    return false;
  }
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  auto p = s.find(from);
  REQUIRE(p != std::string::npos);
  return s.replace(p, from.size(), to);
}

}  // namespace

TEST_CASE("shipped certificates verify") {
  for (auto& name : fixture_names()) {
    for (int n : {0, 1, 3}) {
      auto f = fixture(name, n);
      if (f.certificate.empty()) continue;
      CAPTURE(name);
      CAPTURE(n);
      for (auto& [k, ok] : checks(f.machine, f.certificate)) {
        CAPTURE(k);
        CHECK(ok);
      }
    }
  }
}

TEST_CASE("a corrupted edge twist is caught") {
  auto f = fixture("dehn_twist", 2);
  std::string bad = replace(f.certificate, "twist 1, (r)^-2", "twist 1, (r)^-1");
  auto r = checks(f.machine, bad);
  CHECK_FALSE(r["edges"]);
  CHECK(r["fibers"]);
}

TEST_CASE("a wrong lambda target is caught") {
  auto f = fixture("tanlei");
  CHECK(verifies(f.machine, f.certificate));
  CHECK_FALSE(verifies(f.machine, replace(f.certificate, "vertex B2 rho G2 lambda G3", "vertex B2 rho G2 lambda G1")));
}

TEST_CASE("a vertex basis that is not a fiber is caught") {
  auto f = fixture("tanlei");
  CHECK_FALSE(verifies(f.machine, replace(f.certificate, "vertex B2 rho G2 lambda G3 basis l2", "vertex B2 rho G2 lambda G3 basis l1")));
}

TEST_CASE("certificate syntax errors") {
  auto f = fixture("tanlei");
  CHECK_FALSE(verifies(f.machine, replace(f.certificate, "rho G1", "rho G9")));
  CHECK_THROWS(parse_certificate(f.machine, replace(f.certificate, "sphere G1", "spere G1")));
  CHECK_THROWS(parse_certificate(f.machine, replace(f.certificate, "= u^w, x^(v^-1), s^-1", "= u^w, x^(v^-1)")));
}

TEST_CASE("vertex kinds and return bisets of the Dehn twist tree") {
  auto f = fixture("dehn_twist", 1);
  auto T = decompose(f.machine, parse_certificate(f.machine, f.certificate));
  CHECK(T.vertices[T.vertex("B1")].kind == VertexKind::essential);
  auto rb = return_bisets(T);
  REQUIRE(!rb.empty());
  for (auto& r : rb) {
    CHECK(check_sphere_biset(r.machine).ok());
    CHECK(r.machine.left == r.machine.right);
  }
}

TEST_CASE("Tan Lei tree: kinds, machines and the degree-6 return") {
  auto f = fixture("tanlei");
  auto T = decompose(f.machine, parse_certificate(f.machine, f.certificate));
  CHECK(T.vertices[T.vertex("B4")].kind == VertexKind::annular);
  CHECK(T.vertices[T.vertex("B5")].kind == VertexKind::trivial);
  for (const char* v : {"B1", "B2", "B3"}) CHECK(T.vertices[T.vertex(v)].machine);
  auto rb = return_bisets(T);
  REQUIRE(rb.size() == 1);
  CHECK(rb[0].machine.degree() == 6);
  CHECK(rb[0].cycle.size() == 3);
  CHECK(check_sphere_biset(rb[0].machine).ok());
}
