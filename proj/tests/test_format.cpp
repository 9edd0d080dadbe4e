#include <doctest.h>

#include <random>

#include "thurston/constructors.hpp"
#include "thurston/format.hpp"

#include "support.hpp"

using namespace thurston;

using thurston::testing::random_machine;

TEST_CASE("transition syntax") {
  Machine m = parse_machine("group <a,b,c,d | d*c*b*a>\na = <a^-1, a> (1,2)\nb = <a, b>\nc = <c^-1*b^-1, 1> (1,2)\n");
  CHECK(m.degree() == 2);
  CHECK(str(m, m.trans[0]) == "<a^-1, a> (1,2)");
  CHECK(str(m, m.trans[1]) == "<a, b> ()");
  CHECK(m.trans[3].size() == 2);
}

TEST_CASE("fixtures round-trip through text") {
  for (auto& name : fixture_names()) {
    CAPTURE(name);
    auto f = fixture(name, 1);
    std::string t = print_machine(f.machine);
    Machine back = parse_machine(t);
    CHECK(back == f.machine);
    CHECK(print_machine(back) == t);
    auto cs = parse_named_words(f.machine.right, print_named_words(f.machine.right, f.curves));
    CHECK(cs == f.curves);
    for (auto& [k, g] : f.maps) {
      auto h = parse_map(g.source, print_map(g));
      for (int i = 0; i < g.source.rank(); ++i) CHECK(h.images[i] == g.images[i]);
    }
  }
}

TEST_CASE("random machines round-trip") {
  std::mt19937 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    Machine m = random_machine(rng);
    std::string t = print_machine(m);
    Machine back = parse_machine(t);
    REQUIRE(back == m);
    CHECK(print_machine(back) == t);
  }
}

TEST_CASE("parse errors") {
  auto err = [](const char* text) {
    try {
      parse_machine(text);
    } catch (const ParseError& e) {
      return std::make_pair(e.line, std::string(e.what()));
    }
    return std::make_pair(0, std::string());
  };
  auto a = err("group <a,b | b*a>\ndegree 2\na = <a,> (1,2,3)\n");
  CHECK(a.first == 3);
  auto b = err("group <a,b | b*a>\nq = <a, b>\n");
  CHECK(b.first == 2);
  CHECK(b.second.find("unknown generator") != std::string::npos);
  auto c = err("group <a,b | b*a>\na = <a, b, a>\nb = <a, b>\n");
  CHECK(c.first == 3);
  CHECK(c.second.find("arity") != std::string::npos);
  CHECK(err("degree 2\n").first > 0);
  CHECK(err("group <a,b | b*a>\na = <a*z, b>\n").first == 2);
}

TEST_CASE("comments, lets and left groups") {
  Machine m = parse_machine(
      "# the 1/6 polynomial\n"
      "group <a,b,c,d | d*c*b*a>\n"
      "let r = c*b   # abbreviation\n"
      "a = <a^-1*b^-1, r^(a^-1)> (1,2)\n"
      "b = <a, 1>\n"
      "c = <b, 1>\n");
  CHECK(m.left.str(m.trans[0][1].h) == "a*c*b*a^-1");
  CHECK(parse_machine(print_machine(m)) == m);
}
