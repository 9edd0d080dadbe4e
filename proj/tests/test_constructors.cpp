#include <doctest.h>

#include "thurston/constructors.hpp"

using namespace thurston;

TEST_CASE("angle orbits") {
  auto o = angle_orbit(2, parse_angle("1/6"));
  CHECK(o.angles.size() == 3);
  CHECK(o.preperiod == 1);
  CHECK(o.period == 2);
  CHECK(o.cuts.size() == 2);
  auto p = angle_orbit(2, parse_angle("1/7"));
  CHECK(p.preperiod == 0);
  CHECK(p.period == 3);
  auto q = angle_orbit(3, parse_angle("1/4"));
  CHECK(q.angles.front() == Angle(1, 4));
  CHECK(q.cuts.size() == 3);
  CHECK(parse_angle("2/4") == Angle(1, 2));
  CHECK_THROWS(parse_angle("1/0"));
  CHECK_THROWS(parse_angle("x"));
}

TEST_CASE("angle bisets match the quadratic fixtures") {
  struct C {
    const char *theta, *name;
  } cases[] = {{"1/6", "z2pi"}, {"1/3", "z2m1"}, {"1/2", "z2m2"}};
  for (auto& c : cases) {
    CAPTURE(c.theta);
    Machine a = angle_to_biset(2, parse_angle(c.theta));
    CHECK(check_sphere_biset(a).ok());
    Machine p = fixture(c.name).machine;
    CHECK(iso_search(relabel(a, p.left, p.right), p, 3));
  }
}

TEST_CASE("higher degree angle bisets are sphere bisets") {
  for (auto t : {"1/7", "1/4", "3/8"}) {
    auto m = angle_to_biset(2, parse_angle(t));
    CHECK(check_sphere_biset(m).ok());
  }
  auto c = angle_to_biset(3, parse_angle("1/4"));
  CHECK(c.degree() == 3);
  CHECK(check_sphere_biset(c).ok());
}

TEST_CASE("formal matings") {
  Machine z = fixture("z2m1").machine;
  CHECK(mate(z, z, {"A", "B"}) == fixture("basilica_mating").machine);
  Machine f = fixture("f512").machine;
  Machine m = mate(f, f, {"h1", "h2", "h3", "h4"});
  CHECK(check_sphere_biset(m).ok());
  CHECK(iso_search(m, fixture("f512_mating").machine, 3));
  CHECK(reverse_machine(reverse_machine(m)) == m);
}

TEST_CASE("every fixture is a sphere biset with consistent extras") {
  for (auto& name : fixture_names()) {
    auto f = fixture(name);
    CAPTURE(name);
    CHECK(check_sphere_biset(f.machine).ok());
    for (auto& c : f.curves) CHECK(!c.word.empty());
    for (auto& [label, map] : f.maps) CHECK(invert_auto(map, 1000));
  }
  CHECK_THROWS(fixture("nope"));
}
