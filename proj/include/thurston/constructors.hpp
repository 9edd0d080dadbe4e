#pragma once

#include <boost/multiprecision/gmp.hpp>

#include "thurston/format.hpp"
#include "thurston/machine.hpp"

namespace thurston {

using Angle = boost::multiprecision::mpq_rational;

// theta_1 = theta, theta_{k+1} = d theta_k mod 1, until the orbit closes.
struct AngleOrbit {
  int degree = 2;
  std::vector<Angle> angles;  // distinct, orbit order
  int preperiod = 0, period = 0;
  std::vector<Angle> cuts;    // (theta + i) / d
};

AngleOrbit angle_orbit(int d, const Angle& theta);
Angle parse_angle(std::string_view s);

// Generators p1..pm at the orbit angles (p1 the critical value) and inf.
Machine angle_to_biset(int d, const Angle& theta);

// Formal mating; bar_names name the generators of q other than its equator.
Machine mate(const Machine& p, const Machine& q, std::vector<std::string> bar_names = {});
// Tuple reversal with inverted permutation conjugation, as applied to the q side.
Machine reverse_machine(const Machine& m);

struct Fixture {
  std::string name;
  std::string summary;
  Machine machine;
  std::vector<NamedWord> curves;
  std::vector<std::pair<std::string, GroupMap>> maps;
  std::string certificate;  // empty when none is shipped
};

Fixture fixture(const std::string& name, int n = 0);
std::vector<std::string> fixture_names();

}  // namespace thurston
