#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "thurston/machine.hpp"

namespace thurston {

// Machine text:
//   group <a,b,c,d | d*c*b*a, a^2>     acting group (orders optional)
//   left <...>                         left group when it differs
//   degree 2
//   basis l1 l2                        optional labels
//   let r = c*b                        abbreviation for later words
//   a = <a^-1, a> (1,2)                one transition per generator
SphereGroup parse_group(std::string_view text);
std::string print_group(const SphereGroup& G);

Machine parse_machine(std::string_view text);
std::string print_machine(const Machine& m);

struct NamedWord {
  std::string name;
  Word word;
  bool operator==(const NamedWord&) const = default;
};

// Lines "name = word"; later lines may use earlier names.
std::vector<NamedWord> parse_named_words(const SphereGroup& G, std::string_view text);
std::string print_named_words(const SphereGroup& G, const std::vector<NamedWord>& ws);

// Automorphism text: "let s = x3*x4" and "x3 = x3^s" lines; unnamed
// generators are fixed.
GroupMap parse_map(const SphereGroup& G, std::string_view text);
std::string print_map(const GroupMap& f);

// Lexer helpers shared with the certificate reader.
std::vector<std::pair<int, std::string>> logical_lines(std::string_view text);
std::vector<std::string> split_top(std::string_view s, char sep);
std::string trim(std::string_view s);

}  // namespace thurston
