#pragma once

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace thurston {

constexpr int kInf = 0;

struct Syl {
  int gen;
  int exp;
  auto operator<=>(const Syl&) const = default;
};

using Word = std::vector<Syl>;

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& m, int l, int c)
      : std::runtime_error(m), line(l), col(c) {}
};

enum class Status { found, none, bound_exceeded };

template <class T>
struct Search {
  Status status = Status::none;
  std::optional<T> value;
  std::string note;
  explicit operator bool() const { return status == Status::found; }
};

// Orbisphere group <g_1..g_n | g_i^{e_i}, relator>.  Elements are stored in
// a canonical syllable form: for profiles with an infinite order the first
// infinite generator of the relator is eliminated and the rest is a free
// product of cyclic groups; the (2,2,2,2) profile is normalised through
// Z^2 x| {+-1}.
class SphereGroup {
 public:
  SphereGroup() = default;
  SphereGroup(std::vector<std::string> names, std::vector<int> orders,
              std::vector<int> relator);
  SphereGroup(std::vector<std::string> names, std::vector<int> relator)
      : SphereGroup(names, std::vector<int>(names.size(), kInf), relator) {}

  int rank() const { return int(names_.size()); }
  const std::string& name(int i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  int order(int i) const { return orders_[i]; }
  const std::vector<int>& orders() const { return orders_; }
  const std::vector<int>& relator() const { return relator_; }
  int index(std::string_view n) const;
  bool is_2222() const { return tor_; }
  int eliminated() const { return elim_; }
  bool all_free() const;  // every surviving generator has infinite order

  Word normal_form(const Word& formal) const;
  // arguments in normal form; use normal_form on raw syllable lists
  Word mul(const Word& u, const Word& v) const;
  Word mul(std::initializer_list<Word> ws) const;
  Word inv(const Word& u) const;
  Word pow(const Word& u, long k) const;
  Word gen(int i, int k = 1) const { return normal_form({{i, k}}); }
  Word conj(const Word& w, const Word& g) const { return mul({inv(g), w, g}); }
  Word relator_word() const;

  Word parse_word(std::string_view s) const;
  // names in `aliases` stand for fixed words
  Word parse_word(std::string_view s, const std::map<std::string, Word>& aliases) const;
  Word w(std::string_view s) const { return parse_word(s); }
  std::string str(const Word& w) const;

  std::string describe() const;
  bool operator==(const SphereGroup& o) const {
    return names_ == o.names_ && orders_ == o.orders_ && relator_ == o.relator_;
  }

  int canon_exp(int g, long k) const;

 private:
  std::vector<std::string> names_;
  std::vector<int> orders_;
  std::vector<int> relator_;
  bool tor_ = false;
  int elim_ = -1;
  Word elim_word_;
  int slot_[4] = {0, 0, 0, 0};  // generators in relator order (2222)

  void push(Word& w, Syl s) const;
};

struct ConjClass {
  bool oriented = false;
  Word form;
  auto operator<=>(const ConjClass&) const = default;
};

enum class ClassKind { trivial, peripheral, essential };

struct Classification {
  ClassKind kind = ClassKind::trivial;
  int gen = -1;
  int power = 0;
  bool operator==(const Classification&) const = default;
};

// u = c^-1 * r * c with r cyclically reduced
struct CyclicForm {
  Word conj;
  Word reduced;
};

CyclicForm cyclic_reduce(const SphereGroup& G, const Word& w);
ConjClass conj_class(const SphereGroup& G, const Word& w, bool oriented);
// c with v = c^-1 u c (up to inversion of v when unoriented)
std::optional<Word> are_conjugate(const SphereGroup& G, const Word& u,
                                  const Word& v, bool oriented);
Classification classify_class(const SphereGroup& G, const ConjClass& c);
int cyclic_length(const ConjClass& c);
std::string str(const SphereGroup& G, const ConjClass& c);

struct GroupMap {
  SphereGroup source, target;
  std::vector<Word> images;  // one per source generator, eliminated included
  bool automorphism = false;

  Word apply(const Word& w) const;
  bool is_homomorphism() const;
};

GroupMap identity_map(const SphereGroup& G);
GroupMap make_map(const SphereGroup& S, const SphereGroup& T,
                  const std::vector<std::string>& images, bool aut = true);
GroupMap compose_maps(const GroupMap& first, const GroupMap& second);
Search<GroupMap> invert_auto(const GroupMap& m, int bound);

// Word over subgroup generators: Syl.gen indexes the generator list.
std::optional<Word> subgroup_rewrite(const SphereGroup& G,
                                     const std::vector<Word>& gens,
                                     const Word& g);
Word evaluate(const SphereGroup& G, const std::vector<Word>& gens,
              const Word& over);

// All words of length <= bound over the surviving generators in shortlex
// order, each in normal form (duplicates removed).
std::vector<Word> enumerate_words(const SphereGroup& G, int bound);
int word_length(const Word& w);

}  // namespace thurston
