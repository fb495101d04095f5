#pragma once

#include <array>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace warpcone {

// Exact group element representations. Each carries enough data for exact
// multiplication, inversion, and an injective canonical key.
struct IntEl {
  long long n = 0;
};
struct CyclicEl {
  long long n = 0;
  long long mod = 1;
};
struct TupleEl {
  std::vector<long long> v;
};
struct Mat2El {
  long long a = 1, b = 0, c = 0, d = 1;  // integer matrix, det 1
};
// Integer quaternion q with implicit scale 5^(-k/2); |q|^2 = 5^k. Words in
// the arccos(3/5) rotation pair stay exact in this form.
struct QuatEl {
  std::array<long long, 4> q{1, 0, 0, 0};
  int k = 0;
};
struct WordEl {
  std::vector<int> w;  // reduced word, letters +-1, +-2, ... index generators
};

using ElementData = std::variant<IntEl, CyclicEl, TupleEl, Mat2El, QuatEl, WordEl>;
using Key = std::vector<long long>;

struct Element {
  ElementData data;

  Element mul(const Element& rhs) const;  // this * rhs
  Element inverse() const;
  bool is_identity() const;
  Key key() const;
};

struct Generator {
  std::string label;
  Element g;
  int inverse_index = -1;
};

struct GroupPresentation {
  std::string name;
  std::vector<Generator> gens;  // closed under formal inverses
  Element identity;
};

struct BallEntry {
  Element g;
  int length = 0;
  std::vector<int> word;  // generator indices, applied first to last
};

// Breadth-first enumeration of the ball of the given radius, deterministic
// order (length, then canonical key). Throws if the ball exceeds `cap`,
// reporting the count reached.
std::vector<BallEntry> word_ball(const GroupPresentation& g, int radius, std::size_t cap = 2000000);

Element element_of_word(const GroupPresentation& g, const std::vector<int>& word);
std::vector<int> inverse_word(const GroupPresentation& g, const std::vector<int>& word);

GroupPresentation trivial_presentation();
GroupPresentation z_presentation();
GroupPresentation cyclic_presentation(long long mod);
GroupPresentation zd_presentation(int d);
GroupPresentation free_presentation(int rank);
GroupPresentation sl2z_presentation();      // generators T = [[1,1],[0,1]], R = [[0,-1],[1,0]]
GroupPresentation quat_f2_presentation();   // (2,1,0,0)/sqrt5 and (2,0,0,1)/sqrt5

}  // namespace warpcone
