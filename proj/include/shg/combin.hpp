#pragma once

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "shg/specfun.hpp"

namespace shg {

enum class Shift { None, PlusIPi, MinusIPi };
enum class Boundary { None, Plus, Minus };

constexpr int kAlphaBlock = 0;
constexpr int kBetaBlock = 1;

// Block id of gamma^{(ba)}.
constexpr int block_id(int b, int a) { return 100 * b + a; }
constexpr int block_upper(int id) { return id / 100; }
constexpr int block_lower(int id) { return id % 100; }

struct Slot {
  int block = kBetaBlock;
  int index = 0;
  Shift shift = Shift::None;
  Boundary boundary = Boundary::None;

  bool same_variable(const Slot& other) const {
    return block == other.block && index == other.index;
  }
};

using VectorWord = std::vector<Slot>;

VectorWord reversed(const VectorWord& w);
VectorWord concat(const VectorWord& a, const VectorWord& b);
VectorWord with_tags(VectorWord w, Shift shift, Boundary boundary);
bool slots_unique(const VectorWord& w);
std::string to_string(const Slot& s);
std::string to_string(const VectorWord& w);

int permutation_sign(const std::vector<int>& perm);

// Sign of the permutation taking parent to arrangement.
int signature(const VectorWord& parent, const VectorWord& arrangement);

using SlotValues = std::function<cplx(const Slot&)>;

// Pairs (u, v) with u before v in `from` and v before u in `to`.
std::vector<std::pair<Slot, Slot>> inversion_pairs(const VectorWord& from,
                                                   const VectorWord& to);

// F(from) = s_product(from, to) F(to): one S(val(u) - val(v)) per inversion.
cplx s_product(const VectorWord& from, const VectorWord& to, const SlotValues& values,
               const ModelParams& params);

struct CompositionVector {
  int k = 2;
  std::vector<int> n;  // ordered (21), (31), (32), (41), ...

  static int index(int b, int a) { return (b - 1) * (b - 2) / 2 + (a - 1); }
  static int size_for(int k) { return k * (k - 1) / 2; }
  int at(int b, int a) const { return n[index(b, a)]; }
  int total() const;
  double factorial() const;
  std::string to_string() const;
};

CompositionVector make_composition(int k);
bool satisfies_truncation(const CompositionVector& c, const std::vector<int>& r);
std::vector<CompositionVector> enumerate_compositions(int k, const std::vector<int>& r);

double omega_ba(int b, int a, const std::vector<double>& omegas);
double omega_ba_t(int b, int a, int t, const std::vector<double>& omegas);

// All ordered selections of p distinct indices from [0, n), lexicographic.
std::vector<std::vector<int>> arrangements(int n, int p);
// Indices of [0, n) outside `chosen`, increasing.
std::vector<int> complement(int n, const std::vector<int>& chosen);

struct CauchyTerm {
  int sign = 1;  // product of the two signature factors
  std::vector<int> a1, a2, b1, b2;
  cplx value;  // full summand including sign and 1/min!
};

cplx cauchy_lhs(const std::vector<cplx>& a, const std::vector<cplx>& b);
std::vector<CauchyTerm> cauchy_decomposition(const std::vector<cplx>& a,
                                             const std::vector<cplx>& b);

struct BlockVar {
  int b = 2;
  int a = 1;
  int j = 1;  // 1-based index inside gamma^{(ba)}
  bool operator==(const BlockVar& o) const { return b == o.b && a == o.a && j == o.j; }
  bool operator<(const BlockVar& o) const {
    if (b != o.b) return b < o.b;
    if (a != o.a) return a < o.a;
    return j < o.j;
  }
};

std::string to_string(const BlockVar& v);

// A^{(p)} = <-gamma^{(p,p-1)} u ... u <-gamma^{(p,1)}.
std::vector<BlockVar> level_vector_a(const CompositionVector& c, int p);
// B^{(p)} = gamma^{(k,p)} u ... u gamma^{(p+1,p)}.
std::vector<BlockVar> level_vector_b(const CompositionVector& c, int p);

struct LevelPartition {
  int p = 2;
  std::vector<BlockVar> a1;
  std::vector<BlockVar> b1;
};

struct PoleFactor {
  BlockVar x;
  BlockVar y;
  int level = 2;  // regulator eps_level in 1/(x - y - i eps_level)
  bool operator<(const PoleFactor& o) const {
    if (level != o.level) return level < o.level;
    if (!(x == o.x)) return x < o.x;
    return y < o.y;
  }
  bool operator==(const PoleFactor& o) const {
    return level == o.level && x == o.x && y == o.y;
  }
};

struct PoleChain {
  std::vector<int> sites;    // a_0 < a_1 < ... < a_l
  std::vector<int> indices;  // j_1 .. j_l

  int length() const { return static_cast<int>(indices.size()); }
  std::vector<BlockVar> variables() const;
  std::vector<PoleFactor> factors() const;
};

// Pole factors 1/((A1^{(p)})_r - (B1^{(p)})_r - i eps_p) of the given partitions.
std::vector<PoleFactor> level_pole_factors(const std::vector<LevelPartition>& levels);

std::vector<PoleChain> chain_decomposition(const CompositionVector& c,
                                           const std::vector<LevelPartition>& levels);

}  // namespace shg
