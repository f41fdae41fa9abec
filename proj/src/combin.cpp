#include "shg/combin.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "shg/error.hpp"

namespace shg {

namespace {

constexpr double kDistinctTol = 1e-9;

const char* block_name(int block) {
  if (block == kAlphaBlock) return "a";
  if (block == kBetaBlock) return "b";
  return "g";
}

int position_of(const VectorWord& w, const Slot& s) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i].same_variable(s)) return static_cast<int>(i);
  return -1;
}

void check_permutation(const VectorWord& from, const VectorWord& to) {
  if (from.size() != to.size() || !slots_unique(from))
    throw Error(ErrorKind::Domain, "word rearrangement: slot multisets differ");
  for (const auto& s : to)
    if (position_of(from, s) < 0)
      throw Error(ErrorKind::Domain, "word rearrangement: slot multisets differ");
}

void enumerate_rec(int k, const std::vector<int>& r, int pos, CompositionVector& cur,
                   std::vector<int>& partial, std::vector<CompositionVector>& out) {
  const int total = CompositionVector::size_for(k);
  if (pos == total) {
    if (satisfies_truncation(cur, r)) out.push_back(cur);
    return;
  }
  int b = 2;
  while (CompositionVector::index(b + 1, 1) <= pos) ++b;
  const int a = pos - CompositionVector::index(b, 1) + 1;
  int bound = 1 << 30;
  for (int p = a; p < b; ++p) bound = std::min(bound, r[p - 1] - partial[p - 1]);
  for (int v = 0; v <= bound; ++v) {
    cur.n[pos] = v;
    for (int p = a; p < b; ++p) partial[p - 1] += v;
    enumerate_rec(k, r, pos + 1, cur, partial, out);
    for (int p = a; p < b; ++p) partial[p - 1] -= v;
  }
  cur.n[pos] = 0;
}

void arrangements_rec(int n, int p, std::vector<int>& cur, std::vector<bool>& used,
                      std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == p) {
    out.push_back(cur);
    return;
  }
  for (int i = 0; i < n; ++i) {
    if (used[i]) continue;
    used[i] = true;
    cur.push_back(i);
    arrangements_rec(n, p, cur, used, out);
    cur.pop_back();
    used[i] = false;
  }
}

void check_distinct(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (std::abs(a[i] - a[j]) < kDistinctTol)
        throw Error(ErrorKind::Coincidence, "cauchy: entries of A coincide");
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j)
      if (std::abs(b[i] - b[j]) < kDistinctTol)
        throw Error(ErrorKind::Coincidence, "cauchy: entries of B coincide");
  for (const auto& x : a)
    for (const auto& y : b)
      if (std::abs(x - y) < kDistinctTol)
        throw Error(ErrorKind::Coincidence, "cauchy: A and B intersect");
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

VectorWord reversed(const VectorWord& w) { return VectorWord(w.rbegin(), w.rend()); }

VectorWord concat(const VectorWord& a, const VectorWord& b) {
  VectorWord out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

VectorWord with_tags(VectorWord w, Shift shift, Boundary boundary) {
  for (auto& s : w) {
    s.shift = shift;
    s.boundary = boundary;
  }
  return w;
}

bool slots_unique(const VectorWord& w) {
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j)
      if (w[i].same_variable(w[j])) return false;
  return true;
}

std::string to_string(const Slot& s) {
  std::ostringstream os;
  if (s.block >= 100)
    os << "g" << block_upper(s.block) << block_lower(s.block) << "_" << s.index;
  else
    os << block_name(s.block) << s.index + 1;
  if (s.shift == Shift::PlusIPi) os << "+ipi";
  if (s.shift == Shift::MinusIPi) os << "-ipi";
  if (s.boundary == Boundary::Plus) os << "[+]";
  if (s.boundary == Boundary::Minus) os << "[-]";
  return os.str();
}

std::string to_string(const VectorWord& w) {
  std::string out = "(";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ",";
    out += to_string(w[i]);
  }
  return out + ")";
}

int permutation_sign(const std::vector<int>& perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

int signature(const VectorWord& parent, const VectorWord& arrangement) {
  check_permutation(parent, arrangement);
  std::vector<int> perm;
  perm.reserve(arrangement.size());
  for (const auto& s : arrangement) perm.push_back(position_of(parent, s));
  return permutation_sign(perm);
}

std::vector<std::pair<Slot, Slot>> inversion_pairs(const VectorWord& from,
                                                   const VectorWord& to) {
  check_permutation(from, to);
  std::vector<int> pos;
  pos.reserve(from.size());
  for (const auto& s : from) pos.push_back(position_of(to, s));
  std::vector<std::pair<Slot, Slot>> out;
  // Bubble-sort order: adjacent swaps of `from` until it reads as `to`.
  std::vector<int> order(from.size());
  std::iota(order.begin(), order.end(), 0);
  bool swapped = true;
  while (swapped) {
    swapped = false;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      if (pos[order[i]] > pos[order[i + 1]]) {
        out.emplace_back(from[order[i]], from[order[i + 1]]);
        std::swap(order[i], order[i + 1]);
        swapped = true;
      }
    }
  }
  return out;
}

cplx s_product(const VectorWord& from, const VectorWord& to, const SlotValues& values,
               const ModelParams& params) {
  cplx prod = 1.0;
  for (const auto& [u, v] : inversion_pairs(from, to))
    prod *= s_matrix(values(u) - values(v), params);
  return prod;
}

int CompositionVector::total() const { return std::accumulate(n.begin(), n.end(), 0); }

double CompositionVector::factorial() const {
  double f = 1.0;
  for (int v : n) f *= shg::factorial(v);
  return f;
}

std::string CompositionVector::to_string() const {
  std::string out;
  for (int b = 2; b <= k; ++b)
    for (int a = 1; a < b; ++a) {
      if (!out.empty()) out += " ";
      out += "n" + std::to_string(b) + std::to_string(a) + "=" + std::to_string(at(b, a));
    }
  return out;
}

CompositionVector make_composition(int k) {
  if (k < 2) throw Error(ErrorKind::Domain, "composition: k must be at least 2");
  return CompositionVector{k, std::vector<int>(CompositionVector::size_for(k), 0)};
}

bool satisfies_truncation(const CompositionVector& c, const std::vector<int>& r) {
  if (static_cast<int>(r.size()) != c.k - 1) return false;
  for (int p = 1; p < c.k; ++p) {
    int sum = 0;
    for (int u = p + 1; u <= c.k; ++u)
      for (int s = 1; s <= p; ++s) sum += c.at(u, s);
    if (sum != r[p - 1]) return false;
  }
  return true;
}

std::vector<CompositionVector> enumerate_compositions(int k, const std::vector<int>& r) {
  if (k < 2 || static_cast<int>(r.size()) != k - 1)
    throw Error(ErrorKind::Domain, "enumerate_compositions: r must have k-1 entries");
  for (int v : r)
    if (v < 0) throw Error(ErrorKind::Domain, "enumerate_compositions: negative entry");
  std::vector<CompositionVector> out;
  CompositionVector cur = make_composition(k);
  std::vector<int> partial(k - 1, 0);
  enumerate_rec(k, r, 0, cur, partial, out);
  return out;
}

double omega_ba(int b, int a, const std::vector<double>& omegas) {
  const int k = static_cast<int>(omegas.size());
  if (!(1 <= a && a < b && b <= k)) throw Error(ErrorKind::Domain, "omega_ba: index range");
  double sum = 0.0;
  for (int l = a + 1; l <= b; ++l) sum += omegas[l - 1];
  return sum;
}

double omega_ba_t(int b, int a, int t, const std::vector<double>& omegas) {
  const int k = static_cast<int>(omegas.size());
  if (!(1 <= t && t <= k)) throw Error(ErrorKind::Domain, "omega_ba_t: index range");
  double sum = omega_ba(b, a, omegas);
  if (a < t && t <= b) sum -= omegas[t - 1];
  return sum;
}

std::vector<std::vector<int>> arrangements(int n, int p) {
  std::vector<std::vector<int>> out;
  if (p < 0 || p > n) return out;
  std::vector<int> cur;
  std::vector<bool> used(n, false);
  arrangements_rec(n, p, cur, used, out);
  return out;
}

std::vector<int> complement(int n, const std::vector<int>& chosen) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) out.push_back(i);
  return out;
}

cplx cauchy_lhs(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  check_distinct(a, b);
  cplx num = 1.0;
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t l = 0; l < r; ++l) num *= a[r] - a[l];
  for (std::size_t r = 0; r < b.size(); ++r)
    for (std::size_t l = r + 1; l < b.size(); ++l) num *= b[r] - b[l];
  cplx den = 1.0;
  for (const auto& x : a)
    for (const auto& y : b) den *= x - y;
  return num / den;
}

std::vector<CauchyTerm> cauchy_decomposition(const std::vector<cplx>& a,
                                             const std::vector<cplx>& b) {
  check_distinct(a, b);
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(b.size());
  const int p = std::min(m, n);
  const double norm = 1.0 / factorial(p);
  std::vector<CauchyTerm> out;
  for (const auto& b1 : arrangements(n, p)) {
    const auto b2 = complement(n, b1);
    std::vector<int> bperm = b1;
    bperm.insert(bperm.end(), b2.begin(), b2.end());
    const int sb = permutation_sign(bperm);
    for (const auto& a1 : arrangements(m, p)) {
      const auto a2 = complement(m, a1);
      std::vector<int> aperm = a1;
      aperm.insert(aperm.end(), a2.begin(), a2.end());
      CauchyTerm term;
      term.sign = sb * permutation_sign(aperm);
      term.a1 = a1;
      term.a2 = a2;
      term.b1 = b1;
      term.b2 = b2;
      cplx v = term.sign * norm;
      for (std::size_t r = 0; r < b2.size(); ++r)
        for (std::size_t l = r + 1; l < b2.size(); ++l) v *= b[b2[r]] - b[b2[l]];
      for (std::size_t r = 0; r < a2.size(); ++r)
        for (std::size_t l = 0; l < r; ++l) v *= a[a2[r]] - a[a2[l]];
      for (int r = 0; r < p; ++r) v /= a[a1[r]] - b[b1[r]];
      term.value = v;
      out.push_back(std::move(term));
    }
  }
  return out;
}

std::string to_string(const BlockVar& v) {
  return "g" + std::to_string(v.b) + std::to_string(v.a) + "_" + std::to_string(v.j);
}

std::vector<BlockVar> level_vector_a(const CompositionVector& c, int p) {
  std::vector<BlockVar> out;
  for (int s = p - 1; s >= 1; --s)
    for (int j = c.at(p, s); j >= 1; --j) out.push_back({p, s, j});
  return out;
}

std::vector<BlockVar> level_vector_b(const CompositionVector& c, int p) {
  std::vector<BlockVar> out;
  for (int v = c.k; v > p; --v)
    for (int j = 1; j <= c.at(v, p); ++j) out.push_back({v, p, j});
  return out;
}

std::vector<BlockVar> PoleChain::variables() const {
  std::vector<BlockVar> out;
  for (std::size_t r = 1; r < sites.size(); ++r)
    out.push_back({sites[r], sites[r - 1], indices[r - 1]});
  return out;
}

std::vector<PoleFactor> PoleChain::factors() const {
  const auto vars = variables();
  std::vector<PoleFactor> out;
  for (std::size_t r = 0; r + 1 < vars.size(); ++r)
    out.push_back({vars[r], vars[r + 1], sites[r + 1]});
  return out;
}

std::vector<PoleFactor> level_pole_factors(const std::vector<LevelPartition>& levels) {
  std::vector<PoleFactor> out;
  for (const auto& lp : levels)
    for (std::size_t r = 0; r < lp.a1.size() && r < lp.b1.size(); ++r)
      out.push_back({lp.a1[r], lp.b1[r], lp.p});
  return out;
}

std::vector<PoleChain> chain_decomposition(const CompositionVector& c,
                                           const std::vector<LevelPartition>& levels) {
  const int k = c.k;
  std::map<int, const LevelPartition*> by_level;
  for (const auto& lp : levels) {
    if (lp.p < 2 || lp.p > k - 1)
      throw Error(ErrorKind::Domain, "chain_decomposition: level out of range");
    if (by_level.count(lp.p))
      throw Error(ErrorKind::Domain, "chain_decomposition: duplicated level");
    by_level[lp.p] = &lp;
  }
  for (int p = 2; p <= k - 1; ++p) {
    const auto av = level_vector_a(c, p);
    const auto bv = level_vector_b(c, p);
    const std::size_t need = std::min(av.size(), bv.size());
    const LevelPartition* lp = by_level.count(p) ? by_level[p] : nullptr;
    const std::size_t na = lp ? lp->a1.size() : 0;
    const std::size_t nb = lp ? lp->b1.size() : 0;
    if (na != need || nb != need)
      throw Error(ErrorKind::Domain, "chain_decomposition: cardinality constraint violated");
    if (!lp) continue;
    auto check = [](const std::vector<BlockVar>& part, const std::vector<BlockVar>& whole) {
      for (std::size_t i = 0; i < part.size(); ++i) {
        if (std::find(whole.begin(), whole.end(), part[i]) == whole.end())
          throw Error(ErrorKind::Domain, "chain_decomposition: variable outside its level");
        for (std::size_t j = i + 1; j < part.size(); ++j)
          if (part[i] == part[j])
            throw Error(ErrorKind::Domain, "chain_decomposition: repeated variable");
      }
    };
    check(lp->a1, av);
    check(lp->b1, bv);
  }

  std::map<int, std::vector<bool>> used;
  for (const auto& [p, lp] : by_level) used[p] = std::vector<bool>(lp->a1.size(), false);

  auto find_in_a1 = [&](const BlockVar& v, int& level, std::size_t& pos) {
    auto it = by_level.find(v.b);
    if (it == by_level.end()) return false;
    const auto& a1 = it->second->a1;
    for (std::size_t r = 0; r < a1.size(); ++r)
      if (a1[r] == v && !used[v.b][r]) {
        level = v.b;
        pos = r;
        return true;
      }
    return false;
  };

  std::vector<PoleChain> chains;
  while (true) {
    int start_level = -1;
    std::size_t start_pos = 0;
    for (const auto& [p, flags] : used) {
      for (std::size_t r = 0; r < flags.size(); ++r)
        if (!flags[r]) {
          start_level = p;
          start_pos = r;
          break;
        }
      if (start_level >= 0) break;
    }
    if (start_level < 0) break;

    PoleChain chain;
    int level = start_level;
    std::size_t pos = start_pos;
    const BlockVar& first = by_level[level]->a1[pos];
    chain.sites = {first.a, first.b};
    chain.indices = {first.j};
    while (true) {
      used[level][pos] = true;
      const BlockVar next = by_level[level]->b1[pos];
      chain.sites.push_back(next.b);
      chain.indices.push_back(next.j);
      if (!find_in_a1(next, level, pos)) break;
    }
    chains.push_back(std::move(chain));
  }
  return chains;
}

}  // namespace shg
