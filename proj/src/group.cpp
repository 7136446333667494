#include "bgkit/group.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace bgkit {

std::size_t ElementHash::operator()(const GroupElement& g) const noexcept {
  std::size_t h = g.size();
  for (auto x : g) h ^= std::hash<std::int64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::string to_string(Nilpotency n) {
  switch (n) {
    case Nilpotency::virtually_nilpotent: return "virtually_nilpotent";
    case Nilpotency::not_virtually_nilpotent: return "not_virtually_nilpotent";
    case Nilpotency::unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(IndexEvidence::Verdict v) {
  switch (v) {
    case IndexEvidence::Verdict::verified: return "verified";
    case IndexEvidence::Verdict::infinite_index: return "infinite_index";
    case IndexEvidence::Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::vector<GroupElement> Group::symmetric_generators() const {
  std::set<GroupElement> out;
  for (const auto& s : generators()) {
    if (is_identity(s)) continue;
    out.insert(s);
    out.insert(inverse(s));
  }
  return {out.begin(), out.end()};
}

std::string Group::element_to_string(const GroupElement& g) const {
  std::string s = "[";
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(g[i]);
  }
  return s + "]";
}

std::optional<std::vector<GroupElement>> subgroup_closure(const Group& g, const std::vector<GroupElement>& gens,
                                                          std::size_t bound) {
  std::vector<GroupElement> steps;
  for (const auto& s : gens) {
    steps.push_back(s);
    steps.push_back(g.inverse(s));
  }
  std::unordered_set<GroupElement, ElementHash> seen{g.identity()};
  std::vector<GroupElement> out{g.identity()};
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (const auto& s : steps) {
      auto next = g.multiply(out[head], s);
      if (seen.insert(next).second) {
        if (out.size() >= bound) return std::nullopt;
        out.push_back(std::move(next));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- free

FreeGroup::FreeGroup(int rank) : rank_(rank) {
  if (rank < 0) throw std::invalid_argument("free group rank must be nonnegative");
}

std::string FreeGroup::describe() const { return "F" + std::to_string(rank_); }

GroupElement FreeGroup::multiply(const GroupElement& a, const GroupElement& b) const {
  GroupElement out = a;
  for (auto letter : b) {
    if (!out.empty() && out.back() == -letter)
      out.pop_back();
    else
      out.push_back(letter);
  }
  return out;
}

GroupElement FreeGroup::inverse(const GroupElement& a) const {
  GroupElement out(a.rbegin(), a.rend());
  for (auto& x : out) x = -x;
  return out;
}

std::vector<GroupElement> FreeGroup::generators() const {
  std::vector<GroupElement> out;
  for (int i = 1; i <= rank_; ++i) out.push_back({i});
  return out;
}

bool FreeGroup::contains(const GroupElement& g) const {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] == 0 || g[i] > rank_ || g[i] < -rank_) return false;
    if (i > 0 && g[i] == -g[i - 1]) return false;
  }
  return true;
}

std::vector<Integer> FreeGroup::sphere_sizes(int n_max) const {
  std::vector<Integer> out;
  for (int n = 0; n <= n_max; ++n) {
    if (n == 0)
      out.emplace_back(1);
    else if (rank_ == 0)
      out.emplace_back(0);
    else if (n == 1)
      out.emplace_back(2 * rank_);
    else
      out.push_back(out.back() * (2 * rank_ - 1));
  }
  return out;
}

Nilpotency FreeGroup::classify_subgroup(const std::vector<GroupElement>& gens) const {
  // Subgroups of free groups are free; such a subgroup is virtually nilpotent
  // exactly when it is cyclic, i.e. when its generators pairwise commute.
  std::vector<GroupElement> nontrivial;
  for (const auto& g : gens)
    if (!g.empty()) nontrivial.push_back(g);
  for (std::size_t i = 0; i < nontrivial.size(); ++i)
    for (std::size_t j = i + 1; j < nontrivial.size(); ++j)
      if (multiply(nontrivial[i], nontrivial[j]) != multiply(nontrivial[j], nontrivial[i]))
        return Nilpotency::not_virtually_nilpotent;
  return Nilpotency::virtually_nilpotent;
}

IndexEvidence FreeGroup::subgroup_index(const std::vector<GroupElement>& gens, std::size_t) const {
  // Stallings folding: the subgroup has finite index iff its folded core graph
  // is a covering of the rose, and the index is then the number of vertices.
  IndexEvidence ev;
  ev.method = "stallings_folding";
  if (rank_ == 0) {
    ev.verdict = IndexEvidence::Verdict::verified;
    ev.index = 1;
    return ev;
  }
  struct Edge {
    std::size_t from;
    std::int64_t label;
    std::size_t to;
  };
  std::vector<Edge> edges;
  std::size_t vertices = 1;
  for (const auto& w : gens) {
    if (w.empty()) continue;
    std::size_t prev = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      std::size_t next = (i + 1 == w.size()) ? 0 : vertices++;
      edges.push_back({prev, w[i], next});
      prev = next;
    }
  }
  std::vector<std::size_t> parent(vertices);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::vector<std::map<std::int64_t, std::size_t>> out(vertices);
  std::deque<Edge> queue(edges.begin(), edges.end());
  auto attach = [&](std::size_t u, std::int64_t a, std::size_t v) {
    auto it = out[u].find(a);
    if (it == out[u].end()) {
      out[u][a] = v;
      return;
    }
    std::size_t w = find(it->second);
    if (w == v) return;
    // Fold: identify w with v and replay w's edges at the merged vertex.
    parent[w] = v;
    for (const auto& [label, t] : out[w]) queue.push_back({v, label, t});
    out[w].clear();
  };
  while (!queue.empty()) {
    Edge e = queue.front();
    queue.pop_front();
    std::size_t u = find(e.from), v = find(e.to);
    attach(u, e.label, v);
    u = find(u);
    v = find(v);
    attach(v, -e.label, u);
  }
  std::size_t roots = 0;
  bool covering = true;
  for (std::size_t v = 0; v < vertices; ++v) {
    if (find(v) != v) continue;
    ++roots;
    std::set<std::int64_t> labels;
    for (const auto& [label, t] : out[v]) labels.insert(label);
    if (labels.size() != static_cast<std::size_t>(2 * rank_)) covering = false;
  }
  if (covering) {
    ev.verdict = IndexEvidence::Verdict::verified;
    ev.index = Integer(roots);
  } else {
    ev.verdict = IndexEvidence::Verdict::infinite_index;
  }
  return ev;
}

// ---------------------------------------------------------------- free abelian

FreeAbelianGroup::FreeAbelianGroup(int rank) : rank_(rank) {
  if (rank < 0) throw std::invalid_argument("free abelian rank must be nonnegative");
}

std::string FreeAbelianGroup::describe() const { return rank_ == 0 ? "1" : "Z^" + std::to_string(rank_); }

GroupElement FreeAbelianGroup::multiply(const GroupElement& a, const GroupElement& b) const {
  GroupElement out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

GroupElement FreeAbelianGroup::inverse(const GroupElement& a) const {
  GroupElement out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

std::vector<GroupElement> FreeAbelianGroup::generators() const {
  std::vector<GroupElement> out;
  for (int i = 0; i < rank_; ++i) {
    GroupElement e(static_cast<std::size_t>(rank_), 0);
    e[static_cast<std::size_t>(i)] = 1;
    out.push_back(e);
  }
  return out;
}

std::int64_t FreeAbelianGroup::word_length(const GroupElement& g) const {
  std::int64_t s = 0;
  for (auto x : g) s += x < 0 ? -x : x;
  return s;
}

std::vector<Integer> FreeAbelianGroup::sphere_sizes(int n_max) const {
  // count[j][n] = number of vectors in Z^j with l1 norm n.
  std::vector<Integer> row(static_cast<std::size_t>(n_max) + 1, 0);
  row[0] = 1;
  for (int j = 0; j < rank_; ++j) {
    std::vector<Integer> next(row.size(), 0);
    for (int n = 0; n <= n_max; ++n) {
      next[n] += row[n];
      for (int c = 1; c <= n; ++c) next[n] += 2 * row[n - c];
    }
    row = std::move(next);
  }
  return row;
}

IndexEvidence FreeAbelianGroup::subgroup_index(const std::vector<GroupElement>& gens, std::size_t) const {
  // Integer row echelon form; the index of a full-rank lattice is |det|.
  IndexEvidence ev;
  ev.method = "integer_echelon_form";
  std::vector<std::vector<Integer>> m;
  for (const auto& g : gens) m.emplace_back(g.begin(), g.end());
  std::size_t row = 0;
  Integer det = 1;
  for (int col = 0; col < rank_; ++col) {
    auto c = static_cast<std::size_t>(col);
    while (true) {
      std::size_t pivot = m.size();
      for (std::size_t r = row; r < m.size(); ++r)
        if (m[r][c] != 0 && (pivot == m.size() || abs(m[r][c]) < abs(m[pivot][c]))) pivot = r;
      if (pivot == m.size()) break;
      std::swap(m[row], m[pivot]);
      bool done = true;
      for (std::size_t r = row + 1; r < m.size(); ++r) {
        if (m[r][c] == 0) continue;
        Integer q = m[r][c] / m[row][c];
        for (std::size_t k = c; k < m[r].size(); ++k) m[r][k] -= q * m[row][k];
        if (m[r][c] != 0) done = false;
      }
      if (done) break;
    }
    if (row < m.size() && m[row][c] != 0) {
      det *= abs(m[row][c]);
      ++row;
    } else {
      ev.verdict = IndexEvidence::Verdict::infinite_index;
      return ev;
    }
  }
  ev.verdict = IndexEvidence::Verdict::verified;
  ev.index = det;
  return ev;
}

// ---------------------------------------------------------------- permutations

PermutationGroup::PermutationGroup(int degree, std::vector<GroupElement> gens, std::size_t max_order)
    : degree_(degree), gens_(std::move(gens)) {
  if (degree < 1) throw std::invalid_argument("permutation degree must be positive");
  for (const auto& g : gens_) {
    if (g.size() != static_cast<std::size_t>(degree)) throw std::invalid_argument("permutation has wrong degree");
    std::vector<bool> hit(g.size(), false);
    for (auto x : g) {
      if (x < 0 || x >= degree || hit[static_cast<std::size_t>(x)])
        throw std::invalid_argument("generator is not a permutation");
      hit[static_cast<std::size_t>(x)] = true;
    }
  }
  elements_.push_back(identity());
  depth_.push_back(0);
  index_[elements_[0]] = 0;
  auto steps = symmetric_generators();
  for (std::size_t head = 0; head < elements_.size(); ++head) {
    for (const auto& s : steps) {
      auto next = multiply(elements_[head], s);
      if (index_.count(next)) continue;
      if (elements_.size() >= max_order) throw std::runtime_error("permutation group exceeds order cap");
      index_[next] = elements_.size();
      depth_.push_back(depth_[head] + 1);
      elements_.push_back(std::move(next));
    }
  }
}

std::string PermutationGroup::describe() const {
  return "Perm(" + std::to_string(degree_) + ";order " + std::to_string(elements_.size()) + ")";
}

GroupElement PermutationGroup::identity() const {
  GroupElement e(static_cast<std::size_t>(degree_));
  std::iota(e.begin(), e.end(), 0);
  return e;
}

GroupElement PermutationGroup::multiply(const GroupElement& a, const GroupElement& b) const {
  // (ab)(i) = a(b(i)), so that (ab)·v = a·(b·v).
  GroupElement out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[static_cast<std::size_t>(b[i])];
  return out;
}

GroupElement PermutationGroup::inverse(const GroupElement& a) const {
  GroupElement out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[static_cast<std::size_t>(a[i])] = static_cast<std::int64_t>(i);
  return out;
}

std::int64_t PermutationGroup::word_length(const GroupElement& g) const {
  auto it = index_.find(g);
  if (it == index_.end()) throw std::domain_error("element not in permutation group");
  return depth_[it->second];
}

std::vector<Integer> PermutationGroup::sphere_sizes(int n_max) const {
  std::vector<Integer> out(static_cast<std::size_t>(n_max) + 1, 0);
  for (auto d : depth_)
    if (d <= n_max) out[static_cast<std::size_t>(d)] += 1;
  return out;
}

IndexEvidence PermutationGroup::subgroup_index(const std::vector<GroupElement>& gens, std::size_t) const {
  IndexEvidence ev;
  ev.method = "subgroup_closure";
  auto sub = subgroup_closure(*this, gens, elements_.size() + 1);
  ev.verdict = IndexEvidence::Verdict::verified;
  ev.index = Integer(elements_.size() / sub->size());
  return ev;
}

// ---------------------------------------------------------------- products

ProductGroup::ProductGroup(std::vector<GroupPtr> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument("product needs at least one factor");
}

std::string ProductGroup::describe() const {
  std::string s;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) s += " x ";
    s += factors_[i]->describe();
  }
  return s;
}

std::vector<GroupElement> ProductGroup::split(const GroupElement& g) const {
  std::vector<GroupElement> parts;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    if (pos >= g.size()) throw std::domain_error("malformed product element");
    auto len = static_cast<std::size_t>(g[pos++]);
    if (pos + len > g.size()) throw std::domain_error("malformed product element");
    parts.emplace_back(g.begin() + static_cast<std::ptrdiff_t>(pos), g.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  }
  if (pos != g.size()) throw std::domain_error("malformed product element");
  return parts;
}

GroupElement ProductGroup::join(const std::vector<GroupElement>& parts) const {
  GroupElement out;
  for (const auto& p : parts) {
    out.push_back(static_cast<std::int64_t>(p.size()));
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

GroupElement ProductGroup::identity() const {
  std::vector<GroupElement> parts;
  for (const auto& f : factors_) parts.push_back(f->identity());
  return join(parts);
}

GroupElement ProductGroup::multiply(const GroupElement& a, const GroupElement& b) const {
  auto pa = split(a), pb = split(b);
  for (std::size_t i = 0; i < factors_.size(); ++i) pa[i] = factors_[i]->multiply(pa[i], pb[i]);
  return join(pa);
}

GroupElement ProductGroup::inverse(const GroupElement& a) const {
  auto pa = split(a);
  for (std::size_t i = 0; i < factors_.size(); ++i) pa[i] = factors_[i]->inverse(pa[i]);
  return join(pa);
}

std::vector<GroupElement> ProductGroup::generators() const {
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    for (const auto& s : factors_[i]->generators()) {
      std::vector<GroupElement> parts;
      for (const auto& f : factors_) parts.push_back(f->identity());
      parts[i] = s;
      out.push_back(join(parts));
    }
  }
  return out;
}

bool ProductGroup::contains(const GroupElement& g) const {
  try {
    auto parts = split(g);
    for (std::size_t i = 0; i < factors_.size(); ++i)
      if (!factors_[i]->contains(parts[i])) return false;
    return true;
  } catch (const std::domain_error&) {
    return false;
  }
}

std::int64_t ProductGroup::word_length(const GroupElement& g) const {
  auto parts = split(g);
  std::int64_t s = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) s += factors_[i]->word_length(parts[i]);
  return s;
}

std::vector<Integer> ProductGroup::sphere_sizes(int n_max) const {
  std::vector<Integer> acc(static_cast<std::size_t>(n_max) + 1, 0);
  acc[0] = 1;
  for (const auto& f : factors_) {
    auto s = f->sphere_sizes(n_max);
    std::vector<Integer> next(acc.size(), 0);
    for (std::size_t a = 0; a < acc.size(); ++a)
      for (std::size_t b = 0; a + b < acc.size(); ++b) next[a + b] += acc[a] * s[b];
    acc = std::move(next);
  }
  return acc;
}

bool ProductGroup::is_torsion(const GroupElement& g) const {
  auto parts = split(g);
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (!factors_[i]->is_torsion(parts[i])) return false;
  return true;
}

Nilpotency ProductGroup::classify_subgroup(const std::vector<GroupElement>& gens) const {
  // H is virtually nilpotent iff every coordinate projection of H is.
  Nilpotency result = Nilpotency::virtually_nilpotent;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    std::vector<GroupElement> proj;
    for (const auto& g : gens) proj.push_back(split(g)[i]);
    auto c = factors_[i]->classify_subgroup(proj);
    if (c == Nilpotency::not_virtually_nilpotent) return c;
    if (c == Nilpotency::unknown) result = Nilpotency::unknown;
  }
  return result;
}

IndexEvidence ProductGroup::subgroup_index(const std::vector<GroupElement>& gens, std::size_t bound) const {
  bool all_abelian = std::all_of(factors_.begin(), factors_.end(),
                                 [](const GroupPtr& f) { return dynamic_cast<const FreeAbelianGroup*>(f.get()); });
  if (all_abelian) {
    int rank = 0;
    for (const auto& f : factors_) rank += dynamic_cast<const FreeAbelianGroup&>(*f).rank();
    std::vector<GroupElement> flat;
    for (const auto& g : gens) {
      GroupElement v;
      for (const auto& p : split(g)) v.insert(v.end(), p.begin(), p.end());
      flat.push_back(v);
    }
    return FreeAbelianGroup(rank).subgroup_index(flat, bound);
  }
  if (auto n = order()) {
    IndexEvidence ev;
    ev.method = "subgroup_closure";
    auto sub = subgroup_closure(*this, gens, *n + 1);
    ev.verdict = IndexEvidence::Verdict::verified;
    ev.index = Integer(*n / sub->size());
    return ev;
  }
  IndexEvidence ev;
  ev.method = "none_for_mixed_product";
  return ev;
}

std::optional<std::size_t> ProductGroup::order() const {
  std::size_t n = 1;
  for (const auto& f : factors_) {
    auto o = f->order();
    if (!o) return std::nullopt;
    n *= *o;
  }
  return n;
}

}  // namespace bgkit
