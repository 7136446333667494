#pragma once

#include "bgkit/rational.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace bgkit {

// Canonical normal form: reduced word (free), coordinates (free abelian),
// image table (permutation), length-prefixed concatenation (product).
using GroupElement = std::vector<std::int64_t>;

struct ElementHash {
  std::size_t operator()(const GroupElement& g) const noexcept;
};

enum class Nilpotency { virtually_nilpotent, not_virtually_nilpotent, unknown };
std::string to_string(Nilpotency n);

struct IndexEvidence {
  enum class Verdict { verified, infinite_index, inconclusive };
  Verdict verdict = Verdict::inconclusive;
  std::optional<Integer> index;
  std::string method;
};
std::string to_string(IndexEvidence::Verdict v);

class Group {
 public:
  virtual ~Group() = default;

  virtual std::string family() const = 0;
  virtual std::string describe() const = 0;
  virtual GroupElement identity() const = 0;
  virtual GroupElement multiply(const GroupElement& a, const GroupElement& b) const = 0;
  virtual GroupElement inverse(const GroupElement& a) const = 0;
  // The family's standard generating set (not symmetrized).
  virtual std::vector<GroupElement> generators() const = 0;
  virtual bool contains(const GroupElement& g) const = 0;
  // Word length with respect to the symmetrized standard generating set.
  virtual std::int64_t word_length(const GroupElement& g) const = 0;
  // Sizes of the word-metric spheres of radius 0..n_max.
  virtual std::vector<Integer> sphere_sizes(int n_max) const = 0;
  virtual bool is_torsion(const GroupElement& g) const = 0;
  virtual Nilpotency classify_subgroup(const std::vector<GroupElement>& gens) const = 0;
  virtual IndexEvidence subgroup_index(const std::vector<GroupElement>& gens, std::size_t bound) const = 0;
  virtual std::optional<std::size_t> order() const { return std::nullopt; }

  std::vector<GroupElement> symmetric_generators() const;
  bool is_identity(const GroupElement& g) const { return g == identity(); }
  std::string element_to_string(const GroupElement& g) const;
};

using GroupPtr = std::shared_ptr<const Group>;

class FreeGroup final : public Group {
 public:
  explicit FreeGroup(int rank);
  int rank() const { return rank_; }

  std::string family() const override { return "free"; }
  std::string describe() const override;
  GroupElement identity() const override { return {}; }
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const override;
  GroupElement inverse(const GroupElement& a) const override;
  std::vector<GroupElement> generators() const override;
  bool contains(const GroupElement& g) const override;
  std::int64_t word_length(const GroupElement& g) const override { return static_cast<std::int64_t>(g.size()); }
  std::vector<Integer> sphere_sizes(int n_max) const override;
  bool is_torsion(const GroupElement& g) const override { return g.empty(); }
  Nilpotency classify_subgroup(const std::vector<GroupElement>& gens) const override;
  IndexEvidence subgroup_index(const std::vector<GroupElement>& gens, std::size_t bound) const override;

 private:
  int rank_;
};

class FreeAbelianGroup final : public Group {
 public:
  explicit FreeAbelianGroup(int rank);
  int rank() const { return rank_; }

  std::string family() const override { return rank_ == 0 ? "trivial" : "free_abelian"; }
  std::string describe() const override;
  GroupElement identity() const override { return GroupElement(static_cast<std::size_t>(rank_), 0); }
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const override;
  GroupElement inverse(const GroupElement& a) const override;
  std::vector<GroupElement> generators() const override;
  bool contains(const GroupElement& g) const override { return g.size() == static_cast<std::size_t>(rank_); }
  std::int64_t word_length(const GroupElement& g) const override;
  std::vector<Integer> sphere_sizes(int n_max) const override;
  bool is_torsion(const GroupElement& g) const override { return g == identity(); }
  Nilpotency classify_subgroup(const std::vector<GroupElement>&) const override {
    return Nilpotency::virtually_nilpotent;
  }
  IndexEvidence subgroup_index(const std::vector<GroupElement>& gens, std::size_t bound) const override;

 private:
  int rank_;
};

// Finite group of permutations of {0..degree-1} generated by the given image tables.
class PermutationGroup final : public Group {
 public:
  PermutationGroup(int degree, std::vector<GroupElement> gens, std::size_t max_order = 1'000'000);
  int degree() const { return degree_; }
  const std::vector<GroupElement>& elements() const { return elements_; }

  std::string family() const override { return "finite_permutation"; }
  std::string describe() const override;
  GroupElement identity() const override;
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const override;
  GroupElement inverse(const GroupElement& a) const override;
  std::vector<GroupElement> generators() const override { return gens_; }
  bool contains(const GroupElement& g) const override { return index_.count(g) > 0; }
  std::int64_t word_length(const GroupElement& g) const override;
  std::vector<Integer> sphere_sizes(int n_max) const override;
  bool is_torsion(const GroupElement&) const override { return true; }
  Nilpotency classify_subgroup(const std::vector<GroupElement>&) const override {
    return Nilpotency::virtually_nilpotent;
  }
  IndexEvidence subgroup_index(const std::vector<GroupElement>& gens, std::size_t bound) const override;
  std::optional<std::size_t> order() const override { return elements_.size(); }

 private:
  int degree_;
  std::vector<GroupElement> gens_;
  std::vector<GroupElement> elements_;  // breadth-first order from the identity
  std::vector<std::int64_t> depth_;
  std::unordered_map<GroupElement, std::size_t, ElementHash> index_;
};

class ProductGroup final : public Group {
 public:
  explicit ProductGroup(std::vector<GroupPtr> factors);
  const std::vector<GroupPtr>& factors() const { return factors_; }
  std::vector<GroupElement> split(const GroupElement& g) const;
  GroupElement join(const std::vector<GroupElement>& parts) const;

  std::string family() const override { return "product"; }
  std::string describe() const override;
  GroupElement identity() const override;
  GroupElement multiply(const GroupElement& a, const GroupElement& b) const override;
  GroupElement inverse(const GroupElement& a) const override;
  std::vector<GroupElement> generators() const override;
  bool contains(const GroupElement& g) const override;
  std::int64_t word_length(const GroupElement& g) const override;
  std::vector<Integer> sphere_sizes(int n_max) const override;
  bool is_torsion(const GroupElement& g) const override;
  Nilpotency classify_subgroup(const std::vector<GroupElement>& gens) const override;
  IndexEvidence subgroup_index(const std::vector<GroupElement>& gens, std::size_t bound) const override;
  std::optional<std::size_t> order() const override;

 private:
  std::vector<GroupPtr> factors_;
};

// Closure of a generating set inside any group, capped at `bound` elements.
// Returns nullopt when the cap is reached.
std::optional<std::vector<GroupElement>> subgroup_closure(const Group& g, const std::vector<GroupElement>& gens,
                                                          std::size_t bound);

}  // namespace bgkit
