#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace lyz {

enum class TreeVariant { rooted, full };

const char* to_string(TreeVariant variant);
TreeVariant parse_tree_variant(const std::string& name);

/// Level-n Cayley tree with branching number k.
///  rooted: every internal vertex has k children, leaves at depth n.
///  full:   the center joins k + 1 rooted trees of level n - 1 (n >= 1).
class TreeSpec {
 public:
  TreeSpec(TreeVariant variant, int level, int k);

  static TreeSpec rooted(int level, int k) { return {TreeVariant::rooted, level, k}; }
  static TreeSpec full(int level, int k) { return {TreeVariant::full, level, k}; }

  TreeVariant variant() const noexcept { return variant_; }
  int level() const noexcept { return level_; }
  int k() const noexcept { return k_; }

  /// rooted: (k^{n+1} - 1)/(k - 1); full: 1 + (k + 1)(k^n - 1)/(k - 1).
  std::uint64_t vertex_count() const noexcept { return vertices_; }
  std::uint64_t edge_count() const noexcept { return vertices_ - 1; }

  /// Edge list with vertex 0 the root (or center); children follow in
  /// breadth-first order.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const;

  std::string describe() const;

  friend bool operator==(const TreeSpec&, const TreeSpec&) = default;

 private:
  TreeVariant variant_;
  int level_;
  int k_;
  std::uint64_t vertices_;
};

/// Vertex count of the rooted tree, guarded against 64-bit overflow.
std::uint64_t rooted_vertex_count(int level, int k);

}  // namespace lyz
