#include "lyz/tree.hpp"

#include <limits>

#include "lyz/errors.hpp"
#include "lyz/params.hpp"

namespace lyz {

const char* to_string(TreeVariant variant) {
  return variant == TreeVariant::rooted ? "rooted" : "full";
}

TreeVariant parse_tree_variant(const std::string& name) {
  if (name == "rooted") return TreeVariant::rooted;
  if (name == "full") return TreeVariant::full;
  throw ParameterError("tree variant must be 'rooted' or 'full', got '" + name + "'");
}

std::uint64_t rooted_vertex_count(int level, int k) {
  if (level < 0) throw ParameterError("tree level must be non-negative");
  validate_branching(k);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max() / 128;
  std::uint64_t total = 1;
  std::uint64_t layer = 1;
  for (int d = 1; d <= level; ++d) {
    if (layer > kMax / static_cast<std::uint64_t>(k))
      throw ParameterError("tree level " + std::to_string(level) + " overflows 64-bit vertex counts");
    layer *= static_cast<std::uint64_t>(k);
    total += layer;
  }
  return total;
}

TreeSpec::TreeSpec(TreeVariant variant, int level, int k) : variant_(variant), level_(level), k_(k) {
  validate_branching(k);
  if (level < 0) throw ParameterError("tree level must be non-negative");
  if (variant == TreeVariant::full && level < 1)
    throw ParameterError("the full tree needs level n >= 1");
  if (variant == TreeVariant::rooted) {
    vertices_ = rooted_vertex_count(level, k);
  } else {
    const std::uint64_t sub = rooted_vertex_count(level - 1, k);
    vertices_ = 1 + static_cast<std::uint64_t>(k + 1) * sub;
  }
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> TreeSpec::edges() const {
  if (vertices_ > std::numeric_limits<std::uint32_t>::max())
    throw ParameterError("tree too large to materialize: " + describe());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  out.reserve(edge_count());
  std::vector<std::uint32_t> frontier{0};
  std::uint32_t next = 1;
  for (int depth = 0; depth < level_; ++depth) {
    const int children = (variant_ == TreeVariant::full && depth == 0) ? k_ + 1 : k_;
    std::vector<std::uint32_t> nf;
    nf.reserve(frontier.size() * children);
    for (auto parent : frontier) {
      for (int c = 0; c < children; ++c) {
        out.emplace_back(parent, next);
        nf.push_back(next++);
      }
    }
    frontier = std::move(nf);
  }
  return out;
}

std::string TreeSpec::describe() const {
  return std::string(to_string(variant_)) + "(k=" + std::to_string(k_) + ", n=" + std::to_string(level_) + ")";
}

}  // namespace lyz
