#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "exotic/domain.hpp"
#include "exotic/reformulation.hpp"
#include "json.hpp"

namespace exotic {

/// A box cell of the hierarchical partition, living in the parameter space of
/// the outer domain (see ProductDomain::parameter_box).
///
/// Coordinate c spans [lo_c + w_c n_c / K^l_c, lo_c + w_c (n_c+1) / K^l_c]
/// where (lo_c, w_c) describe the root box. The offsets n_c are exact
/// integers, so arbitrarily deep trees never collapse to zero-width cells;
/// only the cached double bounds are subject to rounding.
class Cell {
 public:
  /// The root cell covering `root`.
  Cell(std::shared_ptr<const BoxDomain> root, int arity);

  std::size_t dimension() const { return lower_.size(); }
  int depth() const { return depth_; }
  int arity() const { return arity_; }

  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  /// Number of times coordinate c has been split.
  unsigned level(std::size_t c) const { return levels_[c]; }

  /// Exact edge length of coordinate c relative to the root: w_c / K^level.
  double edge(std::size_t c) const;
  Vector midpoint() const;
  double diameter() const;
  bool contains(std::span<const double> point) const;

  /// Longest edge, ties to the lowest coordinate.
  std::size_t longest_edge() const;

 private:
  friend std::vector<Cell> split(const Cell& cell, int arity);
  void refresh_bounds();

  std::shared_ptr<const BoxDomain> root_;
  int arity_;
  int depth_ = 0;
  std::vector<unsigned> levels_;
  std::vector<boost::multiprecision::cpp_int> offsets_;
  Vector lower_;
  Vector upper_;
};

/// Splits the longest edge into `arity` equal pieces, ordered from the low
/// end of the edge. Throws std::invalid_argument for arity < 2
/// and DegenerateCellError when the longest edge has zero width.
std::vector<Cell> split(const Cell& cell, int arity);

/// Node tuple (w, b, lambda, s) plus tree links.
struct TreeNode {
  Cell cell;
  OuterPoint center;
  double value = 0.0;      // b: latest estimate of G(center)
  Vector initializer;      // lambda: warm start for the next solve on this node
  int count = 0;           // s: iterations behind `value`
  bool evaluated = false;
  std::size_t parent = 0;
  std::vector<std::size_t> children;
  int depth_position = 0;  // index i: position within Tree::depth_index()[depth]

  bool is_leaf() const { return children.empty(); }
};

/// K-ary partition tree over an outer domain. Node 0 is the root. Nodes are
/// stored in creation order; `depth_index()[h]` lists the ids at depth h.
class Tree {
 public:
  /// `copies` is the number of components of an outer point; the outer
  /// domain's parameters are mapped back through `outer.from_parameters`.
  Tree(ProductDomain outer, std::size_t copies, int arity);

  int arity() const { return arity_; }
  std::size_t size() const { return nodes_.size(); }
  const TreeNode& node(std::size_t id) const { return nodes_.at(id); }
  TreeNode& node(std::size_t id) { return nodes_.at(id); }
  const std::vector<std::vector<std::size_t>>& depth_index() const { return depth_index_; }
  const ProductDomain& outer_domain() const { return outer_; }
  int max_depth() const { return static_cast<int>(depth_index_.size()) - 1; }

  /// Adds `arity` children to a leaf and returns their ids.
  std::vector<std::size_t> expand(std::size_t id);

  /// Maps a cell midpoint to an outer point.
  OuterPoint cell_center(const Cell& cell) const;

  nlohmann::json to_json() const;

 private:
  ProductDomain outer_;
  std::size_t copies_;
  int arity_;
  std::vector<TreeNode> nodes_;
  std::vector<std::vector<std::size_t>> depth_index_;
};

/// Coordinate-wise midpoint of `cell` mapped into the outer domain.
OuterPoint cell_center(const ProductDomain& outer, std::size_t copies, const Cell& cell);

/// alpha * beta^h with alpha the longest root edge of the parameter box and
/// beta = K^(-1/D). Depth-h cells of a cubic root have Euclidean diameter at
/// most sqrt(D) * K^((D-1)/D) times this value.
double diameter_bound(const Tree& tree, int h);

}  // namespace exotic
