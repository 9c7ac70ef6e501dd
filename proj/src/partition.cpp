#include "exotic/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "exotic/errors.hpp"

namespace exotic {

namespace mp = boost::multiprecision;

namespace {

// n / K^level as a double, without overflowing for deep levels.
double fraction(const mp::cpp_int& numerator, int arity, unsigned level) {
  if (level == 0) return numerator.convert_to<double>();
  if (level <= 30 && arity <= 4) {
    const double denom = std::pow(double(arity), double(level));
    return numerator.convert_to<double>() / denom;
  }
  const mp::cpp_bin_float_50 num(numerator);
  const mp::cpp_bin_float_50 den = mp::pow(mp::cpp_bin_float_50(arity), level);
  return static_cast<double>(num / den);
}

}  // namespace

Cell::Cell(std::shared_ptr<const BoxDomain> root, int arity) : root_(std::move(root)), arity_(arity) {
  if (!root_) throw std::invalid_argument("Cell: null root box");
  if (arity_ < 2) throw std::invalid_argument("Cell: arity must be >= 2");
  levels_.assign(root_->dimension(), 0);
  offsets_.assign(root_->dimension(), 0);
  lower_ = root_->lower;
  upper_ = root_->upper;
}

void Cell::refresh_bounds() {
  for (std::size_t c = 0; c < dimension(); ++c) {
    const double lo = root_->lower[c];
    const double w = root_->upper[c] - lo;
    lower_[c] = lo + w * fraction(offsets_[c], arity_, levels_[c]);
    upper_[c] = offsets_[c] + 1 == mp::pow(mp::cpp_int(arity_), levels_[c])
                    ? root_->upper[c]
                    : lo + w * fraction(offsets_[c] + 1, arity_, levels_[c]);
  }
}

double Cell::edge(std::size_t c) const {
  return (root_->upper[c] - root_->lower[c]) * std::pow(double(arity_), -double(levels_[c]));
}

Vector Cell::midpoint() const {
  Vector m(dimension());
  for (std::size_t c = 0; c < dimension(); ++c) {
    // Exact midpoint n + 1/2 at the current level, then rounded.
    const double lo = root_->lower[c];
    const double w = root_->upper[c] - lo;
    const mp::cpp_int twice = 2 * offsets_[c] + 1;
    const double frac = levels_[c] == 0 ? 0.5 : 0.5 * fraction(twice, arity_, levels_[c]);
    m[c] = std::clamp(lo + w * frac, lower_[c], upper_[c]);
  }
  return m;
}

double Cell::diameter() const {
  double sq = 0.0;
  for (std::size_t c = 0; c < dimension(); ++c) sq += edge(c) * edge(c);
  return std::sqrt(sq);
}

bool Cell::contains(std::span<const double> point) const {
  if (point.size() != dimension()) return false;
  for (std::size_t c = 0; c < dimension(); ++c) {
    if (point[c] < lower_[c] || point[c] > upper_[c]) return false;
  }
  return true;
}

std::size_t Cell::longest_edge() const {
  // Compare w_a K^-l_a against w_b K^-l_b through the level difference so
  // equal edges compare exactly equal.
  std::size_t best = 0;
  for (std::size_t c = 1; c < dimension(); ++c) {
    const double wb = root_->upper[best] - root_->lower[best];
    const double wc = root_->upper[c] - root_->lower[c];
    const int diff = int(levels_[c]) - int(levels_[best]);
    const double scaled_c = diff >= 0 ? wc : wc * std::pow(double(arity_), -diff);
    const double scaled_b = diff >= 0 ? wb * std::pow(double(arity_), diff) : wb;
    if (scaled_c > scaled_b) best = c;
  }
  return best;
}

std::vector<Cell> split(const Cell& cell, int arity) {
  if (arity < 2) throw std::invalid_argument("split: arity must be >= 2");
  if (arity != cell.arity_) throw std::invalid_argument("split: arity differs from the tree's");
  const std::size_t c = cell.longest_edge();
  if (!(cell.edge(c) > 0.0)) throw DegenerateCellError("split: longest edge has zero width");
  std::vector<Cell> children;
  children.reserve(static_cast<std::size_t>(arity));
  for (int j = 0; j < arity; ++j) {
    Cell child = cell;
    child.depth_ = cell.depth_ + 1;
    child.levels_[c] += 1;
    child.offsets_[c] = cell.offsets_[c] * arity + j;
    child.refresh_bounds();
    children.push_back(std::move(child));
  }
  return children;
}

OuterPoint cell_center(const ProductDomain& outer, std::size_t copies, const Cell& cell) {
  return OuterPoint::split(outer.from_parameters(cell.midpoint()), copies);
}

Tree::Tree(ProductDomain outer, std::size_t copies, int arity)
    : outer_(std::move(outer)), copies_(copies), arity_(arity) {
  if (arity_ < 2) throw std::invalid_argument("Tree: arity must be >= 2");
  auto root_box = std::make_shared<const BoxDomain>(outer_.parameter_box());
  TreeNode root{Cell(root_box, arity_), {}, 0.0, {}, 0, false, 0, {}, 0};
  root.center = exotic::cell_center(outer_, copies_, root.cell);
  nodes_.push_back(std::move(root));
  depth_index_.push_back({0});
}

std::vector<std::size_t> Tree::expand(std::size_t id) {
  if (!nodes_.at(id).is_leaf()) throw std::logic_error("Tree::expand: node already has children");
  std::vector<Cell> cells = split(nodes_[id].cell, arity_);
  const int depth = nodes_[id].cell.depth() + 1;
  if (static_cast<int>(depth_index_.size()) <= depth) depth_index_.resize(depth + 1);
  std::vector<std::size_t> ids;
  for (auto& cell : cells) {
    TreeNode child{std::move(cell), {}, 0.0, {}, 0, false, id, {}, 0};
    child.center = exotic::cell_center(outer_, copies_, child.cell);
    child.depth_position = static_cast<int>(depth_index_[depth].size());
    const std::size_t cid = nodes_.size();
    nodes_.push_back(std::move(child));
    depth_index_[depth].push_back(cid);
    ids.push_back(cid);
  }
  nodes_[id].children = ids;
  return ids;
}

OuterPoint Tree::cell_center(const Cell& cell) const { return exotic::cell_center(outer_, copies_, cell); }

nlohmann::json Tree::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    const auto& n = nodes_[id];
    nlohmann::json bounds = nlohmann::json::array();
    for (std::size_t c = 0; c < n.cell.dimension(); ++c) {
      bounds.push_back({n.cell.lower()[c], n.cell.upper()[c]});
    }
    nlohmann::json entry = {{"id", id},
                            {"depth", n.cell.depth()},
                            {"index", n.depth_position},
                            {"bounds", bounds},
                            {"value", n.evaluated ? nlohmann::json(n.value) : nlohmann::json(nullptr)},
                            {"count", n.count}};
    if (id != 0) entry["parent"] = n.parent;
    nodes.push_back(std::move(entry));
  }
  return {{"arity", arity_}, {"nodes", std::move(nodes)}};
}

double diameter_bound(const Tree& tree, int h) {
  if (h < 0) throw std::invalid_argument("diameter_bound: depth must be >= 0");
  const BoxDomain box = tree.outer_domain().parameter_box();
  double alpha = 0.0;
  for (std::size_t c = 0; c < box.dimension(); ++c) alpha = std::max(alpha, box.upper[c] - box.lower[c]);
  const double D = double(box.dimension());
  return alpha * std::pow(double(tree.arity()), -double(h) / D);
}

}  // namespace exotic
