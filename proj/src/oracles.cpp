#include "exotic/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "exotic/errors.hpp"

namespace exotic {

namespace {

// Integer compositions of `total` into `parts` nonnegative parts, lexicographic.
void compositions(std::size_t parts, int total, std::vector<std::vector<int>>& out) {
  std::vector<int> c(parts, 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == parts) {
      c[i] = left;
      out.push_back(c);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      c[i] = v;
      self(self, i + 1, left - v);
    }
  };
  if (parts == 0) return;
  rec(rec, 0, total);
}

double binomial(double n, double k) {
  return std::exp(std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1));
}

double grid_size(const ProductDomain& domain, int p) {
  double total = 1.0;
  for (const auto& factor : domain.factors()) {
    if (const auto* box = std::get_if<BoxDomain>(&factor)) {
      total *= std::pow(double(p), double(box->dimension()));
    } else {
      const auto m = double(std::get<SimplexDomain>(factor).dimension);
      total *= std::round(binomial(p - 1 + m - 1, m - 1));
    }
  }
  return total;
}

// Solves A z = b in place (Gaussian elimination, partial pivoting).
bool solve_linear(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double>& z) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (std::abs(a[piv][col]) < 1e-12) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double m = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= m * a[col][c];
      b[r] -= m * b[col];
    }
  }
  z.assign(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= a[r][c] * z[c];
    z[r] = s / a[r][r];
  }
  return true;
}

// Row j of `lines`: cost of own action j against each pure profile.
std::vector<Vector> profile_lines(const GameSpec& game, const std::vector<std::vector<std::size_t>>& profiles) {
  const std::size_t m = game.action_counts[game.protected_player];
  std::vector<Vector> lines(profiles.size(), Vector(m));
  std::vector<std::size_t> joint(game.num_players());
  for (std::size_t a = 0; a < profiles.size(); ++a) {
    std::size_t k = 0;
    for (std::size_t p = 0; p < game.num_players(); ++p) {
      if (p != game.protected_player) joint[p] = profiles[a][k++];
    }
    for (std::size_t j = 0; j < m; ++j) {
      joint[game.protected_player] = j;
      lines[a][j] = game.entry(joint);
    }
  }
  return lines;
}

double max_line(const std::vector<Vector>& lines, std::span<const double> x) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& l : lines) {
    double v = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) v += l[j] * x[j];
    best = std::max(best, v);
  }
  return best;
}

SecurityValue two_action_security(const std::vector<Vector>& lines) {
  // p = weight on action 0; each line is l1 + (l0 - l1) p.
  std::vector<double> candidates{0.0, 1.0};
  for (std::size_t a = 0; a < lines.size(); ++a) {
    for (std::size_t b = a + 1; b < lines.size(); ++b) {
      const double sa = lines[a][0] - lines[a][1], sb = lines[b][0] - lines[b][1];
      if (sa == sb) continue;
      const double p = (lines[b][1] - lines[a][1]) / (sa - sb);
      if (p > 0.0 && p < 1.0) candidates.push_back(p);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  SecurityValue best{std::numeric_limits<double>::infinity(), {}};
  for (double p : candidates) {
    const Vector x{p, 1.0 - p};
    const double v = max_line(lines, x);
    if (v < best.value) best = {v, x};
  }
  return best;
}

SecurityValue vertex_enumeration_security(const std::vector<Vector>& lines, std::size_t m) {
  // Variables z = (x_0..x_{m-1}, t). Constraints: t >= L_a . x (a < P),
  // x_j >= 0, sum x = 1. A vertex has m of the inequalities tight.
  const std::size_t P = lines.size();
  const std::size_t total = P + m;
  SecurityValue best{std::numeric_limits<double>::infinity(), {}};
  std::vector<std::size_t> pick(m);
  for (std::size_t i = 0; i < m; ++i) pick[i] = i;
  std::vector<double> z;
  const double tol = 1e-10;
  while (true) {
    std::vector<std::vector<double>> a(m + 1, std::vector<double>(m + 1, 0.0));
    std::vector<double> b(m + 1, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      const std::size_t c = pick[r];
      if (c < P) {
        for (std::size_t j = 0; j < m; ++j) a[r][j] = lines[c][j];
        a[r][m] = -1.0;
      } else {
        a[r][c - P] = 1.0;
      }
    }
    for (std::size_t j = 0; j < m; ++j) a[m][j] = 1.0;
    b[m] = 1.0;
    if (solve_linear(a, b, z)) {
      Vector x(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(m));
      const bool nonneg = std::all_of(x.begin(), x.end(), [&](double v) { return v >= -tol; });
      if (nonneg) {
        for (double& v : x) v = std::max(v, 0.0);
        double s = 0.0;
        for (double v : x) s += v;
        for (double& v : x) v /= s;
        const double v = max_line(lines, x);
        if (v < best.value - 1e-13) best = {v, x};
      }
    }
    // Next m-subset of [0, total).
    std::size_t i = m;
    while (i > 0 && pick[i - 1] == total - m + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

}  // namespace

void GridSpec::validate() const {
  if (x_points() < 2 || y_points() < 2) throw std::invalid_argument("GridSpec: points_per_dimension must be >= 2");
}

std::vector<Vector> grid_points(const ProductDomain& domain, int p, double max_points) {
  if (p < 2) throw std::invalid_argument("grid_points: points_per_dimension must be >= 2");
  const double size = grid_size(domain, p);
  if (size > max_points) {
    throw GridTooLargeError("grid of " + std::to_string(size) + " points exceeds the cap of " +
                            std::to_string(max_points));
  }
  // Per-factor point lists, then their Cartesian product.
  std::vector<std::vector<Vector>> per_factor;
  for (const auto& factor : domain.factors()) {
    std::vector<Vector> pts;
    if (const auto* box = std::get_if<BoxDomain>(&factor)) {
      const std::size_t n = box->dimension();
      std::vector<int> idx(n, 0);
      while (true) {
        Vector v(n);
        for (std::size_t i = 0; i < n; ++i) {
          v[i] = box->lower[i] + (box->upper[i] - box->lower[i]) * idx[i] / double(p - 1);
        }
        pts.push_back(std::move(v));
        std::size_t i = n;
        while (i > 0 && idx[i - 1] == p - 1) idx[--i] = 0;
        if (i == 0) break;
        ++idx[i - 1];
      }
    } else {
      std::vector<std::vector<int>> comps;
      compositions(std::get<SimplexDomain>(factor).dimension, p - 1, comps);
      for (const auto& c : comps) {
        Vector v(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) v[i] = c[i] / double(p - 1);
        pts.push_back(std::move(v));
      }
    }
    per_factor.push_back(std::move(pts));
  }
  std::vector<Vector> out{Vector{}};
  for (const auto& pts : per_factor) {
    std::vector<Vector> next;
    next.reserve(out.size() * pts.size());
    for (const auto& prefix : out) {
      for (const auto& q : pts) {
        Vector v = prefix;
        v.insert(v.end(), q.begin(), q.end());
        next.push_back(std::move(v));
      }
    }
    out = std::move(next);
  }
  return out;
}

GridMinMaxResult grid_minmax(const MinMaxProblem& problem, const GridSpec& grid) {
  grid.validate();
  const double nx = grid_size(problem.x_domain, grid.x_points());
  const double ny = grid_size(problem.y_domain, grid.y_points());
  if (nx * ny > GridSpec::kMaxPoints) {
    throw GridTooLargeError("grid_minmax: " + std::to_string(nx) + " x " + std::to_string(ny) +
                            " points exceeds the cap of 1e7");
  }
  const auto xs = grid_points(problem.x_domain, grid.x_points());
  const auto ys = grid_points(problem.y_domain, grid.y_points());

  GridMinMaxResult r;
  r.value = std::numeric_limits<double>::infinity();
  r.x_points = xs.size();
  r.y_points = ys.size();
  for (const auto& x : xs) {
    double inner = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double v = problem.f(x, ys[j]);
      if (v > inner) {
        inner = v;
        arg = j;
        // Cannot beat the incumbent any more.
        if (inner >= r.value) break;
      }
    }
    if (inner < r.value) {
      r.value = inner;
      r.x = x;
      r.y = ys[arg];
    }
  }
  r.value += 0.0;  // no -0 in reports
  return r;
}

std::vector<std::vector<std::size_t>> adversary_profiles(const GameSpec& game) {
  std::vector<std::size_t> counts;
  for (std::size_t p = 0; p < game.num_players(); ++p) {
    if (p != game.protected_player) counts.push_back(game.action_counts[p]);
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> a(counts.size(), 0);
  while (true) {
    out.push_back(a);
    std::size_t i = a.size();
    while (i > 0 && a[i - 1] + 1 == counts[i - 1]) a[--i] = 0;
    if (i == 0) break;
    ++a[i - 1];
  }
  return out;
}

double cost_against_profile(const GameSpec& game, std::span<const double> strategy,
                            std::span<const std::size_t> profile) {
  std::vector<std::size_t> joint(game.num_players());
  std::size_t k = 0;
  for (std::size_t p = 0; p < game.num_players(); ++p) {
    if (p != game.protected_player) joint[p] = profile[k++];
  }
  double v = 0.0;
  for (std::size_t j = 0; j < strategy.size(); ++j) {
    joint[game.protected_player] = j;
    v += strategy[j] * game.entry(joint);
  }
  return v;
}

SecurityValue security_value_exact(const GameSpec& game) {
  game.validate();
  const std::size_t m = game.action_counts[game.protected_player];
  const auto lines = profile_lines(game, adversary_profiles(game));
  if (m == 1) return {max_line(lines, Vector{1.0}), Vector{1.0}};
  if (m == 2) return two_action_security(lines);
  if (m <= 4) return vertex_enumeration_security(lines, m);
  throw UnsupportedProblemError("security_value_exact: at most 4 actions for the protected player");
}

WorstCaseResponse worst_case_response(const GameSpec& game, std::span<const double> strategy) {
  game.validate();
  if (strategy.size() != game.action_counts[game.protected_player]) {
    throw std::invalid_argument("worst_case_response: strategy has the wrong size");
  }
  WorstCaseResponse best;
  for (const auto& profile : adversary_profiles(game)) {
    const double v = cost_against_profile(game, strategy, profile);
    // Rounding-level differences count as ties.
    if (best.profile.empty() || v > best.value + 1e-12 * std::max(1.0, std::abs(best.value))) best = {profile, v};
  }
  return best;
}

}  // namespace exotic
