#include "exotic/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace exotic {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t factor_dimension(const DomainFactor& f) {
  return std::visit(overloaded{[](const BoxDomain& b) { return b.dimension(); },
                               [](const SimplexDomain& s) { return s.dimension; }},
                    f);
}

std::size_t factor_parameters(const DomainFactor& f) {
  return std::visit(overloaded{[](const BoxDomain& b) { return b.dimension(); },
                               [](const SimplexDomain& s) { return s.dimension - 1; }},
                    f);
}

void check_dimension(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (got " +
                                std::to_string(got) + ", expected " + std::to_string(want) +
                                ")");
  }
}

}  // namespace

BoxDomain::BoxDomain(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.empty()) throw std::invalid_argument("BoxDomain: dimension must be >= 1");
  check_dimension(upper.size(), lower.size(), "BoxDomain");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i]) || !std::isfinite(lower[i]) || !std::isfinite(upper[i])) {
      throw std::invalid_argument("BoxDomain: requires finite lower <= upper at coordinate " +
                                  std::to_string(i));
    }
  }
}

BoxDomain BoxDomain::cube(std::size_t n, double lo, double hi) {
  return BoxDomain(Vector(n, lo), Vector(n, hi));
}

SimplexDomain::SimplexDomain(std::size_t m) : dimension(m) {
  if (m == 0) throw std::invalid_argument("SimplexDomain: dimension must be >= 1");
}

ProductDomain::ProductDomain(BoxDomain box) : factors_{std::move(box)} { recompute(); }

ProductDomain::ProductDomain(SimplexDomain simplex) : factors_{simplex} { recompute(); }

ProductDomain::ProductDomain(std::vector<DomainFactor> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument("ProductDomain: needs at least one factor");
  recompute();
}

void ProductDomain::recompute() {
  dimension_ = 0;
  parameter_dimension_ = 0;
  for (const auto& f : factors_) {
    dimension_ += factor_dimension(f);
    parameter_dimension_ += factor_parameters(f);
  }
}

std::size_t ProductDomain::affine_dimension() const { return parameter_dimension_; }

bool ProductDomain::contains(std::span<const double> point, double tol) const {
  if (point.size() != dimension_) return false;
  std::size_t off = 0;
  for (const auto& f : factors_) {
    const bool ok = std::visit(
        overloaded{[&](const BoxDomain& b) {
                     for (std::size_t i = 0; i < b.dimension(); ++i) {
                       const double v = point[off + i];
                       if (!(v >= b.lower[i] - tol && v <= b.upper[i] + tol)) return false;
                     }
                     return true;
                   },
                   [&](const SimplexDomain& s) {
                     double sum = 0.0;
                     for (std::size_t i = 0; i < s.dimension; ++i) {
                       const double v = point[off + i];
                       if (!(v >= -tol)) return false;
                       sum += v;
                     }
                     return std::abs(sum - 1.0) <= std::max(tol, 1e-9);
                   }},
        f);
    if (!ok) return false;
    off += factor_dimension(f);
  }
  return true;
}

Vector ProductDomain::project(std::span<const double> point) const {
  check_dimension(point.size(), dimension_, "ProductDomain::project");
  Vector out;
  out.reserve(dimension_);
  std::size_t off = 0;
  for (const auto& f : factors_) {
    const std::size_t n = factor_dimension(f);
    const auto piece = point.subspan(off, n);
    Vector p = std::visit(overloaded{[&](const BoxDomain& b) { return project_box(b, piece); },
                                     [&](const SimplexDomain&) { return project_simplex(piece); }},
                          f);
    out.insert(out.end(), p.begin(), p.end());
    off += n;
  }
  return out;
}

Vector ProductDomain::center() const {
  Vector out;
  out.reserve(dimension_);
  for (const auto& f : factors_) {
    std::visit(overloaded{[&](const BoxDomain& b) {
                            for (std::size_t i = 0; i < b.dimension(); ++i)
                              out.push_back(0.5 * (b.lower[i] + b.upper[i]));
                          },
                          [&](const SimplexDomain& s) {
                            out.insert(out.end(), s.dimension, 1.0 / double(s.dimension));
                          }},
               f);
  }
  return out;
}

double ProductDomain::diameter() const {
  double sq = 0.0;
  for (const auto& f : factors_) {
    std::visit(overloaded{[&](const BoxDomain& b) {
                            for (std::size_t i = 0; i < b.dimension(); ++i) {
                              const double w = b.upper[i] - b.lower[i];
                              sq += w * w;
                            }
                          },
                          [&](const SimplexDomain& s) {
                            if (s.dimension >= 2) sq += 2.0;
                          }},
               f);
  }
  return std::sqrt(sq);
}

BoxDomain ProductDomain::parameter_box() const {
  Vector lo, hi;
  for (const auto& f : factors_) {
    std::visit(overloaded{[&](const BoxDomain& b) {
                            lo.insert(lo.end(), b.lower.begin(), b.lower.end());
                            hi.insert(hi.end(), b.upper.begin(), b.upper.end());
                          },
                          [&](const SimplexDomain& s) {
                            lo.insert(lo.end(), s.dimension - 1, 0.0);
                            hi.insert(hi.end(), s.dimension - 1, 1.0);
                          }},
               f);
  }
  if (lo.empty()) {
    throw std::invalid_argument("ProductDomain: parameter space is zero-dimensional");
  }
  return BoxDomain(std::move(lo), std::move(hi));
}

Vector ProductDomain::from_parameters(std::span<const double> params) const {
  check_dimension(params.size(), parameter_dimension_, "ProductDomain::from_parameters");
  Vector out;
  out.reserve(dimension_);
  std::size_t off = 0;
  for (const auto& f : factors_) {
    const std::size_t n = factor_parameters(f);
    const auto piece = params.subspan(off, n);
    std::visit(overloaded{[&](const BoxDomain&) { out.insert(out.end(), piece.begin(), piece.end()); },
                          [&](const SimplexDomain&) {
                            const Vector p = stick_breaking(piece);
                            out.insert(out.end(), p.begin(), p.end());
                          }},
               f);
    off += n;
  }
  return out;
}

Vector ProductDomain::to_parameters(std::span<const double> point) const {
  check_dimension(point.size(), dimension_, "ProductDomain::to_parameters");
  Vector out;
  out.reserve(parameter_dimension_);
  std::size_t off = 0;
  for (const auto& f : factors_) {
    const std::size_t n = factor_dimension(f);
    const auto piece = point.subspan(off, n);
    std::visit(overloaded{[&](const BoxDomain&) { out.insert(out.end(), piece.begin(), piece.end()); },
                          [&](const SimplexDomain&) {
                            const Vector u = inverse_stick_breaking(piece);
                            out.insert(out.end(), u.begin(), u.end());
                          }},
               f);
    off += n;
  }
  return out;
}

Vector ProductDomain::sample(std::mt19937_64& rng) const {
  Vector out;
  out.reserve(dimension_);
  for (const auto& f : factors_) {
    std::visit(overloaded{[&](const BoxDomain& b) {
                            for (std::size_t i = 0; i < b.dimension(); ++i) {
                              std::uniform_real_distribution<double> u(b.lower[i], b.upper[i]);
                              out.push_back(u(rng));
                            }
                          },
                          [&](const SimplexDomain& s) {
                            std::exponential_distribution<double> e(1.0);
                            Vector p(s.dimension);
                            double sum = 0.0;
                            for (auto& v : p) sum += (v = e(rng));
                            for (auto& v : p) v /= sum;
                            out.insert(out.end(), p.begin(), p.end());
                          }},
               f);
  }
  return out;
}

ProductDomain ProductDomain::power(std::size_t copies) const {
  if (copies == 0) throw std::invalid_argument("ProductDomain::power: copies must be >= 1");
  std::vector<DomainFactor> fs;
  fs.reserve(copies * factors_.size());
  for (std::size_t c = 0; c < copies; ++c) fs.insert(fs.end(), factors_.begin(), factors_.end());
  return ProductDomain(std::move(fs));
}

Vector project_box(const BoxDomain& box, std::span<const double> point) {
  check_dimension(point.size(), box.dimension(), "project_box");
  Vector out(point.begin(), point.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(out[i], box.lower[i], box.upper[i]);
  return out;
}

Vector project_simplex(std::span<const double> point) {
  if (point.empty()) throw std::invalid_argument("project_simplex: empty point");
  Vector sorted(point.begin(), point.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / double(k + 1);
    if (sorted[k] - candidate > 0.0) theta = candidate;
  }
  Vector out(point.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(point[i] - theta, 0.0);
  return out;
}

Vector stick_breaking(std::span<const double> params) {
  Vector p(params.size() + 1);
  double remaining = 1.0;
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double u = std::clamp(params[k], 0.0, 1.0);
    p[k] = remaining * u;
    remaining -= p[k];
  }
  p.back() = std::max(remaining, 0.0);
  return p;
}

Vector inverse_stick_breaking(std::span<const double> probabilities) {
  if (probabilities.empty()) throw std::invalid_argument("inverse_stick_breaking: empty input");
  Vector u(probabilities.size() - 1);
  double remaining = 1.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    u[k] = remaining > 1e-15 ? std::clamp(probabilities[k] / remaining, 0.0, 1.0) : 0.5;
    remaining -= probabilities[k];
  }
  return u;
}

double norm2(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

double distance(std::span<const double> a, std::span<const double> b) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(sq);
}

}  // namespace exotic
