#include "hm/grid.hpp"

#include <cmath>

namespace hm {

namespace {

std::vector<double> broadcast(const std::vector<double>& hw, std::size_t n) {
  if (hw.size() == 1) return std::vector<double>(n, hw[0]);
  if (hw.size() != n)
    throw Error(ErrorKind::BadRegion, "expected " + std::to_string(n) + " half-widths, got " + std::to_string(hw.size()));
  return hw;
}

// Serpentine traversal of the product of per-axis value lists.
std::vector<std::vector<double>> serpentine(const std::vector<std::vector<double>>& axes) {
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.size();
  std::vector<std::vector<double>> out;
  out.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::vector<double> x(axes.size());
    std::size_t stride = total;
    for (std::size_t d = 0; d < axes.size(); ++d) {
      const std::size_t n = axes[d].size();
      stride /= n;
      std::size_t digit = (idx / stride) % n;
      const std::size_t sweeps = idx / (stride * n);
      if (sweeps % 2 == 1) digit = n - 1 - digit;
      x[d] = axes[d][digit];
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<double> axis_values(double center, double hw, int resolution) {
  if (hw == 0.0) return {center};
  std::vector<double> v;
  for (int k = 0; k < resolution; ++k) v.push_back(center + hw * (-1.0 + 2.0 * k / (resolution - 1)));
  return v;
}

// Orthonormal basis of the complement of the unit vector u.
std::vector<std::vector<double>> tangent_basis(const std::vector<double>& u) {
  const std::size_t n = u.size();
  std::vector<std::vector<double>> basis{u};
  for (std::size_t e = 0; e < n && basis.size() < n; ++e) {
    std::vector<double> v(n, 0.0);
    v[e] = 1.0;
    for (const auto& b : basis) {
      double dot = 0.0;
      for (std::size_t k = 0; k < n; ++k) dot += v[k] * b[k];
      for (std::size_t k = 0; k < n; ++k) v[k] -= dot * b[k];
    }
    double norm = 0.0;
    for (double c : v) norm += c * c;
    norm = std::sqrt(norm);
    if (norm < 1e-6) continue;
    for (double& c : v) c /= norm;
    basis.push_back(std::move(v));
  }
  basis.erase(basis.begin());
  return basis;
}

}  // namespace

std::vector<std::vector<double>> make_grid(const Region& region, int resolution) {
  if (resolution < 2) throw Error(ErrorKind::BadRegion, "grid resolution must be at least 2");
  const std::size_t n = region.center.size();
  if (n == 0) throw Error(ErrorKind::BadRegion, "region has no center");
  for (double c : region.center)
    if (!std::isfinite(c)) throw Error(ErrorKind::BadRegion, "region center is not finite");
  for (double h : region.half_widths)
    if (!std::isfinite(h) || h < 0.0) throw Error(ErrorKind::BadRegion, "half-widths must be finite and >= 0");

  if (region.kind == RegionKind::Box) {
    const auto hw = broadcast(region.half_widths, n);
    std::vector<std::vector<double>> axes;
    for (std::size_t d = 0; d < n; ++d) axes.push_back(axis_values(region.center[d], hw[d], resolution));
    return serpentine(axes);
  }

  if (!(region.radius > 0.0) || !std::isfinite(region.radius))
    throw Error(ErrorKind::BadRegion, "sphere radius must be positive");
  if (n < 2) throw Error(ErrorKind::BadRegion, "sphere needs at least two dimensions");
  double norm = 0.0;
  for (double c : region.center) norm += c * c;
  norm = std::sqrt(norm);
  if (norm == 0.0) throw Error(ErrorKind::BadRegion, "sphere center direction is zero");
  std::vector<double> u = region.center;
  for (double& c : u) c /= norm;
  const auto basis = tangent_basis(u);
  const auto hw = broadcast(region.half_widths, n - 1);
  std::vector<std::vector<double>> axes;
  for (std::size_t d = 0; d < n - 1; ++d) axes.push_back(axis_values(0.0, hw[d], resolution));

  std::vector<std::vector<double>> out;
  for (const auto& t : serpentine(axes)) {
    std::vector<double> y = u;
    for (std::size_t d = 0; d < t.size(); ++d)
      for (std::size_t k = 0; k < n; ++k) y[k] += t[d] * basis[d][k];
    double r = 0.0;
    for (double c : y) r += c * c;
    r = std::sqrt(r);
    for (double& c : y) c *= region.radius / r;
    out.push_back(std::move(y));
  }
  return out;
}

std::vector<PointQ> make_point_grid(const ImplicitSystem& sys, const Region& region, int resolution) {
  if (region.center.size() != static_cast<std::size_t>(sys.ambient_dim()))
    throw Error(ErrorKind::BadRegion, "region has dimension " + std::to_string(region.center.size()) +
                                          ", the system's domain has " + std::to_string(sys.ambient_dim()));
  std::vector<PointQ> out;
  for (const auto& x : make_grid(region, resolution)) out.push_back(point_from_ambient(sys, x));
  return out;
}

}  // namespace hm
