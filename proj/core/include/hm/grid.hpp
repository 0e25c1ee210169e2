#pragma once

#include <vector>

#include "hm/hermitian.hpp"

namespace hm {

enum class RegionKind { Box, Sphere };

/// Box: center ± half_widths per axis. Sphere: points of |x| = radius near
/// the direction of `center`, parametrized by a box of half_widths on the
/// n-1 tangent axes at that direction and normalized back onto the sphere.
/// A single half-width is broadcast to every axis.
struct Region {
  RegionKind kind = RegionKind::Box;
  std::vector<double> center;
  std::vector<double> half_widths;
  double radius = 1.0;
};

/// Grid points in serpentine order: consecutive points differ in one
/// parameter axis by one step. Axes with zero half-width contribute a
/// single value. Throws BadRegion.
std::vector<std::vector<double>> make_grid(const Region& region, int resolution);

/// make_grid mapped to points of the system's ambient domain.
std::vector<PointQ> make_point_grid(const ImplicitSystem& sys, const Region& region, int resolution);

}  // namespace hm
