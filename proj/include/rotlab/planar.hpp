#pragma once

// Convex polygons in the plane.

#include <vector>

#include <Eigen/Dense>

namespace rotlab {

using Point2 = Eigen::Vector2d;

/// Monotone-chain hull, counterclockwise, collinear and duplicate points
/// (within `dedupe`) removed. Degenerate inputs give 1 or 2 vertices.
std::vector<Point2> convex_hull(std::vector<Point2> points, double dedupe = 1e-9);

double polygon_area(const std::vector<Point2>& poly);

/// Signed distance to the boundary of a convex counterclockwise polygon:
/// positive inside, negative outside. Polygons with fewer than 3 vertices
/// have no interior and give minus the distance to the segment or point.
double signed_distance(const std::vector<Point2>& poly, const Point2& p);

/// Euclidean distance from p to the filled convex polygon (0 inside).
double distance_to_polygon(const std::vector<Point2>& poly, const Point2& p);

/// Hausdorff distance between two filled convex polygons.
double hausdorff_distance(const std::vector<Point2>& a, const std::vector<Point2>& b);

}  // namespace rotlab
