#pragma once

#include "helly/linalg.hpp"
#include "helly/polytope.hpp"

#include <vector>

namespace helly {

// {x : (x - center)' M (x - center) <= 1}, M symmetric positive definite.
class Ellipsoid {
 public:
  Ellipsoid(Vec center, Mat shape);
  static Ellipsoid ball(int d, double radius = 1.0);

  int dim() const { return static_cast<int>(center_.size()); }
  const Vec& center() const { return center_; }
  const Mat& shape() const { return shape_; }
  // L with E = center + L B^d, i.e. L L' = M^{-1}.
  Mat generator() const;
  double gauge(const Vec& x) const;  // sqrt((x-c)' M (x-c))
  bool contains(const Vec& x, double slack = 1e-8) const;
  double volume() const;
  // Image under x -> T x + t.
  Ellipsoid image(const Mat& T, const Vec& t) const;

 private:
  Vec center_;
  Mat shape_;
};

struct ContactCertificate {
  std::vector<Vec> points;
  std::vector<double> weights;

  bool well_formed(int d) const;
};

struct EllipsoidFit {
  Ellipsoid ellipsoid;
  ContactCertificate certificate;
  int iterations = 0;
};

double unit_ball_volume(int d);

// Minimum-volume enclosing ellipsoid (Khachiyan with away steps). Certificate
// points are the contacts in normalized coordinates, where E is the unit ball.
EllipsoidFit lowner_ellipsoid(const std::vector<Vec>& points);

// Maximum-volume inscribed ellipsoid. Certificate points are the unit outer
// normals of the touching facets in normalized coordinates.
EllipsoidFit john_ellipsoid(const HPolytope& P);

struct DecompositionResidual {
  double identity = 0.0;
  double centroid = 0.0;
};
DecompositionResidual verify_decomposition(const ContactCertificate& cert);

// Shrinks E by dim() about its center and checks 100*d boundary samples for
// membership in conv(K). `tol` pulls the samples inward by that fraction.
bool check_lowner_inclusion(const VPolytope& K, const Ellipsoid& E, double tol = 1e-7);

}  // namespace helly
