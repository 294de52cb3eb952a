#pragma once

#include <vector>

#include "orthoscherk/orthodisk.hpp"
#include "orthoscherk/scmap.hpp"

namespace orthoscherk {

// A curve family on one orthodisk. Composite families are the symmetric sums
// gamma_i = c_i + c_{2g+1-i}; `cycle` then holds c_i and `partner` c_{2g+1-i}.
struct CurveFamily {
  Cycle cycle;
  Domain domain = Domain::Gdh;
  bool composite = false;
  Cycle partner;
  std::string name;
};

// Extremal length of the arcs in the upper half-plane joining [a, b] to
// [c, d], where a < b < c < d in the cyclic order of the extended real line.
// At most one of the points may be infinite.
double ext_four_point(double a, double b, double c, double d);

// Complete elliptic integral K(k) by the arithmetic-geometric mean.
double elliptic_k(double k);

double ext_connecting(const ConformalPolygon& poly, const Cycle& c);
double ext_encircling(const ConformalPolygon& poly, const Cycle& c);
double ext_composite(const ConformalPolygon& poly, const CurveFamily& f);
double ext_family(const ConformalPolygon& poly, const CurveFamily& f);

// gamma_1 .. gamma_{g-1} followed by delta.
std::vector<CurveFamily> height_families(int genus, Domain domain);

}  // namespace orthoscherk
