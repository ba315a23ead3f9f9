#include "pqfreq/bounds.hpp"

namespace pqfreq {

BoundRow lower_bound_row(std::string label, double target, double bound, double tolerance) {
  BoundRow row;
  row.label = std::move(label);
  row.kind = "lower";
  row.target = target;
  row.bound = bound;
  row.tolerance = tolerance;
  row.margin = target - bound;
  row.pass = row.margin >= -tolerance;
  return row;
}

BoundRow upper_bound_row(std::string label, double target, double bound, double tolerance) {
  BoundRow row;
  row.label = std::move(label);
  row.kind = "upper";
  row.target = target;
  row.bound = bound;
  row.tolerance = tolerance;
  row.margin = bound - target;
  row.pass = row.margin >= -tolerance;
  return row;
}

}  // namespace pqfreq
