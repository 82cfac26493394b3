#pragma once

#include <map>
#include <string>

namespace csf {

struct Witness {
  double x = 0.0;
  double t = 0.0;
};

// Structured pass/fail record for one inequality check. The margin is the
// worst signed slack over the scanned set: positive means the inequality held
// with room, and passed == (margin >= -tolerance) where tolerance is the
// entry named "tol" below. status is "pass", "fail" or "inconclusive" (the
// last when the trajectory offers no qualifying snapshot).
struct EstimateReport {
  std::string name;
  bool passed = false;
  double margin = 0.0;
  Witness witness;
  std::map<std::string, double> tolerances;
  std::string status = "pass";
  std::string note;

  static EstimateReport make(const std::string& name, double margin, double tol,
                             Witness w = {}, const std::string& note = "");
  static EstimateReport inconclusive(const std::string& name, const std::string& why);
};

}  // namespace csf
