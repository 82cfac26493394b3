#include "csf/report.hpp"

namespace csf {

EstimateReport EstimateReport::make(const std::string& name, double margin, double tol,
                                    Witness w, const std::string& note) {
  EstimateReport r;
  r.name = name;
  r.margin = margin;
  r.witness = w;
  r.tolerances["tol"] = tol;
  r.passed = margin >= -tol;
  r.status = r.passed ? "pass" : "fail";
  r.note = note;
  return r;
}

EstimateReport EstimateReport::inconclusive(const std::string& name, const std::string& why) {
  EstimateReport r;
  r.name = name;
  r.passed = false;
  r.status = "inconclusive";
  r.note = why;
  return r;
}

}  // namespace csf
