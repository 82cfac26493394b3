#include "csf/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace csf::io {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_field_csv(const ScalarField& f, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "x,u\n";
  for (int i = 0; i < f.size(); ++i)
    out << fmt17(f.grid.node(i)) << ',' << fmt17(f.values[i]) << '\n';
}

ScalarField read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> xs, us;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("malformed CSV row in " + path.string());
    xs.push_back(std::stod(line.substr(0, comma)));
    us.push_back(std::stod(line.substr(comma + 1)));
  }
  if (xs.size() < 3) throw std::runtime_error("field CSV needs >= 3 rows: " + path.string());
  const int n = static_cast<int>(xs.size());
  const Grid1D g(xs.front(), xs.back(), n);
  for (int i = 0; i < n; ++i)
    if (std::abs(xs[i] - g.node(i)) > 1e-9 * (g.right - g.left))
      throw std::runtime_error("field CSV is not on a uniform grid: " + path.string());
  return ScalarField(g, std::move(us));
}

void write_polyline_csv(const Polyline& p, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "x,y\n";
  for (const Vec2& v : p.pts) out << fmt17(v.x) << ',' << fmt17(v.y) << '\n';
}

void write_trajectory(const Trajectory& traj, const std::filesystem::path& dir,
                      const std::string& basename) {
  std::filesystem::create_directories(dir);
  json index;
  index["times"] = json::array();
  index["files"] = json::array();
  for (int k = 0; k < traj.size(); ++k) {
    char suffix[16];
    std::snprintf(suffix, sizeof(suffix), "_%03d.csv", k);
    const std::string fname = basename + suffix;
    write_field_csv(traj.states[k], dir / fname);
    index["times"].push_back(traj.times[k]);
    index["files"].push_back(fname);
  }
  json meta;
  meta["solver"] = traj.meta.solver;
  meta["bc"] = traj.meta.bc;
  meta["theta"] = traj.meta.theta;
  meta["dt_max"] = traj.meta.dt_max;
  meta["dx"] = traj.meta.dx;
  if (traj.meta.y_cap > 0.0) {
    meta["y_cap"] = traj.meta.y_cap;
    meta["eps_margin"] = traj.meta.eps_margin;
    meta["left_pad"] = traj.meta.left_pad;
    meta["right_pad"] = traj.meta.right_pad;
    meta["tail_bound"] = traj.meta.tail_bound;
  }
  index["meta"] = meta;
  std::ofstream out(dir / (basename + "_index.json"));
  out << index.dump(2) << '\n';
}

json report_to_json(const EstimateReport& r) {
  json j;
  j["name"] = r.name;
  j["passed"] = r.passed;
  j["margin"] = r.margin;
  j["witness"] = {{"x", r.witness.x}, {"t", r.witness.t}};
  j["tolerances"] = r.tolerances;
  j["status"] = r.status;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

measures::RadonMeasureSpec read_measure_spec(const json& j,
                                             const std::filesystem::path& base_dir) {
  measures::RadonMeasureSpec nu;
  if (j.contains("density") && !j["density"].is_null()) {
    const auto& d = j["density"];
    if (!d.contains("csv")) throw std::runtime_error("measure density needs a csv path");
    nu.density = read_field_csv(base_dir / d["csv"].get<std::string>());
  }
  for (const auto& s : j.value("singular", json::array())) {
    measures::SingularCdf cdf;
    const std::string kind = s.value("kind", "cantor");
    if (kind == "cantor") {
      cdf.kind = measures::SingularCdf::Kind::Cantor;
      cdf.depth = s.value("depth", 30);
      const auto sup = s.at("support");
      cdf.support = {sup.at(0).get<double>(), sup.at(1).get<double>()};
      cdf.mass = s.at("mass").get<double>();
      cdf.sign = s.value("sign", 1);
    } else if (kind == "staircase") {
      cdf.kind = measures::SingularCdf::Kind::Staircase;
      for (const auto& bp : s.at("breakpoints"))
        cdf.breakpoints.emplace_back(bp.at(0).get<double>(), bp.at(1).get<double>());
      cdf.mass = cdf.breakpoints.empty() ? 0.0 : cdf.breakpoints.back().second;
      cdf.sign = s.value("sign", 1);
    } else {
      throw std::runtime_error("unknown singular kind: " + kind);
    }
    nu.singular.push_back(std::move(cdf));
  }
  for (const auto& a : j.value("atoms", json::array()))
    nu.atoms.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
  return nu;
}

}  // namespace csf::io
