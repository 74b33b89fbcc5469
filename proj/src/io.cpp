#include "wavemaps/io.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace wavemaps {

using nlohmann::json;

void save_grid_field(const GridField& phi, const std::string& path,
                     const std::string& target_name, const std::string& scheme) {
  json hdr = {
      {"format", "wavemaps-gridfield-v1"},
      {"u0", phi.grid.u0},
      {"v0", phi.grid.v0},
      {"h", phi.grid.h},
      {"nu", phi.grid.nu},
      {"nv", phi.grid.nv},
      {"dim", phi.dim},
      {"target", target_name},
      {"scheme", scheme},
  };
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_grid_field: cannot open " + path);
  out << hdr.dump() << '\n';
  out.write(reinterpret_cast<const char*>(phi.data.data()),
            (std::streamsize)(phi.data.size() * sizeof(double)));
  if (!out) throw std::runtime_error("save_grid_field: write failed for " + path);
}

GridField load_grid_field(const std::string& path, std::string* target_name,
                          std::string* scheme) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_grid_field: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_grid_field: missing header");
  json hdr = json::parse(line, nullptr, false);
  if (hdr.is_discarded() || hdr.value("format", "") != "wavemaps-gridfield-v1")
    throw std::runtime_error("load_grid_field: bad header in " + path);
  NullGrid g;
  g.u0 = hdr.at("u0").get<double>();
  g.v0 = hdr.at("v0").get<double>();
  g.h = hdr.at("h").get<double>();
  g.nu = hdr.at("nu").get<int>();
  g.nv = hdr.at("nv").get<int>();
  GridField phi(g, hdr.at("dim").get<int>());
  in.read(reinterpret_cast<char*>(phi.data.data()),
          (std::streamsize)(phi.data.size() * sizeof(double)));
  if ((size_t)in.gcount() != phi.data.size() * sizeof(double))
    throw std::runtime_error("load_grid_field: truncated payload in " + path);
  if (target_name) *target_name = hdr.value("target", "");
  if (scheme) *scheme = hdr.value("scheme", "");
  return phi;
}

void export_time_slices_csv(const GridField& phi, const std::vector<int>& diagonals,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_time_slices_csv: cannot open " + path);
  out << "x,t";
  for (int c = 0; c < phi.dim; ++c) out << ",phi" << c;
  out << '\n';
  out.precision(17);
  for (int d : diagonals) {
    double t = d * phi.grid.h / 2;
    for (int i = phi.diag_lo(d); i <= phi.diag_hi(d); ++i) {
      int j = i - d;
      out << phi.grid.x(i, j) << ',' << t;
      const double* p = phi.at(i, j);
      for (int c = 0; c < phi.dim; ++c) out << ',' << p[c];
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("export_time_slices_csv: write failed for " + path);
}

std::string estimate_report_json(const EstimateReport& rep) {
  json j = {
      {"estimate_id", rep.estimate_id},
      {"ensemble", rep.ensemble},
      {"cutoffs", rep.cutoffs},
      {"samples_per_cutoff", rep.samples_per_cutoff},
      {"max_ratio", rep.max_ratio},
      {"median_ratio", rep.median_ratio},
      {"p90_ratio", rep.p90_ratio},
      {"cutoff_scaling_slope", rep.cutoff_scaling_slope},
      {"slope_residual", rep.slope_residual},
      {"verified", rep.verified},
  };
  return j.dump(2);
}

void save_estimate_report(const EstimateReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_estimate_report: cannot open " + path);
  out << estimate_report_json(rep) << '\n';
  if (!out) throw std::runtime_error("save_estimate_report: write failed for " + path);
}

void save_profile_csv(const std::vector<double>& coords, const std::vector<double>& values,
                      int dim, const std::string& path, const std::string& axis_name) {
  if (values.size() != coords.size() * (size_t)dim)
    throw std::invalid_argument("save_profile_csv: size mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_profile_csv: cannot open " + path);
  json hdr = {{"format", "wavemaps-profile-v1"}, {"axis", axis_name}, {"dim", dim},
              {"count", coords.size()}};
  out << "# " << hdr.dump() << '\n';
  out.precision(17);
  for (size_t k = 0; k < coords.size(); ++k) {
    out << coords[k];
    for (int c = 0; c < dim; ++c) out << ',' << values[k * dim + c];
    out << '\n';
  }
  if (!out) throw std::runtime_error("save_profile_csv: write failed for " + path);
}

} // namespace wavemaps
