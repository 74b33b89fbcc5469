#pragma once
#include <string>
#include <vector>

#include "wavemaps/estimates.hpp"
#include "wavemaps/grid.hpp"

namespace wavemaps {

// Binary GridField container: a single-line JSON header (grid geometry,
// target/scheme metadata, dim) terminated by '\n', followed by the raw
// row-major float64 payload. Throws std::runtime_error on I/O failures and
// malformed headers.
void save_grid_field(const GridField& phi, const std::string& path,
                     const std::string& target_name = "", const std::string& scheme = "");
GridField load_grid_field(const std::string& path, std::string* target_name = nullptr,
                          std::string* scheme = nullptr);

// CSV export of constant-t slices; columns x, t, phi_0 .. phi_{dim-1}
void export_time_slices_csv(const GridField& phi, const std::vector<int>& diagonals,
                            const std::string& path);

// EstimateReport as JSON
std::string estimate_report_json(const EstimateReport& rep);
void save_estimate_report(const EstimateReport& rep, const std::string& path);

// 1D profile file (JSON header + CSV rows: coordinate, components)
void save_profile_csv(const std::vector<double>& coords, const std::vector<double>& values,
                      int dim, const std::string& path, const std::string& axis_name);

} // namespace wavemaps
