#pragma once

#include "levy/config.hpp"
#include "levy/fracheat.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace levy {

// Runs config.command and writes its CSV files into `out_dir`. Each file
// starts with '#' comment lines (command, seeding scheme, the full config
// between "# config begin" and "# config end"), then a header row and data.
// Returns the written paths.
std::vector<std::filesystem::path> run_command(const RunConfig& config, const std::filesystem::path& out_dir,
                                               std::ostream& log);

// Heat-solver settings of a run config (measure built only when gamma != 0).
HeatConfig heat_config(const RunConfig& config);

// Config text recovered from the comment block of a CSV produced by run_command.
std::string config_from_csv(const std::string& csv_text);

// The CSV with all '#' lines removed.
std::string csv_body(const std::string& csv_text);

}  // namespace levy
