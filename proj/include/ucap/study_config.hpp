#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ucap/adequacy.hpp"

namespace ucap {

// Parses a study JSON document. Relative paths resolve against `base_dir`.
// Throws ConfigInvalid, TraceFormat or FleetFormat.
StudyConfig parse_study_config(const std::string& json_text, const std::filesystem::path& base_dir);
StudyConfig load_study_config(const std::filesystem::path& path);

std::string study_result_json(const StudyResult& result);

// Policy | LOLE (h/y) | EENS (MWh/y) table.
void write_study_table(std::ostream& out, const StudyResult& result);

void write_annual_csv(std::ostream& out, const StudyResult& result);

}  // namespace ucap
