#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "triax/audit.hpp"
#include "triax/spectrum.hpp"

namespace triax {

// Report JSON, schema_version 1. Everything except the "timing" object
// is a pure function of (tensor, config), so two runs with the same
// inputs serialize byte-identically apart from "timing".
nlohmann::json audit_report_to_json(const AuditReport& report,
                                    const nlohmann::json& input_provenance = {});

nlohmann::json spectrum_report_to_json(const SpectrumReport& report,
                                       const nlohmann::json& input_provenance = {});

void write_json(const nlohmann::json& doc, const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

// CSV companions (header row, comma separators, '.' decimals, LF line
// endings, shortest round-trip doubles).
//
// Audit reports flatten to d_series.csv: an iteration column plus one
// column per test. Spectrum reports flatten to spectrum_mode{1,2,3}.csv
// with rank,value rows. Returns the files written.
std::vector<std::filesystem::path> write_report_csvs(const nlohmann::json& report,
                                                     const std::filesystem::path& csv_dir);

} // namespace triax
