#ifndef COMBDIM_REPORT_HPP
#define COMBDIM_REPORT_HPP

// Reports: a JSON document (certificates, config, summaries) plus an
// optional CSV table (curves). Both renderings have a fixed field order, so
// identical inputs give byte-identical files.

#include <filesystem>
#include <string>
#include <vector>

#include "combdim/extraction.hpp"
#include "combdim/gaussian_elton.hpp"
#include "combdim/geometry.hpp"
#include "combdim/metric_entropy.hpp"
#include "combdim/separation_tree.hpp"
#include "combdim/shattering.hpp"
#include "json.hpp"

namespace combdim {

using Json = nlohmann::ordered_json;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  bool empty() const { return header.empty(); }
};

struct Report {
  std::string kind;
  Json document = Json::object();
  CsvTable table;
};

enum class ReportFormat { Json, Csv };

ReportFormat parse_report_format(const std::string& name);
// ".csv" selects CSV, anything else JSON.
ReportFormat report_format_for(const std::filesystem::path& path);

// Throws PreconditionError when CSV is requested for a report without a table.
std::string render_report(const Report& report, ReportFormat format);
// Throws Error on I/O failure.
void emit_report(const Report& report, ReportFormat format, const std::filesystem::path& path);
Json load_report(const std::filesystem::path& path);

// Field rendering shared by tables and documents.
std::string csv_field(double value);
std::string csv_field(std::size_t value);

Json json_of(const CoordinateSubset& subset);
Json json_of(const Center& center);
Json json_of(const ShatterWitness& witness);
Json json_of(const RealShatterResult& result);
Json json_of(const EntropyCount& count);
Json json_of(const SplitCertificate& certificate);
Json json_of(const SeparatingCoordinate& coordinate);
Json json_of(const SeparatingTree& tree);
Json json_of(const ExtractionOutcome& outcome);
Json json_of(const SupEstimate& estimate);
Json json_of(const CubeTest& test);
Json json_of(const ConvexVcResult& result);
Json json_of(const Ell1Constant& constant);
Json json_of(const EltonResult& result);

}  // namespace combdim

#endif  // COMBDIM_REPORT_HPP
