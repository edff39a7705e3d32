#include "combdim/report.hpp"

#include <fstream>
#include <sstream>

#include "combdim/errors.hpp"
#include "json_io.hpp"

namespace combdim {

ReportFormat parse_report_format(const std::string& name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw PreconditionError("unknown report format '" + name + "' (expected json or csv)");
}

ReportFormat report_format_for(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? ReportFormat::Csv : ReportFormat::Json;
}

std::string csv_field(double value) { return format_decimal(value); }
std::string csv_field(std::size_t value) { return std::to_string(value); }

namespace {

std::string quote_csv(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_csv_line(std::ostringstream& os, const std::vector<std::string>& fields) {
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k > 0) os << ',';
    os << quote_csv(fields[k]);
  }
  os << '\n';
}

}  // namespace

std::string render_report(const Report& report, ReportFormat format) {
  if (format == ReportFormat::Json) return report.document.dump(2) + "\n";
  if (report.table.empty()) {
    throw PreconditionError("report '" + report.kind + "' has no tabular part; use JSON");
  }
  std::ostringstream os;
  write_csv_line(os, report.table.header);
  for (const auto& row : report.table.rows) {
    if (row.size() != report.table.header.size()) {
      throw InvariantViolation("report '" + report.kind + "': CSV row width differs from the header");
    }
    write_csv_line(os, row);
  }
  return os.str();
}

void emit_report(const Report& report, ReportFormat format, const std::filesystem::path& path) {
  const std::string text = render_report(report, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open report file " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("failed writing report file " + path.string());
}

Json load_report(const std::filesystem::path& path) {
  const std::string text = detail::read_text_file(path, "report file");
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("report file: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

Json json_of(const CoordinateSubset& subset) {
  Json out = Json::array();
  for (std::size_t i : subset) out.push_back(i);
  return out;
}

Json json_of(const Center& center) {
  return Json{{"support", json_of(center.support)}, {"levels", center.levels}};
}

Json json_of(const ShatterWitness& witness) {
  return Json{{"center", json_of(witness.center)}, {"assignments", witness.assignments}};
}

Json json_of(const RealShatterResult& result) {
  return Json{{"dimension", result.dimension}, {"support", json_of(result.support)}, {"levels", result.levels}};
}

Json json_of(const EntropyCount& count) {
  return Json{{"count", count.count}, {"flag", to_string(count.flag)}, {"witness", count.witness}};
}

Json json_of(const SplitCertificate& certificate) {
  return Json{{"threshold", certificate.threshold},   {"beta", certificate.beta},
              {"gap_halfwidth", certificate.gap_halfwidth}, {"side", to_string(certificate.side)},
              {"p_upper", certificate.p_upper},        {"p_lower", certificate.p_lower}};
}

Json json_of(const SeparatingCoordinate& coordinate) {
  return Json{{"coordinate", coordinate.coordinate},
              {"deviation", coordinate.deviation},
              {"certificate", json_of(coordinate.certificate)}};
}

Json json_of(const SeparatingTree& tree) {
  Json nodes = Json::array();
  for (const auto& node : tree.nodes) {
    Json n{{"rows", node.rows}};
    if (node.split) {
      n["split"] = Json{{"coordinate", node.split->coordinate},
                        {"threshold", node.split->threshold},
                        {"gap", node.split->gap},
                        {"plus_son", node.split->plus_son},
                        {"minus_son", node.split->minus_son}};
    }
    nodes.push_back(std::move(n));
  }
  return Json{{"leaf_count", tree.leaf_count()}, {"depth", tree.depth()}, {"nodes", std::move(nodes)}};
}

Json json_of(const ExtractionOutcome& outcome) {
  return Json{{"subset", json_of(outcome.subset)},
              {"attempts", outcome.attempts},
              {"achieved_separation", outcome.achieved_separation},
              {"target_separation", outcome.target_separation}};
}

Json json_of(const SupEstimate& estimate) {
  return Json{{"mean", estimate.mean},
              {"stderr", estimate.standard_error},
              {"samples", estimate.samples},
              {"process", to_string(estimate.process_kind)}};
}

Json json_of(const CubeTest& test) {
  return Json{{"contained", test.contained},
              {"translation", test.translation},
              {"worst_residual", test.worst_residual},
              {"lp_solves", test.lp_solves}};
}

Json json_of(const ConvexVcResult& result) {
  return Json{{"dimension", result.dimension},
              {"support", json_of(result.support)},
              {"translation", result.translation},
              {"cube_tests", result.cube_tests}};
}

Json json_of(const Ell1Constant& constant) {
  return Json{{"value", constant.value}, {"coefficients", constant.coefficients}, {"lp_solves", constant.lp_solves}};
}

Json json_of(const EltonResult& result) {
  Json sweep = Json::array();
  for (const auto& p : result.sweep) {
    sweep.push_back(Json{{"t", p.t}, {"vc", p.vc}, {"support", json_of(p.support)}, {"s", p.s}, {"weight", p.weight}});
  }
  return Json{{"sigma", json_of(result.sigma)},
              {"t", result.t},
              {"t_grid", result.t_grid},
              {"s", result.s},
              {"delta", result.delta},
              {"tradeoff", result.tradeoff},
              {"tradeoff_exponent", result.tradeoff_exponent},
              {"expected_sup", json_of(result.expected_sup)},
              {"coefficients", result.coefficients},
              {"reproved_t", result.reproved_t},
              {"weight_favoured_t", result.sweep.empty() ? 0.0 : result.sweep[result.weight_favoured].t},
              {"sweep", std::move(sweep)}};
}

}  // namespace combdim
