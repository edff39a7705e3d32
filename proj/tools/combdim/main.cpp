// combdim: command-line front end.
//
// Exit codes: 0 success, 1 usage/input errors, 2 assertion failure (a proved
// inequality or certificate did not hold), 3 exactness budget exceeded.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "combdim/class_model.hpp"
#include "combdim/constants.hpp"
#include "combdim/errors.hpp"
#include "combdim/experiments.hpp"
#include "combdim/extraction.hpp"
#include "combdim/gaussian_elton.hpp"
#include "combdim/geometry.hpp"
#include "combdim/metric_entropy.hpp"
#include "combdim/report.hpp"
#include "combdim/separation_tree.hpp"
#include "combdim/shattering.hpp"

namespace {

using namespace combdim;

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
  unsigned jobs = 1;
  std::string config_path;
  std::string command;
};

Json read_config(const Globals& g) {
  if (g.config_path.empty()) return Json::object();
  std::ifstream in(g.config_path);
  if (!in) throw ParseError("cannot open config file " + g.config_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    Json doc = Json::parse(buffer.str());
    if (!doc.is_object()) throw ParseError("config file: top level must be an object");
    return doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("config file: ") + e.what());
  }
}

ConstantsConfig constants_for(const Json& config) {
  if (!config.contains("constants")) return default_constants();
  return constants_from_json(config.at("constants").dump());
}

void emit(Report report, const Globals& g) {
  report.document["provenance"] = Json{{"command", g.command},
                                       {"seed", g.seed},
                                       {"jobs", g.jobs},
                                       {"config_file", g.config_path},
                                       {"lp_tolerance", kGeometryTolerance}};
  if (g.out.empty()) {
    const ReportFormat fmt = g.format.empty() ? ReportFormat::Json : parse_report_format(g.format);
    std::cout << render_report(report, fmt);
    return;
  }
  const ReportFormat fmt = g.format.empty() ? report_format_for(g.out) : parse_report_format(g.format);
  emit_report(report, fmt, g.out);
}

std::vector<double> parse_grid(const std::vector<double>& given, std::vector<double> fallback) {
  return given.empty() ? fallback : given;
}

CoordinateSubset subset_from(const std::vector<std::size_t>& indices, std::size_t n) {
  if (indices.empty()) return CoordinateSubset::all(n);
  return CoordinateSubset::from_unsorted(indices);
}

// ---------------------------------------------------------------------------

void add_gen(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("gen", "Generate a random function family (family JSON)");
  static std::size_t m = 8, n = 4;
  static std::string kind = "uniform-real";
  static int range_max = 4;
  cmd->add_option("--m", m, "Number of functions")->check(CLI::PositiveNumber);
  cmd->add_option("--n", n, "Domain size")->check(CLI::PositiveNumber);
  cmd->add_option("--kind", kind, "uniform-real | sign-vectors | integer-grid | convex-hull-sections");
  cmd->add_option("--range-max", range_max, "Largest value for integer-grid families");
  cmd->callback([&g] {
    const FunctionFamily family = gen_random_family(m, n, GeneratorSpec{parse_generator_kind(kind), range_max}, g.seed);
    const auto measure = ProbabilityMeasure::uniform(n);
    if (g.out.empty()) {
      std::cout << serialize_family(family, measure);
    } else {
      save_family(g.out, family, measure);
    }
  });
}

void add_entropy(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("entropy", "Packing and covering numbers at scale t");
  static std::string path, mode = "exact";
  static double t = 0.5, p = 2.0;
  static bool force = false;
  cmd->add_option("--family", path, "Family JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--t", t, "Scale")->required();
  cmd->add_option("--mode", mode, "exact | greedy");
  cmd->add_option("--p", p, "Lp exponent (inf for the sup norm)");
  cmd->add_flag("--force", force, "Run exact mode above the size limits");
  cmd->callback([&g] {
    const LoadedFamily lf = load_family(path);
    EntropyOptions opts;
    opts.mode = parse_entropy_mode(mode);
    opts.p = p;
    opts.force = force;
    const EntropyReport er = entropy_report(lf.family, lf.measure, t, opts);
    Report r;
    r.kind = "entropy";
    r.document["config"] = Json{{"family", path}, {"t", t}, {"mode", mode}, {"p", p}};
    r.document["packing"] = json_of(er.packing);
    r.document["covering"] = json_of(er.covering);
    emit(std::move(r), g);
  });
}

void add_vc(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("vc", "Shattering dimension (real: vc(A, t); integer: shattered centres)");
  static std::string path;
  static std::vector<double> grid;
  static std::uint64_t budget = kDefaultEnumerationBudget;
  cmd->add_option("--family", path, "Family JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--t", grid, "Scale(s); several values give a vc curve")->expected(0, -1);
  cmd->add_option("--budget", budget, "Enumeration budget");
  cmd->callback([&g] {
    const LoadedFamily lf = load_family(path);
    Report r;
    r.kind = "vc";
    r.document["config"] = Json{{"family", path}, {"t", grid}, {"budget", budget}};
    if (lf.family.is_integer()) {
      r.document["vc_integer"] = vc_integer(lf.family, budget);
    } else {
      if (grid.empty()) throw PreconditionError("vc: real families need --t");
      if (grid.size() == 1) {
        r.document["result"] = json_of(vc_real_witness(lf.family, grid[0], budget));
      } else {
        const auto curve = vc_curve(lf.family, grid, budget);
        r.table.header = {"t", "vc"};
        Json pts = Json::array();
        for (const auto& [t, v] : curve) {
          pts.push_back(Json{{"t", t}, {"vc", v}});
          r.table.rows.push_back({csv_field(t), csv_field(v)});
        }
        r.document["curve"] = std::move(pts);
      }
    }
    emit(std::move(r), g);
  });
}

void add_centers(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("centers", "Enumerate shattered centres of an integer family");
  static std::string path;
  static std::size_t max_dim = 64;
  static std::uint64_t budget = kDefaultEnumerationBudget;
  cmd->add_option("--family", path, "Integer family JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--max-dim", max_dim, "Largest centre dimension");
  cmd->add_option("--budget", budget, "Enumeration budget");
  cmd->callback([&g] {
    const LoadedFamily lf = load_family(path);
    const auto centres = enumerate_shattered_centers(lf.family, max_dim, budget);
    Report r;
    r.kind = "centers";
    r.document["config"] = Json{{"family", path}, {"max_dim", max_dim}, {"budget", budget}};
    r.document["count"] = centres.size();
    Json list = Json::array();
    r.table.header = {"dimension", "support", "levels"};
    for (const auto& c : centres) {
      list.push_back(json_of(c));
      std::ostringstream sup, lev;
      for (std::size_t k = 0; k < c.dimension(); ++k) {
        sup << (k ? " " : "") << c.support[k];
        lev << (k ? " " : "") << c.levels[k];
      }
      r.table.rows.push_back({csv_field(c.dimension()), sup.str(), lev.str()});
    }
    r.document["centers"] = std::move(list);
    emit(std::move(r), g);
  });
}

void add_tree(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("tree", "Build and validate a (t/6)-separating tree");
  static std::string path;
  static double t = 0.5;
  cmd->add_option("--family", path, "Family JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--t", t, "Separation scale of the family")->required();
  cmd->callback([&g] {
    const LoadedFamily lf = load_family(path);
    const SeparatingTree tree = build_separating_tree(lf.family, lf.measure, t);
    const TreeValidation v = validate_tree(tree, lf.family, t / 6.0);
    if (!v.ok) throw AssertionFailure("tree", v.message);
    const std::size_t leaves = tree.leaf_count();
    if (static_cast<double>(leaves) * static_cast<double>(leaves) < static_cast<double>(lf.family.size())) {
      throw AssertionFailure("tree", "fewer than sqrt(|A|) leaves");
    }
    Report r;
    r.kind = "tree";
    r.document["config"] = Json{{"family", path}, {"t", t}};
    r.document["tree"] = json_of(tree);
    emit(std::move(r), g);
  });
}

void add_extract(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("extract", "Random coordinate extraction preserving t/2-separation");
  static std::string path;
  static double t = 0.5;
  static std::size_t k = 4, attempts = 100;
  cmd->add_option("--family", path, "Family JSON (uniform measure)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--t", t, "Separation scale")->required();
  cmd->add_option("--k", k, "Largest subset size")->required();
  cmd->add_option("--attempts", attempts, "Draws before giving up");
  cmd->callback([&g] {
    const LoadedFamily lf = load_family(path);
    const ExtractionOutcome out = extract_coordinates(lf.family, t, k, g.seed, attempts);
    Report r;
    r.kind = "extract";
    r.document["config"] = Json{{"family", path}, {"t", t}, {"k", k}, {"attempts", attempts}};
    r.document["outcome"] = json_of(out);
    emit(std::move(r), g);
  });
}

void add_extract_curve(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("extract-curve", "Single-draw acceptance rate as a function of k");
  static std::string path;
  static double t = 0.5;
  static std::vector<std::size_t> ks;
  static std::size_t trials = 1000;
  cmd->add_option("--family", path, "Family JSON (uniform measure)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--t", t, "Separation scale")->required();
  cmd->add_option("--k", ks, "Subset sizes")->required()->expected(1, -1);
  cmd->add_option("--trials", trials, "Draws per k");
  cmd->callback([&g] {
    const LoadedFamily lf = load_family(path);
    const auto curve = extraction_curve(lf.family, t, ks, trials, g.seed, g.jobs);
    Report r;
    r.kind = "extract-curve";
    r.document["config"] = Json{{"family", path}, {"t", t}, {"k", ks}, {"trials", trials}};
    r.table.header = {"k", "success_rate", "standard_error"};
    Json pts = Json::array();
    for (const auto& p : curve) {
      pts.push_back(Json{{"k", p.k}, {"success_rate", p.success_rate}, {"standard_error", p.standard_error}});
      r.table.rows.push_back({csv_field(p.k), csv_field(p.success_rate), csv_field(p.standard_error)});
    }
    r.document["curve"] = std::move(pts);
    emit(std::move(r), g);
  });
}

void add_gsup(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("gsup", "Monte Carlo E sup of a Gaussian or Rademacher process");
  static std::string path, process = "gaussian";
  static std::size_t samples = 100000, sign_cube = 0;
  cmd->add_option("--family", path, "Index set as a family JSON (rows are points)");
  cmd->add_option("--sign-cube", sign_cube, "Use the sign cube {-1, 1}^n instead of a file");
  cmd->add_option("--samples", samples, "Number of samples");
  cmd->add_option("--process", process, "gaussian | rademacher");
  cmd->callback([&g] {
    PointSet points;
    if (sign_cube > 0) {
      if (sign_cube > 20) throw PreconditionError("gsup: --sign-cube is limited to n <= 20");
      std::vector<std::vector<double>> rows;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << sign_cube); ++mask) {
        std::vector<double> row(sign_cube);
        for (std::size_t i = 0; i < sign_cube; ++i) row[i] = ((mask >> i) & 1U) ? 1.0 : -1.0;
        rows.push_back(std::move(row));
      }
      points = PointSet::from_rows(rows);
    } else if (!path.empty()) {
      points = load_family(path).family.values();
    } else {
      throw PreconditionError("gsup: give --family or --sign-cube");
    }
    const SupEstimate est = gaussian_sup_mc(points, samples, g.seed, parse_process_kind(process), g.jobs);
    Report r;
    r.kind = "gsup";
    r.document["config"] = Json{{"family", path}, {"sign_cube", sign_cube}, {"samples", samples}, {"process", process}};
    r.document["estimate"] = json_of(est);
    emit(std::move(r), g);
  });
}

void add_dudley(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("dudley", "Fitted constants of the Dudley and vc entropy integrals");
  static std::size_t instances = 0, samples = 0;
  cmd->add_option("--instances", instances, "Suite size (default from config)");
  cmd->add_option("--samples", samples, "Monte Carlo samples per instance");
  cmd->callback([&g] {
    const Json config = read_config(g);
    DudleyConfig dc;
    dc.jobs = g.jobs;
    dc.suite.seed = g.seed;
    dc.constants = constants_for(config);
    if (config.contains("suite")) apply_overrides(dc.suite, config.at("suite"));
    if (instances > 0) dc.suite.instances = instances;
    if (samples > 0) dc.samples = samples;
    emit(dudley_report(dc, run_dudley_experiment(dc)), g);
  });
}

EltonOptions elton_options(const Globals& g, std::size_t samples, const std::string& process,
                           const std::vector<double>& grid) {
  EltonOptions opts;
  opts.seed = g.seed;
  opts.jobs = g.jobs;
  opts.samples = samples;
  opts.process = parse_process_kind(process);
  opts.t_grid = parse_grid(grid, geometric_grid());
  return opts;
}

void add_elton(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("elton", "Subset on which the vectors are equivalent to the l1 basis");
  static std::string norm_path, vectors_path, report_path, process = "rademacher";
  static std::size_t samples = 20000;
  static std::vector<double> grid;
  cmd->add_option("--norm", norm_path, "Norm JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--vectors", vectors_path, "Vectors JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--report", report_path, "Report path (same as --out)");
  cmd->add_option("--samples", samples, "Monte Carlo samples for delta");
  cmd->add_option("--process", process, "rademacher | gaussian");
  cmd->add_option("--grid", grid, "t grid (default 2^-1 .. 2^-8)")->expected(1, -1);
  cmd->callback([&g] {
    const PolyhedralNorm norm = load_norm(norm_path);
    const PointSet vectors = load_vectors(vectors_path);
    const EltonOptions opts = elton_options(g, samples, process, grid);
    const EltonResult res = elton_subset(norm, vectors, opts);
    Report r;
    r.kind = "elton";
    r.document["config"] = Json{{"norm", norm_path}, {"vectors", vectors_path}, {"samples", samples},
                                {"process", process}, {"t_grid", opts.t_grid}};
    r.document["result"] = json_of(res);
    Globals local = g;
    if (!report_path.empty()) local.out = report_path;
    emit(std::move(r), local);
  });
}

void add_rudelson(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("rudelson", "Optimality example: checks s t <= delta");
  static std::size_t n = 8, samples = 2000;
  static double delta = 0.5;
  static bool no_caps = false;
  cmd->add_option("--n", n, "Dimension (<= 12)");
  cmd->add_option("--delta", delta, "delta in (0, 1]");
  cmd->add_option("--samples", samples, "Monte Carlo samples for delta");
  cmd->add_flag("--no-caps", no_caps, "Omit the cap functionals");
  cmd->callback([&g] {
    const RudelsonInstance inst = rudelson_example(n, delta, !no_caps);
    EltonOptions opts = elton_options(g, samples, "rademacher", {});
    const EltonResult res = elton_subset(inst.norm, inst.vectors, opts);
    const double st = res.s * res.t;
    Report r;
    r.kind = "rudelson";
    r.document["config"] = Json{{"n", n}, {"delta", delta}, {"samples", samples}, {"caps", !no_caps}};
    r.document["functionals"] = inst.norm.functionals().rows();
    r.document["cap_size"] = inst.cap_size;
    r.document["net_slack"] = inst.net_slack;
    r.document["s_times_t"] = st;
    r.document["bound"] = delta + inst.net_slack;
    r.document["result"] = json_of(res);
    if (st > delta * (1.0 + 1e-6) + inst.net_slack) {
      throw AssertionFailure("rudelson", "s t = " + format_decimal(st) + " exceeds delta");
    }
    emit(std::move(r), g);
  });
}

void add_main_theorem(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("main-theorem", "Empirical constant K in N(A, t) <= (2/t)^(K vc(A, ct))");
  static std::size_t instances = 0;
  static std::vector<double> grid;
  cmd->add_option("--instances", instances, "Suite size (default 200)");
  cmd->add_option("--t", grid, "Scale grid")->expected(1, -1);
  cmd->callback([&g] {
    const Json config = read_config(g);
    MainTheoremConfig mc;
    mc.jobs = g.jobs;
    mc.suite.seed = g.seed;
    mc.constants = constants_for(config);
    if (config.contains("suite")) apply_overrides(mc.suite, config.at("suite"));
    if (config.contains("t_grid")) mc.t_grid = config.at("t_grid").get<std::vector<double>>();
    if (instances > 0) mc.suite.instances = instances;
    if (!grid.empty()) mc.t_grid = grid;
    const MainTheoremResult res = run_main_theorem_experiment(mc);
    if (!res.finite_where_vc_positive) throw AssertionFailure("main-theorem", "K_emp is not finite");
    emit(main_theorem_report(mc, res), g);
  });
}

void add_pipeline(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("pipeline", "End-to-end proof pipeline with certificate dump");
  static std::string path, kind = "uniform-real";
  static std::size_t m = 10, n = 5, k = 0, denominator = 3;
  static double t = 0.25;
  static bool corrupt = false;
  static std::uint64_t budget = kDefaultEnumerationBudget;
  cmd->add_option("--family", path, "Family JSON (default: generated from --seed)")->check(CLI::ExistingFile);
  cmd->add_option("--m", m, "Generated family size");
  cmd->add_option("--n", n, "Generated domain size");
  cmd->add_option("--kind", kind, "Generator kind");
  cmd->add_option("--t", t, "Scale (the family is thinned to 2t-separation)");
  cmd->add_option("--k", k, "Extraction target (0 = domain size)");
  cmd->add_option("--measure-denominator", denominator, "Atom weights k_i / sum k with k_i <= D");
  cmd->add_option("--budget", budget, "Enumeration budget");
  cmd->add_flag("--corrupt-tree", corrupt, "Fault injection: swap the root's sons");
  cmd->callback([&g] {
    const Json config = read_config(g);
    PipelineConfig pc;
    pc.m = m;
    pc.n = n;
    pc.kind = parse_generator_kind(kind);
    pc.seed = g.seed;
    pc.t = t;
    pc.k = k;
    pc.measure_denominator = denominator;
    pc.budget = budget;
    pc.corrupt_tree = corrupt;
    if (config.contains("pipeline")) apply_overrides(pc, config.at("pipeline"));
    Report r;
    if (path.empty()) {
      r = run_pipeline_trace(pc);
    } else {
      const LoadedFamily lf = load_family(path);
      r = run_pipeline_trace(lf.family, lf.measure, pc);
    }
    emit(std::move(r), g);
  });
}

void add_validate(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("validate", "Validate a family file (and optionally a tree report)");
  static std::string path, tree_path;
  static double gap = 0.0;
  cmd->add_option("--family", path, "Family JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--tree", tree_path, "Tree report written by `combdim tree`")->check(CLI::ExistingFile);
  cmd->add_option("--gap", gap, "Gap to validate the tree at");
  cmd->callback([&g] {
    const LoadedFamily lf = load_family(path);
    Report r;
    r.kind = "validate";
    r.document["config"] = Json{{"family", path}, {"tree", tree_path}, {"gap", gap}};
    r.document["family"] = Json{{"m", lf.family.size()},
                                {"n", lf.family.domain_size()},
                                {"integer", lf.family.is_integer()},
                                {"range_max", lf.family.range_max()},
                                {"uniform_measure", lf.measure.is_uniform()},
                                {"distinct_rows", lf.family.distinct_rows().size()}};
    if (!tree_path.empty()) {
      const Json doc = load_report(tree_path);
      const Json& nodes = doc.contains("tree") ? doc.at("tree").at("nodes") : doc.at("nodes");
      SeparatingTree tree;
      for (const auto& node : nodes) {
        TreeNode tn;
        tn.rows = node.at("rows").get<std::vector<std::size_t>>();
        if (node.contains("split")) {
          const auto& s = node.at("split");
          tn.split = TreeNode::Split{s.at("coordinate").get<std::size_t>(), s.at("threshold").get<double>(),
                                     s.at("gap").get<double>(), s.at("plus_son").get<std::size_t>(),
                                     s.at("minus_son").get<std::size_t>()};
        }
        tree.nodes.push_back(std::move(tn));
      }
      const TreeValidation v = validate_tree(tree, lf.family, gap);
      r.document["tree"] = Json{{"ok", v.ok}, {"message", v.message}};
      if (!v.ok) throw AssertionFailure("validate", v.message);
    }
    emit(std::move(r), g);
  });
}

void add_cube_test(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("cube-test", "Is a cube of side t inside the projection P_sigma(B)?");
  static std::string path;
  static std::vector<std::size_t> sigma;
  static double t = 1.0;
  static bool translated = false;
  cmd->add_option("--poly", path, "Polytope JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--sigma", sigma, "Coordinates (default: all)")->expected(1, -1);
  cmd->add_option("--t", t, "Cube side")->required();
  cmd->add_flag("--translated", translated, "Allow a translated cube");
  cmd->callback([&g] {
    const VPolytope poly = load_polytope(path);
    const CubeTest ct = cube_in_projection(poly, subset_from(sigma, poly.dimension()), t, translated);
    Report r;
    r.kind = "cube-test";
    r.document["config"] = Json{{"poly", path}, {"sigma", sigma}, {"t", t}, {"translated", translated}};
    r.document["result"] = json_of(ct);
    emit(std::move(r), g);
  });
}

void add_convex_vc(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("convex-vc", "Largest sigma with a cube of side t in P_sigma(B)");
  static std::string path;
  static double t = 1.0;
  static bool translated = false;
  static std::size_t max_tests = 100000;
  cmd->add_option("--poly", path, "Polytope JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--t", t, "Cube side")->required();
  cmd->add_flag("--translated", translated, "Allow translated cubes");
  cmd->add_option("--max-tests", max_tests, "Cube-test budget");
  cmd->callback([&g] {
    const VPolytope poly = load_polytope(path);
    const ConvexVcResult res = convex_vc(poly, t, translated, max_tests);
    Report r;
    r.kind = "convex-vc";
    r.document["config"] = Json{{"poly", path}, {"t", t}, {"translated", translated}, {"max_tests", max_tests}};
    r.document["result"] = json_of(res);
    emit(std::move(r), g);
  });
}

void add_l1_const(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("l1-const", "min ||sum a_i x_i|| over sum |a_i| = 1 on sigma");
  static std::string norm_path, vectors_path;
  static std::vector<std::size_t> sigma;
  cmd->add_option("--norm", norm_path, "Norm JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--vectors", vectors_path, "Vectors JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--sigma", sigma, "Vector indices (default: all)")->expected(1, -1);
  cmd->callback([&g] {
    const PolyhedralNorm norm = load_norm(norm_path);
    const PointSet vectors = load_vectors(vectors_path);
    const Ell1Constant c = ell1_lower_constant(norm, vectors, subset_from(sigma, vectors.rows()), g.jobs);
    Report r;
    r.kind = "l1-const";
    r.document["config"] = Json{{"norm", norm_path}, {"vectors", vectors_path}, {"sigma", sigma}};
    r.document["result"] = json_of(c);
    emit(std::move(r), g);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"combdim: metric entropy, shattering dimensions and their certificates"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--out", g.out, "Output file (.csv selects CSV)");
  app.add_option("--format", g.format, "json | csv (overrides the extension)");
  app.add_option("--jobs", g.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--config", g.config_path, "JSON config overrides")->check(CLI::ExistingFile);
  app.fallthrough();

  add_gen(app, g);
  add_entropy(app, g);
  add_vc(app, g);
  add_centers(app, g);
  add_tree(app, g);
  add_extract(app, g);
  add_extract_curve(app, g);
  add_gsup(app, g);
  add_dudley(app, g);
  add_elton(app, g);
  add_rudelson(app, g);
  add_main_theorem(app, g);
  add_pipeline(app, g);
  add_validate(app, g);
  add_cube_test(app, g);
  add_convex_vc(app, g);
  add_l1_const(app, g);

  for (auto* sub : app.get_subcommands({})) {
    sub->preparse_callback([&g, sub](std::size_t) { g.command = sub->get_name(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const AssertionFailure& e) {
    std::cerr << "assertion failure in stage '" << e.stage() << "': " << e.what() << '\n';
    return 2;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return 3;
  } catch (const ExtractionFailure& e) {
    std::cerr << "extraction failed: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
