// Command-line front end: closed-form roof evaluation on symmetric state
// families, conversion witnesses, figure dataset emission, and the seeded
// self-check suites. Exit codes: 0 ok, 1 verification failure, 2 domain or
// argument error, 3 I/O error.

#include <CLI11.hpp>

#include "symroof/families.hpp"
#include "symroof/monotones.hpp"
#include "symroof/oracle.hpp"
#include "symroof/output.hpp"
#include "symroof/qcore.hpp"
#include "symroof/roofs.hpp"
#include "symroof/verify.hpp"
#include "symroof/witness.hpp"

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using symroof::families::FamilyPoint;
using symroof::monotones::MonotoneSpec;
using symroof::output::format_double;
using symroof::output::OutputRecord;
using symroof::qcore::SchmidtVector;

std::uint64_t env_seed() {
  if (const char* env = std::getenv("SYMROOF_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("SYMROOF_SEED is not an unsigned integer");
    }
  }
  return 0x5eedULL;
}

std::string echo_command(int argc, char** argv) {
  std::ostringstream out;
  for (int i = 0; i < argc; ++i) out << (i ? " " : "") << argv[i];
  return out.str();
}

MonotoneSpec parse_monotone(const std::string& text) {
  const std::size_t colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (head == "entropy") return MonotoneSpec::entropyOfEntanglement();
    if (head == "vidal") return MonotoneSpec::vidal(std::stoi(tail));
    if (head == "renyi") return MonotoneSpec::renyi(std::stod(tail));
    if (head == "concurrence") return MonotoneSpec::concurrence(std::stoi(tail));
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("monotone parameter in '" + text + "' does not parse");
  }
  throw std::invalid_argument(
      "unknown monotone '" + text +
      "' (expected entropy, vidal:k, renyi:alpha, or concurrence:k)");
}

FamilyPoint parse_family(const std::string& name, double a, double b, int d) {
  if (name == "werner") return FamilyPoint::werner(a, d);
  if (name == "iso" || name == "isotropic") return FamilyPoint::isotropic(b, d);
  if (name == "oo") return FamilyPoint::oo(a, b, d);
  if (name == "pp-werner") return FamilyPoint::ppWerner(a, b, d);
  if (name == "pp-iso" || name == "pp-isotropic") return FamilyPoint::ppIsotropic(a, b, d);
  throw std::invalid_argument("unknown family '" + name +
                              "' (expected werner, iso, oo, pp-werner, pp-iso)");
}

SchmidtVector parse_lambda(const std::string& csv, bool normalize) {
  std::vector<double> entries;
  std::stringstream in(csv);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    try {
      entries.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw std::invalid_argument("lambda entry '" + cell + "' does not parse");
    }
    if (entries.back() < 0.0)
      throw std::invalid_argument("lambda entries must be nonnegative");
  }
  if (entries.empty()) throw std::invalid_argument("lambda list is empty");
  double sum = 0.0;
  for (double x : entries) sum += x;
  if (sum <= 0.0) throw std::invalid_argument("lambda entries sum to zero");
  if (!normalize && std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument(
        "lambda sums to " + format_double(sum) +
        "; rerun with --normalize or provide a unit-sum vector");
  for (double& x : entries) x /= sum;
  return SchmidtVector::fromUnsorted(std::move(entries));
}

std::pair<std::string, double> parse_target(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("target must look like werner:0.75 or iso:0.95");
  const std::string family = text.substr(0, colon);
  if (family != "werner" && family != "iso" && family != "isotropic")
    throw std::invalid_argument("unknown target family '" + family + "'");
  double coord = 0.0;
  try {
    coord = std::stod(text.substr(colon + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("target coordinate in '" + text + "' does not parse");
  }
  return {family, coord};
}

const char* verdict_name(symroof::witness::Verdict v) {
  switch (v) {
    case symroof::witness::Verdict::Go:
      return "Go";
    case symroof::witness::Verdict::NoGo:
      return "NoGo";
    default:
      return "Inconclusive";
  }
}

std::vector<double> make_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    g[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return g;
}

int run_eval_roof(const std::string& family, double a, double b, int d,
                  const std::string& monotone, const std::string& outPath,
                  const std::string& command) {
  const FamilyPoint point = parse_family(family, a, b, d);
  const MonotoneSpec spec = parse_monotone(monotone);
  if (symroof::roofs::region_membership(point) == symroof::roofs::Region::Unknown) {
    std::cerr << "error: " << point.describe()
              << " lies in region C, where no closed-form roof is known\n";
    return 2;
  }
  const symroof::roofs::RoofResult result = symroof::roofs::extended_roof(spec, point);
  std::cout << "value = " << format_double(result.value) << "\n";
  std::cout << "fiber minimum = " << format_double(result.fiber_minimum) << "\n";
  std::cout << "minimizer: " << result.profile.describe() << "\n";
  std::cout << "continuity extension used: " << (result.via_continuity ? "yes" : "no")
            << "\n";
  if (!outPath.empty()) {
    OutputRecord record;
    record.command = command;
    record.metadata["monotone"] = spec.name();
    record.metadata["point"] = point.describe();
    record.columns = {"a", "b", "d", "value", "fiber_minimum", "via_continuity"};
    record.addRow({point.a, point.b, static_cast<double>(point.d), result.value,
                   result.fiber_minimum, result.via_continuity ? 1.0 : 0.0});
    symroof::output::write_file(outPath, symroof::output::to_csv(record));
    std::cout << "wrote " << outPath << "\n";
  }
  return 0;
}

int run_eval_witness(const std::string& lambdaText, bool normalize,
                     const std::string& target, int d, std::uint64_t seed,
                     const std::string& outPath, const std::string& command) {
  const SchmidtVector lambda = parse_lambda(lambdaText, normalize);
  const auto [familyName, coord] = parse_target(target);
  symroof::witness::WitnessResult result;
  if (familyName == "werner") {
    result = symroof::witness::pure_to_werner(lambda, coord);
  } else {
    const int dim = d > 0 ? d : lambda.size();
    symroof::witness::WitnessBudget budget;
    budget.seed = seed;
    result = symroof::witness::pure_to_isotropic_nogo(lambda, coord, dim, budget);
  }
  std::cout << "value = " << format_double(result.value) << "\n";
  std::cout << "verdict = " << verdict_name(result.verdict) << "\n";
  for (const auto& rep : result.perK) {
    std::cout << "  k=" << rep.k;
    if (rep.feasible)
      std::cout << " optimum=" << format_double(rep.optimum)
                << " kkt=" << format_double(rep.kktResidual)
                << " violation=" << format_double(rep.maxViolation) << "\n";
    else
      std::cout << " infeasible (region empty on this fiber)\n";
  }
  if (!result.perK.empty()) {
    std::cout << "  spread over feasible k = "
              << format_double(result.diagnostics.subproblemSpread)
              << (result.diagnostics.onBoundary ? "  [on decision boundary]" : "") << "\n";
  }
  if (!outPath.empty()) {
    OutputRecord record;
    record.command = command;
    record.metadata["target"] = target;
    record.metadata["value"] = format_double(result.value);
    record.metadata["verdict"] = verdict_name(result.verdict);
    record.metadata["seed"] = std::to_string(seed);
    record.columns = {"k", "feasible", "optimum", "kkt", "violation"};
    for (const auto& rep : result.perK)
      record.addRow({static_cast<double>(rep.k), rep.feasible ? 1.0 : 0.0, rep.optimum,
                     rep.kktResidual, rep.maxViolation});
    symroof::output::write_file(outPath, symroof::output::to_csv(record));
    std::cout << "wrote " << outPath << "\n";
  }
  return 0;
}

int run_emit_figure(const std::string& name, int d, int points,
                    const std::string& lambdaText, bool normalize, std::uint64_t seed,
                    std::string outPath, const std::string& command) {
  OutputRecord record;
  record.command = command;
  record.metadata["seed"] = std::to_string(seed);
  bool json = false;

  if (name == "vidal-iso") {
    const int dim = d > 0 ? d : 5;
    record.columns = {"b"};
    for (int k = 1; k < dim; ++k) record.columns.push_back("E" + std::to_string(k));
    for (double b : make_grid(0.0, 1.0, points)) {
      std::vector<double> row{b};
      for (int k = 1; k < dim; ++k)
        row.push_back(symroof::roofs::iso_vidal_roof(k, b, dim));
      record.addRow(std::move(row));
    }
  } else if (name == "t-opt") {
    const int dim = d > 0 ? d : 5;
    record.columns = {"b", "t_top_heavy", "t_truncated", "k_truncated"};
    for (double b : make_grid(1.0 / dim, 1.0, points)) {
      const auto [tTrunc, kTrunc] = symroof::roofs::iso_t_truncated(b, dim);
      record.addRow({b, symroof::roofs::iso_t_topheavy(b, dim), tTrunc,
                     static_cast<double>(kTrunc)});
    }
  } else if (name == "oo-vidal-surface") {
    json = true;
    const int dim = d > 0 ? d : 3;
    const MonotoneSpec spec = MonotoneSpec::vidal(1);
    record.columns = {"a", "b", "region", "value"};
    const int side = std::min(points, 101);
    for (double a : make_grid(0.0, 1.0, side))
      for (double b : make_grid(0.0, 1.0, side)) {
        if (a + b > 1.0 + 1e-12) continue;
        const FamilyPoint point = FamilyPoint::oo(a, b, dim);
        const symroof::roofs::Region region = symroof::roofs::region_membership(point);
        if (region == symroof::roofs::Region::Unknown) continue;
        const double value = symroof::roofs::extended_roof(spec, point).value;
        record.addRow({a, b,
                       region == symroof::roofs::Region::WernerOrbitRegion ? 0.0 : 1.0,
                       value});
      }
  } else if (name == "witness-curve") {
    const int dim = d > 0 ? d : 3;
    const SchmidtVector lambda = parse_lambda(lambdaText, normalize);
    symroof::witness::WitnessBudget budget;
    budget.seed = seed;
    record.columns = {"b", "value", "verdict"};
    double prevB = 0.0, prevV = 0.0;
    bool havePrev = false;
    std::optional<std::pair<double, double>> bracket;
    for (double b : make_grid(1.0 / dim, 1.0, points)) {
      const symroof::witness::WitnessResult res =
          symroof::witness::pure_to_isotropic_nogo(lambda, b, dim, budget);
      const double verdictCode = res.verdict == symroof::witness::Verdict::NoGo ? -1.0
                                 : res.verdict == symroof::witness::Verdict::Go ? 1.0
                                                                                : 0.0;
      record.addRow({b, res.value, verdictCode});
      if (havePrev && prevV > 0.0 && res.value <= 0.0 && !bracket)
        bracket = {prevB, b};
      prevB = b;
      prevV = res.value;
      havePrev = true;
    }
    if (bracket) {
      double lo = bracket->first, hi = bracket->second;
      for (int it = 0; it < 30; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v =
            symroof::witness::pure_to_isotropic_nogo(lambda, mid, dim, budget).value;
        (v > 0.0 ? lo : hi) = mid;
      }
      record.metadata["zero_crossing_b"] = format_double(0.5 * (lo + hi));
      std::cout << "zero crossing at b = " << format_double(0.5 * (lo + hi)) << "\n";
    }
  } else {
    throw std::invalid_argument(
        "unknown figure '" + name +
        "' (expected vidal-iso, t-opt, oo-vidal-surface, witness-curve)");
  }

  if (outPath.empty()) outPath = name + (json ? ".json" : ".csv");
  symroof::output::write_file(
      outPath, json ? symroof::output::to_json(record) : symroof::output::to_csv(record));
  std::cout << "wrote " << outPath << " (" << record.rows.size() << " rows)\n";
  return 0;
}

int run_verify(const std::string& level, std::uint64_t seed, const std::string& outPath,
               const std::string& command) {
  symroof::verify::Suite suite;
  if (level == "fast")
    suite = symroof::verify::Suite::Fast;
  else if (level == "full")
    suite = symroof::verify::Suite::Full;
  else
    throw std::invalid_argument("unknown verify level '" + level +
                                "' (expected fast or full)");
  const symroof::verify::Report report = symroof::verify::run_suite(suite, seed);
  std::cout << symroof::verify::render_table(report);
  if (!outPath.empty()) {
    OutputRecord record;
    record.command = command;
    record.metadata["suite"] = level;
    record.metadata["seed"] = std::to_string(seed);
    record.columns = {"index", "passed"};
    for (std::size_t i = 0; i < report.checks.size(); ++i) {
      record.metadata["check_" + std::to_string(i)] =
          report.checks[i].name + ": " + report.checks[i].detail;
      record.addRow({static_cast<double>(i), report.checks[i].passed ? 1.0 : 0.0});
    }
    symroof::output::write_file(outPath, symroof::output::to_json(record));
    std::cout << "wrote " << outPath << "\n";
  }
  return report.allPassed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "symroof: closed-form entanglement roofs on twirling-symmetric states,\n"
      "LOCC conversion witnesses, figure datasets, and seeded self-checks"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  bool seedSet = false;

  std::string erFamily = "werner", erMonotone = "entropy", erOut;
  double erA = 0.0, erB = 0.0;
  int erD = 3;
  CLI::App* evalRoof =
      app.add_subcommand("eval-roof", "closed-form roof value at a family point");
  evalRoof->add_option("--family", erFamily, "werner, iso, oo, pp-werner, pp-iso");
  evalRoof->add_option("--a", erA, "swap-type coordinate");
  evalRoof->add_option("--b", erB, "maximally-entangled-type coordinate");
  evalRoof->add_option("--d", erD, "local dimension")->check(CLI::PositiveNumber);
  evalRoof->add_option("--monotone", erMonotone,
                       "entropy, vidal:k, renyi:alpha, concurrence:k");
  evalRoof->add_option("--out", erOut, "write the result row as CSV");

  std::string ewLambda, ewTarget, ewOut;
  bool ewNormalize = false;
  int ewD = 0;
  CLI::App* evalWitness =
      app.add_subcommand("eval-witness", "conversion witness for a pure source state");
  evalWitness->add_option("--lambda", ewLambda, "comma-separated Schmidt coefficients")
      ->required();
  evalWitness->add_option("--target", ewTarget, "werner:a or iso:b")->required();
  evalWitness->add_option("--d", ewD, "target local dimension (default: lambda length)");
  evalWitness->add_flag("--normalize", ewNormalize, "rescale lambda to unit sum");
  evalWitness->add_option("--out", ewOut, "write per-k diagnostics as CSV");

  std::string efName, efLambda = "0.6,0.3,0.1", efOut;
  bool efNormalize = false;
  int efD = 0, efPoints = 201;
  CLI::App* emitFigure =
      app.add_subcommand("emit-figure", "write a figure dataset to disk");
  emitFigure
      ->add_option("name,--name", efName,
                   "vidal-iso, t-opt, oo-vidal-surface, witness-curve")
      ->required();
  emitFigure->add_option("--d", efD, "local dimension (figure-specific default)");
  emitFigure->add_option("--points", efPoints, "grid points per axis")
      ->check(CLI::Range(2, 100000));
  emitFigure->add_option("--lambda", efLambda, "source state for witness-curve");
  emitFigure->add_flag("--normalize", efNormalize, "rescale lambda to unit sum");
  emitFigure->add_option("--out", efOut, "output path (default <name>.csv/.json)");

  std::string vLevel = "fast", vOut;
  CLI::App* verifyCmd = app.add_subcommand("verify", "run the seeded self-check suite");
  verifyCmd->add_option("level,--level", vLevel, "fast or full");
  verifyCmd->add_option("--out", vOut, "write the report as JSON");

  for (CLI::App* sub : {evalWitness, emitFigure, verifyCmd})
    sub->add_option("--seed", seed, "RNG seed (default SYMROOF_SEED or 0x5eed)")
        ->each([&seedSet](const std::string&) { seedSet = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string command = echo_command(argc, argv);
  try {
    if (!seedSet) seed = env_seed();
    if (evalRoof->parsed())
      return run_eval_roof(erFamily, erA, erB, erD, erMonotone, erOut, command);
    if (evalWitness->parsed())
      return run_eval_witness(ewLambda, ewNormalize, ewTarget, ewD, seed, ewOut, command);
    if (emitFigure->parsed())
      return run_emit_figure(efName, efD, efPoints, efLambda, efNormalize, seed, efOut,
                             command);
    if (verifyCmd->parsed()) return run_verify(vLevel, seed, vOut, command);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    const std::string what = e.what();
    return what.rfind("output:", 0) == 0 ? 3 : 2;
  }
  return 2;
}
