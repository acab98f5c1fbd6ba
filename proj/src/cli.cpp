#include "alab/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "alab/acceptance.hpp"
#include "alab/anticipation.hpp"
#include "alab/delta_kernels.hpp"
#include "alab/errors.hpp"
#include "alab/inversion.hpp"
#include "alab/io.hpp"
#include "alab/measure.hpp"
#include "alab/scenario.hpp"

namespace alab {
namespace {

// Missing or inconsistent flags detected after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw UsageError(message);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void emit(const std::string& path, const std::string& contents, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << contents;
  } else {
    atomic_write(path, contents);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct Options {
  int threads = 0;

  // spectrum gen / amplitudes
  std::string kind;
  int d = 0;
  std::optional<std::uint64_t> seed;
  double scale = 1.0;
  std::string file;
  std::string format;
  std::string measure;
  int n_max = 0;

  // evolve
  int order = -1;
  std::string solver = "min-norm";
  std::string beta;
  int trials = 0;

  // anticipate
  std::string scenario;
  std::string raw;
  int N = -1;
  bool retrospect = false;
  std::vector<double> moments{1.0, 2.0};
  int fold = 0;
  double y1 = 0.0;
  double y2 = 0.0;
  int L = 0;
  double eps = 0.0;
  double c = 1.0;

  // invert
  std::string smoothing = "none";
  int grid = 1001;
  std::string meta;
  double mass_threshold = 0.05;

  // delta-kernel / time-average
  std::string pairing = "dirichlet";
  double alpha = 0.0;
  std::vector<int> N_list;
  std::string phi = "poly";
  std::string psi = "poly";
  std::optional<double> target;
  double ceiling = 1e8;
  double T = 0.0;
  double dt = 0.0;

  // selftest
  std::vector<int> only;

  std::string output;
};

int run_spectrum_gen(const Options& o, std::ostream& out) {
  SpectrumRequest req;
  req.kind = parse_spectrum_kind(o.kind);
  if (req.kind == SpectrumKind::kRandom) require(o.seed.has_value(), "--seed is required for random spectra");
  if (req.kind == SpectrumKind::kFile) require(!o.file.empty(), "--file is required for kind file");
  req.d = o.d;
  req.seed = o.seed.value_or(0);
  req.scale = o.scale;
  req.file = o.file;
  const RawPointMeasure m = gen_spectrum(req);
  const bool csv = o.format == "csv" || (o.format.empty() && ends_with(o.output, ".csv"));
  emit(o.output, csv ? measure_csv(m.atoms()) : dump(to_json(m)), out);
  return kExitOk;
}

int run_spectrum_amplitudes(const Options& o, std::ostream& out) {
  const ReducedMeasure nu = reduce(raw_measure_from_json(read_json_file(o.measure)));
  emit(o.output, dump(to_json(amplitudes(nu, o.n_max))), out);
  return kExitOk;
}

int run_evolve_solve(const Options& o, std::ostream& out, std::ostream& err) {
  require(o.order >= 0, "--order is required");
  const ReducedMeasure nu = reduce(raw_measure_from_json(read_json_file(o.measure)));
  std::vector<double> rho;
  if (o.solver == "min-norm") {
    rho = solve_rho(nu, o.order, RhoSolver::kMinNorm);
  } else if (o.solver == "partition") {
    rho = solve_rho(nu, o.order, RhoSolver::kPartition);
  } else {
    const auto solution = solve_rho_nonneg(nu, o.order);
    const Positivity p = classify(solution);
    if (p == Positivity::kInfeasible) throw InfeasibleError("duality system has no solution");
    if (p == Positivity::kNegative) {
      throw DomainError("no non-negative solution: best margin " + format_number(solution->margin));
    }
    rho = solution->rho;
  }
  const Scenario sc = build_scenario(nu, o.order, std::move(rho));
  err << "duality residual " << format_number(sc.residual) << ", positive "
      << (sc.positive ? "true" : "false") << "\n";
  emit(o.output, dump(to_json(sc, o.solver)), out);
  return kExitOk;
}

int run_evolve_recover(const Options& o, std::ostream& out) {
  require(o.d >= 1, "--d is required");
  const AmplitudeSequence beta = amplitudes_from_json(read_json_file(o.beta));
  emit(o.output, dump(to_json(recover_from_amplitudes(beta, o.d))), out);
  return kExitOk;
}

int run_evolve_positivity(const Options& o, std::ostream& out) {
  require(o.seed.has_value(), "--seed is required");
  require(o.order >= 1, "--order >= 1 is required");
  const PositivityDomainStats s =
      probe_positivity_domain(o.d, o.order, o.trials, *o.seed, resolve_threads(o.threads));
  emit(o.output, dump(to_json(s)), out);
  return kExitOk;
}

int run_anticipate(const Options& o, std::ostream& out) {
  require(!o.scenario.empty() && !o.raw.empty(), "--scenario and --raw are required");
  require(o.N >= 0, "--N is required");
  const Scenario sc = scenario_from_json(read_json_file(o.scenario));
  const RawPointMeasure raw = raw_measure_from_json(read_json_file(o.raw));
  if (!sc.positive) throw ContractError("anticipation is defined only for positive evolutions");
  const RawPointMeasure mu_s = lift_joint_measure(sc, raw);
  AnticipationReport rep = anticipation_amplitudes(
      sc, mu_s, o.N, o.retrospect ? Direction::kRetrospection : Direction::kAnticipation);
  statistics(rep, o.moments, o.fold);
  std::optional<StrengthBounds> bounds;
  if (o.N >= sc.L) bounds = strength_bound_check(sc, spectral_difference(mu_s), rep);
  const bool json_out = o.format == "json" || (o.format.empty() && ends_with(o.output, ".json"));
  emit(o.output, json_out ? dump(to_json(rep, bounds)) : report_csv(rep, bounds), out);
  return kExitOk;
}

int run_anticipate_strength(const Options& o, std::ostream& out) {
  require(o.seed.has_value(), "--seed is required");
  require(o.trials >= 2, "--trials >= 2 is required");
  const Scenario sc = scenario_from_json(read_json_file(o.scenario));
  const auto model = StochasticDifferenceModel::uniform(sc.nu_s.size(), o.y1, o.y2, *o.seed);
  const ExpectedStrength e = expected_strength(sc, model, o.trials, resolve_threads(o.threads));
  const json j = {{"trials", e.trials},
                  {"estimate", e.estimate},
                  {"std_error", e.std_error},
                  {"bound", e.bound},
                  {"holds", e.holds},
                  {"square_bound_holds", pure_point_square_bound(sc)}};
  emit(o.output, dump(j), out);
  return kExitOk;
}

int run_anticipate_model(const Options& o, std::ostream& out) {
  ModelKind kind;
  if (o.kind == "b") {
    kind = ModelKind::kUniform;
  } else if (o.kind == "c") {
    kind = ModelKind::kAlternating;
  } else {
    throw UsageError("--kind must be b or c");
  }
  emit(o.output, model_csv(model_measure(kind, o.L, o.N, o.c, o.eps)), out);
  return kExitOk;
}

int run_invert(const Options& o, std::ostream& out) {
  require(o.N >= 1, "--N is required");
  require(o.grid >= 1, "--grid must be positive");
  const AmplitudeSequence beta = amplitudes_from_json(read_json_file(o.beta));
  const InversionResult r =
      reconstruct(beta, o.N, uniform_grid(o.grid), parse_smoothing(o.smoothing));
  emit(o.output, inversion_csv(r), out);
  if (!o.meta.empty()) atomic_write(o.meta, dump(inversion_meta(r)));
  return kExitOk;
}

int run_invert_peaks(const Options& o, std::ostream& out) {
  require(o.N >= 1, "--N is required");
  const AmplitudeSequence beta = amplitudes_from_json(read_json_file(o.beta));
  const PeakReport rep = point_spectrum_consistency(beta, o.N, o.mass_threshold);
  json peaks = json::array();
  for (const Peak& p : rep.peaks) peaks.push_back({{"kappa", p.position}, {"mass", p.mass}});
  emit(o.output, dump({{"N", rep.N}, {"peaks", peaks}}), out);
  return kExitOk;
}

int run_delta_kernel(const Options& o, std::ostream& out, std::ostream& err) {
  require(!o.N_list.empty(), "--N is required");
  const RawPointMeasure m = raw_measure_from_json(read_json_file(o.measure));
  KernelProbe probe;
  probe.alpha = o.alpha;
  probe.N_list = o.N_list;
  probe.phi = TestFunction::parse(o.phi);
  probe.psi = TestFunction::parse(o.psi);
  PairingKind kind;
  if (o.pairing == "dirichlet") {
    kind = PairingKind::kDirichlet;
  } else if (o.pairing == "scaled") {
    kind = PairingKind::kScaled;
  } else {
    throw UsageError("--pairing must be scaled or dirichlet");
  }
  cplx target = 0.0;
  if (o.target) {
    target = *o.target;
  } else {
    // Mass of an atom at 0 times the kernel's value there.
    for (const Atom& a : m.atoms()) {
      if (std::abs(a.position) <= kMergeTolerance) target += a.weight;
    }
    target *= probe.phi(0.0) * (kind == PairingKind::kScaled ? probe.psi(0.0) : 1.0);
  }
  const auto rows = convergence_table(m.atoms(), probe, kind, target, o.ceiling);
  for (const ConvergenceRow& row : rows) {
    if (row.diverged) err << "N=" << row.N << ": value exceeds the divergence ceiling\n";
  }
  emit(o.output, convergence_csv(rows), out);
  return kExitOk;
}

int run_time_average(const Options& o, std::ostream& out) {
  require(o.T > 0.0 && o.dt > 0.0, "--T and --dt are required");
  const RawPointMeasure m = raw_measure_from_json(read_json_file(o.measure));
  const TimeAverageResult t = time_average(m.atoms(), o.alpha, o.T, o.dt);
  const json j = {{"T", t.T},
                  {"alpha", t.alpha},
                  {"quad_step", t.quad_step},
                  {"value", t.value},
                  {"error_estimate", t.error_estimate}};
  emit(o.output, dump(j), out);
  return kExitOk;
}

int run_selftest(const Options& o, std::ostream& out) {
  const int threads = resolve_threads(o.threads);
  bool all = true;
  for (int id = 1; id <= kCriterionCount; ++id) {
    if (!o.only.empty() && std::find(o.only.begin(), o.only.end(), id) == o.only.end()) continue;
    const CriterionResult r = run_criterion(id, threads);
    out << format_result(r) << "\n" << std::flush;
    all = all && r.passed;
  }
  return all ? kExitOk : kExitFailure;
}

}  // namespace

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("ANTICIPATION_LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 1024L));
  }
  return 1;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Evolution scenarios, anticipation amplitudes and spectral inversion"};
  app.name("alab");
  app.require_subcommand(1);

  auto add_output = [&](CLI::App* sub) { sub->add_option("-o,--output", o.output, "output file (stdout if omitted)"); };
  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", o.threads, "worker threads (default: $ANTICIPATION_LAB_THREADS or 1)");
  };

  auto* spectrum = app.add_subcommand("spectrum", "generate spectra and amplitudes");
  spectrum->require_subcommand(1);
  auto* gen = spectrum->add_subcommand("gen", "generate a raw spectral measure");
  gen->add_option("--kind", o.kind, "equidistant | random | hydrogen | file")->required();
  gen->add_option("--d", o.d, "number of atoms");
  gen->add_option("--seed", o.seed, "seed (required for random)");
  gen->add_option("--scale", o.scale, "position scale");
  gen->add_option("--file", o.file, "measure JSON for kind file");
  gen->add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  add_output(gen);
  auto* amps = spectrum->add_subcommand("amplitudes", "amplitudes beta_n of a measure's reduction");
  amps->add_option("--measure", o.measure, "measure JSON")->required();
  amps->add_option("--n-max", o.n_max, "largest index")->required();
  add_output(amps);

  auto* evolve = app.add_subcommand("evolve", "scenario construction and analysis");
  evolve->require_subcommand(1);
  auto* solve = evolve->add_subcommand("solve", "solve the duality system for rho");
  solve->add_option("--measure", o.measure, "measure JSON")->required();
  solve->add_option("--order", o.order, "order L")->required();
  solve->add_option("--solver", o.solver, "min-norm | partition | lp")
      ->check(CLI::IsMember({"min-norm", "partition", "lp"}));
  add_output(solve);
  auto* recover = evolve->add_subcommand("recover", "recover a spectrum from amplitudes");
  recover->add_option("--beta", o.beta, "amplitude JSON")->required();
  recover->add_option("--d", o.d, "number of atoms")->required();
  add_output(recover);
  auto* positivity = evolve->add_subcommand("positivity", "probe the domain of positivity");
  positivity->add_option("--d", o.d, "number of atoms")->required();
  positivity->add_option("--order", o.order, "order L")->required();
  positivity->add_option("--trials", o.trials, "number of samples")->required();
  positivity->add_option("--seed", o.seed, "seed")->required();
  add_threads(positivity);
  add_output(positivity);

  auto* anticipate = app.add_subcommand("anticipate", "anticipation amplitudes of a scenario");
  anticipate->require_subcommand(0, 1);
  anticipate->add_option("--scenario", o.scenario, "scenario JSON");
  anticipate->add_option("--raw", o.raw, "raw spectral measure JSON of q_0");
  anticipate->add_option("--N", o.N, "largest step index");
  anticipate->add_flag("--retrospect", o.retrospect, "evaluate at -n (time reverse)");
  anticipate->add_option("--moments", o.moments, "exponents r of <|n|^r>_N")->delimiter(',');
  anticipate->add_option("--fold", o.fold, "fold n into (-P/2, P/2] before moments");
  anticipate->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"json", "csv"}));
  add_output(anticipate);
  auto* model = anticipate->add_subcommand("model", "gridded model difference measures");
  model->add_option("--kind", o.kind, "b (uniform cells) | c (alternating cells)")->required();
  model->add_option("--L", o.L, "number of blocks")->required();
  model->add_option("--eps", o.eps, "cell fraction")->required();
  model->add_option("--c", o.c, "block mass scale");
  model->add_option("--N", o.N, "grid resolution per block")->required();
  add_output(model);
  auto* strength = anticipate->add_subcommand("strength", "Monte Carlo expected strength");
  strength->add_option("--scenario", o.scenario, "scenario JSON")->required();
  strength->add_option("--y1", o.y1, "mean of y on every atom");
  strength->add_option("--y2", o.y2, "variance of y on every atom");
  strength->add_option("--trials", o.trials, "number of trials")->required();
  strength->add_option("--seed", o.seed, "seed")->required();
  add_threads(strength);
  add_output(strength);

  auto* invert = app.add_subcommand("invert", "reconstruct nu / F from amplitudes");
  invert->require_subcommand(1);
  for (const char* what : {"nu", "F"}) {
    auto* sub = invert->add_subcommand(what, std::string("reconstruct on a uniform grid (") + what + ")");
    sub->add_option("--beta", o.beta, "amplitude JSON")->required();
    sub->add_option("--N", o.N, "truncation")->required();
    sub->add_option("--smoothing", o.smoothing, "none | cesaro")->check(CLI::IsMember({"none", "cesaro"}));
    sub->add_option("--grid", o.grid, "number of grid points on [-pi, pi)");
    sub->add_option("--meta", o.meta, "write constants and tail bound as JSON");
    add_output(sub);
  }
  auto* peaks = invert->add_subcommand("peaks", "locate atoms from Fejer means");
  peaks->add_option("--beta", o.beta, "amplitude JSON")->required();
  peaks->add_option("--N", o.N, "truncation")->required();
  peaks->add_option("--mass-threshold", o.mass_threshold, "relative mass floor");
  add_output(peaks);

  auto* delta = app.add_subcommand("delta-kernel", "kernel pairings over an N ladder");
  delta->add_option("--measure", o.measure, "measure JSON")->required();
  delta->add_option("--pairing", o.pairing, "scaled | dirichlet");
  delta->add_option("--alpha", o.alpha, "Hoelder exponent");
  delta->add_option("--N", o.N_list, "comma-separated N ladder")->delimiter(',')->required();
  delta->add_option("--phi", o.phi, "poly | exp");
  delta->add_option("--psi", o.psi, "poly | exp");
  delta->add_option("--target", o.target, "reference value (default: atom at 0)");
  delta->add_option("--ceiling", o.ceiling, "divergence ceiling");
  add_output(delta);

  auto* tavg = app.add_subcommand("time-average", "time average of |mu^(t)|^2");
  tavg->add_option("--measure", o.measure, "measure JSON")->required();
  tavg->add_option("--alpha", o.alpha, "exponent");
  tavg->add_option("--T", o.T, "window length")->required();
  tavg->add_option("--dt", o.dt, "quadrature step")->required();
  add_output(tavg);

  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
  selftest->add_option("--only", o.only, "criterion ids")->delimiter(',');
  add_threads(selftest);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return run_spectrum_gen(o, out);
    if (amps->parsed()) return run_spectrum_amplitudes(o, out);
    if (solve->parsed()) return run_evolve_solve(o, out, err);
    if (recover->parsed()) return run_evolve_recover(o, out);
    if (positivity->parsed()) return run_evolve_positivity(o, out);
    if (model->parsed()) return run_anticipate_model(o, out);
    if (strength->parsed()) return run_anticipate_strength(o, out);
    if (anticipate->parsed()) return run_anticipate(o, out);
    if (peaks->parsed()) return run_invert_peaks(o, out);
    if (invert->parsed()) return run_invert(o, out);
    if (delta->parsed()) return run_delta_kernel(o, out, err);
    if (tavg->parsed()) return run_time_average(o, out);
    if (selftest->parsed()) return run_selftest(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace alab
