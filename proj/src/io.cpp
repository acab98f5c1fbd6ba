#include "alab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "alab/errors.hpp"

namespace alab {
namespace {

json atoms_json(std::span<const Atom> atoms, const char* key) {
  json list = json::array();
  for (const Atom& a : atoms) {
    list.push_back({{key, a.position}, {"w_re", a.weight.real()}, {"w_im", a.weight.imag()}});
  }
  return list;
}

std::vector<Atom> atoms_from_json(const json& j, bool allow_lambda, bool allow_kappa) {
  if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array()) {
    throw InputError("measure JSON needs an \"atoms\" array");
  }
  std::vector<Atom> atoms;
  for (const json& a : j["atoms"]) {
    if (!a.is_object()) throw InputError("measure atom must be an object");
    double position = 0.0;
    if (allow_lambda && a.contains("lambda")) {
      position = a["lambda"].get<double>();
    } else if (allow_kappa && a.contains("kappa")) {
      position = a["kappa"].get<double>();
    } else {
      throw InputError("measure atom lacks a position key");
    }
    const double re = a.value("w_re", 0.0);
    const double im = a.value("w_im", 0.0);
    atoms.push_back({position, cplx(re, im)});
  }
  return atoms;
}

bool probability_flag(const json& j) {
  if (!j.contains("probability")) return false;
  if (!j["probability"].is_boolean()) throw InputError("\"probability\" must be a boolean");
  return j["probability"].get<bool>();
}

json complex_pair(cplx z) { return json::array({z.real(), z.imag()}); }

template <typename F>
auto wrap_json_errors(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON input: ") + e.what());
  }
}

}  // namespace

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json to_json(const RawPointMeasure& m) {
  return {{"atoms", atoms_json(m.atoms(), "lambda")}, {"probability", m.probability()}};
}

json to_json(const ReducedMeasure& m) {
  return {{"atoms", atoms_json(m.atoms(), "kappa")}, {"probability", m.probability()}};
}

RawPointMeasure raw_measure_from_json(const json& j) {
  return wrap_json_errors(
      [&] { return RawPointMeasure(atoms_from_json(j, true, true), probability_flag(j)); });
}

RawPointMeasure raw_measure_from_json_text(const std::string& text) {
  return raw_measure_from_json(parse_json_text(text));
}

ReducedMeasure reduced_measure_from_json(const json& j) {
  return wrap_json_errors(
      [&] { return ReducedMeasure(atoms_from_json(j, false, true), probability_flag(j)); });
}

std::string measure_csv(std::span<const Atom> atoms) {
  std::string out = "position,w_re,w_im\n";
  for (const Atom& a : atoms) {
    out += format_number(a.position) + "," + format_number(a.weight.real()) + "," +
           format_number(a.weight.imag()) + "\n";
  }
  return out;
}

json to_json(const AmplitudeSequence& beta) {
  json values = json::array();
  for (int n = 0; n <= beta.n_max(); ++n) values.push_back(complex_pair(beta[n]));
  return {{"n_max", beta.n_max()}, {"values", values}};
}

AmplitudeSequence amplitudes_from_json(const json& j) {
  return wrap_json_errors([&] {
    if (!j.is_object() || !j.contains("values") || !j["values"].is_array()) {
      throw InputError("amplitude JSON needs a \"values\" array");
    }
    std::vector<cplx> values;
    for (const json& v : j["values"]) {
      if (!v.is_array() || v.size() != 2) throw InputError("amplitude must be [re, im]");
      values.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    if (j.contains("n_max") && j["n_max"].get<int>() + 1 != static_cast<int>(values.size())) {
      throw InputError("n_max does not match the number of values");
    }
    return AmplitudeSequence::from_nonnegative(std::move(values));
  });
}

json to_json(const Scenario& sc, const std::string& solver) {
  json report = {{"duality_residual", sc.residual}, {"r0_norm", sc.r0_norm}};
  if (!solver.empty()) report["solver"] = solver;
  return {{"nu_q", to_json(sc.nu_q)},   {"L", sc.L},
          {"rho", sc.rho},              {"zeta", sc.zeta},
          {"positive", sc.positive},    {"nu_s", to_json(sc.nu_s)},
          {"nu_r", to_json(sc.nu_r)},   {"norm1", sc.norm1},
          {"sign", sc.sign_fn},         {"condition_report", report}};
}

Scenario scenario_from_json(const json& j) {
  return wrap_json_errors([&] {
    if (!j.is_object() || !j.contains("nu_q") || !j.contains("L") || !j.contains("rho")) {
      throw InputError("scenario JSON needs nu_q, L and rho");
    }
    return build_scenario(reduced_measure_from_json(j["nu_q"]), j["L"].get<int>(),
                          j["rho"].get<std::vector<double>>());
  });
}

json to_json(const RecoveredSpectrum& r) {
  json atoms = json::array();
  for (std::size_t i = 0; i < r.kappas.size(); ++i) {
    atoms.push_back({{"kappa", r.kappas[i]}, {"w_re", r.weights[i]}, {"w_im", 0.0}});
  }
  const ConditionReport& c = r.condition;
  return {{"atoms", atoms},
          {"probability", false},
          {"condition_report",
           {{"hankel_condition", c.hankel_condition},
            {"min_root_gap", c.min_root_gap},
            {"max_unit_deviation", c.max_unit_deviation},
            {"max_weight_imag", c.max_weight_imag}}}};
}

json to_json(const PositivityDomainStats& s) {
  return {{"d", s.d},
          {"L", s.L},
          {"trials", s.trials},
          {"seed", s.seed},
          {"order_L",
           {{"positive", s.positive},
            {"boundary", s.boundary},
            {"negative", s.negative},
            {"infeasible", s.infeasible}}},
          {"order_L_minus_1",
           {{"positive", s.positive_lower},
            {"boundary", s.boundary_lower},
            {"negative", s.negative_lower},
            {"infeasible", s.infeasible_lower}}},
          {"positive_fraction", s.positive_fraction()},
          {"nesting_violations", s.nesting_violations}};
}

json to_json(const AnticipationReport& report, const std::optional<StrengthBounds>& bounds) {
  json alphas = json::array();
  for (cplx a : report.alphas) alphas.push_back(complex_pair(a));
  json moments = json::object();
  for (const auto& [r, v] : report.moments) moments[format_number(r)] = v;
  json j = {{"N", report.N},
            {"direction", report.direction == Direction::kAnticipation ? "anticipation"
                                                                       : "retrospection"},
            {"alphas", alphas},
            {"probs", report.probs},
            {"P_N", report.P_N},
            {"moments", moments},
            {"route_discrepancy", report.route_discrepancy}};
  if (bounds) {
    j["bounds"] = {{"PL", bounds->PL},
                   {"zeta2_y2", bounds->zeta2_y2},
                   {"zeta2", bounds->zeta2},
                   {"holds", bounds->holds}};
  }
  return j;
}

std::string report_csv(const AnticipationReport& report,
                       const std::optional<StrengthBounds>& bounds) {
  std::string out = "n,alpha_re,alpha_im,p_n\n";
  for (std::size_t n = 0; n < report.alphas.size(); ++n) {
    out += std::to_string(n) + "," + format_number(report.alphas[n].real()) + "," +
           format_number(report.alphas[n].imag()) + "," + format_number(report.probs[n]) + "\n";
  }
  out += "# P_N," + format_number(report.P_N) + "\n";
  for (const auto& [r, v] : report.moments) {
    out += "# moment_" + format_number(r) + "," + format_number(v) + "\n";
  }
  if (bounds) {
    out += "# PL," + format_number(bounds->PL) + "\n";
    out += "# zeta2_y2," + format_number(bounds->zeta2_y2) + "\n";
    out += "# zeta2," + format_number(bounds->zeta2) + "\n";
    out += std::string("# bounds_hold,") + (bounds->holds ? "true" : "false") + "\n";
  }
  return out;
}

std::string model_csv(const ModelResult& model) {
  std::string out = "n,p_n,p_n_asymptotic,alpha_re,alpha_im\n";
  for (std::size_t n = 0; n < model.probs.size(); ++n) {
    out += std::to_string(n) + "," + format_number(model.probs[n]) + "," +
           format_number(model.predicted[n]) + "," + format_number(model.alphas[n].real()) +
           "," + format_number(model.alphas[n].imag()) + "\n";
  }
  out += "# M," + std::to_string(model.M) + "\n";
  out += "# P_L," + format_number(model.P_L) + "\n";
  out += "# predicted_P_L," + format_number(model.predicted_PL) + "\n";
  out += "# predicted_max," + format_number(model.predicted_max) + "\n";
  out += "# predicted_min," + format_number(model.predicted_min) + "\n";
  return out;
}

std::string inversion_csv(const InversionResult& r) {
  std::string out = "kappa,nu_re,nu_im,F_re,F_im\n";
  for (std::size_t j = 0; j < r.grid.size(); ++j) {
    out += format_number(r.grid[j]) + "," + format_number(r.nu_samples[j].real()) + "," +
           format_number(r.nu_samples[j].imag()) + "," + format_number(r.F_samples[j].real()) +
           "," + format_number(r.F_samples[j].imag()) + "\n";
  }
  return out;
}

json inversion_meta(const InversionResult& r) {
  return {{"N_trunc", r.N_trunc},
          {"smoothing", to_string(r.smoothing)},
          {"affine_A", complex_pair(r.affine_A)},
          {"const_c", complex_pair(r.const_c)},
          {"quad_coeff", complex_pair(r.quad_coeff)},
          {"seam_mass", complex_pair(r.seam_mass)},
          {"tail_bound", r.tail_bound},
          {"grid_points", r.grid.size()}};
}

std::string convergence_csv(std::span<const ConvergenceRow> rows) {
  std::string out = "N,value_re,value_im,abs_err_vs_target\n";
  for (const ConvergenceRow& row : rows) {
    out += std::to_string(row.N) + "," + format_number(row.value.real()) + "," +
           format_number(row.value.imag()) + "," + format_number(row.abs_err) + "\n";
  }
  return out;
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json read_json_file(const std::string& path) { return parse_json_text(read_text_file(path)); }

void atomic_write(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write file: " + tmp.string());
    out << contents;
    out.close();
    if (!out) throw InputError("failed writing file: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw InputError("cannot move output into place: " + path);
  }
}

}  // namespace alab
