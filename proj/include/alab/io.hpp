#pragma once

// JSON / CSV serialization of measures, amplitude sequences, scenarios and
// reports, plus atomic file output. Numbers are written with 17 significant
// digits so that files round-trip exactly and identical runs produce
// identical bytes.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "alab/anticipation.hpp"
#include "alab/delta_kernels.hpp"
#include "alab/inversion.hpp"
#include "alab/measure.hpp"
#include "alab/scenario.hpp"

namespace alab {

using json = nlohmann::json;

std::string format_number(double x);

// {"atoms":[{"lambda"|"kappa":x,"w_re":..,"w_im":..}],"probability":bool}
json to_json(const RawPointMeasure& m);
json to_json(const ReducedMeasure& m);
RawPointMeasure raw_measure_from_json(const json& j);
RawPointMeasure raw_measure_from_json_text(const std::string& text);
ReducedMeasure reduced_measure_from_json(const json& j);
// position,w_re,w_im
std::string measure_csv(std::span<const Atom> atoms);

// {"n_max":N,"values":[[re,im],...]} for n = 0..N; negative indices follow
// from conjugate symmetry.
json to_json(const AmplitudeSequence& beta);
AmplitudeSequence amplitudes_from_json(const json& j);

json to_json(const Scenario& sc, const std::string& solver = "");
// Rebuilds the derived fields from nu_q, L and rho.
Scenario scenario_from_json(const json& j);

json to_json(const RecoveredSpectrum& r);
json to_json(const PositivityDomainStats& s);

json to_json(const AnticipationReport& report, const std::optional<StrengthBounds>& bounds);
// n,alpha_re,alpha_im,p_n followed by '#'-prefixed summary lines.
std::string report_csv(const AnticipationReport& report,
                       const std::optional<StrengthBounds>& bounds);

// n,p_n,p_n_asymptotic,alpha_re,alpha_im plus '#' summary lines.
std::string model_csv(const ModelResult& model);

// kappa,nu_re,nu_im,F_re,F_im
std::string inversion_csv(const InversionResult& r);
json inversion_meta(const InversionResult& r);

// N,value_re,value_im,abs_err_vs_target
std::string convergence_csv(std::span<const ConvergenceRow> rows);

json parse_json_text(const std::string& text);
std::string read_text_file(const std::string& path);
json read_json_file(const std::string& path);
// Writes to a temporary file in the target directory and renames it over
// the destination.
void atomic_write(const std::string& path, const std::string& contents);

}  // namespace alab
