// JSON forms of matrices, states, measurements, channels and reports.
// Malformed input raises std::invalid_argument.
#pragma once

#include "steerlab/channels.hpp"
#include "steerlab/criteria.hpp"
#include "steerlab/measurements.hpp"
#include "steerlab/states.hpp"
#include "steerlab/thresholds.hpp"

#include <json.hpp>

#include <string>

namespace steerlab {

using Json = nlohmann::ordered_json;

/// {rows, cols, re: [[...]], im: [[...]]}
Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

/// {kind, dim, params, matrix}; kind is werner | isotropic | tstate | matrix.
/// For the named families the matrix is rebuilt from params on input.
Json state_to_json(const DensityMatrix& w, const std::string& kind, const Json& params);
DensityMatrix state_from_json(const Json& j);

/// {dim, settings: [{q, basis}]}
Json measurements_to_json(const MeasurementSet& m);
MeasurementSet measurements_from_json(const Json& j);

/// {dim, kraus: [matrix...]}
Json channel_to_json(const QuantumChannel& c);
QuantumChannel channel_from_json(const Json& j);

/// {effects: [matrix...], preparations: [matrix...]}
Json eb_channel_to_json(const EbChannel& eb);
EbChannel eb_channel_from_json(const Json& j);

struct NstReportInfo {
  std::string method;  // enumerate | analytic | mc
  std::uint64_t samples = 0;
  double stderr_plus = 0;
  double stderr_minus = 0;
};

/// {d, N, f_plus, f_minus, witnesses, method, samples, stderr}
Json nst_report_to_json(int d, int n_settings, double f_plus, double f_minus, const Json& witnesses,
                        const NstReportInfo& info);
Json nst_witnesses_to_json(const NstResult& r);

/// {kind, F_bar, thresholds, margin, verdict, error_budget, witness, ...}
Json criterion_report_to_json(const CriterionReport& r);

Json read_json_file(const std::string& path);

}  // namespace steerlab
