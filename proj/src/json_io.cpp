#include "steerlab/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace steerlab {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw std::invalid_argument(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <typename T>
T as(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad value for '") + what + "': " + e.what());
  }
}

}  // namespace

Json matrix_to_json(const CMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json rrow = Json::array(), irow = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      rrow.push_back(m(i, k).real());
      irow.push_back(m(i, k).imag());
    }
    re.push_back(rrow);
    im.push_back(irow);
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

CMatrix matrix_from_json(const Json& j) {
  const auto rows = as<Eigen::Index>(field(j, "rows"), "rows");
  const auto cols = as<Eigen::Index>(field(j, "cols"), "cols");
  if (rows < 1 || cols < 1) throw std::invalid_argument("matrix must be non-empty");
  const Json& re = field(j, "re");
  const bool has_im = j.contains("im");
  if (!re.is_array() || static_cast<Eigen::Index>(re.size()) != rows)
    throw std::invalid_argument("matrix 're' must have 'rows' rows");
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& rrow = re[static_cast<std::size_t>(i)];
    if (!rrow.is_array() || static_cast<Eigen::Index>(rrow.size()) != cols)
      throw std::invalid_argument("matrix row has the wrong length");
    for (Eigen::Index k = 0; k < cols; ++k) {
      double imag = 0;
      if (has_im) imag = as<double>(j.at("im").at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(k)), "im");
      m(i, k) = Complex(as<double>(rrow[static_cast<std::size_t>(k)], "re"), imag);
    }
  }
  return m;
}

Json state_to_json(const DensityMatrix& w, const std::string& kind, const Json& params) {
  return Json{{"kind", kind}, {"dim", w.dim()}, {"params", params}, {"matrix", matrix_to_json(w.matrix())}};
}

DensityMatrix state_from_json(const Json& j) {
  const auto kind = as<std::string>(field(j, "kind"), "kind");
  const Json params = j.contains("params") ? j.at("params") : Json::object();
  if (kind == "werner")
    return werner_state(as<int>(field(params, "d"), "d"), as<double>(field(params, "w"), "w"));
  if (kind == "isotropic")
    return isotropic_state(as<int>(field(params, "d"), "d"), as<double>(field(params, "eta"), "eta"));
  if (kind == "tstate") {
    const auto t = as<std::vector<double>>(field(params, "t"), "t");
    if (t.size() != 3) throw std::invalid_argument("tstate needs three correlations");
    return steerlab::t_state(TState{{t[0], t[1], t[2]}});
  }
  if (kind == "matrix") {
    const CMatrix m = matrix_from_json(field(j, "matrix"));
    if (!DensityMatrix::is_valid(m)) throw std::invalid_argument("matrix is not a valid density matrix");
    return DensityMatrix(m);
  }
  throw std::invalid_argument("unknown state kind '" + kind + "'");
}

Json measurements_to_json(const MeasurementSet& m) {
  Json settings = Json::array();
  for (const auto& s : m.settings()) settings.push_back(Json{{"q", s.weight}, {"basis", matrix_to_json(s.basis)}});
  return Json{{"dim", m.dim()}, {"settings", settings}};
}

MeasurementSet measurements_from_json(const Json& j) {
  const int d = as<int>(field(j, "dim"), "dim");
  const Json& list = field(j, "settings");
  if (!list.is_array() || list.empty()) throw std::invalid_argument("'settings' must be a non-empty array");
  std::vector<Setting> settings;
  for (const auto& s : list) {
    const CMatrix basis = matrix_from_json(field(s, "basis"));
    if (basis.rows() != d || basis.cols() != d) throw std::invalid_argument("basis must be dim x dim");
    settings.push_back({as<double>(field(s, "q"), "q"), basis});
  }
  return MeasurementSet(d, std::move(settings));
}

Json channel_to_json(const QuantumChannel& c) {
  Json kraus = Json::array();
  for (const auto& k : c.kraus()) kraus.push_back(matrix_to_json(k));
  return Json{{"dim", c.dim()}, {"kraus", kraus}};
}

QuantumChannel channel_from_json(const Json& j) {
  const int d = as<int>(field(j, "dim"), "dim");
  std::vector<CMatrix> kraus;
  for (const auto& k : field(j, "kraus")) kraus.push_back(matrix_from_json(k));
  return QuantumChannel(d, std::move(kraus));
}

Json eb_channel_to_json(const EbChannel& eb) {
  Json effects = Json::array(), preps = Json::array();
  for (const auto& m : eb.effects) effects.push_back(matrix_to_json(m));
  for (const auto& r : eb.preparations) preps.push_back(matrix_to_json(r.matrix()));
  return Json{{"effects", effects}, {"preparations", preps}};
}

EbChannel eb_channel_from_json(const Json& j) {
  EbChannel eb;
  for (const auto& m : field(j, "effects")) eb.effects.push_back(matrix_from_json(m));
  for (const auto& r : field(j, "preparations")) eb.preparations.emplace_back(matrix_from_json(r));
  eb.validate();
  return eb;
}

Json nst_report_to_json(int d, int n_settings, double f_plus, double f_minus, const Json& witnesses,
                        const NstReportInfo& info) {
  return Json{{"d", d},
              {"N", n_settings},
              {"f_plus", f_plus},
              {"f_minus", f_minus},
              {"witnesses", witnesses},
              {"method", info.method},
              {"samples", info.samples},
              {"stderr", Json{{"f_plus", info.stderr_plus}, {"f_minus", info.stderr_minus}}}};
}

Json nst_witnesses_to_json(const NstResult& r) {
  const auto one = [](const NstWitness& w) {
    Json v = Json::array();
    for (Eigen::Index i = 0; i < w.eigenvector.size(); ++i)
      v.push_back(Json::array({w.eigenvector(i).real(), w.eigenvector(i).imag()}));
    return Json{{"assignment", w.assignment.k}, {"eigenvector", v}};
  };
  return Json{{"plus", one(r.witness_plus)}, {"minus", one(r.witness_minus)}};
}

Json criterion_report_to_json(const CriterionReport& r) {
  Json details = Json::object();
  for (const auto& [k, v] : r.details) details[k] = v;
  return Json{{"kind", to_string(r.kind)},
              {"F_bar", r.f_bar},
              {"thresholds", Json{{"f_minus", r.f_minus}, {"f_plus", r.f_plus}}},
              {"margin", r.margin},
              {"verdict", to_string(r.verdict)},
              {"boundary_adjacent", r.boundary_adjacent},
              {"error_budget", r.error_budget},
              {"witness", r.witness ? measurements_to_json(*r.witness) : Json(nullptr)},
              {"details", details}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("cannot parse '" + path + "': " + e.what());
  }
}

}  // namespace steerlab
