#include "operon/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace operon {

namespace {

using Json = nlohmann::ordered_json;

Json matrix_to_ordered(const ComplexMatrix& m) {
  Json j;
  j["rows"] = static_cast<int>(m.rows());
  j["cols"] = static_cast<int>(m.cols());
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      data.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    }
  j["data"] = std::move(data);
  return j;
}

double finite_number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw SerializationError("expected a number", where);
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SerializationError("number must be finite", where);
  return v;
}

int positive_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw SerializationError("expected an integer", where);
  const long long v = j.get<long long>();
  if (v <= 0) throw SerializationError("expected a positive integer", where);
  return static_cast<int>(v);
}

const Json& required_field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw SerializationError("expected an object", where);
  const auto it = j.find(key);
  if (it == j.end()) {
    throw SerializationError(std::string("missing field \"") + key + "\"", where);
  }
  return *it;
}

std::string join_path(const std::string& where, const std::string& leaf) {
  return where.empty() ? leaf : where + "." + leaf;
}

ComplexMatrix matrix_from_ordered(const Json& j, const std::string& where) {
  const int rows = positive_int(required_field(j, "rows", where), join_path(where, "rows"));
  const int cols = positive_int(required_field(j, "cols", where), join_path(where, "cols"));
  const Json& data = required_field(j, "data", where);
  const std::string data_path = join_path(where, "data");
  if (!data.is_array()) throw SerializationError("expected an array", data_path);
  if (static_cast<long long>(data.size()) != 1LL * rows * cols) {
    throw SerializationError("data length " + std::to_string(data.size()) +
                                 " does not match rows*cols = " + std::to_string(rows * cols),
                             data_path);
  }
  ComplexMatrix m(rows, cols);
  for (std::size_t k = 0; k < data.size(); ++k) {
    const std::string entry_path = data_path + "[" + std::to_string(k) + "]";
    const Json& entry = data[k];
    if (!entry.is_array() || entry.size() != 2) {
      throw SerializationError("expected a [re, im] pair", entry_path);
    }
    const double re = finite_number(entry[0], entry_path + "[0]");
    const double im = finite_number(entry[1], entry_path + "[1]");
    m(static_cast<Eigen::Index>(k) / cols, static_cast<Eigen::Index>(k) % cols) =
        Complex(re, im);
  }
  return m;
}

Json parse(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw SerializationError("malformed JSON", "");
  return j;
}

std::optional<Dims> dims_from(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) {
    throw SerializationError("expected [dimA, dimB]", where);
  }
  Dims dims;
  dims.a = positive_int(j[0], where + "[0]");
  dims.b = positive_int(j[1], where + "[1]");
  return dims;
}

Json dims_to(Dims dims) { return Json::array({dims.a, dims.b}); }

std::string status_name(Separability s) {
  switch (s) {
    case Separability::separable: return "separable";
    case Separability::entangled: return "entangled";
    default: return "inconclusive";
  }
}

Separability status_from(const std::string& name, const std::string& where) {
  if (name == "separable") return Separability::separable;
  if (name == "entangled") return Separability::entangled;
  if (name == "inconclusive") return Separability::inconclusive;
  throw SerializationError("unknown status \"" + name + "\"", where);
}

Json invariant_to(const InvariantResult& inv) {
  Json j;
  j["name"] = inv.name;
  j["pass"] = inv.pass;
  j["worst_residual"] = inv.worst_residual;
  return j;
}

Json experiment_to(const ExperimentReport& report, bool stable) {
  Json j;
  j["name"] = report.name;
  j["seed"] = report.seed;
  j["dims"] = dims_to(report.dims);
  j["trials"] = report.trials;
  j["all_pass"] = report.all_pass();
  Json invariants = Json::array();
  for (const InvariantResult& inv : report.invariants) invariants.push_back(invariant_to(inv));
  j["invariants"] = std::move(invariants);
  j["notes"] = report.notes;
  if (!stable) j["wall_clock_seconds"] = report.wall_clock_seconds;
  return j;
}

}  // namespace

std::string matrix_to_json(const ComplexMatrix& m) { return matrix_to_ordered(m).dump(2); }

ComplexMatrix matrix_from_json(const std::string& text) {
  return matrix_from_ordered(parse(text), "");
}

std::string state_to_json(const StateFunctional& rho, std::optional<Dims> dims) {
  Json j;
  j["density"] = matrix_to_ordered(rho.density());
  if (dims) j["dims"] = dims_to(*dims);
  if (!rho.label().empty()) j["label"] = rho.label();
  return j.dump(2);
}

SerializedState state_from_json(const std::string& text) {
  const Json j = parse(text);
  const ComplexMatrix density = matrix_from_ordered(required_field(j, "density", ""), "density");
  if (density.rows() != density.cols()) {
    throw SerializationError("density must be square", "density");
  }
  std::optional<Dims> dims;
  if (j.contains("dims")) {
    dims = dims_from(j["dims"], "dims");
    if (dims->total() != density.rows()) {
      throw SerializationError("dims product does not match density size", "dims");
    }
  }
  std::string label;
  if (j.contains("label")) {
    if (!j["label"].is_string()) throw SerializationError("expected a string", "label");
    label = j["label"].get<std::string>();
  }
  return SerializedState{StateFunctional(density, std::move(label)), dims};
}

std::string operation_to_json(const KrausOperation& t) {
  Json j;
  j["ambient_dim"] = t.dim();
  Json kraus = Json::array();
  for (const ComplexMatrix& k : t.kraus()) kraus.push_back(matrix_to_ordered(k));
  j["kraus"] = std::move(kraus);
  if (!t.label().empty()) j["label"] = t.label();
  return j.dump(2);
}

KrausOperation operation_from_json(const std::string& text) {
  const Json j = parse(text);
  const int dim = positive_int(required_field(j, "ambient_dim", ""), "ambient_dim");
  const Json& kraus_json = required_field(j, "kraus", "");
  if (!kraus_json.is_array() || kraus_json.empty()) {
    throw SerializationError("expected a nonempty array of matrices", "kraus");
  }
  std::vector<ComplexMatrix> kraus;
  for (std::size_t k = 0; k < kraus_json.size(); ++k) {
    const std::string where = "kraus[" + std::to_string(k) + "]";
    ComplexMatrix m = matrix_from_ordered(kraus_json[k], where);
    if (m.rows() != dim || m.cols() != dim) {
      throw SerializationError("matrix size does not match ambient_dim", where);
    }
    kraus.push_back(std::move(m));
  }
  std::string label;
  if (j.contains("label")) {
    if (!j["label"].is_string()) throw SerializationError("expected a string", "label");
    label = j["label"].get<std::string>();
  }
  return KrausOperation(std::move(kraus), std::move(label));
}

std::string algebra_to_json(const OperatorAlgebra& r) {
  Json j;
  j["ambient_dim"] = r.ambient_dim;
  Json generators = Json::array();
  for (const ComplexMatrix& g : r.generators) generators.push_back(matrix_to_ordered(g));
  j["generators"] = std::move(generators);
  return j.dump(2);
}

OperatorAlgebra algebra_from_json(const std::string& text) {
  const Json j = parse(text);
  const int dim = positive_int(required_field(j, "ambient_dim", ""), "ambient_dim");
  const Json& gens_json = required_field(j, "generators", "");
  if (!gens_json.is_array()) throw SerializationError("expected an array", "generators");
  std::vector<ComplexMatrix> generators;
  for (std::size_t k = 0; k < gens_json.size(); ++k) {
    const std::string where = "generators[" + std::to_string(k) + "]";
    ComplexMatrix m = matrix_from_ordered(gens_json[k], where);
    if (m.rows() != dim || m.cols() != dim) {
      throw SerializationError("matrix size does not match ambient_dim", where);
    }
    generators.push_back(std::move(m));
  }
  return generate_algebra(std::move(generators), dim);
}

std::string verdict_to_json(const SeparabilityVerdict& verdict, const StateFunctional& rho) {
  Json j;
  j["status"] = status_name(verdict.status);
  j["method"] = verdict.method;
  j["dims"] = dims_to(verdict.dims);
  j["state"] = Json{{"density", matrix_to_ordered(rho.density())}};
  if (verdict.certificate) {
    const ProductCertificate& cert = *verdict.certificate;
    Json c;
    c["dims"] = dims_to(cert.dims);
    c["weights"] = cert.weights;
    Json fa = Json::array();
    Json fb = Json::array();
    for (const auto& [on_a, on_b] : cert.factors) {
      fa.push_back(matrix_to_ordered(on_a));
      fb.push_back(matrix_to_ordered(on_b));
    }
    c["factors_a"] = std::move(fa);
    c["factors_b"] = std::move(fb);
    j["certificate"] = std::move(c);
  }
  if (verdict.pair_certificate) {
    const CommutingPairCertificate& cert = *verdict.pair_certificate;
    Json c;
    c["weights"] = cert.weights;
    Json comps = Json::array();
    for (const ComplexMatrix& m : cert.components) comps.push_back(matrix_to_ordered(m));
    c["components"] = std::move(comps);
    c["agreement_residual"] = cert.agreement_residual;
    j["pair_certificate"] = std::move(c);
  }
  if (verdict.witness) {
    Json w;
    w["min_pt_eigenvalue"] = verdict.witness->min_pt_eigenvalue;
    Json vec = Json::array();
    for (Eigen::Index i = 0; i < verdict.witness->eigenvector.size(); ++i) {
      vec.push_back(Json::array({verdict.witness->eigenvector(i).real(),
                                 verdict.witness->eigenvector(i).imag()}));
    }
    w["eigenvector"] = std::move(vec);
    j["witness"] = std::move(w);
  }
  if (verdict.best_distance) j["best_distance"] = *verdict.best_distance;
  return j.dump(2);
}

SerializedVerdict verdict_from_json(const std::string& text) {
  const Json j = parse(text);
  const Json& status_json = required_field(j, "status", "");
  if (!status_json.is_string()) throw SerializationError("expected a string", "status");

  SeparabilityVerdict verdict;
  verdict.status = status_from(status_json.get<std::string>(), "status");
  const Json& method = required_field(j, "method", "");
  if (!method.is_string()) throw SerializationError("expected a string", "method");
  verdict.method = method.get<std::string>();
  verdict.dims = *dims_from(required_field(j, "dims", ""), "dims");

  const Json& state_json = required_field(j, "state", "");
  const ComplexMatrix density =
      matrix_from_ordered(required_field(state_json, "density", "state"), "state.density");
  if (density.rows() != density.cols() || density.rows() != verdict.dims.total()) {
    throw SerializationError("density size does not match dims", "state.density");
  }

  if (j.contains("certificate")) {
    const Json& c = j["certificate"];
    ProductCertificate cert;
    cert.dims = *dims_from(required_field(c, "dims", "certificate"), "certificate.dims");
    const Json& weights = required_field(c, "weights", "certificate");
    if (!weights.is_array()) {
      throw SerializationError("expected an array", "certificate.weights");
    }
    for (std::size_t k = 0; k < weights.size(); ++k) {
      cert.weights.push_back(
          finite_number(weights[k], "certificate.weights[" + std::to_string(k) + "]"));
    }
    const Json& fa = required_field(c, "factors_a", "certificate");
    const Json& fb = required_field(c, "factors_b", "certificate");
    if (!fa.is_array() || !fb.is_array() || fa.size() != fb.size() ||
        fa.size() != weights.size()) {
      throw SerializationError("factors_a, factors_b and weights must have equal length",
                               "certificate");
    }
    for (std::size_t k = 0; k < fa.size(); ++k) {
      cert.factors.emplace_back(
          matrix_from_ordered(fa[k], "certificate.factors_a[" + std::to_string(k) + "]"),
          matrix_from_ordered(fb[k], "certificate.factors_b[" + std::to_string(k) + "]"));
    }
    verdict.certificate = std::move(cert);
  }

  if (j.contains("pair_certificate")) {
    const Json& c = j["pair_certificate"];
    CommutingPairCertificate cert;
    const Json& weights = required_field(c, "weights", "pair_certificate");
    if (!weights.is_array()) {
      throw SerializationError("expected an array", "pair_certificate.weights");
    }
    for (std::size_t k = 0; k < weights.size(); ++k) {
      cert.weights.push_back(
          finite_number(weights[k], "pair_certificate.weights[" + std::to_string(k) + "]"));
    }
    const Json& comps = required_field(c, "components", "pair_certificate");
    if (!comps.is_array() || comps.size() != weights.size()) {
      throw SerializationError("components and weights must have equal length",
                               "pair_certificate");
    }
    for (std::size_t k = 0; k < comps.size(); ++k) {
      cert.components.push_back(matrix_from_ordered(
          comps[k], "pair_certificate.components[" + std::to_string(k) + "]"));
    }
    cert.agreement_residual = finite_number(
        required_field(c, "agreement_residual", "pair_certificate"),
        "pair_certificate.agreement_residual");
    verdict.pair_certificate = std::move(cert);
  }

  if (j.contains("witness")) {
    const Json& w = j["witness"];
    EntanglementWitness witness;
    witness.min_pt_eigenvalue = finite_number(
        required_field(w, "min_pt_eigenvalue", "witness"), "witness.min_pt_eigenvalue");
    const Json& vec = required_field(w, "eigenvector", "witness");
    if (!vec.is_array()) throw SerializationError("expected an array", "witness.eigenvector");
    witness.eigenvector.resize(static_cast<Eigen::Index>(vec.size()));
    for (std::size_t k = 0; k < vec.size(); ++k) {
      const std::string where = "witness.eigenvector[" + std::to_string(k) + "]";
      if (!vec[k].is_array() || vec[k].size() != 2) {
        throw SerializationError("expected a [re, im] pair", where);
      }
      witness.eigenvector(static_cast<Eigen::Index>(k)) =
          Complex(finite_number(vec[k][0], where + "[0]"),
                  finite_number(vec[k][1], where + "[1]"));
    }
    verdict.witness = std::move(witness);
  }

  if (j.contains("best_distance")) {
    verdict.best_distance = finite_number(j["best_distance"], "best_distance");
  }
  return SerializedVerdict{std::move(verdict), StateFunctional(density)};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SerializationError("cannot open file for reading: " + path, "");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SerializationError("cannot open file for writing: " + path, "");
  out << content;
  if (!out) throw SerializationError("write failed: " + path, "");
}

bool RunReport::all_pass() const {
  for (const ExperimentReport& report : experiments)
    if (!report.all_pass()) return false;
  return true;
}

std::string report_to_json(const RunReport& report, bool stable) {
  Json j;
  j["seed"] = report.seed;
  j["dims"] = dims_to(report.dims);
  if (report.trials_override) {
    j["trials_override"] = *report.trials_override;
  } else {
    j["trials_override"] = nullptr;
  }
  j["all_pass"] = report.all_pass();
  Json experiments = Json::array();
  for (const ExperimentReport& er : report.experiments) {
    experiments.push_back(experiment_to(er, stable));
  }
  j["experiments"] = std::move(experiments);
  Json refused = Json::array();
  for (const auto& [name, reason] : report.refused) {
    refused.push_back(Json{{"name", name}, {"reason", reason}});
  }
  j["refused"] = std::move(refused);
  return j.dump(2) + "\n";
}

std::string report_to_text(const RunReport& report, bool stable) {
  std::ostringstream out;
  out << "run seed=" << report.seed << " dims=" << report.dims.a << "x" << report.dims.b;
  if (report.trials_override) out << " trials=" << *report.trials_override;
  out << "\n";
  for (const ExperimentReport& er : report.experiments) {
    out << "experiment " << er.name << " trials=" << er.trials;
    if (!stable) out << " wall=" << er.wall_clock_seconds << "s";
    out << "\n";
    for (const InvariantResult& inv : er.invariants) {
      out << "  " << (inv.pass ? "pass" : "FAIL") << " " << inv.name
          << " residual=" << inv.worst_residual << "\n";
    }
    for (const std::string& note : er.notes) out << "  note: " << note << "\n";
  }
  for (const auto& [name, reason] : report.refused) {
    out << "refused " << name << ": " << reason << "\n";
  }
  out << "overall: " << (report.all_pass() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

std::string report_to_csv(const RunReport& report) {
  std::ostringstream out;
  out << "experiment,invariant,status,value,detail\n";
  const auto escape = [](const std::string& s) {
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += "\"\"";
      else quoted += c;
    }
    quoted += "\"";
    return quoted;
  };
  for (const ExperimentReport& er : report.experiments) {
    for (const InvariantResult& inv : er.invariants) {
      out << er.name << "," << inv.name << "," << (inv.pass ? "pass" : "fail") << ","
          << inv.worst_residual << ",\n";
    }
  }
  for (const auto& [name, reason] : report.refused) {
    out << name << ",," << "refused" << ",," << escape(reason) << "\n";
  }
  return out.str();
}

}  // namespace operon
