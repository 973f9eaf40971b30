#include "polardyn/app/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <fstream>

#include "polardyn/bloch.hpp"

namespace polardyn::app {

using nlohmann::json;

std::vector<double> TimeGrid::points() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    out.push_back(start);
    return out;
  }
  for (int i = 0; i < count; ++i) {
    const double u = static_cast<double>(i) / (count - 1);
    if (spacing == Spacing::linear) {
      out.push_back(i == count - 1 ? stop : start + u * (stop - start));
    } else {
      out.push_back(i == count - 1 ? stop : start * std::pow(stop / start, u));
    }
  }
  return out;
}

namespace {

// Typos in optional keys would otherwise be silently ignored.
void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) throw ConfigError(where + ": unknown key \"" + item.key() + "\"");
  }
}

double number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing \"" + key + "\"");
  if (!j.at(key).is_number()) throw ConfigError(where + ": \"" + key + "\" must be a number");
  return j.at(key).get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

cplx entry_from_json(const json& e, const std::string& what) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  throw ConfigError(what + ": entries must be numbers or [re, im] pairs");
}

TimeGrid parse_grid(const json& j) {
  TimeGrid grid;
  const std::string where = "time_grid";
  reject_unknown(j, {"start", "stop", "count", "spacing"}, where);
  grid.start = number_or(j, "start", grid.start, where);
  grid.stop = number_or(j, "stop", grid.stop, where);
  if (j.contains("count")) {
    if (!j.at("count").is_number_integer()) throw ConfigError("time_grid: \"count\" must be an integer");
    grid.count = j.at("count").get<int>();
  }
  if (j.contains("spacing")) {
    const auto s = j.at("spacing").get<std::string>();
    if (s == "linear") grid.spacing = Spacing::linear;
    else if (s == "log") grid.spacing = Spacing::log;
    else throw ConfigError("time_grid: spacing must be \"linear\" or \"log\"");
  }
  if (grid.count < 1) throw ConfigError("time_grid: count must be >= 1");
  if (!(grid.start >= 0.0) || !std::isfinite(grid.stop)) throw ConfigError("time_grid: start must be >= 0");
  if (grid.count > 1 && !(grid.stop > grid.start))
    throw ConfigError("time_grid: stop must exceed start (grid must be strictly increasing)");
  if (grid.spacing == Spacing::log && !(grid.start > 0.0))
    throw ConfigError("time_grid: log spacing needs start > 0");
  return grid;
}

Tolerances parse_tolerances(const json& j) {
  Tolerances tol;
  const std::string where = "tolerances";
  reject_unknown(j, {"normality", "isotropy", "choi", "contractivity", "unitality", "semigroup"}, where);
  tol.normality = number_or(j, "normality", tol.normality, where);
  tol.isotropy = number_or(j, "isotropy", tol.isotropy, where);
  tol.choi = number_or(j, "choi", tol.choi, where);
  tol.contractivity = number_or(j, "contractivity", tol.contractivity, where);
  tol.unitality = number_or(j, "unitality", tol.unitality, where);
  tol.semigroup = number_or(j, "semigroup", tol.semigroup, where);
  return tol;
}

CMat parse_initial_state(const json& j, int dim) {
  reject_unknown(j, {"bloch", "ket", "matrix"}, "initial_state");
  if (j.size() != 1) throw ConfigError("initial_state needs exactly one of \"bloch\", \"ket\", \"matrix\"");
  const HermitianBasis basis(dim);
  CMat rho;
  if (j.contains("bloch")) {
    const auto& arr = j.at("bloch");
    if (!arr.is_array() || static_cast<int>(arr.size()) != basis.bloch_dim())
      throw ConfigError("initial_state.bloch must have " + std::to_string(basis.bloch_dim()) + " entries");
    BlochVector x{dim, Vec(basis.bloch_dim())};
    for (int i = 0; i < basis.bloch_dim(); ++i) x.coords(i) = arr.at(static_cast<std::size_t>(i)).get<double>();
    rho = density_from_bloch(x, basis);
  } else if (j.contains("ket")) {
    const auto& arr = j.at("ket");
    if (!arr.is_array() || static_cast<int>(arr.size()) != dim)
      throw ConfigError("initial_state.ket must have " + std::to_string(dim) + " entries");
    CVec psi(dim);
    for (int i = 0; i < dim; ++i) psi(i) = entry_from_json(arr.at(static_cast<std::size_t>(i)), "initial_state.ket");
    if (psi.norm() == 0.0) throw ConfigError("initial_state.ket is zero");
    psi.normalize();
    rho = psi * psi.adjoint();
  } else if (j.contains("matrix")) {
    rho = matrix_from_json(j.at("matrix"), dim, "initial_state.matrix");
  } else {
    throw ConfigError("initial_state needs one of \"bloch\", \"ket\", \"matrix\"");
  }
  if (!is_hermitian(rho)) throw ConfigError("initial_state is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-10) throw ConfigError("initial_state must have trace 1");
  const auto check = is_physical_state(vectorize(rho, basis), basis);
  if (!check.physical)
    throw ConfigError("initial_state is not positive (min eigenvalue " + std::to_string(check.min_eigenvalue) + ")");
  return rho;
}

NmrParams parse_nmr(const json& j) {
  NmrParams p;
  const std::string where = "generator(nmr)";
  p.omega = number_or(j, "omega", 0.0, where);
  p.gamma_plus = number_or(j, "gamma_plus", 0.0, where);
  p.gamma_minus = number_or(j, "gamma_minus", 0.0, where);
  p.gamma_z = number_or(j, "gamma_z", 0.0, where);
  return p;
}

}  // namespace

CMat matrix_from_json(const json& j, int dim, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw ConfigError(what + ": expected " + std::to_string(dim) + " rows");
  CMat m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw ConfigError(what + ": expected " + std::to_string(dim) + " columns");
    for (int c = 0; c < dim; ++c) m(r, c) = entry_from_json(row.at(static_cast<std::size_t>(c)), what);
  }
  return m;
}

json complex_matrix_to_json(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

json real_matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json generator_to_json(const LindbladGenerator& gen) {
  json j;
  j["hamiltonian"] = complex_matrix_to_json(gen.hamiltonian);
  j["jumps"] = json::array();
  for (const CMat& h : gen.jumps) j["jumps"].push_back(complex_matrix_to_json(h));
  j["gksl_convention"] = gen.convention == GkslConvention::standard ? "standard" : "reversed";
  return j;
}

LindbladGenerator generator_from_json(const json& j, int dim) {
  CMat h = j.contains("hamiltonian") ? matrix_from_json(j.at("hamiltonian"), dim, "generator.hamiltonian")
                                     : CMat(CMat::Zero(dim, dim));
  std::vector<CMat> jumps;
  if (j.contains("jumps")) {
    if (!j.at("jumps").is_array()) throw ConfigError("generator.jumps must be an array");
    for (const auto& m : j.at("jumps")) jumps.push_back(matrix_from_json(m, dim, "generator.jumps"));
  }
  GkslConvention conv = GkslConvention::standard;
  if (j.contains("gksl_convention")) {
    const auto s = j.at("gksl_convention").get<std::string>();
    if (s == "standard") conv = GkslConvention::standard;
    else if (s == "reversed") conv = GkslConvention::reversed;
    else throw ConfigError("generator.gksl_convention must be \"standard\" or \"reversed\"");
  }
  try {
    return LindbladGenerator(std::move(h), std::move(jumps), conv);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig cfg;
  try {
    reject_unknown(doc, {"system", "generator", "channel", "time_grid", "initial_state", "outputs", "tolerances",
                         "decompose_time"},
                   "config");
    if (doc.contains("system")) {
      const auto& sys = doc.at("system");
      reject_unknown(sys, {"dimension", "basis"}, "system");
      if (sys.contains("dimension")) cfg.dim = sys.at("dimension").get<int>();
      if (sys.contains("basis")) cfg.basis = sys.at("basis").get<std::string>();
    }
    if (cfg.dim < 2 || cfg.dim > 8) throw ConfigError("system.dimension must be in [2, 8]");
    if (cfg.basis != "gell-mann") throw ConfigError("system.basis: only \"gell-mann\" is supported");

    const bool has_gen = doc.contains("generator");
    const bool has_ch = doc.contains("channel");
    if (has_gen == has_ch) throw ConfigError("config needs exactly one of \"generator\" or \"channel\"");

    if (has_gen) {
      const auto& g = doc.at("generator");
      reject_unknown(g, {"model", "hamiltonian", "jumps", "gksl_convention", "omega", "gamma_plus", "gamma_minus",
                         "gamma_z", "gamma"},
                     "generator");
      const std::string model = g.value("model", std::string("custom"));
      cfg.model = model;
      if (model == "custom") {
        cfg.generator = generator_from_json(g, cfg.dim);
      } else if (model == "nmr") {
        if (cfg.dim != 2) throw ConfigError("generator(nmr) requires dimension 2");
        cfg.nmr = parse_nmr(g);
        cfg.generator = nmr_generator(*cfg.nmr);
      } else if (model == "isotropic") {
        cfg.generator = isotropic_generator(cfg.dim, number(g, "gamma", "generator(isotropic)"));
      } else if (model == "pauli_depolarizing") {
        if (cfg.dim != 2) throw ConfigError("generator(pauli_depolarizing) requires dimension 2");
        cfg.generator = pauli_depolarizing_generator(number(g, "gamma", "generator(pauli_depolarizing)"));
      } else {
        throw ConfigError("unknown generator model \"" + model + "\"");
      }
    } else {
      const auto& c = doc.at("channel");
      reject_unknown(c, {"model", "p", "kraus"}, "channel");
      const std::string model = c.value("model", std::string("kraus"));
      cfg.model = model;
      auto qubit_only = [&] {
        if (cfg.dim != 2) throw ConfigError("channel(" + model + ") requires dimension 2");
      };
      if (model == "kraus") {
        if (!c.contains("kraus") || !c.at("kraus").is_array() || c.at("kraus").empty())
          throw ConfigError("channel.kraus must be a non-empty array of matrices");
        std::vector<CMat> ops;
        for (const auto& m : c.at("kraus")) ops.push_back(matrix_from_json(m, cfg.dim, "channel.kraus"));
        cfg.channel = KrausChannel(cfg.dim, std::move(ops));
      } else if (model == "bit_flip") {
        qubit_only();
        cfg.channel = bit_flip(number(c, "p", "channel(bit_flip)")).channel;
      } else if (model == "phase_flip") {
        qubit_only();
        cfg.channel = phase_flip(number(c, "p", "channel(phase_flip)")).channel;
      } else if (model == "depolarizing") {
        qubit_only();
        cfg.channel = depolarizing(number(c, "p", "channel(depolarizing)")).channel;
      } else if (model == "amplitude_damping") {
        qubit_only();
        cfg.channel = amplitude_damping(number(c, "p", "channel(amplitude_damping)")).channel;
      } else {
        throw ConfigError("unknown channel model \"" + model + "\"");
      }
      if (cfg.channel->trace_preservation_defect() > 1e-10)
        throw ConfigError("channel is not trace preserving");
    }

    if (doc.contains("time_grid")) cfg.grid = parse_grid(doc.at("time_grid"));
    if (doc.contains("initial_state")) cfg.initial_state = parse_initial_state(doc.at("initial_state"), cfg.dim);
    if (doc.contains("outputs")) {
      const auto& o = doc.at("outputs");
      reject_unknown(o, {"path", "format"}, "outputs");
      cfg.output_path = o.value("path", std::string());
      cfg.format = o.value("format", std::string());
    }
    if (doc.contains("tolerances")) cfg.tol = parse_tolerances(doc.at("tolerances"));
    if (doc.contains("decompose_time")) {
      cfg.decompose_time = doc.at("decompose_time").get<double>();
      if (!(cfg.decompose_time >= 0.0)) throw ConfigError("decompose_time must be >= 0");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

}  // namespace polardyn::app
