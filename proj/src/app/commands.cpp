#include "polardyn/app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Eigenvalues>

#include "polardyn/app/format.hpp"
#include "polardyn/bloch.hpp"
#include "polardyn/decomposition.hpp"
#include "polardyn/entropy.hpp"
#include "polardyn/evolution.hpp"

namespace polardyn::app {

using nlohmann::json;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Evaluates f(0..n-1) on up to `threads` workers. Results land in index order,
// and the lowest-index exception wins, so the outcome never depends on scheduling.
template <typename R>
std::vector<R> parallel_map(std::size_t n, int threads, const std::function<R(std::size_t)>& f) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errors(n);
  const auto workers = static_cast<std::size_t>(std::clamp(threads, 1, 64));
  auto run = [&](std::size_t first) {
    for (std::size_t i = first; i < n; i += workers) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1 || n < 2) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

double normality_tol(const RunConfig& cfg, const CommandOptions& opts) {
  return opts.tol.value_or(cfg.tol.normality);
}

const CMat& require_initial_state(const RunConfig& cfg) {
  if (!cfg.initial_state) throw ConfigError("this command needs \"initial_state\"");
  return *cfg.initial_state;
}

// Channels are sampled at integer step counts 0..count-1; generators on the time grid.
std::vector<double> sample_points(const RunConfig& cfg) {
  if (cfg.generator) return cfg.grid.points();
  std::vector<double> steps(static_cast<std::size_t>(cfg.grid.count));
  for (std::size_t i = 0; i < steps.size(); ++i) steps[i] = static_cast<double>(i);
  return steps;
}

std::vector<double> positive_times(const std::vector<double>& times) {
  std::vector<double> out;
  std::copy_if(times.begin(), times.end(), std::back_inserter(out), [](double t) { return t > 0; });
  if (out.empty()) out.push_back(1.0);
  return out;
}

double hermitian_min_eigenvalue(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> solver(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue solve failed");
  return solver.eigenvalues()(0);
}

double spectral_norm(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

void require_finite(const std::vector<double>& row, double t) {
  for (double v : row)
    if (!std::isfinite(v)) throw NumericalError("non-finite value at t = " + format_double(t));
}

// Pure probe states |j>, (|j>+|k>)/sqrt2, (|j>+i|k>)/sqrt2: d^2 of them, spanning
// the Hermitian matrices.
std::vector<CMat> probe_states(int dim) {
  std::vector<CVec> kets;
  for (int j = 0; j < dim; ++j) kets.push_back(CVec::Unit(dim, j));
  const double h = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < dim; ++j)
    for (int k = j + 1; k < dim; ++k) {
      kets.push_back(h * (CVec::Unit(dim, j) + CVec::Unit(dim, k)));
      kets.push_back(h * (CVec::Unit(dim, j) + cplx(0.0, 1.0) * CVec::Unit(dim, k)));
    }
  std::vector<CMat> out;
  for (const CVec& psi : kets) out.push_back(psi * psi.adjoint());
  return out;
}

struct Channel {
  HermitianBasis basis;
  AffineMap affine;
};

Channel channel_model(const RunConfig& cfg) {
  HermitianBasis basis(cfg.dim);
  AffineMap affine = channel_to_affine(*cfg.channel, basis);
  return {std::move(basis), std::move(affine)};
}

// Density matrices after n = 0..count-1 applications of the channel.
std::vector<CMat> channel_trajectory(const KrausChannel& ch, const CMat& rho0, std::size_t count) {
  std::vector<CMat> out;
  out.reserve(count);
  CMat rho = rho0;
  for (std::size_t n = 0; n < count; ++n) {
    if (n) rho = ch.apply(rho);
    out.push_back(rho);
  }
  return out;
}

std::vector<CMat> generator_trajectory(const SuperopMatrix& sup, const HermitianBasis& basis,
                                       const CMat& rho0, const std::vector<double>& times, int threads) {
  const BlochVector x0 = vectorize(rho0, basis).bloch;
  return parallel_map<CMat>(times.size(), threads, [&](std::size_t i) {
    return density_from_bloch(evolve(dynamical_matrix(sup, times[i]), x0), basis);
  });
}

std::string emit(const Table& table, OutputFormat format) {
  return format == OutputFormat::csv ? to_csv(table) : dump_json(to_json(table));
}

json error_object(const std::string& type, const std::string& message) {
  return json{{"error", {{"type", type}, {"message", message}}}};
}

json polar_json(const PolarParts& parts) {
  return {{"rotation", real_matrix_to_json(parts.r)},
          {"scaling", real_matrix_to_json(parts.s)},
          {"commute_defect", parts.commute_defect},
          {"orthogonality_defect", parts.orthogonality_defect},
          {"reconstruction_defect", parts.reconstruction_defect},
          {"det_rotation", parts.det_r},
          {"singular", parts.singular}};
}

json canonical_json(const PolarParts& parts, double tol, const Tolerances& tolerances, int dim) {
  try {
    const CanonicalForm cf = canonical_form(parts, tol);
    json blocks = json::array();
    for (const auto& b : cf.blocks)
      blocks.push_back({{"size", b.size}, {"theta", b.theta}, {"lambda", json_number(b.lambda)}});
    json out{{"conjugation", real_matrix_to_json(cf.k)},
             {"blocks", blocks},
             {"has_fixed_block", cf.has_fixed_block},
             {"rotation_residual", json_number(cf.rotation_residual)},
             {"scaling_residual", json_number(cf.scaling_residual)},
             {"isotropy", to_string(classify_isotropy(cf, tolerances.isotropy))},
             {"spheroid", nullptr}};
    if (dim == 2) {
      try {
        out["spheroid"] = to_string(spheroid_class(cf));
      } catch (const InvalidArgument&) {
        out["spheroid"] = "triaxial";
      }
    }
    return out;
  } catch (const NormalityViolation& e) {
    json err = error_object("normality_violation", e.what());
    err["error"]["commute_defect"] = e.defect();
    return err;
  } catch (const InvalidArgument& e) {
    return error_object("no_canonical_form", e.what());
  }
}

json fit_json(const SuperopMatrix& sup, const std::vector<double>& times, double tol) {
  try {
    const RateFit fit = fit_rates(sup, times, tol);
    return {{"gammas", fit.gammas},
            {"omegas", fit.omegas},
            {"block_sizes", fit.block_sizes},
            {"residual", fit.residual},
            {"times", times}};
  } catch (const NormalityViolation& e) {
    json err = error_object("normality_violation", e.what());
    err["error"]["commute_defect"] = e.defect();
    return err;
  }
}

json header(const char* command, const RunConfig& cfg) {
  return {{"command", command},
          {"kind", cfg.generator ? "generator" : "channel"},
          {"model", cfg.model},
          {"dimension", cfg.dim}};
}

}  // namespace

OutputFormat resolve_format(const std::optional<std::string>& flag, const RunConfig& cfg,
                            OutputFormat fallback) {
  const std::string name = flag ? *flag : cfg.format;
  if (name.empty()) return fallback;
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError("format must be \"csv\" or \"json\", got \"" + name + "\"");
}

std::string cmd_evolve(const RunConfig& cfg, const CommandOptions& opts) {
  const CMat& rho0 = require_initial_state(cfg);
  const HermitianBasis basis(cfg.dim);
  const std::vector<double> times = sample_points(cfg);
  const std::vector<CMat> states =
      cfg.generator ? generator_trajectory(superop_matrix(*cfg.generator, basis), basis, rho0, times, opts.threads)
                    : channel_trajectory(*cfg.channel, rho0, times.size());

  Table table;
  table.columns.push_back(cfg.generator ? "t" : "step");
  for (int a = 1; a <= basis.bloch_dim(); ++a) table.columns.push_back("x_" + std::to_string(a));
  table.columns.push_back("purity");
  table.columns.push_back("S_L");
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Vec x = vectorize(states[i], basis).bloch.coords;
    const double purity = (states[i] * states[i]).trace().real();
    std::vector<double> row{times[i]};
    row.insert(row.end(), x.data(), x.data() + x.size());
    row.push_back(purity);
    row.push_back(1.0 - purity);
    require_finite(row, times[i]);
    table.rows.push_back(std::move(row));
  }
  return emit(table, opts.format);
}

std::string cmd_entropy(const RunConfig& cfg, const CommandOptions& opts) {
  const CMat& rho0 = require_initial_state(cfg);
  const HermitianBasis basis(cfg.dim);
  const double tol = normality_tol(cfg, opts);
  const std::vector<double> times = sample_points(cfg);
  const Vec x0 = vectorize(rho0, basis).bloch.coords;

  std::vector<CMat> states;
  std::function<double(double)> predicted;  // empty when no closed form applies
  if (cfg.generator) {
    const SuperopMatrix sup = superop_matrix(*cfg.generator, basis);
    states = generator_trajectory(sup, basis, rho0, times, opts.threads);
    if (is_unital(*cfg.generator, cfg.tol.unitality) && is_normal_superop(sup, tol).normal) {
      const RateFit fit = fit_rates(sup, positive_times(times), tol);
      const SubspaceWeights w{subspace_weights(fit.k, fit.block_sizes, x0)};
      predicted = [w, gammas = fit.gammas, d = cfg.dim](double t) {
        return predicted_linear_entropy(w, gammas, d, t);
      };
    }
  } else {
    const Channel model = channel_model(cfg);
    states = channel_trajectory(*cfg.channel, rho0, times.size());
    const bool unital = model.affine.c.cwiseAbs().maxCoeff() <= cfg.tol.unitality;
    if (unital && is_normal_matrix(model.affine.t, tol).normal) {
      try {
        const CanonicalForm cf = canonical_form(polar(model.affine.t), tol);
        const std::vector<double> w = subspace_weights(cf.k, cf.block_sizes(), x0);
        predicted = [w, blocks = cf.blocks, d = cfg.dim](double n) {
          double value = max_bloch_norm_squared(d);
          for (std::size_t k = 0; k < w.size(); ++k)
            value -= (n == 0.0 ? 1.0 : std::exp(-2.0 * blocks[k].lambda * n)) * w[k];
          return value;
        };
      } catch (const InvalidArgument&) {
        // reflections have no rotation-scaling canonical form; leave the column empty
      }
    }
  }

  Table table;
  table.columns = {cfg.generator ? "t" : "step", "S_L_direct", "S_L_predicted", "S_vN", "abs_err"};
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double direct = linear_entropy(states[i]);
    const double pred = predicted ? predicted(times[i]) : kNan;
    const double vn = von_neumann_entropy(states[i]);
    if (!std::isfinite(direct) || !std::isfinite(vn))
      throw NumericalError("non-finite entropy at t = " + format_double(times[i]));
    table.rows.push_back({times[i], direct, pred, vn, predicted ? std::abs(pred - direct) : kNan});
  }
  return emit(table, opts.format);
}

std::string cmd_decompose(const RunConfig& cfg, const CommandOptions& opts) {
  const HermitianBasis basis(cfg.dim);
  const double tol = normality_tol(cfg, opts);
  json doc = header("decompose", cfg);

  Mat m;
  Vec c;
  if (cfg.generator) {
    const SuperopMatrix sup = superop_matrix(*cfg.generator, basis);
    const DynamicalMatrix dm = dynamical_matrix(sup, cfg.decompose_time);
    m = dm.m;
    c = dm.c;
    const NormalityCheck normality = is_normal_superop(sup, tol);
    const bool unital = is_unital(*cfg.generator, cfg.tol.unitality);
    doc["time"] = cfg.decompose_time;
    doc["generator_matrix"] = real_matrix_to_json(sup.lambda);
    doc["drift"] = vector_to_json(sup.drift());
    doc["unital"] = unital;
    doc["normality_defect"] = normality.defect;
    doc["normal"] = normality.normal;
    doc["rate_fit"] = fit_json(sup, positive_times(cfg.grid.points()), tol);
    if (unital && normality.normal) {
      const TwoParameterSplit split = two_parameter_split(sup, cfg.decompose_time, {}, tol);
      doc["two_parameter_split"] = {{"t", split.t},
                                    {"s", split.s},
                                    {"rotation_norm", split.rotation_norm},
                                    {"scaling_norm", split.scaling_norm},
                                    {"matrix_norm", split.matrix_norm},
                                    {"product_defect", split.product_defect}};
    } else {
      doc["two_parameter_split"] =
          error_object("not_applicable", "the split needs a normal unital generator");
    }
  } else {
    const Channel model = channel_model(cfg);
    m = model.affine.t;
    c = model.affine.c;
    const NormalityCheck normality = is_normal_matrix(m, tol);
    doc["unital"] = c.cwiseAbs().maxCoeff() <= cfg.tol.unitality;
    doc["normality_defect"] = normality.defect;
    doc["normal"] = normality.normal;
  }
  doc["dynamical_matrix"] = real_matrix_to_json(m);
  doc["translation"] = vector_to_json(c);
  doc["homogeneous_matrix"] = real_matrix_to_json(homogeneous_matrix(m, c, cfg.dim).h);
  const PolarParts parts = polar(m);
  doc["polar"] = polar_json(parts);
  doc["canonical_form"] = canonical_json(parts, tol, cfg.tol, cfg.dim);
  return dump_json(doc);
}

std::string cmd_verify(const RunConfig& cfg, const CommandOptions& opts) {
  const HermitianBasis basis(cfg.dim);
  const Tolerances& t = cfg.tol;
  const double tol = normality_tol(cfg, opts);
  const std::vector<CMat> probes = probe_states(cfg.dim);
  const CMat mixed = CMat::Identity(cfg.dim, cfg.dim) / static_cast<double>(cfg.dim);
  json doc = header("verify", cfg);
  json checks;

  if (cfg.generator) {
    const LindbladGenerator& gen = *cfg.generator;
    const SuperopMatrix sup = superop_matrix(gen, basis);
    const std::vector<double> times = cfg.grid.points();

    double trace_defect = 0.0;
    for (const CMat& f : basis.elements())
      trace_defect = std::max(trace_defect, std::abs(apply_generator(gen, f).trace()));
    struct Sample {
      double min_state_eig, max_singular, min_choi;
    };
    const auto samples = parallel_map<Sample>(times.size(), opts.threads, [&](std::size_t i) {
      const DynamicalMatrix dm = dynamical_matrix(sup, times[i]);
      double min_eig = std::numeric_limits<double>::infinity();
      for (const CMat& rho : probes)
        min_eig = std::min(min_eig, hermitian_min_eigenvalue(
                                        density_from_bloch(evolve(dm, vectorize(rho, basis).bloch), basis)));
      return Sample{min_eig, spectral_norm(dm.m),
                    is_completely_positive_semigroup(gen, times[i], t.choi).min_eigenvalue};
    });
    double min_state = std::numeric_limits<double>::infinity(), max_sv = 0.0;
    double min_choi = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
      min_state = std::min(min_state, s.min_state_eig);
      max_sv = std::max(max_sv, s.max_singular);
      min_choi = std::min(min_choi, s.min_choi);
    }
    // The trace part of L is exact in the Bloch picture; report its defect separately.
    checks["C1"] = {{"pass", min_state >= -t.choi && trace_defect <= t.unitality},
                    {"min_state_eigenvalue", min_state},
                    {"trace_defect", trace_defect}};
    checks["C2"] = {{"pass", max_sv <= 1.0 + t.contractivity}, {"max_singular_value", max_sv}};
    const double fixed_defect = max_abs(apply_generator(gen, mixed));
    checks["C3"] = {{"pass", fixed_defect <= t.unitality}, {"mixed_state_defect", fixed_defect}};
    checks["L1"] = {{"pass", min_choi >= -t.choi}, {"min_choi_eigenvalue", min_choi}};

    double semigroup = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
      semigroup = std::max({semigroup, semigroup_defect(sup, times[i], times[i]),
                            semigroup_defect(sup, times[i], times[times.size() - 1 - i])});
    checks["L3"] = {{"pass", semigroup <= t.semigroup}, {"max_defect", semigroup}};

    const double unital_defect = max_abs(apply_generator(gen, CMat::Identity(cfg.dim, cfg.dim)));
    checks["unitality"] = {{"pass", unital_defect <= t.unitality}, {"defect", unital_defect}};
    const NormalityCheck normal = is_normal_superop(sup, tol);
    checks["normality"] = {{"pass", normal.normal}, {"defect", normal.defect}};
    const int commutant = commutant_dimension(spohn_operator_set(gen), cfg.dim);
    const int kernel = kernel_dimension(homogeneous_generator(sup));
    checks["spohn"] = {{"commutant_dimension", commutant},
                       {"kernel_dimension", kernel},
                       {"trivial_commutant", commutant == 1},
                       {"unique_stationary_state", kernel == 1}};
  } else {
    const KrausChannel& ch = *cfg.channel;
    const Channel model = channel_model(cfg);
    double min_state = std::numeric_limits<double>::infinity();
    for (const CMat& rho : probes) min_state = std::min(min_state, hermitian_min_eigenvalue(ch.apply(rho)));
    const double trace_defect = ch.trace_preservation_defect();
    checks["C1"] = {{"pass", min_state >= -t.choi && trace_defect <= t.unitality},
                    {"min_state_eigenvalue", min_state},
                    {"trace_defect", trace_defect}};
    const double max_sv = spectral_norm(model.affine.t);
    checks["C2"] = {{"pass", max_sv <= 1.0 + t.contractivity}, {"max_singular_value", max_sv}};
    const double fixed_defect = max_abs(CMat(ch.apply(mixed) - mixed));
    checks["C3"] = {{"pass", fixed_defect <= t.unitality}, {"mixed_state_defect", fixed_defect}};
    const CpCheck cp = check_choi(ch.as_map(), cfg.dim, t.choi);
    checks["L1"] = {{"pass", cp.completely_positive}, {"min_choi_eigenvalue", cp.min_eigenvalue}};
    checks["L3"] = {{"pass", nullptr}, {"note", "discrete channel: powers compose exactly"}};
    checks["unitality"] = {{"pass", fixed_defect <= t.unitality}, {"defect", fixed_defect}};
    const NormalityCheck normal = is_normal_matrix(model.affine.t, tol);
    checks["normality"] = {{"pass", normal.normal}, {"defect", normal.defect}};
    std::vector<CMat> ops;
    for (const CMat& k : ch.kraus) {
      ops.push_back(k);
      ops.push_back(k.adjoint());
    }
    const int commutant = commutant_dimension(ops, cfg.dim);
    const Mat h = homogeneous_matrix(model.affine.t, model.affine.c, cfg.dim).h;
    const int kernel = kernel_dimension(Mat(h - Mat::Identity(h.rows(), h.cols())));
    checks["spohn"] = {{"commutant_dimension", commutant},
                       {"kernel_dimension", kernel},
                       {"trivial_commutant", commutant == 1},
                       {"unique_stationary_state", kernel == 1}};
  }
  doc["checks"] = checks;
  return dump_json(doc);
}

}  // namespace polardyn::app
