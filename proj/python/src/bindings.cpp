#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polardyn/bloch.hpp"
#include "polardyn/channels.hpp"
#include "polardyn/decomposition.hpp"
#include "polardyn/entropy.hpp"
#include "polardyn/evolution.hpp"
#include "polardyn/lindblad.hpp"

namespace py = pybind11;
using namespace polardyn;

namespace {

GkslConvention parse_convention(const std::string& name) {
  if (name == "standard") return GkslConvention::standard;
  if (name == "reversed") return GkslConvention::reversed;
  throw InvalidArgument("convention must be 'standard' or 'reversed'");
}

py::dict polar_dict(const PolarParts& p) {
  py::dict d;
  d["rotation"] = p.r;
  d["scaling"] = p.s;
  d["commute_defect"] = p.commute_defect;
  d["orthogonality_defect"] = p.orthogonality_defect;
  d["reconstruction_defect"] = p.reconstruction_defect;
  d["det_rotation"] = p.det_r;
  d["singular"] = p.singular;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bloch-vector dynamics, polar decomposition and entropy of open quantum systems";

  static py::exception<NormalityViolation> normality_exc(m, "NormalityViolation", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const NormalityViolation& e) {
      py::set_error(normality_exc, e.what());
    }
  });

  py::class_<HermitianBasis>(m, "HermitianBasis")
      .def(py::init<int>(), py::arg("dim"))
      .def_property_readonly("dim", &HermitianBasis::dim)
      .def_property_readonly("bloch_dim", &HermitianBasis::bloch_dim)
      .def("element", &HermitianBasis::element, py::arg("alpha"))
      .def("gram", &HermitianBasis::gram);

  m.def(
      "vectorize",
      [](const CMat& a) {
        const HermitianDecomp dec = vectorize(a, HermitianBasis(static_cast<int>(a.rows())));
        return py::make_tuple(dec.trace, dec.bloch.coords);
      },
      py::arg("a"), "Return (trace, Bloch coordinates) of a Hermitian matrix.");
  m.def(
      "density_from_bloch",
      [](const Vec& x, int dim) { return density_from_bloch(BlochVector{dim, x}, HermitianBasis(dim)); },
      py::arg("x"), py::arg("dim"));
  m.def(
      "is_physical_state",
      [](const CMat& rho) {
        const HermitianBasis basis(static_cast<int>(rho.rows()));
        const PhysicalityCheck c = is_physical_state(vectorize(rho, basis), basis);
        return py::make_tuple(c.physical, c.min_eigenvalue);
      },
      py::arg("rho"));

  py::class_<LindbladGenerator>(m, "LindbladGenerator")
      .def(py::init([](const CMat& h, const std::vector<CMat>& jumps, const std::string& conv) {
             return LindbladGenerator(h, jumps, parse_convention(conv));
           }),
           py::arg("hamiltonian"), py::arg("jumps") = std::vector<CMat>{}, py::arg("convention") = "standard")
      .def_readonly("dim", &LindbladGenerator::dim)
      .def_readonly("hamiltonian", &LindbladGenerator::hamiltonian)
      .def_readonly("jumps", &LindbladGenerator::jumps)
      .def("apply", [](const LindbladGenerator& g, const CMat& rho) { return apply_generator(g, rho); });

  py::class_<SuperopMatrix>(m, "SuperopMatrix")
      .def_readonly("dim", &SuperopMatrix::dim)
      .def_readonly("lambda_", &SuperopMatrix::lambda)
      .def_readonly("ell", &SuperopMatrix::ell)
      .def("drift", &SuperopMatrix::drift);

  m.def(
      "superop_matrix", [](const LindbladGenerator& g) { return superop_matrix(g, HermitianBasis(g.dim)); },
      py::arg("generator"));
  m.def("is_unital", &is_unital, py::arg("generator"), py::arg("tol") = 1e-10);
  m.def(
      "is_normal", [](const SuperopMatrix& s, double tol) {
        const NormalityCheck c = is_normal_superop(s, tol);
        return py::make_tuple(c.normal, c.defect);
      },
      py::arg("sup"), py::arg("tol") = 1e-10);
  m.def(
      "dynamical_matrix",
      [](const SuperopMatrix& s, double t) {
        const DynamicalMatrix dm = dynamical_matrix(s, t);
        return py::make_tuple(dm.m, dm.c);
      },
      py::arg("sup"), py::arg("t"), "Return (M_t, c_t).");
  m.def(
      "evolve",
      [](const SuperopMatrix& s, const Vec& x0, const std::vector<double>& times) {
        Mat out(static_cast<Eigen::Index>(times.size()), x0.size());
        for (std::size_t i = 0; i < times.size(); ++i)
          out.row(static_cast<Eigen::Index>(i)) =
              evolve(dynamical_matrix(s, times[i]), BlochVector{s.dim, x0}).coords.transpose();
        return out;
      },
      py::arg("sup"), py::arg("x0"), py::arg("times"), "Bloch vectors at each time, one row per time.");
  m.def("exp_real", &exp_real, py::arg("a"), py::arg("normal_tol") = 1e-10);
  m.def("commutant_dimension", &commutant_dimension, py::arg("ops"), py::arg("dim"), py::arg("tol") = 1e-10);
  m.def(
      "choi_min_eigenvalue",
      [](const std::vector<CMat>& kraus) {
        const KrausChannel ch(static_cast<int>(kraus.at(0).rows()), kraus);
        return check_choi(ch.as_map(), ch.dim).min_eigenvalue;
      },
      py::arg("kraus"));

  m.def("polar", [](const Mat& a) { return polar_dict(polar(a)); }, py::arg("m"));
  m.def(
      "canonical_form",
      [](const Mat& a, double tol) {
        const CanonicalForm cf = canonical_form(polar(a), tol);
        py::list blocks;
        for (const auto& b : cf.blocks) {
          py::dict d;
          d["size"] = b.size;
          d["theta"] = b.theta;
          d["lambda"] = b.lambda;
          blocks.append(d);
        }
        py::dict out;
        out["k"] = cf.k;
        out["blocks"] = blocks;
        out["isotropy"] = to_string(classify_isotropy(cf, 1e-9));
        out["rotation_residual"] = cf.rotation_residual;
        out["scaling_residual"] = cf.scaling_residual;
        if (cf.k.rows() == 3) {
          try {
            out["spheroid"] = to_string(spheroid_class(cf));
          } catch (const InvalidArgument&) {
            out["spheroid"] = "triaxial";
          }
        }
        return out;
      },
      py::arg("m"), py::arg("tol") = 1e-9);
  m.def(
      "fit_rates",
      [](const SuperopMatrix& s, const std::vector<double>& times, double tol) {
        const RateFit f = fit_rates(s, times, tol);
        py::dict d;
        d["gammas"] = f.gammas;
        d["omegas"] = f.omegas;
        d["block_sizes"] = f.block_sizes;
        d["residual"] = f.residual;
        d["k"] = f.k;
        return d;
      },
      py::arg("sup"), py::arg("times"), py::arg("tol") = 1e-10);

  m.def("linear_entropy", &linear_entropy, py::arg("rho"));
  m.def("von_neumann_entropy", &von_neumann_entropy, py::arg("rho"));
  m.def("relative_entropy", &relative_entropy, py::arg("rho"), py::arg("sigma"));
  m.def(
      "isotropic_entropy_curve",
      [](double gamma, int dim, double s0, const std::vector<double>& times) {
        return isotropic_entropy_curve(gamma, dim, s0, times).values;
      },
      py::arg("gamma"), py::arg("dim"), py::arg("s0"), py::arg("times"));
  m.def(
      "entropy_production_exchange",
      [](const CMat& in, const CMat& out, const CMat& sigma) {
        const EntropySplit s = entropy_production_exchange(in, out, sigma);
        py::dict d;
        d["delta_s"] = s.delta_s;
        d["delta_p"] = s.delta_p;
        d["delta_e"] = s.delta_e;
        return d;
      },
      py::arg("rho_in"), py::arg("rho_out"), py::arg("sigma"));

  m.def("bit_flip", [](double p) { return bit_flip(p).channel.kraus; }, py::arg("p"));
  m.def("phase_flip", [](double p) { return phase_flip(p).channel.kraus; }, py::arg("p"));
  m.def("depolarizing", [](double p) { return depolarizing(p).channel.kraus; }, py::arg("p"));
  m.def("amplitude_damping", [](double p) { return amplitude_damping(p).channel.kraus; }, py::arg("p"));
  m.def(
      "channel_to_affine",
      [](const std::vector<CMat>& kraus) {
        const KrausChannel ch(static_cast<int>(kraus.at(0).rows()), kraus);
        const AffineMap a = channel_to_affine(ch, HermitianBasis(ch.dim));
        return py::make_tuple(a.t, a.c);
      },
      py::arg("kraus"), "Return (T, c) of the Bloch-vector action x -> T x + c.");
  m.def(
      "nmr_generator",
      [](double omega, double gp, double gm, double gz) { return nmr_generator({omega, gp, gm, gz}); },
      py::arg("omega"), py::arg("gamma_plus"), py::arg("gamma_minus"), py::arg("gamma_z"));
  m.def(
      "nmr_matrix",
      [](double omega, double gp, double gm, double gz, double t) { return nmr_matrix({omega, gp, gm, gz}, t).h; },
      py::arg("omega"), py::arg("gamma_plus"), py::arg("gamma_minus"), py::arg("gamma_z"), py::arg("t"));
  m.def("isotropic_generator", &isotropic_generator, py::arg("dim"), py::arg("gamma"));
  m.def("pauli_depolarizing_generator", &pauli_depolarizing_generator, py::arg("gamma"));
}
