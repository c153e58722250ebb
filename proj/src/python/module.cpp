#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "haarfisher/ansatz.hpp"
#include "haarfisher/error.hpp"
#include "haarfisher/fisher.hpp"
#include "haarfisher/haar.hpp"
#include "haarfisher/montecarlo.hpp"
#include "haarfisher/realrep.hpp"
#include "haarfisher/tails.hpp"

namespace py = pybind11;
using namespace haarfisher;

namespace {

SampleOptions make_options(unsigned workers, double prob_floor, bool keep_samples) {
  SampleOptions o;
  o.workers = workers;
  o.prob_floor = prob_floor;
  o.keep_samples = keep_samples;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fisher information under Haar-random measurement bases";

  // Translators run newest first, so the base class goes in before the subclasses.
  const auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DegenerateFamilyError>(m, "DegenerateFamilyError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());

  // linalg / realrep
  m.def("project_onto_span",
        [](const std::vector<RealVector>& vectors, double drop_tol) {
          return project_onto_span(vectors, drop_tol);
        },
        py::arg("vectors"), py::arg("drop_tol") = kDefaultDropTol);
  m.def("hermitian_expm", py::overload_cast<const ComplexMatrix&, double>(&hermitian_expm),
        py::arg("h"), py::arg("t"));
  m.def("phi_vector", &phi_vector);
  m.def("phi_matrix", &phi_matrix);
  m.def("symplectic_j", &symplectic_j);

  // haar
  m.def("sample_haar_unitary",
        [](Index n, std::uint64_t master_seed, std::uint64_t index, bool phase_fix) {
          return sample_haar_unitary(n, substream(master_seed, index),
                                     phase_fix ? PhaseFix::kApply : PhaseFix::kSkip);
        },
        py::arg("n"), py::arg("master_seed"), py::arg("index") = 0, py::arg("phase_fix") = true);

  // ansatz
  py::class_<StateWithJacobian>(m, "StateWithJacobian")
      .def_readonly("state", &StateWithJacobian::state)
      .def_readonly("jacobian", &StateWithJacobian::jacobian);

  py::class_<ProductExponentialAnsatz>(m, "ProductExponentialAnsatz")
      .def_static("seeded", &ProductExponentialAnsatz::seeded, py::arg("n"), py::arg("m"),
                  py::arg("seed"))
      .def_static("from_generators", &ProductExponentialAnsatz::from_generators,
                  py::arg("generators"), py::arg("base_state"))
      .def_property_readonly("dim", &ProductExponentialAnsatz::dim)
      .def_property_readonly("num_params", &ProductExponentialAnsatz::num_params)
      .def_property_readonly("seed", &ProductExponentialAnsatz::seed)
      .def_property_readonly("generators", &ProductExponentialAnsatz::generators)
      .def_property_readonly("base_state", &ProductExponentialAnsatz::base_state)
      .def("evaluate", &ProductExponentialAnsatz::evaluate, py::arg("theta"))
      .def("state", &ProductExponentialAnsatz::state, py::arg("theta"));
  m.def("build_ansatz", &build_ansatz, py::arg("n"), py::arg("m"), py::arg("seed"));
  m.def("jacobian_fd", &jacobian_fd, py::arg("ansatz"), py::arg("theta"), py::arg("step"));
  m.def("seeded_uniform_theta", &seeded_uniform_theta, py::arg("m"), py::arg("seed"));

  // fisher
  py::class_<Qgt>(m, "Qgt")
      .def_readonly("matrix", &Qgt::matrix)
      .def_readonly("real_part", &Qgt::real_part)
      .def_readonly("imag_part", &Qgt::imag_part);
  py::class_<Cfim>(m, "Cfim")
      .def_readonly("matrix", &Cfim::matrix)
      .def_readonly("min_prob", &Cfim::min_prob)
      .def_readonly("skipped_outcomes", &Cfim::skipped_outcomes);
  m.def("qgt", &qgt);
  m.def("qfim_realrep", &qfim_realrep);
  m.def("measurement_probabilities", &measurement_probabilities, py::arg("psi"), py::arg("u"));
  m.def("cfim_definition", &cfim_definition, py::arg("swj"), py::arg("u"),
        py::arg("prob_floor") = kDefaultProbFloor);
  m.def("cfim_projection", &cfim_projection, py::arg("swj"), py::arg("u"),
        py::arg("prob_floor") = kDefaultProbFloor);
  m.def("variance_predictor", &variance_predictor, py::arg("qgt"), py::arg("n"));
  m.def("projection_sum_check", &projection_sum_check, py::arg("psi"), py::arg("samples"),
        py::arg("master_seed"), py::arg("workers") = 0,
        py::call_guard<py::gil_scoped_release>());

  // montecarlo
  py::class_<ErrorMetrics>(m, "ErrorMetrics")
      .def_readonly("rel_max", &ErrorMetrics::rel_max)
      .def_readonly("rel_frob", &ErrorMetrics::rel_frob)
      .def_readonly("rel_spec", &ErrorMetrics::rel_spec);
  m.def("error_metrics", &error_metrics, py::arg("f"), py::arg("q"));
  m.def("empirical_variance",
        [](const std::vector<RealMatrix>& samples) { return empirical_variance(samples); });
  py::class_<SandwichResult>(m, "SandwichResult")
      .def_readonly("epsilon", &SandwichResult::epsilon)
      .def_readonly("passed", &SandwichResult::passed)
      .def_readonly("min_ratio", &SandwichResult::min_ratio)
      .def_readonly("max_ratio", &SandwichResult::max_ratio)
      .def_readonly("rank_used", &SandwichResult::rank_used);
  m.def("sandwich_check", &sandwich_check, py::arg("f"), py::arg("q"), py::arg("epsilon"),
        py::arg("rank_tol") = kDefaultRankTol);

  py::class_<EstimationReport>(m, "EstimationReport")
      .def_readonly("n", &EstimationReport::n)
      .def_readonly("m", &EstimationReport::m)
      .def_readonly("k_samples", &EstimationReport::k_samples)
      .def_readonly("master_seed", &EstimationReport::master_seed)
      .def_readonly("theta", &EstimationReport::theta)
      .def_readonly("qfim", &EstimationReport::qfim)
      .def_readonly("mean_cfim", &EstimationReport::mean_cfim)
      .def_readonly("empirical_variance", &EstimationReport::empirical_variance)
      .def_readonly("predicted_variance", &EstimationReport::predicted_variance)
      .def_readonly("rel_err_max", &EstimationReport::rel_err_max)
      .def_readonly("rel_err_frob", &EstimationReport::rel_err_frob)
      .def_readonly("per_sample_rel_frob", &EstimationReport::per_sample_rel_frob)
      .def_readonly("sandwich_epsilon", &EstimationReport::sandwich_epsilon)
      .def_readonly("samples", &EstimationReport::samples);
  m.def("estimate_qfim",
        [](const ProductExponentialAnsatz& ansatz, const RealVector& theta, std::uint64_t k,
           std::uint64_t seed, unsigned workers, double prob_floor, bool keep_samples) {
          return estimate_qfim(ansatz, theta, k, seed, make_options(workers, prob_floor, keep_samples));
        },
        py::arg("ansatz"), py::arg("theta"), py::arg("samples"), py::arg("master_seed"),
        py::arg("workers") = 0, py::arg("prob_floor") = kDefaultProbFloor,
        py::arg("keep_samples") = false, py::call_guard<py::gil_scoped_release>());

  // tails
  m.def("sample_rel_errors",
        [](Index n, Index m_params, std::uint64_t k, std::uint64_t seed,
           std::optional<RealVector> theta, unsigned workers) {
          ThetaPolicy policy = SeededUniformTheta{};
          if (theta) policy = *theta;
          return sample_rel_errors(n, m_params, policy, k, seed, make_options(workers, kDefaultProbFloor, false));
        },
        py::arg("n"), py::arg("m"), py::arg("samples"), py::arg("master_seed"),
        py::arg("theta") = py::none(), py::arg("workers") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("histogram",
        [](const std::vector<double>& samples, std::size_t bins) {
          std::vector<std::tuple<double, double, std::uint64_t>> out;
          for (const auto& b : histogram(samples, bins)) out.emplace_back(b.left, b.right, b.count);
          return out;
        },
        py::arg("samples"), py::arg("num_bins"));
  m.def("empirical_ccdf", [](const std::vector<double>& samples) {
    std::vector<std::pair<double, double>> out;
    for (const auto& p : empirical_ccdf(samples)) out.emplace_back(p.t, p.ccdf);
    return out;
  });

  py::class_<TailFit>(m, "TailFit")
      .def_readonly("n", &TailFit::n)
      .def_readonly("num_samples", &TailFit::num_samples)
      .def_readonly("c_regression", &TailFit::c_regression)
      .def_readonly("c_adjusted", &TailFit::c_adjusted)
      .def_readonly("intercept", &TailFit::intercept)
      .def_readonly("r_squared", &TailFit::r_squared)
      .def_readonly("percentile_cutoff", &TailFit::percentile_cutoff)
      .def_readonly("cutoff_t", &TailFit::cutoff_t);
  m.def("fit_tail_constant",
        [](const std::vector<double>& samples, Index n, double cutoff, double band_lo, double band_hi) {
          return fit_tail_constant(samples, n, 0, {cutoff, band_lo, band_hi});
        },
        py::arg("samples"), py::arg("n"), py::arg("percentile_cutoff") = 99.99,
        py::arg("band_lo") = 1e-4, py::arg("band_hi") = 0.5);
  m.def("max_norm_tail_bound", &max_norm_tail_bound, py::arg("t"), py::arg("n"), py::arg("m"));
  m.def("frobenius_tail_bound",
        [](double t, Index n, Index m_params) {
          const auto b = frobenius_tail_bound(t, n, m_params);
          return std::make_pair(b.threshold, b.probability);
        },
        py::arg("t"), py::arg("n"), py::arg("m"));
  m.def("sandwich_bound",
        [](double eps, Index n, Index m_params) {
          const auto b = sandwich_bound(eps, n, m_params);
          return py::dict(py::arg("precondition_met") = b.precondition_met,
                          py::arg("failure_exponent") = b.failure_exponent,
                          py::arg("probability") = b.probability);
        },
        py::arg("epsilon"), py::arg("n"), py::arg("m"));
}
