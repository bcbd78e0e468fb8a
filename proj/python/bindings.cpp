#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dirsup/bounds.hpp"
#include "dirsup/dickman.hpp"
#include "dirsup/experiment.hpp"
#include "dirsup/montecarlo.hpp"
#include "dirsup/numbertheory.hpp"
#include "dirsup/polynomial.hpp"

namespace py = pybind11;
using namespace dirsup;

namespace {

const DickmanTable& shared_table() {
  static const DickmanTable table(50.0);
  return table;
}

py::dict report_dict(const BoundReport& r) {
  py::dict d;
  d["formula"] = std::string(to_string(r.formula));
  d["N"] = r.N;
  d["tau"] = r.tau;
  d["sigma"] = r.sigma;
  d["value"] = r.value;
  d["constant"] = r.constant;
  d["case"] = r.thm11_case;
  d["valid"] = r.valid;
  d["degenerate"] = r.degenerate;
  d["auxiliary"] = r.auxiliary;
  return d;
}

SignAssignment signs_from(const DirichletSpec& spec, const std::vector<int>& eps) {
  if (eps.size() != spec.size()) throw std::invalid_argument("one sign per term required");
  SignAssignment s;
  for (int e : eps) {
    if (e != 1 && e != -1) throw std::invalid_argument("signs must be +1 or -1");
    s.signs.push_back(static_cast<std::int8_t>(e));
  }
  return s;
}

}  // namespace

PYBIND11_MODULE(_dirsup, m) {
  m.doc() = "Smooth numbers, Dickman rho and suprema of random Dirichlet polynomials";
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("primes", [](Int limit) {
    const PrimeTable t(limit);
    return std::vector<Int>(t.primes().begin(), t.primes().end());
  }, py::arg("limit"));
  m.def("largest_prime_factor", &largest_prime_factor, py::arg("n"));
  m.def("factor_exponents", [](Int n) {
    const PrimeTable t(std::max<Int>(n, 2));
    return factor_exponents(n, t).exponents;
  }, py::arg("n"), "Pairs (ordinal j, exponent) with p_1 = 2.");
  m.def("smooth_set", [](Int N, Int M) { return smooth_set(N, M).members; }, py::arg("N"), py::arg("M"));
  m.def("e_tau", [](Int N, std::size_t tau) {
    const PrimeTable t(std::max<Int>(N, 2));
    return e_tau(N, tau, t).members;
  }, py::arg("N"), py::arg("tau"));
  m.def("l_j", [](Int N, std::size_t tau, std::size_t j) {
    const PrimeTable t(std::max<Int>(N, 2));
    return l_j(N, tau, j, t);
  }, py::arg("N"), py::arg("tau"), py::arg("j"));
  m.def("psi", &psi_count, py::arg("N"), py::arg("M"));
  m.def("divisor_count", &divisor_count, py::arg("n"));

  m.def("rho", [](double u) { return shared_table().rho(u); }, py::arg("u"));
  m.def("log_rho", [](double u) { return shared_table().log_rho(u); }, py::arg("u"));
  m.def("semiasymptotic_alpha", [](double x, double y) {
    const auto a = semiasymptotic_alpha(x, y);
    return py::make_tuple(a.alpha, a.in_zone);
  }, py::arg("x"), py::arg("y"));

  m.def("upper_thm11", [](double N, double tau, double sigma) {
    return report_dict(upper_thm11(N, tau, sigma));
  }, py::arg("N"), py::arg("tau"), py::arg("sigma") = 0.0);
  m.def("lower_thm11", [](double N, double tau, double sigma, double psi_star) {
    return report_dict(lower_thm11(N, tau, sigma, psi_star));
  }, py::arg("N"), py::arg("tau"), py::arg("sigma"), py::arg("psi_star"));
  m.def("l1_bound", [](Int N, std::size_t tau, double sigma) {
    const PrimeTable t(std::max<Int>(N, 2));
    return l1_bound(N, tau, sigma, t).value;
  }, py::arg("N"), py::arg("tau"), py::arg("sigma") = 0.0);

  py::class_<DirichletSpec>(m, "DirichletSpec")
      .def_static("on_e_tau", [](Int N, std::size_t tau, double sigma) {
        const PrimeTable t(std::max<Int>(N, 2));
        return DirichletSpec::on_e_tau(N, tau, sigma, t);
      }, py::arg("N"), py::arg("tau"), py::arg("sigma") = 0.0)
      .def("__len__", &DirichletSpec::size)
      .def_property_readonly("support", [](const DirichletSpec& s) {
        std::vector<Int> out;
        for (const Term& t : s.terms()) out.push_back(t.n);
        return out;
      })
      .def_property_readonly("dimension", &DirichletSpec::dimension)
      .def_property_readonly("l1_norm", &DirichletSpec::l1_norm);

  m.def("eval_line", [](const DirichletSpec& spec, const std::vector<int>& eps, double t) {
    return eval_line(spec, signs_from(spec, eps), t);
  }, py::arg("spec"), py::arg("signs"), py::arg("t"));
  m.def("exact_sup_Z", [](const DirichletSpec& spec, const std::vector<int>& eps, std::size_t tau) {
    return exact_sup_Z(spec, signs_from(spec, eps), tau);
  }, py::arg("spec"), py::arg("signs"), py::arg("tau"));
  m.def("sup_torus", [](const DirichletSpec& spec, const std::vector<int>& eps, std::size_t budget,
                        std::size_t refine) {
    const auto r = sup_torus(spec, signs_from(spec, eps), budget, refine);
    return py::make_tuple(r.value, r.gap);
  }, py::arg("spec"), py::arg("signs"), py::arg("grid_budget") = 1024, py::arg("refine_steps") = 3);
  m.def("sample_signs", [](const DirichletSpec& spec, std::uint64_t seed, std::uint64_t rep) {
    const auto s = sample_signs(spec, seed, rep);
    return std::vector<int>(s.signs.begin(), s.signs.end());
  }, py::arg("spec"), py::arg("seed"), py::arg("replicate"));

  m.def("estimate_esup", [](Int N, std::size_t tau, double sigma, const std::string& method,
                            std::size_t reps, std::uint64_t seed, unsigned threads) {
    const PrimeTable t(std::max<Int>(N, 2));
    const auto spec = DirichletSpec::on_e_tau(N, tau, sigma, t);
    EstimateOptions options;
    options.threads = threads;
    py::gil_scoped_release release;
    const auto rec = estimate_esup(spec, tau, parse_method(method), reps, seed, options);
    return to_json_line(rec);
  }, py::arg("N"), py::arg("tau"), py::arg("sigma") = 0.0, py::arg("method") = "z-exact",
     py::arg("reps") = 100, py::arg("seed") = 0, py::arg("threads") = 1,
     "One JSON line with the estimate and its certificates.");

  m.def("run_experiment", [](const std::string& config_json, unsigned threads) {
    const auto config = ExperimentConfig::parse(config_json);
    std::vector<std::string> lines;
    {
      py::gil_scoped_release release;
      for (const ResultRow& r : run_experiment(config, threads)) lines.push_back(to_json_line(r));
    }
    return lines;
  }, py::arg("config_json"), py::arg("threads") = 1);
}
