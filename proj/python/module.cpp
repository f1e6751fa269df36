#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mmvd/csv.hpp"
#include "mmvd/errors.hpp"
#include "mmvd/nulldist.hpp"
#include "mmvd/permtest.hpp"
#include "mmvd/simgen.hpp"

namespace py = pybind11;
using namespace mmvd;

namespace {

std::vector<FunctionalSample> samples_from_arrays(
    const std::vector<double>& grid_points,
    const std::vector<Eigen::MatrixXd>& groups) {
  Grid grid(grid_points);
  std::vector<FunctionalSample> samples;
  samples.reserve(groups.size());
  for (const auto& g : groups) samples.emplace_back(grid, g);
  return samples;
}

}  // namespace

PYBIND11_MODULE(_mmvd, m) {
  m.doc() = "k-group kernel homogeneity test for functional data";

  py::register_exception<internal_error>(m, "InternalError");

  m.def("make_equispaced_grid", [](int n) {
    return make_equispaced_grid(n).points();
  });

  m.def(
      "l2_sq_dist",
      [](const Eigen::VectorXd& f, const Eigen::VectorXd& g,
         const std::vector<double>& grid) {
        return l2_sq_dist(f, g, Grid(grid));
      },
      py::arg("f"), py::arg("g"), py::arg("grid"));

  m.def(
      "build_gram",
      [](const std::vector<double>& grid,
         const std::vector<Eigen::MatrixXd>& groups, double gamma) {
        const auto gram = build_gram(samples_from_arrays(grid, groups),
                                     KernelSpec{KernelFamily::Gaussian, gamma});
        return gram.full();
      },
      py::arg("grid"), py::arg("groups"), py::arg("gamma") = 0.5,
      "Pooled Gaussian-kernel Gram matrix over the given curve groups");

  m.def(
      "mmvd_statistic",
      [](const std::vector<double>& grid,
         const std::vector<Eigen::MatrixXd>& groups, double gamma) {
        const auto samples = samples_from_arrays(grid, groups);
        const auto gram =
            build_gram(samples, KernelSpec{KernelFamily::Gaussian, gamma});
        const auto stat =
            mmvd_statistic(gram, GroupWeights::proportional(gram.sizes()));
        py::dict out;
        out["value"] = stat.value;
        out["pair_mvd_sq"] = stat.pair_mvd_sq;
        out["hs_norms"] = stat.hs_norms;
        return out;
      },
      py::arg("grid"), py::arg("groups"), py::arg("gamma") = 0.5);

  m.def(
      "permutation_test",
      [](const std::vector<double>& grid,
         const std::vector<Eigen::MatrixXd>& groups, double gamma,
         int permutations, std::uint64_t seed, const std::string& statistic) {
        const auto samples = samples_from_arrays(grid, groups);
        const auto gram =
            build_gram(samples, KernelSpec{KernelFamily::Gaussian, gamma});
        PermutationPlan plan;
        plan.n_permutations = permutations;
        plan.master_seed = seed;
        plan.statistic =
            statistic == "gmmd" ? StatisticKind::GMMD : StatisticKind::MMVD;
        const auto result = permutation_test(
            gram, GroupWeights::proportional(gram.sizes()), plan);
        py::dict out;
        out["statistic"] = result.observed.value;
        out["p_value"] = result.p_value;
        out["replicates"] = result.replicate_values;
        return out;
      },
      py::arg("grid"), py::arg("groups"), py::arg("gamma") = 0.5,
      py::arg("permutations") = 999, py::arg("seed") = 0,
      py::arg("statistic") = "mmvd");

  m.def(
      "estimate_spectrum",
      [](const std::vector<double>& grid,
         const std::vector<Eigen::MatrixXd>& groups, double gamma) {
        const auto gram = build_gram(samples_from_arrays(grid, groups),
                                     KernelSpec{KernelFamily::Gaussian, gamma});
        const auto spectrum = estimate_spectrum(gram);
        return py::make_tuple(spectrum.eigenvalues, spectrum.rho);
      },
      py::arg("grid"), py::arg("groups"), py::arg("gamma") = 0.5);

  m.def(
      "sample_null",
      [](const std::vector<double>& eigenvalues, const std::vector<double>& rho,
         int n_draws, std::uint64_t seed) {
        NullSpectrum spectrum{eigenvalues, rho};
        return sample_null(spectrum, static_cast<int>(rho.size()), n_draws,
                           seed)
            .draws;
      },
      py::arg("eigenvalues"), py::arg("rho"), py::arg("n_draws"),
      py::arg("seed") = 0);

  m.def(
      "generate_model",
      [](int model, int n, std::uint64_t seed, const std::string& exp_param) {
        ModelSpec spec;
        spec.model = static_cast<ModelId>(model);
        spec.group_sizes = {n, n, n};
        spec.seed = seed;
        spec.exp_param =
            exp_param == "rate" ? ExpParam::Rate : ExpParam::Mean;
        const auto samples = generate(spec);
        std::vector<Eigen::MatrixXd> out;
        for (const auto& s : samples) out.push_back(s.curves());
        return py::make_tuple(spec.grid.points(), out);
      },
      py::arg("model"), py::arg("n"), py::arg("seed") = 0,
      py::arg("exp_param") = "mean");
}
