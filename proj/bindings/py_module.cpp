// Python bindings for the main pipeline operations.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spectemp/diffusion.hpp"
#include "spectemp/filter_id_linear.hpp"
#include "spectemp/filter_id_psd.hpp"
#include "spectemp/filter_id_symmetric.hpp"
#include "spectemp/graph.hpp"
#include "spectemp/templates.hpp"
#include "spectemp/topology.hpp"

namespace py = pybind11;
using namespace spectemp;

namespace {

std::vector<CovariancePair> make_pairs(const std::vector<std::pair<Mat, Mat>>& raw, int samples) {
  std::vector<CovariancePair> pairs;
  for (const auto& [cx, cy] : raw) pairs.push_back({cx, cy, samples});
  return pairs;
}

}  // namespace

PYBIND11_MODULE(spectemp_core, m) {
  m.doc() = "graph topology inference from diffused signals";

  m.def("erdos_renyi",
        [](int n, double p, std::uint64_t seed) { return erdos_renyi(n, p, seed).matrix; },
        py::arg("n"), py::arg("p"), py::arg("seed"),
        "connected Erdos-Renyi adjacency matrix");

  m.def("normalized_laplacian", &normalized_laplacian, py::arg("adjacency"));

  m.def("shift_from_normalized_laplacian",
        [](const Mat& ln) { return shift_from_normalized_laplacian(ln).matrix; },
        py::arg("ln"));

  m.def("normalize_scale", &normalize_scale, py::arg("s"), py::arg("scale_node") = 0);

  m.def("recovery_error", &recovery_error, py::arg("s_est"), py::arg("s_true"));

  m.def("fir_filter",
        [](const Mat& s, const Vec& h) {
          return fir_filter(Gso{s, GsoKind::generic_symmetric}, h).matrix;
        },
        py::arg("shift"), py::arg("coeffs"), "polynomial graph filter sum_l h_l S^l");

  m.def("propagate_covariance",
        [](const Mat& h, const Mat& cx) {
          return propagate_covariance(GraphFilter{h, std::nullopt, FilterKind::raw}, cx);
        },
        py::arg("h"), py::arg("c_x"));

  m.def("random_spd_covariance", &random_spd_covariance, py::arg("n"), py::arg("condition_cap"),
        py::arg("seed"));

  m.def("sample_covariance", &sample_covariance, py::arg("signals"));

  m.def("identify_ls",
        [](const Mat& x, const Mat& y) { return identify_ls(x, y).matrix; },
        py::arg("x"), py::arg("y"), "symmetric least-squares filter from input-output pairs");

  m.def("identify_ls_asymmetric",
        [](const Mat& x, const Mat& y) { return identify_ls_asymmetric(x, y).matrix; },
        py::arg("x"), py::arg("y"));

  m.def("identify_psd_single",
        [](const Mat& cx, const Mat& cy) {
          return identify_psd_single(CovariancePair{cx, cy, 0}).matrix;
        },
        py::arg("c_x"), py::arg("c_y"), "closed-form PSD filter from one covariance pair");

  m.def("identify_psd_multi",
        [](const std::vector<std::pair<Mat, Mat>>& pairs) {
          return identify_psd_multi(make_pairs(pairs, 0)).filter.matrix;
        },
        py::arg("pairs"), "PSD filter pooled over covariance pairs");

  m.def("pgd_identify",
        [](const std::vector<std::pair<Mat, Mat>>& pairs, int restarts, int max_iters,
           std::uint64_t seed) {
          PgdConfig config;
          config.restarts = restarts;
          config.max_iters = max_iters;
          PgdResult r = pgd_identify(make_pairs(pairs, 0), config, seed);
          return py::make_tuple(r.filter.matrix, r.objective, r.converged);
        },
        py::arg("pairs"), py::arg("restarts") = 10, py::arg("max_iters") = 10000,
        py::arg("seed") = 17,
        "projected-gradient symmetric filter; returns (H, objective, converged)");

  m.def("sdr_identify",
        [](const std::vector<std::pair<Mat, Mat>>& pairs, int draws, std::uint64_t seed) {
          SdrResult r = sdr_identify(make_pairs(pairs, 0), draws, seed);
          return py::make_tuple(r.filter.matrix, r.sdp_objective, r.sdp_converged);
        },
        py::arg("pairs"), py::arg("draws") = 100, py::arg("seed") = 17,
        "semidefinite-relaxation symmetric filter; returns (H, sdp_objective, converged)");

  m.def("recover_shift",
        [](const Mat& h, double epsilon, const std::string& constraint, int max_iters) {
          RecoveryProblem problem;
          problem.templates = templates_from_matrix(h);
          problem.epsilon = epsilon;
          if (constraint == "adjacency")
            problem.constraint_set.variant = ConstraintVariant::adjacency;
          else if (constraint == "normalized-laplacian")
            problem.constraint_set.variant = ConstraintVariant::normalized_laplacian;
          else
            throw std::invalid_argument("constraint must be adjacency or normalized-laplacian");
          problem.options.max_iters = max_iters;
          RecoveryResult r = recover_shift(problem);
          return py::make_tuple(r.s, r.lambda, r.violation, r.feasible);
        },
        py::arg("filter_matrix"), py::arg("epsilon") = 0.0, py::arg("constraint") = "adjacency",
        py::arg("max_iters") = 50000,
        "sparse shift operator from a filter's eigenbasis; returns (S, lambda, violation, feasible)");
}
