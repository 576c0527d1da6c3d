#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "loscap/channel.hpp"
#include "loscap/geometry.hpp"
#include "loscap/mimo.hpp"
#include "loscap/planner.hpp"
#include "loscap/protocol.hpp"
#include "loscap/spectral.hpp"
#include "loscap/sweep.hpp"
#include "loscap/version.hpp"

namespace py = pybind11;
using namespace loscap;

namespace {

std::vector<Point> to_points(const std::vector<std::pair<double, double>>& xy) {
  std::vector<Point> pts;
  pts.reserve(xy.size());
  for (const auto& [x, y] : xy) pts.push_back({x, y});
  return pts;
}

std::vector<std::pair<double, double>> from_points(const std::vector<Point>& pts) {
  std::vector<std::pair<double, double>> xy;
  xy.reserve(pts.size());
  for (const auto& p : pts) xy.emplace_back(p.x, p.y);
  return xy;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "LOS-channel capacity scaling core";
  m.attr("__version__") = kVersion;

  py::class_<Placement>(m, "Placement")
      .def_property_readonly("points", [](const Placement& p) { return from_points(p.points); })
      .def_readonly("side", &Placement::side)
      .def_readonly("seed", &Placement::seed);

  py::class_<ClusterPair>(m, "ClusterPair")
      .def_static("sample", &ClusterPair::sample, py::arg("n"), py::arg("d"), py::arg("l"),
                  py::arg("seed"))
      .def_readonly("D", &ClusterPair::D)
      .def_readonly("L", &ClusterPair::L)
      .def_readonly("N", &ClusterPair::N)
      .def_property_readonly("tx", [](const ClusterPair& p) { return from_points(p.tx); })
      .def_property_readonly("rx", [](const ClusterPair& p) { return from_points(p.rx); });

  py::enum_<Regime>(m, "Regime").value("dense", Regime::Dense).value("extended", Regime::Extended);

  py::class_<NetworkConfig>(m, "NetworkConfig")
      .def(py::init([](std::size_t n, Regime regime, double lam, double alpha, double P, double G,
                       double mu, int Q) {
             return NetworkConfig{n, regime, lam, alpha, P, G, mu, Q};
           }),
           py::arg("n") = 1, py::arg("regime") = Regime::Dense, py::arg("lam") = 1e-3,
           py::arg("alpha") = 2.0, py::arg("P") = 1.0, py::arg("G") = 1.0, py::arg("mu") = 10.0,
           py::arg("Q") = 3)
      .def_readwrite("n", &NetworkConfig::n)
      .def_readwrite("lam", &NetworkConfig::lambda)
      .def_readwrite("alpha", &NetworkConfig::alpha)
      .def_readwrite("P", &NetworkConfig::P)
      .def_readwrite("G", &NetworkConfig::G);

  m.def("place_uniform", &place_uniform, py::arg("n"), py::arg("side"), py::arg("seed"));
  m.def("tdma9_slot", &tdma9_slot, py::arg("row"), py::arg("col"));
  m.def(
      "classify_region",
      [](std::pair<double, double> zu, std::pair<double, double> zv, const ClusterPair& pair) {
        return classify_region({zu.first, zu.second}, {zv.first, zv.second}, pair) == Region::Gamma1
                   ? 1
                   : 2;
      },
      py::arg("zu"), py::arg("zv"), py::arg("pair"), "1 for Gamma1, 2 for Gamma2");
  m.def(
      "angle_phi",
      [](std::pair<double, double> zu, std::pair<double, double> zv, std::pair<double, double> zs) {
        return angle_phi({zu.first, zu.second}, {zv.first, zv.second}, {zs.first, zs.second});
      },
      py::arg("zu"), py::arg("zv"), py::arg("zs"));
  m.def(
      "phi_corner_min",
      [](std::pair<double, double> zu, std::pair<double, double> zv, const ClusterPair& pair) {
        return phi_corner_min({zu.first, zu.second}, {zv.first, zv.second}, pair);
      },
      py::arg("zu"), py::arg("zv"), py::arg("pair"));

  m.def("friis_gain", &friis_gain, py::arg("lam"), py::arg("gl"));
  m.def("gl_dense", &gl_dense, py::arg("lam"), py::arg("n"));
  m.def("gl_extended", &gl_extended, py::arg("lam"));
  m.def("channel_gain", &channel_gain, py::arg("d"), py::arg("config"));
  m.def(
      "channel_matrix",
      [](const std::vector<std::pair<double, double>>& tx,
         const std::vector<std::pair<double, double>>& rx, const NetworkConfig& cfg) {
        const auto txp = to_points(tx), rxp = to_points(rx);
        return channel_matrix(txp, rxp, cfg).entries;
      },
      py::arg("tx"), py::arg("rx"), py::arg("config"));
  m.def(
      "cluster_channel",
      [](const ClusterPair& pair, const NetworkConfig& cfg) {
        return channel_matrix(pair.tx, pair.rx, cfg).entries;
      },
      py::arg("pair"), py::arg("config"));

  m.def("mutual_information_gaussian", &mutual_information_gaussian, py::arg("h"),
        py::arg("sigma"), py::arg("p"));
  m.def("dof_limit_M", &dof_limit_M, py::arg("d"), py::arg("l"), py::arg("lam"));
  m.def("rho_moments", &rho_moments, py::arg("sigma"), py::arg("n"), py::arg("l"), py::arg("g"),
        py::arg("p"), py::arg("alpha") = 2.0);

  py::class_<MimoBound>(m, "MimoBound")
      .def_readonly("value", &MimoBound::value)
      .def_readonly("delta", &MimoBound::delta)
      .def_readonly("M", &MimoBound::M)
      .def_readonly("prefactor", &MimoBound::prefactor)
      .def_readonly("log_argument", &MimoBound::log_argument);

  m.def(
      "theorem2_bound",
      [](const Eigen::MatrixXcd& H, const Eigen::MatrixXcd& sigma, double delta, std::size_t N,
         double D, double L, double lam, double G, double P, double alpha) {
        ChannelMatrix cm;
        cm.entries = H;
        cm.lambda = lam;
        cm.alpha = alpha;
        cm.G = G;
        const auto interference = InterferenceModel::from_sigma(sigma, L, G, P, alpha);
        return theorem2_bound(cm, interference, delta, MimoGeometry{N, D, L, lam, G, P, alpha});
      },
      py::arg("h"), py::arg("sigma"), py::arg("delta"), py::arg("n"), py::arg("d"), py::arg("l"),
      py::arg("lam"), py::arg("g") = 1.0, py::arg("p") = 1.0, py::arg("alpha") = 2.0);

  m.def(
      "paley_zygmund_lower",
      [](const std::vector<double>& values, double delta) {
        return paley_zygmund_lower(values, delta);
      },
      py::arg("values"), py::arg("delta"));
  m.def(
      "trace_sq_inequality",
      [](const std::vector<Eigen::MatrixXcd>& mats) { return trace_sq_inequality(mats); },
      py::arg("matrices"));

  m.def(
      "q_term",
      [](const ClusterPair& pair, std::size_t i, std::size_t j, std::size_t k, std::size_t l,
         double lam, double alpha) { return q_term(pair, i, j, k, l, lam, alpha).value; },
      py::arg("pair"), py::arg("i"), py::arg("j"), py::arg("k"), py::arg("l"), py::arg("lam"),
      py::arg("alpha") = 2.0);
  m.def("gamma_trace_moments", &gamma_trace_moments, py::arg("f"));
  m.def("full_sample_mean", &full_sample_mean, py::arg("pair"), py::arg("lam"),
        py::arg("alpha") = 2.0);

  py::class_<DecayPoint>(m, "DecayPoint")
      .def_readonly("M", &DecayPoint::M)
      .def_readonly("lam", &DecayPoint::lambda)
      .def_readonly("mean", &DecayPoint::mean)
      .def_readonly("half_width", &DecayPoint::half_width)
      .def_readonly("trials", &DecayPoint::trials);
  m.def("estimate_EQ", &estimate_EQ, py::arg("d"), py::arg("l"), py::arg("lam"), py::arg("alpha"),
        py::arg("trials"), py::arg("seed"));
  m.def(
      "decay_regression",
      [](const std::vector<std::pair<double, double>>& points) {
        DecaySeries s;
        for (const auto& [M, mean] : points) {
          DecayPoint p;
          p.M = M;
          p.mean = mean;
          s.push_back(p);
        }
        return decay_regression(s);
      },
      py::arg("m_mean_pairs"));

  m.def("g_k", &g_k, py::arg("n_prev"), py::arg("n_cur"), py::arg("n"), py::arg("lam"));
  m.def("throughput_recursion", &throughput_recursion, py::arg("t_prev"), py::arg("n_prev"),
        py::arg("n_cur"), py::arg("m"), py::arg("r_k"), py::arg("q"));
  m.def("base_throughput", &base_throughput, py::arg("n0"));
  m.def("rate_rk", &rate_rk, py::arg("g_k"), py::arg("n"));
  m.def("lambda_threshold", &lambda_threshold, py::arg("v"), py::arg("h"));
  m.def("regime_classifier", &regime_classifier, py::arg("n"), py::arg("lam"), py::arg("h"));
  m.def("delta_tau", &delta_tau, py::arg("u"), py::arg("h"));
  m.def("bursty_adjustment", &bursty_adjustment, py::arg("n"), py::arg("alpha"));

  py::class_<HierarchyPlan>(m, "HierarchyPlan")
      .def_readonly("h", &HierarchyPlan::h)
      .def_readonly("regime_index", &HierarchyPlan::regime_index)
      .def_readonly("n_seq", &HierarchyPlan::n_seq)
      .def_readonly("m_seq", &HierarchyPlan::m_seq)
      .def_readonly("rates", &HierarchyPlan::rates)
      .def_readonly("throughputs", &HierarchyPlan::throughputs);
  m.def("optimal_cluster_sizes", &optimal_cluster_sizes, py::arg("n"), py::arg("lam"),
        py::arg("h"), py::arg("q") = 3, py::arg("mu") = 10.0);

  py::class_<ScalingPrediction>(m, "ScalingPrediction")
      .def_readonly("regime_index", &ScalingPrediction::regime_index)
      .def_readonly("delta", &ScalingPrediction::delta)
      .def_readonly("tau", &ScalingPrediction::tau)
      .def_readonly("lower_bound", &ScalingPrediction::lower_bound)
      .def_readonly("upper_bound", &ScalingPrediction::upper_bound)
      .def_readonly("dof_limited", &ScalingPrediction::dof_limited)
      .def_readonly("lambda_effective", &ScalingPrediction::lambda_effective);
  m.def("predicted_throughput", &predicted_throughput, py::arg("n"), py::arg("lam"), py::arg("h"),
        py::arg("regime"), py::arg("alpha") = 2.0, py::arg("mu") = 10.0);

  m.def("subphase_pairing", &subphase_pairing, py::arg("n_prev"), py::arg("m"));
  m.def("relay_set", &relay_set, py::arg("n_prev"), py::arg("s"), py::arg("m"));
  py::class_<LevelSim>(m, "LevelSim")
      .def_readonly("throughput", &LevelSim::throughput)
      .def_readonly("conserved", &LevelSim::conserved)
      .def_readonly("tdma_valid", &LevelSim::tdma_valid)
      .def_property_readonly("phase1", [](const LevelSim& s) { return s.schedule.phase1; })
      .def_property_readonly("phase2", [](const LevelSim& s) { return s.schedule.phase2; })
      .def_property_readonly("phase3", [](const LevelSim& s) { return s.schedule.phase3; });
  m.def("simulate_level", &simulate_level, py::arg("k"), py::arg("plan"), py::arg("q"),
        py::arg("ceiled") = false);
}
