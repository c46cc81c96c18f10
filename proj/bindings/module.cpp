#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zubov/config.hpp"
#include "zubov/contour.hpp"
#include "zubov/dynamics.hpp"
#include "zubov/errors.hpp"
#include "zubov/fdm.hpp"
#include "zubov/gradcheck.hpp"
#include "zubov/grid.hpp"
#include "zubov/grid_io.hpp"
#include "zubov/losses.hpp"
#include "zubov/net.hpp"
#include "zubov/parallel.hpp"
#include "zubov/rollout.hpp"
#include "zubov/sampling.hpp"
#include "zubov/trainer.hpp"

namespace py = pybind11;
using namespace zubov;

namespace {

py::dict history_to_dict(const TrainHistory& history) {
  const std::size_t n = history.epochs.size();
  py::list iters(n), epochs(n), total(n), boundary(n), residual(n), data(n);
  for (std::size_t i = 0; i < n; ++i) {
    const EpochRecord& r = history.epochs[i];
    iters[i] = r.iteration;
    epochs[i] = r.epoch;
    total[i] = r.total;
    boundary[i] = r.boundary;
    residual[i] = r.residual;
    data[i] = r.data;
  }
  py::dict d;
  d["iteration"] = iters;
  d["epoch"] = epochs;
  d["total"] = total;
  d["boundary"] = boundary;
  d["residual"] = residual;
  d["data"] = data;
  d["aborted"] = history.aborted;
  d["diagnostic"] = history.diagnostic;
  py::list anchor_mean, anchor_diverged;
  for (const IterationRecord& r : history.iterations) {
    anchor_mean.append(r.anchor_mean_v_hat);
    anchor_diverged.append(r.anchor_diverged_fraction);
  }
  d["anchor_mean_v_hat"] = anchor_mean;
  d["anchor_diverged_fraction"] = anchor_diverged;
  return d;
}

Mat grid_values_matrix(const ValueGrid& g) {
  Mat out(g.resolution[0], g.resolution[1]);
  for (int i0 = 0; i0 < g.resolution[0]; ++i0) {
    for (int i1 = 0; i1 < g.resolution[1]; ++i1) out(i0, i1) = g.at(i0, i1);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Worst-case region-of-attraction toolkit";

  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<ParseError>(m, "ConfigParseError", PyExc_ValueError);

  py::class_<Domain>(m, "Domain")
      .def(py::init([](const Vec& lower, const Vec& upper) {
             Domain d{lower, upper};
             d.validate();
             return d;
           }),
           py::arg("lower"), py::arg("upper"))
      .def_readonly("lower", &Domain::lower)
      .def_readonly("upper", &Domain::upper)
      .def("contains", &Domain::contains)
      .def("max_radius", &Domain::max_radius);

  py::class_<DisturbanceBox>(m, "DisturbanceBox")
      .def_readonly("lower", &DisturbanceBox::lower)
      .def_readonly("upper", &DisturbanceBox::upper)
      .def("contains", &DisturbanceBox::contains, py::arg("delta"),
           py::arg("tol") = 0.0)
      .def("vertices", &DisturbanceBox::vertices);

  py::class_<PerturbedSystem>(m, "PerturbedSystem")
      .def_readonly("name", &PerturbedSystem::name)
      .def_readonly("state_dim", &PerturbedSystem::state_dim)
      .def_readonly("dist_dim", &PerturbedSystem::dist_dim)
      .def_readonly("disturbance", &PerturbedSystem::disturbance)
      .def_readonly("default_domain", &PerturbedSystem::default_domain)
      .def("rhs", &PerturbedSystem::rhs, py::arg("x"), py::arg("delta"))
      .def("drift", [](const PerturbedSystem& s, const Vec& x) { return s.drift(x); })
      .def("channel",
           [](const PerturbedSystem& s, int j, const Vec& x) {
             if (j < 0 || j >= s.dist_dim) throw ArgumentError("bad channel index");
             return s.channels[j](x);
           })
      .def("cost", [](const PerturbedSystem& s, const Vec& x, const Vec& d) {
        return s.running_cost(x, d);
      });

  m.def("make_van_der_pol", &make_van_der_pol);
  m.def("make_inverted_pendulum", &make_inverted_pendulum);
  m.def("make_product_system", &make_product_system, py::arg("n"));
  m.def("make_linear_2d", &make_linear_2d);
  m.def("make_system", &make_system, py::arg("name"));

  py::class_<MlpParams>(m, "MlpParams")
      .def_readonly("input_dim", &MlpParams::input_dim)
      .def_readonly("width", &MlpParams::width)
      .def_readonly("depth", &MlpParams::depth)
      .def_property_readonly(
          "weights", [](const MlpParams& p) { return p.weights; })
      .def_property_readonly("biases",
                             [](const MlpParams& p) { return p.biases; })
      .def("save", &save_checkpoint, py::arg("path"));

  m.def("init_params", &init_params, py::arg("seed"), py::arg("input_dim"),
        py::arg("width"), py::arg("depth"));
  m.def("load_checkpoint", &load_checkpoint, py::arg("path"));
  m.def("forward", &forward, py::arg("params"), py::arg("x"));
  m.def("forward_batch", &forward_batch, py::arg("params"), py::arg("points"));
  m.def(
      "forward_with_input_grad",
      [](const MlpParams& p, const Vec& x) {
        const DualEval e = forward_with_input_grad(p, x);
        return py::make_tuple(e.value, e.input_grad);
      },
      py::arg("params"), py::arg("x"));

  m.def(
      "sample_interior",
      [](const Domain& omega, int count, std::uint64_t seed) {
        return sample_interior(omega, count, seed).points;
      },
      py::arg("omega"), py::arg("count"), py::arg("seed"));
  m.def(
      "sample_boundary",
      [](const Domain& omega, int count, std::uint64_t seed) {
        return sample_boundary(omega, count, seed).points;
      },
      py::arg("omega"), py::arg("count"), py::arg("seed"));

  m.def("boundary_loss", &boundary_loss, py::arg("params"), py::arg("points"));
  m.def("residual_loss", &residual_loss, py::arg("params"), py::arg("points"),
        py::arg("deltas"), py::arg("alpha"), py::arg("system"));
  m.def("data_loss", &data_loss, py::arg("params"), py::arg("points"),
        py::arg("values"));

  m.def("kruzkov_transform", &kruzkov_transform, py::arg("V"), py::arg("alpha"));
  m.def("hamiltonian", &hamiltonian, py::arg("params"), py::arg("system"),
        py::arg("x"), py::arg("delta"), py::arg("alpha"));
  m.def("optimal_disturbance", &optimal_disturbance, py::arg("params"),
        py::arg("system"), py::arg("x"), py::arg("alpha"));
  m.def(
      "rollout_value",
      [](const MlpParams& params, const PerturbedSystem& system, const Vec& x0,
         int k_steps, double dt, double alpha, double r_max, double v_cap) {
        const RolloutResult r = rollout_value(params, system, x0, k_steps, dt,
                                              alpha, r_max, v_cap, false);
        return py::make_tuple(r.V_hat, r.diverged);
      },
      py::arg("params"), py::arg("system"), py::arg("x0"), py::arg("k_steps"),
      py::arg("dt"), py::arg("alpha"), py::arg("r_max"), py::arg("v_cap"));
  m.def(
      "build_anchor_set",
      [](const MlpParams& params, const PerturbedSystem& system,
         const Mat& points, double alpha, const RolloutParams& rollout,
         const Domain& omega) {
        const AnchorSet set =
            build_anchor_set(params, system, points, alpha, rollout, omega);
        std::vector<bool> diverged(set.diverged.begin(), set.diverged.end());
        return py::make_tuple(set.v_hat, set.V_hat, diverged);
      },
      py::arg("params"), py::arg("system"), py::arg("points"), py::arg("alpha"),
      py::arg("rollout"), py::arg("omega"));

  py::class_<RolloutParams>(m, "RolloutParams")
      .def(py::init<>())
      .def_readwrite("k_steps", &RolloutParams::k_steps)
      .def_readwrite("dt", &RolloutParams::dt)
      .def_readwrite("r_max", &RolloutParams::r_max)
      .def_readwrite("v_cap", &RolloutParams::v_cap);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("system", &TrainConfig::system)
      .def_readwrite("omega", &TrainConfig::omega)
      .def_readwrite("alpha", &TrainConfig::alpha)
      .def_readwrite("lambda_r", &TrainConfig::lambda_r)
      .def_readwrite("lambda_d", &TrainConfig::lambda_d)
      .def_readwrite("m_b", &TrainConfig::m_b)
      .def_readwrite("m_r", &TrainConfig::m_r)
      .def_readwrite("m_d", &TrainConfig::m_d)
      .def_readwrite("iterations", &TrainConfig::iterations)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("width", &TrainConfig::width)
      .def_readwrite("depth", &TrainConfig::depth)
      .def_readwrite("rollout", &TrainConfig::rollout)
      .def_readwrite("resample", &TrainConfig::resample)
      .def_readwrite("inner_tol", &TrainConfig::inner_tol)
      .def_readwrite("minibatch", &TrainConfig::minibatch)
      .def_readwrite("threads", &TrainConfig::threads)
      .def_readwrite("out_dir", &TrainConfig::out_dir);

  m.def(
      "default_train_config",
      [](const std::string& system) { return default_config(system).train; },
      py::arg("system"));

  m.def(
      "train",
      [](const TrainConfig& config) {
        TrainResult result;
        {
          py::gil_scoped_release release;
          result = train(config);
        }
        return py::make_tuple(result.params, history_to_dict(result.history));
      },
      py::arg("config"));

  py::class_<ValueGrid>(m, "ValueGrid")
      .def_property_readonly("lower",
                             [](const ValueGrid& g) { return g.lower; })
      .def_property_readonly("upper",
                             [](const ValueGrid& g) { return g.upper; })
      .def_property_readonly("resolution",
                             [](const ValueGrid& g) { return g.resolution; })
      .def_property_readonly("values", &grid_values_matrix)
      .def_readonly("system_name", &ValueGrid::system_name)
      .def_readonly("alpha", &ValueGrid::alpha)
      .def_readonly("sweeps", &ValueGrid::sweeps)
      .def_readonly("final_residual", &ValueGrid::final_residual)
      .def_readonly("converged", &ValueGrid::converged)
      .def("interpolate",
           [](const ValueGrid& g, const Vec& x) { return interpolate(g, x); });

  m.def(
      "evaluate_on_grid",
      [](const MlpParams& params, const Domain& omega, int res0, int res1,
         int axis0, int axis1, const Vec& pinned) {
        SliceSpec slice;
        slice.axis0 = axis0;
        slice.axis1 = axis1;
        slice.pinned = pinned;
        return evaluate_on_grid(params, omega, res0, res1, slice);
      },
      py::arg("params"), py::arg("omega"), py::arg("resolution0"),
      py::arg("resolution1"), py::arg("axis0") = 0, py::arg("axis1") = 1,
      py::arg("pinned") = Vec(), py::call_guard<py::gil_scoped_release>());

  m.def(
      "solve_fdm",
      [](const PerturbedSystem& system, const Domain& omega, int resolution,
         double alpha, double h, double tol, int max_sweeps) {
        FdmOptions options;
        options.resolution = resolution;
        options.alpha = alpha;
        options.h = h;
        options.tol = tol;
        options.max_sweeps = max_sweeps;
        return solve_fdm(system, omega, options);
      },
      py::arg("system"), py::arg("omega"), py::arg("resolution") = 201,
      py::arg("alpha") = 0.5, py::arg("h") = 0.0, py::arg("tol") = 1e-6,
      py::arg("max_sweeps") = 5000, py::call_guard<py::gil_scoped_release>());

  m.def("export_grid", &export_grid, py::arg("grid"), py::arg("path"));
  m.def("load_grid", &load_grid, py::arg("path"));
  m.def("sup_diff", &sup_diff, py::arg("a"), py::arg("b"));
  m.def("mean_abs_diff", &mean_abs_diff, py::arg("a"), py::arg("b"));

  m.def(
      "extract_contour",
      [](const ValueGrid& grid, double level) {
        const Contour contour = extract_contour(grid, level);
        py::list out;
        for (const Polyline& line : contour.polylines) {
          Mat pts(line.points.size(), 2);
          for (std::size_t i = 0; i < line.points.size(); ++i) {
            pts(i, 0) = line.points[i][0];
            pts(i, 1) = line.points[i][1];
          }
          out.append(py::make_tuple(pts, line.closed));
        }
        return out;
      },
      py::arg("grid"), py::arg("level") = 0.9);

  m.def(
      "run_gradcheck",
      [](std::uint64_t seed, int input_cases, int param_cases) {
        GradCheckReport r;
        {
          py::gil_scoped_release release;
          r = run_gradcheck(seed, input_cases, param_cases);
        }
        py::dict d;
        d["max_input_grad_rel_err"] = r.max_input_grad_rel_err;
        d["max_param_grad_rel_err"] = r.max_param_grad_rel_err;
        d["input_tolerance"] = kInputGradTolerance;
        d["param_tolerance"] = kParamGradTolerance;
        return d;
      },
      py::arg("seed") = 7, py::arg("input_cases") = 100,
      py::arg("param_cases") = 20);

  m.def("set_thread_count", &set_thread_count, py::arg("n"));
}
