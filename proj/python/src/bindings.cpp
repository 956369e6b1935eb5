#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cubelab/cube_averages.hpp"
#include "cubelab/cube_general.hpp"
#include "cubelab/dynamics.hpp"
#include "cubelab/harness.hpp"
#include "cubelab/parallel.hpp"
#include "cubelab/spectral.hpp"

namespace py = pybind11;
using namespace cubelab;

namespace {

using Array = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

Samples view(const Array& a) {
  if (a.ndim() != 1) throw py::value_error("expected a one-dimensional array");
  return {a.data(), static_cast<std::size_t>(a.size())};
}

std::vector<Samples> views(const std::vector<Array>& arrays) {
  std::vector<Samples> out;
  for (const auto& a : arrays) out.push_back(view(a));
  return out;
}

Array to_array(Samples s) {
  Array out(static_cast<py::ssize_t>(s.size()));
  std::copy(s.begin(), s.end(), out.mutable_data());
  return out;
}

py::dict report_dict(const Report& r) {
  py::dict columns;
  for (std::size_t c = 0; c < r.columns.size(); ++c) {
    py::array_t<double> col(static_cast<py::ssize_t>(r.rows.size()));
    for (std::size_t i = 0; i < r.rows.size(); ++i) col.mutable_data()[i] = r.rows[i][c];
    columns[py::str(r.columns[c].name)] = col;
  }
  py::dict out;
  out["columns"] = columns;
  out["metadata"] = py::dict(py::cast(std::map<std::string, std::string>(r.metadata.begin(), r.metadata.end())));
  out["summary"] = py::dict(py::cast(std::map<std::string, double>(r.summary.begin(), r.summary.end())));
  out["failure"] = r.failure ? py::object(py::str(*r.failure)) : py::object(py::none());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multiple ergodic averages over cubes";

  py::register_exception<Error>(m, "CubelabError", PyExc_ValueError);

  m.def("set_thread_count", &set_thread_count, py::arg("n"));
  m.def("thread_count", &thread_count);

  m.def(
      "orbit",
      [](const std::string& system, const std::string& observable, std::size_t length, double alpha,
         double theta, std::uint64_t seed, std::optional<std::pair<double, double>> start) {
        const SystemSpec spec{parse_system_kind(system), alpha, theta, seed, {}};
        spec.validate();
        const Observable obs = parse_observable(observable);
        obs.validate_for(spec.kind);
        const Point x0 = start ? Point{start->first, start->second} : random_start(seed);
        return to_array(generate_orbit(spec, obs, x0, length).samples());
      },
      py::arg("system"), py::arg("observable"), py::arg("length"), py::arg("alpha") = 0.0,
      py::arg("theta") = 0.0, py::arg("seed") = 0, py::arg("start") = py::none(),
      "Samples f(T^n x0) for n < length.");

  m.def(
      "cube3",
      [](const Array& a, const Array& b, const Array& c, std::size_t n, const std::string& method) {
        if (method == "naive") return cube3_naive(view(a), view(b), view(c), n);
        if (method == "fast") return cube3_fast(view(a), view(b), view(c), n);
        throw py::value_error("method must be 'naive' or 'fast'");
      },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("n"), py::arg("method") = "fast");

  m.def(
      "cubek",
      [](int k, const std::vector<Array>& functions, std::size_t n, const std::string& method) {
        const CubeSpec spec{k, views(functions)};
        if (method == "naive") return cubek_naive(spec, n);
        if (method == "fast") return cubek_fast(spec, n);
        throw py::value_error("method must be 'naive' or 'fast'");
      },
      py::arg("k"), py::arg("functions"), py::arg("n"), py::arg("method") = "fast",
      "Cube average over the 2^k - 1 functions, ordered by subset bitmask.");

  m.def(
      "ww_sup",
      [](const Array& a, std::size_t n, std::size_t oversample) {
        const WWStatistic w = ww_sup(view(a), n, oversample);
        return py::make_tuple(w.value, w.argmax_t);
      },
      py::arg("a"), py::arg("n"), py::arg("oversample") = 8);

  m.def(
      "seminorm",
      [](const Array& a, int order, std::size_t n, std::size_t h, std::optional<std::size_t> h_inner) {
        if (order == 2) return seminorm2(view(a), n, h).value;
        if (order == 3) return seminorm3(view(a), n, h, h_inner.value_or(h)).value;
        throw py::value_error("order must be 2 or 3");
      },
      py::arg("a"), py::arg("order"), py::arg("n"), py::arg("h"), py::arg("h_inner") = py::none());

  m.def(
      "vdc_bound",
      [](const Array& u, std::size_t n, std::size_t h) {
        const BoundPair b = vdc_bound(view(u), n, h);
        return py::make_tuple(b.lhs, b.rhs);
      },
      py::arg("u"), py::arg("n"), py::arg("h"));

  m.def(
      "lemma3",
      [](const Array& a, const Array& b, std::size_t n, std::size_t oversample) {
        return lemma3_quantity(view(a), view(b), n, oversample);
      },
      py::arg("a"), py::arg("b"), py::arg("n"), py::arg("oversample") = 8);

  m.def(
      "lemma4",
      [](int k, const std::vector<Array>& block, std::size_t n, std::size_t oversample) {
        return lemma4_quantity(k, views(block), n, oversample);
      },
      py::arg("k"), py::arg("block"), py::arg("n"), py::arg("oversample") = 8);

  m.def("default_config", [] { return to_json(default_config()); });

  m.def(
      "run",
      [](const std::string& config_json) {
        const ExperimentConfig config = parse_config(config_json);
        Report r;
        {
          py::gil_scoped_release release;
          r = run(config);
        }
        return report_dict(r);
      },
      py::arg("config_json"), "Runs a JSON experiment config and returns columns and metadata.");

  m.def(
      "report_csv",
      [](const std::string& config_json) {
        std::ostringstream out;
        write_report(out, run(parse_config(config_json)));
        return out.str();
      },
      py::arg("config_json"));
}
