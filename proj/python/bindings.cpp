#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "gammalim/energy.hpp"
#include "gammalim/experiments.hpp"
#include "gammalim/limits.hpp"
#include "gammalim/minimize.hpp"
#include "gammalim/recovery.hpp"
#include "gammalim/setvalued.hpp"
#include "gammalim/unfold.hpp"

namespace py = pybind11;
using namespace gammalim;

namespace {

std::vector<double> values_of(const Field& f) { return {f.values().begin(), f.values().end()}; }

template <int (*Runner)(std::string_view, const RunOptions&)>
int run(const std::string& config, const std::filesystem::path& out, std::optional<double> resolution) {
    RunOptions opts;
    opts.out_dir = out;
    opts.resolution = resolution;
    return Runner(config, opts);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "One-dimensional phase field energies, unfolding and recovery sequences";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<Domain1D>(m, "Domain")
        .def_static("interval", &Domain1D::interval, py::arg("left"), py::arg("right"))
        .def_static("torus", &Domain1D::torus)
        .def_property_readonly("is_torus", &Domain1D::is_torus)
        .def_property_readonly("left", &Domain1D::left)
        .def_property_readonly("right", &Domain1D::right)
        .def("distance", &Domain1D::distance)
        .def("__eq__", [](const Domain1D& a, const Domain1D& b) { return a == b; });

    py::class_<Mesh>(m, "Mesh")
        .def(py::init<Domain1D, std::size_t>(), py::arg("domain"), py::arg("nodes"))
        .def_property_readonly("domain", &Mesh::domain)
        .def_property_readonly("spacing", &Mesh::spacing)
        .def("__len__", &Mesh::size)
        .def("nodes", [](const Mesh& mesh) {
            std::vector<double> xs(mesh.size());
            for (std::size_t k = 0; k < xs.size(); ++k) xs[k] = mesh.node(k);
            return xs;
        });

    py::class_<Field>(m, "Field")
        .def(py::init<Mesh, std::vector<double>>(), py::arg("mesh"), py::arg("values"))
        .def_static("sample", &Field::sample, py::arg("mesh"), py::arg("fn"))
        .def_property_readonly("mesh", &Field::mesh)
        .def_property_readonly("values", &values_of)
        .def("at", &Field::at)
        .def("__len__", &Field::size)
        .def("__getitem__", [](const Field& f, std::size_t k) {
            if (k >= f.size()) throw py::index_error();
            return f[k];
        });

    py::class_<Potential>(m, "Potential")
        .def_static("quadratic", &Potential::quadratic)
        .def_static("tabulated",
                    [](std::vector<double> v, std::vector<double> f, double step) {
                        return Potential::tabulated(std::move(v), std::move(f), step);
                    },
                    py::arg("v"), py::arg("F"), py::arg("step"))
        .def_static("from_csv", &Potential::from_csv, py::arg("path"), py::arg("step"))
        .def("F", &Potential::F)
        .def("G", &Potential::G);

    py::class_<PointPenalty>(m, "PointPenalty")
        .def(py::init<double, double>(), py::arg("location"), py::arg("weight"))
        .def_readwrite("location", &PointPenalty::location)
        .def_readwrite("weight", &PointPenalty::weight);

    py::class_<EnergyReport>(m, "EnergyReport")
        .def_readonly("gradient", &EnergyReport::gradient)
        .def_readonly("potential", &EnergyReport::potential)
        .def_readonly("penalty", &EnergyReport::penalty)
        .def_readonly("weighted_tv", &EnergyReport::weighted_tv)
        .def_readonly("fidelity", &EnergyReport::fidelity)
        .def_readonly("total", &EnergyReport::total);

    py::class_<SolveOptions>(m, "SolveOptions")
        .def(py::init<>())
        .def_readwrite("max_iterations", &SolveOptions::max_iterations)
        .def_readwrite("tolerance", &SolveOptions::tolerance)
        .def_readwrite("rounds", &SolveOptions::rounds);

    m.def("closed_form_minimizer", [](double eps, double b, const std::vector<double>& xs) {
        const auto w = closed_form_minimizer(eps, b);
        std::vector<double> out;
        for (double x : xs) out.push_back(w(x));
        return out;
    }, py::arg("eps"), py::arg("b"), py::arg("xs"));
    m.def("energy_smm_b",
          [](const Field& v, double eps, const Potential& p, const std::vector<PointPenalty>& pen) {
              return energy_smm_b(v, eps, p, pen);
          },
          py::arg("v"), py::arg("eps"), py::arg("potential"), py::arg("penalties"));
    m.def("minimize_smm_b_quadratic",
          [](const Mesh& mesh, double eps, const std::vector<PointPenalty>& pen) {
              return minimize_smm_b_quadratic(mesh, eps, std::span<const PointPenalty>(pen));
          },
          py::arg("mesh"), py::arg("eps"), py::arg("penalties"));
    m.def("minimize_smm_b_general",
          [](const Mesh& mesh, double eps, const Potential& p, const std::vector<PointPenalty>& pen,
             const SolveOptions& opts) { return minimize_smm_b_general(mesh, eps, p, std::span<const PointPenalty>(pen), opts); },
          py::arg("mesh"), py::arg("eps"), py::arg("potential"), py::arg("penalties"),
          py::arg("options") = SolveOptions{});
    m.def("prox_weighted_tv", &prox_weighted_tv, py::arg("g"), py::arg("v"), py::arg("sigma"), py::arg("lam"));
    m.def("minimize_kwc_alternating",
          [](const Field& g, double eps, double sigma, const Potential& p, double lam, const SolveOptions& opts) {
              auto r = minimize_kwc_alternating(g, eps, sigma, p, lam, opts);
              return py::dict(py::arg("u") = r.u, py::arg("v") = r.v, py::arg("report") = r.report,
                              py::arg("energy_trace") = r.energy_trace, py::arg("rounds") = r.rounds);
          },
          py::arg("g"), py::arg("eps"), py::arg("sigma"), py::arg("potential"), py::arg("lam"),
          py::arg("options") = SolveOptions{});

    py::class_<UnfoldedCurve>(m, "UnfoldedCurve")
        .def_readonly("s", &UnfoldedCurve::s)
        .def_readonly("x", &UnfoldedCurve::x)
        .def_readonly("U", &UnfoldedCurve::U)
        .def_readonly("length", &UnfoldedCurve::length);
    m.def("unfold", &unfold, py::arg("u"));
    m.def("total_variation", py::overload_cast<const Field&>(&total_variation));
    m.def("curve_total_variation", py::overload_cast<const UnfoldedCurve&>(&total_variation));

    py::class_<ExceptionalPoint>(m, "ExceptionalPoint")
        .def(py::init<double, double, double>(), py::arg("x"), py::arg("lo"), py::arg("hi"))
        .def_readonly("x", &ExceptionalPoint::x)
        .def_readonly("lo", &ExceptionalPoint::lo)
        .def_readonly("hi", &ExceptionalPoint::hi);
    py::class_<SetValuedLimit>(m, "SetValuedLimit")
        .def(py::init<Domain1D, std::vector<ExceptionalPoint>>(), py::arg("domain"), py::arg("exceptional"))
        .def_property_readonly("exceptional", &SetValuedLimit::exceptional)
        .def("to_json", [](const SetValuedLimit& xi) { return to_json(xi); })
        .def_static("from_json", &parse_set_valued_limit);
    m.def("graph_distance", &graph_distance, py::arg("u"), py::arg("limit"), py::arg("resolution"));
    m.def("limit_energy_smm", &limit_energy_smm, py::arg("limit"), py::arg("potential"));
    m.def("limit_energy_smm_b",
          [](const SetValuedLimit& xi, const Potential& p, const std::vector<PointPenalty>& pen) {
              return limit_energy_smm_b(xi, p, pen);
          },
          py::arg("limit"), py::arg("potential"), py::arg("penalties"));
    m.def("limit_pointwise_minimizer", [](double b, const Potential& p) {
        const auto r = limit_pointwise_minimizer(b, p);
        return py::make_tuple(r.p0, r.value);
    }, py::arg("b"), py::arg("potential"));

    m.def("recovery_mesh", &recovery_mesh, py::arg("domain"), py::arg("eps"), py::arg("cells_per_eps") = 16.0);
    m.def("build_recovery",
          [](const SetValuedLimit& xi, double eps, double mu, const Potential& p, const Mesh& mesh) {
              auto r = build_recovery(xi, eps, mu, p, mesh);
              return py::make_tuple(r.w, r.bound, r.blocks.size());
          },
          py::arg("limit"), py::arg("eps"), py::arg("mu"), py::arg("potential"), py::arg("mesh"));

    m.def("run_minimize_sweep", &run<run_minimize_sweep>, py::arg("config"), py::arg("out"),
          py::arg("resolution") = py::none());
    m.def("run_recovery", &run<run_recovery>, py::arg("config"), py::arg("out"), py::arg("resolution") = py::none());
    m.def("run_kwc", &run<run_kwc>, py::arg("config"), py::arg("out"), py::arg("resolution") = py::none());
    m.def("run_unfold", &run<run_unfold>, py::arg("config"), py::arg("out"), py::arg("resolution") = py::none());
}
