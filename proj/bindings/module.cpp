#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fracgreen/boundary.hpp"
#include "fracgreen/errors.hpp"
#include "fracgreen/green.hpp"
#include "fracgreen/harness.hpp"
#include "fracgreen/model.hpp"
#include "fracgreen/norms.hpp"
#include "fracgreen/operator.hpp"
#include "fracgreen/solver.hpp"
#include "fracgreen/spec_io.hpp"

namespace py = pybind11;
using namespace fracgreen;

namespace {

GridField field_from(std::shared_ptr<const Grid> grid, const std::vector<double>& v) {
    if (static_cast<int>(v.size()) != grid->size())
        throw std::invalid_argument("values length does not match the grid");
    GridField f = make_field(grid, 0.0);
    f.values = v;
    return f;
}

py::dict solution_dict(const Solution& sol) {
    py::dict d;
    d["u"] = sol.u.values;
    d["g_part"] = sol.g_part.values;
    d["p_part"] = sol.p_part.values;
    if (sol.eta_part) d["eta_part"] = sol.eta_part->values;
    d["iterations"] = sol.iterations;
    d["lambda_star"] = sol.lambda_star;
    d["c0"] = sol.c0;
    d["route_discrepancy"] = sol.route_discrepancy;
    d["residual_history"] = sol.residual_history;
    d["grad_lp_history"] = sol.grad_lp_history;
    d["levels"] = sol.levels;
    d["level_iterations"] = sol.level_iterations;
    d["level_diffs"] = sol.level_diffs;
    return d;
}

} // namespace

PYBIND11_MODULE(_fracgreen, m) {
    m.doc() = "fractional Dirichlet problems with measure data on the unit ball";

    py::register_exception<Error>(m, "FracgreenError");

    py::class_<FracParams>(m, "FracParams")
        .def_readonly("dim", &FracParams::dim)
        .def_readonly("alpha", &FracParams::alpha)
        .def_readonly("c_norm", &FracParams::c_norm)
        .def("p_star", &FracParams::p_star);

    py::class_<Grid, std::shared_ptr<Grid>>(m, "Grid")
        .def_readonly("dim", &Grid::dim)
        .def_readonly("n", &Grid::n)
        .def_readonly("h", &Grid::h)
        .def_property_readonly("x", [](const Grid& g) {
            std::vector<double> xs(g.size());
            for (int i = 0; i < g.size(); ++i) xs[i] = g.x(i);
            return xs;
        })
        .def_readonly("dist", &Grid::dist)
        .def("__len__", &Grid::size);

    m.def("normalization_constant", &normalization_constant, py::arg("dim"),
          py::arg("alpha"));
    m.def("normalization_constant_fourier", &normalization_constant_fourier,
          py::arg("dim"), py::arg("alpha"));
    m.def("params", &make_params, py::arg("dim"), py::arg("alpha"));
    m.def(
        "grid",
        [](int dim, int n) { return std::const_pointer_cast<Grid>(make_grid(dim, n)); },
        py::arg("dim"), py::arg("n"));

    py::class_<OperatorTable>(m, "OperatorTable")
        .def_property_readonly("tail", [](const OperatorTable& t) {
            return std::vector<double>(t.tail.data(), t.tail.data() + t.tail.size());
        });
    m.def(
        "assemble_operator",
        [](std::shared_ptr<Grid> g, const FracParams& p) {
            return assemble_operator(g, p);
        },
        py::arg("grid"), py::arg("params"));
    m.def(
        "apply_operator",
        [](const OperatorTable& t, const std::vector<double>& u) {
            return apply_operator(t, field_from(t.grid, u)).values;
        },
        py::arg("table"), py::arg("values"));

    m.def(
        "green_kernel_ball",
        [](double x, double y, const FracParams& p) {
            return green_kernel_ball({x, 0.0}, {y, 0.0}, p);
        },
        py::arg("x"), py::arg("y"), py::arg("params"));

    py::class_<GreenTable>(m, "GreenTable");
    m.def(
        "build_green",
        [](std::shared_ptr<Grid> g, const FracParams& p, const std::string& route) {
            if (route == "explicit") return build_green(g, p, GreenRoute::Explicit);
            if (route == "inverse") {
                auto T = assemble_operator(g, p);
                return build_green(g, p, GreenRoute::NumericInverse, &T);
            }
            throw std::invalid_argument("route must be 'explicit' or 'inverse'");
        },
        py::arg("grid"), py::arg("params"), py::arg("route") = "explicit");
    m.def(
        "green_apply_density",
        [](const GreenTable& t, const std::vector<double>& f) {
            return green_apply(t, field_from(t.grid, f)).values;
        },
        py::arg("table"), py::arg("density"));
    m.def(
        "green_apply_atom",
        [](const GreenTable& t, double x, double mass) {
            RadonMeasure nu;
            nu.support = Support::Interior;
            nu.atoms.push_back({{x, 0.0}, mass});
            return green_apply(t, nu).values;
        },
        py::arg("table"), py::arg("x"), py::arg("mass") = 1.0);

    py::class_<ProblemSpec>(m, "ProblemSpec")
        .def_property_readonly("grid",
                               [](const ProblemSpec& s) {
                                   return std::const_pointer_cast<Grid>(s.grid);
                               })
        .def_readonly("params", &ProblemSpec::params)
        .def_readonly("p_star", &ProblemSpec::p_star);
    m.def("parse_spec", &parse_spec, py::arg("json_text"));
    m.def(
        "solve",
        [](const ProblemSpec& spec, std::uint64_t seed) {
            auto setup = prepare_solver(spec, nullptr, seed);
            return solution_dict(solve_full(spec, setup));
        },
        py::arg("spec"), py::arg("seed") = 0);

    m.def(
        "weak_residual",
        [](const std::vector<double>& u, const ProblemSpec& spec, std::uint64_t seed) {
            auto battery = make_battery(spec.grid, spec.params, seed);
            return weak_residual(field_from(spec.grid, u), spec, battery);
        },
        py::arg("u"), py::arg("spec"), py::arg("seed") = 0);

    m.def("w1q_norm",
          [](const std::vector<double>& u, std::shared_ptr<Grid> g, double q) {
              return w1q_norm(field_from(g, u), q);
          });

    m.def(
        "fractional_normal_limit",
        [](const std::function<double(double)>& xi, double x, const FracParams& p) {
            auto lim = fractional_normal_test(xi, x, p);
            py::dict d;
            d["value"] = lim.value;
            d["converged"] = lim.converged;
            d["order"] = lim.order;
            return d;
        },
        py::arg("xi"), py::arg("x_boundary"), py::arg("params"));

    m.def(
        "critical_sweep",
        [](const FracParams& p) {
            auto rep = critical_sweep(p);
            py::list rows;
            for (const auto& r : rep.rows) {
                py::dict d;
                d["q"] = r.q;
                d["q_factor"] = r.q_factor;
                d["norm"] = r.norm;
                d["weighted"] = r.weighted;
                d["ratio_norm"] = r.ratio_norm;
                d["ratio_weighted"] = r.ratio_weighted;
                d["verdict_norm"] = r.verdict_norm;
                d["verdict_weighted"] = r.verdict_weighted;
            rows.append(d);
            }
            return rows;
        },
        py::arg("params"));
}
