#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "orbitfol/classify.hpp"
#include "orbitfol/cli.hpp"
#include "orbitfol/errors.hpp"
#include "orbitfol/flow.hpp"
#include "orbitfol/orbit.hpp"
#include "orbitfol/verify.hpp"

namespace py = pybind11;
using namespace orbitfol;

namespace {

FieldFamily family_of(const std::vector<AffineField>& fields) { return FieldFamily(fields); }

py::dict report_dict(const KillingReport& r)
{
    py::list witnesses;
    for (const auto& w : r.witnesses) {
        py::dict d;
        d["i"] = w.i;
        d["j"] = w.j;
        d["residual"] = w.residual;
        if (w.point.size() > 0)
            d["point"] = w.point;
        witnesses.append(d);
    }
    py::dict out;
    out["pass"] = r.pass;
    out["max_residual"] = r.max_residual;
    out["witnesses"] = witnesses;
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Native core of the orbitfol package";

    py::register_exception<Error>(m, "OrbitfolError", PyExc_ValueError);

    py::class_<Expression>(m, "Expression")
        .def_property_readonly("dim", &Expression::dim)
        .def("evaluate", py::overload_cast<const Vector&>(&Expression::evaluate, py::const_), py::arg("point"))
        .def("differentiate", &Expression::differentiate, py::arg("var"))
        .def("__str__", &Expression::to_string)
        .def("__repr__", [](const Expression& e) { return "Expression('" + e.to_string() + "')"; });

    m.def("parse_expr", &parse_expr, py::arg("text"), py::arg("dim"));
    m.def("evaluate", [](const Expression& e, const Vector& p) { return e.evaluate(p); }, py::arg("expr"),
          py::arg("point"));
    m.def("differentiate", [](const Expression& e, int var) { return e.differentiate(var); }, py::arg("expr"),
          py::arg("var"));

    py::class_<AffineField>(m, "AffineField")
        .def(py::init<Matrix, Vector>(), py::arg("linear"), py::arg("offset"))
        .def_property_readonly("dim", &AffineField::dim)
        .def_property_readonly("linear", &AffineField::linear)
        .def_property_readonly("offset", &AffineField::offset)
        .def("__call__", &AffineField::operator(), py::arg("point"))
        .def("__add__", [](const AffineField& f, const AffineField& g) { return f + g; })
        .def("__sub__", [](const AffineField& f, const AffineField& g) { return f - g; })
        .def("__rmul__", [](const AffineField& f, double c) { return c * f; })
        .def("__mul__", [](const AffineField& f, double c) { return c * f; })
        .def("__eq__", [](const AffineField& f, const AffineField& g) { return f == g; });

    py::module_ cat = m.def_submodule("catalog", "Built-in Killing fields");
    cat.def("translation_r3", &catalog::translation_r3, py::arg("axis"));
    cat.def("rotation_r3", &catalog::rotation_r3, py::arg("axis"));
    cat.def("torus_x", &catalog::torus_x);
    cat.def("torus_y", &catalog::torus_y);
    cat.def("hopf", &catalog::hopf);

    m.def("killing_check", [](const AffineField& f) { return report_dict(killing_check(f)); }, py::arg("field"));
    m.def("bracket", py::overload_cast<const AffineField&, const AffineField&>(&bracket), py::arg("f"), py::arg("g"));
    m.def(
        "closure", [](const std::vector<AffineField>& fields) { return closure(family_of(fields)).basis; },
        py::arg("fields"));
    m.def("flow_affine", &flow_affine, py::arg("field"), py::arg("point"), py::arg("t"));
    m.def(
        "trajectory",
        [](const AffineField& f, const Vector& p0, double t_min, double t_max, int samples) {
            const Trajectory traj = trajectory(f, p0, t_min, t_max, samples);
            return py::make_tuple(traj.times, traj.points);
        },
        py::arg("field"), py::arg("start"), py::arg("t_min"), py::arg("t_max"), py::arg("samples"));
    m.def(
        "orbit_dimension",
        [](const std::vector<AffineField>& fields, const Vector& p) { return orbit_dimension(family_of(fields), p); },
        py::arg("fields"), py::arg("point"));
    m.def(
        "generic_rank",
        [](const std::vector<AffineField>& fields, std::uint64_t seed) {
            return generic_rank(closure(family_of(fields)), seed);
        },
        py::arg("fields"), py::arg("seed") = 0);
    m.def(
        "sample_orbit",
        [](const std::vector<AffineField>& fields, const Vector& p0, int steps, double t_scale, std::uint64_t seed) {
            return sample_orbit(family_of(fields), p0, steps, t_scale, seed).points;
        },
        py::arg("fields"), py::arg("start"), py::arg("steps"), py::arg("t_scale") = 0.5, py::arg("seed") = 0);
    m.def(
        "classify_json",
        [](const std::vector<AffineField>& fields, double tol, std::uint64_t seed) {
            ClassifyOptions options;
            options.tol = tol;
            options.seed = seed;
            return to_json(classify_r3(family_of(fields), options));
        },
        py::arg("fields"), py::arg("tol") = 1e-9, py::arg("seed") = 0);
    m.def("scenario_names", &scenario_names);
    m.def(
        "scenario_json",
        [](const std::string& name) {
            std::vector<ScenarioReport> reports;
            if (name == "all") {
                for (const auto& n : scenario_names())
                    reports.push_back(scenario_run(n));
            } else {
                reports.push_back(scenario_run(name));
            }
            return to_json(reports);
        },
        py::arg("name") = "all");
    m.def(
        "run_command",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = run_command(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
