#include "orbitfol/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "orbitfol/classify.hpp"
#include "orbitfol/errors.hpp"
#include "orbitfol/flow.hpp"
#include "orbitfol/numeric.hpp"
#include "orbitfol/orbit.hpp"

namespace orbitfol {

namespace {

double value_floor(const AffineField& f, const Vector& p) { return 1e-12 * std::max(1.0, f.max_coefficient() * (1.0 + p.norm())); }

} // namespace

TransversalityReport riemannian_transversality_check(const FieldFamily& family, const Line& line,
                                                     std::span<const double> ts, double tol)
{
    const int n = family.dim();
    if (line.anchor.size() != n || line.direction.size() != n)
        throw DimensionError("line dimension does not match family");
    if (line.direction.norm() == 0.0)
        throw DimensionError("line direction must be nonzero");
    const Vector d = line.direction.normalized();

    for (std::size_t k = 0; k < family.size(); ++k) {
        const AffineField& f = family.members()[k];
        const Vector v = f(line.anchor);
        if (v.norm() <= value_floor(f, line.anchor))
            continue;
        const double cosine = std::abs(v.dot(d)) / v.norm();
        if (cosine > tol)
            throw NotOrthogonalAtAnchor("line is not orthogonal to family member " + std::to_string(k + 1) +
                                        " at its anchor (|cos| = " + format_double(cosine) + ")");
    }

    const LieAlgebraBasis& algebra = family.closure();
    if (generic_rank(algebra) == n)
        throw OpenOrbitError("the family has open orbits; transversality is vacuous");

    TransversalityReport report;
    for (double t : ts) {
        const Vector p = line.at(t);
        for (std::size_t k = 0; k < algebra.size(); ++k) {
            const AffineField& f = algebra.basis[k];
            const Vector v = f(p);
            if (v.norm() <= value_floor(f, p))
                continue;
            const double cosine = std::abs(v.dot(d)) / v.norm();
            if (cosine > report.max_cosine) {
                report.max_cosine = cosine;
                report.worst_t = t;
                report.worst_field = k;
            }
        }
    }
    report.pass = report.max_cosine <= tol;
    return report;
}

EquidistanceReport equidistance_check(const FieldFamily& family, const Line& line, double t1, double t2, int steps,
                                      std::uint64_t seed, double tol)
{
    if (line.anchor.size() != family.dim() || line.direction.size() != family.dim())
        throw DimensionError("line dimension does not match family");
    Vector p = line.at(t1);
    Vector q = line.at(t2);
    const Vector q0 = q;

    EquidistanceReport report;
    report.segment_length = (p - q).norm();
    report.min_leaf_distance = report.segment_length;
    Rng rng(seed);
    for (int k = 0; k < steps; ++k) {
        const AffineField& f = family.members()[rng.index(family.size())];
        const double t = rng.uniform(-0.5, 0.5);
        p = flow_affine(f, p, t);
        q = flow_affine(f, q, t);
        report.max_transport_defect = std::max(report.max_transport_defect, std::abs((p - q).norm() - report.segment_length));
        report.min_leaf_distance = std::min(report.min_leaf_distance, (p - q0).norm());
    }
    report.pass = report.max_transport_defect <= tol && report.min_leaf_distance >= report.segment_length - tol;
    return report;
}

CylinderDecomposition cylinder_killing_decompose(const AffineField& f, double tol)
{
    if (f.dim() != 3)
        throw DimensionError("cylinder decomposition is defined on R^3");
    if (!killing_check(f).pass)
        throw NotKillingError("field is not a Killing field");

    constexpr int kSamples = 16;
    std::vector<Vector> points;
    for (int k = 0; k < kSamples; ++k) {
        const double u = 2.0 * std::numbers::pi * k / kSamples;
        const double v = -1.5 + 0.2 * k;
        points.push_back((Vector(3) << std::sin(u), std::cos(u), v).finished());
    }

    double worst = 0.0;
    std::size_t worst_index = 0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const Vector& p = points[k];
        const double residual = std::abs(f(p).dot((Vector(3) << p(0), p(1), 0.0).finished()));
        if (residual > worst) {
            worst = residual;
            worst_index = k;
        }
    }
    if (worst > tol)
        throw NotTangent("field is not tangent to the cylinder x^2 + y^2 = 1", points[worst_index], worst);

    // Rotation generator y d/dx - x d/dy and the axial translation at p.
    auto frame = [](const Vector& p) {
        Matrix m = Matrix::Zero(3, 2);
        m(0, 0) = p(1);
        m(1, 0) = -p(0);
        m(2, 1) = 1.0;
        return m;
    };

    Matrix stacked(6, 2);
    Vector rhs(6);
    stacked.topRows(3) = frame(points[0]);
    stacked.bottomRows(3) = frame(points[4]);
    rhs.head(3) = f(points[0]);
    rhs.tail(3) = f(points[4]);
    const Vector lambda = stacked.colPivHouseholderQr().solve(rhs);

    CylinderDecomposition out{lambda(0), lambda(1), 0.0};
    worst_index = 0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const double residual = (f(points[k]) - frame(points[k]) * lambda).cwiseAbs().maxCoeff();
        if (residual > out.max_residual) {
            out.max_residual = residual;
            worst_index = k;
        }
    }
    if (out.max_residual > tol)
        throw NotTangent("field is not a constant combination of the cylinder generators", points[worst_index],
                         out.max_residual);
    return out;
}

bool ScenarioReport::pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const ScenarioCheck& c) { return c.pass; });
}

namespace {

ScenarioCheck at_most(std::string name, double residual, double tolerance)
{
    return ScenarioCheck{std::move(name), residual <= tolerance, residual, tolerance};
}

Vector vec(std::initializer_list<double> values)
{
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values)
        v(i++) = x;
    return v;
}

Vector random_s3_point(Rng& rng) { return rng.normal_vector(4).normalized(); }

// Parametrizations of the two circles on S^3 where the torus fields are collinear.
Vector circle_one(double s)
{
    const double r = 1.0 / std::sqrt(2.0);
    return vec({r * std::cos(s), r * std::sin(s), -r * std::sin(s), r * std::cos(s)});
}

Vector circle_two(double s)
{
    const double r = 1.0 / std::sqrt(2.0);
    return vec({-r * std::sin(s), r * std::cos(s), r * std::cos(s), r * std::sin(s)});
}

double circle_one_defect(const Vector& p) { return std::max(std::abs(p(0) - p(3)), std::abs(p(1) + p(2))); }
double circle_two_defect(const Vector& p) { return std::max(std::abs(p(0) + p(3)), std::abs(p(1) - p(2))); }

ScenarioReport run_example1_basis()
{
    ScenarioReport report{"example1_basis", {}};
    const auto basis = catalog::euclidean_basis_r3();

    double killing = 0.0;
    for (const auto& f : basis)
        killing = std::max(killing, killing_check(f).max_residual);
    report.checks.push_back(at_most("killing_check", killing, 0.0));

    const FieldFamily family({basis.begin(), basis.end()});
    const auto& g = family.closure();
    report.checks.push_back(at_most("closure_dimension", std::abs(static_cast<double>(g.size()) - 6.0), 0.0));

    double span = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j)
            span = std::max(span, span_residual(g, bracket(basis[i], basis[j])));
    report.checks.push_back(at_most("brackets_in_span", span, 1e-12));
    return report;
}

ScenarioReport run_hopf_circle()
{
    ScenarioReport report{"hopf_circle", {}};
    const AffineField f = catalog::hopf();
    const Vector p = vec({0.5, -0.5, 0.1, std::sqrt(0.49)});
    const Trajectory traj = trajectory(f, p, 0.0, 2.0 * std::numbers::pi, 257);

    double sphere = 0.0;
    for (const auto& q : traj.points)
        sphere = std::max(sphere, std::abs(q.squaredNorm() - 1.0));
    report.checks.push_back(at_most("sphere_residual", sphere, 1e-10));
    report.checks.push_back(at_most("period_return", (traj.points.back() - p).norm(), 1e-10));

    const double radius = (traj.points[64] - p).norm();
    report.checks.push_back(at_most("quarter_period_chord", std::abs(radius - std::sqrt(2.0)), 1e-10));
    return report;
}

ScenarioReport run_s3_torus()
{
    ScenarioReport report{"s3_torus", {}};
    const AffineField x = catalog::torus_x();
    const AffineField y = catalog::torus_y();
    report.checks.push_back(at_most("commutator", bracket(x, y).max_coefficient(), 0.0));

    const FieldFamily family({x, y});
    Rng rng(2024);
    std::size_t off_circle_mismatch = 0;
    std::size_t rank_one_off_planes = 0;
    for (int k = 0; k < 1000; ++k) {
        const Vector p = random_s3_point(rng);
        const int d = orbit_dimension(family, p);
        const bool on_circle = circle_one_defect(p) <= 1e-9 || circle_two_defect(p) <= 1e-9;
        if (!on_circle && d != 2)
            ++off_circle_mismatch;
        if (d == 1 && !on_circle)
            ++rank_one_off_planes;
    }
    report.checks.push_back(at_most("generic_orbit_dimension", static_cast<double>(off_circle_mismatch), 0.0));
    report.checks.push_back(at_most("rank_one_only_on_circles", static_cast<double>(rank_one_off_planes), 0.0));

    std::size_t circle_mismatch = 0;
    for (int k = 0; k < 100; ++k) {
        const double s = 2.0 * std::numbers::pi * k / 100.0;
        circle_mismatch += orbit_dimension(family, circle_one(s)) != 1;
        circle_mismatch += orbit_dimension(family, circle_two(s)) != 1;
    }
    report.checks.push_back(at_most("singular_circle_dimension", static_cast<double>(circle_mismatch), 0.0));

    const Expression norm2 = parse_expr("x^2 + y^2 + z^2 + w^2", 4);
    const Expression separator = parse_expr("y*z - x*w", 4);
    const Vector start = vec({0.6, 0.0, 0.8, 0.0});
    double flow_drift = 0.0;
    double derivative = 0.0;
    for (const AffineField* f : {&x, &y}) {
        const Trajectory traj = trajectory(*f, start, 0.0, 2.0 * std::numbers::pi, 200);
        for (const Expression* inv : {&norm2, &separator}) {
            const ConservationReport c = conserved_check(*f, *inv, traj);
            flow_drift = std::max(flow_drift, c.max_drift);
            derivative = std::max(derivative, c.derivative_max);
        }
    }
    report.checks.push_back(at_most("invariants_along_flows", flow_drift, 1e-9));
    report.checks.push_back(at_most("invariant_lie_derivatives", derivative, 1e-9));

    PointCloud cloud = sample_orbit(family, start, 500, 0.5, 7);
    attach_invariant(cloud, norm2, "x^2+y^2+z^2+w^2");
    attach_invariant(cloud, separator, "y*z-x*w");
    double cloud_drift = 0.0;
    for (const auto& column : cloud.invariants)
        for (double v : column.values)
            cloud_drift = std::max(cloud_drift, std::abs(v - column.values.front()));
    report.checks.push_back(at_most("invariants_across_orbit_cloud", cloud_drift, 1e-9));

    double circle_defect = 0.0;
    for (int k = 0; k < 8; ++k) {
        const double s = 2.0 * std::numbers::pi * k / 8.0;
        for (double t : {0.3, 1.0, 2.5, 5.0}) {
            for (const AffineField* f : {&x, &y}) {
                circle_defect = std::max(circle_defect, circle_one_defect(flow_affine(*f, circle_one(s), t)));
                circle_defect = std::max(circle_defect, circle_two_defect(flow_affine(*f, circle_two(s), t)));
            }
        }
    }
    report.checks.push_back(at_most("singular_circles_invariant", circle_defect, 1e-9));
    return report;
}

ScenarioReport run_cylinder_helix()
{
    ScenarioReport report{"cylinder_helix", {}};
    const AffineField rotation = catalog::rotation_r3(2);
    const AffineField axial = catalog::translation_r3(2);
    const Vector start = vec({1.0, 0.0, 0.0});

    double closed_form = 0.0;
    double rates = 0.0;
    double speed = 0.0;
    for (const auto& [l1, l2] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}, std::pair{2.0, 3.0}}) {
        const AffineField f = l1 * rotation + l2 * axial;
        for (double t : {0.1, 1.0, std::numbers::pi}) {
            const Vector expected = vec({std::cos(l1 * t), -std::sin(l1 * t), l2 * t});
            closed_form = std::max(closed_form, (flow_affine(f, start, t) - expected).cwiseAbs().maxCoeff());
        }
        // In cylinder coordinates x = sin u, y = cos u, z = v both rates are constant.
        const Trajectory traj = trajectory(f, start, 0.0, 4.0, 100);
        for (const auto& p : traj.points) {
            const Vector v = f(p);
            const double r2 = p(0) * p(0) + p(1) * p(1);
            const double u_dot = (v(0) * p(1) - v(1) * p(0)) / r2;
            rates = std::max({rates, std::abs(u_dot - l1), std::abs(v(2) - l2)});
            speed = std::max(speed, std::abs(v.norm() - std::hypot(l1, l2)));
        }
    }
    report.checks.push_back(at_most("closed_form_flow", closed_form, 1e-11));
    report.checks.push_back(at_most("constant_cylinder_rates", rates, 1e-10));
    report.checks.push_back(at_most("constant_speed", speed, 1e-10));

    double circle = 0.0;
    double line = 0.0;
    const Trajectory around = trajectory(rotation, start, 0.0, 2.0 * std::numbers::pi, 64);
    for (const auto& p : around.points)
        circle = std::max({circle, std::abs(p.head(2).norm() - 1.0), std::abs(p(2))});
    const Trajectory along = trajectory(axial, start, 0.0, 5.0, 64);
    for (const auto& p : along.points)
        line = std::max({line, std::abs(p(0) - 1.0), std::abs(p(1))});
    report.checks.push_back(at_most("degenerate_circle", circle, 1e-10));
    report.checks.push_back(at_most("degenerate_line", line, 1e-10));
    return report;
}

ScenarioReport run_s2xr_nongeodesic()
{
    ScenarioReport report{"s2xr_nongeodesic", {}};
    const AffineField f = catalog::s2xr_rotation();
    const Vector start = vec({0.6, 0.0, 0.8, 0.5});
    const Trajectory traj = trajectory(f, start, 0.0, 2.0 * std::numbers::pi, 128);

    double manifold = 0.0;
    double radius = 0.0;
    double level = 0.0;
    for (const auto& p : traj.points) {
        manifold = std::max(manifold, std::abs(p.head(3).squaredNorm() - 1.0));
        radius = std::max(radius, std::abs(p.head(2).norm() - 0.6));
        level = std::max({level, std::abs(p(2) - 0.8), std::abs(p(3) - 0.5)});
    }
    report.checks.push_back(at_most("stays_on_s2xr", manifold, 1e-10));
    report.checks.push_back(at_most("orbit_radius", radius, 1e-10));
    report.checks.push_back(at_most("latitude_plane", level, 1e-10));
    const double r = traj.points[32].head(2).norm();
    report.checks.push_back(ScenarioCheck{"not_great_circle", r < 1.0 - 1e-10, r, 1.0 - 1e-10});
    return report;
}

struct ClassificationCase {
    std::string label;
    std::vector<AffineField> members;
    FoliationType type;
    Vector point;      // center, axis point or ignored
    Vector direction;  // axis, normal or line direction
    double pitch = 0.0;
};

double parameter_error(const FoliationClass& got, const ClassificationCase& want)
{
    if (got.type != want.type)
        return std::numeric_limits<double>::infinity();
    auto line_error = [&] {
        const Vector d = *got.axis_dir;
        const Vector offset = want.point - *got.axis_point;
        return std::max((d - want.direction).norm(), (offset - d * d.dot(offset)).norm());
    };
    switch (want.type) {
    case FoliationType::ParallelLines: return (*got.direction - want.direction).norm();
    case FoliationType::ConcentricCircles:
    case FoliationType::ConcentricCylinders: return line_error();
    case FoliationType::Helices: return std::max(line_error(), std::abs(*got.pitch - want.pitch));
    case FoliationType::ParallelPlanes: return (*got.normal - want.direction).norm();
    case FoliationType::ConcentricSpheres: return (*got.center - want.point).norm();
    case FoliationType::WholeSpace: return 0.0;
    }
    return std::numeric_limits<double>::infinity();
}

ScenarioReport run_r3_classification()
{
    ScenarioReport report{"r3_classification", {}};
    using catalog::rotation_r3;
    using catalog::translation_r3;
    const Vector origin = Vector::Zero(3);
    const Vector ez = vec({0.0, 0.0, 1.0});
    const auto all = catalog::euclidean_basis_r3();

    const std::vector<ClassificationCase> cases = {
        {"parallel_lines", {translation_r3(2)}, FoliationType::ParallelLines, origin, ez},
        {"concentric_circles", {rotation_r3(2)}, FoliationType::ConcentricCircles, origin, ez},
        {"helices", {rotation_r3(2) + 2.0 * translation_r3(2)}, FoliationType::Helices, origin, ez, 2.0},
        {"parallel_planes", {translation_r3(0), translation_r3(1)}, FoliationType::ParallelPlanes, origin, ez},
        {"concentric_spheres", {rotation_r3(0), rotation_r3(1), rotation_r3(2)}, FoliationType::ConcentricSpheres,
         origin, ez},
        {"concentric_cylinders", {rotation_r3(2), translation_r3(2)}, FoliationType::ConcentricCylinders, origin, ez},
        {"whole_space", {all.begin(), all.end()}, FoliationType::WholeSpace, origin, ez},
    };
    for (const auto& c : cases) {
        double error = std::numeric_limits<double>::infinity();
        try {
            error = parameter_error(classify_r3(FieldFamily(c.members)), c);
        } catch (const Error&) {
        }
        report.checks.push_back(at_most(c.label, error, 1e-9));
    }
    return report;
}

const std::map<std::string, std::function<ScenarioReport()>, std::less<>>& registry()
{
    static const std::map<std::string, std::function<ScenarioReport()>, std::less<>> scenarios = {
        {"example1_basis", run_example1_basis},     {"hopf_circle", run_hopf_circle},
        {"s3_torus", run_s3_torus},                 {"cylinder_helix", run_cylinder_helix},
        {"s2xr_nongeodesic", run_s2xr_nongeodesic}, {"r3_classification", run_r3_classification},
    };
    return scenarios;
}

} // namespace

const std::vector<std::string>& scenario_names()
{
    static const std::vector<std::string> names = {"example1_basis",   "hopf_circle",      "s3_torus",
                                                   "cylinder_helix",   "s2xr_nongeodesic", "r3_classification"};
    return names;
}

ScenarioReport scenario_run(std::string_view name)
{
    const auto& scenarios = registry();
    const auto it = scenarios.find(name);
    if (it == scenarios.end())
        throw UnknownScenario("unknown scenario '" + std::string(name) + "'");
    return it->second();
}

void print_table(std::ostream& out, std::span<const ScenarioReport> reports)
{
    std::size_t scenario_width = 8;
    std::size_t check_width = 5;
    for (const auto& r : reports) {
        scenario_width = std::max(scenario_width, r.scenario.size());
        for (const auto& c : r.checks)
            check_width = std::max(check_width, c.name.size());
    }
    const auto row = [&](std::string_view scenario, std::string_view check, std::string_view status,
                         std::string_view residual, std::string_view tolerance) {
        out << std::left << std::setw(static_cast<int>(scenario_width)) << scenario << "  "
            << std::setw(static_cast<int>(check_width)) << check << "  " << std::setw(6) << status << "  "
            << std::setw(24) << residual << "  " << tolerance << '\n';
    };
    row("scenario", "check", "status", "max_residual", "tolerance");
    for (const auto& r : reports) {
        for (const auto& c : r.checks)
            row(r.scenario, c.name, c.pass ? "PASS" : "FAIL", format_double(c.max_residual), format_double(c.tolerance));
    }
    for (const auto& r : reports)
        out << r.scenario << ": " << (r.pass() ? "PASS" : "FAIL") << '\n';
}

std::string to_json(std::span<const ScenarioReport> reports)
{
    auto number = [](double v) -> nlohmann::ordered_json {
        if (std::isinf(v))
            return "inf";
        return v;
    };
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json checks = nlohmann::ordered_json::array();
        for (const auto& c : r.checks)
            checks.push_back({{"name", c.name},
                              {"pass", c.pass},
                              {"max_residual", number(c.max_residual)},
                              {"tolerance", number(c.tolerance)}});
        out.push_back({{"scenario", r.scenario}, {"pass", r.pass()}, {"checks", std::move(checks)}});
    }
    return out.dump(2);
}

} // namespace orbitfol
