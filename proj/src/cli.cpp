#include "orbitfol/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

#include <CLI11.hpp>

#include "orbitfol/classify.hpp"
#include "orbitfol/errors.hpp"
#include "orbitfol/flow.hpp"
#include "orbitfol/numeric.hpp"
#include "orbitfol/orbit.hpp"
#include "orbitfol/scenario_file.hpp"
#include "orbitfol/verify.hpp"

namespace orbitfol {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_numbers(const std::string& text, const std::string& option)
{
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        double v = 0.0;
        const char* first = text.data() + pos;
        const char* last = text.data() + comma;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last)
            throw UsageError(option + " expects comma-separated numbers, got '" + text + "'");
        values.push_back(v);
        pos = comma + 1;
    }
    return values;
}

Vector parse_point(const std::string& text, int dim, const std::string& option)
{
    const auto values = parse_numbers(text, option);
    if (static_cast<int>(values.size()) != dim)
        throw UsageError(option + " needs " + std::to_string(dim) + " coordinates");
    return Eigen::Map<const Vector>(values.data(), dim);
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoFailure("cannot write " + path);
    return out;
}

std::string field_text(const AffineField& f)
{
    const ExprField e = to_expr_field(f);
    std::string s = "(";
    for (int i = 0; i < e.dim(); ++i)
        s += (i ? ", " : "") + e.component(i).to_string();
    return s + ")";
}

int cmd_check(const std::string& file, std::ostream& out)
{
    const ScenarioFile s = load_scenario(file);
    bool all = true;
    for (std::size_t k = 0; k < s.fields.size(); ++k) {
        const KillingReport r = killing_check(s.fields[k].to_field());
        all = all && r.pass;
        out << "field " << (k + 1) << ": " << (r.pass ? "PASS" : "FAIL")
            << " max_residual=" << format_double(r.max_residual) << '\n';
        for (const auto& w : r.witnesses) {
            out << "  condition (" << (w.i + 1) << "," << (w.j + 1) << ") residual=" << format_double(w.residual);
            if (w.point.size()) {
                out << " at (";
                for (Eigen::Index i = 0; i < w.point.size(); ++i)
                    out << (i ? "," : "") << format_double(w.point(i));
                out << ')';
            }
            out << '\n';
        }
    }
    return all ? kExitOk : kExitFailure;
}

int cmd_closure(const std::string& file, std::ostream& out)
{
    const FieldFamily family = to_family(load_scenario(file));
    const LieAlgebraBasis& g = family.closure();
    out << "dimension " << g.size() << '\n' << "generation_depth " << g.generation_depth << '\n';
    for (std::size_t k = 0; k < g.size(); ++k)
        out << "e" << (k + 1) << " = " << field_text(g.basis[k]) << '\n';
    return kExitOk;
}

int cmd_classify(const std::string& file, const ClassifyOptions& options, std::ostream& out)
{
    const FieldFamily family = to_family(load_scenario(file));
    out << to_json(classify_r3(family, options)) << '\n';
    return kExitOk;
}

struct OrbitArgs {
    std::string file;
    std::string start;
    int steps = 500;
    std::uint64_t seed = 0;
    double t_scale = 0.5;
    std::string out;
};

int cmd_orbit(const OrbitArgs& a, std::ostream& out)
{
    const ScenarioFile s = load_scenario(a.file);
    const FieldFamily family = to_family(s);
    const Vector p0 = parse_point(a.start, family.dim(), "--start");
    const std::filesystem::path path(a.out);
    const std::string ext = path.extension().string();
    if (ext != ".csv" && ext != ".ply")
        throw UsageError("--out must end in .csv or .ply");

    PointCloud cloud = sample_orbit(family, p0, a.steps, a.t_scale, a.seed);
    for (const auto& text : s.invariants)
        attach_invariant(cloud, parse_expr(text, s.dim), text);
    std::ofstream file = open_output(a.out);
    if (ext == ".csv")
        write_cloud_csv(file, cloud);
    else
        write_cloud_ply(file, cloud);
    if (!file)
        throw IoFailure("error while writing " + a.out);
    out << "wrote " << cloud.points.size() << " points to " << a.out << '\n';
    return kExitOk;
}

struct FlowArgs {
    std::string file;
    int field = 1;
    std::string start;
    double t0 = 0.0;
    double t1 = 1.0;
    int samples = 101;
    double step = kDefaultStep;
    std::string out;
};

int cmd_flow(const FlowArgs& a, std::ostream& out)
{
    const ScenarioFile s = load_scenario(a.file);
    if (a.field < 1 || a.field > static_cast<int>(s.fields.size()))
        throw UsageError("--field must be between 1 and " + std::to_string(s.fields.size()));
    const AnyField f = s.fields[static_cast<std::size_t>(a.field - 1)].to_field();
    const Vector p0 = parse_point(a.start, s.dim, "--start");
    const Trajectory traj = trajectory(f, p0, a.t0, a.t1, a.samples, a.step);
    if (a.out.empty()) {
        write_trajectory_csv(out, traj);
        return kExitOk;
    }
    std::ofstream file = open_output(a.out);
    write_trajectory_csv(file, traj);
    if (!file)
        throw IoFailure("error while writing " + a.out);
    out << "wrote " << traj.points.size() << " samples to " << a.out << '\n';
    return kExitOk;
}

int cmd_stratify(const std::string& file, const std::string& box_text, int resolution, std::ostream& out)
{
    const FieldFamily family = to_family(load_scenario(file));
    const auto bounds = parse_numbers(box_text, "--box");
    if (bounds.size() != 2 || !(bounds[0] < bounds[1]))
        throw UsageError("--box expects lo,hi with lo < hi");
    if (resolution < 2)
        throw UsageError("--res must be at least 2");
    const auto summary = dimension_stratification(family, Box::cube(family.dim(), bounds[0], bounds[1]), resolution);
    out << "dim  count  representative\n";
    for (std::size_t d = 0; d < summary.counts.size(); ++d) {
        out << std::left << std::setw(3) << d << "  " << std::setw(5) << summary.counts[d] << "  ";
        if (const auto& rep = summary.representatives[d]) {
            out << '(';
            for (Eigen::Index i = 0; i < rep->size(); ++i)
                out << (i ? "," : "") << format_double((*rep)(i));
            out << ')';
        } else {
            out << '-';
        }
        out << '\n';
    }
    out << "total " << summary.total() << '\n';
    return kExitOk;
}

int cmd_verify(const std::string& target, bool json, std::ostream& out)
{
    std::vector<ScenarioReport> reports;
    if (target == "all") {
        for (const auto& name : scenario_names())
            reports.push_back(scenario_run(name));
    } else {
        reports.push_back(scenario_run(target));
    }
    if (json)
        out << to_json(reports) << '\n';
    else
        print_table(out, reports);
    const bool pass = std::all_of(reports.begin(), reports.end(), [](const ScenarioReport& r) { return r.pass(); });
    return pass ? kExitOk : kExitFailure;
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Orbits and foliations of Killing vector field families", "orbitfol"};
    app.require_subcommand(1);

    std::string file;
    auto* check = app.add_subcommand("check", "Killing test for every field of a scenario file");
    check->add_option("file", file, "scenario JSON")->required();

    auto* closure_cmd = app.add_subcommand("closure", "Bracket closure basis and its dimension");
    closure_cmd->add_option("file", file, "scenario JSON")->required();

    ClassifyOptions classify_options;
    auto* classify = app.add_subcommand("classify", "Foliation type of a family on R^3 as JSON");
    classify->add_option("file", file, "scenario JSON")->required();
    classify->add_option("--tol", classify_options.tol, "rank and residual tolerance")->capture_default_str();
    classify->add_option("--seed", classify_options.seed, "seed for the generic-rank samples")->capture_default_str();

    OrbitArgs orbit_args;
    auto* orbit = app.add_subcommand("orbit", "Sample one orbit to CSV or PLY");
    orbit->add_option("file", orbit_args.file, "scenario JSON")->required();
    orbit->add_option("--start", orbit_args.start, "start point x1,...,xn")->required();
    orbit->add_option("--steps", orbit_args.steps, "random-walk steps")->capture_default_str();
    orbit->add_option("--seed", orbit_args.seed, "random seed")->capture_default_str();
    orbit->add_option("--t-scale", orbit_args.t_scale, "flow times are uniform in [-t, t]")->capture_default_str();
    orbit->add_option("--out", orbit_args.out, "output path (.csv or .ply)")->required();

    FlowArgs flow_args;
    auto* flow = app.add_subcommand("flow", "Export the trajectory of one field as CSV");
    flow->add_option("file", flow_args.file, "scenario JSON")->required();
    flow->add_option("--field", flow_args.field, "1-based field index")->capture_default_str();
    flow->add_option("--start", flow_args.start, "start point x1,...,xn")->required();
    flow->add_option("--t0", flow_args.t0, "start time")->capture_default_str();
    flow->add_option("--t1", flow_args.t1, "end time")->capture_default_str();
    flow->add_option("--samples", flow_args.samples, "number of samples")->capture_default_str();
    flow->add_option("--step", flow_args.step, "RK4 step for non-affine fields")->capture_default_str();
    flow->add_option("--out", flow_args.out, "output CSV (standard output if omitted)");

    std::string box = "-1,1";
    int resolution = 5;
    auto* stratify = app.add_subcommand("stratify", "Orbit dimension counts on a grid");
    stratify->add_option("file", file, "scenario JSON")->required();
    stratify->add_option("--box", box, "cube bounds lo,hi")->capture_default_str();
    stratify->add_option("--res", resolution, "grid points per axis")->capture_default_str();

    std::string target = "all";
    bool json = false;
    auto* verify = app.add_subcommand("verify", "Run built-in scenarios");
    verify->add_option("scenario", target, "scenario name or 'all'")->capture_default_str();
    verify->add_flag("--json", json, "JSON report instead of a table");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (check->parsed())
            return cmd_check(file, out);
        if (closure_cmd->parsed())
            return cmd_closure(file, out);
        if (classify->parsed())
            return cmd_classify(file, classify_options, out);
        if (orbit->parsed())
            return cmd_orbit(orbit_args, out);
        if (flow->parsed())
            return cmd_flow(flow_args, out);
        if (stratify->parsed())
            return cmd_stratify(file, box, resolution, out);
        if (verify->parsed())
            return cmd_verify(target, json, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UnknownScenario& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ScenarioFormatError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const IoFailure& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

} // namespace orbitfol
