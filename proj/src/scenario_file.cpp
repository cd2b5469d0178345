#include "orbitfol/scenario_file.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "orbitfol/errors.hpp"

namespace orbitfol {

using nlohmann::ordered_json;

AnyField FieldSpec::to_field() const
{
    if (affine)
        return *affine;
    return ExprField::parse(components);
}

bool operator==(const FieldSpec& a, const FieldSpec& b)
{
    if (a.affine.has_value() != b.affine.has_value())
        return false;
    return a.affine ? *a.affine == *b.affine : a.components == b.components;
}

bool operator==(const ScenarioFile& a, const ScenarioFile& b)
{
    if (a.name != b.name || a.dim != b.dim || a.fields != b.fields || a.invariants != b.invariants ||
        a.points.size() != b.points.size())
        return false;
    for (std::size_t k = 0; k < a.points.size(); ++k)
        if (a.points[k].first != b.points[k].first || a.points[k].second != b.points[k].second)
            return false;
    return true;
}

namespace {

Vector read_vector(const ordered_json& j, int dim, const std::string& what)
{
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw ScenarioFormatError(what + " must be an array of " + std::to_string(dim) + " numbers");
    Vector v(dim);
    for (int i = 0; i < dim; ++i) {
        if (!j[static_cast<std::size_t>(i)].is_number())
            throw ScenarioFormatError(what + " must contain numbers only");
        v(i) = j[static_cast<std::size_t>(i)].get<double>();
    }
    return v;
}

FieldSpec read_field(const ordered_json& j, int dim, std::size_t index)
{
    const std::string what = "field " + std::to_string(index + 1);
    if (!j.is_object())
        throw ScenarioFormatError(what + " must be an object");
    FieldSpec spec;
    if (j.contains("components")) {
        const auto& c = j["components"];
        if (!c.is_array() || static_cast<int>(c.size()) != dim)
            throw ScenarioFormatError(what + " needs " + std::to_string(dim) + " component expressions");
        for (const auto& e : c) {
            if (!e.is_string())
                throw ScenarioFormatError(what + " components must be strings");
            spec.components.push_back(e.get<std::string>());
        }
        try {
            (void)ExprField::parse(spec.components);
        } catch (const ParseError& e) {
            throw ScenarioFormatError(what + ": " + e.what());
        }
        return spec;
    }
    if (!j.contains("matrix"))
        throw ScenarioFormatError(what + " needs either \"matrix\" or \"components\"");
    const auto& m = j["matrix"];
    if (!m.is_array() || static_cast<int>(m.size()) != dim)
        throw ScenarioFormatError(what + " matrix must have " + std::to_string(dim) + " rows");
    Matrix a(dim, dim);
    for (int i = 0; i < dim; ++i)
        a.row(i) = read_vector(m[static_cast<std::size_t>(i)], dim, what + " matrix row").transpose();
    const Vector b = j.contains("offset") ? read_vector(j["offset"], dim, what + " offset") : Vector::Zero(dim);
    spec.affine = AffineField(a, b);
    return spec;
}

ordered_json write_vector(const Vector& v)
{
    ordered_json a = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back(v(i));
    return a;
}

} // namespace

ScenarioFile parse_scenario(const std::string& json_text)
{
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ScenarioFormatError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ScenarioFormatError("scenario must be a JSON object");

    ScenarioFile s;
    if (j.contains("name")) {
        if (!j["name"].is_string())
            throw ScenarioFormatError("\"name\" must be a string");
        s.name = j["name"].get<std::string>();
    }
    if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
        throw ScenarioFormatError("\"dim\" must be a positive integer");
    s.dim = j["dim"].get<int>();

    if (!j.contains("fields") || !j["fields"].is_array() || j["fields"].empty())
        throw ScenarioFormatError("\"fields\" must be a nonempty array");
    for (std::size_t k = 0; k < j["fields"].size(); ++k)
        s.fields.push_back(read_field(j["fields"][k], s.dim, k));

    if (j.contains("points")) {
        if (!j["points"].is_object())
            throw ScenarioFormatError("\"points\" must be an object of labelled coordinates");
        for (const auto& [label, value] : j["points"].items())
            s.points.emplace_back(label, read_vector(value, s.dim, "point " + label));
    }
    if (j.contains("invariants")) {
        if (!j["invariants"].is_array())
            throw ScenarioFormatError("\"invariants\" must be an array of expressions");
        for (const auto& e : j["invariants"]) {
            if (!e.is_string())
                throw ScenarioFormatError("invariants must be strings");
            try {
                (void)parse_expr(e.get<std::string>(), s.dim);
            } catch (const ParseError& err) {
                throw ScenarioFormatError("invariant '" + e.get<std::string>() + "': " + err.what());
            }
            s.invariants.push_back(e.get<std::string>());
        }
    }
    return s;
}

ScenarioFile load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ScenarioFormatError("cannot read scenario file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str());
}

std::string serialize_scenario(const ScenarioFile& scenario)
{
    ordered_json j;
    if (!scenario.name.empty())
        j["name"] = scenario.name;
    j["dim"] = scenario.dim;
    ordered_json fields = ordered_json::array();
    for (const auto& f : scenario.fields) {
        ordered_json spec;
        if (f.affine) {
            ordered_json rows = ordered_json::array();
            for (int i = 0; i < f.affine->dim(); ++i)
                rows.push_back(write_vector(f.affine->linear().row(i).transpose()));
            spec["matrix"] = std::move(rows);
            spec["offset"] = write_vector(f.affine->offset());
        } else {
            spec["components"] = f.components;
        }
        fields.push_back(std::move(spec));
    }
    j["fields"] = std::move(fields);
    if (!scenario.points.empty()) {
        ordered_json points = ordered_json::object();
        for (const auto& [label, p] : scenario.points)
            points[label] = write_vector(p);
        j["points"] = std::move(points);
    }
    if (!scenario.invariants.empty())
        j["invariants"] = scenario.invariants;
    return j.dump(2) + "\n";
}

FieldFamily to_family(const ScenarioFile& scenario)
{
    std::vector<AffineField> members;
    for (std::size_t k = 0; k < scenario.fields.size(); ++k) {
        const FieldSpec& spec = scenario.fields[k];
        if (spec.affine) {
            members.push_back(*spec.affine);
            continue;
        }
        const ExprField f = ExprField::parse(spec.components);
        auto affine = f.dim() <= 4 ? detect_affine(f) : std::nullopt;
        if (!affine)
            throw NotKillingError("field " + std::to_string(k + 1) + " is not affine, hence not a Killing field of R^" +
                                  std::to_string(scenario.dim));
        members.push_back(std::move(*affine));
    }
    return FieldFamily(std::move(members));
}

} // namespace orbitfol
