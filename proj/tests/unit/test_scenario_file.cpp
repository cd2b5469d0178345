#include <filesystem>

#include <gtest/gtest.h>

#include "orbitfol/classify.hpp"
#include "orbitfol/errors.hpp"
#include "orbitfol/scenario_file.hpp"
#include "test_support.hpp"

using namespace orbitfol;
using orbitfol::testing::vec;

namespace {

const std::filesystem::path kExamples = ORBITFOL_EXAMPLES_DIR;

} // namespace

TEST(ScenarioFile, ParsesBothFieldShapes)
{
    const ScenarioFile s = parse_scenario(R"({
        "name": "demo", "dim": 3,
        "fields": [{"matrix": [[0,1,0],[-1,0,0],[0,0,0]], "offset": [0,0,2]}, {"components": ["1","0","0"]}],
        "points": {"p": [1,2,3]},
        "invariants": ["z"]
    })");
    EXPECT_EQ(s.name, "demo");
    EXPECT_EQ(s.dim, 3);
    ASSERT_EQ(s.fields.size(), 2u);
    ASSERT_TRUE(s.fields[0].affine.has_value());
    EXPECT_EQ(s.fields[0].affine->offset(), vec({0, 0, 2}));
    EXPECT_EQ(s.fields[1].components, (std::vector<std::string>{"1", "0", "0"}));
    ASSERT_EQ(s.points.size(), 1u);
    EXPECT_EQ(s.points[0].second, vec({1, 2, 3}));

    const FieldFamily family = to_family(s);
    EXPECT_EQ(family.members()[0], catalog::rotation_r3(2) + 2.0 * catalog::translation_r3(2));
    EXPECT_EQ(family.members()[1], catalog::translation_r3(0));
}

TEST(ScenarioFile, RejectsMalformedInput)
{
    EXPECT_THROW(parse_scenario("{"), ScenarioFormatError);
    EXPECT_THROW(parse_scenario("[]"), ScenarioFormatError);
    EXPECT_THROW(parse_scenario(R"({"dim": 3})"), ScenarioFormatError);
    EXPECT_THROW(parse_scenario(R"({"dim": 3, "fields": []})"), ScenarioFormatError);
    EXPECT_THROW(parse_scenario(R"({"dim": 2, "fields": [{"components": ["x"]}]})"), ScenarioFormatError);
    EXPECT_THROW(parse_scenario(R"({"dim": 2, "fields": [{"components": ["x", "z"]}]})"), ScenarioFormatError);
    EXPECT_THROW(parse_scenario(R"({"dim": 2, "fields": [{"matrix": [[0, 1]]}]})"), ScenarioFormatError);
    EXPECT_THROW(parse_scenario(R"({"dim": 2, "fields": [{"matrix": [[0,1],[-1,0]]}], "invariants": ["x +"]})"),
                 ScenarioFormatError);
    EXPECT_THROW(load_scenario(kExamples / "does_not_exist.json"), ScenarioFormatError);
}

TEST(ScenarioFile, NonKillingFieldsAreRejectedByFamily)
{
    EXPECT_THROW(to_family(load_scenario(kExamples / "not_killing.json")), NotKillingError);
    EXPECT_THROW(to_family(parse_scenario(R"({"dim": 2, "fields": [{"components": ["x*y", "0"]}]})")), NotKillingError);
}

TEST(ScenarioFile, ExamplesRoundTrip)
{
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(kExamples)) {
        if (entry.path().extension() != ".json")
            continue;
        ++count;
        const ScenarioFile first = load_scenario(entry.path());
        const ScenarioFile second = parse_scenario(serialize_scenario(first));
        EXPECT_EQ(first, second) << entry.path();
        EXPECT_EQ(serialize_scenario(second), serialize_scenario(first));
        if (entry.path().filename() != "not_killing.json") {
            const FieldFamily a = to_family(first);
            const FieldFamily b = to_family(second);
            EXPECT_EQ(a.members(), b.members()) << entry.path();
        }
    }
    EXPECT_GE(count, 8);
}

TEST(ScenarioFile, ExampleFamiliesClassify)
{
    const std::vector<std::pair<std::string, FoliationType>> expected = {
        {"lines.json", FoliationType::ParallelLines},
        {"circles.json", FoliationType::ConcentricCircles},
        {"helix.json", FoliationType::Helices},
        {"planes.json", FoliationType::ParallelPlanes},
        {"spheres.json", FoliationType::ConcentricSpheres},
        {"cylinders.json", FoliationType::ConcentricCylinders},
        {"euclidean.json", FoliationType::WholeSpace},
    };
    for (const auto& [file, type] : expected)
        EXPECT_EQ(classify_r3(to_family(load_scenario(kExamples / file))).type, type) << file;
}
