#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "orbitfol/cli.hpp"
#include "orbitfol/expr.hpp"

using namespace orbitfol;

namespace {

const std::filesystem::path kExamples = ORBITFOL_EXAMPLES_DIR;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_command(args, out, err);
    return {code, out.str(), err.str()};
}

std::string example(const std::string& name) { return (kExamples / name).string(); }

std::filesystem::path temp_path(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("orbitfol_cli_test_" + name);
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST(Cli, ClassifySpheres)
{
    const Result r = run({"classify", example("spheres.json")});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "{\"type\":\"ConcentricSpheres\",\"center\":[0,0,0]}\n");
    EXPECT_EQ(run({"classify", example("helix.json"), "--tol", "1e-10", "--seed", "3"}).code, 0);
    EXPECT_EQ(run({"classify", example("torus.json")}).code, 1);
}

TEST(Cli, CheckReportsFailures)
{
    EXPECT_EQ(run({"check", example("euclidean.json")}).code, 0);
    const Result bad = run({"check", example("not_killing.json")});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.out.find("field 1: FAIL"), std::string::npos);
    EXPECT_NE(bad.out.find("condition (1,1)"), std::string::npos);
    EXPECT_NE(bad.out.find("condition (1,2)"), std::string::npos);
}

TEST(Cli, Closure)
{
    const Result r = run({"closure", example("spheres.json")});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("dimension 3"), std::string::npos);
    EXPECT_NE(run({"closure", example("euclidean.json")}).out.find("dimension 6"), std::string::npos);
}

TEST(Cli, TorusOrbitCsv)
{
    const auto path = temp_path("cloud.csv");
    const Result r = run({"orbit", example("torus.json"), "--start", "1,0,0,0", "--steps", "500", "--seed", "7", "--out",
                          path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string text = read_file(path);
    std::istringstream lines(text);
    std::string header;
    std::getline(lines, header);
    EXPECT_EQ(header, "x1,x2,x3,x4,x^2+y^2+z^2+w^2,y*z-x*w");

    // Oracle: recompute the invariant from the exported coordinates.
    const Expression separator = parse_expr("y*z-x*w", 4);
    int rows = 0;
    for (std::string line; std::getline(lines, line); ++rows) {
        std::vector<double> v;
        std::istringstream cells(line);
        for (std::string cell; std::getline(cells, cell, ',');)
            v.push_back(std::stod(cell));
        ASSERT_EQ(v.size(), 6u);
        EXPECT_NEAR(v[5], 0.0, 1e-9);
        EXPECT_NEAR(separator.evaluate(Vector(Eigen::Map<Vector>(v.data(), 4))), 0.0, 1e-9);
        EXPECT_NEAR(v[4], 1.0, 1e-9);
    }
    EXPECT_EQ(rows, 501);

    const auto again = temp_path("cloud2.csv");
    run({"orbit", example("torus.json"), "--start", "1,0,0,0", "--steps", "500", "--seed", "7", "--out", again.string()});
    EXPECT_EQ(read_file(again), text);
    std::filesystem::remove(path);
    std::filesystem::remove(again);
}

TEST(Cli, OrbitPly)
{
    const auto path = temp_path("cloud.ply");
    ASSERT_EQ(run({"orbit", example("spheres.json"), "--start", "0,0,2", "--steps", "10", "--out", path.string()}).code,
              0);
    const std::string text = read_file(path);
    EXPECT_NE(text.find("element vertex 11\n"), std::string::npos);
    EXPECT_NE(text.find("property float z\nproperty float inv1\n"), std::string::npos);
    std::filesystem::remove(path);
}

TEST(Cli, FlowCsv)
{
    const Result r = run({"flow", example("lines.json"), "--start", "0,0,0", "--t1", "1", "--samples", "3"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "t,x1,x2,x3\n0,0,0,0\n0.5,0,0,0.5\n1,0,0,1\n");
    EXPECT_EQ(run({"flow", example("torus.json"), "--field", "2", "--start", "1,0,0,0"}).code, 0);
    EXPECT_EQ(run({"flow", example("torus.json"), "--field", "3", "--start", "1,0,0,0"}).code, 2);
}

TEST(Cli, Stratify)
{
    const Result r = run({"stratify", example("spheres.json"), "--box", "-1,1", "--res", "5"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("0    1      (0,0,0)"), std::string::npos);
    EXPECT_NE(r.out.find("2    124"), std::string::npos);
    EXPECT_NE(r.out.find("total 125"), std::string::npos);
}

TEST(Cli, Verify)
{
    const Result all = run({"verify", "all"});
    EXPECT_EQ(all.code, 0);
    EXPECT_EQ(run({"verify"}).out, all.out);
    const Result json = run({"verify", "s3_torus", "--json"});
    EXPECT_EQ(json.code, 0);
    EXPECT_EQ(json.out, run({"verify", "s3_torus", "--json"}).out);
    EXPECT_NE(json.out.find("\"pass\": true"), std::string::npos);
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"classify"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_EQ(run({"verify", "unknown"}).code, 2);
    EXPECT_EQ(run({"orbit", example("spheres.json"), "--start", "0,0", "--out", "x.csv"}).code, 2);
    EXPECT_EQ(run({"orbit", example("spheres.json"), "--start", "0,0,1", "--out", "x.txt"}).code, 2);
    EXPECT_EQ(run({"classify", example("missing.json")}).code, 3);
    EXPECT_EQ(run({"orbit", example("spheres.json"), "--start", "0,0,1", "--out", "/nonexistent/dir/x.csv"}).code, 3);
    EXPECT_EQ(run({"closure", example("not_killing.json")}).code, 1);
}
