#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "fixtures.hpp"
#include "vfb/boundary.hpp"
#include "vfb/measurements_io.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = VFB_CLI_PATH;

// Pulls "key = value" out of a truth file and the "[a, b]"-style pieces of a
// report line, to check interval containment end to end.
bool report_interval_contains(const std::string& report, const std::string& line_key, double f) {
    const std::size_t at = report.find(line_key);
    REQUIRE(at != std::string::npos);
    const std::size_t eol = report.find('\n', at);
    std::string line = report.substr(at + line_key.size(), eol - at - line_key.size());
    std::size_t pos = 0;
    while ((pos = line.find('[', pos)) != std::string::npos) {
        double lo = 0.0, hi = 0.0;
        if (std::sscanf(line.c_str() + pos, "[%lf, %lf]", &lo, &hi) == 2 && f >= lo - 1e-9 &&
            f <= hi + 1e-9)
            return true;
        ++pos;
    }
    return false;
}

int run(const std::string& args) {
    const int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

fs::path tmp_dir() {
    const fs::path dir = fs::current_path() / "cli_test_tmp";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

} // namespace

TEST_CASE("cli: ingest of a uniform-field trace") {
    const fs::path dir = tmp_dir();
    fixtures::UniformField f;
    f.sigma = {2.0, 1.0, 0.0};
    f.grad = {0.3, 0.0, 0.0, 0.1};
    {
        std::ofstream out(dir / "uniform.csv");
        vfb::boundary::write_trace_csv(out, fixtures::square_trace(f, 60, 1e-12));
    }
    const fs::path meas = dir / "uniform.meas.txt";
    CHECK(run("ingest " + (dir / "uniform.csv").string() + " --out " + meas.string()) == 0);

    const vfb::Measurements m = vfb::read_measurements_file(meas.string());
    CHECK(m.energy == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(m.a == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(m.b == doctest::Approx(0.03).epsilon(1e-9));
}

TEST_CASE("cli: ingest of the L0 body trace reproduces the laminate measurements") {
    const fs::path dir = tmp_dir();
    {
        std::ofstream out(dir / "l0.csv");
        vfb::boundary::write_trace_csv(out, fixtures::l0_trace());
    }
    const fs::path meas = dir / "l0.meas.txt";
    CHECK(run("ingest " + (dir / "l0.csv").string() + " --out " + meas.string()) == 0);
    const vfb::Measurements m = vfb::read_measurements_file(meas.string());
    CHECK(std::abs(m.energy - 50.0 / 9.0) <= 1e-12);
    CHECK(std::abs(m.a - 208.0 / 27.0) <= 1e-12);
    CHECK(std::abs(m.b - 1.0) <= 1e-12);
}

TEST_CASE("cli: bounds can ingest a trace directly") {
    const fs::path dir = tmp_dir();
    {
        std::ofstream out(dir / "l0b.csv");
        vfb::boundary::write_trace_csv(out, fixtures::l0_trace());
    }
    spit(dir / "bounds_trace.json",
         "{\n"
         "  \"phases\": {\"kappa1\": 2, \"mu1\": 1, \"kappa2\": 1, \"mu2\": 0.5},\n"
         "  \"trace\": \"" + (dir / "l0b.csv").string() + "\",\n"
         "  \"report\": \"" + (dir / "report_trace.txt").string() + "\"\n"
         "}\n");
    CHECK(run("bounds " + (dir / "bounds_trace.json").string()) == 0);
    CHECK(report_interval_contains(slurp(dir / "report_trace.txt"), "intersection: ", 0.5));
}

TEST_CASE("cli: zero measurements give the whole fraction range") {
    const fs::path dir = tmp_dir();
    spit(dir / "zero.json",
         "{\n"
         "  \"phases\": {\"kappa1\": 2, \"mu1\": 1, \"kappa2\": 1, \"mu2\": 0.5},\n"
         "  \"measurements\": {\"sigma0\": [0,0,0], \"grad0\": [0,0,0,0],\n"
         "                     \"energy\": 0, \"a\": 0, \"b\": 0, \"area\": 1},\n"
         "  \"report\": \"" + (dir / "zero_report.txt").string() + "\"\n"
         "}\n");
    CHECK(run("bounds " + (dir / "zero.json").string()) == 0);
    const std::string report = slurp(dir / "zero_report.txt");
    CHECK(report.find("intersection: [0, 1]") != std::string::npos);
}

TEST_CASE("cli: malformed trace row exits 2, degenerate trace exits 3") {
    const fs::path dir = tmp_dir();
    spit(dir / "bad.csv", "0,0,0,0,0,0\n1,0,0,oops,0,0\n1,1,0,0,0,0\n");
    CHECK(run("ingest " + (dir / "bad.csv").string()) == 2);

    spit(dir / "flat.csv", "0,0,0,0,0,0\n1,0,0,0,0,0\n2,0,0,0,0,0\n");
    CHECK(run("ingest " + (dir / "flat.csv").string()) == 3);
}

TEST_CASE("cli: oracle -> bounds pipeline contains the truth and is deterministic") {
    const fs::path dir = tmp_dir();
    const std::string prefix = (dir / "lam").string();
    CHECK(run("oracle laminate --kappa1 2 --mu1 1 --kappa2 1 --mu2 0.5 --theta 0 --f1 0.5 "
              "--loading hydrostatic --out-prefix " + prefix) == 0);

    const std::string truth = slurp(dir / "lam.truth.txt");
    CHECK(truth.find("f1 = 0.5") != std::string::npos);

    spit(dir / "bounds.json",
         "{\n"
         "  \"phases\": {\"kappa1\": 2, \"mu1\": 1, \"kappa2\": 1, \"mu2\": 0.5},\n"
         "  \"measurements_file\": \"" + prefix + ".measurements.txt\",\n"
         "  \"report\": \"" + (dir / "report1.txt").string() + "\",\n"
         "  \"slack_csv\": \"" + (dir / "slacks.csv").string() + "\"\n"
         "}\n");
    CHECK(run("bounds " + (dir / "bounds.json").string()) == 0);

    const std::string report = slurp(dir / "report1.txt");
    CHECK(report.find("intersection: ") != std::string::npos);
    CHECK(report.find("intersection: (empty)") == std::string::npos);
    CHECK(report_interval_contains(report, "intersection: ", 0.5));

    // Same closure for a fem oracle.
    const std::string fem_prefix = (dir / "disk").string();
    CHECK(run("oracle fem --shape disk --n 32 --radius 0.25 --kappa1 2 --mu1 1 --kappa2 1 "
              "--mu2 0.5 --out-prefix " + fem_prefix) == 0);
    const std::string fem_truth = slurp(dir / "disk.truth.txt");
    double f_true = -1.0;
    REQUIRE(std::sscanf(fem_truth.c_str() + fem_truth.find("f1 = "), "f1 = %lf", &f_true) == 1);
    spit(dir / "bounds_fem.json",
         "{\n"
         "  \"phases\": {\"kappa1\": 2, \"mu1\": 1, \"kappa2\": 1, \"mu2\": 0.5},\n"
         "  \"measurements_file\": \"" + fem_prefix + ".measurements.txt\",\n"
         "  \"report\": \"" + (dir / "report_fem.txt").string() + "\"\n"
         "}\n");
    CHECK(run("bounds " + (dir / "bounds_fem.json").string()) == 0);
    CHECK(report_interval_contains(slurp(dir / "report_fem.txt"), "intersection: ", f_true));

    // Byte-identical rerun.
    spit(dir / "bounds2.json",
         "{\n"
         "  \"phases\": {\"kappa1\": 2, \"mu1\": 1, \"kappa2\": 1, \"mu2\": 0.5},\n"
         "  \"measurements_file\": \"" + prefix + ".measurements.txt\",\n"
         "  \"report\": \"" + (dir / "report2.txt").string() + "\"\n"
         "}\n");
    CHECK(run("bounds " + (dir / "bounds2.json").string()) == 0);
    CHECK(slurp(dir / "report1.txt") == slurp(dir / "report2.txt"));

    // The slack CSV has a header plus the scan grid.
    const std::string csv = slurp(dir / "slacks.csv");
    CHECK(csv.find("f1,translation_alpha_min") == 0);
}

TEST_CASE("cli: bounds exit codes for contrast and inconsistency") {
    const fs::path dir = tmp_dir();
    spit(dir / "contrast.json",
         "{\n"
         "  \"phases\": {\"kappa1\": 2, \"mu1\": 1, \"kappa2\": 2, \"mu2\": 0.5},\n"
         "  \"measurements\": {\"sigma0\": [0,0,0], \"grad0\": [0,0,0,0],\n"
         "                     \"energy\": 0, \"a\": 0, \"b\": 0, \"area\": 1}\n"
         "}\n");
    CHECK(run("bounds " + (dir / "contrast.json").string()) == 5);

    // Negative energy with zero averages cannot come from any field.
    spit(dir / "impossible.json",
         "{\n"
         "  \"phases\": {\"kappa1\": 2, \"mu1\": 1, \"kappa2\": 1, \"mu2\": 0.5},\n"
         "  \"measurements\": {\"sigma0\": [0,0,0], \"grad0\": [0,0,0,0],\n"
         "                     \"energy\": -1, \"a\": 0, \"b\": 0, \"area\": 1}\n"
         "}\n");
    CHECK(run("bounds " + (dir / "impossible.json").string()) == 4);

    spit(dir / "both.json",
         "{\n"
         "  \"phases\": {\"kappa1\": 2, \"mu1\": 1, \"kappa2\": 1, \"mu2\": 0.5},\n"
         "  \"measurements\": {\"sigma0\": [0,0,0], \"grad0\": [0,0,0,0],\n"
         "                     \"energy\": 0, \"a\": 0, \"b\": 0},\n"
         "  \"trace\": \"x.csv\"\n"
         "}\n");
    CHECK(run("bounds " + (dir / "both.json").string()) == 3);

    spit(dir / "broken.json", "{ not json\n");
    CHECK(run("bounds " + (dir / "broken.json").string()) == 2);
}

TEST_CASE("cli: oracle parameter validation") {
    const fs::path dir = tmp_dir();
    CHECK(run("oracle fem --shape disk --n 16 --radius 0.9 --out-prefix " +
              (dir / "x").string()) == 2);
    CHECK(run("oracle laminate --f1 1.5 --out-prefix " + (dir / "y").string()) == 2);
    CHECK(run("oracle nonsense --out-prefix " + (dir / "z").string()) == 2);
}

TEST_CASE("cli: fem oracle from a geometry file, with trace emission") {
    const fs::path dir = tmp_dir();
    {
        std::ofstream out(dir / "geom.txt");
        vfb::fem::write_geometry(out, vfb::fem::geometry_disk(16, 0.3));
    }
    const std::string prefix = (dir / "gdisk").string();
    CHECK(run("oracle fem --shape file --geometry " + (dir / "geom.txt").string() +
              " --kappa1 2 --mu1 1 --kappa2 1 --mu2 0.5 --trace-samples 120 --out-prefix " +
              prefix) == 0);
    CHECK(fs::exists(dir / "gdisk.measurements.txt"));
    CHECK(fs::exists(dir / "gdisk.trace.csv"));

    // The emitted trace feeds straight back into ingest.
    CHECK(run("ingest " + (dir / "gdisk.trace.csv").string() + " --out " +
              (dir / "gdisk.ingested.txt").string()) == 0);
    const vfb::Measurements volume =
        vfb::read_measurements_file(prefix + ".measurements.txt");
    const vfb::Measurements ingested =
        vfb::read_measurements_file((dir / "gdisk.ingested.txt").string());
    CHECK(ingested.energy == doctest::Approx(volume.energy).epsilon(0.05));
    CHECK(ingested.a == doctest::Approx(volume.a).epsilon(0.05));
}

TEST_CASE("cli: pairs verdicts") {
    const fs::path dir = tmp_dir();
    const std::string phases =
        "\"phases\": {\"kappa1\": 2, \"mu1\": 1, \"kappa2\": 1, \"mu2\": 0.5}";
    const std::string pair =
        "\"sigma0\": [3.9283710065919, -0.15713484026368, 0],\n  \"eps0\": [1.4142135623731, 0, 0]";

    spit(dir / "pair_ok.json", "{\n  " + phases + ",\n  " + pair + ",\n  \"f1\": 0.5,\n" +
                                   "  \"output\": \"" + (dir / "verdict1.txt").string() + "\"\n}\n");
    CHECK(run("pairs " + (dir / "pair_ok.json").string()) == 0);
    const std::string v1 = slurp(dir / "verdict1.txt");
    CHECK(v1.find("admissible = 1") != std::string::npos);

    spit(dir / "pair_bad.json", "{\n  " + phases + ",\n  " + pair + ",\n  \"f1\": 0.05,\n" +
                                    "  \"output\": \"" + (dir / "verdict2.txt").string() + "\"\n}\n");
    CHECK(run("pairs " + (dir / "pair_bad.json").string()) == 0);
    const std::string v2 = slurp(dir / "verdict2.txt");
    CHECK(v2.find("admissible = 0") != std::string::npos);
    CHECK(v2.find("VIOLATED") != std::string::npos);

    spit(dir / "pair_range.json",
         "{\n  " + phases + ",\n  " + pair +
             ",\n  \"f1_range\": {\"from\": 0.1, \"to\": 0.9, \"count\": 9},\n" +
             "  \"output\": \"" + (dir / "range.csv").string() + "\"\n}\n");
    CHECK(run("pairs " + (dir / "pair_range.json").string()) == 0);
    const std::string csv = slurp(dir / "range.csv");
    CHECK(csv.find("f1,admissible,min_slack") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
}

TEST_CASE("cli: sweep table") {
    const fs::path dir = tmp_dir();
    spit(dir / "sweep.json",
         "{\n"
         "  \"phases\": {\"kappa1\": 2, \"mu1\": 1, \"kappa2\": 1, \"mu2\": 0.5},\n"
         "  \"sigma0\": [3.9283710065919, -0.15713484026368, 0],\n"
         "  \"f1\": 0.5,\n"
         "  \"grid\": {\"vary\": [1, 2], \"lo\": [-0.4, -0.4], \"hi\": [0.4, 0.4],\n"
         "             \"count\": [3, 4], \"fixed_value\": 1.4142135623731},\n"
         "  \"output\": \"" + (dir / "sweep.csv").string() + "\"\n"
         "}\n");
    CHECK(run("sweep " + (dir / "sweep.json").string()) == 0);
    const std::string csv = slurp(dir / "sweep.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 13); // header + 12 rows
}
