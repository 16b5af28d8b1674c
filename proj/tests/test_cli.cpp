#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ordstat/cli.hpp"

using namespace ordstat;
using Catch::Approx;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "ordstat");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = parse_and_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "ordstat_cli_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
    const auto path = scratch_dir() / name;
    std::ofstream(path) << text;
    return path.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kSmallVariance = R"(seed = 42
replicates = 2000

[small]
suite = variance
families = exponential, absgaussian
n = 10, 40
k = 1, 3, n/2, 3n/4
lambda = 0.5
)";

std::string golden_path() { return std::string(ORDSTAT_SOURCE_DIR) + "/tests/golden/variance_small.csv"; }

}  // namespace

TEST_CASE("successful run writes a CSV and exits 0", "[cli]") {
    const auto cfg = write_file("small.cfg", kSmallVariance);
    const auto out = (scratch_dir() / "small.csv").string();
    const auto r = run({"verify-variance", "--config", cfg, "--seed", "42", "--out", out});
    CHECK(r.code == kExitOk);
    const auto csv = slurp(out);
    CHECK(csv.rfind("suite,family,n,k,param,empirical,stderr,bound,margin,pass\n", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("report matches the golden file byte for byte", "[cli]") {
    const auto cfg = write_file("golden.cfg", kSmallVariance);
    const auto r = run({"verify-variance", "--config", cfg});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out == slurp(golden_path()));
}

TEST_CASE("reruns are byte identical across worker counts", "[cli]") {
    const auto cfg = write_file("det.cfg", kSmallVariance);
    ::setenv("ORDSTAT_THREADS", "1", 1);
    const auto a = run({"verify-variance", "--config", cfg});
    ::setenv("ORDSTAT_THREADS", "4", 1);
    const auto b = run({"verify-variance", "--config", cfg});
    ::setenv("ORDSTAT_THREADS", "0", 1);
    CHECK(a.out == b.out);
    const auto c = run({"verify-variance", "--config", cfg, "--seed", "43"});
    CHECK(c.out != a.out);
}

TEST_CASE("CSV rows round-trip through a parser", "[cli]") {
    const auto cfg = write_file("rt.cfg", kSmallVariance);
    const auto r = run({"verify-variance", "--config", cfg});
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() == 10);
        const double emp = std::stod(cells[5]);
        const double bound = std::stod(cells[7]);
        const double margin = std::stod(cells[8]);
        CHECK(format_real(emp) == cells[5]);
        CHECK(margin == bound - emp);
        ++rows;
    }
    CHECK(rows > 0);
}

TEST_CASE("empty report is header only", "[cli]") {
    const auto cfg = write_file("empty.cfg", "[e]\nsuite = variance\nfamilies = exponential\n");
    const auto r = run({"verify-variance", "--config", cfg});
    CHECK(r.code == kExitOk);
    CHECK(r.out == std::string(kCsvHeader) + "\n");
}

TEST_CASE("usage and configuration errors exit 1", "[cli]") {
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({"verify-variance"}).code == kExitUsage);
    CHECK(run({"verify-variance", "--config", "/nonexistent/x.cfg"}).code == kExitUsage);
    const auto bad_grid = write_file("badgrid.cfg", "[b]\nsuite = variance\nfamilies = exponential\nn = 10\nk = 10\n");
    const auto r = run({"verify-variance", "--config", bad_grid});
    CHECK(r.code == kExitUsage);
    CHECK(r.err.find("rank") != std::string::npos);
    const auto cfg = write_file("ok.cfg", kSmallVariance);
    CHECK(run({"verify-variance", "--config", cfg, "--set", "replicates=5"}).code == kExitUsage);
    CHECK(run({"verify-tails", "--config", cfg}).code == kExitUsage);
    CHECK(run({"bound", "--kind", "NOPE"}).code == kExitUsage);
    CHECK(run({"bound", "--kind", "GAUSS_SIGNED_MAX_VAR", "--n", "5"}).code == kExitUsage);
}

TEST_CASE("unwritable output exits 2", "[cli]") {
    const auto cfg = write_file("io.cfg", kSmallVariance);
    CHECK(run({"verify-variance", "--config", cfg, "--out", "/nonexistent/dir/out.csv"}).code == kExitNumerical);
}

TEST_CASE("numerical failures map to exit 2", "[cli]") {
    CHECK(exit_code_for(NumericalError("x")) == kExitNumerical);
    CHECK(exit_code_for(RangeError("x")) == kExitNumerical);
    CHECK(exit_code_for(IoError("x")) == kExitNumerical);
    CHECK(exit_code_for(InputError("x")) == kExitUsage);
}

TEST_CASE("forced bound violation exits 3", "[cli]") {
    const auto cfg = write_file("viol.cfg", kSmallVariance);
    const auto out = (scratch_dir() / "viol.csv").string();
    const auto r = run({"verify-variance", "--config", cfg, "--set", "test_hook_bound_scale=0.001", "--out", out});
    CHECK(r.code == kExitViolation);
    CHECK(slurp(out).find(",0\n") != std::string::npos);
}

TEST_CASE("bound command prints one value", "[cli]") {
    const auto r = run({"bound", "--kind", "GAUSS_ORDER_VAR", "--n", "100", "--k", "1"});
    CHECK(r.code == kExitOk);
    CHECK(std::stod(r.out) == Approx(3.539).margin(1e-3));
    CHECK(r.out.find('\n') == r.out.size() - 1);

    CHECK(std::stod(run({"bound", "--kind", "GAUSS_SIGNED_MAX_VAR", "--n", "1000"}).out) == Approx(2.829).margin(1e-3));
    CHECK(std::stod(run({"bound", "--kind", "EXP_LOWER_TAIL", "--n", "1000", "--k", "10", "--z", "1"}).out) ==
          Approx(0.013627).margin(1e-6));
    CHECK(std::stod(run({"bound", "--kind", "GAUSS_MEDIAN_BERNSTEIN", "--n", "100", "--t", "1"}).out) ==
          Approx(gaussian_median_bernstein(100, 1.0).threshold));
    const auto es = run({"bound", "--kind", "ES_VARIANCE", "--n", "20", "--k", "4", "--replicates", "100000"});
    CHECK(std::stod(es.out) == Approx(0.5).epsilon(0.03));
    const auto evt = run({"bound", "--kind", "EVT_LIMIT", "--gamma", "-1"});
    const auto lim = evt_limits(-1.0);
    CHECK(evt.out == format_real(lim.spacing) + " " + format_real(lim.variance) + " " + format_real(lim.ratio) + "\n");
}

TEST_CASE("one-row report is a two-line file", "[cli]") {
    BoundReport report;
    report.rows.push_back(judged_row("variance.ES_VARIANCE", "exponential", 20, 5, std::nan(""), 0.1, 0.01, 0.4));
    const auto path = (scratch_dir() / "one.csv").string();
    write_report(report, path);
    const auto text = slurp(path);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    CHECK(text.substr(text.find('\n') + 1) == "variance.ES_VARIANCE,exponential,20,5,nan,0.10000000000000001,"
                                              "0.01,0.40000000000000002,0.30000000000000004,1\n");
}
