#include "brute_force.hpp"

#include "polylearn/cli.hpp"
#include "polylearn/matrix_io.hpp"
#include "polylearn/random.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace polylearn;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "polylearn");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("polylearn_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

json without_timings(json report) {
    report.erase("timings");
    return report;
}

}  // namespace

TEST_CASE("matrix files round-trip to the bit") {
    Rng rng = stream_rng(1, 0);
    Matrix M(3, 5);
    for (int j = 0; j < 5; ++j) M.col(j) = 1e3 * gaussian_vector(rng, 3);
    M(0, 0) = 1.0 / 3.0;
    M(1, 0) = -2.5e-300;
    const PointMatrix W(M);
    std::istringstream in(io::format_matrix(W));
    CHECK(io::parse_matrix(in) == W);
    CHECK(io::format_matrix(W).rfind("dims 3 5\n", 0) == 0);

    std::istringstream empty(io::format_matrix(PointMatrix(2, 0)));
    CHECK(io::parse_matrix(empty).count() == 0);
}

TEST_CASE("matrix parse errors report line and column") {
    std::istringstream bad("dims 2 2\n1 2\n3 x\n");
    try {
        io::parse_matrix(bad);
        FAIL("expected ParseError");
    } catch (const io::ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 3);
    }
    std::istringstream header("dimz 2 2\n");
    CHECK_THROWS_AS(io::parse_matrix(header), io::ParseError);
    std::istringstream short_input("dims 2 2\n1 2\n3\n");
    CHECK_THROWS_AS(io::parse_matrix(short_input), io::ParseError);
    std::istringstream trailing("dims 1 1\n1 2\n");
    CHECK_THROWS_AS(io::parse_matrix(trailing), io::ParseError);
    std::istringstream inf("dims 1 1\ninf\n");
    CHECK_THROWS_AS(io::parse_matrix(inf), io::ParseError);
}

TEST_CASE("constants parsing") {
    const auto c = cli::parse_constants("c=5,c0=7");
    CHECK(c.c == 5.0);
    CHECK(c.c_prime == 100.0);
    CHECK(c.c0 == 7.0);
    CHECK(cli::parse_constants("").c == 20.0);
    CHECK_THROWS_AS(cli::parse_constants("q=1"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_constants("c=abc"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_constants("c=-1"), InvalidArgument);
}

TEST_CASE("gen two-gaussian writes files and is deterministic") {
    const fs::path a = scratch("gen_a"), b = scratch("gen_b");
    REQUIRE(run({"gen", "--kind", "two-gaussian", "--d", "10", "--n", "200", "--seed", "7", "--out", a.string()}).code == 0);
    REQUIRE(run({"gen", "--kind", "two-gaussian", "--d", "10", "--n", "200", "--seed", "7", "--out", b.string()}).code == 0);
    for (const char* f : {"A.mat", "P.mat", "M.mat", "manifest.json"}) {
        REQUIRE(fs::exists(a / f));
        CHECK(slurp(a / f) == slurp(b / f));
    }
    const json m = load(a / "manifest.json");
    CHECK(m["d"] == 10);
    CHECK(m["k"] == 2);
    CHECK(m["n"] == 200);
    CHECK(m["w0"] == 0.5);
    CHECK(m["seed"] == 7);
    CHECK(m["sigma0"].get<double>() > 0.0);
    CHECK(io::read_matrix(a / "A.mat").count() == 200);
}

TEST_CASE("gen rejects infeasible cluster mass") {
    const fs::path dir = scratch("gen_bad");
    const Run r = run({"gen", "--kind", "lkp", "--d", "5", "--k", "3", "--n", "100", "--w0", "0.5", "--out", dir.string()});
    CHECK(r.code == cli::kPrecondition);
    CHECK(r.err.find("w0 * k") != std::string::npos);
}

TEST_CASE("unknown subcommands and missing options fail") {
    CHECK(run({"frobnicate"}).code != 0);
    CHECK(run({"softhull", "--epsilon", "0.1"}).code != 0);
    CHECK(run({"softhull", "--points", "/nonexistent.mat", "--epsilon", "0.1", "--delta", "0.5", "--epsilon3", "0.2"}).code ==
          cli::kFailure);
}

TEST_CASE("fixtures, softhull and rsh-estimate reports") {
    const fs::path dir = scratch("fixtures");
    REQUIRE(run({"fixtures", "--out", dir.string(), "--d", "50"}).code == 0);
    CHECK(fs::exists(dir / "square-plus-midpoint.mat"));

    const fs::path rep = dir / "soft.json";
    const Run s = run({"softhull", "--points", (dir / "square-plus-midpoint.mat").string(), "--epsilon", "0.01",
                       "--delta", "0.3", "--epsilon3", "0.05", "--out", rep.string()});
    REQUIRE(s.code == 0);
    const json sr = load(rep);
    CHECK(sr["result"]["verdict"] == "found");
    CHECK(sr["result"]["Q_indices"] == json::array({0, 1, 2, 3}));
    CHECK(sr["tool"] == "polylearn");
    CHECK(sr["version"] == cli::kVersion);
    CHECK(sr["config"]["epsilon3"] == 0.05);
    CHECK(sr["timings"].size() == 1);

    const fs::path rsh_rep = dir / "rsh.json";
    REQUIRE(run({"rsh-estimate", "--vertices", (dir / "example1-segment.mat").string(), "--point",
                 (dir / "example1-point.mat").string(), "--delta", "1", "--m", "50", "--trials", "5000", "--seed", "3",
                 "--out", rsh_rep.string()})
                .code == 0);
    const json rr = load(rsh_rep);
    CHECK(rr["result"]["theoretical_lower_bound"].get<double>() == doctest::Approx(2.44140625e-5));
    CHECK(rr["result"]["trials"] == 5000);
    CHECK(rr["seed"] == 3);

    const Run sqrt_bad = run({"softhull", "--points", (dir / "two-cluster.mat").string(), "--epsilon", "0.01",
                              "--delta", "0.1", "--sqrt"});
    CHECK(sqrt_bad.code == cli::kPrecondition);
    CHECK(sqrt_bad.err.find("delta > 16 sqrt(epsilon)") != std::string::npos);
}

TEST_CASE("kolp report and determinism") {
    const fs::path dir = scratch("kolp");
    REQUIRE(run({"gen", "--kind", "lkp", "--d", "12", "--k", "3", "--n", "1500", "--w0", "0.1", "--noise", "2e-5",
                 "--delta-target", "0.5", "--cluster-spread", "1", "--seed", "4", "--out", dir.string()})
                .code == 0);
    const std::vector<std::string> args = {"kolp", "--data", (dir / "A.mat").string(), "--k", "3", "--w0", "0.1",
                                           "--delta", "0.5", "--m", "2000", "--truth", (dir / "M.mat").string(),
                                           "--manifest", (dir / "manifest.json").string(), "--seed", "9"};
    auto first = args, second = args;
    first.insert(first.end(), {"--out", (dir / "r1.json").string(), "--estimates", (dir / "e1.mat").string()});
    second.insert(second.end(), {"--out", (dir / "r2.json").string(), "--estimates", (dir / "e2.mat").string()});
    REQUIRE(run(first).code == 0);
    REQUIRE(run(second).code == 0);
    const json r = load(dir / "r1.json");
    CHECK(r["result"]["per_vertex_error"].size() == 3);
    CHECK(r["result"]["success"] == true);
    CHECK(r["result"].contains("accuracy_bound"));
    CHECK(r["timings"].size() == 4);
    CHECK(r["config"]["sigma0"].is_number());
    CHECK(without_timings(r)["result"] == without_timings(load(dir / "r2.json"))["result"]);
    CHECK(slurp(dir / "e1.mat") == slurp(dir / "e2.mat"));
}

TEST_CASE("learning, separation and audit commands") {
    const fs::path dir = scratch("learn");
    io::write_matrix(dir / "sq.mat", brute::cols({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    io::write_matrix(dir / "a.mat", brute::cols({{2, 0.5}}));

    const Run h = run({"haus-learn", "--vertices", (dir / "sq.mat").string(), "--m", "200", "--prefix-curve"});
    REQUIRE(h.code == 0);
    const json hr = json::parse(h.out);
    CHECK(hr["result"]["hausdorff_by_prefix"].size() == 200);
    CHECK(hr["result"]["hausdorff_to_truth"].get<double>() <= 0.05 * std::sqrt(2.0));

    const Run l = run({"list-learn", "--vertices", (dir / "sq.mat").string(), "--m", "500", "--delta", "0.5",
                       "--oracle", "noisy", "--epsilon", "0.001"});
    REQUIRE(l.code == 0);
    CHECK(json::parse(l.out)["result"]["success"] == true);
    CHECK(run({"list-learn", "--vertices", (dir / "sq.mat").string(), "--m", "5", "--delta", "0.9"}).code ==
          cli::kPrecondition);

    const Run s = run({"sep-reduce", "--vertices", (dir / "sq.mat").string(), "--point", (dir / "a.mat").string(),
                       "--delta", "0.5", "--queries", "1000"});
    REQUIRE(s.code == 0);
    const json sr = json::parse(s.out);
    CHECK(sr["result"]["verdict"] == "separated");
    CHECK(sr["result"]["verified"] == true);

    const Run n = run({"audit-oracle", "--kind", "needle", "--d", "64", "--queries", "256", "--seed", "2"});
    REQUIRE(n.code == 0);
    const json nr = json::parse(n.out);
    CHECK(nr["result"]["zero_answers_audit_valid_sampled"] == true);
    CHECK(nr["result"]["no_point_near_both_needles"] == true);

    const Run e = run({"audit-oracle", "--kind", "noisy", "--vertices", (dir / "sq.mat").string(), "--epsilon",
                       "0.05", "--trials", "300"});
    REQUIRE(e.code == 0);
    CHECK(json::parse(e.out)["result"]["passed"] == 300);
}
