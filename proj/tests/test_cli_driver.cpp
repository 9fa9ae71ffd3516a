// End-to-end checks of the CLI surface: region -> count -> sample -> height
// -> render round trip, plus the exit-code contract.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kBin = DIMERLAB_BIN;
const fs::path kWork = CLI_WORK_DIR;

int run(const std::string& args) {
    const std::string cmd = kBin + " " + args + " > " + (kWork / "stdout.txt").string() + " 2> " +
                            (kWork / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct WorkDir {
    WorkDir() {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
    }
};

} // namespace

TEST_CASE("region, count, sample, height and render round trip") {
    WorkDir wd;
    const std::string region = (kWork / "region.json").string();
    CHECK(run("region --kind rect --a 1 --b 1 --eps 0.2 --out " + region) == 0);
    REQUIRE(fs::exists(region));

    CHECK(run("count --region " + region) == 0);
    const std::string count = slurp(kWork / "stdout.txt");
    CHECK(count.find("\n") != std::string::npos);

    const std::string samples = (kWork / "samples").string();
    CHECK(run("sample --region " + region + " --algo wilson --samples 3 --seed 5 --out " +
              samples) == 0);
    REQUIRE(fs::exists(fs::path(samples) / "tiling_000000.txt"));
    REQUIRE(fs::exists(fs::path(samples) / "metadata.json"));
    const std::string meta = slurp(fs::path(samples) / "metadata.json");
    CHECK(meta.find("splitmix64+xoshiro256**") != std::string::npos);
    CHECK(meta.find("\"seed\": 5") != std::string::npos);

    const std::string tiling = (fs::path(samples) / "tiling_000001.txt").string();
    const std::string heights = (kWork / "heights.csv").string();
    CHECK(run("height --region " + region + " --tiling " + tiling + " --out " + heights) == 0);
    CHECK(slurp(heights).find('*') != std::string::npos);

    const std::string svg = (kWork / "tiling.svg").string();
    CHECK(run("render --region " + region + " --tiling " + tiling + " --heights --out " + svg) ==
          0);
    CHECK(slurp(svg).rfind("<svg", 0) == 0);
    // determinism: a second render is byte-identical
    const std::string svg2 = (kWork / "tiling2.svg").string();
    CHECK(run("render --region " + region + " --tiling " + tiling + " --heights --out " + svg2) ==
          0);
    CHECK(slurp(svg) == slurp(svg2));
}

TEST_CASE("sampling is reproducible per seed and distinct across seeds") {
    WorkDir wd;
    const std::string region = (kWork / "region.json").string();
    REQUIRE(run("region --kind rect --a 1 --b 1 --eps 0.1 --out " + region) == 0);
    const std::string a = (kWork / "a").string(), b = (kWork / "b").string(),
                      c = (kWork / "c").string();
    REQUIRE(run("sample --region " + region + " --samples 2 --seed 9 --out " + a) == 0);
    REQUIRE(run("sample --region " + region + " --samples 2 --seed 9 --out " + b) == 0);
    REQUIRE(run("sample --region " + region + " --samples 2 --seed 10 --out " + c) == 0);
    CHECK(slurp(fs::path(a) / "tiling_000000.txt") == slurp(fs::path(b) / "tiling_000000.txt"));
    CHECK(slurp(fs::path(a) / "tiling_000001.txt") == slurp(fs::path(b) / "tiling_000001.txt"));
    CHECK(slurp(fs::path(a) / "tiling_000000.txt") != slurp(fs::path(c) / "tiling_000000.txt"));
}

TEST_CASE("usage errors exit with code 2") {
    WorkDir wd;
    CHECK(run("definitely-not-a-subcommand") == 2);
    CHECK(run("count --region " + (kWork / "missing.json").string()) == 2);
    // malformed region JSON
    std::ofstream(kWork / "bad.json") << "{ not json";
    CHECK(run("count --region " + (kWork / "bad.json").string()) == 2);
    // sample requires --seed
    const std::string region = (kWork / "region.json").string();
    REQUIRE(run("region --kind rect --a 1 --b 1 --eps 0.2 --out " + region) == 0);
    CHECK(run("sample --region " + region + " --samples 1 --out " + (kWork / "x").string()) == 2);
}

TEST_CASE("moments and gff subcommands emit CSV tables") {
    WorkDir wd;
    std::ofstream(kWork / "points.json") << "[[0.0,1.0],[0.0,2.0],[1.0,1.0],[-1.0,2.0]]";
    const std::string moments_csv = (kWork / "moments.csv").string();
    CHECK(run("moments --domain halfplane --points " + (kWork / "points.json").string() +
              " --k 2 --method both --out " + moments_csv) == 0);
    const std::string table = slurp(moments_csv);
    CHECK(table.rfind("k,method,value,error_estimate", 0) == 0);
    CHECK(table.find("pairing") != std::string::npos);
    CHECK(table.find("quadrature") != std::string::npos);

    const std::string gff_csv = (kWork / "gff.csv").string();
    CHECK(run("gff --domain rect:1,1 --modes 64 --samples 20000 --phi eigen:1,1 --seed 3 --out " +
              gff_csv) == 0);
    CHECK(slurp(gff_csv).find("variance_analytic,0.0506") != std::string::npos);
}

TEST_CASE("verify exact suite passes and writes a complete manifest") {
    WorkDir wd;
    const std::string manifest = (kWork / "manifest.json").string();
    CHECK(run("verify --suite exact --budget full --out " + manifest) == 0);
    const std::string text = slurp(manifest);
    for (const char* key : {"configHash", "\"criterion\": 1", "\"criterion\": 4",
                            "\"criterion\": 5", "\"criterion\": 6", "\"criterion\": 11",
                            "measured", "tolerance", "passed"})
        CHECK(text.find(key) != std::string::npos);
}
