// End-to-end CLI checks: exit codes, manifest-driven reproduction of every
// subcommand's outputs byte for bit, and flag-over-manifest precedence.
// argv[1] is the dualitylab binary path.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what.c_str());
    failures += ok ? 0 : 1;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& cmd) {
    const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_roundtrip <path-to-dualitylab>\n");
        return 2;
    }
    const std::string bin = std::string("\"") + argv[1] + "\"";
    const std::string dir = "cli_roundtrip_tmp";
    run("rm -rf " + dir);
    run("mkdir -p " + dir);
    const std::string p = dir + "/";

    // exit codes
    check(run(bin + " pattern --c 2 --out " + p + "x.csv") == 2,
          "invalid config exits 2");
    check(run(bin + " sample --policy eraser --c 0.5 --n 5 --out " + p + "x.csv") == 2,
          "violated measurement precondition exits 2");
    check(run(bin + " nonsense") == 2, "unknown subcommand exits 2");
    check(run(bin + " --help") == 0, "--help exits 0");

    // manifest round trips
    struct Case {
        std::string name;
        std::string first;
        std::vector<std::string> outputs;
    };
    const std::vector<Case> cases{
        {"pattern",
         " pattern --c 0.5 --overlap-r 0.25 --points 301 --out " + p + "pat1.csv",
         {"pat"}},
        {"sweep",
         " sweep --c-values 0,0.5,1 --r-values 0,1 --theta-values 0 --out " + p +
             "swe1.csv",
         {"swe"}},
        {"sample",
         " sample --n 3000 --seed 11 --policy location --c 0.7 --out " + p + "sam1.csv",
         {"sam"}},
        {"eraser", " eraser --n 3000 --seed 13 --bins 80 --out " + p + "era1.csv",
         {"era"}},
    };
    for (const Case& c : cases) {
        check(run(bin + c.first) == 0, c.name + " first run succeeds");
        const std::string stem = p + c.outputs[0];
        check(run(bin + " " + c.name + " --config " + stem + "1.csv.manifest.json --out " +
                  stem + "2.csv") == 0,
              c.name + " rerun from manifest succeeds");
        const std::string a = read_file(stem + "1.csv");
        const std::string b = read_file(stem + "2.csv");
        check(!a.empty() && a == b, c.name + " outputs byte-identical via manifest");
    }
    check(!read_file(p + "era1.csv.report.json").empty() &&
              read_file(p + "era1.csv.report.json") == read_file(p + "era2.csv.report.json"),
          "eraser report byte-identical via manifest");

    // default pattern contract: 2001 points over +-4 fringe widths
    check(run(bin + " pattern --c 0 --out " + p + "def.csv") == 0,
          "default pattern run succeeds");
    {
        std::istringstream is(read_file(p + "def.csv"));
        std::string header;
        std::getline(is, header);
        int rows = 0;
        std::string first;
        std::string line;
        while (std::getline(is, line)) {
            if (rows == 0) {
                first = line;
            }
            ++rows;
        }
        check(rows == 2001, "default pattern emits 2001 points");
        // reference config: w = 1.0157913670417430, grid starts at -4w
        const double x0 = std::strtod(first.c_str(), nullptr);
        check(std::fabs(x0 + 4.0 * 1.015791367041743) < 1e-12,
              "default grid starts at -4 fringe widths");
    }

    // explicit flags override manifest parameters
    check(run(bin + " sample --config " + p + "sam1.csv.manifest.json --n 7 --out " + p +
              "small.csv") == 0,
          "override run succeeds");
    {
        std::istringstream is(read_file(p + "small.csv"));
        std::string line;
        int lines = 0;
        while (std::getline(is, line)) {
            ++lines;
        }
        check(lines == 8, "--n override wins over manifest params");
    }

    run("rm -rf " + dir);
    std::printf("cli_roundtrip: %s\n", failures == 0 ? "all checks passed" : "FAILURES");
    return failures == 0 ? 0 : 1;
}
