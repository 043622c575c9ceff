// End-to-end checks of the collatz-lab binary: exit codes, wire formats,
// determinism. The binary path arrives via COLLATZ_LAB_BIN.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>
#include <sys/wait.h>

namespace {

int failures = 0;

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& command) {
    std::FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed");
    std::string output;
    std::array<char, 4096> buffer;
    std::size_t n;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        output.append(buffer.data(), n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

void check(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "[FAIL] " << what << "\n";
    } else {
        std::cout << "[ ok ] " << what << "\n";
    }
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

} // namespace

int main() {
    const char* bin_env = std::getenv("COLLATZ_LAB_BIN");
    if (!bin_env) {
        std::cerr << "COLLATZ_LAB_BIN not set\n";
        return 1;
    }
    const std::string bin(bin_env);

    auto densities = run(bin + " densities --mod 2 --steps 3");
    check(densities.exit_code == 0, "densities exits 0");
    check(contains(densities.output, "1\t0\t3/4"), "densities has the 3/4 row");
    check(contains(densities.output, "2\t0\t5/8"), "densities has the 5/8 row");
    check(contains(densities.output, "3\t0\t11/16"), "densities has the 11/16 row");

    check(run(bin + " densities --mod 1 --steps 2").exit_code == 2,
          "modulus below 2 is a usage error (exit 2)");
    check(run(bin + " nonsense").exit_code == 2, "unknown subcommand exits 2");

    auto mod3 = run(bin + " densities --mod 3 --steps 2");
    check(contains(mod3.output, "2\t1\t1/3"), "densities mod 3 shows the exact 1/3 at step 2");

    auto again = run(bin + " densities --mod 2 --steps 3");
    check(again.output == densities.output, "identical invocations are byte-identical");

    auto model = run(bin + " model --chain mod3 --steps 4");
    check(model.exit_code == 0, "model exits 0");
    check(contains(model.output, "7/12"), "model shows 7/12 at step 2");
    check(contains(model.output, "limit\t3/5\t2/5"), "model limit row is (3/5, 2/5)");
    check(!contains(model.output, "false"), "closed form equals matrix powers at every row");

    auto parity_model = run(bin + " model --chain parity --steps 8");
    check(contains(parity_model.output, "limit\t2/3\t1/3"), "parity limit row is (2/3, 1/3)");

    auto compare = run(bin + " compare --mod 3 --steps 2 --max-k 1000");
    check(compare.exit_code == 0, "compare exits 0");
    {
        std::istringstream lines(compare.output);
        std::string line, row2;
        while (std::getline(lines, line))
            if (line.rfind("2\t", 0) == 0) row2 = line;
        check(contains(row2, "7/12\t1/3"), "compare shows model 7/12 vs exact 1/3 at step 2");
        check(contains(row2, "\t1/4"), "compare divergence at step 2 is exactly 1/4");
    }
    auto compare2 = run(bin + " compare --mod 2 --steps 10 --max-k 2000");
    {
        std::istringstream lines(compare2.output);
        std::string line;
        bool all_zero = true;
        bool header = true;
        while (std::getline(lines, line)) {
            if (header) { header = false; continue; }
            if (line.empty()) continue;
            all_zero = all_zero && line.substr(line.rfind('\t') + 1) == "0/1";
        }
        check(all_zero, "compare mod 2 divergence column is identically zero");
    }

    auto mixing = run(bin + " mixing --max-k 40 --format json");
    check(mixing.exit_code == 0, "mixing exits 0");
    {
        auto j = nlohmann::json::parse(mixing.output);
        check(j["results"]["mixing"]["contradiction_gap"][0]["num"] == "3" &&
              j["results"]["mixing"]["contradiction_gap"][0]["den"] == "5",
              "mixing JSON carries the exact 3/5 side of the gap");
        check(j["results"]["mixing"]["contradiction_gap"][1]["num"] == "2" &&
              j["results"]["mixing"]["contradiction_gap"][1]["den"] == "3",
              "mixing JSON carries the exact 2/3 side of the gap");
        bool has_assumption = false;
        for (const auto& a : j["assumptions"])
            has_assumption = has_assumption || a == "Collatz conjecture";
        check(has_assumption, "mixing report declares its assumption");
    }

    auto traj = run(bin + " trajectory --start 27 --start 8");
    check(traj.exit_code == 0, "trajectory exits 0");
    check(contains(traj.output, "27\t111\t"), "trajectory reports 111 steps for start 27");
    check(contains(traj.output, "\t2\t3\n"), "trajectory reports even frequency 2/3");
    check(contains(traj.output, "8\t3\t1\t4\t2\t2\t3"), "trajectory row for start 8");

    auto fixed = run(bin + " supernatural fixed-point --n 2^inf*5");
    check(fixed.exit_code == 0, "supernatural fixed-point exits 0");
    check(contains(fixed.output, "stationary fixed point"), "fixed-point verdict is stationary");

    auto oplus = run(bin + " supernatural oplus --a 3 --b 4");
    check(contains(oplus.output, "sum\t7"), "oplus 3 4 = 7");
    auto oplus_undef = run(bin + " supernatural oplus --a 2^inf --b 1");
    check(oplus_undef.exit_code == 0 && contains(oplus_undef.output, "defined\tfalse"),
          "oplus 2^inf 1 is undefined");

    check(run(bin + " densities --mod 2 --steps 30").exit_code == 3,
          "default flow budget makes step 30 exit 3");
    check(run("COLLATZ_LAB_BUDGET=5 " + bin + " trajectory --start 27").exit_code == 3,
          "trajectory budget from the environment exits 3");

    auto out_file = run(bin + " densities --mod 2 --steps 1 --out /tmp/collatz_lab_cli_test.tsv");
    check(out_file.exit_code == 0 && out_file.output.empty(), "--out writes no stdout");
    {
        std::ifstream f("/tmp/collatz_lab_cli_test.tsv");
        std::stringstream ss;
        ss << f.rdbuf();
        check(contains(ss.str(), "1\t0\t3/4"), "--out file holds the report");
    }

    auto json_env = run(bin + " densities --mod 2 --steps 1 --format json");
    {
        auto j = nlohmann::json::parse(json_env.output);
        check(j["command"] == "densities" && j.contains("parameters") &&
              j.contains("results") && j.contains("assumptions") && j.contains("provenance"),
              "JSON envelope has the full shape");
    }

    if (failures) {
        std::cerr << failures << " CLI check(s) failed\n";
        return 1;
    }
    std::cout << "all CLI checks passed\n";
    return 0;
}
