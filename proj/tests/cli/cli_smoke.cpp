// End-to-end exercise of the command-line tool: synth-weights -> verify ->
// check -> bench on the shipped platoon config, plus error-path checks.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    std::printf("%s %s\n", ok ? "[ok]" : "[FAIL]", what.c_str());
    if (!ok) ++failures;
}

int run(const std::string& cmd) {
    std::printf("$ %s\n", cmd.c_str());
    return std::system(cmd.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: cli_smoke <mareach-binary> <configs-dir>\n");
        return 2;
    }
    const std::string bin = argv[1];
    const fs::path configs = argv[2];

    fs::path tmp = fs::temp_directory_path() / "mareach_cli_smoke";
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    fs::copy_file(configs / "platoon.json", tmp / "platoon.json");
    const std::string cfg = (tmp / "platoon.json").string();

    expect(run(bin + " synth-weights --config " + cfg + " --hidden 15 15 --seed 5 > " +
               (tmp / "synth.log").string()) == 0,
           "synth-weights succeeds");
    expect(fs::exists(tmp / "weights/platoon/pi_2_1.json"), "weight files written");

    const std::string result = (tmp / "result.json").string();
    expect(run(bin + " verify --config " + cfg + " --steps 1 --workers 2 --out " + result +
               " --csv " + (tmp / "csv").string() + " > " + (tmp / "verify.log").string()) == 0,
           "verify succeeds");
    expect(fs::exists(result), "result file written");
    expect(fs::exists(tmp / "csv/agent_5_bounds.csv"), "CSV export written");

    expect(run(bin + " check --config " + cfg + " --result " + result +
               " --samples 1000 > " + (tmp / "check.log").string()) == 0,
           "check passes on an honest result");

    // Tampered result must fail the containment check.
    {
        std::ifstream in(result);
        std::string text((std::istreambuf_iterator<char>(in)), {});
        const std::string needle = "19.9";
        auto pos = text.find(needle);
        if (pos != std::string::npos) text.replace(pos, needle.size(), "99.9");
        std::ofstream(tmp / "tampered.json") << text;
        expect(run(bin + " check --config " + cfg + " --result " +
                   (tmp / "tampered.json").string() + " --samples 200 2> " +
                   (tmp / "tampered.log").string()) != 0,
               "check rejects a tampered result");
    }

    expect(run(bin + " bench --config " + cfg + " --agents 1 2 --steps 1 > " +
               (tmp / "bench.log").string()) == 0,
           "bench sweep runs");

    // Unknown config fields are rejected by name.
    std::ofstream(tmp / "bad.json") << R"({"horizon": 1, "agents": [], "typo_field": 3})";
    expect(run(bin + " verify --config " + (tmp / "bad.json").string() + " 2> " +
               (tmp / "bad.log").string()) != 0,
           "unknown config field rejected");
    {
        std::ifstream in(tmp / "bad.log");
        std::string text((std::istreambuf_iterator<char>(in)), {});
        expect(text.find("typo_field") != std::string::npos, "error names the field");
        expect(text.find("ParseError") != std::string::npos, "error is machine-readable");
    }

    std::printf("cli_smoke: %d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
