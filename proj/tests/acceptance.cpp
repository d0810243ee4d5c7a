// Runs every shipped preset, evaluates the figure criteria and prints one line
// per criterion. Exit status is nonzero when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <random>

#include "osw/cli.hpp"
#include "osw/parallel.hpp"
#include "osw/protocols.hpp"

namespace fs = std::filesystem;
using namespace osw;

namespace {

cli::CriterionReport arbitrary_scalings() {
    // Non-target identity for random per-beam scalings and constant kx.
    std::mt19937_64 rng = substream(2024, 0);
    std::uniform_real_distribution<double> kx(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> scale(0.5, 1.5);
    double worst = 0.0;
    for (auto id : {ProtocolId::OSW_LS1, ProtocolId::OSW_LS2}) {
        const auto c = make_protocol(id, {std::numbers::pi / 2, 0.0}, 1.0, 400);
        for (int i = 0; i < 200; ++i) {
            DriveContext ctx;
            ctx.is_target = false;
            ctx.phase_kx = kx(rng);
            ctx.rabi_scale_1 = scale(rng);
            ctx.rabi_scale_2 = scale(rng);
            worst = std::max(worst, infidelity(propagate(c, ctx), Mat2::identity()));
        }
    }
    return {"5b", "non-target identity under random beam scalings and kx",
            worst < 1e-10 ? cli::Verdict::pass : cli::Verdict::fail,
            "worst infidelity over 400 draws " + cli::format_number(worst) + " < 1e-10"};
}

cli::CriterionReport property_suite() {
    const int status = std::system(OSW_PROPERTY_SUITE " --minimal");
    return {"10", "standalone property suite", status == 0 ? cli::Verdict::pass : cli::Verdict::fail,
            "exit status " + std::to_string(status)};
}

}  // namespace

int main() {
    const fs::path out = fs::temp_directory_path() / "oswgate_acceptance";
    fs::remove_all(out);
    fs::create_directories(out);

    bool runs_ok = true;
    std::vector<fs::path> presets;
    for (const auto& e : fs::directory_iterator(OSW_CONFIG_DIR)) {
        if (e.path().extension() == ".json") presets.push_back(e.path());
    }
    std::sort(presets.begin(), presets.end());
    for (const auto& p : presets) {
        const auto t0 = std::chrono::steady_clock::now();
        cli::RunOverrides o;
        o.output = (out / p.stem()).string() + ".csv";
        const int status = cli::run(p, o);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << "run " << p.filename().string() << " -> status " << status << " (" << cli::format_number(secs)
                  << " s)" << std::endl;
        runs_ok = runs_ok && status == 0;
    }

    auto report = cli::compare_figures(out);
    report.push_back(arbitrary_scalings());
    report.push_back(property_suite());
    std::cout << cli::format_report(report);

    bool ok = runs_ok;
    for (const auto& r : report) ok = ok && r.verdict == cli::Verdict::pass;
    std::cout << (ok ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
    return ok ? 0 : 1;
}
