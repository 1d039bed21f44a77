// torusnf command line: compute | diagnose | verify | checks.
// Talks to the shared library exclusively through the C API.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "torusnf.h"

namespace {

constexpr size_t kSummaryCap = 1 << 16;

int finish(tnf_status status, int exit_code, const std::string& summary) {
    if (!summary.empty()) std::fputs(summary.c_str(), stdout);
    if (status != TNF_OK && summary.empty())
        std::fprintf(stderr, "error: %s\n", tnf_last_error());
    return exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Birkhoff normal forms near Diophantine Kronecker tori"};
    app.require_subcommand(1);

    // ---- compute
    std::string problem_path, out_dir = "out";
    int order = 0;
    long seed = -1;
    int retain_b = -2;
    auto* compute = app.add_subcommand("compute", "compute the normal form of a problem file");
    compute->add_option("problem", problem_path, "problem JSON path")->required();
    compute->add_option("--order", order, "normal form order M (default: order_M from the file)");
    compute->add_option("--out", out_dir, "output directory (result.json, summary.txt)");
    compute->add_option("--seed", seed, "seed override");
    compute->add_flag_callback("--retain-b", [&] { retain_b = 1; },
                               "retain B_m parts regardless of order");
    compute->add_flag_callback("--no-retain-b", [&] { retain_b = 0; }, "drop B_m parts");

    // ---- diagnose
    std::string result_path;
    std::vector<double> s_grid;
    auto* diagnose = app.add_subcommand("diagnose", "Gevrey envelope fits and inequality reports");
    diagnose->add_option("result", result_path, "result JSON path")->required();
    diagnose->add_option("--s-grid", s_grid, "smoothness grid (default 0 1 2 3)");
    diagnose->add_option("--out", out_dir, "output directory");

    // ---- verify
    std::string verify_problem, verify_result;
    std::vector<double> radii, escape_r0;
    int samples = 64;
    double band = 2.0, horizon = 1e4, dt = 1e-2;
    bool skip_escape = false;
    auto* verify = app.add_subcommand("verify", "flatness scaling and effective-stability probes");
    verify->add_option("problem", verify_problem, "problem JSON path")->required();
    verify->add_option("result", verify_result, "result JSON path")->required();
    verify->add_option("--radii", radii, "flatness radii (default: 8 geometric in [1e-3, 1e-2])");
    verify->add_option("--samples", samples, "random samples per radius");
    verify->add_option("--escape-r0", escape_r0, "escape-time starting radii");
    verify->add_option("--band", band, "escape band factor");
    verify->add_option("--horizon", horizon, "escape-time cap T");
    verify->add_option("--dt", dt, "integrator step");
    verify->add_option("--seed", seed, "seed override");
    verify->add_flag("--skip-escape", skip_escape, "flatness scan only");
    verify->add_option("--out", out_dir, "output directory");

    // ---- checks
    std::string suite = "all", checks_out;
    unsigned checks_seed = 0;
    auto* checks = app.add_subcommand("checks", "norm/gamma/combinatorics inequality suites");
    checks->add_option("--suite", suite, "wiener | gamma | combinatorics | all");
    checks->add_option("--seed", checks_seed, "suite seed");
    checks->add_option("--out", checks_out, "JSON report path");

    CLI11_PARSE(app, argc, argv);

    std::string summary(kSummaryCap, '\0');
    int exit_code = 1;

    if (compute->parsed()) {
        tnf_status st = tnf_cmd_compute(problem_path.c_str(), out_dir.c_str(), order, seed,
                                        retain_b, summary.data(), kSummaryCap, &exit_code);
        return finish(st, exit_code, summary.c_str());
    }
    if (diagnose->parsed()) {
        tnf_status st = tnf_cmd_diagnose(result_path.c_str(), out_dir.c_str(),
                                         s_grid.empty() ? nullptr : s_grid.data(),
                                         (int)s_grid.size(), summary.data(), kSummaryCap,
                                         &exit_code);
        return finish(st, exit_code, summary.c_str());
    }
    if (verify->parsed()) {
        tnf_status st = tnf_cmd_verify(
            verify_problem.c_str(), verify_result.c_str(), out_dir.c_str(),
            radii.empty() ? nullptr : radii.data(), (int)radii.size(), samples,
            escape_r0.empty() ? nullptr : escape_r0.data(), (int)escape_r0.size(), band, horizon,
            dt, seed, skip_escape ? 1 : 0, summary.data(), kSummaryCap, &exit_code);
        return finish(st, exit_code, summary.c_str());
    }
    if (checks->parsed()) {
        tnf_status st = tnf_cmd_checks(suite.c_str(), checks_seed,
                                       checks_out.empty() ? nullptr : checks_out.c_str(),
                                       summary.data(), kSummaryCap, &exit_code);
        return finish(st, exit_code, summary.c_str());
    }
    return 1;
}
