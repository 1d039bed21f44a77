#pragma once

#include <string>
#include <vector>

#include "bnf/io.hpp"

namespace tnf {

// Exit-code contract shared with the CLI: 0 ok, 2 schema/input error,
// 3 resonant frequency, 4 verification (slope) failure, 1 anything else.
enum exit_code : int {
    exit_ok = 0,
    exit_error = 1,
    exit_schema = 2,
    exit_resonant = 3,
    exit_verify_failed = 4,
};

int exit_code_for(const error& e);

struct compute_request {
    std::string problem_path;
    std::string out_dir;
    int order = -1;     // -1: take order_M from the problem file
    int retain_b = -2;  // -2: problem/default policy, else -1 auto, 0 off, 1 on
    long seed = -1;     // -1: problem file seed
    int kmax_per_order = -1;
};

struct diagnose_request {
    std::string result_path;
    std::string out_dir;
    std::vector<double> s_grid = {0, 1, 2, 3};
    int lemma_budget = 200;
};

struct verify_request {
    std::string problem_path;
    std::string result_path;
    std::string out_dir;
    std::vector<double> radii;         // empty: 8 geometric radii in [1e-3, 1e-2]
    int samples = 64;
    std::vector<double> escape_r0 = {0.2, 0.1, 0.05};
    double band = 2.0;
    double horizon = 1e4;
    double dt = 1e-2;
    long seed = -1;
    bool skip_escape = false;
};

struct checks_request {
    std::string suite = "all"; // wiener | gamma | combinatorics | all
    unsigned seed = 0;
    std::string out_path;      // empty: report returned only in summary
};

// Each driver returns the process exit code and appends a short
// human-readable account to `summary` (the CLI prints it verbatim).
int cmd_compute(const compute_request& req, std::string& summary);
int cmd_diagnose(const diagnose_request& req, std::string& summary);
int cmd_verify(const verify_request& req, std::string& summary);
int cmd_checks(const checks_request& req, std::string& summary);

std::vector<double> geometric_radii(double lo, double hi, int count);

} // namespace tnf
