#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bnf/engine.hpp"

namespace tnf {

// Options carried by a problem file alongside the mathematical data.
struct problem_options {
    unsigned seed = 0;
    int kmax_per_order = 64;
    int dioph_horizon = 100;
    int retain_b = -1;        // -1 auto
    int order = 3;            // default order for cmd_compute when --order is absent
    double drop_tol = 1e-30;  // amplitude storage floor
    int qgrid_points = 256;   // Q_p grid resolution

    fourier_config fourier() const {
        fourier_config cfg;
        cfg.drop_tol = real(drop_tol);
        cfg.qgrid_points = qgrid_points;
        return cfg;
    }
};

struct problem {
    hamiltonian_spec spec;
    problem_options options;
};

// ---- Fourier / Taylor data <-> JSON (schemas are part of the external
// interface: series as {dim, real, modes:[{k, re, im}]} with modes in
// lexicographic k order; graded data as {dim, m_min, m_max, parts}).
nlohmann::json series_to_json(const fourier_series& u);
fourier_series series_from_json(const nlohmann::json& j);

nlohmann::json taylor_to_json(const taylor_fourier& f);
taylor_fourier taylor_from_json(const nlohmann::json& j);

// Problem file {dim, omega, tau, kappa?, rho, L0?, L1?, L2?, terms,
// domain_radius, order_M?, options?}.  A degree-0 term (additive constant)
// is dropped at ingestion; degree-1 terms are schema errors since the
// linear part must be exactly <omega, r>.
problem problem_from_json(const nlohmann::json& j);
problem load_problem(const std::string& path);

// Self-contained result file: the computed data plus the problem block
// needed to re-derive diagnostics without the original input.
nlohmann::json result_to_json(const bnf_result& result, const hamiltonian_spec& spec,
                              const problem_options& opts);

struct result_bundle {
    problem prob;
    bnf_result result;
};

result_bundle result_from_json(const nlohmann::json& j);
result_bundle load_result(const std::string& path);

// Deterministic JSON writer: keys sorted (nlohmann's std::map order),
// floats at 17 significant digits, no locale dependence.
std::string dump_json(const nlohmann::json& j, int indent = 1);

std::string format_double(double v); // %.17g

// CSV with %.17g cells; every row must match the header arity.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
nlohmann::json load_json_file(const std::string& path);

} // namespace tnf
