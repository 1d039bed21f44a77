#include "bnf/driver.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "bnf/canonical.hpp"
#include "bnf/checks.hpp"
#include "bnf/flow.hpp"
#include "bnf/gevrey.hpp"

namespace tnf {

using nlohmann::json;

int exit_code_for(const error& e) {
    switch (e.code()) {
        case errc::schema:
        case errc::io:
        case errc::invalid_argument:
        case errc::degenerate_input:
        case errc::dimension_mismatch:
        case errc::axis_range:
            return exit_schema;
        case errc::resonant_mode:
            return exit_resonant;
        default:
            return exit_error;
    }
}

std::vector<double> geometric_radii(double lo, double hi, int count) {
    std::vector<double> out;
    if (count == 1) return {lo};
    for (int i = 0; i < count; ++i)
        out.push_back(lo * std::pow(hi / lo, i / double(count - 1)));
    return out;
}

namespace {

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(errc::io, "cannot create output directory: " + dir);
}

std::string path_join(const std::string& dir, const std::string& name) {
    return dir.empty() ? name : dir + "/" + name;
}

json report_to_json(const inequality_report& r) {
    json j;
    j["name"] = r.name;
    j["grid"] = r.grid;
    j["worst_ratio"] = r.worst_ratio;
    j["pass"] = r.pass;
    j["witness"] = r.witness;
    if (r.fitted_constant > 0) j["fitted_constant"] = r.fitted_constant;
    return j;
}

std::string compute_summary_text(const bnf_result& res) {
    std::string out;
    out += "order M = " + std::to_string(res.order) + ", dim n = " + std::to_string(res.dim) + "\n";
    out += "kappa = " + format_double(double(res.omega.kappa)) +
           ", tau = " + format_double(double(res.omega.tau)) + "\n";
    out += "m | R_m coefficients | min divisor | discarded mass | residual\n";
    for (const auto& l : res.logs) {
        std::string rm;
        auto it = res.normal_form.find(l.m);
        if (it != res.normal_form.end())
            for (const auto& [alpha, series] : it->second.terms())
                rm += " I^" + index_to_string(alpha) + ": " + format_double(double(fs_mean(series).re));
        if (rm.empty()) rm = " (zero)";
        out += std::to_string(l.m) + " |" + rm + " | " + format_double(double(l.min_divisor)) +
               " | " + format_double(double(l.discarded_mass)) + " | " +
               format_double(double(l.max_residual)) + "\n";
    }
    if (res.resonant_abort)
        out += "ABORTED (resonant mode): " + res.error_message + "\n";
    return out;
}

} // namespace

int cmd_compute(const compute_request& req, std::string& summary) {
    try {
        problem prob = load_problem(req.problem_path);
        if (req.seed >= 0) prob.options.seed = (unsigned)req.seed;
        if (req.kmax_per_order > 0) prob.options.kmax_per_order = req.kmax_per_order;
        if (req.retain_b >= -1) prob.options.retain_b = req.retain_b;
        int order = req.order > 0 ? req.order : prob.options.order;
        prob.options.order = order;

        engine_options eopts;
        eopts.kmax_per_order = prob.options.kmax_per_order;
        eopts.retain_b = prob.options.retain_b;
        eopts.fourier = prob.options.fourier();
        bnf_result res = bnf_run(prob.spec, order, eopts);

        ensure_dir(req.out_dir);
        write_text_file(path_join(req.out_dir, "result.json"),
                        dump_json(result_to_json(res, prob.spec, prob.options)));
        std::string text = compute_summary_text(res);
        write_text_file(path_join(req.out_dir, "summary.txt"), text);
        summary += text;
        return res.resonant_abort ? exit_resonant : exit_ok;
    } catch (const error& e) {
        summary += std::string("error: ") + e.what() + "\n";
        return exit_code_for(e);
    }
}

int cmd_diagnose(const diagnose_request& req, std::string& summary) {
    try {
        result_bundle bundle = load_result(req.result_path);
        const bnf_result& res = bundle.result;
        if (res.resonant_abort)
            fail(errc::resonant_mode,
                 "diagnose: result is a partial resonant-abort run: " + res.error_message);
        if (!res.b_parts)
            fail(errc::degenerate_input,
                 "diagnose: result was computed without retained B_m (rerun compute with "
                 "retain_b on)");
        if (req.s_grid.size() < 2) fail(errc::invalid_argument, "diagnose: need >= 2 s-grid points");
        ensure_dir(req.out_dir);

        // ---- norm profiles
        std::vector<norm_profile> g_profiles;
        std::vector<std::vector<double>> g_rows, b_rows;
        for (const auto& [m, part] : res.g.parts()) {
            norm_profile p = make_norm_profile(part, req.s_grid);
            for (size_t i = 0; i < req.s_grid.size(); ++i)
                g_rows.push_back({double(m), req.s_grid[i], double(p.upper[i]),
                                  double(p.max_single[i])});
            g_profiles.push_back(std::move(p));
        }
        for (const auto& [m, part] : *res.b_parts) {
            norm_profile p = make_norm_profile(part, req.s_grid);
            for (size_t i = 0; i < req.s_grid.size(); ++i)
                b_rows.push_back({double(m), req.s_grid[i], double(p.upper[i]),
                                  double(p.max_single[i])});
        }
        std::vector<std::string> header = {"m", "s", "p_upper", "p_max_single"};
        write_csv(path_join(req.out_dir, "profiles_g.csv"), header, g_rows);
        write_csv(path_join(req.out_dir, "profiles_b.csv"), header, b_rows);

        json constants;
        constants["rho"] = double(res.gevrey.rho);
        constants["tau"] = double(res.gevrey.tau);
        constants["mu"] = double(res.gevrey.mu());
        constants["kappa"] = double(res.gevrey.kappa);

        bool vacuous = true;
        for (const auto& p : g_profiles)
            for (real v : p.upper)
                if (v > real(0)) vacuous = false;

        gevrey_params fitted = res.gevrey;
        if (vacuous) {
            // integrable input: g vanishes identically, bound holds with C1 = C2 = 1
            fitted.C1 = fitted.C2 = 1;
            constants["c1"] = 1.0;
            constants["c2"] = 1.0;
            constants["vacuous"] = true;
            constants["violations"] = 0;
        } else {
            fit_report fr = fit_constants(g_profiles, res.gevrey);
            fitted.C1 = fr.c1;
            fitted.C2 = fr.c2;
            constants["c1"] = double(fr.c1);
            constants["c2"] = double(fr.c2);
            constants["vacuous"] = false;
            constants["entries"] = fr.entries;
            constants["violations"] = fr.violations;
            constants["worst_margin"] = double(fr.worst_margin);
            if (fr.violations != 0)
                fail(errc::internal, "diagnose: envelope fit left violations (should not happen)");
        }

        // ---- B_m envelope and lemma spot-checks (skip when vacuous)
        json lemmas = json::array();
        if (!vacuous) {
            constants["b_envelope"] = double(fit_b_envelope(res, fitted, req.s_grid));
            if (res.order >= 4) {
                auto reports = verify_estimate_lemmas(res, bundle.prob.spec, fitted,
                                                      req.lemma_budget,
                                                      bundle.prob.options.seed, req.s_grid);
                for (const auto& r : reports) lemmas.push_back(report_to_json(r));
            }
        }
        constants["lemma_reports"] = lemmas;

        // ---- optimal truncation / stability-time table over a radius sweep
        std::vector<std::vector<double>> trows;
        if (!vacuous) {
            for (double r : geometric_radii(1e-6, 1e-1, 11)) {
                int mstar = optimal_truncation(real(r), fitted);
                remainder_estimate rb = remainder_bound(real(r), multi_index(res.dim, 0),
                                                        multi_index(res.dim, 0), 1, fitted);
                stability_time st = stability_time_estimate(real(r), fitted);
                trows.push_back({r, double(mstar), double(rb.log_value), st.log10_t});
            }
        }
        write_csv(path_join(req.out_dir, "truncation.csv"),
                  {"radius", "m_star", "log_remainder", "log10_T"}, trows);

        write_text_file(path_join(req.out_dir, "constants.json"), dump_json(constants));
        summary += "diagnose: C1 = " + format_double(constants["c1"].get<double>()) +
                   ", C2 = " + format_double(constants["c2"].get<double>()) +
                   (vacuous ? " (vacuous)" : "") + "\n";
        bool lemmas_ok = true;
        for (const auto& l : lemmas)
            if (!l["pass"].get<bool>()) lemmas_ok = false;
        return lemmas_ok ? exit_ok : exit_error;
    } catch (const error& e) {
        summary += std::string("error: ") + e.what() + "\n";
        return exit_code_for(e);
    }
}

int cmd_verify(const verify_request& req, std::string& summary) {
    try {
        problem prob = load_problem(req.problem_path);
        result_bundle bundle = load_result(req.result_path);
        const bnf_result& res = bundle.result;
        if (res.resonant_abort)
            fail(errc::resonant_mode,
                 "verify: result is a partial resonant-abort run: " + res.error_message);
        if (prob.spec.dim() != res.dim)
            fail(errc::schema, "verify: problem/result dimension mismatch");
        ensure_dir(req.out_dir);
        unsigned seed = req.seed >= 0 ? (unsigned)req.seed : prob.options.seed;

        // ---- flatness scan
        std::vector<double> radii =
            req.radii.empty() ? geometric_radii(1e-3, 1e-2, 8) : req.radii;
        std::sort(radii.begin(), radii.end());
        flatness_report flat = flatness_scan(prob.spec, res, radii, req.samples, seed);
        std::vector<std::vector<double>> frows;
        for (const auto& row : flat.rows)
            frows.push_back({row.radius, row.sup_residual, flat.slope_fitted ? flat.slope : 0.0});
        write_csv(path_join(req.out_dir, "flatness.csv"),
                  {"r", "sup_residual", "fitted_slope"}, frows);
        if (flat.slope_fitted)
            summary += "flatness slope = " + format_double(flat.slope) + " (theoretical " +
                       std::to_string(res.order + 1) + ")\n";
        else
            summary += "flatness residuals at rounding level; slope fit skipped\n";

        // ---- escape times
        if (!req.skip_escape) {
            flow_system sys(prob.spec);
            integrator_config cfg;
            cfg.dt = real(req.dt);
            std::vector<std::vector<double>> erows(req.escape_r0.size());
            std::vector<trajectory_summary> runs(req.escape_r0.size());
            std::vector<double> r0s = req.escape_r0;
            parallel_for(r0s.size(), [&](std::size_t i) {
                runs[i] = escape_time(sys, real(r0s[i]), real(req.band), real(req.horizon), cfg,
                                      /*keep_samples=*/true);
                const trajectory_summary& ts = runs[i];
                erows[i] = {r0s[i],
                            ts.escaped ? 1.0 : 0.0,
                            ts.escaped ? double(ts.escape_time) : req.horizon,
                            double(ts.max_action_dev),
                            double(ts.max_energy_rel_dev),
                            double(ts.energy_secular_drift)};
            });
            const int n = prob.spec.dim();
            std::vector<std::string> theader = {"t"};
            for (int j = 1; j <= n; ++j) theader.push_back("theta_" + std::to_string(j));
            for (int j = 1; j <= n; ++j) theader.push_back("r_" + std::to_string(j));
            theader.push_back("energy");
            theader.push_back("action_dev");
            for (size_t i = 0; i < runs.size(); ++i) {
                std::vector<std::vector<double>> rows;
                for (const auto& s : runs[i].samples) {
                    std::vector<double> row = {double(s.t)};
                    for (real v : s.theta) row.push_back(double(v));
                    for (real v : s.r) row.push_back(double(v));
                    row.push_back(double(s.energy));
                    row.push_back(double(s.action_dev));
                    rows.push_back(std::move(row));
                }
                write_csv(path_join(req.out_dir, "trajectory_" + std::to_string(i) + ".csv"),
                          theader, rows);
            }
            write_csv(path_join(req.out_dir, "escape.csv"),
                      {"r0", "escaped", "time", "max_action_dev", "max_energy_rel_dev",
                       "energy_secular_drift"},
                      erows);
            for (const auto& row : erows)
                summary += "escape r0=" + format_double(row[0]) +
                           (row[1] > 0 ? " t=" + format_double(row[2])
                                       : " exceeded cap (t >= " + format_double(row[2]) + ")") +
                           "\n";
        }

        if (flat.slope_fitted && flat.slope < res.order + 1 - 0.2) {
            summary += "FAIL: fitted slope below M + 1 - 0.2\n";
            return exit_verify_failed;
        }
        return exit_ok;
    } catch (const error& e) {
        summary += std::string("error: ") + e.what() + "\n";
        return exit_code_for(e);
    }
}

int cmd_checks(const checks_request& req, std::string& summary) {
    try {
        json report;
        report["suite"] = req.suite;
        report["seed"] = (int)req.seed;
        json entries = json::array();
        bool all_pass = true;
        auto add = [&](const inequality_report& r) {
            entries.push_back(report_to_json(r));
            all_pass = all_pass && r.pass;
        };

        bool wiener = req.suite == "wiener" || req.suite == "all";
        bool gamma = req.suite == "gamma" || req.suite == "all";
        bool comb = req.suite == "combinatorics" || req.suite == "all";
        if (!wiener && !gamma && !comb)
            fail(errc::invalid_argument, "checks: unknown suite '" + req.suite + "'");

        if (wiener) {
            auto hom = check_homological_bound(req.seed, 100, {0, 1, 2.5, 5});
            add(hom.bound);
            add(hom.bound_p);
            add(hom.residual);
            for (const auto& r : check_product_bounds(req.seed + 1, 200, {0, 1.5, 3, 6.25})) add(r);
            add(check_derivative_compat(req.seed + 2, 50, {0, 1, 2.5}));
            for (const auto& r : check_sandwich(req.seed + 3, 30, {0, 1, 2.5})) add(r);
        }
        if (gamma) {
            add(check_gamma_beta_identity(req.seed));
            add(check_beta_cauchy());
            add(check_beta_lower());
            for (double nu : {1.0, 2.0})
                for (double delta : {0.5, 1.0, 2.0}) add(check_gamma_ratio(nu, delta));
            for (double rho : {1.0, 1.5, 2.0}) add(check_stirling_equiv(rho, 40));
        }
        if (comb) add(check_combinatorics());

        report["reports"] = entries;
        report["all_pass"] = all_pass;
        if (!req.out_path.empty()) write_text_file(req.out_path, dump_json(report));
        int passed = 0;
        for (const auto& e : entries)
            if (e["pass"].get<bool>()) ++passed;
        summary += "checks: " + std::to_string(passed) + "/" + std::to_string(entries.size()) +
                   " passed\n";
        for (const auto& e : entries)
            if (!e["pass"].get<bool>())
                summary += "  FAIL " + e["name"].get<std::string>() + "\n";
        return all_pass ? exit_ok : exit_error;
    } catch (const error& e) {
        summary += std::string("error: ") + e.what() + "\n";
        return exit_code_for(e);
    }
}

} // namespace tnf
