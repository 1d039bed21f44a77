#include "torusnf.h"

#include <cstring>

#include "bnf/driver.hpp"

using namespace tnf;

// Handles own the full bundle so results round-trip through files without
// losing the problem block.
struct tnf_problem {
    problem prob;
};

struct tnf_result {
    hamiltonian_spec spec;
    problem_options opts;
    bnf_result result;
};

struct tnf_series {
    fourier_series series;
};

namespace {

thread_local std::string g_last_error;

tnf_status status_for(const error& e) {
    switch (e.code()) {
        case errc::schema:
        case errc::io:
        case errc::invalid_argument:
        case errc::degenerate_input:
        case errc::dimension_mismatch:
        case errc::axis_range:
            return TNF_ERR_SCHEMA;
        case errc::resonant_mode:
            return TNF_ERR_RESONANT;
        case errc::non_zero_mean:
            return TNF_ERR_SCHEMA;
        case errc::no_convergence:
            return TNF_ERR_NOCONV;
        default:
            return TNF_ERR;
    }
}

template <typename F>
tnf_status guarded(F&& body) {
    try {
        g_last_error.clear();
        return body();
    } catch (const error& e) {
        g_last_error = e.what();
        return status_for(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return TNF_ERR;
    } catch (...) {
        g_last_error = "unknown error";
        return TNF_ERR;
    }
}

void copy_out(const std::string& text, char* buffer, size_t cap) {
    if (!buffer || cap == 0) return;
    size_t n = std::min(cap - 1, text.size());
    std::memcpy(buffer, text.data(), n);
    buffer[n] = '\0';
}

tnf_status exit_to_status(int code) {
    switch (code) {
        case exit_ok: return TNF_OK;
        case exit_schema: return TNF_ERR_SCHEMA;
        case exit_resonant: return TNF_ERR_RESONANT;
        case exit_verify_failed: return TNF_ERR_VERIFY;
        default: return TNF_ERR;
    }
}

} // namespace

extern "C" {

const char* tnf_version(void) { return "0.1.0"; }

const char* tnf_last_error(void) { return g_last_error.c_str(); }

tnf_status tnf_problem_load(const char* path, tnf_problem** out) {
    return guarded([&]() -> tnf_status {
        if (!path || !out) fail(errc::invalid_argument, "null argument");
        *out = new tnf_problem{load_problem(path)};
        return TNF_OK;
    });
}

tnf_status tnf_problem_parse(const char* json_text, tnf_problem** out) {
    return guarded([&]() -> tnf_status {
        if (!json_text || !out) fail(errc::invalid_argument, "null argument");
        nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
        if (j.is_discarded()) fail(errc::schema, "invalid JSON text");
        *out = new tnf_problem{problem_from_json(j)};
        return TNF_OK;
    });
}

void tnf_problem_free(tnf_problem* p) { delete p; }

int tnf_problem_dim(const tnf_problem* p) { return p ? p->prob.spec.dim() : 0; }

tnf_status tnf_problem_kappa(const tnf_problem* p, double* kappa_out) {
    return guarded([&]() -> tnf_status {
        if (!p || !kappa_out) fail(errc::invalid_argument, "null argument");
        *kappa_out = double(p->prob.spec.omega().kappa);
        return TNF_OK;
    });
}

void tnf_compute_opts_init(tnf_compute_opts* opts) {
    if (!opts) return;
    opts->order = 0;
    opts->retain_b = -1;
    opts->seed = -1;
    opts->kmax_per_order = 0;
}

tnf_status tnf_compute(const tnf_problem* p, const tnf_compute_opts* opts, tnf_result** out) {
    return guarded([&]() -> tnf_status {
        if (!p || !out) fail(errc::invalid_argument, "null argument");
        problem prob = p->prob;
        engine_options eopts;
        if (opts) {
            if (opts->seed >= 0) prob.options.seed = (unsigned)opts->seed;
            if (opts->kmax_per_order > 0) prob.options.kmax_per_order = opts->kmax_per_order;
            if (opts->order > 0) prob.options.order = opts->order;
            eopts.retain_b = opts->retain_b;
        }
        eopts.kmax_per_order = prob.options.kmax_per_order;
        eopts.fourier = prob.options.fourier();
        bnf_result res = bnf_run(prob.spec, prob.options.order, eopts);
        bool resonant = res.resonant_abort;
        *out = new tnf_result{prob.spec, prob.options, std::move(res)};
        if (resonant) {
            g_last_error = (*out)->result.error_message;
            return TNF_ERR_RESONANT;
        }
        return TNF_OK;
    });
}

void tnf_result_free(tnf_result* r) { delete r; }

int tnf_result_order(const tnf_result* r) { return r ? r->result.order : 0; }

int tnf_result_dim(const tnf_result* r) { return r ? r->result.dim : 0; }

tnf_status tnf_result_normal_form_coeff(const tnf_result* r, int m, const int* alpha,
                                        double* out) {
    return guarded([&]() -> tnf_status {
        if (!r || !alpha || !out) fail(errc::invalid_argument, "null argument");
        multi_index a(alpha, alpha + r->result.dim);
        *out = double(r->result.normal_form_coeff(m, a));
        return TNF_OK;
    });
}

tnf_status tnf_result_save(const tnf_result* r, const char* json_path) {
    return guarded([&]() -> tnf_status {
        if (!r || !json_path) fail(errc::invalid_argument, "null argument");
        write_text_file(json_path, dump_json(result_to_json(r->result, r->spec, r->opts)));
        return TNF_OK;
    });
}

tnf_status tnf_result_load(const char* json_path, tnf_result** out) {
    return guarded([&]() -> tnf_status {
        if (!json_path || !out) fail(errc::invalid_argument, "null argument");
        result_bundle bundle = load_result(json_path);
        *out = new tnf_result{bundle.prob.spec, bundle.prob.options, std::move(bundle.result)};
        return TNF_OK;
    });
}

tnf_status tnf_cmd_compute(const char* problem_path, const char* out_dir, int order, long seed,
                           int retain_b, char* summary, size_t summary_cap, int* exit_code) {
    return guarded([&]() -> tnf_status {
        if (!problem_path || !out_dir) fail(errc::invalid_argument, "null argument");
        compute_request req;
        req.problem_path = problem_path;
        req.out_dir = out_dir;
        req.order = order;
        req.seed = seed;
        req.retain_b = retain_b;
        std::string text;
        int code = cmd_compute(req, text);
        copy_out(text, summary, summary_cap);
        if (exit_code) *exit_code = code;
        if (code != exit_ok) g_last_error = text;
        return exit_to_status(code);
    });
}

tnf_status tnf_cmd_diagnose(const char* result_path, const char* out_dir, const double* s_grid,
                            int n_s, char* summary, size_t summary_cap, int* exit_code) {
    return guarded([&]() -> tnf_status {
        if (!result_path || !out_dir) fail(errc::invalid_argument, "null argument");
        diagnose_request req;
        req.result_path = result_path;
        req.out_dir = out_dir;
        if (s_grid && n_s > 0) req.s_grid.assign(s_grid, s_grid + n_s);
        std::string text;
        int code = cmd_diagnose(req, text);
        copy_out(text, summary, summary_cap);
        if (exit_code) *exit_code = code;
        if (code != exit_ok) g_last_error = text;
        return exit_to_status(code);
    });
}

tnf_status tnf_cmd_verify(const char* problem_path, const char* result_path, const char* out_dir,
                          const double* radii, int n_radii, int samples, const double* escape_r0,
                          int n_escape, double band, double horizon, double dt, long seed,
                          int skip_escape, char* summary, size_t summary_cap, int* exit_code) {
    return guarded([&]() -> tnf_status {
        if (!problem_path || !result_path || !out_dir)
            fail(errc::invalid_argument, "null argument");
        verify_request req;
        req.problem_path = problem_path;
        req.result_path = result_path;
        req.out_dir = out_dir;
        if (radii && n_radii > 0) req.radii.assign(radii, radii + n_radii);
        if (samples > 0) req.samples = samples;
        if (escape_r0 && n_escape > 0) req.escape_r0.assign(escape_r0, escape_r0 + n_escape);
        if (band > 1) req.band = band;
        if (horizon > 0) req.horizon = horizon;
        if (dt > 0) req.dt = dt;
        req.seed = seed;
        req.skip_escape = skip_escape != 0;
        std::string text;
        int code = cmd_verify(req, text);
        copy_out(text, summary, summary_cap);
        if (exit_code) *exit_code = code;
        if (code != exit_ok) g_last_error = text;
        return exit_to_status(code);
    });
}

tnf_status tnf_cmd_checks(const char* suite, unsigned seed, const char* out_path, char* summary,
                          size_t summary_cap, int* exit_code) {
    return guarded([&]() -> tnf_status {
        checks_request req;
        if (suite) req.suite = suite;
        req.seed = seed;
        if (out_path) req.out_path = out_path;
        std::string text;
        int code = cmd_checks(req, text);
        copy_out(text, summary, summary_cap);
        if (exit_code) *exit_code = code;
        if (code != exit_ok) g_last_error = text;
        return exit_to_status(code);
    });
}

tnf_status tnf_series_parse(const char* json_text, tnf_series** out) {
    return guarded([&]() -> tnf_status {
        if (!json_text || !out) fail(errc::invalid_argument, "null argument");
        nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
        if (j.is_discarded()) fail(errc::schema, "invalid JSON text");
        *out = new tnf_series{series_from_json(j)};
        return TNF_OK;
    });
}

void tnf_series_free(tnf_series* s) { delete s; }

tnf_status tnf_series_wiener_norm(const tnf_series* s, double smoothness, double* out) {
    return guarded([&]() -> tnf_status {
        if (!s || !out) fail(errc::invalid_argument, "null argument");
        *out = double(wiener_norm(s->series, smoothness).value);
        return TNF_OK;
    });
}

tnf_status tnf_series_solve_homological(const tnf_series* f, const double* omega, int dim,
                                        double tau, int horizon, tnf_series** out) {
    return guarded([&]() -> tnf_status {
        if (!f || !omega || !out) fail(errc::invalid_argument, "null argument");
        std::vector<real> w(omega, omega + dim);
        diophantine_vector dv = diophantine_vector::from_empirical(w, real(tau), horizon);
        if (!(dv.kappa > real(0)))
            fail(errc::resonant_mode, "omega is resonant within the horizon");
        *out = new tnf_series{solve_homological(f->series, dv)};
        return TNF_OK;
    });
}

tnf_status tnf_series_to_json(const tnf_series* s, char* buffer, size_t cap) {
    return guarded([&]() -> tnf_status {
        if (!s || !buffer) fail(errc::invalid_argument, "null argument");
        std::string text = dump_json(series_to_json(s->series));
        if (text.size() + 1 > cap)
            fail(errc::invalid_argument,
                 "buffer too small: need " + std::to_string(text.size() + 1) + " bytes");
        copy_out(text, buffer, cap);
        return TNF_OK;
    });
}

tnf_status tnf_empirical_kappa(const double* omega, int dim, double tau, int horizon,
                               double* out) {
    return guarded([&]() -> tnf_status {
        if (!omega || !out) fail(errc::invalid_argument, "null argument");
        std::vector<real> w(omega, omega + dim);
        *out = double(dioph_empirical_kappa(w, real(tau), horizon));
        return TNF_OK;
    });
}

} // extern "C"
