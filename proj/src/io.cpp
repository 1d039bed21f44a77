#include "bnf/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tnf {

using nlohmann::json;

namespace {

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        fail(errc::schema, std::string("missing or non-numeric field '") + key + "'");
    return j[key].get<double>();
}

int require_int(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        fail(errc::schema, std::string("missing or non-integer field '") + key + "'");
    return j[key].get<int>();
}

const json& require_array(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array())
        fail(errc::schema, std::string("missing or non-array field '") + key + "'");
    return j[key];
}

std::vector<int> int_vector(const json& j, const char* what, int dim) {
    if (!j.is_array() || (dim >= 0 && (int)j.size() != dim))
        fail(errc::schema, std::string(what) + ": expected an array of " + std::to_string(dim) +
                               " integers");
    std::vector<int> out;
    for (const auto& v : j) {
        if (!v.is_number_integer()) fail(errc::schema, std::string(what) + ": non-integer entry");
        out.push_back(v.get<int>());
    }
    return out;
}

} // namespace

json series_to_json(const fourier_series& u) {
    json j;
    j["dim"] = u.dim();
    j["real"] = u.is_real();
    json modes = json::array();
    for (const auto& [k, c] : u.coeffs()) { // std::map iterates lexicographically
        json mode;
        mode["k"] = k;
        mode["re"] = double(c.re);
        mode["im"] = double(c.im);
        modes.push_back(mode);
    }
    j["modes"] = modes;
    return j;
}

fourier_series series_from_json(const json& j) {
    int dim = require_int(j, "dim");
    if (!j.contains("real") || !j["real"].is_boolean())
        fail(errc::schema, "series: missing boolean field 'real'");
    fourier_series::coeff_map coeffs;
    for (const auto& mode : require_array(j, "modes")) {
        std::vector<int> k = int_vector(mode.contains("k") ? mode["k"] : json(), "series mode", dim);
        double re = require_number(mode, "re");
        double im = require_number(mode, "im");
        coeffs[k] = coeffs[k] + cplx(real(re), real(im));
    }
    return fourier_series(dim, j["real"].get<bool>(), coeffs);
}

json taylor_to_json(const taylor_fourier& f) {
    json j;
    j["dim"] = f.dim();
    j["m_min"] = f.m_min();
    j["m_max"] = f.m_max();
    json parts = json::array();
    for (const auto& [m, part] : f.parts()) {
        json p;
        p["m"] = m;
        json terms = json::array();
        for (const auto& [alpha, series] : part.terms()) {
            json t;
            t["alpha"] = alpha;
            t["series"] = series_to_json(series);
            terms.push_back(t);
        }
        p["terms"] = terms;
        parts.push_back(p);
    }
    j["parts"] = parts;
    return j;
}

taylor_fourier taylor_from_json(const json& j) {
    int dim = require_int(j, "dim");
    taylor_fourier f(dim, require_int(j, "m_min"), require_int(j, "m_max"));
    for (const auto& p : require_array(j, "parts")) {
        int m = require_int(p, "m");
        homogeneous_part part(dim, m);
        for (const auto& t : require_array(p, "terms")) {
            std::vector<int> alpha =
                int_vector(t.contains("alpha") ? t["alpha"] : json(), "taylor term", dim);
            if (!t.contains("series")) fail(errc::schema, "taylor term: missing 'series'");
            part.add_term(alpha, series_from_json(t["series"]));
        }
        f.set_part(std::move(part));
    }
    return f;
}

problem problem_from_json(const json& j) {
    int dim = require_int(j, "dim");
    check_dim(dim, "problem");
    const json& omega_j = require_array(j, "omega");
    if ((int)omega_j.size() != dim) fail(errc::schema, "problem: omega size != dim");
    std::vector<real> omega;
    for (const auto& v : omega_j) {
        if (!v.is_number()) fail(errc::schema, "problem: non-numeric omega entry");
        omega.push_back(real(v.get<double>()));
    }
    double tau = require_number(j, "tau");
    if (!(tau > dim - 1)) fail(errc::schema, "problem: need tau > dim - 1");
    double rho = require_number(j, "rho");
    if (!(rho >= 1)) fail(errc::schema, "problem: need rho >= 1");
    double domain_radius = require_number(j, "domain_radius");

    problem_options opts;
    if (j.contains("options")) {
        const json& o = j["options"];
        if (o.contains("seed")) opts.seed = (unsigned)require_int(o, "seed");
        if (o.contains("kmax_per_order")) opts.kmax_per_order = require_int(o, "kmax_per_order");
        if (o.contains("dioph_horizon")) opts.dioph_horizon = require_int(o, "dioph_horizon");
        if (o.contains("retain_b")) {
            if (!o["retain_b"].is_boolean()) fail(errc::schema, "options.retain_b: expected bool");
            opts.retain_b = o["retain_b"].get<bool>() ? 1 : 0;
        }
        if (o.contains("drop_tol")) opts.drop_tol = require_number(o, "drop_tol");
        if (o.contains("qgrid_points")) opts.qgrid_points = require_int(o, "qgrid_points");
    }
    if (j.contains("order_M")) opts.order = require_int(j, "order_M");

    // resonance rejection: empirical kappa must be positive at the horizon
    real emp = dioph_empirical_kappa(omega, real(tau), opts.dioph_horizon);
    if (!(emp > real(0)))
        fail(errc::resonant_mode,
             "problem: omega is resonant within the verification horizon (empirical kappa = 0)");
    diophantine_vector w;
    if (j.contains("kappa")) {
        double kappa = require_number(j, "kappa");
        w = diophantine_vector::with_kappa(omega, real(kappa), real(tau), opts.dioph_horizon);
    } else {
        w = diophantine_vector::from_empirical(omega, real(tau), opts.dioph_horizon);
    }

    int m_max = 2;
    for (const auto& t : require_array(j, "terms")) {
        std::vector<int> alpha = int_vector(t.contains("alpha") ? t["alpha"] : json(), "term", dim);
        int len = order_of(alpha);
        for (int a : alpha)
            if (a < 0) fail(errc::schema, "term: negative multi-index entry");
        if (len == 1)
            fail(errc::schema, "term: degree-1 coefficients are not accepted "
                               "(the linear part is exactly <omega, r>)");
        m_max = std::max(m_max, len);
    }
    taylor_fourier coeffs(dim, 2, m_max);
    for (const auto& t : require_array(j, "terms")) {
        std::vector<int> alpha = int_vector(t["alpha"], "term", dim);
        int len = order_of(alpha);
        if (len == 0) continue; // additive constant: H(theta,0) = 0 convention, dropped
        if (!t.contains("series")) fail(errc::schema, "term: missing 'series'");
        fourier_series s = series_from_json(t["series"]);
        homogeneous_part part = coeffs.part(len) ? *coeffs.part(len) : homogeneous_part(dim, len);
        part.add_term(alpha, s);
        coeffs.set_part(std::move(part));
    }

    gevrey_params gv;
    gv.rho = real(rho);
    gv.tau = real(tau);
    gv.kappa = w.kappa;
    gv.L0 = j.contains("L0") ? real(require_number(j, "L0")) : real(1);
    gv.L1 = j.contains("L1") ? real(require_number(j, "L1")) : real(1);
    gv.L2 = j.contains("L2") ? real(require_number(j, "L2")) : real(1);
    if (!(gv.L0 >= real(1)) || !(gv.L1 >= real(1)) || !(gv.L2 >= real(1)))
        fail(errc::schema, "problem: Gevrey constants L0, L1, L2 must be >= 1");

    return {hamiltonian_spec(w, std::move(coeffs), real(domain_radius), gv), opts};
}

problem load_problem(const std::string& path) { return problem_from_json(load_json_file(path)); }

namespace {

json dioph_to_json(const diophantine_vector& w) {
    json j;
    json om = json::array();
    for (real v : w.omega) om.push_back(double(v));
    j["omega"] = om;
    j["kappa"] = double(w.kappa);
    j["tau"] = double(w.tau);
    j["verified_horizon"] = w.verified_horizon;
    return j;
}

diophantine_vector dioph_from_json(const json& j) {
    diophantine_vector w;
    for (const auto& v : require_array(j, "omega")) w.omega.push_back(real(v.get<double>()));
    w.kappa = real(require_number(j, "kappa"));
    w.tau = real(require_number(j, "tau"));
    w.verified_horizon = require_int(j, "verified_horizon");
    return w;
}

json parts_to_json(const std::map<int, homogeneous_part>& parts, int dim) {
    json out = json::array();
    for (const auto& [m, part] : parts) {
        json p;
        p["m"] = m;
        json terms = json::array();
        for (const auto& [alpha, series] : part.terms()) {
            json t;
            t["alpha"] = alpha;
            t["series"] = series_to_json(series);
            terms.push_back(t);
        }
        p["terms"] = terms;
        out.push_back(p);
    }
    (void)dim;
    return out;
}

std::map<int, homogeneous_part> parts_from_json(const json& j, int dim) {
    std::map<int, homogeneous_part> out;
    for (const auto& p : j) {
        int m = require_int(p, "m");
        homogeneous_part part(dim, m);
        for (const auto& t : require_array(p, "terms")) {
            std::vector<int> alpha = int_vector(t["alpha"], "part term", dim);
            part.add_term(alpha, series_from_json(t["series"]));
        }
        out.emplace(m, std::move(part));
    }
    return out;
}

} // namespace

json result_to_json(const bnf_result& result, const hamiltonian_spec& spec,
                    const problem_options& opts) {
    json j;
    j["schema"] = "torusnf-result-v1";
    j["dim"] = result.dim;
    j["order"] = result.order;
    j["omega"] = dioph_to_json(result.omega);
    json gv;
    gv["rho"] = double(result.gevrey.rho);
    gv["tau"] = double(result.gevrey.tau);
    gv["kappa"] = double(result.gevrey.kappa);
    gv["L0"] = double(result.gevrey.L0);
    gv["L1"] = double(result.gevrey.L1);
    gv["L2"] = double(result.gevrey.L2);
    j["gevrey"] = gv;
    j["domain_radius"] = double(result.domain_radius);
    j["g"] = taylor_to_json(result.g);
    j["normal_form"] = parts_to_json(result.normal_form, result.dim);
    if (result.b_parts) j["b_parts"] = parts_to_json(*result.b_parts, result.dim);
    json logs = json::array();
    for (const auto& l : result.logs) {
        json e;
        e["m"] = l.m;
        e["min_divisor"] = double(l.min_divisor);
        e["discarded_mass"] = double(l.discarded_mass);
        e["max_residual"] = double(l.max_residual);
        logs.push_back(e);
    }
    j["logs"] = logs;
    j["resonant_abort"] = result.resonant_abort;
    j["error_message"] = result.error_message;

    json prob;
    prob["dim"] = spec.dim();
    json om = json::array();
    for (real v : spec.omega().omega) om.push_back(double(v));
    prob["omega"] = om;
    prob["tau"] = double(spec.gevrey().tau);
    prob["kappa"] = double(spec.omega().kappa);
    prob["rho"] = double(spec.gevrey().rho);
    prob["L0"] = double(spec.gevrey().L0);
    prob["L1"] = double(spec.gevrey().L1);
    prob["L2"] = double(spec.gevrey().L2);
    prob["domain_radius"] = double(spec.domain_radius());
    json terms = json::array();
    for (const auto& [m, part] : spec.coeffs().parts())
        for (const auto& [alpha, series] : part.terms()) {
            json t;
            t["alpha"] = alpha;
            t["series"] = series_to_json(series);
            terms.push_back(t);
        }
    prob["terms"] = terms;
    json po;
    po["seed"] = (int)opts.seed;
    po["kmax_per_order"] = opts.kmax_per_order;
    po["dioph_horizon"] = opts.dioph_horizon;
    if (opts.retain_b >= 0) po["retain_b"] = opts.retain_b != 0;
    prob["options"] = po;
    prob["order_M"] = opts.order;
    j["problem"] = prob;
    return j;
}

result_bundle result_from_json(const json& j) {
    if (!j.contains("schema") || j["schema"] != "torusnf-result-v1")
        fail(errc::schema, "result: missing or unknown schema tag");
    if (!j.contains("problem")) fail(errc::schema, "result: missing embedded problem block");
    problem prob = problem_from_json(j["problem"]);

    bnf_result r;
    r.dim = require_int(j, "dim");
    r.order = require_int(j, "order");
    r.omega = dioph_from_json(j["omega"]);
    r.gevrey = prob.spec.gevrey();
    r.domain_radius = real(require_number(j, "domain_radius"));
    r.g = taylor_from_json(j["g"]);
    r.normal_form = parts_from_json(require_array(j, "normal_form"), r.dim);
    if (j.contains("b_parts")) r.b_parts = parts_from_json(j["b_parts"], r.dim);
    for (const auto& e : require_array(j, "logs")) {
        order_log l;
        l.m = require_int(e, "m");
        l.min_divisor = real(require_number(e, "min_divisor"));
        l.discarded_mass = real(require_number(e, "discarded_mass"));
        l.max_residual = real(require_number(e, "max_residual"));
        r.logs.push_back(l);
    }
    if (j.contains("resonant_abort")) r.resonant_abort = j["resonant_abort"].get<bool>();
    if (j.contains("error_message")) r.error_message = j["error_message"].get<std::string>();
    return {std::move(prob), std::move(r)};
}

result_bundle load_result(const std::string& path) { return result_from_json(load_json_file(path)); }

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void dump_rec(const json& j, std::string& out, int indent, int depth) {
    const std::string pad(depth * indent, ' ');
    const std::string pad1((depth + 1) * indent, ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad1 + json(it.key()).dump() + ": ";
                dump_rec(it.value(), out, indent, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad1;
                dump_rec(v, out, indent, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case json::value_t::number_float: {
            double v = j.get<double>();
            out += std::isfinite(v) ? format_double(v) : "null";
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

} // namespace

std::string dump_json(const json& j, int indent) {
    std::string out;
    dump_rec(j, out, indent, 0);
    out += "\n";
    return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) out += ",";
        out += header[i];
    }
    out += "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size()) fail(errc::internal, "write_csv: row arity mismatch");
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            out += format_double(row[i]);
        }
        out += "\n";
    }
    write_text_file(path, out);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(errc::io, "cannot open for writing: " + path);
    f << content;
    if (!f) fail(errc::io, "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(errc::io, "cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json load_json_file(const std::string& path) {
    std::string text = read_text_file(path);
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) fail(errc::schema, "invalid JSON: " + path);
    return j;
}

} // namespace tnf
