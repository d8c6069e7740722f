// Command-line front end: exact generating-function data, classification
// predicates, kernel evaluation and finite-difference geometry for
// Cartan-Hartogs domains, with JSON/CSV reports.

#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hartogs/catalog.hpp"
#include "hartogs/classify.hpp"
#include "hartogs/geometry.hpp"

using nlohmann::ordered_json;
using namespace hartogs;
using Complex = std::complex<double>;

namespace {

// Floats are rendered with 15 significant digits so reports are byte-stable.
std::string fmt_float(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

// "3" -> "3.0" for plain numeric stdout lines.
std::string fmt_float_decimal(double x) {
    std::string s = fmt_float(x);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
        s += ".0";
    return s;
}

ordered_json poly_json(const ExactPoly& p) {
    ordered_json j;
    j["degree"] = p.degree();
    ordered_json coeffs = ordered_json::array();
    for (const auto& c : p.coeffs()) coeffs.push_back(to_string(c));
    j["coefficients"] = coeffs;
    return j;
}

ordered_json params_json(const CartanParams& p) {
    ordered_json j;
    j["r"] = p.r;
    j["a"] = p.a;
    j["b"] = p.b;
    j["gamma"] = p.gamma;
    j["n"] = p.n;
    if (p.volume) j["volume"] = fmt_float(*p.volume);
    return j;
}

void emit(const std::string& text, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output_path, std::ios::binary);
        if (!out) throw InvalidArgument("cannot open output file: " + output_path);
        out << text;
    }
}

void emit_json(const ordered_json& j, const std::string& output_path) {
    emit(j.dump(2) + "\n", output_path);
}

struct MuOption {
    std::string rational;
    double floating = 0.0;
    bool has_float = false;

    Rational require_rational() const {
        if (has_float)
            throw InvalidArgument("this command needs an exact --mu (p/q); "
                                  "--mu-float is only for geometry evaluation");
        if (rational.empty()) throw InvalidArgument("--mu is required");
        const Rational mu = parse_rational(rational);
        if (!(mu > 0)) throw InvalidArgument("mu must be positive");
        return mu;
    }
};

void add_mu_options(CLI::App* cmd, MuOption& mu, bool allow_float) {
    cmd->add_option("--mu", mu.rational, "weight mu as a rational literal p/q");
    if (allow_float)
        cmd->add_option("--mu-float", mu.floating,
                        "floating-point mu (geometry only; classification "
                        "verdicts require rational mu)")
            ->each([&mu](const std::string&) { mu.has_float = true; });
}

PotentialField make_field(FieldKind kind, const CartanParams& params, const MuOption& mu) {
    if (mu.has_float) {
        if (!mu.rational.empty())
            throw InvalidArgument("give either --mu or --mu-float, not both");
        std::cerr << "warning: floating-point mu; classification verdicts "
                     "require rational mu\n";
        return PotentialField::float_mu(kind, params, mu.floating);
    }
    return PotentialField(kind, params, mu.require_rational());
}

Complex parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) return Complex(std::stod(text), 0.0);
        return Complex(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
    } catch (const std::exception&) {
        throw InvalidArgument("not a complex literal 're,im': '" + text + "'");
    }
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw InvalidArgument("not a number: '" + item + "'");
        }
    }
    return out;
}

std::vector<std::vector<double>> default_sample_points() {
    return {
        {0.2, 0.1, 0.15, -0.05},
        {-0.25, 0.2, 0.1, 0.1},
        {0.1, -0.3, 0.2, 0.05},
        {0.15, 0.15, -0.2, 0.1},
        {0.05, 0.05, 0.1, 0.2},
    };
}

// Interior sample points for an m-complex-dimensional CH domain: scaled
// copies of a fixed pattern, safely inside every field's domain.
std::vector<std::vector<double>> sample_points_for_dim(int m) {
    if (m == 2) return default_sample_points();
    std::vector<std::vector<double>> pts;
    const double base[] = {0.2, -0.15, 0.1, 0.12, -0.08, 0.05, 0.1, -0.1};
    for (int k = 0; k < 5; ++k) {
        std::vector<double> p(static_cast<std::size_t>(2 * m), 0.0);
        for (int i = 0; i < 2 * m; ++i)
            p[static_cast<std::size_t>(i)] = base[(i + k) % 8] * (1.0 - 0.1 * k);
        pts.push_back(std::move(p));
    }
    return pts;
}

// Closed-form dual curvature of the mu=2 disc example at (0, iv).
double dual_curvature_formula(double v) {
    const double v2 = v * v, v4 = v2 * v2, v6 = v4 * v2, v8 = v4 * v4;
    return (v8 + 12 * v6 - 26 * v4 + 12 * v2 - 15) /
           (12 * (v2 - 1) * (v2 - 1) * (v4 - 2 * v2 + 5));
}

int run(int argc, char** argv) {
    CLI::App app{"Bergman-kernel generating functions, classification "
                 "predicates and metric checks for Cartan-Hartogs domains"};
    app.require_subcommand(1);

    int r = 1, a = 0, b = 0;
    std::string format = "json";
    std::string output_path;
    double step = 1e-3;
    double tolerance = 1e-12;
    app.add_option("--format", format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--output", output_path, "write the report to a file");

    const auto add_params = [&](CLI::App* cmd) {
        cmd->add_option("--r", r, "rank")->required();
        cmd->add_option("--a", a, "invariant a");
        cmd->add_option("--b", b, "invariant b");
    };

    // chi ------------------------------------------------------------------
    auto* chi_cmd = app.add_subcommand("chi", "expand chi(s) and P(t) = t chi(t)");
    add_params(chi_cmd);

    // fgen -----------------------------------------------------------------
    auto* fgen_cmd = app.add_subcommand("fgen", "generating-function data for F(X)");
    add_params(fgen_cmd);
    MuOption fgen_mu;
    add_mu_options(fgen_cmd, fgen_mu, false);
    int order = 8;
    fgen_cmd->add_option("--order", order, "number of series coefficients");

    // classify ---------------------------------------------------------------
    auto* classify_cmd = app.add_subcommand("classify", "Theorem-level predicates");
    add_params(classify_cmd);
    MuOption classify_mu;
    add_mu_options(classify_cmd, classify_mu, false);
    std::vector<std::string> extra_alphas;
    classify_cmd->add_option("--alpha", extra_alphas,
                             "additional alpha values for the projective-inducedness test");

    // kernel -----------------------------------------------------------------
    auto* kernel_cmd = app.add_subcommand("kernel", "kernel value at a point (rank-one base)");
    add_params(kernel_cmd);
    MuOption kernel_mu;
    add_mu_options(kernel_cmd, kernel_mu, true);
    std::vector<std::string> z_args;
    std::string w_arg = "0,0";
    bool dual = false;
    kernel_cmd->add_option("--z", z_args, "base coordinate 're,im' (repeat n times)");
    kernel_cmd->add_option("--w", w_arg, "fiber coordinate 're,im'");
    kernel_cmd->add_flag("--dual", dual, "evaluate the dual kernel K* instead of K");

    // dual-bound ---------------------------------------------------------------
    auto* bound_cmd = app.add_subcommand("dual-bound", "positivity bound Y* of the dual kernel");
    add_params(bound_cmd);
    MuOption bound_mu;
    add_mu_options(bound_cmd, bound_mu, false);
    bound_cmd->add_option("--tolerance", tolerance, "root refinement tolerance");

    // curvature -----------------------------------------------------------------
    auto* curv_cmd = app.add_subcommand(
        "curvature", "dual-metric sectional curvature at (0, iv), plane span{dx, dv}");
    add_params(curv_cmd);
    MuOption curv_mu;
    add_mu_options(curv_cmd, curv_mu, true);
    std::string v_points = "0,0.25,0.5,0.75";
    curv_cmd->add_option("--points", v_points, "comma-separated v values");
    curv_cmd->add_option("--step", step, "finite-difference step");

    // ke-check -----------------------------------------------------------------
    auto* ke_cmd = app.add_subcommand("ke-check", "Einstein residual and ODE residual");
    add_params(ke_cmd);
    MuOption ke_mu;
    add_mu_options(ke_cmd, ke_mu, true);
    std::string field_name = "bergman";
    ke_cmd->add_option("--field", field_name, "bergman, dual or kob")
        ->check(CLI::IsMember({"bergman", "dual", "kob"}));
    ke_cmd->add_option("--step", step, "finite-difference step");
    std::string ode_samples = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
    ke_cmd->add_option("--x-samples", ode_samples, "X samples for the ODE residual");

    // sweep -----------------------------------------------------------------
    auto* sweep_cmd = app.add_subcommand("sweep", "classification verdicts over a grid (CSV)");
    int r_max = 2, a_max = 2, b_max = 2;
    sweep_cmd->add_option("--r-max", r_max, "max rank (inclusive)");
    sweep_cmd->add_option("--a-max", a_max, "max a (inclusive)");
    sweep_cmd->add_option("--b-max", b_max, "max b (inclusive)");
    std::string mu_list = "1,2";
    sweep_cmd->add_option("--mu-list", mu_list, "comma-separated rational mu values");

    // catalog -----------------------------------------------------------------
    auto* catalog_cmd = app.add_subcommand("catalog", "validate a JSON domain catalog");
    std::string catalog_file;
    catalog_cmd->add_option("--file", catalog_file,
                            "catalog path (default: $HARTOGS_CATALOG)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints help or the parse error
        return code == 0 ? 0 : 1;
    }

    if (chi_cmd->parsed()) {
        const auto params = make_params(r, a, b);
        const auto chi = build_chi(params);
        ordered_json j;
        j["command"] = "chi";
        j["params"] = params_json(params);
        j["chi"] = poly_json(chi.chi);
        j["chi_at_0"] = to_string(chi.chi.evaluate(Rational(0)));
        j["p"] = poly_json(chi.p);
        j["D"] = chi.big_d;
        emit_json(j, output_path);
        return 0;
    }

    if (fgen_cmd->parsed()) {
        const auto params = make_params(r, a, b);
        const Rational mu = fgen_mu.require_rational();
        if (order < 1) throw InvalidArgument("--order must be >= 1");
        const auto rep = f_rational(params, mu);
        const auto series = f_series(params, mu, order);
        const auto cv = cross_validate(rep, std::max(order, rep.big_d + 2));
        if (!cv.all_equal)
            throw InternalConsistencyError("representation mismatch: " + cv.detail);
        ordered_json j;
        j["command"] = "fgen";
        j["params"] = params_json(params);
        j["mu"] = to_string(mu);
        j["order"] = order;
        ordered_json fs = ordered_json::array();
        for (const auto& f : series) fs.push_back(to_string(f));
        j["f_series"] = fs;
        j["D"] = rep.big_d;
        j["Q"] = poly_json(rep.q_poly);
        ordered_json bs = ordered_json::array();
        for (const auto& bk : rep.b_coeffs) bs.push_back(to_string(bk));
        j["b_coeffs"] = bs;
        ordered_json cs = ordered_json::array();
        for (const auto& ci : rep.c_coeffs) cs.push_back(to_string(ci));
        j["c_coeffs"] = cs;
        ordered_json st = ordered_json::array();
        for (const auto& term : rep.stirling_terms) {
            ordered_json t;
            t["q"] = term.q;
            t["coefficient"] = to_string(term.coefficient);
            st.push_back(t);
        }
        j["stirling_terms"] = st;
        j["representations_cross_validated_to_order"] = std::max(order, rep.big_d + 2);
        emit_json(j, output_path);
        return 0;
    }

    if (classify_cmd->parsed()) {
        const auto params = make_params(r, a, b);
        const Rational mu = classify_mu.require_rational();
        auto alphas = default_alphas();
        for (const auto& s : extra_alphas) alphas.push_back(parse_rational(s));
        const auto rpt = classify(params, mu, alphas);
        bool any_proj = false;
        for (const auto& [alpha, ok] : rpt.proj_induced) any_proj |= ok;
        const bool agree = (rpt.is_ball == rpt.ke_identity_holds) &&
                           (rpt.is_ball == any_proj) &&
                           (rpt.is_ball == rpt.kob_alpha.has_value());
        if (!agree)
            throw InternalConsistencyError("classification predicates disagree");
        ordered_json j;
        j["command"] = "classify";
        j["params"] = params_json(params);
        j["mu"] = to_string(mu);
        j["is_ball"] = rpt.is_ball;
        j["q_constant"] = rpt.q_constant;
        j["Q"] = poly_json(rpt.q_poly);
        j["ke_identity_holds"] = rpt.ke_identity_holds;
        j["delta"] = rpt.ke_delta ? ordered_json(to_string(*rpt.ke_delta))
                                  : ordered_json("none");
        ordered_json pj = ordered_json::array();
        for (const auto& [alpha, ok] : rpt.proj_induced) {
            ordered_json t;
            t["alpha"] = to_string(alpha);
            t["induced"] = ok;
            pj.push_back(t);
        }
        j["proj_induced"] = pj;
        j["proj_induced_any"] = any_proj;
        j["dual_bound"] = rpt.dual_bound ? ordered_json(fmt_float(*rpt.dual_bound))
                                         : ordered_json("infinity");
        j["alpha_kob"] = rpt.kob_alpha ? ordered_json(to_string(*rpt.kob_alpha))
                                       : ordered_json("none");
        j["theorem_predicates_agree"] = agree;
        emit_json(j, output_path);
        return 0;
    }

    if (kernel_cmd->parsed()) {
        const auto params = make_params(r, a, b);
        const auto field =
            make_field(dual ? FieldKind::DualBergmanLog : FieldKind::BergmanLog, params,
                       kernel_mu);
        std::vector<Complex> z;
        for (const auto& s : z_args) z.push_back(parse_complex(s));
        if (z.empty()) z.assign(static_cast<std::size_t>(params.n), Complex(0, 0));
        const Complex w = parse_complex(w_arg);
        const double value = dual ? dual_kernel_eval(field, z, w) : kernel_eval(field, z, w);
        ordered_json j;
        j["command"] = "kernel";
        j["params"] = params_json(params);
        j["mu"] = fmt_float(field.mu());
        j["dual"] = dual;
        j["value"] = fmt_float(value);
        j["note"] = "normalization follows the kernel formula verbatim; values are "
                    "defined up to an overall normalization constant";
        emit_json(j, output_path);
        return 0;
    }

    if (bound_cmd->parsed()) {
        const auto params = make_params(r, a, b);
        const Rational mu = bound_mu.require_rational();
        const auto bound = dual_positivity_bound(params, mu, tolerance);
        if (format == "json") {
            ordered_json j;
            j["command"] = "dual-bound";
            j["params"] = params_json(params);
            j["mu"] = to_string(mu);
            j["dual_bound"] = bound ? ordered_json(fmt_float(*bound)) : ordered_json("infinity");
            emit_json(j, output_path);
        } else {
            emit(bound ? fmt_float_decimal(*bound) + "\n" : std::string("infinity\n"),
                 output_path);
        }
        return 0;
    }

    if (curv_cmd->parsed()) {
        const auto params = make_params(r, a, b);
        const auto field = make_field(FieldKind::DualBergmanLog, params, curv_mu);
        const auto vs = parse_double_list(v_points);
        const bool formula_applies =
            params.r == 1 && params.a == 0 && params.b == 0 && field.mu() == 2.0;
        std::ostringstream csv;
        csv << "v,K_closed_form,K_numeric,abs_err\n";
        const int m = field.complex_dim();
        for (const double v : vs) {
            std::vector<double> point(static_cast<std::size_t>(2 * m), 0.0);
            point[static_cast<std::size_t>(2 * m - 1)] = v;
            std::vector<double> e1(static_cast<std::size_t>(2 * m), 0.0);
            e1[0] = 1.0;
            std::vector<double> e2(static_cast<std::size_t>(2 * m), 0.0);
            e2[static_cast<std::size_t>(2 * m - 1)] = 1.0;
            const double local_step = (v < 1.0) ? std::min(step, (1.0 - v) / 16) : step;
            const double k = sectional_curvature(field, point, e1, e2, local_step);
            if (formula_applies) {
                const double ref = dual_curvature_formula(v);
                csv << fmt_float(v) << ',' << fmt_float(ref) << ',' << fmt_float(k) << ','
                    << fmt_float(std::abs(k - ref)) << "\n";
            } else {
                csv << fmt_float(v) << ",nan," << fmt_float(k) << ",nan\n";
            }
        }
        emit(csv.str(), output_path);
        return 0;
    }

    if (ke_cmd->parsed()) {
        const auto params = make_params(r, a, b);
        const FieldKind kind = field_name == "dual"  ? FieldKind::DualBergmanLog
                               : field_name == "kob" ? FieldKind::KobLog
                                                     : FieldKind::BergmanLog;
        const auto field = make_field(kind, params, ke_mu);
        const auto points = sample_points_for_dim(field.complex_dim());
        const auto fit = ke_residual(field, points, step);
        ordered_json j;
        j["command"] = "ke-check";
        j["params"] = params_json(params);
        j["mu"] = fmt_float(field.mu());
        j["field"] = field_name;
        j["step"] = fmt_float(step);
        j["lambda"] = fmt_float(fit.lambda);
        j["max_residual"] = fmt_float(fit.max_residual);
        j["points"] = static_cast<int>(points.size());
        if (field.has_exact_mu()) {
            const auto xs = parse_double_list(ode_samples);
            const auto ode = ode_residual(params, field.exact_mu(), xs);
            ordered_json oj;
            oj["delta"] = fmt_float(ode.delta);
            oj["max_residual"] = fmt_float(ode.max_residual);
            oj["samples"] = ode_samples;
            j["ode"] = oj;
        }
        emit_json(j, output_path);
        return 0;
    }

    if (sweep_cmd->parsed()) {
        std::vector<Rational> mus;
        {
            std::stringstream ss(mu_list);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) mus.push_back(parse_rational(item));
        }
        std::ostringstream csv;
        csv << "r,a,b,mu,n,gamma,D,is_ball,q_constant,ke_delta,proj_induced_any,"
               "alpha_kob,dual_bound,verdicts_agree\n";
        for (int rr = 1; rr <= r_max; ++rr)
            for (int aa = 0; aa <= (rr == 1 ? 0 : a_max); ++aa)
                for (int bb = 0; bb <= b_max; ++bb)
                    for (const auto& mu : mus) {
                        const auto params = make_params(rr, aa, bb);
                        const auto rpt = classify(params, mu);
                        bool any_proj = false;
                        for (const auto& [alpha, ok] : rpt.proj_induced) any_proj |= ok;
                        const bool agree = (rpt.is_ball == rpt.ke_identity_holds) &&
                                           (rpt.is_ball == any_proj) &&
                                           (rpt.is_ball == rpt.kob_alpha.has_value());
                        csv << rr << ',' << aa << ',' << bb << ',' << to_string(mu) << ','
                            << params.n << ',' << params.gamma << ','
                            << params.n + 1 << ',' << (rpt.is_ball ? "true" : "false")
                            << ',' << (rpt.q_constant ? "true" : "false") << ','
                            << (rpt.ke_delta ? to_string(*rpt.ke_delta) : "none") << ','
                            << (any_proj ? "true" : "false") << ','
                            << (rpt.kob_alpha ? to_string(*rpt.kob_alpha) : "none") << ','
                            << (rpt.dual_bound ? fmt_float(*rpt.dual_bound) : "infinity")
                            << ',' << (agree ? "true" : "false") << "\n";
                    }
        emit(csv.str(), output_path);
        return 0;
    }

    if (catalog_cmd->parsed()) {
        std::string path = catalog_file;
        if (path.empty()) {
            if (const char* env = std::getenv("HARTOGS_CATALOG")) path = env;
        }
        if (path.empty())
            throw InvalidArgument("no catalog path: give --file or set HARTOGS_CATALOG");
        std::ifstream in(path);
        if (!in) throw InvalidArgument("cannot open catalog file: " + path);
        const auto entries = load_catalog(in);
        const auto report = validate_catalog(entries);
        ordered_json j;
        j["command"] = "catalog";
        j["file"] = path;
        j["entries"] = report.entries;
        ordered_json issues = ordered_json::array();
        for (const auto& issue : report.issues) {
            ordered_json t;
            t["name"] = issue.name;
            t["message"] = issue.message;
            issues.push_back(t);
        }
        j["issues"] = issues;
        j["valid"] = report.valid();
        emit_json(j, output_path);
        return 0;
    }

    throw InvalidArgument("no subcommand given");
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const InternalConsistencyError& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return 3;
    } catch (const DomainViolation& e) {
        std::cerr << "domain violation: " << e.what() << "\n";
        return 2;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
