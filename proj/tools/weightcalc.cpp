// weightcalc: command-line front end for the weight-sequence calculus,
// characteristic-function machinery and the sector stability classifier.
// The CLI performs no arithmetic of its own; every emitted number comes from
// a library call, and each report carries the configuration snapshot.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weightcalc/json_io.hpp"

namespace wc = weightcalc;
using wc::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;
constexpr int kExitBadInput = 65;

// --------------------------------------------------------------------------
// Config file: "key = value" lines, '#' comments.
// --------------------------------------------------------------------------

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

void apply_config_line(wc::Config& cfg, const std::string& key, const std::string& value) {
    if (key == "N") cfg.default_n = std::stoi(value);
    else if (key == "t_max") cfg.probe_t_max = std::stod(value);
    else if (key == "z_reliable") cfg.z_reliable = std::stod(value);
    else if (key == "gamma_max") cfg.gamma_max = std::stod(value);
    else if (key == "gamma_bracket") cfg.gamma_bracket = std::stod(value);
    else if (key == "tau_stab") cfg.tau_stab = std::stod(value);
    else if (key == "tau_grow") cfg.tau_grow = std::stod(value);
    else if (key == "tau_rai_stab") cfg.tau_rai_stab = std::stod(value);
    else if (key == "tau_rai_grow") cfg.tau_rai_grow = std::stod(value);
    else if (key == "tau_margin") cfg.tau_margin = std::stod(value);
    else if (key == "tau_p_gamma") cfg.tau_p_gamma = std::stod(value);
    else if (key == "tau_gate") cfg.tau_gate = std::stod(value);
    else if (key == "epsilon") cfg.epsilon = std::stod(value);
    else if (key == "grid_per_decade") cfg.grid_per_decade = std::stoi(value);
    else if (key == "ell_grid") cfg.ell_grid = parse_double_list(value);
    else if (key == "map_n") cfg.map_n = std::stoi(value);
    else if (key == "map_fdb_n") cfg.map_fdb_n = std::stoi(value);
    else if (key == "membership_cap") cfg.membership_cap = std::stod(value);
    else throw wc::SpecError("config: unknown key '" + key + "'");
}

wc::Config load_config(const std::string& path) {
    wc::Config cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw wc::SpecError("config: cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        apply_config_line(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

// --------------------------------------------------------------------------
// Spec arguments: a JSON file path, or the shorthand kind:param[:N].
// --------------------------------------------------------------------------

json spec_argument(const std::string& arg) {
    if (arg.find(':') == std::string::npos || arg.find(".json") != std::string::npos) {
        std::ifstream in(arg);
        if (!in) throw wc::SpecError("cannot open spec file " + arg);
        return json::parse(in);
    }
    std::vector<std::string> parts;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    json j;
    j["kind"] = parts[0];
    if (parts[0] == "gevrey" || parts[0] == "gevrey_bar") {
        j["a"] = std::stod(parts.at(1));
    } else if (parts[0] == "qgevrey") {
        j["q"] = std::stod(parts.at(1));
    } else if (parts[0] == "log_square") {
        j = {{"kind", "closed_form"}, {"tag", "log_square"}, {"q", std::stod(parts.at(1))}};
    } else if (parts[0] == "power") {
        j = {{"kind", "closed_form"}, {"tag", "power"}, {"s", std::stod(parts.at(1))}};
    } else if (parts[0] == "linear_log") {
        j = {{"kind", "closed_form"}, {"tag", "linear_log"}};
    } else {
        throw wc::SpecError("unrecognized spec shorthand '" + arg + "'");
    }
    if (parts.size() >= 3 && parts[0] != "linear_log") j["N"] = std::stoi(parts.back());
    return j;
}

void emit(const json& body, const wc::Config& cfg, const std::string& out_path) {
    json wrapped;
    wrapped["config"] = wc::to_json(cfg);
    wrapped["report"] = body;
    const std::string text = wrapped.dump(2) + "\n";
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream out(out_path);
        out << text;
    }
}

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream out(out_path);
        out << text;
    }
}

std::vector<double> parse_range(const std::string& text) {
    // "lo:hi:step"
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw wc::SpecError("range must be lo:hi:step");
    const double lo = std::stod(parts[0]), hi = std::stod(parts[1]), step = std::stod(parts[2]);
    if (!(step > 0.0)) throw wc::SpecError("range step must be positive");
    std::vector<double> out;
    for (int k = 0; lo + k * step <= hi + 1e-12; ++k) {
        // snap accumulated rounding noise so boundary cells stay exact
        out.push_back(std::round((lo + k * step) * 1e9) / 1e9);
    }
    return out;
}

wc::SequenceCondition sequence_condition(const std::string& name) {
    if (name == "lc") return wc::SequenceCondition::LogConvex;
    if (name == "slc") return wc::SequenceCondition::StrongLogConvex;
    if (name == "normalized") return wc::SequenceCondition::Normalized;
    if (name == "mg") return wc::SequenceCondition::ModerateGrowth;
    if (name == "dc") return wc::SequenceCondition::DerivationClosed;
    if (name == "rai") return wc::SequenceCondition::RootAlmostIncreasing;
    if (name == "fdb") return wc::SequenceCondition::FaaDiBruno;
    if (name == "mj-limit") return wc::SequenceCondition::QuotientsToInfinity;
    throw wc::SpecError("unknown sequence condition '" + name + "'");
}

wc::MatrixCondition matrix_condition(const std::string& name) {
    if (name == "sc") return wc::MatrixCondition::StandardLogConvex;
    if (name == "lc") return wc::MatrixCondition::LogConvex;
    if (name == "cw") return wc::MatrixCondition::RealAnalytic;
    if (name == "h") return wc::MatrixCondition::ContainsHolomorphic;
    if (name == "rai") return wc::MatrixCondition::RootAlmostIncreasing;
    if (name == "fdb") return wc::MatrixCondition::FaaDiBruno;
    if (name == "mg") return wc::MatrixCondition::ModerateGrowth;
    if (name == "dc") return wc::MatrixCondition::DerivationClosed;
    throw wc::SpecError("unknown matrix condition '" + name + "'");
}

std::string map_csv(const std::vector<wc::GevreyMapCell>& cells) {
    std::string out = "alpha,beta,verdict,justification\n";
    char buf[160];
    for (const auto& cell : cells) {
        std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%s,%s\n", cell.alpha, cell.beta,
                      wc::to_string(cell.pipeline), wc::to_string(cell.justification));
        out += buf;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weightcalc: weight-sequence calculus and sector stability classifier"};
    app.require_subcommand(1);
    app.fallthrough();  // let --config/--out appear after the subcommand

    std::string config_path, out_path;
    app.add_option("--config", config_path, "key=value configuration file");
    app.add_option("--out", out_path,
                   "output file path, or a bare format name ('csv'/'json') for stdout");

    // seq ------------------------------------------------------------------
    auto* seq = app.add_subcommand("seq", "weight sequence operations");
    std::string seq_spec, seq_cond = "lc", seq_rhs;
    auto* seq_make = seq->add_subcommand("make", "emit the log table of a sequence spec");
    seq_make->add_option("--spec", seq_spec, "sequence spec (file or kind:param[:N])")->required();
    auto* seq_check = seq->add_subcommand("check", "check a sequence condition");
    seq_check->add_option("--spec", seq_spec)->required();
    seq_check->add_option("--cond", seq_cond, "lc|slc|normalized|mg|dc|rai|fdb|mj-limit");
    auto* seq_cmp = seq->add_subcommand("compare", "compare two sequences under preceq");
    seq_cmp->add_option("--lhs", seq_spec)->required();
    seq_cmp->add_option("--rhs", seq_rhs)->required();
    auto* seq_fdb = seq->add_subcommand("fdb", "emit the Faà-di-Bruno sequence table");
    seq_fdb->add_option("--spec", seq_spec)->required();

    // omega ----------------------------------------------------------------
    auto* omega = app.add_subcommand("omega", "weight function operations");
    std::string omega_spec;
    double conj_x = 0.0;
    int omega_n = 0;
    auto* om_check = omega->add_subcommand("check", "evaluate (omega_0)..(omega_6) and (alpha_0)");
    om_check->add_option("--spec", omega_spec)->required();
    auto* om_conj = omega->add_subcommand("conjugate", "Legendre-Fenchel-Young conjugate");
    om_conj->add_option("--spec", omega_spec)->required();
    om_conj->add_option("--x", conj_x)->required();
    auto* om_matrix = omega->add_subcommand("matrix", "associated weight matrix with sandwich");
    om_matrix->add_option("--spec", omega_spec)->required();
    om_matrix->add_option("--N", omega_n, "row truncation (default from config)");

    // index ------------------------------------------------------------------
    auto* index = app.add_subcommand("index", "growth indices");
    std::string index_arg;
    auto* gamma_m = index->add_subcommand("gamma-m", "gamma(M) of a sequence");
    gamma_m->add_option("spec", index_arg, "sequence spec file or shorthand")->required();
    auto* gamma_om = index->add_subcommand("gamma-omega", "gamma(omega) of a weight function");
    gamma_om->add_option("spec", index_arg, "omega spec file or shorthand")->required();

    // matrix -----------------------------------------------------------------
    auto* matrix = app.add_subcommand("matrix", "weight matrix operations");
    std::string matrix_spec, matrix_cond = "rai";
    auto* mat_check = matrix->add_subcommand("check", "check a matrix condition");
    mat_check->add_option("--spec", matrix_spec)->required();
    mat_check->add_option("--cond", matrix_cond, "sc|lc|cw|h|rai|fdb|mg|dc");

    // char -------------------------------------------------------------------
    auto* chr = app.add_subcommand("char", "characteristic-function machinery");
    double chr_alpha = 1.0, chr_alpha_prime = 0.0, chr_zre = 0.0, chr_zim = 0.0,
           chr_eps = 1e-10;
    int chr_n = 16;
    std::string chr_seq;
    auto* chr_jet = chr->add_subcommand("jet", "derivatives at 0 of the basic functions");
    chr_jet->add_option("--alpha", chr_alpha, "E~_alpha jet for alpha in (0,1]");
    chr_jet->add_option("--alpha-prime", chr_alpha_prime, "g jet for alpha' > 1 instead");
    chr_jet->add_option("--n", chr_n, "jet order");
    auto* chr_tr = chr->add_subcommand("transform", "T_M transform of the E~_alpha jet");
    chr_tr->add_option("--seq", chr_seq, "the (lc) sequence M")->required();
    chr_tr->add_option("--alpha", chr_alpha);
    chr_tr->add_option("--n", chr_n);
    auto* chr_ev = chr->add_subcommand("eval", "evaluate T_M(E~_alpha) at a point");
    chr_ev->add_option("--seq", chr_seq)->required();
    chr_ev->add_option("--alpha", chr_alpha);
    chr_ev->add_option("--z-re", chr_zre)->required();
    chr_ev->add_option("--z-im", chr_zim);
    chr_ev->add_option("--eps", chr_eps);
    auto* chr_bc = chr->add_subcommand("bound-check", "Salinas bound sweep for E~_alpha");
    chr_bc->add_option("--alpha", chr_alpha);
    chr_bc->add_option("--n-max", chr_n);

    // classify -----------------------------------------------------------------
    auto* classify = app.add_subcommand("classify", "stability classification on S_alpha");
    std::string cls_matrix, cls_omega;
    double cls_alpha = 1.0;
    classify->add_option("--matrix", cls_matrix, "matrix spec");
    classify->add_option("--omega", cls_omega, "omega spec");
    classify->add_option("--alpha", cls_alpha, "sector parameter")->required();

    // map ------------------------------------------------------------------
    auto* map_cmd = app.add_subcommand("map", "stability maps");
    std::string map_alpha = "0.05:3.5:0.05", map_beta = "-2:3:0.05", map_fmt = "csv";
    auto* map_gevrey = map_cmd->add_subcommand("gevrey", "Gevrey (alpha,beta) stability map");
    map_gevrey->add_option("--alpha", map_alpha, "alpha range lo:hi:step");
    map_gevrey->add_option("--beta", map_beta, "beta range lo:hi:step");
    map_gevrey->add_option("--format", map_fmt, "csv (default) or json");

    // demos ----------------------------------------------------------------
    auto* demo_q = app.add_subcommand("demo-qgevrey", "q-Gevrey worked example");
    double demo_q_value = 1.5;
    demo_q->add_option("--q", demo_q_value, "q > 1");
    auto* demo_fig = app.add_subcommand("demo-gevrey-figure", "emit the Gevrey stability figure data");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        const wc::Config cfg = load_config(config_path);
        // "--out csv" / "--out json" select the stdout format
        if (out_path == "csv" || out_path == "json") {
            map_fmt = out_path;
            out_path.clear();
        }

        if (seq_make->parsed()) {
            const auto s = wc::parse_sequence_spec(spec_argument(seq_spec), cfg);
            json body{{"label", s.label()}, {"N", s.truncation()}, {"logM", s.log_terms()}};
            emit(body, cfg, out_path);
            return kExitOk;
        }
        if (seq_check->parsed()) {
            const auto s = wc::parse_sequence_spec(spec_argument(seq_spec), cfg);
            const auto rep = wc::check_condition(s, sequence_condition(seq_cond), cfg);
            emit(wc::to_json(rep), cfg, out_path);
            return kExitOk;
        }
        if (seq_cmp->parsed()) {
            const auto a = wc::parse_sequence_spec(spec_argument(seq_spec), cfg);
            const auto b = wc::parse_sequence_spec(spec_argument(seq_rhs), cfg);
            emit(wc::to_json(wc::compare(a, b, cfg)), cfg, out_path);
            return kExitOk;
        }
        if (seq_fdb->parsed()) {
            const auto s = wc::parse_sequence_spec(spec_argument(seq_spec), cfg);
            const auto circ = wc::faa_di_bruno_sequence(s, cfg);
            json body{{"label", circ.label()}, {"log_circ", circ.log_terms()},
                      {"report", wc::to_json(wc::check_fdb(s, cfg))}};
            emit(body, cfg, out_path);
            return kExitOk;
        }
        if (om_check->parsed()) {
            const auto w = wc::parse_omega_spec(spec_argument(omega_spec), cfg);
            json body;
            for (const auto& [name, rep] : wc::check_omega_conditions(w, cfg)) {
                body[name] = wc::to_json(rep);
            }
            emit(body, cfg, out_path);
            return kExitOk;
        }
        if (om_conj->parsed()) {
            const auto w = wc::parse_omega_spec(spec_argument(omega_spec), cfg);
            json body{{"x", conj_x}, {"value", wc::legendre_conjugate(w, conj_x, cfg)}};
            emit(body, cfg, out_path);
            return kExitOk;
        }
        if (om_matrix->parsed()) {
            const auto w = wc::parse_omega_spec(spec_argument(omega_spec), cfg);
            const int n = omega_n > 0 ? omega_n : cfg.default_n;
            const auto res = wc::matrix_from_omega(w, cfg.ell_grid, n, cfg);
            json rows = json::array();
            for (std::size_t i = 0; i < res.matrix.size(); ++i) {
                rows.push_back({{"ell", res.matrix.params()[i]},
                                {"logW", res.matrix.row(i).log_terms()}});
            }
            json sandwich;
            for (const auto& [ell, rep] : res.sandwich) {
                sandwich[std::to_string(ell)] = wc::to_json(rep);
            }
            emit(json{{"rows", rows}, {"sandwich", sandwich}}, cfg, out_path);
            return kExitOk;
        }
        if (gamma_m->parsed()) {
            const auto s = wc::parse_sequence_spec(spec_argument(index_arg), cfg);
            emit(wc::to_json(wc::gamma_sequence(s, cfg)), cfg, out_path);
            return kExitOk;
        }
        if (gamma_om->parsed()) {
            const auto w = wc::parse_omega_spec(spec_argument(index_arg), cfg);
            emit(wc::to_json(wc::gamma_omega(w, cfg)), cfg, out_path);
            return kExitOk;
        }
        if (mat_check->parsed()) {
            const auto m = wc::parse_matrix_spec(spec_argument(matrix_spec), cfg);
            emit(wc::to_json(wc::check_matrix_condition(m, matrix_condition(matrix_cond), cfg)),
                 cfg, out_path);
            return kExitOk;
        }
        if (chr_jet->parsed()) {
            const wc::Jet jet = chr_alpha_prime > 1.0 ? wc::g_alpha_jet(chr_alpha_prime, chr_n)
                                                      : wc::e_alpha_jet(chr_alpha, chr_n);
            emit(wc::to_json(jet), cfg, out_path);
            return kExitOk;
        }
        if (chr_tr->parsed()) {
            const auto m = wc::parse_sequence_spec(spec_argument(chr_seq), cfg);
            const auto jet = wc::transform_jet(wc::e_alpha_jet(chr_alpha, chr_n), m, cfg);
            emit(wc::to_json(jet), cfg, out_path);
            return kExitOk;
        }
        if (chr_ev->parsed()) {
            const auto m = wc::parse_sequence_spec(spec_argument(chr_seq), cfg);
            wc::FunctionHandle handle{
                [&](wc::Complex z) { return wc::e_alpha(chr_alpha, z, cfg).value; }, 2.0,
                cfg.z_reliable};
            const auto v = wc::transform_eval(handle, m, {chr_zre, chr_zim}, chr_eps, cfg);
            emit(json{{"value", {v.value.real(), v.value.imag()}},
                      {"error_estimate", v.error_estimate}},
                 cfg, out_path);
            return kExitOk;
        }
        if (chr_bc->parsed()) {
            std::vector<wc::SectorPoint> pts;
            for (double r : {0.1, 1.0, 5.0}) {
                for (double frac : {0.0, 0.96, -0.96}) {
                    pts.push_back({r, frac * chr_alpha * wc::kPi / 2.0});
                }
            }
            const auto rep = wc::e_alpha_bound_check(chr_alpha, chr_n, pts, cfg);
            json samples = json::array();
            for (const auto& s : rep.samples) {
                samples.push_back({{"n", s.n}, {"r", s.z.r}, {"theta", s.z.theta},
                                   {"ratio", s.ratio}});
            }
            emit(json{{"max_ratio", rep.max_ratio}, {"holds", rep.holds}, {"samples", samples}},
                 cfg, out_path);
            return rep.holds ? kExitOk : kExitError;
        }
        if (classify->parsed()) {
            if (cls_matrix.empty() == cls_omega.empty()) {
                std::fprintf(stderr, "classify needs exactly one of --matrix / --omega\n");
                return kExitUsage;
            }
            wc::StabilityVerdict v;
            if (!cls_matrix.empty()) {
                const auto m = wc::parse_matrix_spec(spec_argument(cls_matrix), cfg);
                v = wc::classify_matrix(m, cls_alpha, cfg);
            } else {
                const auto w = wc::parse_omega_spec(spec_argument(cls_omega), cfg);
                v = wc::classify_omega(w, cls_alpha, cfg);
            }
            emit(wc::to_json(v), cfg, out_path);
            return v.verdict == wc::Stability::Inconclusive ? kExitInconclusive : kExitOk;
        }
        if (map_gevrey->parsed() || demo_fig->parsed()) {
            const auto alphas = parse_range(map_gevrey->parsed() ? map_alpha : "0.05:3.5:0.05");
            const auto betas = parse_range(map_gevrey->parsed() ? map_beta : "-2:3:0.05");
            const auto cells = wc::gevrey_map(alphas, betas, cfg);
            bool any_inconclusive = false, all_inconclusive = true;
            for (const auto& c : cells) {
                if (c.pipeline == wc::Stability::Inconclusive) any_inconclusive = true;
                else all_inconclusive = false;
            }
            if (map_fmt == "json" && map_gevrey->parsed()) {
                json body = json::array();
                for (const auto& c : cells) {
                    body.push_back({{"alpha", c.alpha}, {"beta", c.beta},
                                    {"verdict", wc::to_string(c.pipeline)},
                                    {"closed_form", wc::to_string(c.closed_form)},
                                    {"agree", c.agree}});
                }
                emit(body, cfg, out_path);
            } else {
                emit_text(map_csv(cells), out_path);
            }
            return (any_inconclusive && all_inconclusive) ? kExitInconclusive : kExitOk;
        }
        if (demo_q->parsed()) {
            const double q = demo_q_value;
            const auto w = wc::WeightFunction::log_square(q);
            const auto res = wc::matrix_from_omega(w, cfg.ell_grid, 32, cfg);
            double worst_rel = 0.0;
            for (std::size_t i = 0; i < res.matrix.size(); ++i) {
                const double ell = res.matrix.params()[i];
                for (int j = 1; j <= 32; ++j) {
                    const double expected = ell * j * j * std::log(q);
                    worst_rel = std::max(worst_rel,
                                         std::fabs(res.matrix.row(i).log_term(j) - expected) /
                                             std::max(1.0, expected));
                }
            }
            const auto gamma = wc::gamma_sequence(wc::WeightSequence::q_gevrey(q, cfg.default_n), cfg);
            json verdicts;
            bool all_stable = true;
            for (double alpha : {0.5, 1.0, 2.0, 3.0}) {
                const auto v = wc::classify_omega(w, alpha, cfg);
                verdicts[std::to_string(alpha)] = wc::to_string(v.verdict);
                all_stable = all_stable && v.verdict == wc::Stability::StableComposition;
            }
            json body{{"q", q},
                      {"matrix_matches_q_pow_l_j_squared", worst_rel <= 1e-6},
                      {"max_log_relative_deviation", worst_rel},
                      {"gamma_sequence_infinite", gamma.infinite},
                      {"classify", verdicts}};
            emit(body, cfg, out_path);
            return all_stable && gamma.infinite && worst_rel <= 1e-6 ? kExitOk : kExitError;
        }
        std::fprintf(stderr, "no actionable subcommand\n");
        return kExitUsage;
    } catch (const wc::SpecError& e) {
        std::fprintf(stderr, "spec error: %s\n", e.what());
        return kExitBadInput;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "json error: %s\n", e.what());
        return kExitBadInput;
    } catch (const wc::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
}
