#ifndef WEIGHTCALC_JSON_IO_HPP
#define WEIGHTCALC_JSON_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "weightcalc/analytic.hpp"
#include "weightcalc/common.hpp"
#include "weightcalc/indices.hpp"
#include "weightcalc/matrix.hpp"
#include "weightcalc/sequence.hpp"
#include "weightcalc/stability.hpp"
#include "weightcalc/weight_function.hpp"

namespace weightcalc {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Spec parsing.
//   sequence: {"kind":"gevrey"|"gevrey_bar"|"qgevrey"|"table"|"product"|"quotient", ..., "N":int}
//   omega:    {"kind":"closed_form","tag":"log_square"|"power"|"linear_log", ...}
//             {"kind":"table","log_t":[...],"omega":[...]}
//             {"kind":"from_sequence","seq":<sequence spec>}
//   matrix:   {"kind":"constant"|"from_omega"|"power_family"|"explicit", ..., "grid":[...], "N":int}
// ---------------------------------------------------------------------------

inline WeightSequence parse_sequence_spec(const json& j, const Config& cfg = default_config()) {
    if (!j.is_object() || !j.contains("kind")) throw SpecError("sequence spec: object with 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    const int n = j.value("N", cfg.default_n);
    if (kind == "gevrey") return WeightSequence::gevrey(j.at("a").get<double>(), n);
    if (kind == "gevrey_bar") return WeightSequence::gevrey_bar(j.at("a").get<double>(), n);
    if (kind == "qgevrey") return WeightSequence::q_gevrey(j.at("q").get<double>(), n);
    if (kind == "table") {
        return WeightSequence::from_table(j.at("logM").get<std::vector<double>>(),
                                          j.value("label", std::string("table")));
    }
    if (kind == "product" || kind == "quotient") {
        const WeightSequence lhs = parse_sequence_spec(j.at("lhs"), cfg);
        const WeightSequence rhs = parse_sequence_spec(j.at("rhs"), cfg);
        return kind == "product" ? pointwise_product(lhs, rhs) : pointwise_quotient(lhs, rhs);
    }
    throw SpecError("sequence spec: unknown kind '" + kind + "'");
}

inline WeightFunction parse_omega_spec(const json& j, const Config& cfg = default_config()) {
    if (!j.is_object() || !j.contains("kind")) throw SpecError("omega spec: object with 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    WeightFunction w = [&]() {
        if (kind == "closed_form") {
            const std::string tag = j.at("tag").get<std::string>();
            if (tag == "log_square") return WeightFunction::log_square(j.at("q").get<double>());
            if (tag == "power") return WeightFunction::power(j.at("s").get<double>());
            if (tag == "linear_log") return WeightFunction::linear_log();
            throw SpecError("omega spec: unknown closed form tag '" + tag + "'");
        }
        if (kind == "table") {
            return WeightFunction::from_table(j.at("log_t").get<std::vector<double>>(),
                                              j.at("omega").get<std::vector<double>>(),
                                              j.value("label", std::string("table")));
        }
        if (kind == "from_sequence") {
            return WeightFunction::from_sequence(parse_sequence_spec(j.at("seq"), cfg));
        }
        throw SpecError("omega spec: unknown kind '" + kind + "'");
    }();
    if (j.contains("power_a")) w = w.power_composed(j.at("power_a").get<double>());
    return w;
}

inline WeightMatrix parse_matrix_spec(const json& j, const Config& cfg = default_config()) {
    if (!j.is_object() || !j.contains("kind")) throw SpecError("matrix spec: object with 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    const int n = j.value("N", cfg.default_n);
    std::vector<double> grid = j.value("grid", cfg.ell_grid);
    if (kind == "constant") {
        return make_constant_matrix(parse_sequence_spec(j.at("seq"), cfg), grid);
    }
    if (kind == "power_family") {
        return make_power_family(j.at("beta").get<double>(), grid, n);
    }
    if (kind == "from_omega") {
        const WeightFunction w = parse_omega_spec(j.at("omega"), cfg);
        return matrix_from_omega(w, grid, n, cfg).matrix;
    }
    if (kind == "explicit") {
        std::vector<WeightSequence> rows;
        for (const auto& r : j.at("rows")) rows.push_back(parse_sequence_spec(r, cfg));
        return WeightMatrix(grid, std::move(rows), MatrixOrigin::Explicit);
    }
    throw SpecError("matrix spec: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Report serialization.  Complex numbers go out as [re, im].
// ---------------------------------------------------------------------------

inline json to_json(const ConditionReport& r) {
    json out;
    out["condition"] = r.condition;
    out["verdict"] = to_string(r.verdict);
    out["witness"] = r.witness;
    json trace = json::array();
    for (const auto& [jj, v] : r.trace) trace.push_back({jj, v});
    out["trace"] = trace;
    if (r.failure_site) out["failure_site"] = {r.failure_site->first, r.failure_site->second};
    return out;
}

inline json to_json(const CompareReport& r) {
    return {{"forward", to_json(r.forward)},
            {"backward", to_json(r.backward)},
            {"equivalent", to_string(r.equivalent)}};
}

inline json to_json(const MatrixConditionReport& r) {
    json out;
    out["condition"] = r.condition;
    out["verdict"] = to_string(r.verdict);
    json pairing = json::object();
    for (const auto& [p, q] : r.pairing) pairing[std::to_string(p)] = q;
    out["pairing"] = pairing;
    out["witness"] = r.witness;
    json rows = json::array();
    for (const auto& row : r.rows) {
        json jr;
        jr["p"] = row.param;
        if (row.partner) jr["partner"] = *row.partner;
        jr["verdict"] = to_string(row.verdict);
        json trace = json::array();
        for (const auto& [jj, v] : row.trace) trace.push_back({jj, v});
        jr["trace"] = trace;
        rows.push_back(jr);
    }
    out["rows"] = rows;
    return out;
}

inline json to_json(const IndexEstimate& e) {
    json out;
    out["value"] = e.value;
    out["infinite"] = e.infinite;
    out["lower_witnessed"] = e.lower_witnessed;
    out["upper_refuted"] = e.upper_refuted;
    json trace = json::array();
    for (const auto& p : e.trace) {
        trace.push_back({{"gamma", p.gamma}, {"witnessed", p.witnessed}, {"statistic", p.statistic}});
    }
    out["trace"] = trace;
    out["reduced_evidence"] = e.reduced_evidence;
    if (!e.note.empty()) out["note"] = e.note;
    return out;
}

inline json to_json(const Jet& jet) {
    json derivs = json::array();
    for (const auto& d : jet.derivs) derivs.push_back({d.real(), d.imag()});
    return {{"derivs", derivs}, {"source", jet.source}};
}

inline json to_json(const StabilityVerdict& v) {
    json out;
    out["verdict"] = to_string(v.verdict);
    out["justification"] = to_string(v.justification);
    out["alpha"] = v.alpha;
    json reports = json::array();
    for (const auto& r : v.reports) reports.push_back(to_json(r));
    out["reports"] = reports;
    out["notes"] = v.notes;
    out["internal_inconsistency"] = v.internal_inconsistency;
    return out;
}

inline json to_json(const MembershipCertificate& c) {
    json out;
    out["h"] = c.h;
    out["norm"] = c.norm;
    out["basis"] = c.basis == MembershipCertificate::Basis::JetOnly ? "JetOnly" : "SampledSup";
    json trace = json::array();
    for (const auto& [jj, v] : c.h_trace) trace.push_back({jj, v});
    out["h_trace"] = trace;
    return out;
}

inline json to_json(const Config& cfg) {
    return {{"default_n", cfg.default_n},
            {"tau_stab", cfg.tau_stab},
            {"tau_grow", cfg.tau_grow},
            {"tau_rai_stab", cfg.tau_rai_stab},
            {"tau_rai_grow", cfg.tau_rai_grow},
            {"tau_margin", cfg.tau_margin},
            {"tau_p_gamma", cfg.tau_p_gamma},
            {"tau_gate", cfg.tau_gate},
            {"gamma_max", cfg.gamma_max},
            {"gamma_bracket", cfg.gamma_bracket},
            {"probe_t_max", cfg.probe_t_max},
            {"grid_per_decade", cfg.grid_per_decade},
            {"z_reliable", cfg.z_reliable},
            {"epsilon", cfg.epsilon},
            {"ell_grid", cfg.ell_grid},
            {"map_n", cfg.map_n},
            {"map_fdb_n", cfg.map_fdb_n}};
}

}  // namespace weightcalc

#endif  // WEIGHTCALC_JSON_IO_HPP
