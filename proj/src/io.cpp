#include "ggm/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ggm::io {

namespace {

// JSON has no infinities; they are written as strings.
Json num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

Json nums(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

double get_double(const Json& j, const std::string& what) {
    if (j.is_number()) return j.get<double>();
    throw std::runtime_error(what + ": expected a number");
}

std::vector<double> get_doubles(const Json& j, const std::string& what) {
    if (!j.is_array()) throw std::runtime_error(what + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) out.push_back(get_double(v, what));
    return out;
}

}  // namespace

Json space_to_json(const QuasimetricSpace& space) {
    Json j;
    const auto& m = space.metric();
    if (m.kind == MetricKind::matrix) {
        j["points"] = space.ids();
    } else {
        Json pts = Json::array();
        for (const auto& c : space.coords()) pts.push_back(c);
        j["points"] = pts;
    }
    Json metric;
    switch (m.kind) {
        case MetricKind::euclidean: metric["kind"] = "euclidean"; break;
        case MetricKind::snowflake:
            metric["kind"] = "snowflake";
            metric["exponent"] = m.exponent;
            break;
        case MetricKind::matrix:
            metric["kind"] = "matrix";
            metric["matrix"] = m.matrix;
            break;
    }
    j["metric"] = metric;
    j["weights"] = std::vector<double>(space.weights().begin(), space.weights().end());
    return j;
}

QuasimetricSpace space_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("points") || !j.contains("metric") || !j.contains("weights"))
        throw std::runtime_error("space file: needs fields points, metric, weights");
    const auto weights = get_doubles(j["weights"], "space file weights");
    const auto& metric = j["metric"];
    if (!metric.is_object() || !metric.contains("kind") || !metric["kind"].is_string())
        throw std::runtime_error("space file: metric needs a kind");
    const auto kind = metric["kind"].get<std::string>();
    MetricSpec spec;
    if (kind == "matrix") {
        spec.kind = MetricKind::matrix;
        if (!metric.contains("matrix") || !metric["matrix"].is_array())
            throw std::runtime_error("space file: matrix metric needs a matrix");
        for (const auto& row : metric["matrix"]) spec.matrix.push_back(get_doubles(row, "space file matrix row"));
        std::vector<std::string> ids;
        if (!j["points"].is_array()) throw std::runtime_error("space file: points must be an array");
        for (const auto& p : j["points"]) {
            if (p.is_string()) ids.push_back(p.get<std::string>());
            else ids.push_back(p.dump());
        }
        if (ids.size() != spec.matrix.size())
            throw std::runtime_error("space file: number of points does not match the matrix size");
        return QuasimetricSpace({}, std::move(ids), std::move(spec), weights);
    }
    if (kind == "euclidean") {
        spec.kind = MetricKind::euclidean;
    } else if (kind == "snowflake") {
        spec.kind = MetricKind::snowflake;
        if (!metric.contains("exponent")) throw std::runtime_error("space file: snowflake metric needs an exponent");
        spec.exponent = get_double(metric["exponent"], "space file exponent");
    } else {
        throw std::runtime_error("space file: unknown metric kind '" + kind + "'");
    }
    std::vector<std::vector<double>> coords;
    if (!j["points"].is_array()) throw std::runtime_error("space file: points must be an array");
    for (const auto& p : j["points"]) {
        if (p.is_number()) coords.push_back({p.get<double>()});
        else coords.push_back(get_doubles(p, "space file point"));
    }
    return build_space(std::move(coords), std::move(spec), weights);
}

Json function_to_json(const GridFunction& f) {
    Json j;
    j["values"] = f;
    return j;
}

GridFunction function_from_json(const Json& j) {
    if (j.is_array()) return get_doubles(j, "function file values");
    if (j.is_object() && j.contains("values")) return get_doubles(j["values"], "function file values");
    throw std::runtime_error("function file: needs a values array");
}

Json geometry_to_json(const QuasimetricSpace& space) {
    const auto qc = quasimetric_constants(space);
    const auto dc = doubling_constant(space);
    const auto fit = ahlfors_fit(space);
    const auto g = geometry_constants(space);
    const auto nested = nested_ball_bound_check(space, dc.C_d);
    const auto chain = ball_chain_inclusion_check(space);
    const auto& ids = space.ids();
    Json j;
    j["points"] = space.size();
    j["d_X"] = num(space.diameter());
    j["mu_X"] = num(space.total_measure());
    j["C_t"] = num(qc.C_t);
    j["C_t_witness"] = {ids[qc.triangle_witness.i], ids[qc.triangle_witness.j], ids[qc.triangle_witness.k]};
    j["C_s"] = num(qc.C_s);
    j["C_s_witness"] = {ids[qc.symmetry_witness.i], ids[qc.symmetry_witness.j]};
    j["C_d"] = num(dc.C_d);
    j["C_d_witness"] = {{"center", ids[dc.center]}, {"radius", num(dc.radius)}};
    j["N0"] = num(g.N_0);
    j["a_bar"] = num(g.a_bar);
    Json a;
    a["r_min"] = num(fit.r_min);
    a["r_max"] = num(fit.r_max);
    a["alpha_lower"] = num(fit.alpha_lower);
    a["c_low"] = num(fit.c_low);
    a["beta_upper"] = num(fit.beta_upper);
    a["c_up"] = num(fit.c_up);
    a["c_up_sup"] = num(fit.c_up_sup);
    a["b_growth"] = num(fit.b_growth);
    a["upper_ok"] = fit.upper_ok;
    j["ahlfors"] = a;
    j["nested_ball_bound"] = {{"pass", nested.pass},
                              {"worst_ratio", num(nested.worst_ratio)},
                              {"pairs", nested.pairs_checked}};
    j["ball_chain_inclusion"] = {{"pass", chain.pass},
                                 {"triples", chain.triples_checked},
                                 {"failures", chain.failures}};
    return j;
}

Json norm_result_to_json(const NormResult& r, const QuasimetricSpace& space) {
    Json j;
    j["value"] = num(r.value);
    j["eps"] = num(r.eps);
    j["center"] = space.ids()[r.center];
    j["radius"] = num(r.radius);
    return j;
}

Json cz_report_to_json(const CZReport& r) {
    Json j;
    j["ok"] = r.ok;
    j["size_constant"] = num(r.size_constant);
    j["smoothness_constant"] = num(r.smoothness_constant);
    j["triple_C"] = num(r.triple_C);
    j["triples"] = r.triples;
    j["modulus"] = {{"positive", r.modulus.positive},
                    {"monotone", r.modulus.monotone},
                    {"c_delta", num(r.modulus.c_delta)},
                    {"delta2", r.modulus.delta2},
                    {"dini_converges", r.modulus.dini.converges},
                    {"dini_integral", num(r.modulus.dini.integral)}};
    j["l2_norm"] = num(r.l2_norm);
    j["failures"] = r.failures;
    return j;
}

Json cert_report_to_json(const CertReport& r) {
    Json j;
    j["theorem"] = r.theorem;
    j["space"] = r.space_id;
    j["family"] = {{"spec", r.family_spec}, {"size", r.family_size}};
    Json params = Json::object();
    for (const auto& [k, v] : r.params) params[k] = num(v);
    j["params"] = params;
    Json labels = Json::object();
    for (const auto& [k, v] : r.labels) labels[k] = v;
    j["labels"] = labels;
    Json hyp = Json::object();
    for (const auto& [k, v] : r.hypotheses) hyp[k] = num(v);
    j["hypotheses"] = hyp;
    j["ratio"] = num(r.ratio);
    j["sharpened_ratio"] = num(r.sharpened);
    j["witness"] = r.witness;
    j["constant"] = {{"value", num(r.constant.value)},
                     {"expression", r.constant.expression},
                     {"symbols", r.constant.symbols}};
    j["absolute"] = r.absolute;
    j["calibrated_applicable"] = r.calibrated_applicable;
    j["calibrated_pass"] = r.calibrated_pass;
    j["finite"] = r.finite;
    j["uniformity"] = num(r.uniformity);
    j["uniform"] = r.uniform;
    j["refinement"] = {{"ratios", nums(r.refinement_ratios)},
                       {"delta", num(r.refinement_delta)},
                       {"deltas", nums(r.refinement_deltas)},
                       {"stable", r.refinement_stable}};
    if (r.reduction) {
        const auto& d = *r.reduction;
        j["reduction"] = {{"sigma", num(d.sigma)},
                          {"dominance_constant", num(d.dominance_constant)},
                          {"psi_sigma_factor", num(d.psi_sigma_factor)},
                          {"ratio_condition", num(d.ratio_condition)},
                          {"sup_constant", num(d.sup_constant)},
                          {"min_constant", num(d.min_constant)},
                          {"assembled", num(d.assembled)},
                          {"consistent", d.consistent},
                          {"eps_nodes", d.rows.size()}};
    }
    if (r.hedberg) {
        const auto& h = *r.hedberg;
        j["hedberg"] = {{"ok", h.ok},         {"worst", num(h.worst)}, {"failures", h.failures},
                        {"A", num(h.A)},      {"b", num(h.b)},         {"N0", num(h.N0)},
                        {"exp_maximal", num(h.exp_maximal)}, {"exp_norm", num(h.exp_norm)}};
    }
    j["structural_pass"] = r.structural_pass;
    j["passed"] = r.passed();
    j["notes"] = r.notes;
    return j;
}

std::string reduction_csv(const CertReport& r, const FunctionFamily& family) {
    std::ostringstream os;
    os.precision(17);
    os << "eps,eta,constant,witness\n";
    if (!r.reduction) return os.str();
    for (const auto& row : r.reduction->rows) {
        const auto& id = row.witness < family.members.size() ? family.members[row.witness].id : std::string();
        os << row.eps << ',' << row.eta << ',' << row.constant << ",\"" << id << "\"\n";
    }
    return os.str();
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("malformed JSON in '" + path.string() + "': " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace ggm::io
