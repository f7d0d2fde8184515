#include "ggm/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

#include "ggm/certify.hpp"
#include "ggm/io.hpp"
#include "ggm/norms.hpp"
#include "ggm/operators.hpp"
#include "ggm/scales.hpp"
#include "ggm/space.hpp"

namespace ggm::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

// Thrown for inequalities that fail under calibration; maps to exit code 2.
struct CertificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

fs::path output_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("GGM_OUT_DIR"); env && *env) return env;
    return "ggm_out";
}

std::string stem_of(const std::string& path) {
    auto s = fs::path(path).filename().string();
    for (const char* ext : {".json", ".space", ".fn"})
        if (s.size() > std::string(ext).size() && s.ends_with(ext)) s.resize(s.size() - std::string(ext).size());
    return s;
}

QuasimetricSpace load_space(const std::string& path) { return io::space_from_json(io::read_json(path)); }

GridFunction load_function(const std::string& path, const QuasimetricSpace& space) {
    auto f = io::function_from_json(io::read_json(path));
    if (f.size() != space.size())
        throw std::invalid_argument("function file '" + path + "': " + std::to_string(f.size()) +
                                    " values for a space of " + std::to_string(space.size()) + " points");
    return f;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

// ---- space ----

struct SpaceBuildArgs {
    std::optional<std::size_t> grid, snowflake_grid, equilateral;
    std::optional<double> exponent, weight;
    std::vector<double> two_atom;
    std::string name;
};

int space_build(const SpaceBuildArgs& a, const fs::path& out) {
    const int picked = (a.grid ? 1 : 0) + (a.snowflake_grid ? 1 : 0) + (a.equilateral ? 1 : 0) +
                       (a.two_atom.empty() ? 0 : 1);
    if (picked != 1)
        throw std::invalid_argument("space build: give exactly one of --grid, --snowflake-grid, --two-atom, --equilateral");
    std::optional<QuasimetricSpace> space;
    std::string name = a.name;
    if (a.grid) {
        space.emplace(uniform_grid(*a.grid));
        if (name.empty()) name = "grid" + std::to_string(*a.grid);
    } else if (a.snowflake_grid) {
        const double s = a.exponent.value_or(0.5);
        space.emplace(snowflake_grid(*a.snowflake_grid, s));
        if (name.empty()) name = "snowflake" + std::to_string(*a.snowflake_grid);
    } else if (a.equilateral) {
        space.emplace(equilateral_space(*a.equilateral, a.weight.value_or(1.0)));
        if (name.empty()) name = "equilateral" + std::to_string(*a.equilateral);
    } else {
        if (a.two_atom.size() != 2) throw std::invalid_argument("space build: --two-atom takes two weights");
        space.emplace(two_atom_space(a.two_atom[0], a.two_atom[1]));
        if (name.empty()) name = "two_atom";
    }
    const auto path = out / (name + ".space.json");
    io::write_json(path, io::space_to_json(*space));
    std::cout << "space " << name << ": " << space->size() << " points, d_X=" << fmt(space->diameter())
              << ", mu(X)=" << fmt(space->total_measure()) << " -> " << path.string() << "\n";
    return 0;
}

int space_analyze(const std::string& file, const fs::path& out) {
    const auto space = load_space(file);
    const auto j = io::geometry_to_json(space);
    const auto path = out / (stem_of(file) + ".geometry.json");
    io::write_json(path, j);
    std::cout << "geometry " << stem_of(file) << ": C_t=" << fmt(j["C_t"].get<double>())
              << " C_s=" << fmt(j["C_s"].get<double>()) << " C_d=" << fmt(j["C_d"].get<double>())
              << " d_X=" << fmt(space.diameter()) << " -> " << path.string() << "\n";
    return 0;
}

// ---- norm ----

struct NormArgs {
    std::string kind, function, space;
    std::optional<double> p, lambda, theta, gamma, N0;
    std::string phi = "pow:1", A = "zero", variant = "measure";
    std::size_t grid = 65;
    bool radius_closed = false;
};

VariantSpec parse_variant(const std::string& v, double gamma) {
    if (v == "measure") return {MorreyVariant::measure_power, 1.0, 1.0};
    if (v == "radius") return {MorreyVariant::radius_power, gamma, 1.0};
    throw std::invalid_argument("norm eval: --variant must be measure or radius");
}

double need(const std::optional<double>& v, const std::string& name, const std::string& cmd) {
    if (!v) throw std::invalid_argument(cmd + ": --" + name + " is required");
    return *v;
}

int norm_eval(const NormArgs& a, const fs::path& out) {
    const auto space = load_space(a.space);
    const auto f = load_function(a.function, space);
    const std::string cmd = "norm eval";
    const double p = need(a.p, "p", cmd);
    const RadiusRange range = a.radius_closed ? RadiusRange::closed : RadiusRange::open;
    Json params;
    params["p"] = p;
    NormResult r;
    bool grid_used = false;
    if (a.kind == "lebesgue") {
        r.value = lebesgue_norm(f, space, p);
    } else if (a.kind == "morrey") {
        const double lambda = a.lambda.value_or(0.0);
        const auto m = morrey_norm(f, space, p, lambda, parse_variant(a.variant, a.gamma.value_or(1.0)), range);
        r = {m.value, 0.0, m.center, m.radius};
        params["lambda"] = lambda;
        params["variant"] = a.variant;
    } else if (a.kind == "modified-morrey") {
        const double lambda = a.lambda.value_or(0.0);
        const double N0 = a.N0.value_or(geometry_constants(space).N_0);
        const auto m = morrey_norm(f, space, p, lambda, {MorreyVariant::modified, 1.0, N0}, RadiusRange::unbounded);
        r = {m.value, 0.0, m.center, m.radius};
        params["lambda"] = lambda;
        params["N0"] = N0;
    } else if (a.kind == "grand-lebesgue") {
        const double theta = a.theta.value_or(1.0);
        r = grand_lebesgue_norm(f, space, p, theta, a.grid);
        params["theta"] = theta;
        grid_used = true;
    } else if (a.kind == "grand-morrey") {
        const double lambda = a.lambda.value_or(0.0);
        auto gp = derive_grand_params(p, lambda, make_scale_function(a.phi, ScaleRole::phi, p, lambda),
                                      make_scale_function(a.A, ScaleRole::A, p, lambda),
                                      parse_variant(a.variant, a.gamma.value_or(1.0)));
        GrandEvaluator ev(space, gp, make_epsilon_grid(gp.eps_upper(), a.grid, gp.closed_range), range);
        r = ev.norm(f);
        params["lambda"] = lambda;
        params["phi"] = a.phi;
        params["A"] = a.A;
        params["variant"] = a.variant;
        params["s_max"] = gp.s_max;
        grid_used = true;
    } else if (a.kind == "grand-modified") {
        const double lambda = a.lambda.value_or(0.0);
        const double theta = a.theta.value_or(1.0);
        const double N0 = a.N0.value_or(geometry_constants(space).N_0);
        auto gp = modified_grand_params(p, lambda, theta, make_scale_function(a.A, ScaleRole::A, p, lambda), N0);
        GrandEvaluator ev(space, gp, make_epsilon_grid(gp.eps_upper(), a.grid, true), RadiusRange::unbounded);
        r = ev.norm(f);
        params["lambda"] = lambda;
        params["theta"] = theta;
        params["A"] = a.A;
        params["N0"] = N0;
        grid_used = true;
    } else {
        throw std::invalid_argument("norm eval: unknown --norm '" + a.kind +
                                    "' (lebesgue, morrey, modified-morrey, grand-lebesgue, grand-morrey, grand-modified)");
    }
    Json j;
    j["norm"] = a.kind;
    j["space"] = stem_of(a.space);
    j["function"] = stem_of(a.function);
    j["params"] = params;
    j["result"] = io::norm_result_to_json(r, space);
    if (grid_used) j["grid"] = {{"geometric_count", a.grid}};
    j["radius_range"] = a.radius_closed ? "closed" : "open";
    const auto path = out / ("norm_" + a.kind + ".json");
    io::write_json(path, j);
    std::cout << a.kind << " = " << fmt(r.value);
    if (grid_used) std::cout << " at eps=" << fmt(r.eps);
    if (a.kind != "lebesgue" && a.kind != "grand-lebesgue")
        std::cout << ", ball (" << space.ids()[r.center] << ", r=" << fmt(r.radius) << ")";
    std::cout << " -> " << path.string() << "\n";
    return 0;
}

// ---- op ----

struct OpArgs {
    std::string kind, function, space, kernel_file;
    std::optional<double> alpha, gamma, N0;
    double triple_C = 2.0;
};

int op_apply(const OpArgs& a, const fs::path& out) {
    const auto space = load_space(a.space);
    const auto f = load_function(a.function, space);
    GridFunction g;
    Json extra;
    if (a.kind == "maximal") {
        g = maximal(f, space);
    } else if (a.kind == "modified-maximal") {
        const double N0 = a.N0.value_or(geometry_constants(space).N_0);
        g = modified_maximal(f, space, N0);
        extra["N0"] = N0;
    } else if (a.kind == "riesz-gamma" || a.kind == "riesz-measure" || a.kind == "k-alpha") {
        PotentialKind k{parse_potential_tag(a.kind), a.alpha.value_or(0.5), a.gamma.value_or(1.0)};
        g = potential(f, space, k);
        extra["alpha"] = k.alpha;
        if (k.tag == PotentialTag::gamma_kernel) extra["gamma"] = k.gamma;
    } else if (a.kind == "hilbert" || a.kind == "matrix") {
        CZKernel kernel;
        if (a.kind == "hilbert") {
            kernel = hilbert_kernel(space);
        } else {
            if (a.kernel_file.empty()) throw std::invalid_argument("op apply: matrix kernel needs --kernel-file");
            const auto kj = io::read_json(a.kernel_file);
            if (!kj.contains("matrix")) throw std::runtime_error("kernel file: needs a matrix");
            std::vector<std::vector<double>> m;
            for (const auto& row : kj["matrix"]) m.push_back(row.get<std::vector<double>>());
            kernel = matrix_kernel(std::move(m), kj.value("modulus", std::string("pow:1")));
        }
        const auto rep = validate_cz_kernel(kernel, space, a.triple_C);
        extra["kernel"] = io::cz_report_to_json(rep);
        if (!rep.ok) {
            std::string msg = "op apply: kernel '" + kernel.name + "' fails the singular-kernel conditions:";
            for (const auto& s : rep.failures) msg += " " + s + ";";
            msg.pop_back();
            throw std::invalid_argument(msg);
        }
        g = cz_apply(f, space, kernel);
    } else {
        throw std::invalid_argument("op apply: unknown --op '" + a.kind +
                                    "' (maximal, modified-maximal, riesz-gamma, riesz-measure, k-alpha, hilbert, matrix)");
    }
    Json j = io::function_to_json(g);
    j["operator"] = a.kind;
    j["space"] = stem_of(a.space);
    j["input"] = stem_of(a.function);
    if (!extra.empty()) j["params"] = extra;
    const auto path = out / ("op_" + a.kind + ".json");
    io::write_json(path, j);
    const double top = g.empty() ? 0.0 : *std::max_element(g.begin(), g.end());
    std::cout << a.kind << ": " << g.size() << " values, max " << fmt(top) << " -> " << path.string() << "\n";
    return 0;
}

// ---- certify ----

struct CertArgs {
    std::string theorems, space, family = "mixed", params_file, calibration_file;
    std::optional<std::uint64_t> seed;
    CertParams P;
    std::optional<double> c0, c_cz, c_riesz, b0, C_alpha;
    bool no_sharpen = false;
    std::optional<std::size_t> grid;
    std::optional<double> triple_C;
};

void fill_double(const Json& j, const char* key, std::optional<double>& dst) {
    if (j.contains(key) && !dst) dst = j[key].get<double>();
}
void fill_string(const Json& j, const char* key, std::optional<std::string>& dst) {
    if (j.contains(key) && !dst) dst = j[key].get<std::string>();
}

void apply_calibration(const Json& j, CertArgs& a) {
    if (!j.is_object()) throw std::runtime_error("calibration: expected a JSON object");
    fill_double(j, "c0", a.c0);
    fill_double(j, "c_cz", a.c_cz);
    fill_double(j, "c_riesz", a.c_riesz);
    fill_double(j, "b0", a.b0);
    fill_double(j, "C_alpha", a.C_alpha);
}

// Bundle file values apply only where no flag was given.
void apply_bundle(const Json& j, CertArgs& a) {
    if (!j.is_object()) throw std::runtime_error("parameter bundle: expected a JSON object");
    auto& P = a.P;
    fill_double(j, "p", P.p);
    fill_double(j, "q", P.q);
    fill_double(j, "lambda", P.lambda);
    fill_double(j, "alpha", P.alpha);
    fill_double(j, "gamma", P.gamma);
    fill_double(j, "theta1", P.theta1);
    fill_double(j, "theta2", P.theta2);
    fill_double(j, "sigma", P.sigma);
    fill_double(j, "slope", P.slope);
    fill_double(j, "N0", P.N0);
    fill_string(j, "phi", P.phi);
    fill_string(j, "psi", P.psi);
    fill_string(j, "A", P.A);
    fill_string(j, "A2", P.A2);
    if (j.contains("grid") && !a.grid) a.grid = j["grid"].get<std::size_t>();
    fill_double(j, "triple_C", a.triple_C);
    if (j.contains("seed") && !a.seed) a.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("consts")) apply_calibration(j["consts"], a);
}

std::string verdict(const CertReport& r) {
    if (!r.structural_pass) return "FAIL (structural)";
    if (r.calibrated_applicable && !r.calibrated_pass) return "FAIL (calibrated)";
    return r.calibrated_applicable ? "PASS" : "PASS (structural)";
}

int certify_run(CertArgs a, const fs::path& out) {
    if (!a.params_file.empty()) apply_bundle(io::read_json(a.params_file), a);
    if (!a.calibration_file.empty()) apply_calibration(io::read_json(a.calibration_file), a);
    if (a.grid) a.P.geometric_count = *a.grid;
    if (a.triple_C) a.P.triple_C = *a.triple_C;
    a.P.sharpen = !a.no_sharpen;
    auto& fc = a.P.consts;
    const std::pair<std::optional<double>*, double*> consts[] = {
        {&a.c0, &fc.c0}, {&a.c_cz, &fc.c_cz}, {&a.c_riesz, &fc.c_riesz}, {&a.b0, &fc.b0}, {&a.C_alpha, &fc.C_alpha}};
    for (auto [src, dst] : consts)
        if (*src) {
            if (!(**src > 0.0)) throw std::invalid_argument("calibration: free constants must be positive");
            *dst = **src;
            fc.calibrated = true;
        }

    std::vector<std::string> ids;
    if (a.theorems == "all") ids = theorem_ids();
    else ids = split(a.theorems, ',');
    if (ids.empty()) throw std::invalid_argument("certify run: --theorem is required");

    const auto space = load_space(a.space);
    const auto family = generate_family(space, a.family, a.seed);
    const std::string space_id = stem_of(a.space);
    int code = 0;
    for (const auto& id : ids) {
        const auto t0 = std::chrono::steady_clock::now();
        CertReport rep;
        try {
            rep = certify_boundedness(id, space, family, a.P, space_id);
        } catch (const std::exception& e) {
            if (ids.size() == 1) throw;
            std::cerr << "error: " << id << ": " << e.what() << "\n";
            code = std::max(code, 1);
            continue;
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto base = out / ("report_" + id);
        io::write_json(base.string() + ".json", io::cert_report_to_json(rep));
        if (rep.reduction) io::write_text(base.string() + ".eps.csv", io::reduction_csv(rep, family));
        Json timing;
        timing["theorem"] = id;
        timing["runtime_s"] = secs;
        io::write_json(base.string() + ".timing.json", timing);
        std::cout << id << ": ratio=" << fmt(rep.ratio) << " constant=" << fmt(rep.constant.value)
                  << (rep.absolute ? "" : " (symbolic)") << " uniformity=" << fmt(rep.uniformity)
                  << " delta=" << fmt(rep.refinement_delta) << " " << verdict(rep) << " -> " << base.string()
                  << ".json\n";
        if (!rep.passed()) code = std::max(code, 2);
    }
    if (code == 2) throw CertificationFailure("certification failed");
    return code;
}

// ---- report ----

int report_index(const fs::path& out) {
    if (!fs::is_directory(out)) throw std::runtime_error("report index: no output directory '" + out.string() + "'");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(out)) {
        const auto name = e.path().filename().string();
        if (name.starts_with("report_") && name.ends_with(".json") && !name.ends_with(".timing.json"))
            files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    Json index = Json::array();
    std::ostringstream csv;
    csv.precision(17);
    csv << "theorem,space,ratio,sharpened,constant,absolute,uniformity,refinement_delta,structural_pass,passed\n";
    for (const auto& f : files) {
        const auto r = io::read_json(f);
        auto val = [&](const char* k) { return r.contains(k) ? r[k] : Json(); };
        index.push_back({{"file", f.filename().string()},
                         {"theorem", val("theorem")},
                         {"space", val("space")},
                         {"ratio", val("ratio")},
                         {"constant", r.contains("constant") ? r["constant"]["value"] : Json()},
                         {"structural_pass", val("structural_pass")},
                         {"passed", val("passed")}});
        auto cell = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
        csv << cell(val("theorem")) << ',' << cell(val("space")) << ',' << cell(val("ratio")) << ','
            << cell(val("sharpened_ratio")) << ',' << cell(r["constant"]["value"]) << ',' << cell(val("absolute"))
            << ',' << cell(val("uniformity")) << ',' << cell(r["refinement"]["delta"]) << ','
            << cell(val("structural_pass")) << ',' << cell(val("passed")) << '\n';
    }
    Json j;
    j["reports"] = index;
    io::write_json(out / "index.json", j);
    io::write_text(out / "summary.csv", csv.str());
    std::cout << "index: " << files.size() << " reports -> " << (out / "index.json").string() << "\n";
    return 0;
}

}  // namespace

int dispatch(int argc, char** argv) {
    CLI::App app{"ggm: generalized grand Morrey laboratory"};
    app.require_subcommand(1);
    std::string out_flag;
    app.add_option("--out", out_flag, "Output directory (default $GGM_OUT_DIR or ggm_out)");

    auto* space_cmd = app.add_subcommand("space", "Build or analyze a space");
    space_cmd->require_subcommand(1);
    SpaceBuildArgs sb;
    auto* build = space_cmd->add_subcommand("build", "Write a stock space file");
    build->add_option("name", sb.name, "Output name (file <out>/<name>.space.json)");
    build->add_option("--grid", sb.grid, "Uniform grid on [0,1] with n points, weights 1/n");
    build->add_option("--snowflake-grid", sb.snowflake_grid, "Uniform grid with |x-y|^s");
    build->add_option("--exponent", sb.exponent, "Snowflake exponent s (default 0.5)");
    build->add_option("--two-atom", sb.two_atom, "Two points at distance 1 with weights w0 w1")->expected(2)->delimiter(',');
    build->add_option("--equilateral", sb.equilateral, "n points at mutual distance 1");
    build->add_option("--weight", sb.weight, "Point weight for --equilateral (default 1)");
    std::string analyze_file;
    auto* analyze = space_cmd->add_subcommand("analyze", "Geometry report of a space file");
    analyze->add_option("space", analyze_file, "Space file")->required();

    auto* norm_cmd = app.add_subcommand("norm", "Evaluate norms");
    norm_cmd->require_subcommand(1);
    NormArgs na;
    auto* eval = norm_cmd->add_subcommand("eval", "Evaluate one norm of a function");
    eval->add_option("--norm", na.kind, "lebesgue|morrey|modified-morrey|grand-lebesgue|grand-morrey|grand-modified")->required();
    eval->add_option("--p", na.p, "Exponent p");
    eval->add_option("--lambda", na.lambda, "Morrey exponent lambda");
    eval->add_option("--theta", na.theta, "Grand exponent theta");
    eval->add_option("--phi", na.phi, "Scale function phi");
    eval->add_option("--A", na.A, "Scale function A");
    eval->add_option("--variant", na.variant, "measure|radius");
    eval->add_option("--gamma", na.gamma, "Radius exponent gamma");
    eval->add_option("--N0", na.N0, "Dilation of modified norms (default from the space)");
    eval->add_option("--grid", na.grid, "Geometric epsilon nodes");
    eval->add_flag("--radius-sup-closed", na.radius_closed, "Include r = d_X in ball suprema");
    eval->add_option("function", na.function, "Function file")->required();
    eval->add_option("space", na.space, "Space file")->required();

    auto* op_cmd = app.add_subcommand("op", "Apply operators");
    op_cmd->require_subcommand(1);
    OpArgs oa;
    auto* apply = op_cmd->add_subcommand("apply", "Apply one operator to a function");
    apply->add_option("--op", oa.kind, "maximal|modified-maximal|riesz-gamma|riesz-measure|k-alpha|hilbert|matrix")->required();
    apply->add_option("--alpha", oa.alpha, "Potential order alpha");
    apply->add_option("--gamma", oa.gamma, "Riesz radius exponent gamma");
    apply->add_option("--N0", oa.N0, "Dilation of the modified maximal operator");
    apply->add_option("--kernel-file", oa.kernel_file, "Matrix kernel file {matrix, modulus}");
    apply->add_option("--triple-C", oa.triple_C, "Smoothness triple constant C");
    apply->add_option("function", oa.function, "Function file")->required();
    apply->add_option("space", oa.space, "Space file")->required();

    auto* cert_cmd = app.add_subcommand("certify", "Certify boundedness results");
    cert_cmd->require_subcommand(1);
    CertArgs ca;
    auto* run = cert_cmd->add_subcommand("run", "Run one or more certifications");
    run->add_option("--theorem", ca.theorems, "Theorem id, comma list, or all")->required();
    run->add_option("space", ca.space, "Space file")->required();
    run->add_option("--family", ca.family, "Function family spec (default mixed)");
    run->add_option("--seed", ca.seed, "Seed for randomized families");
    run->add_option("--params", ca.params_file, "Parameter bundle file (flags win)");
    run->add_option("--calibration", ca.calibration_file, "Free-constant calibration file");
    run->add_option("--p", ca.P.p, "p");
    run->add_option("--q", ca.P.q, "q");
    run->add_option("--lambda", ca.P.lambda, "lambda");
    run->add_option("--alpha", ca.P.alpha, "alpha");
    run->add_option("--gamma", ca.P.gamma, "gamma");
    run->add_option("--theta1", ca.P.theta1, "theta1");
    run->add_option("--theta2", ca.P.theta2, "theta2");
    run->add_option("--sigma", ca.P.sigma, "Dominance level sigma");
    run->add_option("--slope", ca.P.slope, "Slope of the preset A2(x) = slope x");
    run->add_option("--N0", ca.P.N0, "Dilation N0");
    run->add_option("--phi", ca.P.phi, "Input scale function phi");
    run->add_option("--psi", ca.P.psi, "Output scale function psi");
    run->add_option("--A", ca.P.A, "Shift A (input)");
    run->add_option("--A2", ca.P.A2, "Shift A2 (output)");
    run->add_option("--grid", ca.grid, "Geometric epsilon nodes, 4m + 1");
    run->add_option("--triple-C", ca.triple_C, "Smoothness triple constant C");
    run->add_flag("--no-sharpen", ca.no_sharpen, "Skip coordinate-ascent sharpening");
    run->add_option("--c0", ca.c0, "Calibrated c0");
    run->add_option("--c-cz", ca.c_cz, "Calibrated c_cz");
    run->add_option("--c-riesz", ca.c_riesz, "Calibrated c_riesz");
    run->add_option("--b0", ca.b0, "Calibrated b0");
    run->add_option("--C-alpha", ca.C_alpha, "Calibrated C_alpha");

    auto* report_cmd = app.add_subcommand("report", "Aggregate reports");
    report_cmd->require_subcommand(1);
    auto* index = report_cmd->add_subcommand("index", "Write index.json and summary.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    const auto out = output_dir(out_flag);
    try {
        if (build->parsed()) return space_build(sb, out);
        if (analyze->parsed()) return space_analyze(analyze_file, out);
        if (eval->parsed()) return norm_eval(na, out);
        if (apply->parsed()) return op_apply(oa, out);
        if (run->parsed()) return certify_run(ca, out);
        if (index->parsed()) return report_index(out);
    } catch (const CertificationFailure&) {
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

int dispatch(const std::vector<std::string>& args) {
    std::vector<std::string> storage{"ggm"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    return dispatch(static_cast<int>(argv.size()), argv.data());
}

}  // namespace ggm::cli
