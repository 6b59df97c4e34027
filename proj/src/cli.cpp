#include "witnesskit/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "witnesskit/closest.hpp"
#include "witnesskit/densop.hpp"
#include "witnesskit/incremental.hpp"
#include "witnesskit/states.hpp"
#include "witnesskit/tolerances.hpp"
#include "witnesskit/tomo.hpp"
#include "witnesskit/witness.hpp"

namespace wk {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot read file: " + path);
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_output(const std::string& out_path, const std::string& content, std::ostream& out) {
    if (out_path.empty()) {
        out << content;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot write output file: " + out_path);
    }
    f << content;
    if (!f) {
        throw std::runtime_error("cannot write output file: " + out_path);
    }
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct StateSource {
    DensityOperator rho;
    std::optional<FamilySpec> family;
};

StateSource load_state(const std::string& state_path, const std::string& family_text) {
    if (state_path.empty() == family_text.empty()) {
        throw std::invalid_argument("provide exactly one of --state or --family");
    }
    StateSource src{DensityOperator{ComplexMatrix(0, 0), {}}, std::nullopt};
    if (!state_path.empty()) {
        src.rho = density_from_json(read_file(state_path));
        return src;
    }
    src.family = parse_family(family_text);
    src.rho = make_family_state(*src.family);
    return src;
}

bool family_has_reference(const std::string& tag) {
    return tag == "werner" || tag == "belldiag" || tag == "isotropic" || tag == "wstate";
}

struct ReferenceChoice {
    DensityOperator rho0;
    WitnessOptions opt;
};

// --rho0 wins (file path, or family:... for a closed-form reference) and
// disables family bound shortcuts; otherwise families with a known closest
// separable state use it, and everything else falls back to the PPT
// projection, which also certifies detections.
ReferenceChoice resolve_reference(const DensityOperator& rho,
                                  const std::optional<FamilySpec>& family,
                                  const std::string& rho0_text, std::size_t party) {
    ReferenceChoice rc{DensityOperator{ComplexMatrix(0, 0), {}}, {}};
    if (!rho0_text.empty()) {
        if (rho0_text.rfind("family:", 0) == 0) {
            rc.rho0 = closest_separable_family(parse_family(rho0_text));
        } else {
            rc.rho0 = density_from_json(read_file(rho0_text));
        }
        return rc;
    }
    rc.opt.family = family;
    if (family && family_has_reference(family->family)) {
        rc.rho0 = closest_separable_family(*family);
        return rc;
    }
    const PptProjectionResult res = closest_ppt(rho, party);
    rc.rho0 = make_density(res.rho0, rho.dims, /*check_psd=*/false);
    rc.opt.rho0_is_ppt_projection = true;
    return rc;
}

const char* verdict_name(Verdict v) {
    return v == Verdict::Entangled ? "Entangled" : "Inconclusive";
}

const char* provenance_name(BoundProvenance p) {
    return p == BoundProvenance::ClosedForm ? "ClosedForm" : "SeeSaw";
}

ordered_json terms_json(const std::vector<DetectionTerm>& terms) {
    ordered_json arr = ordered_json::array();
    for (const DetectionTerm& t : terms) {
        ordered_json e;
        e["mu"] = t.mu;
        e["contribution"] = t.contribution;
        arr.push_back(std::move(e));
    }
    return arr;
}

ordered_json matrix_json(const DensityOperator& rho) {
    return ordered_json::parse(density_to_json(rho, /*pretty=*/false));
}

struct DetectSettings {
    std::string mode = "quadratic";
    std::string rho0_text;
    std::size_t party = 1;
    bool incremental = false;
    bool shots_given = false;
    long long shots = 1000;
    std::uint64_t seed = 1;
    double z = 3.0;
    bool strict = false;
    bool pretty = false;
    std::string out_path;
};

DetectionReport run_mode(const DensityOperator& rho, const std::optional<FamilySpec>& family,
                         const DetectSettings& s, ordered_json* witness_meta) {
    if (s.mode == "sumsq") {
        return sum_squares_criterion(rho);
    }
    if (s.mode == "belldiag") {
        return bell_diagonal_criteria(state_to_tensor(rho, Convention::RawMoment));
    }
    const ReferenceChoice rc = resolve_reference(rho, family, s.rho0_text, s.party);
    if (s.mode == "linear") {
        const LinearWitness w = build_linear(rho, rc.rho0, rc.opt);
        if (witness_meta) {
            (*witness_meta)["normalization"] = w.normalization;
            (*witness_meta)["bound_lower"] = w.bound_lower;
            (*witness_meta)["bound_upper"] = w.bound_upper;
            (*witness_meta)["provenance"] = provenance_name(w.provenance);
            (*witness_meta)["npt_certified"] = w.npt_certified;
        }
        return evaluate(w, rho);
    }
    const QuadraticIdentifier q = build_quadratic(rho, rc.rho0, rc.opt);
    if (witness_meta) {
        (*witness_meta)["bound_lower"] = q.bound_lower;
        (*witness_meta)["bound_upper"] = q.bound_upper;
        (*witness_meta)["provenance"] = provenance_name(q.provenance);
        (*witness_meta)["npt_certified"] = q.npt_certified;
    }
    return evaluate(q, rho);
}

int cmd_detect(const std::string& state_path, const std::string& family_text,
               const DetectSettings& s, std::ostream& out) {
    if (s.incremental && s.mode != "quadratic") {
        throw std::invalid_argument("--incremental requires --mode quadratic");
    }
    const StateSource src = load_state(state_path, family_text);
    if (s.incremental) {
        const ReferenceChoice rc = resolve_reference(src.rho, src.family, s.rho0_text, s.party);
        const QuadraticIdentifier q = build_quadratic(src.rho, rc.rho0, rc.opt);
        const MeasurementPlan plan = make_plan(q);
        const IncrementalRun run =
            s.shots_given ? run_sampled(plan, src.rho, ShotModel{s.shots, s.seed, s.z})
                          : run_exact(plan, src.rho);
        write_output(s.out_path, run_to_csv(run), out);
        if (run.verdict == RunVerdict::Entangled) {
            return 0;
        }
        return s.strict ? 2 : 0;
    }
    ordered_json meta;
    const DetectionReport rep = run_mode(src.rho, src.family, s, &meta);
    ordered_json j;
    j["mode"] = s.mode;
    j["value"] = rep.value;
    j["bound"] = rep.bound_used;
    j["verdict"] = verdict_name(rep.verdict);
    if (!meta.empty()) {
        j["witness"] = meta;
    }
    j["terms"] = terms_json(rep.terms);
    write_output(s.out_path, j.dump(s.pretty ? 2 : -1) + "\n", out);
    if (rep.verdict == Verdict::Entangled) {
        return 0;
    }
    return s.strict ? 2 : 0;
}

struct ScanRange {
    std::string param;
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;
};

double parse_double_full(const std::string& text, const char* what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("cannot parse ") + what + ": " + text);
    }
    if (pos != text.size()) {
        throw std::invalid_argument(std::string("cannot parse ") + what + ": " + text);
    }
    return v;
}

ScanRange parse_scan(const std::string& text) {
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw std::invalid_argument("--scan expects param=lo:hi:n");
    }
    ScanRange r;
    r.param = text.substr(0, eq);
    const std::string rest = text.substr(eq + 1);
    const std::size_t c1 = rest.find(':');
    const std::size_t c2 = rest.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
        throw std::invalid_argument("--scan expects param=lo:hi:n");
    }
    r.lo = parse_double_full(rest.substr(0, c1), "scan lower bound");
    r.hi = parse_double_full(rest.substr(c1 + 1, c2 - c1 - 1), "scan upper bound");
    const std::string ntext = rest.substr(c2 + 1);
    std::size_t pos = 0;
    try {
        r.n = std::stoi(ntext, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse scan grid count: " + ntext);
    }
    if (pos != ntext.size()) {
        throw std::invalid_argument("cannot parse scan grid count: " + ntext);
    }
    if (!(r.lo < r.hi)) {
        throw std::invalid_argument("--scan needs lo < hi");
    }
    if (r.n < 2) {
        throw std::invalid_argument("--scan needs a grid of at least 2 points");
    }
    return r;
}

int cmd_scan(const std::string& family_text, const std::string& scan_text,
             const DetectSettings& s, std::ostream& out) {
    if (family_text.empty()) {
        throw std::invalid_argument("scan requires --family");
    }
    const ScanRange r = parse_scan(scan_text);
    const FamilySpec base = parse_family(family_text);
    std::string csv = "param,value,bound,detected\n";
    // open-interval grid: endpoints are excluded, step (hi-lo)/(n+1)
    for (int k = 1; k <= r.n; ++k) {
        const double x = r.lo + (r.hi - r.lo) * static_cast<double>(k) / (r.n + 1.0);
        FamilySpec fs = base;
        fs.params[r.param] = x;
        const DensityOperator rho = make_family_state(fs);
        const DetectionReport rep = run_mode(rho, fs, s, nullptr);
        csv += fmt17(x) + "," + fmt17(rep.value) + "," + fmt17(rep.bound_used) + "," +
               (rep.verdict == Verdict::Entangled ? "true" : "false") + "\n";
    }
    write_output(s.out_path, csv, out);
    return 0;
}

int cmd_closest_ppt(const std::string& state_path, const std::string& family_text,
                    std::size_t party, bool pretty, const std::string& out_path,
                    std::ostream& out) {
    const StateSource src = load_state(state_path, family_text);
    const PptProjectionResult res = closest_ppt(src.rho, party);
    ordered_json j;
    j["rho0"] = matrix_json(make_density(res.rho0, src.rho.dims, /*check_psd=*/false));
    j["lambda"] = res.lambda;
    j["is_psd"] = res.is_psd;
    j["hs_distance"] = res.hs_distance;
    j["iterations"] = res.iterations;
    write_output(out_path, j.dump(pretty ? 2 : -1) + "\n", out);
    return 0;
}

int cmd_tomography(const std::string& state_path, const std::string& family_text,
                   const std::string& convention, const std::string& out_path,
                   std::ostream& out) {
    const StateSource src = load_state(state_path, family_text);
    const Convention conv =
        convention == "scaled" ? Convention::QuditScaled : Convention::RawMoment;
    write_output(out_path, tensor_to_csv(state_to_tensor(src.rho, conv)), out);
    return 0;
}

int cmd_export(const std::string& state_path, const std::string& family_text, bool pretty,
               const std::string& out_path, std::ostream& out) {
    const StateSource src = load_state(state_path, family_text);
    write_output(out_path, density_to_json(src.rho, pretty) + "\n", out);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    reload_tolerances();
    CLI::App app{"correlation-tensor entanglement witness toolkit", "witnesskit"};
    app.require_subcommand(1);

    std::string state_path;
    std::string family_text;
    DetectSettings s;
    std::string scan_text;
    std::string convention = "raw";

    CLI::App* detect = app.add_subcommand("detect", "evaluate a witness or identifier on a state");
    detect->add_option("--state", state_path, "density matrix JSON file");
    detect->add_option("--family", family_text, "family spec, e.g. werner?p=0.5");
    detect->add_option("--rho0", s.rho0_text, "reference state: JSON file or family:tag?params");
    detect->add_option("--mode", s.mode, "criterion to run")
        ->check(CLI::IsMember({"linear", "quadratic", "sumsq", "belldiag"}));
    detect->add_option("--party", s.party, "subsystem index for the PPT projection fallback");
    detect->add_flag("--incremental", s.incremental, "emit an ordered early-stop step log (CSV)");
    auto* shots_opt = detect->add_option("--shots", s.shots, "simulate finite shots per setting");
    detect->add_option("--z", s.z, "confidence margin in standard errors");
    detect->add_option("--seed", s.seed, "shot simulation seed");
    detect->add_flag("--strict", s.strict, "exit 2 when the verdict is inconclusive");
    detect->add_flag("--pretty", s.pretty, "indent JSON output");
    detect->add_option("--out", s.out_path, "write output to a file instead of stdout");

    CLI::App* scan = app.add_subcommand("scan", "sweep one family parameter, CSV per grid point");
    scan->add_option("--family", family_text, "family spec; the swept parameter is overwritten");
    scan->add_option("--rho0", s.rho0_text, "fixed reference used for every grid point");
    scan->add_option("--mode", s.mode, "criterion to run")
        ->check(CLI::IsMember({"linear", "quadratic", "sumsq", "belldiag"}));
    scan->add_option("--party", s.party, "subsystem index for the PPT projection fallback");
    scan->add_option("--scan", scan_text, "grid spec param=lo:hi:n, endpoints excluded")
        ->required();
    scan->add_option("--out", s.out_path, "write output to a file instead of stdout");

    CLI::App* closest = app.add_subcommand("closest-ppt", "project onto the PPT set");
    closest->add_option("--state", state_path, "density matrix JSON file");
    closest->add_option("--family", family_text, "family spec, e.g. werner?p=1");
    closest->add_option("--party", s.party, "subsystem to transpose");
    closest->add_flag("--pretty", s.pretty, "indent JSON output");
    closest->add_option("--out", s.out_path, "write output to a file instead of stdout");

    CLI::App* tomo = app.add_subcommand("tomography", "full correlation tensor as CSV");
    tomo->add_option("--state", state_path, "density matrix JSON file");
    tomo->add_option("--family", family_text, "family spec");
    tomo->add_option("--convention", convention, "moment scaling")
        ->check(CLI::IsMember({"raw", "scaled"}));
    tomo->add_option("--out", s.out_path, "write output to a file instead of stdout");

    CLI::App* exportc = app.add_subcommand("export", "write a state as density matrix JSON");
    exportc->add_option("--state", state_path, "density matrix JSON file (canonicalizes it)");
    exportc->add_option("--family", family_text, "family spec");
    exportc->add_flag("--pretty", s.pretty, "indent JSON output");
    exportc->add_option("--out", s.out_path, "write output to a file instead of stdout");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        s.shots_given = shots_opt->count() > 0;
        if (app.got_subcommand(detect)) {
            return cmd_detect(state_path, family_text, s, out);
        }
        if (app.got_subcommand(scan)) {
            return cmd_scan(family_text, scan_text, s, out);
        }
        if (app.got_subcommand(closest)) {
            return cmd_closest_ppt(state_path, family_text, s.party, s.pretty, s.out_path, out);
        }
        if (app.got_subcommand(tomo)) {
            return cmd_tomography(state_path, family_text, convention, s.out_path, out);
        }
        return cmd_export(state_path, family_text, s.pretty, s.out_path, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace wk
