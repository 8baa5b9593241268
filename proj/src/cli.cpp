#include "ferrohopf/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "ferrohopf/dispersion.hpp"
#include "ferrohopf/errors.hpp"
#include "ferrohopf/hopf_locus.hpp"
#include "ferrohopf/magnetisation.hpp"
#include "ferrohopf/normal_form.hpp"
#include "ferrohopf/reduced_dynamics.hpp"
#include "ferrohopf/spectral_lab.hpp"
#include "json.hpp"

namespace ferrohopf::cli {

namespace {

using nlohmann::json;

class bad_config : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    const auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc() || r.ptr != e) throw bad_config("cannot parse number for " + what + ": '" + s + "'");
    return v;
}

int parse_int(const std::string& s, const std::string& what) {
    int v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw bad_config("cannot parse integer for " + what + ": '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw bad_config("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Accepts JSON text, @path to a JSON file, or kind:key=value,... short form.
MagnetisationLaw parse_law(const std::string& spec) {
    if (spec.empty()) throw bad_config("--law is required");
    try {
        if (spec.front() == '@') return parse_law_json(read_file(spec.substr(1)));
        if (spec.front() == '{') return parse_law_json(spec);
        const auto colon = spec.find(':');
        json j;
        j["kind"] = spec.substr(0, colon);
        if (colon != std::string::npos) {
            for (const auto& kv : split(spec.substr(colon + 1), ',')) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) throw bad_config("law short form expects key=value, got '" + kv + "'");
                j[kv.substr(0, eq)] = parse_double(kv.substr(eq + 1), kv.substr(0, eq));
            }
        }
        return parse_law_json(j.dump());
    } catch (const bad_config&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw bad_config(e.what());
    }
}

struct GridSpec {
    std::string name1, name2;
    Axis a1, a2;
};

GridSpec parse_grid(const std::string& s) {
    const auto parts = split(s, ',');
    if (parts.size() != 2) throw bad_config("--grid expects name=lo:hi:n,name=lo:hi:n");
    GridSpec g;
    for (int k = 0; k < 2; ++k) {
        const auto eq = parts[k].find('=');
        if (eq == std::string::npos) throw bad_config("--grid entry lacks '=': " + parts[k]);
        const auto r = split(parts[k].substr(eq + 1), ':');
        if (r.size() != 3) throw bad_config("--grid range must be lo:hi:n: " + parts[k]);
        Axis a{parse_double(r[0], "grid lo"), parse_double(r[1], "grid hi"), parse_int(r[2], "grid n")};
        if (a.count < 1 || !(a.hi >= a.lo)) throw bad_config("--grid range is empty: " + parts[k]);
        (k == 0 ? g.name1 : g.name2) = parts[k].substr(0, eq);
        (k == 0 ? g.a1 : g.a2) = a;
    }
    return g;
}

SpectralWindow parse_window(const std::string& s) {
    const auto r = split(s, ':');
    if (r.size() != 4) throw bad_config("--window expects re_min:re_max:im_min:im_max");
    SpectralWindow w{parse_double(r[0], "window"), parse_double(r[1], "window"), parse_double(r[2], "window"),
                     parse_double(r[3], "window")};
    if (!(w.re_max >= w.re_min) || !(w.im_max >= w.im_min)) throw bad_config("--window is empty");
    return w;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct Outputs {
    std::string primary;
    std::string report;  // empty when the subcommand has no JSON report
};

std::string csv_header(const RunConfig& cfg) {
    std::string h = "# ferrohopf " + std::string(toolkit_version) + "\n";
    h += "# config_hash=" + config_hash(cfg) + "\n";
    h += "# config=" + canonical_config(cfg) + "\n";
    return h;
}

json report_header(const RunConfig& cfg) {
    json j;
    j["toolkit"] = "ferrohopf";
    j["version"] = toolkit_version;
    j["config_hash"] = config_hash(cfg);
    j["config"] = json::parse(canonical_config(cfg));
    return j;
}

LawJet law_jet(const RunConfig& cfg) {
    const MagnetisationLaw law = parse_law(cfg.law);
    try {
        return jet_at_one(law);
    } catch (const std::invalid_argument& e) {
        throw bad_config(e.what());
    }
}

FluidParams fluid(const RunConfig& cfg) {
    try {
        return FluidParams(cfg.beta0, cfg.alpha0);
    } catch (const std::invalid_argument& e) {
        throw bad_config(e.what());
    }
}

Outputs do_dispersion(const RunConfig& cfg) {
    const LawJet jet = law_jet(cfg);
    const FluidParams p = fluid(cfg);
    const int n = cfg.count.value_or(200);
    if (n < 2) throw bad_config("--count must be at least 2");
    const double qmax = cfg.q_max > 0.0 ? cfg.q_max : 1.05 * imag_root_bound(p, jet);
    if (!(cfg.q_min > 0.0) || !(qmax > cfg.q_min)) throw bad_config("need 0 < q-min < q-max");
    std::string csv = csv_header(cfg) + "q,D\n";
    for (int i = 0; i < n; ++i) {
        const double q = cfg.q_min + (qmax - cfg.q_min) * i / (n - 1);
        csv += num(q) + "," + num(disp_imag(q, p, jet)) + "\n";
    }
    const ImaginaryRootSet rs = imag_roots(p, jet, cfg.q_max);
    json r = report_header(cfg);
    r["roots"] = rs.roots;
    r["multiplicities"] = rs.multiplicities;
    r["pair_count"] = rs.pair_count();
    r["q_max"] = qmax;
    return {csv, r.dump(2) + "\n"};
}

Outputs do_hopf_locus(const RunConfig& cfg) {
    const LawJet jet = law_jet(cfg);
    const int n = cfg.count.value_or(200);
    const double qmax = cfg.q_max > 0.0 ? cfg.q_max : 20.0;
    if (n < 1) throw bad_config("--count must be positive");
    if (!(cfg.q_min > 0.0) || !(qmax >= cfg.q_min) || (n > 1 && !(qmax > cfg.q_min)))
        throw bad_config("need 0 < q-min < q-max");
    std::vector<double> grid;
    for (int i = 0; i < n; ++i) grid.push_back(n == 1 ? cfg.q_min : cfg.q_min + (qmax - cfg.q_min) * i / (n - 1));
    std::string csv = csv_header(cfg) + "q,beta0,alpha0,gamma0\n";
    for (const HopfPoint& h : trace_locus(jet, grid))
        csv += num(h.q) + "," + num(h.beta0) + "," + num(h.alpha0) + "," + num(h.gamma0) + "\n";
    return {csv, {}};
}

Outputs do_coeffs(const RunConfig& cfg) {
    const MagnetisationLaw law = parse_law(cfg.law);
    json r = report_header(cfg);
    if (cfg.regime == "deep") {
        LawJet jet;
        try {
            jet = jet_at_one(law);
        } catch (const std::invalid_argument& e) {
            throw bad_config(e.what());
        }
        const DeepFluidResult d = coeffs_deep_fluid(jet);
        r["c1"] = d.coeffs.c1;
        r["c3"] = d.coeffs.c3;
        r["source"] = to_string(d.coeffs.source);
        r["exists"] = d.coeffs.homoclinic_exists();
        r["jet"] = {{"mu1", jet.mu1}, {"dmu1", jet.dmu1}, {"ddmu1", jet.ddmu1}, {"dddmu1", jet.dddmu1}};
        const auto& in = d.intermediates;
        r["intermediates"] = {{"s", in.s}, {"m", in.m}, {"a1", in.a1}, {"a2", in.a2},
                              {"groups", in.groups}, {"solve_residual", in.residual}};
    } else if (cfg.regime == "finite") {
        if (law.kind() != LawKind::constant)
            throw bad_config("finite-depth coefficients are available for the constant law only");
        if (!(cfg.q > 0.0)) throw bad_config("finite regime requires --q > 0");
        FiniteDepthTerms t;
        const NormalFormCoeffs c = coeffs_finite_depth_linear(law.mu(), cfg.q, &t);
        r["c1"] = c.c1;
        r["c3"] = c.c3;
        r["source"] = to_string(c.source);
        r["exists"] = c.homoclinic_exists();
        r["intermediates"] = {{"beta0", t.beta0},
                              {"alpha0", t.gamma0 / t.beta0},
                              {"gamma0", t.gamma0},
                              {"prefactor_base", t.prefactor_base},
                              {"denominator", t.denominator},
                              {"t_cosh", t.t_cosh},
                              {"t_sech4", t.t_sech4},
                              {"t_cosech", t.t_cosech}};
    } else {
        throw bad_config("--regime must be 'deep' or 'finite'");
    }
    return {r.dump(2) + "\n", {}};
}

Outputs do_regions(const RunConfig& cfg) {
    const GridSpec g = parse_grid(cfg.grid);
    CoeffFamily fam;
    if (cfg.family == "linear") {
        if (g.name1 != "mu" || g.name2 != "q") throw bad_config("linear family grid must be mu=...,q=...");
        fam = linear_law_family();
    } else if (cfg.family == "langevin") {
        if ((g.name1 != "M" && g.name1 != "saturation") || g.name2 != "gamma")
            throw bad_config("langevin family grid must be M=...,gamma=...");
        fam = langevin_deep_family();
    } else {
        throw bad_config("--family must be 'linear' or 'langevin'");
    }
    if (cfg.workers < 1) throw bad_config("--workers must be positive");
    const RegionGrid rg = region_map(fam, g.a1, g.a2, cfg.workers);
    std::string csv = csv_header(cfg) + g.name1 + "," + g.name2 + ",c1,c3,exists\n";
    for (const RegionCell& c : rg.cells) {
        csv += num(c.param1) + "," + num(c.param2) + ",";
        if (c.singular)
            csv += "nan,nan,singular\n";
        else
            csv += num(c.c1) + "," + num(c.c3) + "," + (c.exists ? "1" : "0") + "\n";
    }
    return {csv, {}};
}

ReducedModel build_model(const RunConfig& cfg) {
    ReducedModel m;
    m.beta0q = cfg.beta0q;
    m.eps = cfg.eps;
    if (!(cfg.beta0q > 0.0)) throw bad_config("--beta0q must be positive");
    if (cfg.c1 && cfg.c3) {
        m.coeffs.c1 = *cfg.c1;
        m.coeffs.c3 = *cfg.c3;
        m.coeffs.source = CoeffSource::user;
    } else if (!cfg.law.empty()) {
        if (cfg.regime == "deep") {
            m.coeffs = coeffs_deep_fluid(law_jet(cfg)).coeffs;
        } else if (cfg.regime == "finite") {
            const MagnetisationLaw law = parse_law(cfg.law);
            if (law.kind() != LawKind::constant || !(cfg.q > 0.0))
                throw bad_config("finite regime needs a constant law and --q > 0");
            m.coeffs = coeffs_finite_depth_linear(law.mu(), cfg.q);
        } else {
            throw bad_config("--regime must be 'deep' or 'finite'");
        }
    } else {
        throw bad_config("give --c1 and --c3, or --law with --regime");
    }
    m.coeffs.c2 = cfg.c2;
    m.coeffs.c4 = cfg.c4;
    m.coeffs.c5 = cfg.c5;
    m.coeffs.c6 = cfg.c6;
    m.coeffs.c7 = cfg.c7;
    return m;
}

ShootingOptions shooting(const RunConfig& cfg) {
    ShootingOptions o;
    if (!(cfg.step > 0.0) || !(cfg.delta > 0.0) || cfg.stride < 1 || cfg.horizon < 0.0)
        throw bad_config("--step, --delta must be positive, --stride >= 1, --horizon >= 0");
    o.step = cfg.step;
    o.delta = cfg.delta;
    o.richardson_delta = 0.1 * cfg.delta;
    o.horizon = cfg.horizon;
    o.stride = cfg.stride;
    return o;
}

struct OrbitResult {
    HomoclinicOrbit orbit;
    int branches = 1;
};

OrbitResult compute_orbit(const RunConfig& cfg, const ReducedModel& m) {
    if (cfg.branch != "+" && cfg.branch != "-") throw bad_config("--branch must be + or -");
    if (cfg.pulses < 1) throw bad_config("--pulses must be >= 1");
    const ShootingOptions o = shooting(cfg);
    if (cfg.pulses == 1) {
        auto both = find_symmetric_homoclinic(m, o);
        return {cfg.branch == "+" ? both[0] : both[1], static_cast<int>(both.size())};
    }
    if (cfg.branch != "+") throw bad_config("multipulse search supports --branch + only");
    return {find_multipulse(m, cfg.pulses, o), 1};
}

json orbit_summary(const RunConfig& cfg, const ReducedModel& m, const OrbitResult& r) {
    const HomoclinicOrbit& o = r.orbit;
    json j = report_header(cfg);
    j["eps"] = o.eps;
    j["amplitude"] = jnum(o.amplitude);
    j["decay_rate"] = jnum(o.decay_rate);
    j["pulse_count"] = o.pulse_count;
    j["symmetric"] = o.symmetric;
    j["H_drift"] = jnum(o.H_drift);
    j["K_drift"] = jnum(o.K_drift);
    j["branch"] = o.branch > 0 ? "+" : "-";
    j["branches_found"] = r.branches;
    j["fix_residual"] = jnum(o.fix_residual);
    j["reversibility_residual"] = jnum(o.reversibility_residual);
    j["forward_reflection_residual"] = jnum(o.forward_reflection_residual);
    j["insertion_sensitivity"] = jnum(o.insertion_sensitivity);
    j["c1"] = m.coeffs.c1;
    j["c3"] = m.coeffs.c3;
    try {
        const AmplitudePrediction p = predict_amplitude(m);
        j["predicted"] = {{"intro_form", p.intro_form},
                          {"scaling_form", p.scaling_form},
                          {"closest", closest_candidate(p, o.amplitude)}};
    } catch (const std::invalid_argument&) {
    }
    return j;
}

Outputs do_homoclinic(const RunConfig& cfg) {
    const ReducedModel m = build_model(cfg);
    const OrbitResult r = compute_orbit(cfg, m);
    std::string csv = csv_header(cfg) + "x,ReA,ImA,ReB,ImB\n";
    for (std::size_t i = 0; i < r.orbit.x.size(); ++i) {
        const auto& u = r.orbit.u[i];
        csv += num(r.orbit.x[i]) + "," + num(u.A.real()) + "," + num(u.A.imag()) + "," + num(u.B.real()) + "," +
               num(u.B.imag()) + "\n";
    }
    return {csv, orbit_summary(cfg, m, r).dump(2) + "\n"};
}

Outputs do_profile(const RunConfig& cfg) {
    const ReducedModel m = build_model(cfg);
    const OrbitResult r = compute_orbit(cfg, m);
    const double lo = cfg.x_min.value_or(r.orbit.x.front());
    const double hi = cfg.x_max.value_or(r.orbit.x.back());
    if (!(hi > lo)) throw bad_config("need x-min < x-max");
    const double dx = cfg.step * cfg.stride;
    const int n = cfg.count.value_or(static_cast<int>(std::floor((hi - lo) / dx)) + 1);
    if (n < 8) throw bad_config("--count must be at least 8 for a profile");
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * i / (n - 1);
    const Profile p = synthesize_profile(r.orbit, m, xs);
    std::string csv = csv_header(cfg) + "x,eta\n";
    for (int i = 0; i < n; ++i) csv += num(p.x[i]) + "," + num(p.eta[i]) + "\n";
    json j = orbit_summary(cfg, m, r);
    j["wavelength"] = jnum(dominant_wavelength(p.x, p.eta));
    j["linear_wavelength"] = 2.0 * std::numbers::pi / m.beta0q;
    j["warnings"] = p.warnings;
    return {csv, j.dump(2) + "\n"};
}

Outputs do_spectrum(const RunConfig& cfg) {
    const LawJet jet = law_jet(cfg);
    const FluidParams p = fluid(cfg);
    if (cfg.N < min_nodes) throw bad_config("--N must be at least 16");
    const SpectralWindow w = parse_window(cfg.window);
    const DiscreteEigenproblem prob = assemble(p, jet, cfg.N);
    std::string csv = csv_header(cfg) + "re,im,residual\n";
    for (const SpectralEigenvalue& e : spectrum(prob, w))
        csv += num(e.lambda.real()) + "," + num(e.lambda.imag()) + "," + num(e.residual) + "\n";
    return {csv, {}};
}

void write_atomically(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw bad_config("cannot open output file '" + path + "'");
        f << content;
        if (!f) throw bad_config("failed writing output file '" + path + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw bad_config("cannot move output into place: '" + path + "'");
}

}  // namespace

std::string canonical_config(const RunConfig& c) {
    json j;
    j["subcommand"] = c.subcommand;
    auto opt = [&](const char* k, const std::optional<double>& v) {
        if (v) j[k] = *v;
    };
    const std::string& s = c.subcommand;
    if (s == "dispersion" || s == "spectrum") {
        j["law"] = c.law.empty() ? "" : law_to_json(parse_law(c.law));
        j["beta0"] = c.beta0;
        j["alpha0"] = c.alpha0;
    }
    if (s == "dispersion" || s == "hopf-locus") {
        if (s == "hopf-locus") j["law"] = law_to_json(parse_law(c.law));
        j["q_min"] = c.q_min;
        j["q_max"] = c.q_max;
        j["count"] = c.count.value_or(200);
    }
    if (s == "coeffs") {
        j["law"] = law_to_json(parse_law(c.law));
        j["regime"] = c.regime;
        j["q"] = c.q;
    }
    if (s == "regions") {
        j["family"] = c.family;
        j["grid"] = c.grid;
    }
    if (s == "homoclinic" || s == "profile") {
        if (!c.law.empty()) {
            j["law"] = law_to_json(parse_law(c.law));
            j["regime"] = c.regime;
            j["q"] = c.q;
        }
        j["beta0q"] = c.beta0q;
        j["eps"] = c.eps;
        opt("c1", c.c1);
        opt("c2", c.c2);
        opt("c3", c.c3);
        opt("c4", c.c4);
        opt("c5", c.c5);
        opt("c6", c.c6);
        opt("c7", c.c7);
        j["pulses"] = c.pulses;
        j["branch"] = c.branch;
        j["step"] = c.step;
        j["delta"] = c.delta;
        j["horizon"] = c.horizon;
        j["stride"] = c.stride;
    }
    if (s == "profile") {
        opt("x_min", c.x_min);
        opt("x_max", c.x_max);
        if (c.count) j["count"] = *c.count;
    }
    if (s == "spectrum") {
        j["N"] = c.N;
        j["window"] = c.window;
    }
    return j.dump();
}

std::string config_hash(const RunConfig& cfg) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical_config(cfg))));
    return buf;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        Outputs o;
        const std::string& s = cfg.subcommand;
        if (s == "dispersion")
            o = do_dispersion(cfg);
        else if (s == "hopf-locus")
            o = do_hopf_locus(cfg);
        else if (s == "coeffs")
            o = do_coeffs(cfg);
        else if (s == "regions")
            o = do_regions(cfg);
        else if (s == "homoclinic")
            o = do_homoclinic(cfg);
        else if (s == "profile")
            o = do_profile(cfg);
        else if (s == "spectrum")
            o = do_spectrum(cfg);
        else
            throw bad_config("unknown subcommand '" + s + "'");

        if (!cfg.out.empty())
            write_atomically(cfg.out, o.primary);
        if (!o.report.empty() && !cfg.report.empty())
            write_atomically(cfg.report, o.report);
        if (cfg.out.empty()) out << o.primary;
        if (!o.report.empty() && cfg.report.empty()) out << o.report;
        return exit_ok;
    } catch (const not_found_error& e) {
        err << "not found: " << e.what() << "\n";
        return exit_not_found;
    } catch (const numerical_error& e) {
        err << "numerical failure";
        if (!e.term().empty()) err << " in " << e.term();
        err << ": " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::invalid_argument& e) {
        err << "bad config: " << e.what() << "\n";
        return exit_bad_config;
    } catch (const std::domain_error& e) {
        err << "bad config: " << e.what() << "\n";
        return exit_bad_config;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"ferrohopf: dispersion, Hopf locus, normal-form and homoclinic computations"};
    app.set_config("--config", "", "TOML/INI file with option values");
    app.set_version_flag("--version", std::string(toolkit_version));
    app.require_subcommand(1);
    RunConfig cfg;
    double c[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    double xmin = 0, xmax = 0;
    int count = 0;
    CLI::Option* oxmin = nullptr;
    CLI::Option* oxmax = nullptr;
    std::vector<CLI::Option*> ocount;

    auto add_law = [&](CLI::App* sc, bool required) {
        auto* o = sc->add_option("--law", cfg.law, "law: JSON text, @file.json, or e.g. constant:mu=4");
        if (required) o->required();
    };
    auto add_out = [&](CLI::App* sc, bool report) {
        sc->add_option("--out", cfg.out, "primary output path (default stdout)");
        if (report) sc->add_option("--report", cfg.report, "JSON report path (default stdout)");
    };
    auto add_count = [&](CLI::App* sc) { ocount.push_back(sc->add_option("--count", count, "grid points")); };

    auto* disp = app.add_subcommand("dispersion", "D(q) on a grid and its positive roots");
    add_law(disp, true);
    disp->add_option("--beta0", cfg.beta0)->required();
    disp->add_option("--alpha0", cfg.alpha0)->required();
    disp->add_option("--q-min", cfg.q_min);
    disp->add_option("--q-max", cfg.q_max, "0 selects the analytic root bound");
    add_count(disp);
    add_out(disp, true);

    auto* locus = app.add_subcommand("hopf-locus", "trace the Hamiltonian-Hopf curve");
    add_law(locus, true);
    locus->add_option("--q-min", cfg.q_min);
    locus->add_option("--q-max", cfg.q_max, "default 20");
    add_count(locus);
    add_out(locus, false);

    auto* coeffs = app.add_subcommand("coeffs", "normal-form coefficients c1, c3");
    add_law(coeffs, true);
    coeffs->add_option("--regime", cfg.regime, "deep or finite");
    coeffs->add_option("--q", cfg.q, "collision wavenumber for the finite regime");
    add_out(coeffs, false);

    auto* regions = app.add_subcommand("regions", "sign map of c1, c3 over a parameter grid");
    regions->add_option("--family", cfg.family, "linear or langevin");
    regions->add_option("--grid", cfg.grid, "e.g. mu=2:6:100,q=0.5:5:100")->required();
    regions->add_option("--workers", cfg.workers);
    add_out(regions, false);

    auto add_dyn = [&](CLI::App* sc) {
        add_law(sc, false);
        sc->add_option("--regime", cfg.regime, "coefficients from the law: deep or finite");
        sc->add_option("--q", cfg.q);
        sc->add_option("--beta0q", cfg.beta0q);
        sc->add_option("--eps", cfg.eps);
        for (int k = 1; k <= 7; ++k) sc->add_option("--c" + std::to_string(k), c[k]);
        sc->add_option("--pulses", cfg.pulses);
        sc->add_option("--branch", cfg.branch, "+ or -");
        sc->add_option("--step", cfg.step);
        sc->add_option("--delta", cfg.delta);
        sc->add_option("--horizon", cfg.horizon);
        sc->add_option("--stride", cfg.stride);
        add_out(sc, true);
    };
    auto* hom = app.add_subcommand("homoclinic", "symmetric homoclinic orbit of the reduced system");
    add_dyn(hom);
    auto* prof = app.add_subcommand("profile", "free-surface profile 2 Re A(x)");
    add_dyn(prof);
    std::vector<CLI::Option*> copt_hom(8, nullptr), copt_prof(8, nullptr);
    for (int k = 1; k <= 7; ++k) {
        copt_hom[k] = hom->get_option("--c" + std::to_string(k));
        copt_prof[k] = prof->get_option("--c" + std::to_string(k));
    }
    oxmin = prof->add_option("--x-min", xmin);
    oxmax = prof->add_option("--x-max", xmax);
    add_count(prof);

    auto* spec = app.add_subcommand("spectrum", "collocation eigenvalues of the linearised operator");
    add_law(spec, true);
    spec->add_option("--beta0", cfg.beta0)->required();
    spec->add_option("--alpha0", cfg.alpha0)->required();
    spec->add_option("--N", cfg.N);
    spec->add_option("--window", cfg.window, "re_min:re_max:im_min:im_max");
    add_out(spec, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForVersion& e) {
        out << toolkit_version << "\n";
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "bad config: " << e.what() << "\n";
        return exit_bad_config;
    }

    for (auto* sc : app.get_subcommands()) cfg.subcommand = sc->get_name();
    std::optional<double>* slots[8] = {nullptr, &cfg.c1, &cfg.c2, &cfg.c3, &cfg.c4, &cfg.c5, &cfg.c6, &cfg.c7};
    const auto& used = cfg.subcommand == "profile" ? copt_prof : copt_hom;
    if (cfg.subcommand == "homoclinic" || cfg.subcommand == "profile")
        for (int k = 1; k <= 7; ++k)
            if (used[k]->count() > 0) *slots[k] = c[k];
    if (oxmin->count() > 0) cfg.x_min = xmin;
    if (oxmax->count() > 0) cfg.x_max = xmax;
    for (auto* o : ocount)
        if (o->count() > 0) cfg.count = count;
    return run(cfg, out, err);
}

}  // namespace ferrohopf::cli
