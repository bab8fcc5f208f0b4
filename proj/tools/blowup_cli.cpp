#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blowup/analysis.hpp"
#include "output_writers.hpp"

namespace {

using namespace blowup;
using cli::CsvWriter;
using cli::JsonWriter;

constexpr const char* kVersion = "0.1.0";

struct Common {
    double m = 0.0;
    double sigma = 0.0;
    bool use_sigma_star = false;
    std::string out;
    std::string traj;
    ShootControl ctrl;

    Params params() const {
        return {m, use_sigma_star ? sigma_star(m) : sigma};
    }
};

void add_common(CLI::App* sub, Common& c, bool needs_sigma = true) {
    sub->add_option("--m", c.m, "diffusion exponent m > 1")->required();
    if (needs_sigma) {
        auto* s = sub->add_option("--sigma", c.sigma, "weight exponent sigma > 0");
        auto* ss = sub->add_flag("--sigma-star", c.use_sigma_star,
                                 "use sigma = sqrt(2(m+1))");
        s->excludes(ss);
        ss->excludes(s);
    }
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--rtol", c.ctrl.ode.rtol, "relative tolerance");
    sub->add_option("--atol", c.ctrl.ode.atol, "absolute tolerance");
    sub->add_option("--xi-min", c.ctrl.ode.xi_min, "backward cutoff");
    sub->add_option("--max-steps", c.ctrl.ode.max_steps, "step budget");
    sub->add_option("--z-cut", c.ctrl.z_cut, "tail cutoff in Z");
    sub->add_option("--tail-tol", c.ctrl.tail_tol, "tail drift tolerance");
    sub->add_option("--slope-tol", c.ctrl.slope_tol, "good-profile slope tolerance");
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << text;
}

std::string kind_name(BackwardKind k) {
    switch (k) {
    case BackwardKind::SignChange: return "SignChange";
    case BackwardKind::PositiveAtZero: return "PositiveAtZero";
    case BackwardKind::GoodCandidate: return "GoodCandidate";
    case BackwardKind::Asymptote: return "Asymptote";
    default: return "Inconclusive";
    }
}

std::string kind_name(ForwardKind k) {
    switch (k) {
    case ForwardKind::Interface: return "Interface";
    case ForwardKind::TransversalZero: return "TransversalZero";
    case ForwardKind::Tail: return "Tail";
    default: return "Inconclusive";
    }
}

std::string law_name(MatchedLaw l) {
    switch (l) {
    case MatchedLaw::TwoOverM1: return "TwoOverM1";
    case MatchedLaw::SigmaPlus2OverM1: return "SigmaPlus2OverM1";
    case MatchedLaw::OneOverM: return "OneOverM";
    case MatchedLaw::Constant: return "Constant";
    default: return "None";
    }
}

std::string character_name(BlowupCharacter c) {
    switch (c) {
    case BlowupCharacter::Global: return "Global";
    case BlowupCharacter::AtInfinity: return "AtInfinity";
    default: return "Unknown";
    }
}

void emit_params(JsonWriter& j, const Params& p) {
    j.key("params");
    j.begin_object();
    j.key("m");
    j.value(p.m);
    j.key("sigma");
    j.value(p.sigma);
    j.end_object();
}

void emit_tolerances(JsonWriter& j, const ShootControl& c) {
    j.key("tolerances_used");
    j.begin_object();
    j.key("rtol"); j.value(c.ode.rtol);
    j.key("atol"); j.value(c.ode.atol);
    j.key("xi_min"); j.value(c.ode.xi_min);
    j.key("max_steps"); j.value(c.ode.max_steps);
    j.key("bound_huge"); j.value(c.ode.bound_huge);
    j.key("slope_tol"); j.value(c.slope_tol);
    j.key("fmslope_tol"); j.value(c.fmslope_tol);
    j.key("a_floor"); j.value(c.a_floor);
    j.key("z_cut"); j.value(c.z_cut);
    j.key("tail_tol"); j.value(c.tail_tol);
    j.key("series_offset"); j.value(c.series_offset);
    j.key("launch_scale"); j.value(c.launch_scale);
    j.key("p1_radius"); j.value(c.p1_radius);
    j.key("y_cut_factor"); j.value(c.y_cut_factor);
    j.key("bisect_rel"); j.value(c.bisect_rel);
    j.end_object();
}

std::string provenance(const std::string& cmd, const Params& p, const ShootControl& c) {
    std::ostringstream os;
    os << "blowup " << kVersion << " " << cmd << " m=" << cli::fmt_num(p.m)
       << " sigma=" << cli::fmt_num(p.sigma) << " rtol=" << cli::fmt_num(c.ode.rtol)
       << " atol=" << cli::fmt_num(c.ode.atol);
    return os.str();
}

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> grid;
    if (spec.rfind("log:", 0) == 0 || spec.rfind("lin:", 0) == 0) {
        const bool logspace = spec[1] == 'o';
        double a, b;
        int n;
        if (std::sscanf(spec.c_str() + 4, "%lf:%lf:%d", &a, &b, &n) != 3 || n < 1)
            throw std::invalid_argument("bad grid spec: " + spec);
        for (int i = 0; i < n; ++i) {
            const double t = n == 1 ? a : a + (b - a) * i / (n - 1);
            grid.push_back(logspace ? std::pow(10.0, t) : t);
        }
        return grid;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) grid.push_back(std::stod(tok));
    if (grid.empty()) throw std::invalid_argument("bad grid spec: " + spec);
    return grid;
}

void write_profile_csv(const std::string& path, const std::string& prov,
                       const ProfileTrajectory& tr) {
    CsvWriter csv;
    csv.comment(prov);
    csv.header({"xi", "v", "w", "f", "fprime"});
    const Params& p = tr.params;
    for (const auto& s : tr.samples) {
        ProfileState st{s.t, s.y[0], s.y[1]};
        const double f = st.f(p);
        const double fp = st.v > 0.0 ? st.fprime(p) : std::nan("");
        csv.row({st.xi, st.v, st.w, f, fp});
    }
    write_text(path, csv.str());
}

void write_phase_csv(const std::string& path, const std::string& prov,
                     const PhaseTrajectory& tr) {
    CsvWriter csv;
    csv.comment(prov);
    csv.header({"eta", "X", "Y", "Z"});
    for (const auto& s : tr.samples) csv.row({s.t, s.y[0], s.y[1], s.y[2]});
    write_text(path, csv.str());
}

// --- commands -----------------------------------------------------------------

int cmd_exponents(const Common& c) {
    const Params p = c.params();
    const auto e = exponents(p);
    JsonWriter j;
    j.begin_object();
    j.key("command"); j.value("exponents");
    emit_params(j, p);
    j.key("outcome");
    j.begin_object();
    j.key("alpha"); j.value(e.alpha);
    j.key("beta"); j.value(e.beta);
    j.key("sigma_star"); j.value(sigma_star(p.m));
    j.end_object();
    emit_tolerances(j, c.ctrl);
    j.end_object();
    write_text(c.out, j.str() + "\n");
    return 0;
}

int cmd_explicit(const Common& c, int n, const std::string& slices) {
    const double m = c.m;
    if (!(m > 1.0)) throw std::invalid_argument("explicit: require m > 1");
    const Params p{m, sigma_star(m)};
    const auto e = exponents(p);
    const double xi1 = explicit_support_edge(m);

    double max_res = 0.0;
    for (int i = 1; i < 1024; ++i) {
        const double xi = 0.99 * xi1 * i / 1023.0;
        max_res = std::max(max_res, std::abs(explicit_ode_residual(m, xi)));
    }

    CsvWriter csv;
    csv.comment(provenance("explicit", p, c.ctrl) + " xi1=" + cli::fmt_num(xi1) +
                " max_ode_residual=" + cli::fmt_num(max_res));
    if (slices.empty()) {
        csv.header({"xi", "f"});
        for (int i = 0; i < n; ++i) {
            const double xi = 1.05 * xi1 * i / (n - 1);
            csv.row({xi, explicit_profile(m, xi)});
        }
    } else {
        auto ts = parse_grid(slices);
        if (ts.size() < 2) throw std::invalid_argument("--time-slices needs T,t1[,t2...]");
        const double T = ts[0];
        std::vector<double> times(ts.begin() + 1, ts.end());
        std::vector<std::string> cols{"x"};
        double tmax = times[0];
        for (double t : times) {
            if (!(t < T)) throw std::invalid_argument("--time-slices: every t must be < T");
            tmax = std::max(tmax, t);
            cols.push_back("u_t" + cli::fmt_num(t));
        }
        const double xmax = 1.05 * xi1 * std::pow(T - tmax, -e.beta);
        csv.header(cols);
        for (int i = 0; i < n; ++i) {
            const double x = xmax * i / (n - 1);
            std::vector<double> row{x};
            for (double t : times)
                row.push_back(std::pow(T - t, -e.alpha) *
                              explicit_profile(m, x * std::pow(T - t, e.beta)));
            csv.row(row);
        }
    }
    write_text(c.out, csv.str());
    return 0;
}

int cmd_shoot_back(const Common& c, double eta) {
    const Params p = c.params();
    auto out = shoot_from_interface(p, eta, c.ctrl);
    JsonWriter j;
    j.begin_object();
    j.key("command"); j.value("shoot-back");
    emit_params(j, p);
    j.key("outcome");
    j.begin_object();
    j.key("kind"); j.value(kind_name(out.kind));
    j.key("eta"); j.value(eta);
    j.key("theta"); j.value(out.theta);
    j.key("origin_value"); j.value(out.origin_value);
    j.key("origin_slope"); j.value(out.origin_slope);
    j.key("terminal_fm_prime"); j.value(out.trajectory.terminal_fm_prime);
    j.end_object();
    emit_tolerances(j, c.ctrl);
    j.end_object();
    write_text(c.out, j.str() + "\n");
    if (!c.traj.empty())
        write_profile_csv(c.traj, provenance("shoot-back", p, c.ctrl), out.trajectory);
    return out.kind == BackwardKind::Inconclusive ? 3 : 0;
}

int cmd_shoot_origin(const Common& c, double cval) {
    const Params p = c.params();
    auto out = shoot_from_origin(p, cval, c.ctrl);
    JsonWriter j;
    j.begin_object();
    j.key("command"); j.value("shoot-origin");
    emit_params(j, p);
    j.key("outcome");
    j.begin_object();
    j.key("kind"); j.value(kind_name(out.kind));
    j.key("c"); j.value(cval);
    j.key("k"); j.value(origin_coefficient_to_k(p, cval));
    j.key("xi0"); j.value(out.xi0);
    j.key("gamma"); j.value(out.gamma);
    j.key("lnK"); j.value(out.lnK);
    j.key("tail_drift"); j.value(out.tail_drift);
    j.key("fm_prime_end"); j.value(out.fm_prime_end);
    j.end_object();
    emit_tolerances(j, c.ctrl);
    j.end_object();
    write_text(c.out, j.str() + "\n");
    if (!c.traj.empty())
        write_phase_csv(c.traj, provenance("shoot-origin", p, c.ctrl), out.trajectory);
    return out.kind == ForwardKind::Inconclusive ? 3 : 0;
}

int cmd_find_profile(const Common& c, const std::string& bracket) {
    const Params p = c.params();
    std::pair<double, double> br;
    if (bracket.empty()) {
        br = scan_interface_bracket(p, c.ctrl);
    } else {
        if (std::sscanf(bracket.c_str(), "%lf:%lf", &br.first, &br.second) != 2)
            throw std::invalid_argument("bad --bracket, expected lo:hi");
    }
    auto res = find_good_profile(p, br, c.ctrl);
    JsonWriter j;
    j.begin_object();
    j.key("command"); j.value("find-profile");
    emit_params(j, p);
    j.key("outcome");
    j.begin_object();
    j.key("kind"); j.value(kind_name(res.outcome.kind));
    j.key("eta_star"); j.value(res.eta_star);
    j.key("origin_value"); j.value(res.outcome.origin_value);
    j.key("origin_slope"); j.value(res.outcome.origin_slope);
    j.key("eta_lo"); j.value(res.eta_lo);
    j.key("eta_hi"); j.value(res.eta_hi);
    j.key("lo_kind"); j.value(kind_name(res.lo_kind));
    j.key("hi_kind"); j.value(kind_name(res.hi_kind));
    j.end_object();
    emit_tolerances(j, c.ctrl);
    j.end_object();
    write_text(c.out, j.str() + "\n");
    if (!c.traj.empty())
        write_profile_csv(c.traj, provenance("find-profile", p, c.ctrl),
                          res.outcome.trajectory);
    return res.outcome.kind == BackwardKind::Inconclusive ? 3 : 0;
}

int cmd_find_interface(const Common& c, const std::string& bracket, const std::string& grid) {
    const Params p = c.params();
    std::pair<double, double> br;
    if (!bracket.empty()) {
        if (std::sscanf(bracket.c_str(), "%lf:%lf", &br.first, &br.second) != 2)
            throw std::invalid_argument("bad --bracket, expected c_tail:c_cross");
    } else {
        auto g = parse_grid(grid.empty() ? "log:-2:2:25" : grid);
        auto cls = classify_c_intervals(p, g, c.ctrl);
        if (cls.candidate_brackets.empty())
            throw std::runtime_error("no Tail/TransversalZero adjacency on the grid");
        br = cls.candidate_brackets.front();
    }
    auto res = find_interface_c(p, br, c.ctrl);
    JsonWriter j;
    j.begin_object();
    j.key("command"); j.value("find-interface");
    emit_params(j, p);
    j.key("outcome");
    j.begin_object();
    j.key("kind"); j.value(kind_name(res.outcome.kind));
    j.key("c_star"); j.value(res.c_star);
    j.key("xi0"); j.value(res.outcome.xi0);
    j.key("gamma"); j.value(res.outcome.gamma);
    j.key("c_lo"); j.value(res.c_lo);
    j.key("c_hi"); j.value(res.c_hi);
    j.end_object();
    emit_tolerances(j, c.ctrl);
    j.end_object();
    write_text(c.out, j.str() + "\n");
    if (!c.traj.empty())
        write_phase_csv(c.traj, provenance("find-interface", p, c.ctrl),
                        res.outcome.trajectory);
    return res.outcome.kind == ForwardKind::Interface ? 0 : 3;
}

int cmd_scan_c(const Common& c, const std::string& grid) {
    const Params p = c.params();
    auto g = parse_grid(grid);
    auto cls = classify_c_intervals(p, g, c.ctrl);
    JsonWriter j;
    j.begin_object();
    j.key("command"); j.value("scan-c");
    emit_params(j, p);
    j.key("outcome");
    j.begin_object();
    j.key("entries");
    j.begin_array();
    for (const auto& e : cls.entries) {
        j.begin_object();
        j.key("c"); j.value(e.c);
        j.key("kind"); j.value(kind_name(e.kind));
        j.key("xi0"); j.value(e.xi0);
        j.key("gamma"); j.value(e.gamma);
        j.key("lnK"); j.value(e.lnK);
        j.key("tail_drift"); j.value(e.tail_drift);
        j.end_object();
    }
    j.end_array();
    j.key("intervals");
    j.begin_array();
    for (const auto& iv : cls.intervals) {
        j.begin_object();
        j.key("kind"); j.value(kind_name(iv.kind));
        j.key("c_lo"); j.value(cls.entries[iv.lo].c);
        j.key("c_hi"); j.value(cls.entries[iv.hi].c);
        j.end_object();
    }
    j.end_array();
    j.key("candidate_brackets");
    j.begin_array();
    for (const auto& b : cls.candidate_brackets) {
        j.begin_object();
        j.key("c_tail"); j.value(b.first);
        j.key("c_cross"); j.value(b.second);
        j.end_object();
    }
    j.end_array();
    j.key("inconclusive_count"); j.value(cls.inconclusive_count);
    j.end_object();
    emit_tolerances(j, c.ctrl);
    j.end_object();
    write_text(c.out, j.str() + "\n");
    return cls.inconclusive_count == static_cast<int>(cls.entries.size()) ? 3 : 0;
}

int cmd_scan_sigma(const Common& c, const std::string& grid) {
    auto g = parse_grid(grid);
    auto reports = regime_scan(c.m, g, c.ctrl);
    const Params p0{c.m, g.front()};
    JsonWriter j;
    j.begin_object();
    j.key("command"); j.value("scan-sigma");
    j.key("params");
    j.begin_object();
    j.key("m"); j.value(c.m);
    j.key("sigma_grid");
    j.begin_array();
    for (double s : g) j.value(s);
    j.end_array();
    j.end_object();
    j.key("outcome");
    j.begin_array();
    int inconclusive = 0;
    for (const auto& r : reports) {
        inconclusive += r.inconclusive_count;
        j.begin_object();
        j.key("sigma"); j.value(r.sigma);
        j.key("all_tail"); j.value(r.all_tail);
        j.key("has_interface_from_origin"); j.value(r.has_interface_from_origin);
        j.key("has_transversal"); j.value(r.has_transversal);
        j.key("good_profile_origin_value"); j.value(r.good_profile_origin_value);
        j.key("good_profile_eta"); j.value(r.good_profile_eta);
        j.key("good_profile_law"); j.value(law_name(r.good_profile_law));
        j.key("blowup_character"); j.value(character_name(r.blowup_character));
        j.key("inconclusive_count"); j.value(r.inconclusive_count);
        j.key("shot_count"); j.value(r.shot_count);
        j.key("sigma0"); j.value(r.sigma0);
        j.key("sigma_star"); j.value(r.sigma_star);
        j.key("below_proved_all_tail"); j.value(r.below_proved_all_tail);
        j.end_object();
    }
    j.end_array();
    emit_tolerances(j, c.ctrl);
    j.end_object();
    write_text(c.out, j.str() + "\n");
    (void)p0;
    return inconclusive > 0 && reports.empty() ? 3 : 0;
}

int cmd_phase_orbit(const Common& c, const std::string& from, double delta, double cval,
                    const std::string& start) {
    const Params p = c.params();
    PhaseState s0{0, 0, 0};
    if (!start.empty()) {
        if (std::sscanf(start.c_str(), "%lf,%lf,%lf", &s0.X, &s0.Y, &s0.Z) != 3)
            throw std::invalid_argument("bad --start, expected X,Y,Z");
    } else if (from == "P2") {
        const auto cp = critical_point(p, PointTag::P2);
        const Eigen::Vector3d v = cp.coords + delta * p2_exit_direction(p);
        s0 = {v[0], v[1], v[2]};
    } else if (from == "P0") {
        auto out = shoot_from_origin(p, cval, c.ctrl);
        // reuse the launched trajectory directly
        JsonWriter j;
        j.begin_object();
        j.key("command"); j.value("phase-orbit");
        emit_params(j, p);
        j.key("outcome");
        j.begin_object();
        j.key("from"); j.value("P0");
        j.key("c"); j.value(cval);
        j.key("kind"); j.value(kind_name(out.kind));
        j.key("lnK"); j.value(out.lnK);
        j.key("tail_drift"); j.value(out.tail_drift);
        j.end_object();
        emit_tolerances(j, c.ctrl);
        j.end_object();
        write_text(c.out, j.str() + "\n");
        if (!c.traj.empty())
            write_phase_csv(c.traj, provenance("phase-orbit", p, c.ctrl), out.trajectory);
        return out.kind == ForwardKind::Inconclusive ? 3 : 0;
    } else {
        throw std::invalid_argument("--from must be P2 or P0 (or use --start)");
    }

    auto out = classify_phase_orbit(p, s0, c.ctrl);
    const auto& tr = out.trajectory;

    JsonWriter j;
    j.begin_object();
    j.key("command"); j.value("phase-orbit");
    emit_params(j, p);
    j.key("outcome");
    j.begin_object();
    j.key("from"); j.value(from);
    j.key("delta"); j.value(delta);
    j.key("kind"); j.value(kind_name(out.kind));
    j.key("terminal_event");
    switch (tr.termination.kind) {
    case EventKind::ZReaches: j.value("ZReaches"); break;
    case EventKind::StateNearPoint: j.value("StateNearPoint"); break;
    case EventKind::YCrossesValue: j.value("YCrossesValue"); break;
    case EventKind::VDiverges: j.value("VDiverges"); break;
    default: j.value("StepBudgetExhausted"); break;
    }
    j.key("is_tail"); j.value(out.kind == ForwardKind::Tail);
    j.key("lnK"); j.value(out.lnK);
    j.key("tail_drift"); j.value(out.tail_drift);
    j.key("Z_end"); j.value(tr.back().Z);
    j.end_object();
    emit_tolerances(j, c.ctrl);
    j.end_object();
    write_text(c.out, j.str() + "\n");
    if (!c.traj.empty())
        write_phase_csv(c.traj, provenance("phase-orbit", p, c.ctrl), tr);
    return out.kind == ForwardKind::Inconclusive ? 3 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-similar blow-up profiles of u_t = (u^m)_xx + |x|^sigma u"};
    app.require_subcommand(1);

    Common c;
    double eta = 1.0, cval = 1.0, delta = 1e-6;
    int n = 512;
    std::string grid, bracket, slices, from = "P2", start;

    auto* sc_exp = app.add_subcommand("exponents", "self-similar rates alpha, beta");
    add_common(sc_exp, c);

    auto* sc_explicit = app.add_subcommand("explicit", "closed-form profile at sigma_star");
    add_common(sc_explicit, c, false);
    sc_explicit->add_option("--n", n, "number of rows");
    sc_explicit->add_option("--time-slices", slices, "T,t1[,t2...] emits u(x,t) columns");

    auto* sc_back = app.add_subcommand("shoot-back", "backward shoot from an interface");
    add_common(sc_back, c);
    sc_back->add_option("--eta", eta, "interface point")->required();
    sc_back->add_option("--traj", c.traj, "CSV trajectory path");

    auto* sc_origin = app.add_subcommand("shoot-origin", "forward shoot over the origin family");
    add_common(sc_origin, c);
    sc_origin->add_option("--c", cval, "origin coefficient")->required();
    sc_origin->add_option("--traj", c.traj, "CSV trajectory path");

    auto* sc_find = app.add_subcommand("find-profile", "bisect the good profile's interface");
    add_common(sc_find, c);
    sc_find->add_option("--bracket", bracket, "eta_lo:eta_hi (default: auto scan)");
    sc_find->add_option("--traj", c.traj, "CSV trajectory path");

    auto* sc_findc = app.add_subcommand("find-interface", "bisect the interface coefficient c*");
    add_common(sc_findc, c);
    sc_findc->add_option("--bracket", bracket, "c_tail:c_cross (default: from --grid)");
    sc_findc->add_option("--grid", grid, "c grid spec (default log:-2:2:25)");
    sc_findc->add_option("--traj", c.traj, "CSV trajectory path");

    auto* sc_scanc = app.add_subcommand("scan-c", "classify the origin family over a c grid");
    add_common(sc_scanc, c);
    sc_scanc->add_option("--grid", grid, "log:a:b:n, lin:a:b:n or v1,v2,...")->required();

    auto* sc_scans = app.add_subcommand("scan-sigma", "regime report over a sigma grid");
    add_common(sc_scans, c, false);
    sc_scans->add_option("--grid", grid, "sigma grid spec")->required();

    auto* sc_orbit = app.add_subcommand("phase-orbit", "integrate one phase-space orbit");
    add_common(sc_orbit, c);
    sc_orbit->add_option("--from", from, "P2 (default) or P0");
    sc_orbit->add_option("--delta", delta, "offset along the P2 exit direction");
    sc_orbit->add_option("--c", cval, "origin coefficient for --from P0");
    sc_orbit->add_option("--start", start, "explicit start X,Y,Z");
    sc_orbit->add_option("--traj", c.traj, "CSV trajectory path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // unknown flags and bad values reject with 2
    }

    try {
        if (n < 2) throw std::invalid_argument("--n must be at least 2");
        if (sc_exp->parsed()) return cmd_exponents(c);
        if (sc_explicit->parsed()) return cmd_explicit(c, n, slices);
        if (sc_back->parsed()) return cmd_shoot_back(c, eta);
        if (sc_origin->parsed()) return cmd_shoot_origin(c, cval);
        if (sc_find->parsed()) return cmd_find_profile(c, bracket);
        if (sc_findc->parsed()) return cmd_find_interface(c, bracket, grid);
        if (sc_scanc->parsed()) return cmd_scan_c(c, grid);
        if (sc_scans->parsed()) return cmd_scan_sigma(c, grid);
        if (sc_orbit->parsed()) return cmd_phase_orbit(c, from, delta, cval, start);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 2;
}
