/* SPDX-License-Identifier: Apache-2.0 */

/* Command-line front end: plot-ready density/current profiles, canonical
 * finite-ring profiles, stochastic simulation, and the verification suites.
 * Output is CSV (default) or JSON with 17 significant digits; every file
 * echoes the fully resolved run configuration for reproducibility. */

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zrp/canonical.hpp"
#include "zrp/dynamics.hpp"
#include "zrp/gillespie.hpp"
#include "zrp/profiles.hpp"
#include "zrp/verify.hpp"

namespace {

using json = nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stoi(tok));
    if (out.empty()) throw CLI::ValidationError(std::string(what) + ": empty list");
    return out;
}

std::pair<int, int> parse_range(const std::string& text, const char* what) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError(std::string(what) + ": expected lo:hi");
    return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
}

/* a flat table plus the resolved configuration header */
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::map<std::string, std::string> config;
    /* row indices starting new sweep blocks (blank-line separators in CSV) */
    std::vector<size_t> block_starts;
};

void write_table(const Table& t, const std::string& path, const std::string& format) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!path.empty()) {
        file.open(path);
        if (!file) throw std::runtime_error("cannot open output file: " + path);
        os = &file;
    }
    if (format == "json") {
        json out;
        out["config"] = t.config;
        out["columns"] = t.columns;
        out["rows"] = json::array();
        for (const auto& row : t.rows) out["rows"].push_back(row);
        *os << out.dump(2) << "\n";
        return;
    }
    for (const auto& [k, v] : t.config) *os << "# " << k << " = " << v << "\n";
    for (size_t c = 0; c < t.columns.size(); ++c)
        *os << t.columns[c] << (c + 1 < t.columns.size() ? "," : "\n");
    size_t next_block = 0;
    for (size_t r = 0; r < t.rows.size(); ++r) {
        while (next_block < t.block_starts.size() && t.block_starts[next_block] == r) {
            if (r != 0) *os << "\n";
            ++next_block;
        }
        for (size_t c = 0; c < t.rows[r].size(); ++c)
            *os << t.rows[r][c] << (c + 1 < t.rows[r].size() ? "," : "\n");
    }
}

const char* region_name(zrp::profiles::Region r) {
    switch (r) {
        case zrp::profiles::Region::I: return "I";
        case zrp::profiles::Region::II: return "II";
        default: return "III";
    }
}

struct ProfileArgs {
    double q = 0.5, mu = 0.5;
    double rho = -1.0, y = -1.0;
    std::string defects;
    std::string window = "-5:20";
    std::string rho_sweep;
    double a = 1.0, b = 1.0;
    int shift = 0;
    std::string out, format = "csv";
};

void run_profile(const ProfileArgs& args) {
    zrp::ModelParams params(args.q, args.mu);
    zrp::DefectPattern pattern(args.defects.empty() ? std::vector<int>{}
                                                    : parse_int_list(args.defects, "--defects"));
    auto [lo, hi] = parse_range(args.window, "--window");
    zrp::CurrentMix mix(args.a, args.b);

    std::vector<double> rhos;
    if (!args.rho_sweep.empty()) {
        std::stringstream ss(args.rho_sweep);
        std::string lo_s, hi_s, step_s;
        std::getline(ss, lo_s, ':');
        std::getline(ss, hi_s, ':');
        std::getline(ss, step_s, ':');
        double r0 = std::stod(lo_s), r1 = std::stod(hi_s), dr = std::stod(step_s);
        if (dr <= 0.0) throw CLI::ValidationError("--rho-sweep: step must be > 0");
        for (double r = r0; r <= r1 + 1e-12; r += dr) rhos.push_back(r);
    } else if (args.y > 0.0) {
        rhos.push_back(-1.0);  /* marker: use y directly */
    } else if (args.rho > 0.0) {
        rhos.push_back(args.rho);
    } else {
        throw CLI::ValidationError("one of --rho, --y or --rho-sweep is required");
    }

    Table t;
    t.columns = {"rho_avg", "r", "region", "rho", "j_plus", "j_minus", "j_mixed"};
    t.config = {{"command", "profile"},        {"q", fmt17(args.q)},
                {"mu", fmt17(args.mu)},        {"defects", args.defects.empty() ? "(none)" : args.defects},
                {"window", args.window},       {"a", fmt17(args.a)},
                {"b", fmt17(args.b)},          {"shift", std::to_string(args.shift)},
                {"format", args.format}};
    if (!args.rho_sweep.empty()) t.config["rho_sweep"] = args.rho_sweep;

    for (double rho : rhos) {
        zrp::EnsembleParams ens = rho > 0.0 ? zrp::EnsembleParams::from_density(rho, params)
                                            : zrp::EnsembleParams::from_fugacity(args.y, params);
        if (rhos.size() == 1) {
            t.config["y"] = fmt17(ens.y);
            t.config["rho"] = fmt17(ens.rho);
        }
        zrp::profiles::Profile prof = zrp::profiles::profile(lo, hi, pattern, ens, params, mix);
        t.block_starts.push_back(t.rows.size());
        for (int r = lo; r <= hi; ++r) {
            size_t i = static_cast<size_t>(prof.index(r));
            t.rows.push_back({fmt17(ens.rho), std::to_string(r + args.shift),
                              region_name(prof.region[i]), fmt17(prof.rho[i]), fmt17(prof.j_plus[i]),
                              fmt17(prof.j_minus[i]), fmt17(prof.j_mixed[i])});
        }
    }
    write_table(t, args.out, args.format);
}

struct CanonicalArgs {
    double q = 0.5, mu = 0.5;
    double rho = -1.0;
    std::string sector;  /* m1,m2 */
    std::string defects;
    int L = 8;
    double tol = 1e-10;
    std::string out, format = "csv";
};

void run_canonical(const CanonicalArgs& args) {
    zrp::ModelParams params(args.q, args.mu);
    zrp::DefectPattern pattern(args.defects.empty() ? std::vector<int>{}
                                                    : parse_int_list(args.defects, "--defects"));
    int m2 = 0;
    if (!args.sector.empty()) {
        std::vector<int> sec = parse_int_list(args.sector, "--sector");
        if (sec.size() != 2) throw CLI::ValidationError("--sector: expected m1,m2");
        if (sec[0] != pattern.total())
            throw CLI::ValidationError("--sector: m1 must equal the defect total");
        m2 = sec[1];
    } else if (args.rho > 0.0) {
        m2 = static_cast<int>(args.rho * args.L + 0.5);
    } else {
        throw CLI::ValidationError("one of --sector or --rho is required");
    }

    zrp::canonical::CanonicalResult res =
        zrp::canonical::canonical_profile(args.L, pattern, m2, params, args.tol);

    Table t;
    t.columns = {"r", "rho_canonical"};
    t.config = {{"command", "canonical"},
                {"q", fmt17(args.q)},
                {"mu", fmt17(args.mu)},
                {"L", std::to_string(args.L)},
                {"m2", std::to_string(m2)},
                {"defects", args.defects.empty() ? "(none)" : args.defects},
                {"headroom_t", std::to_string(res.t_used)},
                {"headroom_last_change", fmt17(res.last_change)},
                {"format", args.format}};
    for (int r = 1; r <= args.L; ++r)
        t.rows.push_back({std::to_string(r), fmt17(res.rho[static_cast<size_t>(r - 1)])});
    write_table(t, args.out, args.format);
}

struct SimulateArgs {
    double q = 0.5, mu = 0.5;
    int L = 4;
    std::string sector = "1,2";
    double a = 1.0, b = 1.0;
    std::uint64_t events = 1000000;
    std::uint64_t seed = 1;
    std::string out, format = "csv";
};

void run_simulate(const SimulateArgs& args) {
    zrp::ModelParams params(args.q, args.mu);
    std::vector<int> sec = parse_int_list(args.sector, "--sector");
    if (sec.size() != 2 || sec[0] < 0 || sec[1] < 0)
        throw CLI::ValidationError("--sector: expected m1,m2 with m1,m2 >= 0");

    auto res = zrp::gillespie::simulate(args.L, {sec[0], sec[1]}, args.q, args.mu, args.a, args.b,
                                        args.events, args.seed);

    /* exact comparison when the sector is small enough for the dense solver */
    zrp::dynamics::Sector sector = zrp::dynamics::enumerate_sector(args.L, {sec[0], sec[1]});
    bool exact_ok = sector.dim() <= 2000;
    Eigen::VectorXd v;
    if (exact_ok)
        v = zrp::dynamics::stationary_solve(
            zrp::dynamics::build_h(sector, args.q, args.mu, args.a, args.b));

    Table t;
    t.columns = {"site", "n1", "n2", "probability", "stderr"};
    if (exact_ok) {
        t.columns.push_back("exact");
        t.columns.push_back("zscore");
    }
    t.config = {{"command", "simulate"},      {"q", fmt17(args.q)},
                {"mu", fmt17(args.mu)},       {"L", std::to_string(args.L)},
                {"sector", args.sector},      {"a", fmt17(args.a)},
                {"b", fmt17(args.b)},         {"events", std::to_string(args.events)},
                {"seed", std::to_string(args.seed)}, {"total_time", fmt17(res.total_time)},
                {"format", args.format}};
    for (int site = 0; site < args.L; ++site) {
        std::vector<double> exact;
        if (exact_ok) {
            exact.assign(res.site[0].prob.size(), 0.0);
            for (int i = 0; i < sector.dim(); ++i)
                exact[static_cast<size_t>(res.flat(
                    sector.states[static_cast<size_t>(i)][static_cast<size_t>(site)]))] += v(i);
        }
        for (int n1 = 0; n1 <= sec[0]; ++n1)
            for (int n2 = 0; n2 <= sec[1]; ++n2) {
                size_t c = static_cast<size_t>(res.flat({n1, n2}));
                std::vector<std::string> row{std::to_string(site + 1), std::to_string(n1),
                                             std::to_string(n2), fmt17(res.site[static_cast<size_t>(site)].prob[c]),
                                             fmt17(res.site[static_cast<size_t>(site)].stderr_[c])};
                if (exact_ok) {
                    double diff = res.site[static_cast<size_t>(site)].prob[c] - exact[c];
                    double err = res.site[static_cast<size_t>(site)].stderr_[c];
                    row.push_back(fmt17(exact[c]));
                    row.push_back(fmt17(err > 0.0 ? diff / err : 0.0));
                }
                t.rows.push_back(std::move(row));
            }
    }
    write_table(t, args.out, args.format);
}

struct VerifyArgs {
    std::string suite = "all";
    double tol = 1.0;
    unsigned seed = 2026;
    std::string out, format = "csv";
};

int run_verify(const VerifyArgs& args) {
    std::vector<std::string> names;
    if (args.suite == "all")
        names = zrp::verify::suite_names();
    else
        names.push_back(args.suite);

    Table t;
    t.columns = {"suite", "check", "status", "worst", "tolerance", "suite_seconds"};
    t.config = {{"command", "verify"},
                {"suite", args.suite},
                {"tol_scale", fmt17(args.tol)},
                {"seed", std::to_string(args.seed)},
                {"format", args.format}};
    bool all_passed = true;
    for (const std::string& name : names) {
        zrp::verify::SuiteResult res = zrp::verify::run_suite(name, args.tol, args.seed);
        all_passed = all_passed && res.passed;
        for (const auto& c : res.checks)
            t.rows.push_back({name, c.name, c.passed ? "pass" : "FAIL", fmt17(c.worst),
                              fmt17(c.tolerance), fmt17(res.seconds)});
        std::fprintf(stderr, "%-22s %s  (%d checks, %d failed, %.2fs)\n", name.c_str(),
                     res.passed ? "pass" : "FAIL", static_cast<int>(res.checks.size()),
                     res.failures(), res.seconds);
    }
    write_table(t, args.out, args.format);
    return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-species q-boson zero range process: stationary profiles and verification"};
    app.require_subcommand(1);

    ProfileArgs pa;
    CLI::App* prof = app.add_subcommand("profile", "density and current profile around a defect cluster");
    prof->set_config("--config")->description("flat key=value configuration file");
    prof->add_option("--q", pa.q, "model parameter q in (0,1)")->capture_default_str();
    prof->add_option("--mu", pa.mu, "model parameter mu in (0,1)")->capture_default_str();
    prof->add_option("--rho", pa.rho, "average second-class density");
    prof->add_option("--y", pa.y, "fugacity in (0,1), alternative to --rho");
    prof->add_option("--defects", pa.defects, "defect occupancies, e.g. 2,1,3");
    prof->add_option("--window", pa.window, "site window lo:hi")->capture_default_str();
    prof->add_option("--rho-sweep", pa.rho_sweep, "sweep lo:hi:step over rho, one block per value");
    prof->add_option("--a", pa.a, "weight of the right-moving dynamics")->capture_default_str();
    prof->add_option("--b", pa.b, "weight of the left-moving dynamics")->capture_default_str();
    prof->add_option("--shift", pa.shift, "shift added to the emitted site coordinate")->capture_default_str();
    prof->add_option("--out", pa.out, "output path (stdout when omitted)");
    prof->add_option("--format", pa.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    CanonicalArgs ca;
    CLI::App* canon = app.add_subcommand("canonical", "finite-ring canonical density profile");
    canon->set_config("--config")->description("flat key=value configuration file");
    canon->add_option("--q", ca.q, "model parameter q in (0,1)")->capture_default_str();
    canon->add_option("--mu", ca.mu, "model parameter mu in (0,1)")->capture_default_str();
    canon->add_option("--L", ca.L, "ring size")->capture_default_str();
    canon->add_option("--rho", ca.rho, "average density; m2 = round(rho L)");
    canon->add_option("--sector", ca.sector, "sector m1,m2 (m1 must match the defect total)");
    canon->add_option("--defects", ca.defects, "defect occupancies at sites 1..s");
    canon->add_option("--tol", ca.tol, "headroom convergence tolerance")->capture_default_str();
    canon->add_option("--out", ca.out, "output path (stdout when omitted)");
    canon->add_option("--format", ca.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    SimulateArgs sa;
    CLI::App* sim = app.add_subcommand("simulate", "continuous-time Monte Carlo on the finite ring");
    sim->set_config("--config")->description("flat key=value configuration file");
    sim->add_option("--q", sa.q, "model parameter q in (0,1)")->capture_default_str();
    sim->add_option("--mu", sa.mu, "model parameter mu in (0,1)")->capture_default_str();
    sim->add_option("--L", sa.L, "ring size")->capture_default_str();
    sim->add_option("--sector", sa.sector, "sector m1,m2")->capture_default_str();
    sim->add_option("--a", sa.a, "weight of the right-moving dynamics")->capture_default_str();
    sim->add_option("--b", sa.b, "weight of the left-moving dynamics")->capture_default_str();
    sim->add_option("--events", sa.events, "number of events to simulate")->capture_default_str();
    sim->add_option("--seed", sa.seed, "random seed")->capture_default_str();
    sim->add_option("--out", sa.out, "output path (stdout when omitted)");
    sim->add_option("--format", sa.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    VerifyArgs va;
    CLI::App* ver = app.add_subcommand("verify", "run the named property suites");
    ver->set_config("--config")->description("flat key=value configuration file");
    ver->add_option("--suite", va.suite,
                    "suite name (qseries-identities, G-kernel, theorem-consistency, "
                    "dynamics-oracle, excess-sumrule) or 'all'")
        ->capture_default_str();
    ver->add_option("--tol", va.tol, "tolerance scale; tiny values force failures")->capture_default_str();
    ver->add_option("--seed", va.seed, "random seed for the property draws")->capture_default_str();
    ver->add_option("--out", va.out, "output path (stdout when omitted)");
    ver->add_option("--format", va.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (prof->parsed()) run_profile(pa);
        if (canon->parsed()) run_canonical(ca);
        if (sim->parsed()) run_simulate(sa);
        if (ver->parsed()) return run_verify(va);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
