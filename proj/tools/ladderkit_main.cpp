// Command-line front end: model ingestion, solver / fluctuation / simulation
// commands and analytic-versus-Monte-Carlo comparison reports.
//
// Exit codes: 0 success, 1 input error, 2 numerical non-convergence,
// 3 validation z-score failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ladderkit/errors.hpp"
#include "ladderkit/fluctuation.hpp"
#include "ladderkit/model.hpp"
#include "ladderkit/numerics.hpp"
#include "ladderkit/phasetype.hpp"
#include "ladderkit/serialize.hpp"
#include "ladderkit/simulate.hpp"
#include "ladderkit/whfactor.hpp"

namespace {

using ladderkit::Complex;
using ladderkit::json;
using ladderkit::PathClass;
using ladderkit::PhLevyModel;

constexpr const char* kVersion = "1.0.0";

struct Loaded {
    PhLevyModel model;
    std::string bytes; // raw config bytes for the inputs digest
};

Loaded load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ladderkit::DomainError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    Loaded out;
    out.bytes = ss.str();
    json j;
    try {
        j = json::parse(out.bytes);
    } catch (const json::parse_error& e) {
        throw ladderkit::DomainError(std::string("config parse error: ") + e.what());
    }
    out.model = ladderkit::model_from_json(j);
    return out;
}

std::string digest_hex(const std::string& configBytes, const std::string& flags) {
    const std::uint64_t h = ladderkit::fnv1a_digest(configBytes + "|" + flags);
    std::ostringstream ss;
    ss << "0x" << std::hex << h;
    return ss.str();
}

json make_report(const std::string& command, const Loaded& cfg,
                 const std::string& flags, json outputs, json diagnostics) {
    json rep;
    rep["command"] = command;
    rep["flags"] = flags;
    rep["inputsDigest"] = digest_hex(cfg.bytes, flags);
    rep["outputs"] = std::move(outputs);
    rep["diagnostics"] = std::move(diagnostics);
    rep["version"] = kVersion;
    return rep;
}

void emit(const json& rep) { std::cout << rep.dump(2) << "\n"; }

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

const char* path_class_name(PathClass pc) {
    return pc == PathClass::General ? "general" : "minusIsSubordinator";
}

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

std::vector<double> parse_levels(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty())
        throw ladderkit::DomainError("--levels: expected a comma-separated list");
    return out;
}

// analytic value of E[e^{-a(e_q - G) - b (M - X)_{e_q}}] from the ladder
// cumulant ratio; the local-time constant cancels between the two kappa+
// evaluations, so the subordinator case can use any positive placeholder
double wh4_analytic(const PhLevyModel& model, double q, double a, double b) {
    const Complex kTop =
        ladderkit::ladder_cumulant_plus(model, q + a, Complex(-b, 0.0), 1.0);
    const Complex kBot =
        ladderkit::ladder_cumulant_plus(model, q, Complex(0.0, 0.0), 1.0);
    const Complex kb = ladderkit::levy_exponent(model, Complex(b, 0.0));
    return (q * kTop / (kBot * (q + a - kb))).real();
}

// --- validate ---------------------------------------------------------------

int cmd_validate(const Loaded& cfg, const std::string& flags,
                 const std::string& format) {
    std::vector<std::string> issues;
    if (cfg.model.minus.downRate > 0.0 && cfg.model.minus.downLaw)
        for (const auto& s : ladderkit::validate(*cfg.model.minus.downLaw))
            issues.push_back("downLaw: " + s);
    if (cfg.model.upRate > 0.0 && cfg.model.upLaw)
        for (const auto& s : ladderkit::validate(*cfg.model.upLaw))
            issues.push_back("upLaw: " + s);

    json outputs;
    outputs["issues"] = issues;
    json diagnostics;
    if (issues.empty()) {
        const PathClass pc = ladderkit::classify_paths(cfg.model.minus);
        outputs["pathClass"] = path_class_name(pc);
        outputs["meanSlope"] = ladderkit::mean_slope(cfg.model);
        json grid = json::array();
        for (int j = 1; j <= 20; ++j) {
            const double u = 0.25 * j;
            const Complex k = ladderkit::levy_exponent(cfg.model, Complex(0.0, u));
            grid.push_back(json{{"u", u}, {"re", k.real()}, {"im", k.imag()}});
        }
        outputs["kappaImaginaryGrid"] = grid;
    }
    if (format == "csv") {
        std::cout << "u,re,im\n";
        if (issues.empty())
            for (const auto& row : outputs["kappaImaginaryGrid"])
                std::cout << fmt(row["u"].get<double>()) << ","
                          << fmt(row["re"].get<double>()) << ","
                          << fmt(row["im"].get<double>()) << "\n";
    } else {
        emit(make_report("validate", cfg, flags, outputs, diagnostics));
    }
    return issues.empty() ? 0 : 1;
}

// --- solve -------------------------------------------------------------------

int cmd_solve(const Loaded& cfg, const std::string& flags,
              const std::string& format, double a, double tol, int maxIter) {
    const ladderkit::LadderSolution sol =
        ladderkit::solve_ladder(cfg.model, a, tol, maxIter);
    json outputs = ladderkit::solution_to_json(sol);
    const PhLevyModel thinned = ladderkit::thin_defects(cfg.model);
    if (sol.pathCase == PathClass::General)
        outputs["phi"] = ladderkit::phi_root(thinned.minus, a + thinned.upRate);
    else
        outputs["phi"] = nullptr;
    json diagnostics;
    diagnostics["iterations"] = sol.iterations;
    diagnostics["residual"] = sol.residualValue;
    diagnostics["usedTilt"] = sol.usedTilt;
    diagnostics["newtonPolish"] = sol.newtonPolish;
    if (format == "csv") {
        std::cout << "component,value\n";
        for (Eigen::Index i = 0; i < sol.eta.size(); ++i)
            std::cout << "eta" << i << "," << fmt(sol.eta(i)) << "\n";
        std::cout << "residual," << fmt(sol.residualValue) << "\n";
    } else {
        emit(make_report("solve", cfg, flags, outputs, diagnostics));
    }
    return 0;
}

// --- first-passage -----------------------------------------------------------

int cmd_first_passage(const Loaded& cfg, const std::string& flags,
                      const std::string& format, double q,
                      const std::vector<double>& levels) {
    json rows = json::array();
    for (double k : levels) {
        json row;
        row["k"] = k;
        row["transform"] = ladderkit::first_passage_lt(cfg.model, q, k);
        try {
            const auto law = ladderkit::overshoot_law(cfg.model, q, k);
            row["creepMass"] = law.atom0;
            json w = json::array();
            if (law.tail)
                for (Eigen::Index i = 0; i < law.tail->alpha.size(); ++i)
                    w.push_back(law.tail->alpha(i));
            row["overshootWeights"] = w;
        } catch (const ladderkit::DomainError&) {
            row["creepMass"] = nullptr; // overshoot split needs the general case
            row["overshootWeights"] = json::array();
        }
        rows.push_back(std::move(row));
    }
    if (format == "csv") {
        std::cout << "k,transform,creepMass,overshootWeights\n";
        for (const auto& row : rows) {
            std::cout << fmt(row["k"].get<double>()) << ","
                      << fmt(row["transform"].get<double>()) << ",";
            if (row["creepMass"].is_null())
                std::cout << "";
            else
                std::cout << fmt(row["creepMass"].get<double>());
            std::cout << ",";
            const auto& w = row["overshootWeights"];
            for (std::size_t i = 0; i < w.size(); ++i)
                std::cout << (i ? ";" : "") << fmt(w[i].get<double>());
            std::cout << "\n";
        }
    } else {
        json outputs;
        outputs["rows"] = rows;
        emit(make_report("first-passage", cfg, flags, outputs, json::object()));
    }
    return 0;
}

// --- wh ------------------------------------------------------------------------

int cmd_wh(const Loaded& cfg, const std::string& flags,
           const std::string& format, double a, int points, double maxIm) {
    json rows = json::array();
    for (int j = 1; j <= points; ++j) {
        const double u = maxIm * j / points;
        const Complex s(0.0, u);
        const Complex pr = ladderkit::wh_plus_roots(cfg.model, a, s);
        const Complex pm = ladderkit::wh_plus_matrix(cfg.model, a, s);
        const Complex mn = ladderkit::wh_minus(cfg.model, a, s);
        const Complex k = ladderkit::levy_exponent(cfg.model, s);
        const double identityError = std::abs(pm * mn * (a - k) / a - 1.0);
        json row;
        row["u"] = u;
        row["plusRoots"] = complex_json(pr);
        row["plusMatrix"] = complex_json(pm);
        row["minus"] = complex_json(mn);
        row["routeGap"] = std::abs(pr - pm);
        row["identityError"] = identityError;
        rows.push_back(std::move(row));
    }
    if (format == "csv") {
        std::cout << "u,plusRe,plusIm,minusRe,minusIm,routeGap,identityError\n";
        for (const auto& row : rows)
            std::cout << fmt(row["u"].get<double>()) << ","
                      << fmt(row["plusMatrix"]["re"].get<double>()) << ","
                      << fmt(row["plusMatrix"]["im"].get<double>()) << ","
                      << fmt(row["minus"]["re"].get<double>()) << ","
                      << fmt(row["minus"]["im"].get<double>()) << ","
                      << fmt(row["routeGap"].get<double>()) << ","
                      << fmt(row["identityError"].get<double>()) << "\n";
    } else {
        json outputs;
        outputs["rows"] = rows;
        emit(make_report("wh", cfg, flags, outputs, json::object()));
    }
    return 0;
}

// --- ladder --------------------------------------------------------------------

int cmd_ladder(const Loaded& cfg, const std::string& flags,
               const std::string& format, double a,
               std::optional<double> localTimeC) {
    const PathClass pc = ladderkit::classify_paths(
        ladderkit::thin_defects(cfg.model).minus);
    if (pc == PathClass::MinusIsSubordinator && !localTimeC)
        throw ladderkit::DomainError(
            "usage: the subordinator case requires --local-time-c");

    const auto desc = ladderkit::ladder_height_law(cfg.model, localTimeC);
    json outputs;
    outputs["pathClass"] = path_class_name(desc.pathCase);
    outputs["drift"] = desc.drift;
    outputs["jumpIntensity"] = desc.jumpIntensity;
    outputs["jumpLaw"] = ladderkit::atom_ph_to_json(desc.jumpLaw);

    json grid = json::array();
    for (int j = 1; j <= 10; ++j) {
        const double s = 0.5 * j;
        json row;
        row["s"] = s;
        try {
            row["kappaPlus"] =
                ladderkit::ladder_cumulant_plus(cfg.model, a, Complex(s, 0.0),
                                                localTimeC)
                    .real();
        } catch (const ladderkit::PoleError&) {
            row["kappaPlus"] = nullptr;
        }
        try {
            row["kappaMinus"] =
                ladderkit::ladder_cumulant_minus(cfg.model, a, Complex(s, 0.0))
                    .real();
        } catch (const ladderkit::PoleError&) {
            row["kappaMinus"] = nullptr;
        }
        grid.push_back(std::move(row));
    }
    outputs["cumulantGrid"] = grid;

    if (format == "csv") {
        std::cout << "s,kappaPlus,kappaMinus\n";
        for (const auto& row : grid) {
            std::cout << fmt(row["s"].get<double>()) << ",";
            if (!row["kappaPlus"].is_null())
                std::cout << fmt(row["kappaPlus"].get<double>());
            std::cout << ",";
            if (!row["kappaMinus"].is_null())
                std::cout << fmt(row["kappaMinus"].get<double>());
            std::cout << "\n";
        }
    } else {
        emit(make_report("ladder", cfg, flags, outputs, json::object()));
    }
    return 0;
}

// --- roots ---------------------------------------------------------------------

int cmd_roots(const Loaded& cfg, const std::string& flags,
              const std::string& format, double a) {
    const auto rep = ladderkit::cl_roots(cfg.model, a);
    auto dump_roots = [](const std::vector<Complex>& rs) {
        json arr = json::array();
        for (const Complex& r : rs) arr.push_back(complex_json(r));
        return arr;
    };
    json outputs;
    outputs["level"] = rep.level;
    outputs["positiveRoots"] = dump_roots(rep.positiveRoots);
    outputs["otherRoots"] = dump_roots(rep.otherRoots);
    outputs["spurious"] = dump_roots(rep.spurious);
    if (format == "csv") {
        std::cout << "kind,re,im\n";
        for (const Complex& r : rep.positiveRoots)
            std::cout << "positive," << fmt(r.real()) << "," << fmt(r.imag()) << "\n";
        for (const Complex& r : rep.otherRoots)
            std::cout << "other," << fmt(r.real()) << "," << fmt(r.imag()) << "\n";
        for (const Complex& r : rep.spurious)
            std::cout << "spurious," << fmt(r.real()) << "," << fmt(r.imag()) << "\n";
    } else {
        emit(make_report("roots", cfg, flags, outputs, json::object()));
    }
    return 0;
}

// --- tilt ----------------------------------------------------------------------

int cmd_tilt(const Loaded& cfg, const std::string& flags,
             const std::string& format) {
    const double gamma = ladderkit::positive_kappa_root(cfg.model);
    const PhLevyModel tilted = ladderkit::tilt_model(cfg.model, gamma);
    double gridResidual = 0.0;
    for (int j = 1; j <= 20; ++j) {
        const Complex s(0.0, 0.25 * j);
        const Complex lhs = ladderkit::levy_exponent(tilted, s);
        const Complex rhs =
            ladderkit::levy_exponent(cfg.model, s + Complex(gamma, 0.0));
        gridResidual = std::max(gridResidual, std::abs(lhs - rhs));
    }
    json outputs;
    outputs["gamma"] = gamma;
    outputs["tiltedModel"] = ladderkit::model_to_json(tilted);
    outputs["gridResidual"] = gridResidual;
    if (format == "csv") {
        std::cout << "gamma,gridResidual\n"
                  << fmt(gamma) << "," << fmt(gridResidual) << "\n";
    } else {
        emit(make_report("tilt", cfg, flags, outputs, json::object()));
    }
    return 0;
}

// --- simulate --------------------------------------------------------------------

int cmd_simulate(const Loaded& cfg, const std::string& flags,
                 const std::string& format, const ladderkit::SimConfig& sc) {
    const auto sim = ladderkit::simulate_first_passage(cfg.model, sc);
    json outputs;
    outputs["pCross"] = json{{"value", sim.pCross.value},
                             {"stdError", sim.pCross.stdError},
                             {"n", sim.pCross.n}};
    outputs["creepFraction"] = json{{"value", sim.creepFraction.value},
                                    {"stdError", sim.creepFraction.stdError}};
    json freq = json::array();
    for (Eigen::Index i = 0; i < sim.phaseFreq.size(); ++i)
        freq.push_back(sim.phaseFreq(i));
    outputs["phaseFreq"] = freq;
    double osMean = 0.0;
    for (double v : sim.overshootSamples) osMean += v;
    if (!sim.overshootSamples.empty())
        osMean /= static_cast<double>(sim.overshootSamples.size());
    outputs["overshootMean"] = osMean;
    outputs["overshootCount"] =
        static_cast<std::int64_t>(sim.overshootSamples.size());
    outputs["biasWarning"] = sim.biasWarning;
    json diagnostics;
    diagnostics["paths"] = sc.paths;
    diagnostics["seed"] = sc.seed;
    if (format == "csv") {
        std::cout << "quantity,value,stdError\n"
                  << "pCross," << fmt(sim.pCross.value) << ","
                  << fmt(sim.pCross.stdError) << "\n"
                  << "creepFraction," << fmt(sim.creepFraction.value) << ","
                  << fmt(sim.creepFraction.stdError) << "\n";
    } else {
        emit(make_report("simulate", cfg, flags, outputs, diagnostics));
    }
    return 0;
}

// --- compare -------------------------------------------------------------------

int cmd_compare(const Loaded& cfg, const std::string& flags,
                const std::string& format, const ladderkit::SimConfig& sc,
                double wh4A, double wh4B) {
    struct Row {
        std::string name;
        double analytic, mc, se, z;
    };
    std::vector<Row> rows;
    auto push = [&rows](const std::string& name, double an, double mc, double se) {
        const double z = se > 0.0 ? (mc - an) / se : (mc == an ? 0.0 : 1e9);
        rows.push_back({name, an, mc, se, z});
    };

    const auto sim = ladderkit::simulate_first_passage(cfg.model, sc);
    push("pCross", ladderkit::first_passage_lt(cfg.model, sc.qRate, sc.level),
         sim.pCross.value, sim.pCross.stdError);

    const auto sup = ladderkit::simulate_sup(cfg.model, sc);
    for (double mult : {0.5, 1.5}) {
        const double x = mult * sc.level;
        double cnt = 0.0;
        for (double m : sup)
            if (m > x) cnt += 1.0;
        const double n = static_cast<double>(sup.size());
        const double p = cnt / n;
        const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / n);
        std::ostringstream name;
        name << "supTail@" << fmt(x);
        push(name.str(), ladderkit::first_passage_lt(cfg.model, sc.qRate, x), p,
             se);
    }

    try {
        const auto os = ladderkit::overshoot_law(cfg.model, sc.qRate, sc.level);
        push("creepFraction", os.atom0, sim.creepFraction.value,
             sim.creepFraction.stdError);
    } catch (const ladderkit::DomainError&) {
        // subordinator case: no creep split available
    }

    const auto wh4 = ladderkit::simulate_wh4(cfg.model, sc, wh4A, wh4B);
    push("wh4", wh4_analytic(cfg.model, sc.qRate, wh4A, wh4B), wh4.value,
         wh4.stdError);

    bool zFail = false;
    json jrows = json::array();
    for (const Row& r : rows) {
        if (std::abs(r.z) > 4.0) zFail = true;
        jrows.push_back(json{{"quantity", r.name},
                             {"analytic", r.analytic},
                             {"mc", r.mc},
                             {"stdError", r.se},
                             {"z", r.z}});
    }
    if (format == "csv") {
        std::cout << "quantity,analytic,mc,stdError,z\n";
        for (const Row& r : rows)
            std::cout << r.name << "," << fmt(r.analytic) << "," << fmt(r.mc)
                      << "," << fmt(r.se) << "," << fmt(r.z) << "\n";
    } else {
        json outputs;
        outputs["rows"] = jrows;
        outputs["zFail"] = zFail;
        json diagnostics;
        diagnostics["paths"] = sc.paths;
        diagnostics["seed"] = sc.seed;
        emit(make_report("compare", cfg, flags, outputs, diagnostics));
    }
    return zFail ? 3 : 0;
}

std::string flags_echo(int argc, char** argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) s += " ";
        s += argv[i];
    }
    return s;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ladderkit: ladder processes and Wiener-Hopf factors for "
                 "Levy processes with phase-type positive jumps"};
    app.require_subcommand(1);
    app.fallthrough(); // accept global options after the subcommand too
    std::string format = "json";
    app.add_option("--format", format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    std::string configPath;
    double a = 1.0, q = 1.0, tol = 1e-12, maxIm = 5.0;
    int maxIter = 10000, points = 10;
    std::string levelsCsv;
    double localTimeCValue = 0.0;
    double wh4A = 0.8, wh4B = 0.5;
    ladderkit::SimConfig sc;
    bool noBridge = false;

    auto add_config = [&configPath](CLI::App* cmd) {
        cmd->add_option("config", configPath, "model config JSON path")
            ->required();
    };

    CLI::App* cValidate = app.add_subcommand("validate", "check a model config");
    add_config(cValidate);

    CLI::App* cSolve = app.add_subcommand("solve", "solve the ladder system");
    add_config(cSolve);
    cSolve->add_option("--a", a, "killing rate")->required();
    cSolve->add_option("--tol", tol, "fixed-point tolerance");
    cSolve->add_option("--max-iter", maxIter, "iteration cap");

    CLI::App* cFp = app.add_subcommand("first-passage",
                                       "first-passage transforms at levels");
    add_config(cFp);
    cFp->add_option("--q", q, "horizon rate")->required();
    cFp->add_option("--levels", levelsCsv, "comma-separated levels")->required();

    CLI::App* cWh = app.add_subcommand("wh", "Wiener-Hopf factors on the "
                                             "imaginary axis");
    add_config(cWh);
    cWh->add_option("--a", a, "killing rate")->required();
    cWh->add_option("--points", points, "grid size");
    cWh->add_option("--max-im", maxIm, "largest imaginary part");

    CLI::App* cLadder = app.add_subcommand("ladder", "ladder height law and "
                                                     "cumulants");
    add_config(cLadder);
    cLadder->add_option("--a", a, "killing rate")->required();
    CLI::Option* ltcOpt =
        cLadder->add_option("--local-time-c", localTimeCValue,
                            "local-time normalisation (subordinator case)");

    CLI::App* cRoots = app.add_subcommand("roots", "Cramer-Lundberg root report");
    add_config(cRoots);
    cRoots->add_option("--a", a, "level")->required();

    CLI::App* cTilt = app.add_subcommand("tilt", "positive kappa root and "
                                                 "tilted model");
    add_config(cTilt);

    CLI::App* cSim = app.add_subcommand("simulate", "Monte Carlo first passage");
    add_config(cSim);
    cSim->add_option("--q", sc.qRate, "horizon rate")->required();
    cSim->add_option("--level", sc.level, "first-passage level")->required();
    cSim->add_option("--paths", sc.paths, "path count");
    cSim->add_option("--seed", sc.seed, "rng seed");
    cSim->add_flag("--no-bridge", noBridge, "grid stepping instead of bridges");

    CLI::App* cCompare = app.add_subcommand("compare",
                                            "analytic versus Monte Carlo");
    add_config(cCompare);
    cCompare->add_option("--q", sc.qRate, "horizon rate")->required();
    cCompare->add_option("--level", sc.level, "first-passage level")->required();
    cCompare->add_option("--paths", sc.paths, "path count");
    cCompare->add_option("--seed", sc.seed, "rng seed");
    cCompare->add_option("--wh4-a", wh4A, "time argument of the wh4 transform");
    cCompare->add_option("--wh4-b", wh4B, "space argument of the wh4 transform");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const std::string flags = flags_echo(argc, argv);
    try {
        const Loaded cfg = load_config(configPath);
        sc.bridgeSampling = !noBridge;
        if (cValidate->parsed()) return cmd_validate(cfg, flags, format);
        if (cSolve->parsed())
            return cmd_solve(cfg, flags, format, a, tol, maxIter);
        if (cFp->parsed())
            return cmd_first_passage(cfg, flags, format, q,
                                     parse_levels(levelsCsv));
        if (cWh->parsed()) return cmd_wh(cfg, flags, format, a, points, maxIm);
        if (cLadder->parsed()) {
            std::optional<double> ltc;
            if (ltcOpt->count() > 0) ltc = localTimeCValue;
            return cmd_ladder(cfg, flags, format, a, ltc);
        }
        if (cRoots->parsed()) return cmd_roots(cfg, flags, format, a);
        if (cTilt->parsed()) return cmd_tilt(cfg, flags, format);
        if (cSim->parsed()) return cmd_simulate(cfg, flags, format, sc);
        if (cCompare->parsed())
            return cmd_compare(cfg, flags, format, sc, wh4A, wh4B);
        std::cerr << "no subcommand selected\n";
        return 1;
    } catch (const ladderkit::ConvergenceError& e) {
        json err;
        err["error"] = e.what();
        err["lastStep"] = e.lastStep;
        std::cerr << err.dump(2) << "\n";
        return 2;
    } catch (const ladderkit::InternalError& e) {
        std::cerr << "internal check failed: " << e.what() << "\n";
        return 2;
    } catch (const ladderkit::OverflowError& e) {
        std::cerr << "overflow: " << e.what() << "\n";
        return 2;
    } catch (const ladderkit::SingularityError& e) {
        std::cerr << "singularity: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
