// Command-line front end: mechanism evaluation, ratio sweeps, truthfulness
// audits, LP bound certification, market reductions and summary tables.
//
// Exit codes: 0 success, 1 usage/input error, 2 verification failure,
// 3 enumeration-cap refusal.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bitrade/audit.hpp"
#include "bitrade/core.hpp"
#include "bitrade/families.hpp"
#include "bitrade/json_io.hpp"
#include "bitrade/lp.hpp"
#include "bitrade/mechanisms.hpp"
#include "bitrade/rational.hpp"
#include "bitrade/reductions.hpp"
#include "bitrade/sampling.hpp"

namespace {

using namespace bitrade;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerificationFailure = 2;
constexpr int kExitEnumerationCap = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw UsageError("cannot parse '" + path + "': " + e.what());
    }
    return j;
}

std::vector<Rat> parse_rational_list(const std::string& text) {
    std::vector<Rat> out;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ',')) out.push_back(parse_rational(piece));
    if (out.empty()) throw UsageError("empty rational list");
    return out;
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

// ---- subcommand options ----

struct EvalOptions {
    std::string mechanism;
    std::string instance_path;
};

struct RatioOptions {
    std::string mechanism;
    int M = 2;
    std::string instances_path;
    std::string grid;
    long trials = 10000;
    std::uint64_t seed = 1;
    bool submodular = false;
    std::uint64_t cap = kDefaultAuditCap;
};

struct AuditOptions {
    std::string mechanism;
    int M = 2;
    std::string grid = "-1,0,1/2,1";
    bool submodular = false;
    std::uint64_t cap = kDefaultAuditCap;
};

struct VerifyOptions {
    std::string family;
    int M = 3;
    std::string eps = "1/1000";
    std::string L = "1000000";
    std::string mode = "exact";
    std::string chain_path;
    bool csv = false;
    bool with_assignment = false;
};

struct ReduceOptions {
    std::string type;
    std::string scenario_path;
};

struct SweepOptions {
    int max_M = 5;
    long trials = 1000;
    std::uint64_t seed = 1;
    std::string format = "table";
    std::string eps = "1/1000";
    std::string L = "1000000";
};

struct ChainOptions {
    std::string family = "general";
    int M = 3;
    std::string eps = "1/1000";
    std::string L = "1000000";
};

int run_eval(const EvalOptions& opt) {
    const Instance inst = instance_from_json(load_json(opt.instance_path));
    const Mechanism mech = parse_mechanism_spec(opt.mechanism, inst.options());
    const OutcomeDistribution r = mech(inst);
    const GainReport g = expected_gains(r, inst);
    Json j{{"mechanism", mech.name}, {"instance", to_json(inst)}, {"distribution", to_json(r)},
           {"gains", to_json(g)}};
    emit(j);
    return kExitOk;
}

int run_ratio(const RatioOptions& opt) {
    const Mechanism mech = parse_mechanism_spec(opt.mechanism, opt.M);
    RatioSweeper sweeper(mech);
    std::string source;
    std::uint64_t total = 0;
    if (!opt.instances_path.empty()) {
        const Json arr = load_json(opt.instances_path);
        if (!arr.is_array()) throw UsageError("--instances file must hold a JSON array");
        for (const auto& item : arr) sweeper.observe(instance_from_json(item));
        total = arr.size();
        source = "file";
    } else if (!opt.grid.empty()) {
        const auto family = opt.submodular
                                ? submodular_grid_family(parse_rational_list(opt.grid), opt.M, opt.cap)
                                : grid_family(parse_rational_list(opt.grid), opt.M, opt.cap);
        const std::uint64_t count = static_cast<std::uint64_t>(family.size()) * family.size();
        if (count > opt.cap) throw EnumerationCapError(count, opt.cap);
        for (const auto& b : family)
            for (const auto& s : family) sweeper.observe(Instance(b, s));
        total = count;
        source = "grid";
    } else {
        Sampler rng(opt.seed);
        for (long t = 0; t < opt.trials; ++t)
            sweeper.observe(opt.submodular ? random_submodular_instance(rng, opt.M)
                                           : random_instance(rng, opt.M));
        total = static_cast<std::uint64_t>(opt.trials);
        source = "random";
    }
    const RatioSweep& sweep = sweeper.result();
    Json j{{"mechanism", mech.name},
           {"source", source},
           {"instances", total},
           {"evaluated", sweep.evaluated},
           {"skipped_zero_opt", sweep.skipped_zero_opt},
           {"negative_gain_count", sweep.negative_gain_count},
           {"min_ratio", sweep.min_ratio ? Json(format_rational(*sweep.min_ratio)) : Json(nullptr)},
           {"witness", sweep.witness ? to_json(*sweep.witness) : Json(nullptr)}};
    emit(j);
    return sweep.negative_gain_count == 0 ? kExitOk : kExitVerificationFailure;
}

int run_audit(const AuditOptions& opt) {
    const Mechanism mech = parse_mechanism_spec(opt.mechanism, opt.M);
    const AuditVerdict verdict =
        audit_dsic(mech, parse_rational_list(opt.grid), opt.M, opt.submodular, opt.cap);
    Json j{{"mechanism", mech.name},
           {"M", opt.M},
           {"grid", opt.grid},
           {"submodular_reports_only", opt.submodular}};
    j.update(to_json(verdict));
    emit(j);
    return verdict.dsic_on_grid ? kExitOk : kExitVerificationFailure;
}

int run_verify(const VerifyOptions& opt) {
    const SolveMode mode = [&] {
        if (opt.mode == "exact") return SolveMode::exact_rational;
        if (opt.mode == "float") return SolveMode::float_with_tolerance;
        throw UsageError("--mode must be exact or float");
    }();

    BoundReport report;
    if (!opt.chain_path.empty()) {
        const DeviationChain chain = chain_from_json(load_json(opt.chain_path));
        report = solve_lp(build_lp(chain), mode);
    } else {
        const ChainFamily family = [&] {
            if (opt.family == "general") return ChainFamily::general;
            if (opt.family == "submodular") return ChainFamily::submodular;
            throw UsageError("--family must be general or submodular");
        }();
        report = verify_upper_bound(opt.M, parse_rational(opt.eps), parse_rational(opt.L),
                                    family, mode);
    }

    if (opt.csv) {
        std::cout << to_csv_row(report) << "\n";
    } else {
        std::cout << (report.pass ? "PASS" : "FAIL") << ": alpha* = "
                  << format_rational(report.alpha_star) << " vs bound "
                  << format_rational(report.theoretical_bound) << " (+ slack "
                  << format_rational(report.slack_budget) << ")\n";
        emit(to_json(report, opt.with_assignment));
    }
    return report.pass ? kExitOk : kExitVerificationFailure;
}

int run_reduce(const ReduceOptions& opt) {
    const Json j = load_json(opt.scenario_path);
    Instance inst = [&] {
        if (opt.type == "multiunit") return reduce_multiunit(multiunit_from_json(j));
        if (opt.type == "unitdemand") return reduce_unitdemand(unitdemand_from_json(j));
        throw UsageError("--type must be multiunit or unitdemand");
    }();
    emit(to_json(inst));
    return kExitOk;
}

int run_sweep(const SweepOptions& opt) {
    if (opt.max_M < 1) throw UsageError("--max-M must be >= 1");
    const Rat eps = parse_rational(opt.eps);
    const Rat L = parse_rational(opt.L);
    Json rows = Json::array();
    bool guarantees_hold = true;
    for (int M = 1; M <= opt.max_M; ++M) {
        Sampler rng(opt.seed + static_cast<std::uint64_t>(M));
        std::vector<Instance> generals, submodulars;
        generals.reserve(static_cast<std::size_t>(opt.trials));
        submodulars.reserve(static_cast<std::size_t>(opt.trials));
        for (long t = 0; t < opt.trials; ++t) {
            generals.push_back(random_instance(rng, M));
            submodulars.push_back(random_submodular_instance(rng, M));
        }
        const RatioSweep ur = competitive_ratio_over(uniform_random(M), generals);
        const RatioSweep dr = competitive_ratio_over(decreasing_random(M), submodulars);
        const BoundReport general = verify_upper_bound(M, eps, L, ChainFamily::general);
        const BoundReport submodular = verify_upper_bound(M, eps, L, ChainFamily::submodular);
        if (ur.min_ratio && *ur.min_ratio < Rat(1, M)) guarantees_hold = false;
        if (dr.min_ratio && *dr.min_ratio < Rat(1) / harmonic(M)) guarantees_hold = false;
        if (!general.pass || !submodular.pass) guarantees_hold = false;
        rows.push_back(Json{
            {"M", M},
            {"inv_M", format_rational(Rat(1, M))},
            {"inv_H_M", format_rational(Rat(1) / harmonic(M))},
            {"ur_worst_ratio", ur.min_ratio ? Json(format_rational(*ur.min_ratio)) : Json(nullptr)},
            {"dr_worst_ratio", dr.min_ratio ? Json(format_rational(*dr.min_ratio)) : Json(nullptr)},
            {"alpha_general", format_rational(general.alpha_star)},
            {"alpha_submodular", format_rational(submodular.alpha_star)}});
    }

    if (opt.format == "json") {
        emit(Json{{"seed", opt.seed}, {"trials", opt.trials}, {"rows", rows}});
    } else if (opt.format == "csv") {
        std::cout << "M,inv_M,inv_H_M,ur_worst,dr_worst,alpha_general,alpha_submodular\n";
        for (const auto& row : rows) {
            std::cout << row["M"] << "," << row["inv_M"].get<std::string>() << ","
                      << row["inv_H_M"].get<std::string>() << ","
                      << (row["ur_worst_ratio"].is_null() ? "-" : row["ur_worst_ratio"].get<std::string>())
                      << ","
                      << (row["dr_worst_ratio"].is_null() ? "-" : row["dr_worst_ratio"].get<std::string>())
                      << "," << row["alpha_general"].get<std::string>() << ","
                      << row["alpha_submodular"].get<std::string>() << "\n";
        }
    } else {
        std::cout << "  M      1/M    1/H_M   UR worst   DR worst   alpha(general)   alpha(submodular)\n";
        for (const auto& row : rows) {
            std::cout << "  " << row["M"] << "   " << row["inv_M"].get<std::string>() << "   "
                      << row["inv_H_M"].get<std::string>() << "   "
                      << (row["ur_worst_ratio"].is_null() ? "-" : row["ur_worst_ratio"].get<std::string>())
                      << "   "
                      << (row["dr_worst_ratio"].is_null() ? "-" : row["dr_worst_ratio"].get<std::string>())
                      << "   " << row["alpha_general"].get<std::string>() << "   "
                      << row["alpha_submodular"].get<std::string>() << "\n";
        }
    }
    return guarantees_hold ? kExitOk : kExitVerificationFailure;
}

int run_chain(const ChainOptions& opt) {
    const Rat eps = parse_rational(opt.eps);
    const Rat L = parse_rational(opt.L);
    const DeviationChain chain = opt.family == "general"    ? general_chain(opt.M, eps, L)
                                 : opt.family == "submodular" ? submodular_chain(opt.M, eps, L)
                                 : throw UsageError("--family must be general or submodular");
    emit(to_json(chain));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fixed-price bilateral cooperation: mechanisms, audits and bound certificates"};
    app.require_subcommand(1);

    EvalOptions eval_opt;
    auto* eval = app.add_subcommand("eval", "evaluate a mechanism on an instance file");
    eval->add_option("--mechanism", eval_opt.mechanism, "ur | dr | welfare-argmax | dist:<p0,..,pM>[:veto]")
        ->required();
    eval->add_option("--instance", eval_opt.instance_path, "instance JSON file")->required();

    RatioOptions ratio_opt;
    auto* ratio = app.add_subcommand("ratio", "worst-case ratio sweep (random, grid, or file)");
    ratio->add_option("--mechanism", ratio_opt.mechanism)->required();
    ratio->add_option("--M", ratio_opt.M)->required();
    ratio->add_option("--instances", ratio_opt.instances_path, "JSON array of instances");
    ratio->add_option("--grid", ratio_opt.grid, "comma-separated utility values for exhaustive sweep");
    ratio->add_option("--trials", ratio_opt.trials);
    ratio->add_option("--seed", ratio_opt.seed);
    ratio->add_flag("--submodular", ratio_opt.submodular, "sample/enumerate submodular vectors only");
    ratio->add_option("--cap", ratio_opt.cap, "enumeration cap");

    AuditOptions audit_opt;
    auto* audit = app.add_subcommand("audit", "exhaustive truthfulness audit on a report grid");
    audit->add_option("--mechanism", audit_opt.mechanism)->required();
    audit->add_option("--M", audit_opt.M)->required();
    audit->add_option("--grid", audit_opt.grid, "comma-separated utility values");
    audit->add_flag("--submodular", audit_opt.submodular, "restrict reports to submodular vectors");
    audit->add_option("--cap", audit_opt.cap, "enumeration cap");

    VerifyOptions verify_opt;
    auto* verify = app.add_subcommand("verify-bound", "LP certificate for the worst-case ratio bound");
    verify->add_option("--family", verify_opt.family, "general | submodular");
    verify->add_option("--M", verify_opt.M);
    verify->add_option("--eps", verify_opt.eps, "chain parameter, rational in (0,1)");
    verify->add_option("--L", verify_opt.L, "scaling parameter, rational >= 1/eps");
    verify->add_option("--mode", verify_opt.mode, "exact | float");
    verify->add_option("--chain", verify_opt.chain_path, "solve a chain exported by 'chain' instead");
    verify->add_flag("--csv", verify_opt.csv, "emit a CSV row instead of JSON");
    verify->add_flag("--assignment", verify_opt.with_assignment, "include the optimal assignment");

    ReduceOptions reduce_opt;
    auto* reduce = app.add_subcommand("reduce", "reduce a market scenario to an instance");
    reduce->add_option("--type", reduce_opt.type, "multiunit | unitdemand")->required();
    reduce->add_option("--scenario", reduce_opt.scenario_path, "scenario JSON file")->required();

    SweepOptions sweep_opt;
    auto* sweep = app.add_subcommand("sweep", "guarantee table across M");
    sweep->add_option("--max-M", sweep_opt.max_M);
    sweep->add_option("--trials", sweep_opt.trials);
    sweep->add_option("--seed", sweep_opt.seed);
    sweep->add_option("--format", sweep_opt.format, "table | csv | json");
    sweep->add_option("--eps", sweep_opt.eps);
    sweep->add_option("--L", sweep_opt.L);

    ChainOptions chain_opt;
    auto* chain = app.add_subcommand("chain", "export a deviation chain as JSON");
    chain->add_option("--family", chain_opt.family, "general | submodular");
    chain->add_option("--M", chain_opt.M);
    chain->add_option("--eps", chain_opt.eps);
    chain->add_option("--L", chain_opt.L);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*eval) return run_eval(eval_opt);
        if (*ratio) return run_ratio(ratio_opt);
        if (*audit) return run_audit(audit_opt);
        if (*verify) return run_verify(verify_opt);
        if (*reduce) return run_reduce(reduce_opt);
        if (*sweep) return run_sweep(sweep_opt);
        if (*chain) return run_chain(chain_opt);
    } catch (const EnumerationCapError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kExitEnumerationCap;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
