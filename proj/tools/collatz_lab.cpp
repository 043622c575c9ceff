// collatz-lab: exact-arithmetic reports on residue densities of the 3n+1
// map, the two-state chain model, orbit statistics, and supernatural
// fixed points. All results are exact rationals unless a column is
// explicitly a finite-window (empirical) count.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "collatzlab/mixing.hpp"
#include "collatzlab/report.hpp"

namespace cl = collatzlab;
using cl::BigNat;
using cl::Rat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInternal = 4;

struct Budgets {
    cl::TrajectoryBudget trajectory;
    unsigned flow_steps = cl::kDefaultStepBudget;
};

// COLLATZ_LAB_BUDGET: either a bare integer (trajectory step budget) or
// comma-separated key=value pairs with keys steps, bits, flow.
Budgets budgets_from_env() {
    Budgets b;
    const char* raw = std::getenv("COLLATZ_LAB_BUDGET");
    if (!raw || !*raw) return b;
    std::string text(raw);
    if (text.find('=') == std::string::npos) {
        b.trajectory.max_steps = std::stoull(text);
        return b;
    }
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("COLLATZ_LAB_BUDGET", "expected key=value: " + item);
        std::string key = item.substr(0, eq);
        std::uint64_t value = std::stoull(item.substr(eq + 1));
        if (key == "steps") b.trajectory.max_steps = value;
        else if (key == "bits") b.trajectory.max_bits = value;
        else if (key == "flow") b.flow_steps = static_cast<unsigned>(value);
        else throw CLI::ValidationError("COLLATZ_LAB_BUDGET", "unknown key: " + key);
    }
    return b;
}

struct Output {
    std::string format = "tsv";  // tsv | json
    std::string out_path;

    void emit(const std::string& tsv, const cl::ReportEnvelope& envelope) const {
        std::string text = format == "json" ? cl::to_json(envelope).dump(2) + "\n" : tsv;
        if (out_path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file " + out_path);
        f << text;
    }
};

void add_output_flags(CLI::App* cmd, Output& out) {
    cmd->add_option("--format", out.format, "output format")
        ->check(CLI::IsMember({"tsv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", out.out_path, "write the report to a file");
}

std::string tsv_rat(const Rat& r) { return r.str(); }

// ---------------------------------------------------------------- densities

int run_densities(const BigNat& mod, unsigned steps, const Budgets& budgets,
                  const Output& out) {
    cl::ReportEnvelope env;
    env.command = "densities";
    env.parameters = {{"mod", mod.str()}, {"steps", steps}};
    env.provenance = {"exact-branch-engine"};

    std::ostringstream tsv;
    tsv << "step\tresidue\tdensity\n";
    cl::json table = cl::json::array();
    cl::BranchSystem system = cl::BranchSystem::initial();
    for (unsigned n = 0; n <= steps; ++n) {
        for (const auto& [residue, mass] : cl::residue_distribution(system, mod)) {
            tsv << n << "\t" << residue << "\t" << tsv_rat(mass) << "\n";
            table.push_back({{"step", n}, {"residue", residue.str()},
                             {"density", cl::to_json(mass)}});
        }
        if (n < steps) system = system.step(budgets.flow_steps);
    }
    env.results = {{"table", std::move(table)}};
    out.emit(tsv.str(), env);
    return kExitOk;
}

// -------------------------------------------------------------------- model

int run_model(const std::string& chain_name, unsigned steps, const Output& out) {
    cl::Chain2 chain = chain_name == "parity" ? cl::parity_chain() : cl::mod3_chain();
    cl::ReportEnvelope env;
    env.command = "model";
    env.parameters = {{"chain", chain_name}, {"steps", steps}};
    env.provenance = {"closed-form-model"};

    std::ostringstream tsv;
    tsv << "step\tclosed_m0\tclosed_m1\tpower_m0\tpower_m1\tequal\n";
    cl::json table = cl::json::array();
    for (unsigned n = 0; n <= steps; ++n) {
        cl::DistVec2 power = chain.init() * cl::power_iterated(chain, n);
        bool closed_defined = chain_name == "parity" || n >= 1;
        if (closed_defined) {
            cl::DistVec2 closed = chain_name == "parity" ? cl::parity_closed_form(n)
                                                         : cl::mod3_closed_form(n);
            bool equal = closed == power;
            tsv << n << "\t" << tsv_rat(closed.m0) << "\t" << tsv_rat(closed.m1) << "\t"
                << tsv_rat(power.m0) << "\t" << tsv_rat(power.m1) << "\t"
                << (equal ? "true" : "false") << "\n";
            table.push_back({{"step", n}, {"closed", cl::to_json(closed)},
                             {"power", cl::to_json(power)}, {"equal", equal}});
        } else {
            tsv << n << "\t-\t-\t" << tsv_rat(power.m0) << "\t" << tsv_rat(power.m1)
                << "\t-\n";
            table.push_back({{"step", n}, {"closed", nullptr},
                             {"power", cl::to_json(power)}, {"equal", nullptr}});
        }
    }
    cl::DistVec2 limit = cl::limit_distribution(chain);
    tsv << "limit\t" << tsv_rat(limit.m0) << "\t" << tsv_rat(limit.m1) << "\t-\t-\t-\n";
    env.results = {{"table", std::move(table)}, {"limit", cl::to_json(limit)}};
    out.emit(tsv.str(), env);
    return kExitOk;
}

// ------------------------------------------------------------------ compare

int run_compare(unsigned mod, unsigned steps, std::uint64_t max_k, const Budgets& budgets,
                const Output& out) {
    cl::Chain2 chain = mod == 2 ? cl::parity_chain() : cl::mod3_chain();
    const BigNat tracked = mod == 2 ? BigNat(0) : BigNat(1);  // even mass / 1-mod-3 mass
    const BigNat modulus(mod);

    cl::ReportEnvelope env;
    env.command = "compare";
    env.parameters = {{"mod", mod}, {"steps", steps}, {"max_k", max_k}};
    env.provenance = {"closed-form-model", "exact-branch-engine", "finite-window-count"};

    std::ostringstream tsv;
    tsv << "step\tmodel\texact\tempirical\tdivergence\n";
    cl::json table = cl::json::array();

    // advance all of [1, max_k] stepwise for the empirical column
    std::vector<BigNat> values;
    values.reserve(max_k);
    for (std::uint64_t k = 1; k <= max_k; ++k) values.emplace_back(k);

    cl::BranchSystem system = cl::BranchSystem::initial();
    for (unsigned n = 0; n <= steps; ++n) {
        Rat model = cl::distribution_after(chain, n).m0;
        Rat exact = cl::residue_distribution(system, modulus).at(tracked);
        std::uint64_t hits = 0;
        for (const BigNat& v : values)
            if (v % modulus == tracked) ++hits;
        Rat empirical{BigNat(hits), BigNat(max_k)};
        Rat divergence = model - exact;
        tsv << n << "\t" << tsv_rat(model) << "\t" << tsv_rat(exact) << "\t"
            << tsv_rat(empirical) << "\t" << tsv_rat(divergence) << "\n";
        table.push_back({{"step", n}, {"model", cl::to_json(model)},
                         {"exact", cl::to_json(exact)},
                         {"empirical", cl::to_json(empirical)},
                         {"divergence", cl::to_json(divergence)}});
        if (n < steps) {
            system = system.step(budgets.flow_steps);
            for (BigNat& v : values) v = cl::collatz_step_value(v);
        }
    }
    env.results = {{"table", std::move(table)}};
    out.emit(tsv.str(), env);
    return kExitOk;
}

// ------------------------------------------------------------------- mixing

int run_mixing(std::uint64_t max_k, const Budgets& budgets, const Output& out) {
    cl::ReportEnvelope env;
    env.command = "mixing";
    env.parameters = {{"max_k", max_k}};
    env.provenance = {"formal-derivation", "orbit-cycle-analysis"};
    env.assumptions = {cl::kConjectureAssumption, cl::kMixingAssumption};

    std::vector<cl::RepeatedIntegralReport> integrals = {
        cl::repeated_integral_even(cl::Inner::StartPoint, false),
        cl::repeated_integral_even(cl::Inner::StepIndex, true),
        cl::repeated_integral_mod3(cl::Inner::StartPoint, false),
        cl::repeated_integral_mod3(cl::Inner::StepIndex, true),
    };
    cl::MixingReport report = cl::contradiction_report(max_k, budgets.trajectory);

    std::ostringstream tsv;
    tsv << "repeated_integrals\n";
    tsv << "function\tinner\tvalue\tassumptions\n";
    cl::json jintegrals = cl::json::array();
    for (const auto& r : integrals) {
        tsv << r.function_tag << "\t"
            << (r.inner == cl::Inner::StepIndex ? "step_index" : "start_point") << "\t"
            << tsv_rat(r.value) << "\t";
        for (std::size_t i = 0; i < r.assumptions.size(); ++i)
            tsv << (i ? ";" : "") << r.assumptions[i];
        tsv << "\n";
        jintegrals.push_back(cl::to_json(r));
    }
    tsv << "\nsymbolic_contradiction\n";
    tsv << "forced_uniform_value\t" << tsv_rat(report.forced_uniform_value) << "\n";
    tsv << "mass_one_and_four\t" << tsv_rat(report.mass_one_and_four) << "\n";
    tsv << "contradiction_gap\t" << tsv_rat(report.contradiction_gap.first) << "\t"
        << tsv_rat(report.contradiction_gap.second) << "\n";
    tsv << "\nempirical_nu\tsample_size=" << report.empirical.sample_size
        << "\texcluded=" << report.empirical.excluded << "\n";
    tsv << "index_class\tnu(4)\tnu(2)\tnu(1)\n";
    for (unsigned i = 0; i < 3; ++i) {
        tsv << i;
        for (std::uint64_t v : {std::uint64_t{4}, std::uint64_t{2}, std::uint64_t{1}})
            tsv << "\t" << (report.empirical.included() ? tsv_rat(report.empirical.nu(i, v)) : "-");
        tsv << "\n";
    }
    tsv << "rotation_relation_holds\t" << (report.rotation_relation_holds ? "true" : "false")
        << "\n";
    tsv << "conclusion\t" << report.conclusion << "\n";

    env.results = {{"repeated_integrals", std::move(jintegrals)},
                   {"mixing", cl::to_json(report)}};
    out.emit(tsv.str(), env);
    return kExitOk;
}

// --------------------------------------------------------------- trajectory

int run_trajectory(const std::vector<std::string>& starts, const Budgets& budgets,
                   const Output& out) {
    cl::ReportEnvelope env;
    env.command = "trajectory";
    env.parameters = {{"starts", starts}};
    env.provenance = {"orbit-cycle-analysis"};

    std::ostringstream tsv;
    tsv << "start\tsteps_to_1\tphase_limit_0\tphase_limit_1\tphase_limit_2\t"
           "even_frequency_num\teven_frequency_den\n";
    cl::json table = cl::json::array();
    for (const std::string& text : starts) {
        BigNat start(text);
        cl::Orbit orbit(start, budgets.trajectory);
        auto steps = orbit.first_index_of(BigNat(1));
        std::array<BigNat, 3> limits = {cl::detail::phase_limit_from(orbit, 0),
                                        cl::detail::phase_limit_from(orbit, 1),
                                        cl::detail::phase_limit_from(orbit, 2)};
        Rat even = cl::frequency_over_cycle(orbit.cycle().block, cl::ResiduePredicate::even());
        tsv << start << "\t" << (steps ? std::to_string(*steps) : std::string("unreached"))
            << "\t" << limits[0] << "\t" << limits[1] << "\t" << limits[2] << "\t"
            << even.num().str() << "\t" << even.den().str() << "\n";
        cl::json row = {{"start", start.str()},
                        {"steps_to_1", steps ? cl::json(*steps) : cl::json(nullptr)},
                        {"phase_limits", {limits[0].str(), limits[1].str(), limits[2].str()}},
                        {"even_frequency", cl::to_json(even)}};
        table.push_back(std::move(row));
    }
    env.results = {{"table", std::move(table)}};
    out.emit(tsv.str(), env);
    return kExitOk;
}

// ------------------------------------------------------------- supernatural

int run_supernatural_fixed_point(const std::string& literal, std::uint64_t steps,
                                 const Output& out) {
    cl::Supernatural n = cl::Supernatural::parse(literal);
    cl::FixedPointCheck check = cl::fixed_point_check(n, steps);
    cl::ReportEnvelope env;
    env.command = "supernatural.fixed-point";
    env.parameters = {{"n", literal}, {"steps", steps}};
    env.provenance = {"formal-derivation"};
    env.results = cl::to_json(check);
    std::ostringstream tsv;
    tsv << "witness\t" << check.witness.str() << "\n"
        << "steps_checked\t" << check.steps_checked << "\n"
        << "stationary\t" << (check.stationary ? "true" : "false") << "\n"
        << "reaches_one\t" << (check.reaches_one ? "true" : "false") << "\n"
        << "verdict\t"
        << (check.stationary && !check.reaches_one
                ? "stationary fixed point; the orbit never reaches 1"
                : "not stationary")
        << "\n";
    out.emit(tsv.str(), env);
    return kExitOk;
}

int run_supernatural_absorption(const Output& out) {
    cl::AbsorptionCheck check = cl::absorption_check();
    cl::ReportEnvelope env;
    env.command = "supernatural.absorption";
    env.provenance = {"formal-derivation"};
    env.results = cl::to_json(check);
    std::ostringstream tsv;
    tsv << "two_times_two_inf_absorbed\t" << (check.two_times_two_inf_absorbed ? "true" : "false")
        << "\n"
        << "three_times_two_inf_absorbed\t"
        << (check.three_times_two_inf_absorbed ? "true" : "false") << "\n"
        << "three_exponent_is_one\t" << (check.three_exponent_is_one ? "true" : "false") << "\n"
        << "conclusion\t" << check.conclusion << "\n";
    out.emit(tsv.str(), env);
    return kExitOk;
}

int run_supernatural_oplus(const std::string& a, const std::string& b, const Output& out) {
    cl::ReportEnvelope env;
    env.command = "supernatural.oplus";
    env.parameters = {{"a", a}, {"b", b}};
    env.provenance = {"formal-derivation"};
    std::ostringstream tsv;
    try {
        cl::Supernatural sum = cl::oplus(cl::Supernatural::parse(a), cl::Supernatural::parse(b));
        env.results = {{"defined", true}, {"sum", cl::to_json(sum)}};
        tsv << "defined\ttrue\nsum\t" << sum.str() << "\n";
    } catch (const cl::PlusUndefined&) {
        env.results = {{"defined", false}, {"sum", nullptr}};
        tsv << "defined\tfalse\nsum\tundefined (outside the injection's image)\n";
    }
    out.emit(tsv.str(), env);
    return kExitOk;
}

int run_supernatural_step(const std::string& literal, const Output& out) {
    cl::Supernatural n = cl::Supernatural::parse(literal);
    cl::ReportEnvelope env;
    env.command = "supernatural.step";
    env.parameters = {{"n", literal}};
    env.provenance = {"formal-derivation"};
    std::ostringstream tsv;
    try {
        cl::Supernatural next = cl::collatz_step(n);
        env.results = {{"defined", true}, {"next", cl::to_json(next)}};
        tsv << "defined\ttrue\nnext\t" << next.str() << "\n";
    } catch (const cl::PlusUndefined&) {
        env.results = {{"defined", false}, {"next", nullptr}};
        tsv << "defined\tfalse\nnext\tundefined (outside the injection's image)\n";
    }
    out.emit(tsv.str(), env);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact-arithmetic laboratory for residue statistics of the 3n+1 map"};
    app.require_subcommand(1);

    Output out;

    // densities
    auto* densities = app.add_subcommand("densities", "exact residue densities per step");
    std::uint64_t mod_value = 2;
    unsigned steps = 8;
    densities->add_option("--mod", mod_value, "residue modulus (>= 2)")
        ->required()
        ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 32));
    densities->add_option("--steps", steps, "number of map applications")->capture_default_str();
    add_output_flags(densities, out);

    // model
    auto* model = app.add_subcommand("model", "closed forms versus matrix powers");
    std::string chain_name = "parity";
    unsigned model_steps = 16;
    model->add_option("--chain", chain_name, "which two-state chain")
        ->required()
        ->check(CLI::IsMember({"parity", "mod3"}));
    model->add_option("--steps", model_steps, "number of steps")->capture_default_str();
    add_output_flags(model, out);

    // compare
    auto* compare = app.add_subcommand("compare", "model vs exact vs finite-window counts");
    unsigned compare_mod = 2;
    unsigned compare_steps = 8;
    std::uint64_t max_k = 1000000;
    compare->add_option("--mod", compare_mod, "modulus (2 or 3)")
        ->required()
        ->check(CLI::IsMember({2, 3}));
    compare->add_option("--steps", compare_steps, "number of steps")->capture_default_str();
    compare->add_option("--max-k", max_k, "finite-window size for the empirical column")
        ->capture_default_str();
    add_output_flags(compare, out);

    // mixing
    auto* mixing = app.add_subcommand("mixing", "repeated integrals and the mixing contradiction");
    std::uint64_t mixing_max_k = 1000;
    mixing->add_option("--max-k", mixing_max_k, "empirical sample size")->capture_default_str();
    add_output_flags(mixing, out);

    // trajectory
    auto* trajectory = app.add_subcommand("trajectory", "orbit statistics for given starts");
    std::vector<std::string> starts;
    trajectory->add_option("--start", starts, "starting value (repeatable)")->required();
    add_output_flags(trajectory, out);

    // supernatural
    auto* supernatural = app.add_subcommand("supernatural", "the supernatural-number algebra");
    supernatural->require_subcommand(1);
    auto* fixed_point = supernatural->add_subcommand(
        "fixed-point", "verify a multiple of 2^inf is a stationary point");
    std::string sn_literal = "2^inf";
    std::uint64_t sn_steps = 100;
    fixed_point->add_option("--n", sn_literal, "supernatural literal, e.g. 2^inf*5")->required();
    fixed_point->add_option("--steps", sn_steps, "iterations to verify")->capture_default_str();
    add_output_flags(fixed_point, out);
    auto* absorption = supernatural->add_subcommand(
        "absorption", "multiplicative absorption facts at 2^inf");
    add_output_flags(absorption, out);
    auto* oplus_cmd = supernatural->add_subcommand("oplus", "transported addition");
    std::string oplus_a = "1", oplus_b = "1";
    oplus_cmd->add_option("--a", oplus_a, "left operand")->required();
    oplus_cmd->add_option("--b", oplus_b, "right operand")->required();
    add_output_flags(oplus_cmd, out);
    auto* step_cmd = supernatural->add_subcommand("step", "one application of the map");
    std::string step_literal = "1";
    step_cmd->add_option("--n", step_literal, "supernatural literal")->required();
    add_output_flags(step_cmd, out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message
        return kExitUsage;
    }

    try {
        Budgets budgets = budgets_from_env();
        if (densities->parsed())
            return run_densities(BigNat(std::to_string(mod_value)), steps, budgets, out);
        if (model->parsed()) return run_model(chain_name, model_steps, out);
        if (compare->parsed())
            return run_compare(compare_mod, compare_steps, max_k, budgets, out);
        if (mixing->parsed()) return run_mixing(mixing_max_k, budgets, out);
        if (trajectory->parsed()) return run_trajectory(starts, budgets, out);
        if (supernatural->parsed()) {
            if (fixed_point->parsed())
                return run_supernatural_fixed_point(sn_literal, sn_steps, out);
            if (absorption->parsed()) return run_supernatural_absorption(out);
            if (oplus_cmd->parsed()) return run_supernatural_oplus(oplus_a, oplus_b, out);
            if (step_cmd->parsed()) return run_supernatural_step(step_literal, out);
        }
        std::cerr << "no subcommand selected\n";
        return kExitUsage;
    } catch (const cl::BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
