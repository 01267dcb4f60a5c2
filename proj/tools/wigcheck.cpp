// wigcheck: decide whether a phase-space function is a legitimate Wigner
// distribution, via the Fock-basis positivity test, the KLM conditions, the
// circular-symmetry diagonal spectrum, and the partial-transpose
// entanglement test.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wigcheck/cli.hpp"

namespace {

void add_common(CLI::App* cmd, wigcheck::RunConfig& cfg) {
    cmd->add_option("input", cfg.input, "spec file, inline JSON, or family string like manko_fock1(0.5)")
        ->required();
    cmd->add_option("--tolerance", cfg.tolerance, "verdict tolerance (default: matrix-scaled)");
    std::map<std::string, wigcheck::OutputFormat> fmts{{"text", wigcheck::OutputFormat::text},
                                                       {"struct", wigcheck::OutputFormat::structured}};
    cmd->add_option("--format", cfg.format, "output format")->transform(CLI::CheckedTransformer(fmts));
    cmd->add_flag("--dump-table", cfg.dump_table, "dump the coefficient table / matrix");
    cmd->add_flag("--dump-charfn", cfg.dump_charfn, "dump the characteristic function on a lambda grid");
}

void add_route(CLI::App* cmd, wigcheck::RunConfig& cfg) {
    std::map<std::string, wigcheck::MatrixRoute> routes{{"lambda", wigcheck::MatrixRoute::lambda_integral},
                                                        {"alpha", wigcheck::MatrixRoute::alpha_integral},
                                                        {"laguerre", wigcheck::MatrixRoute::laguerre}};
    cmd->add_option("--route", cfg.route, "coefficient route")->transform(CLI::CheckedTransformer(routes));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"legitimacy tests for one- and two-mode Wigner distributions"};
    app.require_subcommand(1);

    wigcheck::RunConfig cfg;

    auto* check = app.add_subcommand("check", "Fock-basis positivity verdict with truncation escalation");
    add_common(check, cfg);
    add_route(check, cfg);
    check->add_option("--truncation", cfg.truncation, "largest truncation N (default 16)");
    check->add_option("--escalate-from", cfg.escalate_from, "starting truncation (default min(8, N))");

    auto* eigs = app.add_subcommand("eigs", "diagonal spectrum of a circularly symmetric distribution");
    add_common(eigs, cfg);
    eigs->add_option("--truncation", cfg.truncation, "largest Fock index (default 16)");

    auto* klm = app.add_subcommand("klm", "search KLM matrices for a negative eigenvalue");
    add_common(klm, cfg);
    klm->add_option("--n", cfg.klm_n, "matrix size n (default 3)");
    std::map<std::string, wigcheck::KlmStrategy> strategies{{"grid", wigcheck::KlmStrategy::grid},
                                                            {"random", wigcheck::KlmStrategy::random},
                                                            {"cd", wigcheck::KlmStrategy::coordinate_descent}};
    klm->add_option("--strategy", cfg.strategy, "point-set strategy")->transform(CLI::CheckedTransformer(strategies));
    klm->add_option("--budget", cfg.budget, "matrix-evaluation budget (default 20000)");
    klm->add_option("--seed", cfg.seed, "seed for randomized strategies");

    auto* entangle = app.add_subcommand("entangle", "partial-transpose entanglement test for two-mode specs");
    add_common(entangle, cfg);
    entangle->add_option("--truncation", cfg.truncation, "total excitation bound (default 4)");

    auto* coeffs = app.add_subcommand("coeffs", "dump the normally-ordered coefficient table");
    add_common(coeffs, cfg);
    add_route(coeffs, cfg);
    coeffs->add_option("--truncation", cfg.truncation, "table cutoff (default 20 / 10 per mode)");

    auto* convert = app.add_subcommand("convert", "s-parametrized input to Wigner characteristic function");
    add_common(convert, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : wigcheck::kExitUsage;
    }

    if (check->parsed()) cfg.command = wigcheck::Command::check;
    if (eigs->parsed()) cfg.command = wigcheck::Command::eigs;
    if (klm->parsed()) cfg.command = wigcheck::Command::klm;
    if (entangle->parsed()) cfg.command = wigcheck::Command::entangle;
    if (coeffs->parsed()) cfg.command = wigcheck::Command::coeffs;
    if (convert->parsed()) cfg.command = wigcheck::Command::convert;

    return wigcheck::run(cfg, std::cout, std::cerr);
}
