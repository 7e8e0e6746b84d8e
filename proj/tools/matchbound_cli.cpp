// matchbound: stable and maximum matchings in two-sided markets, the
// half-size bound, normal forms, and extremal instance generators.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "matchbound/matchbound.hpp"

using namespace matchbound;

namespace {

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw MarketError("cannot write '" + out_path + "'");
    out << text;
}

std::string pair_set(const Matching& mu) {
    std::string text = "{";
    bool first = true;
    for (const Pair& p : mu.pairs()) {
        if (!first) text += ",";
        first = false;
        text += "(" + std::to_string(p.worker + 1) + "," + std::to_string(p.firm + 1) + ")";
    }
    return text + "}";
}

std::string matching_text(const Market& m, const Matching& mu, const std::string& format) {
    std::string text;
    if (format == "csv") {
        text = "worker,firm\n";
        for (const Pair& p : mu.pairs()) {
            text += m.worker_label(p.worker) + "," + m.firm_label(p.firm) + "\n";
        }
        return text;
    }
    text = pair_set(mu) + "\n";
    for (const Pair& p : mu.pairs()) {
        text += m.worker_label(p.worker) + " -> " + m.firm_label(p.firm) + "\n";
    }
    return text;
}

Market load_input(const std::string& path, bool strict) {
    ParseOptions options;
    options.mutuality = strict ? Mutuality::Require : Mutuality::Prune;
    std::vector<std::string> diagnostics;
    const Market m = load_market(path, options, &diagnostics);
    for (const std::string& diagnostic : diagnostics) {
        std::cerr << "note: " << diagnostic << "\n";
    }
    return m;
}

SolveSide parse_side(const std::string& side) {
    if (side == "worker") return SolveSide::WorkerProposing;
    if (side == "firm") return SolveSide::FirmProposing;
    throw MarketError("unknown side '" + side + "', expected 'worker' or 'firm'");
}

FillPolicy parse_policy(const std::string& policy) {
    if (policy == "random") return FillPolicy::RandomSeeded;
    if (policy == "top") return FillPolicy::AgreementAtTop;
    throw MarketError("unknown policy '" + policy + "', expected 'random' or 'top'");
}

struct GenerateExtensionArgs {
    std::string base_path;
    int add_workers = 1;
    int add_firms = 1;
    std::uint64_t seed = 0;
    std::string policy = "random";
    double density = 0.0;
};

ExtensionPlan build_plan(const GenerateExtensionArgs& args, bool strict) {
    ExtensionPlan plan;
    plan.base = load_input(args.base_path, strict);
    plan.base_stable = deferred_acceptance(plan.base, SolveSide::WorkerProposing);
    plan.new_workers = args.add_workers;
    plan.new_firms = args.add_firms;
    plan.seed = args.seed;
    plan.policy = parse_policy(args.policy);
    plan.extra_acceptability = args.density;
    return plan;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stable and maximum matchings in two-sided markets"};
    app.require_subcommand(1);

    std::string file;
    std::string out_path;
    std::string format = "human";
    std::string side = "worker";
    bool strict = false;
    int cap = kDefaultEnumerationCap;
    app.add_flag("--strict", strict, "reject non-mutual preference entries instead of pruning");

    auto* solve = app.add_subcommand("solve", "deferred-acceptance stable matching");
    solve->add_option("--side", side, "proposing side: worker or firm")->capture_default_str();
    solve->add_option("--format", format)->check(CLI::IsMember({"human", "csv"}));
    solve->add_option("file", file, "market file")->required();

    auto* enumerate = app.add_subcommand("enumerate", "every stable matching, canonical order");
    enumerate->add_option("--cap", cap, "acceptable-pair cap")->capture_default_str();
    enumerate->add_option("--format", format)->check(CLI::IsMember({"human", "csv"}));
    enumerate->add_option("file", file)->required();

    auto* max = app.add_subcommand("max", "maximum matching of the acceptability graph");
    max->add_option("--format", format)->check(CLI::IsMember({"human", "csv"}));
    max->add_option("file", file)->required();

    auto* check = app.add_subcommand("check-bound", "stable size versus maximum size");
    check->add_option("--format", format)->check(CLI::IsMember({"human", "csv"}));
    check->add_option("file", file)->required();

    auto* normal = app.add_subcommand("normal-form", "reduce to the balanced core");
    normal->add_option("-o,--output", out_path, "write the core market here");
    normal->add_option("file", file)->required();

    auto* generate = app.add_subcommand("generate", "construct extremal instances");
    generate->require_subcommand(1);
    int fn_n = 4;
    std::uint64_t fn_seed = 0;
    std::string fn_policy = "random";
    auto* gen_fn = generate->add_subcommand("fn", "tight instance: maximum n, stable ceil(n/2)");
    gen_fn->add_option("--n", fn_n, "maximum matching size")->required();
    gen_fn->add_option("--seed", fn_seed)->capture_default_str();
    gen_fn->add_option("--policy", fn_policy)->check(CLI::IsMember({"random", "top"}));
    gen_fn->add_option("-o,--output", out_path);

    GenerateExtensionArgs gn_args;
    auto* gen_gn = generate->add_subcommand("gn", "extend a base market, keeping its stable size");
    gen_gn->add_option("--base", gn_args.base_path, "base market file")->required();
    gen_gn->add_option("--add-workers", gn_args.add_workers)->capture_default_str();
    gen_gn->add_option("--add-firms", gn_args.add_firms)->capture_default_str();
    gen_gn->add_option("--seed", gn_args.seed)->capture_default_str();
    gen_gn->add_option("--policy", gn_args.policy)->check(CLI::IsMember({"random", "top"}));
    gen_gn->add_option("--density", gn_args.density, "extra acceptability probability");
    gen_gn->add_option("-o,--output", out_path);

    GenerateExtensionArgs top_args;
    auto* gen_top =
        generate->add_subcommand("top", "agreement-at-top extension, stable set preserved");
    gen_top->add_option("--base", top_args.base_path, "base market file")->required();
    gen_top->add_option("--add-workers", top_args.add_workers)->capture_default_str();
    gen_top->add_option("--add-firms", top_args.add_firms)->capture_default_str();
    gen_top->add_option("--seed", top_args.seed)->capture_default_str();
    gen_top->add_option("--density", top_args.density, "extra acceptability probability");
    gen_top->add_option("-o,--output", out_path);

    auto* validate = app.add_subcommand("validate", "check the extension structure of a market");
    std::optional<int> validate_n;
    validate->add_option("--n", validate_n, "also check membership for this size");
    validate->add_option("file", file)->required();

    auto* export_dot_cmd = app.add_subcommand("export-dot", "matching digraph in DOT form");
    bool reduced = false;
    std::vector<std::string> highlight_names;
    export_dot_cmd->add_flag("--reduced", reduced, "omit transitively implied arcs");
    export_dot_cmd
        ->add_option("--highlight", highlight_names, "vertex sets to style: stable, firm-stable, maximum")
        ->check(CLI::IsMember({"stable", "firm-stable", "maximum"}));
    export_dot_cmd->add_option("-o,--output", out_path);
    export_dot_cmd->add_option("file", file)->required();

    auto* monte = app.add_subcommand("monte-carlo", "seeded random bound experiments, CSV output");
    MonteCarloConfig cfg;
    monte->add_option("--workers", cfg.workers)->capture_default_str();
    monte->add_option("--firms", cfg.firms)->capture_default_str();
    monte->add_option("--trials", cfg.trials)->capture_default_str();
    monte->add_option("--prob", cfg.acceptability_probability, "acceptability probability")
        ->capture_default_str();
    monte->add_option("--seed", cfg.seed)->capture_default_str();
    monte->add_option("--quarantine", cfg.quarantine_dir)->capture_default_str();
    monte->add_option("-o,--output", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (solve->parsed()) {
            const Market m = load_input(file, strict);
            write_output(matching_text(m, deferred_acceptance(m, parse_side(side)), format), "");
        } else if (enumerate->parsed()) {
            const Market m = load_input(file, strict);
            const auto stable = enumerate_stable(m, cap);
            std::string text;
            if (format == "csv") {
                text = "matching,worker,firm\n";
                for (std::size_t i = 0; i < stable.size(); ++i) {
                    for (const Pair& p : stable[i].pairs()) {
                        text += std::to_string(i) + "," + m.worker_label(p.worker) + "," +
                                m.firm_label(p.firm) + "\n";
                    }
                }
            } else {
                for (const Matching& mu : stable) text += pair_set(mu) + "\n";
                text += "# " + std::to_string(stable.size()) + " stable matching(s) of size " +
                        std::to_string(stable.empty() ? 0 : stable.front().size()) + "\n";
            }
            write_output(text, "");
        } else if (max->parsed()) {
            const Market m = load_input(file, strict);
            write_output(matching_text(m, maximum_matching(m), format), "");
        } else if (check->parsed()) {
            const Market m = load_input(file, strict);
            const BoundReport report = check_bound(m);
            std::string text;
            if (format == "csv") {
                text = "stable,maximum,ratio,tight\n" + std::to_string(report.stable_size) + "," +
                       std::to_string(report.maximum_size) + "," +
                       detail::format_double(report.ratio.value()) + "," +
                       (report.tight ? "1" : "0") + "\n";
            } else {
                text = "stable=" + std::to_string(report.stable_size) +
                       " maximum=" + std::to_string(report.maximum_size) +
                       " ratio=" + detail::format_double(report.ratio.value()) +
                       " tight=" + (report.tight ? "yes" : "no") + "\n";
            }
            write_output(text, "");
        } else if (normal->parsed()) {
            const Market m = load_input(file, strict);
            const ReductionReport report = normal_form(m);
            std::vector<std::string> header{"normal form of " +
                                            std::filesystem::path(file).filename().string()};
            for (const RemovedAgent& removed : report.removed) {
                header.push_back("removed: " + m.label(removed.id) + " (" + removed.reason + ")");
            }
            write_output(serialize_market(report.core, header), out_path);
        } else if (gen_fn->parsed()) {
            const Market m = generate_fn(fn_n, fn_seed, parse_policy(fn_policy));
            write_output(serialize_market(m, {"generated: fn n=" + std::to_string(fn_n) +
                                              " seed=" + std::to_string(fn_seed) +
                                              " policy=" + fn_policy}),
                         out_path);
        } else if (gen_gn->parsed()) {
            const Market m = generate_gn(build_plan(gn_args, strict));
            write_output(
                serialize_market(m, {"generated: gn base=" +
                                     std::filesystem::path(gn_args.base_path).filename().string() +
                                     " add-workers=" + std::to_string(gn_args.add_workers) +
                                     " add-firms=" + std::to_string(gn_args.add_firms) +
                                     " seed=" + std::to_string(gn_args.seed) + " policy=" +
                                     gn_args.policy + " density=" +
                                     detail::format_double(gn_args.density)}),
                out_path);
        } else if (gen_top->parsed()) {
            top_args.policy = "top";
            const Market m = generate_agreement_at_top(build_plan(top_args, strict));
            write_output(
                serialize_market(m, {"generated: top base=" +
                                     std::filesystem::path(top_args.base_path).filename().string() +
                                     " add-workers=" + std::to_string(top_args.add_workers) +
                                     " add-firms=" + std::to_string(top_args.add_firms) +
                                     " seed=" + std::to_string(top_args.seed) + " density=" +
                                     detail::format_double(top_args.density)}),
                out_path);
        } else if (validate->parsed()) {
            const Market m = load_input(file, strict);
            const Matching mu = deferred_acceptance(m, SolveSide::WorkerProposing);
            std::vector<int> added_workers;
            std::vector<int> added_firms;
            std::string worker_list;
            std::string firm_list;
            for (int w = 0; w < m.worker_count(); ++w) {
                if (!mu.firm_for(w)) {
                    added_workers.push_back(w);
                    worker_list += " " + m.worker_label(w);
                }
            }
            for (int f = 0; f < m.firm_count(); ++f) {
                if (!mu.worker_for(f)) {
                    added_firms.push_back(f);
                    firm_list += " " + m.firm_label(f);
                }
            }
            const GnValidation result = validate_gn_structure(m, mu, added_workers, added_firms);
            std::string text = "stable=" + std::to_string(mu.size()) +
                               " maximum=" + std::to_string(maximum_matching(m).size()) + "\n";
            text += "added workers:" + (worker_list.empty() ? " none" : worker_list) + "\n";
            text += "added firms:" + (firm_list.empty() ? " none" : firm_list) + "\n";
            if (validate_n) {
                text += "gn-member(n=" + std::to_string(*validate_n) +
                        "): " + (is_member_gn(m, *validate_n) ? "yes" : "no") + "\n";
                text += "fn-member(n=" + std::to_string(*validate_n) +
                        "): " + (is_member_fn(m, *validate_n) ? "yes" : "no") + "\n";
            }
            if (result.ok()) {
                text += "structure: ok\n";
                write_output(text, "");
            } else {
                for (const std::string& violation : result.violations) {
                    text += "violation: " + violation + "\n";
                }
                write_output(text, "");
                return 1;
            }
        } else if (export_dot_cmd->parsed()) {
            const Market m = load_input(file, strict);
            const MatchingDigraph d = build_digraph(m);
            std::vector<Highlight> highlights;
            for (const std::string& name : highlight_names) {
                if (name == "stable") {
                    highlights.push_back(
                        {name, vertex_set_of(d, deferred_acceptance(m, SolveSide::WorkerProposing))});
                } else if (name == "firm-stable") {
                    highlights.push_back(
                        {name, vertex_set_of(d, deferred_acceptance(m, SolveSide::FirmProposing))});
                } else {
                    highlights.push_back({name, vertex_set_of(d, maximum_matching(m))});
                }
            }
            write_output(export_dot(d, highlights, reduced), out_path);
        } else if (monte->parsed()) {
            write_output(to_csv(monte_carlo(cfg)), out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
