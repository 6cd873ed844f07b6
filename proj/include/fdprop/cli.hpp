#ifndef FDPROP_CLI_HPP
#define FDPROP_CLI_HPP

#include "fdprop/explanation.hpp"
#include "fdprop/parse.hpp"
#include "fdprop/propagation.hpp"
#include "fdprop/rules.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fdprop::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_diagnostics = 1;
inline constexpr int exit_internal = 2;

namespace detail {

inline std::optional<std::string> read_file(const std::string& path, std::ostream& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err << "error: cannot open '" << path << "'\n";
        return std::nullopt;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::optional<CspModel> load_model(const std::string& path, std::ostream& err) {
    auto text = read_file(path, err);
    if (!text) return std::nullopt;
    ParseResult parsed = parse_model(*text);
    for (const Diagnostic& d : parsed.diagnostics)
        err << path << ':' << d.line << ':' << d.column << ": "
            << (d.severity == Severity::Error ? "error" : "warning") << ": " << d.message << '\n';
    return parsed.model;
}

inline RuleMode parse_mode(const std::string& mode) {
    if (mode == "full") return RuleMode::Full;
    if (mode == "bounds") return RuleMode::Bounds;
    throw InputError("unknown mode '" + mode + "' (expected full or bounds)");
}

inline Run parse_strategy(const std::string& text) {
    if (text == "worklist") return Run::worklist();
    if (text == "roundrobin") return Run::round_robin();
    if (text.rfind("random:", 0) == 0) {
        const std::string seed = text.substr(7);
        try {
            return Run::random(std::stoull(seed));
        } catch (const std::exception&) {
            throw InputError("bad seed in '" + text + "'");
        }
    }
    throw InputError("unknown strategy '" + text + "' (expected worklist, roundrobin or random:<seed>)");
}

inline std::vector<int> parse_script(const std::string& text,
                                     const std::vector<ReductionRule>& rules) {
    std::vector<int> script;
    std::istringstream ss(text);
    std::string label;
    while (std::getline(ss, label, ',')) {
        const ReductionRule* r = find_rule(rules, label);
        if (!r) throw InputError("unknown rule '" + label + "' in script");
        script.push_back(r->id.index);
    }
    return script;
}

inline void print_family(const CspModel& model, const DomainFamily& d, std::ostream& out) {
    for (int i = 0; i < model.num_variables(); ++i) {
        VariableId x{i};
        out << model.name_of(x) << " in {";
        const auto& vals = d.at(x).values();
        for (std::size_t k = 0; k < vals.size(); ++k) out << (k ? ", " : "") << vals[k];
        out << "}\n";
    }
}

inline bool write_file(const std::string& path, const std::string& content, std::ostream& err) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        err << "error: cannot write '" << path << "'\n";
        return false;
    }
    f << content;
    return true;
}

inline int run_solve(const std::string& path, const std::string& mode,
                     const std::string& strategy, const std::string& script,
                     bool no_stop_on_failure, const std::string& trace_out, std::ostream& out,
                     std::ostream& err) {
    auto model = load_model(path, err);
    if (!model) return exit_diagnostics;
    const std::vector<ReductionRule> rules = rules_for_model(*model, parse_mode(mode));
    Run run = parse_strategy(strategy);
    if (!script.empty()) run.script = parse_script(script, rules);

    ClosureResult result = iterate(*model, rules, run, !no_stop_on_failure);
    print_family(*model, result.closure, out);
    if (result.status == ClosureStatus::Closed)
        out << "status: CLOSED\n";
    else
        out << "status: FAILED (" << model->name_of(*result.emptied) << " emptied)\n";

    if (!trace_out.empty() && !write_file(trace_out, result.trace.to_text(*model), err))
        return exit_diagnostics;
    return exit_ok;
}

inline int run_explain(const std::string& path, const std::string& var_name, Value value,
                       const std::string& mode, const std::string& dot_out, bool text,
                       std::ostream& out, std::ostream& err) {
    auto model = load_model(path, err);
    if (!model) return exit_diagnostics;
    const std::vector<ReductionRule> rules = rules_for_model(*model, parse_mode(mode));
    const VariableId y = model->var(var_name);

    const bool exists = explanation_exists(*model, rules, value, y);
    out << "explanation exists for (" << value << ", " << var_name << "): "
        << (exists ? "yes" : "no") << '\n';
    if (!exists) return exit_ok;

    ClosureResult result = iterate(*model, rules, Run::worklist(), /*stop_on_failure=*/false);
    Explanation expl = explain_from_trace(result.trace, value, y);
    if (text) out << render_text(expl, *model);
    if (!dot_out.empty() && !write_file(dot_out, export_dot(expl, *model), err))
        return exit_diagnostics;
    return exit_ok;
}

inline int run_check(const std::string& path, const std::string& mode, int strategies,
                     std::ostream& out, std::ostream& err) {
    auto model = load_model(path, err);
    if (!model) return exit_diagnostics;
    const std::vector<ReductionRule> rules = rules_for_model(*model, parse_mode(mode));

    bool all_ok = true;
    for (const ReductionRule& r : rules) {
        const ConstraintDef* origin = nullptr;
        for (const ConstraintDef& c : model->constraints())
            if (c.id == r.origin) origin = &c;
        const bool ok = origin && check_correct_wrt_constraint(*model, r, *origin);
        out << "rule " << r.id.label << " (" << r.origin << "): "
            << (ok ? "correct" : "INCORRECT") << '\n';
        all_ok = all_ok && ok;
    }

    const DomainFamily expected = simultaneous_closure(*model, rules);
    int agreeing = 0;
    for (int k = 0; k < strategies; ++k) {
        Run run = k == 0   ? Run::worklist()
                  : k == 1 ? Run::round_robin()
                           : Run::random(static_cast<std::uint64_t>(k - 1));
        ClosureResult r = iterate(*model, rules, run, /*stop_on_failure=*/false);
        if (r.closure == expected && r.status == ClosureStatus::Closed) {
            ++agreeing;
        } else {
            all_ok = false;
            out << "confluence mismatch under strategy #" << k << '\n';
        }
    }
    out << "confluence: " << agreeing << "/" << strategies
        << " strategies reach the simultaneous fixpoint\n";
    out << (all_ok ? "all checks passed\n" : "CHECKS FAILED\n");
    return all_ok ? exit_ok : exit_internal;
}

inline int run_oracle(const std::string& path, std::ostream& out, std::ostream& err) {
    auto model = load_model(path, err);
    if (!model) return exit_diagnostics;
    const std::vector<Tuple> solutions = enumerate_solutions(*model, model->initial_family());
    for (const Tuple& t : solutions) {
        bool first = true;
        for (int i = 0; i < model->num_variables(); ++i) {
            VariableId x{i};
            out << (first ? "" : " ") << model->name_of(x) << '=' << t.at(x);
            first = false;
        }
        out << '\n';
    }
    out << solutions.size() << (solutions.size() == 1 ? " solution\n" : " solutions\n");
    return exit_ok;
}

} // namespace detail

/// Entry point shared by the binary and the tests. Arguments exclude the
/// program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"finite-domain propagation with value-withdrawal explanations", "fdprop"};
    app.require_subcommand(1);

    std::string model_path, mode = "full", strategy = "worklist", script, trace_out;
    bool no_stop_on_failure = false;

    CLI::App* solve = app.add_subcommand("solve", "propagate to a closure or a failure");
    solve->add_option("model", model_path, "model file")->required();
    solve->add_option("--mode", mode, "rule mode: full or bounds");
    solve->add_option("--strategy", strategy, "worklist, roundrobin or random:<seed>");
    solve->add_option("--script", script, "comma-separated rule labels to replay first");
    solve->add_flag("--no-stop-on-failure", no_stop_on_failure,
                    "keep iterating after a domain empties");
    solve->add_option("--trace", trace_out, "write the withdrawal trace to this file");

    std::string var_name, dot_out;
    Value value = 0;
    bool text = false;

    CLI::App* explain = app.add_subcommand("explain", "explain why a value is withdrawn");
    explain->add_option("model", model_path, "model file")->required();
    explain->add_option("--var", var_name, "variable name")->required();
    explain->add_option("--value", value, "value to explain")->required();
    explain->add_option("--mode", mode, "rule mode: full or bounds");
    explain->add_option("--dot", dot_out, "write the proof tree as Graphviz to this file");
    explain->add_flag("--text", text, "print the proof tree as an indented list");

    int strategies = 20;
    CLI::App* check = app.add_subcommand("check", "verify rule correctness and confluence");
    check->add_option("model", model_path, "model file")->required();
    check->add_option("--mode", mode, "rule mode: full or bounds");
    check->add_option("--strategies", strategies, "how many iteration strategies to compare");

    CLI::App* oracle = app.add_subcommand("oracle", "brute-force solution enumeration");
    oracle->add_option("model", model_path, "model file")->required();

    try {
        std::vector<const char*> argv{"fdprop"};
        for (const std::string& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return exit_ok;
        }
        err << "error: " << e.what() << '\n';
        return exit_diagnostics;
    }

    try {
        if (solve->parsed())
            return detail::run_solve(model_path, mode, strategy, script, no_stop_on_failure,
                                     trace_out, out, err);
        if (explain->parsed())
            return detail::run_explain(model_path, var_name, value, mode, dot_out, text, out, err);
        if (check->parsed()) return detail::run_check(model_path, mode, strategies, out, err);
        if (oracle->parsed()) return detail::run_oracle(model_path, out, err);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return exit_diagnostics;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_diagnostics;
    } catch (const std::logic_error& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_internal;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_diagnostics;
    }
    return exit_diagnostics;
}

} // namespace fdprop::cli

#endif // FDPROP_CLI_HPP
