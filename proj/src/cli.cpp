#include "binet/cli.hpp"

#include "binet/dot.hpp"
#include "binet/engine.hpp"
#include "binet/rho.hpp"
#include "binet/syntax.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

namespace binet {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw UsageError("cannot write '" + path.string() + "'");
    out << text;
}

bool is_rho(const std::string &path) { return fs::path(path).extension() == ".rho"; }

Binet load_net(const std::string &path) {
    std::string text = read_file(path);
    if (is_rho(path))
        return compile_rho(parse_rho(text)).net;
    ParseOptions opts;
    opts.allow_reserved_labels = true;
    return parse_binet(text, opts);
}

struct Config {
    std::string input;
    std::string rules;
    std::string strategy = "deterministic";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> priorities;
    std::size_t max_passes = Limits{}.max_passes;
    std::size_t max_steps = Limits{}.max_steps;
    unsigned threads = 1;
    bool single = false;
    std::string snapshots;
    std::string dot;
};

RuleSet load_rules(const Config &cfg) {
    std::string path = cfg.rules;
    if (path.empty())
        if (const char *env = std::getenv("BINET_RULES"); env && *env)
            path = env;
    if (path.empty()) {
        if (is_rho(cfg.input))
            return rho_rules();
        throw UsageError("no rules given (use --rules or set BINET_RULES)");
    }
    RuleSet rs;
    try {
        rs = parse_rules(read_file(path));
    } catch (const ParseError &e) {
        throw UsageError(path + ":" + e.what());
    }
    if (auto report = check_ruleset(rs); !report.empty()) {
        std::ostringstream msg;
        msg << path << ": invalid rule set";
        for (const auto &v : report)
            msg << "\n  " << to_string(v.kind) << " in rule " << v.rule << ": " << v.message;
        throw UsageError(msg.str());
    }
    return rs;
}

Strategy make_strategy(const Config &cfg) {
    Strategy s;
    try {
        s.kind = parse_strategy_kind(cfg.strategy);
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    if (s.kind == StrategyKind::Stochastic && !cfg.seed)
        throw UsageError("--seed is required with --strategy stochastic");
    if (s.kind != StrategyKind::Stochastic && cfg.seed)
        throw UsageError("--seed only applies to --strategy stochastic");
    s.seed = cfg.seed.value_or(0);
    s.maximal = !cfg.single;
    for (const auto &p : cfg.priorities) {
        auto eq = p.find('=');
        if (eq == std::string::npos)
            throw UsageError("--priority expects RULE=N, got '" + p + "'");
        try {
            s.priorities[p.substr(0, eq)] = std::stoi(p.substr(eq + 1));
        } catch (const std::exception &) {
            throw UsageError("--priority expects RULE=N, got '" + p + "'");
        }
    }
    return s;
}

ReduceOptions make_options(const Config &cfg) {
    ReduceOptions o;
    o.limits.max_passes = cfg.max_passes;
    o.limits.max_steps = cfg.max_steps;
    o.threads = cfg.threads;
    return o;
}

void write_stats(std::ostream &out, const ReductionTrace &t) {
    std::size_t active = 0, inactive = 0;
    for (const auto &p : t.passes) {
        active += p.active;
        inactive += p.inactive;
    }
    out << "# passes: " << t.passes.size() << "\n";
    out << "# interactions: " << t.interactions << " (" << active << " active, " << inactive
        << " inactive)\n";
    out << "# termination: " << to_string(t.termination) << "\n";
    if (!t.stuck.empty()) {
        out << "# stuck pairs:";
        for (const auto &l : t.stuck)
            out << " " << l;
        out << "\n";
    }
}

void dump_extras(const Config &cfg, const ReductionTrace &t) {
    if (!cfg.snapshots.empty()) {
        fs::create_directories(cfg.snapshots);
        for (std::size_t i = 0; i < t.snapshots.size(); ++i) {
            std::ostringstream name;
            name << "pass_" << std::setw(4) << std::setfill('0') << i << ".binet";
            write_file(fs::path(cfg.snapshots) / name.str(), print_binet(t.snapshots[i]));
        }
    }
    if (!cfg.dot.empty())
        write_file(cfg.dot, export_dot(t.final_binet()));
}

void add_reduction_flags(CLI::App *cmd, Config &cfg) {
    cmd->add_option("--rules", cfg.rules, "Rule file (default: $BINET_RULES; bundled rules for .rho)");
    cmd->add_option("--strategy", cfg.strategy, "deterministic | weighted | stochastic")
        ->check(CLI::IsMember({"deterministic", "weighted", "stochastic"}));
    cmd->add_option("--seed", cfg.seed, "Seed for the stochastic strategy");
    cmd->add_option("--priority", cfg.priorities, "RULE=N priority override (weighted)");
    cmd->add_option("--max-passes", cfg.max_passes, "Pass limit");
    cmd->add_option("--max-steps", cfg.max_steps, "Interaction limit");
    cmd->add_option("--threads", cfg.threads, "Threads used to instantiate a pass");
    cmd->add_flag("--single", cfg.single, "Fire one redex per pass");
}

} // namespace

int run_command(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Bigraphical net interpreter", "binet"};
    app.require_subcommand(1);
    Config cfg;
    std::size_t passes = 1;
    std::string strategies = "all";
    std::size_t seeds = 20;

    auto *check = app.add_subcommand("check", "Validate a binet (and a rule set)");
    check->add_option("input", cfg.input, ".binet, .rho or .rules file")->required();
    check->add_option("--rules", cfg.rules, "Rule file to check as well");

    auto *run = app.add_subcommand("run", "Reduce to normal form and print the result");
    run->add_option("input", cfg.input)->required();
    add_reduction_flags(run, cfg);
    run->add_option("--snapshots", cfg.snapshots, "Directory for per-pass .binet snapshots");
    run->add_option("--dot", cfg.dot, "Write the final binet as DOT");

    auto *step = app.add_subcommand("step", "Apply N passes and print the snapshot");
    step->add_option("input", cfg.input)->required();
    step->add_option("-n,--passes", passes, "Number of passes")->capture_default_str();
    add_reduction_flags(step, cfg);

    auto *trace = app.add_subcommand("trace", "Print the per-pass log");
    trace->add_option("input", cfg.input)->required();
    add_reduction_flags(trace, cfg);
    trace->add_option("--snapshots", cfg.snapshots, "Directory for per-pass .binet snapshots");

    auto *rho = app.add_subcommand("rho", "Compile a .rho term to a binet");
    rho->add_option("input", cfg.input)->required();
    rho->add_option("--dot", cfg.dot, "Write the compiled binet as DOT");

    auto *bench = app.add_subcommand("bench", "Interaction counts across strategies and seeds");
    bench->add_option("input", cfg.input)->required();
    bench->add_option("--rules", cfg.rules, "Rule file");
    bench->add_option("--strategies", strategies, "all, or a comma-separated list");
    bench->add_option("--seeds", seeds, "Number of stochastic seeds (1..N)");
    bench->add_option("--max-passes", cfg.max_passes, "Pass limit");
    bench->add_option("--max-steps", cfg.max_steps, "Interaction limit");

    auto *dot = app.add_subcommand("dot", "Render a binet as DOT");
    dot->add_option("input", cfg.input)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (check->parsed()) {
            bool ok = true;
            if (fs::path(cfg.input).extension() == ".rules") {
                cfg.rules = cfg.input;
            } else {
                std::string text = read_file(cfg.input);
                try {
                    Binet net = is_rho(cfg.input) ? compile_rho(parse_rho(text)).net
                                                  : parse_binet(text, {true});
                    out << cfg.input << ": ok (" << interface(net).size() << " free ports)\n";
                } catch (const InvalidBinet &e) {
                    ok = false;
                    for (const auto &v : e.report())
                        err << cfg.input << ": " << to_string(v.kind) << " '" << v.subject
                            << "' at " << v.location << ": " << v.message << "\n";
                }
            }
            if (!cfg.rules.empty()) {
                RuleSet rs = parse_rules(read_file(cfg.rules));
                auto report = check_ruleset(rs);
                for (const auto &v : report)
                    err << cfg.rules << ": " << to_string(v.kind) << " in rule " << v.rule << ": "
                        << v.message << "\n";
                if (report.empty())
                    out << cfg.rules << ": ok (" << rs.size() << " rules)\n";
                ok = ok && report.empty();
            }
            return ok ? 0 : 1;
        }
        if (rho->parsed()) {
            Binet net = compile_rho(parse_rho(read_file(cfg.input))).net;
            out << print_binet(net);
            if (!cfg.dot.empty())
                write_file(cfg.dot, export_dot(net));
            return 0;
        }
        if (dot->parsed()) {
            out << export_dot(load_net(cfg.input));
            return 0;
        }
        if (bench->parsed()) {
            Binet net = load_net(cfg.input);
            RuleSet rs = load_rules(cfg);
            std::vector<Strategy> plan;
            std::vector<std::string> names;
            if (strategies == "all") {
                names = {"deterministic", "weighted", "stochastic"};
            } else {
                std::stringstream ss(strategies);
                for (std::string n; std::getline(ss, n, ',');)
                    names.push_back(n);
            }
            for (const auto &n : names) {
                Strategy s;
                try {
                    s.kind = parse_strategy_kind(n);
                } catch (const std::invalid_argument &e) {
                    throw UsageError(e.what());
                }
                if (s.kind != StrategyKind::Stochastic) {
                    plan.push_back(s);
                    continue;
                }
                for (std::size_t seed = 1; seed <= seeds; ++seed) {
                    s.seed = seed;
                    plan.push_back(s);
                }
            }
            ReduceOptions opts = make_options(cfg);
            opts.keep_snapshots = false;
            int status = 0;
            out << "strategy\tseed\tpasses\tinteractions\ttermination\n";
            for (const auto &s : plan) {
                auto t = reduce(net, rs, s, opts);
                out << to_string(s.kind) << '\t'
                    << (s.kind == StrategyKind::Stochastic ? std::to_string(s.seed) : "-") << '\t'
                    << t.passes.size() << '\t' << t.interactions << '\t'
                    << to_string(t.termination) << '\n';
                if (t.termination == Termination::StepLimit)
                    status = 2;
            }
            return status;
        }

        Binet net = load_net(cfg.input);
        RuleSet rs = load_rules(cfg);
        Strategy strategy = make_strategy(cfg);
        ReduceOptions opts = make_options(cfg);
        if (step->parsed()) {
            opts.limits.max_passes = passes;
            auto t = reduce(net, rs, strategy, opts);
            out << print_binet(t.final_binet());
            return 0;
        }
        auto t = reduce(net, rs, strategy, opts);
        dump_extras(cfg, t);
        if (trace->parsed())
            write_trace_log(out, t);
        else {
            out << print_binet(t.final_binet());
            write_stats(out, t);
        }
        if (t.termination == Termination::StepLimit) {
            err << "step limit reached after " << t.passes.size() << " passes\n";
            return 2;
        }
        return 0;
    } catch (const ParseError &e) {
        err << cfg.input << ":" << e.what() << "\n";
    } catch (const InvalidBinet &e) {
        for (const auto &v : e.report())
            err << cfg.input << ": " << to_string(v.kind) << " '" << v.subject << "' at "
                << v.location << ": " << v.message << "\n";
    } catch (const RhoCompileError &e) {
        err << cfg.input << ": " << e.what() << "\n";
    } catch (const UsageError &e) {
        err << "binet: " << e.what() << "\n";
    } catch (const std::exception &e) {
        err << "binet: " << e.what() << "\n";
    }
    return 1;
}

} // namespace binet
