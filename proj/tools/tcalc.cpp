// tcalc: einsum-style evaluation with mediator builtins, identity checks,
// signed circular convolution, and diagram simplification.
//
// Exit codes: 0 success, 1 identity-check failure, 2 usage/parse/bind
// error, 3 evaluation budget or materialization cap exceeded.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tcalc/convolution.hpp"
#include "tcalc/diagram.hpp"
#include "tcalc/einsum.hpp"
#include "tcalc/einsum_program.hpp"
#include "tcalc/identities.hpp"
#include "tcalc/io.hpp"
#include "tcalc/mediators.hpp"
#include "tcalc/products.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct GlobalOpts {
    double tolerance = 1e-10;
    double budget = 1e9;
    std::uint64_t seed = 12345;
    std::string json_report;
};

tcalc::Tensor load_operand(const tcalc::OperandBinding& b, const tcalc::io::LoadOptions& opts,
                           std::size_t cap) {
    using Source = tcalc::OperandBinding::Source;
    switch (b.source) {
        case Source::builtin: return b.builtin.materialize(cap);
        case Source::inline_json: return tcalc::io::tensor_from_json(b.text, opts);
        case Source::file: return tcalc::io::load_tensor(b.text, opts);
    }
    throw tcalc::Error("unhandled binding source");
}

void emit_tensor(const tcalc::Tensor& t, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << tcalc::io::tensor_to_json(t) << "\n";
        std::cerr << "shape " << t.shape_str() << " dtype "
                  << (t.is_complex() ? "c64" : "f64") << "\n";
    } else {
        tcalc::io::save_tensor(out_path, t);
        std::cout << "wrote " << out_path << " shape " << t.shape_str() << " dtype "
                  << (t.is_complex() ? "c64" : "f64") << "\n";
    }
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
    std::string spec_text;
    std::string program_path;
    std::vector<std::string> operand_files;
    std::vector<std::string> binds;
    std::string out_path;
    bool permissive = false;
};

int run_eval(const EvalArgs& args, const GlobalOpts& g) {
    tcalc::EinsumProgram program;
    if (!args.program_path.empty()) {
        std::ifstream in(args.program_path);
        if (!in) throw tcalc::Error("cannot open " + args.program_path);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        program = tcalc::EinsumProgram::parse_integer_lists(text);
    } else if (!args.spec_text.empty() || args.operand_files.empty()) {
        program = tcalc::EinsumProgram::parse(args.spec_text);
    } else {
        throw tcalc::ParseError("eval needs a subscript spec or --program");
    }

    for (const std::string& bind : args.binds) {
        const std::size_t eq = bind.find('=');
        if (eq == std::string::npos)
            throw tcalc::ParseError("--bind expects POS=SOURCE, got \"" + bind + "\"");
        const std::string pos_text = bind.substr(0, eq);
        if (pos_text.empty() || pos_text.find_first_not_of("0123456789") != std::string::npos)
            throw tcalc::ParseError("--bind position must be a 1-based integer, got \"" +
                                    pos_text + "\"");
        const std::size_t pos = std::stoull(pos_text);
        if (pos == 0 || pos > program.spec.operands.size())
            throw tcalc::ParseError("--bind position " + pos_text + " out of range (spec has " +
                                    std::to_string(program.spec.operands.size()) +
                                    " operands)");
        program.bindings[pos - 1] = tcalc::OperandBinding::classify(bind.substr(eq + 1));
    }

    // remaining positional files fill the unbound slots in order
    std::size_t next_file = 0;
    for (std::size_t slot = 0; slot < program.spec.operands.size(); ++slot) {
        if (program.bindings.count(slot)) continue;
        if (next_file >= args.operand_files.size())
            throw tcalc::ParseError("operand " + std::to_string(slot + 1) +
                                    " has no file and no --bind");
        program.bindings[slot] = tcalc::OperandBinding::classify(args.operand_files[next_file++]);
    }
    if (next_file < args.operand_files.size())
        throw tcalc::ParseError("more operand files than operand slots");

    tcalc::io::LoadOptions load;
    load.allow_nonfinite = args.permissive;
    tcalc::EvalOptions opts;
    opts.budget = g.budget;

    std::vector<tcalc::Tensor> operands;
    for (std::size_t slot = 0; slot < program.spec.operands.size(); ++slot)
        operands.push_back(load_operand(program.bindings.at(slot), load, opts.dense_cap));

    emit_tensor(tcalc::einsum_eval(program.spec, operands, opts), args.out_path);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

struct CheckArgs {
    std::size_t trials = 100;
    std::size_t min_extent = 2;
    std::size_t max_extent = 5;
    std::vector<std::string> names;
};

int run_check(const CheckArgs& args, const GlobalOpts& g) {
    tcalc::CheckProfile profile;
    profile.trials = args.trials;
    profile.min_extent = args.min_extent;
    profile.max_extent = args.max_extent;
    profile.seed = g.seed;

    std::vector<tcalc::IdentityCase> results = tcalc::check_all(profile);
    if (!args.names.empty()) {
        std::vector<tcalc::IdentityCase> filtered;
        for (const auto& c : results)
            for (const auto& n : args.names)
                if (c.name == n) filtered.push_back(c);
        if (filtered.empty() && !results.empty())
            throw tcalc::Error("no catalog identity matches the requested names");
        results = std::move(filtered);
    }

    bool all_pass = true;
    std::printf("%-22s %-28s %-12s %s\n", "identity", "dims", "residual", "status");
    for (const auto& c : results) {
        std::string dims;
        for (const auto& [sym, e] : c.dims) dims += sym + "=" + std::to_string(e) + " ";
        const bool pass = c.pass(g.tolerance);
        all_pass = all_pass && pass;
        std::printf("%-22s %-28s %-12.3e %s\n", c.name.c_str(), dims.c_str(), c.residual,
                    pass ? "pass" : "FAIL");
    }

    if (!g.json_report.empty()) {
        nlohmann::json report;
        report["seed"] = profile.seed;
        report["trials"] = profile.trials;
        report["tolerance"] = g.tolerance;
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& c : results) {
            nlohmann::json row;
            row["name"] = c.name;
            row["dims"] = c.dims;
            row["residual"] = c.residual;
            row["pass"] = c.pass(g.tolerance);
            rows.push_back(std::move(row));
        }
        report["results"] = std::move(rows);
        report["all_pass"] = all_pass;
        std::ofstream out(g.json_report);
        if (!out) throw tcalc::Error("cannot write " + g.json_report);
        out << report.dump(2) << "\n";
    }
    return all_pass ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// conv / simplify / products / mediator
// ---------------------------------------------------------------------------

tcalc::ConvPath parse_path(const std::string& text) {
    if (text == "auto") return tcalc::ConvPath::automatic;
    if (text == "direct") return tcalc::ConvPath::direct;
    if (text == "fft") return tcalc::ConvPath::fft;
    throw tcalc::ParseError("--path must be auto, direct or fft, got \"" + text + "\"");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tensor calculus engine: einsum with mediator tensors, matrix products, "
                 "graphical rewrites, and signed circular convolution"};
    app.require_subcommand(1);
    app.fallthrough(true);

    GlobalOpts g;
    app.add_option("--tolerance", g.tolerance, "pass/fail tolerance for checks")
        ->envname("TCALC_TOLERANCE");
    app.add_option("--budget", g.budget, "evaluation budget in scalar multiply-adds")
        ->envname("TCALC_BUDGET");
    app.add_option("--seed", g.seed, "seed for randomized checks")->envname("TCALC_SEED");
    app.add_option("--json-report", g.json_report, "write a machine-readable report here")
        ->envname("TCALC_JSON_REPORT");

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "evaluate an einsum program");
    eval->add_option("spec", eval_args.spec_text, "subscripts, e.g. \"ij,jk->ik\"");
    eval->add_option("operands", eval_args.operand_files, "operand tensor JSON files");
    eval->add_option("--bind", eval_args.binds,
                     "bind an operand slot: POS=file.json | POS=delta[3,4] | POS={inline json}");
    eval->add_option("--program", eval_args.program_path,
                     "integer-list program JSON instead of a subscript spec");
    eval->add_option("-o,--out", eval_args.out_path, "output tensor path (default: stdout)");
    eval->add_flag("--permissive", eval_args.permissive, "accept NaN/Inf tensor entries");

    CheckArgs check_args;
    CLI::App* check = app.add_subcommand("check", "run the identity catalog");
    check->add_option("--trials", check_args.trials, "random trials per identity");
    check->add_option("--min-extent", check_args.min_extent, "smallest random extent");
    check->add_option("--max-extent", check_args.max_extent, "largest random extent");
    check->add_option("--name", check_args.names, "restrict to named identities");

    std::string conv_sig = "++-";
    std::string conv_path = "auto";
    std::vector<std::string> conv_files;
    std::string conv_out;
    CLI::App* conv = app.add_subcommand("conv", "signed circular convolution of two vectors");
    conv->add_option("--sig", conv_sig, "signature, three of '+'/'-' (default ++-)");
    conv->add_option("--path", conv_path, "auto | direct | fft");
    conv->add_option("operands", conv_files, "two vector JSON files")->expected(2);
    conv->add_option("-o,--out", conv_out, "output path (default: stdout)");

    std::string simp_in, simp_out, simp_dot;
    CLI::App* simp = app.add_subcommand("simplify", "apply the rewrite rules to a fixpoint");
    simp->add_option("diagram", simp_in, "diagram JSON file")->required();
    simp->add_option("-o,--out", simp_out, "simplified diagram path (default: stdout)");
    simp->add_option("--dot", simp_dot, "also write GraphViz text here");

    struct ProductCmd {
        CLI::App* cmd;
        std::vector<std::string> files;
        std::string out;
        bool row = false;
        bool textbook = false;
    };
    std::map<std::string, ProductCmd> prods;
    for (const char* name : {"dot", "kron", "hadamard", "kr", "ts"}) {
        ProductCmd pc;
        pc.cmd = app.add_subcommand(name, std::string("product shortcut: ") + name);
        prods[name] = pc;
        ProductCmd& ref = prods[name];
        ref.cmd->add_option("operands", ref.files, "two tensor JSON files")->expected(2);
        ref.cmd->add_option("-o,--out", ref.out, "output path (default: stdout)");
        if (std::string(name) == "kr")
            ref.cmd->add_flag("--row", ref.row, "row version (default: column)");
        if (std::string(name) == "kron")
            ref.cmd->add_flag("--textbook", ref.textbook,
                              "emit the slow-first textbook serialization");
    }

    std::string med_spec, med_out;
    CLI::App* med = app.add_subcommand("mediator", "dump a dense mediator tensor");
    med->add_option("builtin", med_spec,
                    "delta[N,D] | gamma[I1,...,In] | chi[sig,D] | fourier[D,fwd|inv]")
        ->required();
    med->add_option("-o,--out", med_out, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (eval->parsed()) return run_eval(eval_args, g);
        if (check->parsed()) return run_check(check_args, g);

        if (conv->parsed()) {
            const tcalc::Signature sig = tcalc::Signature::parse(conv_sig);
            tcalc::ConvOptions opts;
            opts.path = parse_path(conv_path);
            const tcalc::Tensor a = tcalc::io::load_tensor(conv_files[0]);
            const tcalc::Tensor b = tcalc::io::load_tensor(conv_files[1]);
            emit_tensor(tcalc::conv1d(a, b, sig, opts), conv_out);
            return kExitOk;
        }

        if (simp->parsed()) {
            const tcalc::Diagram d = tcalc::io::load_diagram(simp_in);
            const tcalc::Diagram s = tcalc::simplify(d);
            if (simp_out.empty())
                std::cout << tcalc::io::diagram_to_json(s) << "\n";
            else {
                tcalc::io::save_diagram(simp_out, s);
                std::cout << "wrote " << simp_out << " (" << s.nodes().size() << " nodes, scale "
                          << s.scale() << ")\n";
            }
            if (!simp_dot.empty()) {
                std::ofstream out(simp_dot);
                if (!out) throw tcalc::Error("cannot write " + simp_dot);
                out << tcalc::to_dot(s);
            }
            return kExitOk;
        }

        for (auto& [name, pc] : prods) {
            if (!pc.cmd->parsed()) continue;
            const tcalc::Tensor a = tcalc::io::load_tensor(pc.files[0]);
            const tcalc::Tensor b = tcalc::io::load_tensor(pc.files[1]);
            tcalc::Tensor out;
            if (name == "dot") out = tcalc::dot(a, b);
            if (name == "kron")
                out = tcalc::kronecker(a, b,
                                       pc.textbook ? tcalc::KronLayout::textbook
                                                   : tcalc::KronLayout::gamma);
            if (name == "hadamard") out = tcalc::hadamard(a, b);
            if (name == "kr")
                out = pc.row ? tcalc::khatri_rao_row(a, b) : tcalc::khatri_rao_col(a, b);
            if (name == "ts") out = tcalc::tracy_singh(a, b);
            emit_tensor(out, pc.out);
            return kExitOk;
        }

        if (med->parsed()) {
            emit_tensor(tcalc::Builtin::parse(med_spec).materialize(tcalc::kDefaultDenseCap),
                        med_out);
            return kExitOk;
        }
    } catch (const tcalc::BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const tcalc::CapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
