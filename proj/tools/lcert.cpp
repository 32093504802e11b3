#include "lcert/error.hpp"
#include "lcert/eval.hpp"
#include "lcert/extract.hpp"
#include "lcert/reductions.hpp"
#include "lcert/stack.hpp"
#include "lcert/stdlib.hpp"
#include "lcert/workbench.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace lcert;

namespace {

enum Exit { exit_pass = 0, exit_fail = 1, exit_inconclusive = 2, exit_usage = 3 };

int exit_of(Verdict v) {
    switch (v) {
    case Verdict::pass:
        return exit_pass;
    case Verdict::fail:
        return exit_fail;
    case Verdict::inconclusive:
        return exit_inconclusive;
    }
    return exit_fail;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

// inline text, or the contents of the file it names
std::string text_or_file(const std::string& arg) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) return slurp(arg);
    return arg;
}

std::uint64_t default_budget() {
    if (const char* env = std::getenv("LCERT_BUDGET")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw Error(std::string("LCERT_BUDGET is not a number: ") + env);
        }
    }
    return 10'000'000;
}

SourceProgram load_program(const std::string& path) {
    SourceProgram p = stdlib_program();
    if (!path.empty()) {
        parse_into(p, slurp(path));
        typecheck(p);
    }
    return p;
}

void header(const std::string& cmd, std::uint64_t seed, std::uint64_t budget) {
    std::cout << "# lcert " << cmd << " seed=" << seed << " budget=" << budget << "\n";
}

struct Common {
    std::string program;
    std::string def;
    std::string at;
    std::uint64_t seed = 1;
    std::uint64_t budget = 0;
    std::vector<std::string> with;

    ExtractKey key(const SourceProgram& p) const { return {def, parse_type_args(p, at)}; }
};

std::vector<PoolEntry> pool(Workbench& wb, const Common& c) {
    if (c.with.empty()) return wb.pool_for(c.key(wb.program()));
    std::vector<PoolEntry> out;
    for (const auto& name : c.with) out.push_back({TyDesc::of(wb.type_of({name, {}})), wb.candidate({name, {}})});
    return out;
}

int cmd_run(const std::string& term_text, const std::string& file, std::uint64_t budget, bool steps,
            const std::string& evaluator) {
    Term t = parse_term(file.empty() ? term_text : slurp(file));
    Evaluator which = evaluator == "substitution" ? Evaluator::substitution : Evaluator::machine;
    EvalOutcome r = evaluate(which, t, budget);
    if (r.exhausted()) {
        std::cout << "verdict=budget steps=" << r.steps << "\n";
        return exit_inconclusive;
    }
    std::cout << "normal=" << print_term(*r.normal);
    if (steps) std::cout << " steps=" << r.steps;
    std::cout << "\n";
    return exit_pass;
}

int cmd_extract(const Common& c, const std::string& out, const std::string& style) {
    Workbench wb(load_program(c.program));
    std::string text;
    if (!c.def.empty()) {
        TermStyle st = style == "debruijn" ? TermStyle::debruijn : style == "named" ? TermStyle::named : TermStyle::lambda;
        text = print_term(wb.extract(c.key(wb.program())), st) + "\n";
    } else {
        std::vector<ExtractKey> all;
        for (const auto& d : wb.program().defs)
            if (d.params.empty()) all.push_back({d.name, {}});
        extract_program(wb.env(), wb.program(), all);
        text = wb.env().dump();
        std::cerr << "entries=" << wb.env().size() << "\n";
    }
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out);
        if (!f) throw Error("cannot write " + out);
        f << text;
    }
    return exit_pass;
}

int cmd_check(const Common& c, const std::string& time, bool exact, std::size_t samples, std::uint64_t max_nat,
              bool table) {
    Workbench wb(load_program(c.program));
    ExtractKey key = c.key(wb.program());
    TyDesc ty = TyDesc::of(wb.type_of(key));
    std::shared_ptr<const TimeBound> bound;
    wb.extract(key);
    if (!time.empty()) bound = std::make_shared<TimeBound>(parse_boundspec(time, wb.registry(), ty));
    Candidate cand = wb.candidate(key, bound);
    auto fns = pool(wb, c);

    SamplerConfig sc;
    sc.seed = c.seed;
    sc.samples = samples;
    for (std::uint64_t n = 0; n < max_nat; ++n) sc.nats.push_back(n);
    Sampler sampler(wb.registry(), sc);
    CheckOptions opts;
    opts.budget = c.budget;
    opts.exact_time = exact;

    CheckReport r = bound ? check_computes_time(wb.registry(), wb.interp(), ty, cand, sampler, fns, opts)
                          : check_computes(wb.registry(), wb.interp(), ty, cand, sampler, fns, opts);
    header("check", c.seed, c.budget);
    std::cout << r.line() << "\n";
    if (r.witness) {
        std::cout << "witness";
        for (const auto& in : r.witness->inputs) std::cout << " " << in;
        std::cout << " : " << r.witness->note << "\n";
    }
    if (table) std::cout << r.table();
    return exit_of(r.verdict);
}

// argument of the given feature: a natural is the number, a list has that
// length, a boolean is its parity; other types are sampled
Value feature_value(Sampler& s, const SrcType& t, std::uint64_t f) {
    if (t.is_adt() && t.name() == "nat") return values::nat(f);
    if (t.is_adt() && t.name() == "bool") return values::boolean(f % 2 == 1);
    if (t.is_adt() && t.name() == "list") {
        std::vector<Value> elems;
        for (std::uint64_t i = 0; i < f; ++i) elems.push_back(s.value(t.args()[0]));
        return values::list(std::move(elems));
    }
    return s.value(t);
}

std::vector<std::uint64_t> parse_grid(const std::string& spec) {
    std::vector<std::uint64_t> dims;
    std::stringstream in(spec);
    std::string part;
    while (std::getline(in, part, 'x')) {
        try {
            dims.push_back(std::stoull(part));
        } catch (const std::exception&) {
            throw ParseError("bad grid " + spec + ", expected e.g. 20x20", 1, 1);
        }
    }
    if (dims.empty()) throw ParseError("empty grid", 1, 1);
    return dims;
}

int cmd_bench(const Common& c, const std::string& grid, const std::string& fit) {
    Workbench wb(load_program(c.program));
    ExtractKey key = c.key(wb.program());
    TyDesc ty = TyDesc::of(wb.type_of(key));
    Candidate cand = wb.candidate(key);
    auto fns = pool(wb, c);
    auto dims = parse_grid(grid);
    auto doms = ty.arg_types();
    std::vector<std::size_t> base_pos;
    for (std::size_t i = 0; i < doms.size(); ++i)
        if (doms[i].is_base()) base_pos.push_back(i);
    if (dims.size() != base_pos.size())
        throw ParseError("grid has " + std::to_string(dims.size()) + " dimensions, " + key.str() + " takes " +
                             std::to_string(base_pos.size()) + " data arguments",
                         1, 1);

    SamplerConfig sc;
    sc.seed = c.seed;
    Sampler sampler(wb.registry(), sc);
    std::vector<std::vector<Candidate>> tuples;
    std::vector<std::vector<std::uint64_t>> features;
    std::vector<std::uint64_t> at(dims.size(), 0);
    for (;;) {
        std::vector<Candidate> args(doms.size());
        for (std::size_t k = 0; k < base_pos.size(); ++k) {
            const SrcType& t = doms[base_pos[k]].instance();
            args[base_pos[k]] = value_candidate(wb.registry(), t, feature_value(sampler, t, at[k]));
        }
        for (std::size_t i = 0; i < doms.size(); ++i) {
            if (doms[i].is_base()) continue;
            auto it = std::find_if(fns.begin(), fns.end(), [&](const PoolEntry& p) { return p.type.str() == doms[i].str(); });
            if (it == fns.end()) throw Error("no function of type " + doms[i].str() + " to pass; use --with");
            args[i] = it->candidate;
        }
        tuples.push_back(std::move(args));
        features.push_back(at);
        std::size_t k = dims.size();
        while (k > 0 && ++at[k - 1] == dims[k - 1]) at[--k] = 0;
        if (k == 0) break;
    }

    CheckOptions opts;
    opts.budget = c.budget;
    CheckReport r = measure_steps(wb.registry(), wb.interp(), ty, cand, tuples, opts);

    std::optional<TimeBound> fit_expr;
    if (!fit.empty()) {
        std::string spec;
        for (std::size_t i = 1; i < doms.size(); ++i) spec += "0;";
        fit_expr = parse_boundspec(spec + fit, wb.registry(), ty);
    }

    header("bench", c.seed, c.budget);
    const char* names[] = {"x", "y", "z", "w", "u", "v"};
    for (std::size_t k = 0; k < dims.size(); ++k) std::cout << (k < 6 ? names[k] : "?") << "\t";
    std::cout << "steps" << (fit_expr ? "\tfeature" : "") << "\n";
    std::vector<double> xs, ys;
    bool complete = true;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        for (auto f : features[i]) std::cout << f << "\t";
        std::uint64_t total = 0;
        for (auto s : r.rows[i].steps) total += s;
        bool ok = r.rows[i].verdict != Verdict::inconclusive;
        complete = complete && ok;
        std::cout << (ok ? std::to_string(total) : "budget");
        if (fit_expr) {
            TimeBound b = *fit_expr;
            std::uint64_t value = 0;
            for (const auto& a : tuples[i]) {
                auto [budget, next] = b.step(a);
                value = budget;
                b = next;
            }
            std::cout << "\t" << value;
            if (ok) {
                xs.push_back(static_cast<double>(value));
                ys.push_back(static_cast<double>(total));
            }
        }
        std::cout << "\n";
    }
    if (fit_expr) {
        AffineFit f = fit_affine(xs, ys);
        std::cout << "fit slope=" << f.slope << " intercept=" << f.intercept << " residual=" << f.residual_max
                  << (f.exact() ? " exact" : "") << "\n";
    }
    return complete ? exit_pass : exit_inconclusive;
}

std::string show_option_term(const std::optional<Term>& t) {
    return t ? "Some " + print_term(*t) : std::string("None");
}

int cmd_universal(std::uint64_t n, const std::string& term_text, std::uint64_t budget) {
    Term s = parse_term(text_or_file(term_text));
    if (!closed(s)) throw ParseError("the term must be closed", 1, 1);
    ExtractionEnv env;
    Term u = build_universal(env);
    const Registry& reg = env.registry();
    auto term = SrcType::adt("term");
    EvalOutcome r = machine_eval(apply(u, {reg.encode(SrcType::adt("nat"), values::nat(n)), reg.encode(term, term_value(s))}), budget);
    std::optional<Term> native = eva(n, s);
    header("universal", 0, budget);
    if (r.exhausted()) {
        std::cout << "verdict=budget steps=" << r.steps << " native=" << show_option_term(native) << "\n";
        return exit_inconclusive;
    }
    auto v = reg.decode(SrcType::adt("option", {term}), *r.normal);
    if (!v) {
        std::cout << "verdict=fail steps=" << r.steps << " result is not an encoded option term\n";
        return exit_fail;
    }
    std::optional<Term> got;
    if (v->ctor == 0) got = value_term(v->args[0]);
    std::cout << show_option_term(got) << "\n";
    bool agree = got == native;
    std::cout << "steps=" << r.steps << " native=" << show_option_term(native) << " agree=" << (agree ? "yes" : "no")
              << "\n";
    return agree ? exit_pass : exit_fail;
}

int cmd_h10(const std::string& instance_text, std::uint64_t budget, std::uint64_t levels) {
    H10Instance inst = parse_h10(text_or_file(instance_text));
    header("h10", 0, budget);
    std::cout << "instance " << inst.lhs.str() << " = " << inst.rhs.str() << "\n";
    auto w = h10_witness(inst, levels);
    if (w) {
        std::cout << "native witness level=" << w->level << " position=" << w->position << " index=" << w->index
                  << " assignment=(";
        for (std::size_t i = 0; i < w->assignment.size(); ++i) std::cout << (i ? " " : "") << w->assignment[i];
        std::cout << ")\n";
    } else {
        std::cout << "native witness none below level " << levels << "\n";
    }
    ExtractionEnv env;
    Term red = h10_reduction(env, inst);
    EvalOutcome r = machine_eval(red, budget);
    if (r.exhausted()) {
        std::cout << "verdict=budget steps=" << r.steps << "\n";
        return exit_inconclusive;
    }
    auto k = env.registry().decode(SrcType::adt("nat"), *r.normal);
    if (!k) {
        std::cout << "verdict=fail steps=" << r.steps << " normal form is not a natural\n";
        return exit_fail;
    }
    std::uint64_t index = *values::as_nat(*k);
    auto [a, b] = cantor_unpair(index);
    std::cout << "verdict=halted steps=" << r.steps << " index=" << index << " pair=(" << a << "," << b << ")\n";
    return (!w || w->index == index) ? exit_pass : exit_fail;
}

int cmd_tm(const std::string& file, std::uint64_t max_k, std::uint64_t budget) {
    TMachine m = parse_tm(slurp(file));
    SourceProgram p = tm_program(m);
    ExtractionEnv env;
    extract_tm(env, p);
    const Registry& reg = env.registry();
    TMConfig c0 = m.initial();
    Term loop = env.at({"tm_loop", {}});
    Term c0_term = reg.encode(SrcType::adt("config"), config_value(c0));
    header("tm", 0, budget);
    std::cout << "k\tnative\tsteps\tagree\n";
    bool all_agree = true;
    for (std::uint64_t k = 0; k <= max_k; ++k) {
        auto native = tm_loop(m, c0, k);
        EvalOutcome r = machine_eval(apply(loop, {c0_term, reg.encode(SrcType::adt("nat"), values::nat(k))}), budget);
        bool agree = false;
        if (!r.exhausted()) {
            auto v = reg.decode(SrcType::adt("option", {SrcType::adt("config")}), *r.normal);
            agree = v && (v->ctor == 1 ? !native : native && value_config(v->args[0]) == *native);
        }
        all_agree = all_agree && agree;
        std::cout << k << "\t" << (native ? "halt" : "run") << "\t" << (r.exhausted() ? "budget" : std::to_string(r.steps))
                  << "\t" << (agree ? "yes" : "no") << "\n";
    }
    EvalOutcome h = machine_eval(tm_halting_reduction(env, p, c0), budget);
    if (h.exhausted()) {
        std::cout << "halting=budget steps=" << h.steps << "\n";
    } else {
        auto k = reg.decode(SrcType::adt("nat"), *h.normal);
        std::cout << "halting=normal steps=" << h.steps << " witness=" << (k ? std::to_string(*values::as_nat(*k)) : "?")
                  << "\n";
    }
    if (!all_agree) return exit_fail;
    return h.exhausted() ? exit_inconclusive : exit_pass;
}

void add_common(CLI::App* sub, Common& c, bool with_def_required) {
    sub->add_option("program", c.program, "Source program appended to the standard library");
    auto* d = sub->add_option("--def", c.def, "Definition name");
    if (with_def_required) d->required();
    sub->add_option("--at", c.at, "Type arguments, e.g. \"nat bool\"");
    sub->add_option("--seed", c.seed, "Sampler seed");
    sub->add_option("--budget", c.budget, "Step budget per application (default $LCERT_BUDGET or 10^7)");
    sub->add_option("--with", c.with, "Definitions passed as functional arguments");
}

} // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Certifying extraction toolchain for the weak call-by-value lambda calculus L"};
    app.require_subcommand(1);

    std::string term_text, term_file, evaluator = "machine", out, style = "lambda", time, grid, fit, instance, tm_file;
    std::uint64_t budget = 0, n = 0, max_k = 40, levels = 5, max_nat = 0;
    std::size_t samples = 200;
    bool steps = false, exact = false, table = false;
    Common common;

    auto* run = app.add_subcommand("run", "Evaluate a closed term");
    run->add_option("term", term_text, "Term in de Bruijn syntax");
    run->add_option("--file", term_file, "Read the term from a file");
    run->add_option("--budget", budget, "Step budget");
    run->add_flag("--steps", steps, "Print the number of beta steps");
    run->add_option("--evaluator", evaluator, "machine or substitution")->check(CLI::IsMember({"machine", "substitution"}));

    auto* extract = app.add_subcommand("extract", "Extract one definition or the whole dictionary");
    add_common(extract, common, false);
    extract->add_option("--out", out, "Write to a file instead of stdout");
    extract->add_option("--style", style, "lambda, debruijn or named")->check(CLI::IsMember({"lambda", "debruijn", "named"}));

    auto* check = app.add_subcommand("check", "Check that an extracted term computes its definition");
    add_common(check, common, true);
    check->add_option("--time", time, "BOUNDSPEC, e.g. \"1;3\" or \"5; 15*min(x,y)+8\"");
    check->add_flag("--exact", exact, "Demand the bound exactly");
    check->add_option("--samples", samples, "Sample count");
    check->add_option("--max-nat", max_nat, "Sample naturals from 0..N-1 only");
    check->add_flag("--table", table, "Print the per-sample table");

    auto* bench = app.add_subcommand("bench", "Step table over a grid of argument sizes");
    add_common(bench, common, true);
    bench->add_option("--grid", grid, "Sizes per data argument, e.g. 20x20")->required();
    bench->add_option("--fit", fit, "Feature expression to fit steps against, e.g. \"min(x,y)\"");

    auto* universal = app.add_subcommand("universal", "Run the universal term on a closed term");
    universal->add_option("--n", n, "Fuel")->required();
    universal->add_option("--term", term_text, "Term or file")->required();
    universal->add_option("--budget", budget, "Step budget");

    auto* h10 = app.add_subcommand("h10", "Run the H10 reduction term on an instance");
    h10->add_option("instance", instance, "(h10 POLY POLY) or a file holding it")->required();
    h10->add_option("--budget", budget, "Step budget");
    h10->add_option("--levels", levels, "Enumerator levels searched natively for the witness");

    auto* tm = app.add_subcommand("tm", "Compare extracted and native machine runs");
    tm->add_option("machine", tm_file, "Machine file")->required();
    tm->add_option("--k", max_k, "Largest step count");
    tm->add_option("--budget", budget, "Step budget");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_pass : exit_usage;
    }

    try {
        std::uint64_t b = budget ? budget : common.budget ? common.budget : default_budget();
        common.budget = b;
        if (*run) {
            if (term_text.empty() && term_file.empty()) throw ParseError("run needs a term or --file", 1, 1);
            return cmd_run(term_text, term_file, b, steps, evaluator);
        }
        if (*extract) return cmd_extract(common, out, style);
        if (*check) return cmd_check(common, time, exact, samples, max_nat, table);
        if (*bench) return cmd_bench(common, grid, fit);
        if (*universal) return cmd_universal(n, term_text, b);
        if (*h10) return cmd_h10(instance, b, levels);
        if (*tm) return cmd_tm(tm_file, max_k, b);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const TypeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const GuardError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ExtractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_fail;
    }
    return exit_usage;
}

int main(int argc, char** argv) {
    int status = exit_usage;
    lcert::run_with_stack(lcert::big_stack, [&] { status = run_cli(argc, argv); });
    return status;
}
