#include "lcert/verify.hpp"

#include "lcert/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>

namespace lcert {

TyDesc TyDesc::base(SrcType instance) {
    TyDesc t;
    t.instance_ = std::move(instance);
    return t;
}

TyDesc TyDesc::arrow(TyDesc dom, TyDesc cod) {
    TyDesc t;
    t.dom_ = std::make_shared<const TyDesc>(std::move(dom));
    t.cod_ = std::make_shared<const TyDesc>(std::move(cod));
    return t;
}

TyDesc TyDesc::of(const SrcType& t) {
    if (t.is_arrow()) return arrow(of(t.dom()), of(t.cod()));
    if (!t.is_adt() || !t.is_ground()) throw Error("no checkable type description for " + t.str());
    return base(t);
}

std::vector<TyDesc> TyDesc::arg_types() const {
    std::vector<TyDesc> out;
    const TyDesc* at = this;
    while (!at->is_base()) {
        out.push_back(at->dom());
        at = &at->cod();
    }
    return out;
}

std::string TyDesc::str() const {
    if (is_base()) return instance_.str();
    return "(-> " + dom().str() + " " + cod().str() + ")";
}

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::pass:
        return "pass";
    case Verdict::fail:
        return "fail";
    case Verdict::inconclusive:
        return "inconclusive";
    }
    return "?";
}

std::string CheckReport::line() const {
    return "CHECK " + name + " " + verdict_name(verdict) + " samples=" + std::to_string(samples) +
           " failures=" + std::to_string(failures);
}

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += sep;
        s += parts[i];
    }
    return s;
}

std::string join_numbers(const std::vector<std::uint64_t>& ns) {
    std::vector<std::string> parts;
    for (auto n : ns) parts.push_back(std::to_string(n));
    return join(parts, ",");
}

} // namespace

std::string CheckReport::table() const {
    std::string out = "inputs\tsteps\tbound\tverdict\n";
    for (const auto& r : rows) {
        out += join(r.inputs, " ") + "\t" + join_numbers(r.steps) + "\t" + (r.bound.empty() ? "-" : join_numbers(r.bound)) +
               "\t" + verdict_name(r.verdict);
        if (!r.note.empty()) out += "\t" + r.note;
        out += "\n";
    }
    return out;
}

void CheckReport::add(ReportRow row) {
    ++samples;
    if (row.verdict == Verdict::fail) {
        ++failures;
        if (!witness) witness = row;
        verdict = Verdict::fail;
    } else if (row.verdict == Verdict::inconclusive) {
        ++inconclusive;
        if (verdict == Verdict::pass) verdict = Verdict::inconclusive;
    }
    rows.push_back(std::move(row));
}

// ---------------------------------------------------------------------------
// sampling

Sampler::Sampler(const Registry& registry, SamplerConfig config)
    : registry_(registry), config_(std::move(config)), rng_(config_.seed) {
    if (config_.nats.empty()) {
        for (std::uint64_t n = 0; n < 25; ++n) config_.nats.push_back(n);
        std::uniform_int_distribution<std::uint64_t> big(25, 200);
        for (int i = 0; i < 3; ++i) config_.nats.push_back(big(rng_));
    }
}

void Sampler::override(const SrcType& t, std::function<Value(std::mt19937_64&)> gen) {
    overrides_.emplace_back(t.str(), std::move(gen));
}

Value Sampler::value(const SrcType& t) { return value(t, config_.max_depth); }

Value Sampler::value(const SrcType& t, std::size_t depth) {
    std::string key = t.str();
    for (const auto& [k, gen] : overrides_)
        if (k == key) return gen(rng_);
    if (key == "nat") {
        std::uniform_int_distribution<std::size_t> pick(0, config_.nats.size() - 1);
        return values::nat(config_.nats[pick(rng_)]);
    }
    if (!t.is_adt()) throw Error("cannot sample values of type " + key);
    const AdtDef& def = registry_.adt(t.name());
    if (t.name() == "list" && def.ctors.size() == 2) {
        std::uniform_int_distribution<std::size_t> len(0, config_.max_list);
        std::vector<Value> elems;
        for (std::size_t n = len(rng_); n > 0; --n) elems.push_back(value(t.args().at(0), depth));
        return values::list(std::move(elems));
    }
    std::vector<std::size_t> choices;
    for (std::size_t i = 0; i < def.ctors.size(); ++i) {
        auto fields = def.fields_at(t, i);
        bool recursive = std::any_of(fields.begin(), fields.end(), [&](const SrcType& f) { return f == t; });
        if (depth > 0 || !recursive) choices.push_back(i);
    }
    if (choices.empty())
        for (std::size_t i = 0; i < def.ctors.size(); ++i) choices.push_back(i);
    std::uniform_int_distribution<std::size_t> pick(0, choices.size() - 1);
    std::size_t c = choices[pick(rng_)];
    Value v;
    v.ctor = static_cast<std::uint32_t>(c);
    for (const auto& f : def.fields_at(t, c)) v.args.push_back(value(f, f == t ? depth - (depth > 0) : depth));
    return v;
}

std::optional<std::vector<Value>> Sampler::enumerate(const SrcType& t, std::size_t limit) const {
    if (!t.is_adt()) return std::nullopt;
    const AdtDef& def = registry_.adt(t.name());
    std::vector<Value> out;
    for (std::size_t i = 0; i < def.ctors.size(); ++i) {
        std::vector<Value> partial{Value{static_cast<std::uint32_t>(i), {}}};
        for (const auto& f : def.fields_at(t, i)) {
            if (f == t) return std::nullopt;
            auto sub = enumerate(f, limit);
            if (!sub) return std::nullopt;
            std::vector<Value> next;
            for (const auto& p : partial)
                for (const auto& s : *sub) {
                    Value v = p;
                    v.args.push_back(s);
                    next.push_back(std::move(v));
                    if (next.size() > limit) return std::nullopt;
                }
            partial = std::move(next);
        }
        out.insert(out.end(), partial.begin(), partial.end());
        if (out.size() > limit) return std::nullopt;
    }
    return out;
}

std::vector<std::vector<Value>> Sampler::tuples(const std::vector<SrcType>& doms) {
    if (config_.exhaustive_when_small) {
        std::vector<std::vector<Value>> all{{}};
        bool finite = true;
        for (const auto& d : doms) {
            auto vals = enumerate(d, config_.samples);
            if (!vals) {
                finite = false;
                break;
            }
            std::vector<std::vector<Value>> next;
            for (const auto& prefix : all)
                for (const auto& v : *vals) {
                    auto t = prefix;
                    t.push_back(v);
                    next.push_back(std::move(t));
                }
            all = std::move(next);
            if (all.size() > config_.samples) {
                finite = false;
                break;
            }
        }
        if (finite) return all;
    }
    std::vector<std::vector<Value>> out;
    for (std::size_t i = 0; i < config_.samples; ++i) {
        std::vector<Value> t;
        for (const auto& d : doms) t.push_back(value(d));
        out.push_back(std::move(t));
    }
    return out;
}

std::string show_value(const Registry& registry, const SrcType& t, const Value& v) {
    if (t.str() == "nat") {
        if (auto n = values::as_nat(v)) return std::to_string(*n);
    }
    if (t.str() == "bool") {
        if (auto b = values::as_bool(v)) return *b ? "true" : "false";
    }
    if (t.is_adt() && t.name() == "list") {
        if (auto elems = values::as_list(v)) {
            std::vector<std::string> parts;
            for (const auto& e : *elems) parts.push_back(show_value(registry, t.args().at(0), e));
            return "[" + join(parts, ",") + "]";
        }
    }
    if (!t.is_adt() || !registry.declared(t.name())) return "?";
    const AdtDef& def = registry.adt(t.name());
    if (v.ctor >= def.ctors.size()) return "?";
    auto fields = def.fields_at(t, v.ctor);
    if (fields.empty() || fields.size() != v.args.size()) return def.ctors[v.ctor].name;
    std::string s = "(" + def.ctors[v.ctor].name;
    for (std::size_t i = 0; i < fields.size(); ++i) s += " " + show_value(registry, fields[i], v.args[i]);
    return s + ")";
}

Candidate value_candidate(const Registry& registry, const SrcType& t, const Value& v) {
    return Candidate{show_value(registry, t, v), Interpreter::lift(v), registry.encode(t, v), nullptr};
}

std::uint64_t feature_of(const Registry& registry, const SrcType& t, const Value& v) {
    (void)registry;
    if (t.str() == "nat") return *values::as_nat(v);
    if (t.str() == "bool") return *values::as_bool(v) ? 1 : 0;
    if (t.is_adt() && t.name() == "list") return values::as_list(v)->size();
    return v.size();
}

// ---------------------------------------------------------------------------
// checking

namespace {

struct Run {
    const Registry& registry;
    Interpreter& interp;
    const CheckOptions& options;
    bool timed;
};

ReportRow run_tuple(const Run& run, const TyDesc& ty, const Candidate& cand, const std::vector<Candidate>& args) {
    ReportRow row;
    for (const auto& a : args) row.inputs.push_back(a.name);
    Rt ref = cand.reference;
    Term term = cand.term;
    std::shared_ptr<const TimeBound> bound = cand.bound;
    const TyDesc* at = &ty;
    if (run.timed && !bound) throw Error("timed check of " + cand.name + " without a bound");
    for (const auto& a : args) {
        if (at->is_base()) throw Error("too many arguments for " + cand.name);
        EvalOutcome out = evaluate(run.options.evaluator, Term::app(term, a.term), run.options.budget);
        if (out.exhausted()) {
            row.verdict = Verdict::inconclusive;
            row.note = "budget of " + std::to_string(run.options.budget) + " steps exhausted";
            row.steps.push_back(out.steps);
            return row;
        }
        row.steps.push_back(out.steps);
        term = *out.normal;
        if (ref) ref = run.interp.apply(ref, a.reference);
        if (run.timed) {
            if (bound->is_unit()) throw Error("bound of " + cand.name + " ends before its arguments do");
            auto [n, rest] = bound->step(a);
            row.bound.push_back(n);
            bool ok = run.options.exact_time ? out.steps == n : out.steps <= n;
            if (!ok && row.verdict == Verdict::pass) {
                row.verdict = Verdict::fail;
                row.note = "application " + std::to_string(row.steps.size()) + " took " + std::to_string(out.steps) +
                           " steps, bound " + std::to_string(n);
            }
            bound = std::make_shared<const TimeBound>(std::move(rest));
        }
        at = &at->cod();
    }
    if (!is_proc(term)) {
        row.verdict = Verdict::fail;
        row.note = "result is not a procedure";
        return row;
    }
    if (ref && at->is_base()) {
        auto expected = Interpreter::lower(ref);
        if (!expected) throw Error("reference of " + cand.name + " did not produce data");
        Term want = run.registry.encode(at->instance(), *expected);
        if (term != want) {
            row.verdict = Verdict::fail;
            auto got = run.registry.decode(at->instance(), term);
            row.note = "expected " + show_value(run.registry, at->instance(), *expected) + ", got " +
                       (got ? show_value(run.registry, at->instance(), *got) : print_term(term));
        }
    }
    return row;
}

std::vector<std::vector<Candidate>> sample_arguments(const Registry& registry, const TyDesc& ty, Sampler& sampler,
                                                     const std::vector<PoolEntry>& pool) {
    auto doms = ty.arg_types();
    std::vector<SrcType> bases;
    std::vector<std::size_t> base_pos;
    for (std::size_t i = 0; i < doms.size(); ++i)
        if (doms[i].is_base()) {
            bases.push_back(doms[i].instance());
            base_pos.push_back(i);
        }
    std::vector<std::vector<Candidate>> out;
    for (const auto& values : sampler.tuples(bases)) {
        std::vector<Candidate> args(doms.size());
        for (std::size_t k = 0; k < base_pos.size(); ++k)
            args[base_pos[k]] = value_candidate(registry, bases[k], values[k]);
        for (std::size_t i = 0; i < doms.size(); ++i) {
            if (doms[i].is_base()) continue;
            std::vector<const PoolEntry*> fits;
            for (const auto& p : pool)
                if (p.type.str() == doms[i].str()) fits.push_back(&p);
            if (fits.empty()) throw Error("no verified function of type " + doms[i].str() + " in the pool");
            std::uniform_int_distribution<std::size_t> pick(0, fits.size() - 1);
            args[i] = fits[pick(sampler.rng())]->candidate;
        }
        out.push_back(std::move(args));
    }
    return out;
}

CheckReport check(const Registry& registry, Interpreter& interp, const TyDesc& ty, const Candidate& cand,
                  Sampler& sampler, const std::vector<PoolEntry>& pool, const CheckOptions& options, bool timed) {
    CheckReport report;
    report.name = cand.name;
    Run run{registry, interp, options, timed};
    if (ty.is_base()) {
        // encodings are normal: no evaluation at a base type
        ReportRow row;
        auto v = Interpreter::lower(cand.reference);
        if (!v) throw Error("reference of " + cand.name + " is not data");
        if (cand.term != registry.encode(ty.instance(), *v)) {
            row.verdict = Verdict::fail;
            row.note = "term is not the encoding of " + show_value(registry, ty.instance(), *v);
        }
        report.add(std::move(row));
        return report;
    }
    for (const auto& args : sample_arguments(registry, ty, sampler, pool)) report.add(run_tuple(run, ty, cand, args));
    return report;
}

} // namespace

CheckReport check_computes(const Registry& registry, Interpreter& interp, const TyDesc& ty, const Candidate& cand,
                           Sampler& sampler, const std::vector<PoolEntry>& pool, const CheckOptions& options) {
    return check(registry, interp, ty, cand, sampler, pool, options, false);
}

CheckReport check_computes_time(const Registry& registry, Interpreter& interp, const TyDesc& ty,
                                const Candidate& cand, Sampler& sampler, const std::vector<PoolEntry>& pool,
                                const CheckOptions& options) {
    return check(registry, interp, ty, cand, sampler, pool, options, true);
}

CheckReport measure_steps(const Registry& registry, Interpreter& interp, const TyDesc& ty, const Candidate& cand,
                          const std::vector<std::vector<Candidate>>& tuples, const CheckOptions& options) {
    CheckReport report;
    report.name = cand.name;
    Run run{registry, interp, options, false};
    for (const auto& args : tuples) report.add(run_tuple(run, ty, cand, args));
    return report;
}

AffineFit fit_affine(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw Error("fit_affine: size mismatch");
    std::vector<double> distinct = xs;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 2) throw Error("fit_affine: the feature takes fewer than two distinct values");

    auto spread = [&](double a) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double r = ys[i] - a * xs[i];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        return std::make_pair(lo, hi);
    };
    // the max residual is convex and piecewise linear in the slope, with
    // breakpoints among the slopes through pairs of points
    std::vector<double> slopes{0.0};
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j)
            if (xs[i] != xs[j]) slopes.push_back((ys[j] - ys[i]) / (xs[j] - xs[i]));
    std::sort(slopes.begin(), slopes.end());
    slopes.erase(std::unique(slopes.begin(), slopes.end()), slopes.end());
    AffineFit best;
    best.residual_max = std::numeric_limits<double>::infinity();
    for (double a : slopes) {
        auto [lo, hi] = spread(a);
        double r = (hi - lo) / 2;
        if (r < best.residual_max - 1e-12) best = {a, (hi + lo) / 2, r};
    }
    return best;
}

CheckReport check_extensional(const Registry& registry, Interpreter& interp, const std::string& name, const Rt& a,
                              const Rt& b, const TyDesc& ty, Sampler& sampler, const std::vector<PoolEntry>& pool) {
    CheckReport report;
    report.name = name;
    if (ty.is_base()) {
        ReportRow row;
        if (Interpreter::lower(a) != Interpreter::lower(b)) {
            row.verdict = Verdict::fail;
            row.note = "values differ";
        }
        report.add(std::move(row));
        return report;
    }
    const TyDesc* result = &ty;
    while (!result->is_base()) result = &result->cod();
    for (const auto& args : sample_arguments(registry, ty, sampler, pool)) {
        ReportRow row;
        Rt x = a, y = b;
        for (const auto& arg : args) {
            row.inputs.push_back(arg.name);
            x = interp.apply(x, arg.reference);
            y = interp.apply(y, arg.reference);
        }
        auto vx = Interpreter::lower(x), vy = Interpreter::lower(y);
        if (!vx || !vy || *vx != *vy) {
            row.verdict = Verdict::fail;
            row.note = (vx ? show_value(registry, result->instance(), *vx) : "?") + " vs " +
                       (vy ? show_value(registry, result->instance(), *vy) : "?");
        }
        report.add(std::move(row));
    }
    return report;
}

// ---------------------------------------------------------------------------
// bound expressions

namespace {

struct BoundExpr {
    enum class Op { num, input, add, sub, mul, min, max } op = Op::num;
    std::int64_t value = 0;
    std::vector<BoundExpr> kids;

    std::int64_t eval(const std::vector<std::int64_t>& inputs) const {
        switch (op) {
        case Op::num:
            return value;
        case Op::input:
            if (static_cast<std::size_t>(value) >= inputs.size())
                throw Error("bound refers to an argument that is not available yet");
            return inputs[value];
        case Op::add:
            return kids[0].eval(inputs) + kids[1].eval(inputs);
        case Op::sub:
            return kids[0].eval(inputs) - kids[1].eval(inputs);
        case Op::mul:
            return kids[0].eval(inputs) * kids[1].eval(inputs);
        case Op::min:
            return std::min(kids[0].eval(inputs), kids[1].eval(inputs));
        case Op::max:
            return std::max(kids[0].eval(inputs), kids[1].eval(inputs));
        }
        return 0;
    }
};

const std::vector<std::string> input_names = {"x", "y", "z", "w", "u", "v"};

class BoundParser {
  public:
    BoundParser(const std::string& text, std::size_t offset) : text_(text), pos_(offset) {}

    BoundExpr parse() {
        BoundExpr e = sum();
        skip();
        if (pos_ < text_.size()) fail("unexpected character");
        return e;
    }

  private:
    const std::string& text_;
    std::size_t pos_;

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, 1, pos_ + 1); }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static BoundExpr bin(BoundExpr::Op op, BoundExpr a, BoundExpr b) {
        BoundExpr e;
        e.op = op;
        e.kids = {std::move(a), std::move(b)};
        return e;
    }

    BoundExpr sum() {
        BoundExpr e = product();
        for (;;) {
            if (eat('+'))
                e = bin(BoundExpr::Op::add, std::move(e), product());
            else if (eat('-'))
                e = bin(BoundExpr::Op::sub, std::move(e), product());
            else
                return e;
        }
    }

    BoundExpr product() {
        BoundExpr e = atom();
        while (eat('*')) e = bin(BoundExpr::Op::mul, std::move(e), atom());
        return e;
    }

    BoundExpr atom() {
        skip();
        if (eat('(')) {
            BoundExpr e = sum();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ - start > 15) fail("number too large");
            BoundExpr e;
            e.value = std::stoll(text_.substr(start, pos_ - start));
            return e;
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        if (name.empty()) fail("expected a number, an argument name or min/max");
        if (name == "min" || name == "max") {
            if (!eat('(')) fail("expected '(' after " + name);
            BoundExpr a = sum();
            if (!eat(',')) fail("expected ','");
            BoundExpr b = sum();
            if (!eat(')')) fail("expected ')'");
            return bin(name == "min" ? BoundExpr::Op::min : BoundExpr::Op::max, std::move(a), std::move(b));
        }
        auto it = std::find(input_names.begin(), input_names.end(), name);
        if (it == input_names.end()) {
            pos_ = start;
            fail("unknown name " + name);
        }
        BoundExpr e;
        e.op = BoundExpr::Op::input;
        e.value = it - input_names.begin();
        return e;
    }
};

TimeBound bound_from(std::shared_ptr<const std::vector<BoundExpr>> exprs, std::size_t index,
                     std::vector<std::int64_t> inputs, const Registry* registry, std::vector<TyDesc> doms) {
    if (index >= exprs->size()) return {};
    TimeBound b;
    b.step = [=](const Candidate& arg) {
        auto next = inputs;
        std::int64_t f = 0;
        if (doms.at(index).is_base()) {
            auto v = Interpreter::lower(arg.reference);
            if (v) f = static_cast<std::int64_t>(feature_of(*registry, doms[index].instance(), *v));
        }
        next.push_back(f);
        std::int64_t n = (*exprs)[index].eval(next);
        return std::make_pair(static_cast<std::uint64_t>(std::max<std::int64_t>(n, 0)),
                              bound_from(exprs, index + 1, next, registry, doms));
    };
    return b;
}

} // namespace

TimeBound parse_boundspec(const std::string& text, const Registry& registry, const TyDesc& ty) {
    auto exprs = std::make_shared<std::vector<BoundExpr>>();
    std::size_t start = 0;
    for (;;) {
        std::size_t end = text.find(';', start);
        std::string part = text.substr(0, end == std::string::npos ? text.size() : end);
        exprs->push_back(BoundParser(part, start).parse());
        if (end == std::string::npos) break;
        start = end + 1;
    }
    auto doms = ty.arg_types();
    if (exprs->size() != doms.size())
        throw ParseError("bound has " + std::to_string(exprs->size()) + " parts for " + std::to_string(doms.size()) +
                             " arguments",
                         1, 1);
    return bound_from(exprs, 0, {}, &registry, doms);
}

} // namespace lcert
