#include "lcert/interp.hpp"

#include "lcert/error.hpp"

namespace lcert {

namespace {

Rt make(RtValue v) { return std::make_shared<const RtValue>(std::move(v)); }

RtEnvPtr push(Rt v, RtEnvPtr env) { return std::make_shared<const RtEnv>(RtEnv{std::move(v), std::move(env)}); }

const Rt& lookup(const RtEnvPtr& env, std::uint64_t i) {
    const RtEnv* at = env.get();
    for (; i > 0 && at; --i) at = at->next.get();
    if (!at) throw Error("interp: unbound variable");
    return at->value;
}

} // namespace

Interpreter::Interpreter(const SourceProgram& program, std::uint64_t fuel) : program_(program), fuel_(fuel) {}

Rt Interpreter::definition(const std::string& name) {
    auto it = defs_.find(name);
    if (it != defs_.end()) return it->second;
    const Def* d = program_.find_def(name);
    if (!d) throw Error("interp: unknown definition " + name);
    Rt v = eval(d->body, nullptr);
    defs_.emplace(name, v);
    return v;
}

Rt Interpreter::eval(const SrcExpr& e, const RtEnvPtr& env) {
    using K = SrcExpr::Kind;
    switch (e.kind) {
    case K::var:
        return lookup(env, e.index);
    case K::lam: {
        RtValue v;
        v.kind = RtValue::Kind::closure;
        v.code = &e;
        v.env = env;
        return make(std::move(v));
    }
    case K::fix: {
        RtValue v;
        v.kind = RtValue::Kind::fix;
        v.code = &e;
        v.env = env;
        return make(std::move(v));
    }
    case K::app: {
        Rt f = eval(e.kids[0], env);
        Rt a = eval(e.kids[1], env);
        return apply(f, a);
    }
    case K::ctor: {
        const AdtDef* adt = program_.find_adt(e.name);
        if (!adt) throw Error("interp: unknown datatype " + e.name);
        RtValue v;
        v.ctor = static_cast<std::uint32_t>(e.ctor);
        v.arity = adt->ctors.at(e.ctor).fields.size();
        v.kind = v.arity == 0 ? RtValue::Kind::data : RtValue::Kind::ctor;
        return make(std::move(v));
    }
    case K::cref:
        return definition(e.name);
    case K::match: {
        Rt d = eval(e.kids[0], env);
        if (d->kind != RtValue::Kind::data) throw Error("interp: match on a non-constructor value at " + e.where());
        if (d->ctor >= e.arities.size() || d->args.size() != e.arities[d->ctor])
            throw Error("interp: constructor does not fit match at " + e.where());
        RtEnvPtr inner = env;
        for (const auto& field : d->args) inner = push(field, inner);
        return eval(e.kids[d->ctor + 1], inner);
    }
    }
    throw Error("interp: unreachable");
}

Rt Interpreter::apply(const Rt& f, const Rt& a) {
    if (++used_ > fuel_) throw Error("interp: fuel exhausted; program is not total");
    switch (f->kind) {
    case RtValue::Kind::closure:
        return eval(f->code->kids[0], push(a, f->env));
    case RtValue::Kind::fix: {
        Rt body = eval(f->code->kids[0], push(f, f->env));
        return apply(body, a);
    }
    case RtValue::Kind::ctor: {
        RtValue v = *f;
        v.args.push_back(a);
        if (v.args.size() == v.arity) v.kind = RtValue::Kind::data;
        return make(std::move(v));
    }
    case RtValue::Kind::data:
        break;
    }
    throw Error("interp: applying a constructor value");
}

Rt Interpreter::lift(const Value& v) {
    RtValue r;
    r.kind = RtValue::Kind::data;
    r.ctor = v.ctor;
    r.arity = v.args.size();
    for (const auto& x : v.args) r.args.push_back(lift(x));
    return make(std::move(r));
}

std::optional<Value> Interpreter::lower(const Rt& v) {
    if (v->kind != RtValue::Kind::data) return std::nullopt;
    Value out;
    out.ctor = v->ctor;
    for (const auto& x : v->args) {
        auto sub = lower(x);
        if (!sub) return std::nullopt;
        out.args.push_back(std::move(*sub));
    }
    return out;
}

Value Interpreter::call(const std::string& name, const std::vector<InterpArg>& args) {
    Rt f = definition(name);
    for (const auto& a : args) f = apply(f, a.value ? lift(*a.value) : definition(a.def));
    auto out = lower(f);
    if (!out) throw Error("interp: " + name + " did not produce a first-order value");
    return *out;
}

Value interp(const SourceProgram& program, const std::string& name, const std::vector<InterpArg>& args) {
    return Interpreter(program).call(name, args);
}

} // namespace lcert
