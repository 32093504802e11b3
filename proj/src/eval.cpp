#include "lcert/eval.hpp"

#include "lcert/error.hpp"

#include <algorithm>
#include <memory>
#include <unordered_map>
#include <unordered_set>
#include <variant>

namespace lcert {

std::vector<Term> step_succs(const Term& s) {
    std::vector<Term> out;
    if (!s.is_app()) return out;
    const Term& f = s.fn();
    const Term& a = s.arg();
    if (f.is_lam() && a.is_lam()) {
        out.push_back(subst(f.body(), 0, a));
        return out;
    }
    for (auto& t : step_succs(f)) out.push_back(Term::app(std::move(t), a));
    for (auto& t : step_succs(a)) out.push_back(Term::app(f, std::move(t)));
    return out;
}

EvalOutcome eval_cbv(const Term& s, std::uint64_t budget) {
    struct Frame {
        Term pending; // argument still to evaluate, or the evaluated function
        bool have_fn;
    };
    std::vector<Frame> stack;
    EvalOutcome out;
    Term code = s;
    for (;;) {
        while (code.is_app()) {
            stack.push_back({code.arg(), false});
            code = code.fn();
        }
        Term val = code;
        bool resumed = false;
        while (!stack.empty()) {
            Frame& top = stack.back();
            if (!top.have_fn) {
                code = std::move(top.pending);
                top.pending = val;
                top.have_fn = true;
                resumed = true;
                break;
            }
            Term fn = std::move(top.pending);
            stack.pop_back();
            if (fn.is_lam() && val.is_lam()) {
                if (out.steps == budget) return out;
                ++out.steps;
                code = subst(fn.body(), 0, val);
                resumed = true;
                break;
            }
            val = Term::app(std::move(fn), std::move(val));
        }
        if (!resumed) {
            out.normal = std::move(val);
            return out;
        }
    }
}

namespace {

struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;

struct Closure {
    Term lam;
    Env env;
};

struct EnvNode {
    Closure value;
    Env next;
};

class Readback {
  public:
    Term closure(const Closure& c) { return Term::lam(body(c.lam.body(), 1, c.env)); }

  private:
    std::unordered_map<const EnvNode*, Term> memo_;

    Term body(const Term& t, std::uint64_t depth, const Env& env) {
        if (t.free_bound() <= depth) return t;
        switch (t.kind()) {
        case TermKind::var: {
            std::uint64_t i = t.index() - depth;
            const EnvNode* node = env.get();
            for (; i > 0; --i) node = node->next.get();
            auto it = memo_.find(node);
            if (it != memo_.end()) return it->second;
            Term v = closure(node->value);
            memo_.emplace(node, v);
            return v;
        }
        case TermKind::app:
            return Term::app(body(t.fn(), depth, env), body(t.arg(), depth, env));
        case TermKind::lam:
            return Term::lam(body(t.body(), depth + 1, env));
        }
        return t;
    }
};

} // namespace

EvalOutcome machine_eval(const Term& s, std::uint64_t budget) {
    if (!closed(s)) throw Error("machine_eval: term is not closed");

    struct Frame {
        Term arg;
        Env env;
        Closure fn;
        bool have_fn;
    };
    std::vector<Frame> stack;
    EvalOutcome out;
    Term code = s;
    Env env;
    for (;;) {
        Closure val;
        for (;;) {
            if (code.is_app()) {
                stack.push_back({code.arg(), env, {}, false});
                code = code.fn();
            } else if (code.is_lam()) {
                val = {std::move(code), std::move(env)};
                break;
            } else {
                const EnvNode* node = env.get();
                for (std::uint64_t i = code.index(); i > 0; --i) node = node->next.get();
                val = node->value;
                break;
            }
        }
        if (stack.empty()) {
            out.normal = Readback().closure(val);
            return out;
        }
        Frame& top = stack.back();
        if (!top.have_fn) {
            code = std::move(top.arg);
            env = std::move(top.env);
            top.fn = std::move(val);
            top.have_fn = true;
            continue;
        }
        Closure fn = std::move(top.fn);
        stack.pop_back();
        if (out.steps == budget) return out;
        ++out.steps;
        code = fn.lam.body();
        env = std::make_shared<const EnvNode>(EnvNode{std::move(val), std::move(fn.env)});
    }
}

EvalOutcome evaluate(Evaluator which, const Term& s, std::uint64_t budget) {
    return which == Evaluator::machine ? machine_eval(s, budget) : eval_cbv(s, budget);
}

std::optional<Term> eva(std::uint64_t n, const Term& u) {
    switch (u.kind()) {
    case TermKind::var:
        return std::nullopt;
    case TermKind::lam:
        return u;
    case TermKind::app: {
        if (n == 0) return std::nullopt;
        auto s = eva(n - 1, u.fn());
        auto t = eva(n - 1, u.arg());
        if (s && t && s->is_lam()) return eva(n - 1, subst(s->body(), 0, *t));
        return std::nullopt;
    }
    }
    return std::nullopt;
}

bool operator<(const Reached& a, const Reached& b) {
    if (a.length != b.length) return a.length < b.length;
    if (a.normal.size() != b.normal.size()) return a.normal.size() < b.normal.size();
    if (a.normal.hash() != b.normal.hash()) return a.normal.hash() < b.normal.hash();
    return print_term(a.normal) < print_term(b.normal);
}

std::vector<Reached> enumerate_reductions(const Term& s, std::uint64_t depth) {
    std::vector<Reached> found;
    std::unordered_set<Term, TermHash> frontier{s};
    for (std::uint64_t level = 0; level <= depth && !frontier.empty(); ++level) {
        std::unordered_set<Term, TermHash> next;
        for (const auto& t : frontier) {
            auto succs = step_succs(t);
            if (succs.empty()) {
                found.push_back({t, level});
            } else if (level < depth) {
                for (auto& u : succs) next.insert(std::move(u));
            }
        }
        frontier = std::move(next);
    }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    return found;
}

} // namespace lcert
