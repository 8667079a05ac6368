#pragma once

#include <mutex>

#include "cl.hpp"

namespace mltk {

inline CLTerm to_cl(const LTerm& m, const Parameter& p, const Signature& sig) {
    switch (m.tag()) {
        case LTerm::Tag::Var: return CLTerm::var(m.var());
        case LTerm::Tag::Const: return CLTerm::constant(m.name(), m.type());
        case LTerm::Tag::App: return CLTerm::app(to_cl(m.fun(), p, sig), to_cl(m.arg(), p, sig));
        case LTerm::Tag::Lam: return cl_bracket(m.binder(), to_cl(m.body(), p, sig), p, sig);
    }
    return CLTerm();
}

using CombinatorRealizer = std::function<LTerm(const CombinatorSpec&)>;

// Combinators become their λ forms; `realize` may override individual
// instances.
inline LTerm to_lambda(const CLTerm& m, const Parameter& p, const Signature& sig,
                       const CombinatorRealizer& realize = nullptr) {
    switch (m.tag()) {
        case CLTerm::Tag::Var: return LTerm::var(m.var());
        case CLTerm::Tag::Const: return LTerm::constant(m.name(), m.type());
        case CLTerm::Tag::Comb: return realize ? realize(m.spec()) : mk_lambda_combinator(m.spec(), p, sig);
        case CLTerm::Tag::App: return LTerm::app(to_lambda(m.fun(), p, sig, realize), to_lambda(m.arg(), p, sig, realize));
    }
    return LTerm();
}

inline bool roundtrip_check(const LTerm& m, const Parameter& p, const Signature& sig, std::size_t fuel = kDefaultFuel) {
    return decide_beta_eta_equal(to_lambda(to_cl(m, p, sig), p, sig), m, p, fuel);
}

inline bool check_beta_to_weak(const LTerm& m, const LTerm& n, const Parameter& p, const Signature& sig,
                               std::size_t fuel = kDefaultFuel) {
    return decide_weak_equal(to_cl(m, p, sig), to_cl(n, p, sig), fuel);
}

// Searches a regular β chain between the λ translations of the two ends of a
// single weak step. Small terms only.
inline std::optional<Trace> beta_chain_for_weak_step(const CLTerm& m, const CLTerm& n, const Parameter& p,
                                                     const Signature& sig, std::size_t max_depth = 8) {
    LTerm a = to_lambda(m, p, sig), b = to_lambda(n, p, sig);
    ChainSearchOptions opt;
    opt.mode = ReductionMode::BetaR;
    opt.max_depth = max_depth;
    opt.max_nodes = 200000;
    auto steps = bfs_chain(a, b, opt);
    if (!steps) return std::nullopt;
    return replay(a, *steps);
}

// ---------------------------------------------------------------------------
// Combinatorialization with a witnessing chain

struct Combinatorialization {
    CLTerm skeleton;  // the combinatory term whose λ translation is `term`
    LTerm term;
    Trace chain;  // from `term` to the input
};

namespace detail {

inline Var fresh_var(const Type& t, std::uint32_t& next) { return Var{t, next++}; }

// Chain from a closed derived combinator to a term α-congruent with `goal`,
// ending with an α step onto `goal` itself. Chains are memoized per goal
// shape because the same derived Starling recurs.
inline std::vector<TraceStep> closed_chain(const LTerm& from, const LTerm& goal) {
    static std::mutex mu;
    static std::map<std::string, std::vector<TraceStep>> memo;
    std::string key = alpha_key(from) + "=>" + alpha_key(goal);
    std::vector<TraceStep> steps;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = memo.find(key);
        if (it != memo.end()) steps = it->second;
    }
    if (steps.empty()) {
        ChainSearchOptions opt;
        opt.max_depth = 200;
        opt.max_nodes = 200000;
        auto found = search_chain(from, [&](const LTerm& t) { return alpha_congruent(t, goal); }, opt);
        if (!found) throw Error(ErrorKind::TraceFailure, "derived combinator does not reduce to its target");
        steps = *found;
        std::lock_guard<std::mutex> lock(mu);
        memo[key] = steps;
    }
    steps.push_back(alpha_step({}, goal));
    return steps;
}

class ChainBuilder {
public:
    ChainBuilder(const Parameter& p, const Signature& sig, std::uint32_t next) : p_(p), sig_(sig), next_(next) {}

    // From (M^cl)^λ to M.
    std::vector<TraceStep> term(const LTerm& m) {
        switch (m.tag()) {
            case LTerm::Tag::Var:
            case LTerm::Tag::Const: return {};
            case LTerm::Tag::App: {
                auto out = prefixed(term(m.fun()), {kFun});
                auto rhs = prefixed(term(m.arg()), {kArg});
                out.insert(out.end(), rhs.begin(), rhs.end());
                return out;
            }
            case LTerm::Tag::Lam: {
                CLTerm body = to_cl(m.body(), p_, sig_);
                auto out = abstraction(m.binder(), body);
                auto inner = prefixed(term(m.body()), {kBody});
                out.insert(out.end(), inner.begin(), inner.end());
                return out;
            }
        }
        return {};
    }

    // From ([v]X)^λ to λv.X^λ.
    std::vector<TraceStep> abstraction(const Var& v, const CLTerm& x) {
        const Type& a = v.type;
        const Type& b = x.type();
        std::vector<TraceStep> out;
        auto append = [&](std::vector<TraceStep> more) { out.insert(out.end(), more.begin(), more.end()); };
        if (!cl_occurs(v, x)) {
            Var k0 = fresh_var(b, next_);
            out.push_back(alpha_step({kFun}, LTerm::lams({k0, v}, LTerm::var(k0))));
            out.push_back(beta_step({}));
            return out;
        }
        if (x.is_var()) {
            LTerm ident = lambda(derive_cl_identity(a, p_, sig_));
            return closed_chain(ident, LTerm::lam(v, LTerm::var(v)));
        }
        const CLTerm& x0 = x.fun();
        const CLTerm& x1 = x.arg();
        const Type& c = x1.type();
        Var f = fresh_var(Type::arrow(a, Type::arrow(c, b)), next_);
        LTerm fv = LTerm::var(f), vv = LTerm::var(v);
        if (c.is_state()) {
            if (x1.is_var() && x1.var() == v) {
                append(prefixed(abstraction(v, x0), {kArg}));
                out.push_back(alpha_step({kFun}, LTerm::lams({f, v}, LTerm::app(LTerm::app(fv, vv), vv))));
                out.push_back(beta_step({}));
                out.push_back(beta_step({kBody, kFun}));
                return out;
            }
            if (x1.is_var()) {
                const Var& y = x1.var();
                append(prefixed(abstraction(v, x0), {kFun, kArg}));
                out.push_back(alpha_step({kFun, kFun}, LTerm::lams({f, y, v}, LTerm::app(LTerm::app(fv, vv), LTerm::var(y)))));
                out.push_back(beta_step({}));  // distance 1: y := y
                out.push_back(beta_step({}));
                out.push_back(beta_step({kBody, kFun}));
                return out;
            }
            LTerm cst = LTerm::constant(x1.name(), c);
            append(prefixed(abstraction(v, x0), {kArg}));
            out.push_back(alpha_step({kFun}, LTerm::lams({f, v}, LTerm::app(LTerm::app(fv, vv), cst))));
            out.push_back(beta_step({}));
            out.push_back(beta_step({kBody, kFun}));
            return out;
        }
        // Regular argument type: S_{C,B,A} ([v]X0) ([v]X1).
        append(prefixed(abstraction(v, x0), {kFun, kArg}));
        append(prefixed(abstraction(v, x1), {kArg}));
        Var g = fresh_var(Type::arrow(a, c), next_);
        LTerm gv = LTerm::var(g);
        LTerm starling = LTerm::lams({f, g, v}, LTerm::app(LTerm::app(fv, vv), LTerm::app(gv, vv)));
        LTerm derived = lambda(derive_cl_starling(c, b, a, p_, sig_));
        append(prefixed(closed_chain(derived, starling), {kFun, kFun}));
        out.push_back(beta_step({kFun}));
        out.push_back(beta_step({}));
        out.push_back(beta_step({kBody, kFun}));
        out.push_back(beta_step({kBody, kArg}));
        return out;
    }

private:
    LTerm lambda(const CLTerm& t) { return to_lambda(t, p_, sig_); }

    const Parameter& p_;
    const Signature& sig_;
    std::uint32_t next_;
};

}  // namespace detail

// A BCDKW-combinatorial term with the same free variables that β-reduces to
// `m`, together with the chain. The combinatorial term is the λ translation of
// the cl translation, so the case split is that of bracket abstraction.
inline Combinatorialization to_combinatorial(const LTerm& m, const Parameter& p, const Signature& sig) {
    Combinatorialization out;
    out.skeleton = to_cl(m, p, sig);
    out.term = to_lambda(out.skeleton, p, sig);
    // Fresh regular binders introduced by α steps sit above every index used
    // by the input or the combinatorial term.
    std::uint32_t next = std::max(max_index(m), max_index(out.term)) + 1;
    detail::ChainBuilder builder(p, sig, next);
    out.chain = replay(out.term, builder.term(m));
    if (!(out.chain.end() == m)) throw Error(ErrorKind::TraceFailure, "combinatorialization chain does not end at the input");
    return out;
}

// ---------------------------------------------------------------------------
// Expressibility

// The closed λ_υ term standing in for C_{B,B,C} when B has a single variable:
// λv:B→B→C. λv0:B. (λV:(B→C)→C. λv0:B. V (v v0)) (λU:B→C. U v0)
inline LTerm nice_cardinal_replacement(const Type& b, const Type& c) {
    Type bc = Type::arrow(b, c);
    Var v{Type::arrow(b, bc), 0};
    Var v0{b, 0};
    Var big_v{Type::arrow(bc, c), 0};
    Var u{bc, 0};
    LTerm inner = LTerm::lam(v0, LTerm::app(LTerm::var(big_v), LTerm::app(LTerm::var(v), LTerm::var(v0))));
    LTerm op = LTerm::lam(u, LTerm::app(LTerm::var(u), LTerm::var(v0)));
    return LTerm::lams({v, v0}, LTerm::app(LTerm::lam(big_v, inner), op));
}

inline bool cardinal_needs_replacement(const CombinatorSpec& s, const Parameter& p) {
    if (s.kind != CombKind::C) return false;
    const auto& t = s.type_params;
    if (!(t[0] == t[1]) || !t[0].is_state()) return false;
    Budget b = p.budget(t[0]);
    return !b.is_omega() && b.count() <= 1;
}

inline void require_legal_free_symbols(const LTerm& n, const Parameter& p, const Signature& sig) {
    for (const auto& v : free_vars(n)) {
        if (!v.type.is_modal()) throw Error(ErrorKind::IllegalFreeVariable, v.str() + " does not have a modal type");
        if (!p.budget(v.type).admits(v.index)) throw Error(ErrorKind::IllegalFreeVariable, v.str() + " exceeds its budget");
    }
    for (const auto& c : constants_of(n)) {
        auto it = sig.find(c);
        if (it == sig.end()) throw Error(ErrorKind::IllegalFreeVariable, "unknown constant " + c);
        if (!it->second.is_modal()) throw Error(ErrorKind::IllegalFreeVariable, "constant " + c + " does not have a modal type");
    }
}

// Compiles a λ_ω term into λ_υ: combinatorialize with unlimited variables,
// then realize each combinator in λ_υ, replacing the Cardinals that λ_υ lacks.
inline LTerm express_omega_to_upsilon(const LTerm& n, const Parameter& p, const Signature& sig) {
    require_legal_free_symbols(n, p, sig);
    Parameter omega = Parameter::omega();
    CLTerm skeleton = to_cl(n, omega, sig);
    LTerm out = to_lambda(skeleton, p, sig, [&](const CombinatorSpec& s) {
        if (cardinal_needs_replacement(s, p)) return nice_cardinal_replacement(s.type_params[0], s.type_params[2]);
        return mk_lambda_combinator(s, p, sig);
    });
    if (auto e = check_term(out, p, &sig))
        throw Error(ErrorKind::TraceFailure, std::string("compiled term is not in the target calculus: ") + e->what());
    return out;
}

// Compiles a term of the unrestricted calculus whose free symbols have modal
// types: its βη-normal form is a modal term.
inline LTerm express_lambda_to_mlt(const LTerm& n, std::size_t fuel = kDefaultFuel) {
    for (const auto& v : free_vars(n))
        if (!v.type.is_modal()) throw Error(ErrorKind::IllegalFreeVariable, v.str() + " does not have a modal type");
    std::function<void(const LTerm&)> consts = [&](const LTerm& t) {
        if (t.is_const() && !t.type().is_modal())
            throw Error(ErrorKind::IllegalFreeVariable, "constant " + t.name() + " does not have a modal type");
        if (t.is_app()) {
            consts(t.fun());
            consts(t.arg());
        } else if (t.is_lam()) {
            consts(t.body());
        }
    };
    consts(n);
    LTerm nf = normalize_full_lambda(n, fuel);
    if (auto e = check_term(nf, Parameter::omega()))
        throw Error(ErrorKind::NotMltTerm, std::string("normal form is not modal: ") + e->what());
    return nf;
}

}  // namespace mltk
