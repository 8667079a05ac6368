#pragma once

#include "chain.hpp"

namespace mltk {

enum class CombKind : std::uint8_t { B, C, D, K, W, S, I };

inline char comb_letter(CombKind k) { return "BCDKWSI"[static_cast<int>(k)]; }

inline std::size_t comb_param_count(CombKind k) {
    switch (k) {
        case CombKind::I: return 1;
        case CombKind::K:
        case CombKind::W: return 2;
        default: return 3;
    }
}

struct CombinatorSpec {
    CombKind kind;
    std::vector<Type> type_params;
    std::optional<std::string> dardinal_const;

    friend bool operator==(const CombinatorSpec&, const CombinatorSpec&) = default;

    std::string str() const {
        std::string s(1, comb_letter(kind));
        s += "[";
        if (dardinal_const) s += *dardinal_const + ";";
        for (std::size_t i = 0; i < type_params.size(); ++i) s += (i ? "," : "") + type_params[i].str();
        return s + "]";
    }
};

inline CombinatorSpec comb_I(Type a) { return {CombKind::I, {a}, std::nullopt}; }
inline CombinatorSpec comb_K(Type a, Type b) { return {CombKind::K, {a, b}, std::nullopt}; }
inline CombinatorSpec comb_C(Type a, Type b, Type c) { return {CombKind::C, {a, b, c}, std::nullopt}; }
inline CombinatorSpec comb_D(const std::string& c, Type a, Type b, Type r) { return {CombKind::D, {a, b, r}, c}; }
inline CombinatorSpec comb_W(Type a, Type b) { return {CombKind::W, {a, b}, std::nullopt}; }
inline CombinatorSpec comb_B(Type a, Type b, Type c) { return {CombKind::B, {a, b, c}, std::nullopt}; }
inline CombinatorSpec comb_S(Type a, Type b, Type c) { return {CombKind::S, {a, b, c}, std::nullopt}; }

inline void check_side_conditions(const CombinatorSpec& s, const Parameter& p, const Signature& sig) {
    auto fail = [&](const std::string& clause) {
        throw Error(ErrorKind::SideConditionViolated, s.str() + ": " + clause);
    };
    if (s.type_params.size() != comb_param_count(s.kind)) fail("wrong number of type parameters");
    for (const auto& t : s.type_params)
        if (!t.is_modal()) fail("type parameter " + t.str() + " is not a type");
    if (s.kind != CombKind::D && s.dardinal_const) fail("only the Dardinal carries a constant");
    const auto& tp = s.type_params;
    switch (s.kind) {
        case CombKind::I:
            if (!tp[0].is_regular()) fail("identity requires a regular type");
            break;
        case CombKind::K:
            if (!tp[0].is_regular()) fail("kestrel requires its first type to be regular");
            break;
        case CombKind::C:
            if (!tp[2].is_regular()) fail("cardinal requires its third type to be regular");
            if (tp[0] == tp[1]) {
                Budget b = p.budget(tp[0]);
                if (!b.is_omega() && b.count() <= 1)
                    fail("cardinal over identical types needs a budget above 1 for " + tp[0].str());
            }
            break;
        case CombKind::D: {
            if (!tp[2].is_regular()) fail("dardinal requires its third type to be regular");
            if (!tp[1].is_state()) fail("dardinal requires its second type to be a state type");
            if (!s.dardinal_const) fail("dardinal needs a constant");
            auto it = sig.find(*s.dardinal_const);
            if (it == sig.end()) fail("unknown constant " + *s.dardinal_const);
            if (!(it->second == tp[1])) fail("constant " + *s.dardinal_const + " does not have type " + tp[1].str());
            break;
        }
        case CombKind::W:
            if (!tp[1].is_regular()) fail("warbler requires its second type to be regular");
            break;
        case CombKind::B:
            if (!tp[1].is_regular() || !tp[2].is_regular()) fail("bluebird requires its second and third types to be regular");
            break;
        case CombKind::S:
            if (!tp[0].is_regular() || !tp[1].is_regular()) fail("starling requires its first and second types to be regular");
            break;
    }
}

inline Type combinator_type(const CombinatorSpec& s) {
    const auto& t = s.type_params;
    auto ar = [](Type a, Type b) { return Type::arrow(a, b); };
    switch (s.kind) {
        case CombKind::I: return ar(t[0], t[0]);
        case CombKind::K: return ar(t[0], ar(t[1], t[0]));
        case CombKind::C: return ar(ar(t[0], ar(t[1], t[2])), ar(t[1], ar(t[0], t[2])));
        case CombKind::D: return ar(ar(t[0], ar(t[1], t[2])), ar(t[0], t[2]));
        case CombKind::W: return ar(ar(t[0], ar(t[0], t[1])), ar(t[0], t[1]));
        case CombKind::B: return ar(ar(t[1], t[2]), ar(ar(t[0], t[1]), ar(t[0], t[2])));
        case CombKind::S: return ar(ar(t[2], ar(t[0], t[1])), ar(ar(t[2], t[0]), ar(t[2], t[1])));
    }
    return t[0];
}

// Types of the binders of the λ form, in order.
inline std::vector<Type> combinator_binder_types(const CombinatorSpec& s) {
    const auto& t = s.type_params;
    auto ar = [](Type a, Type b) { return Type::arrow(a, b); };
    switch (s.kind) {
        case CombKind::I: return {t[0]};
        case CombKind::K: return {t[0], t[1]};
        case CombKind::C: return {ar(t[0], ar(t[1], t[2])), t[1], t[0]};
        case CombKind::D: return {ar(t[0], ar(t[1], t[2])), t[0]};
        case CombKind::W: return {ar(t[0], ar(t[0], t[1])), t[0]};
        case CombKind::B: return {ar(t[1], t[2]), ar(t[0], t[1]), t[0]};
        case CombKind::S: return {ar(t[2], ar(t[0], t[1])), ar(t[2], t[0]), t[2]};
    }
    return {};
}

// Builds the λ form over the given binders (one per entry of
// combinator_binder_types).
inline LTerm combinator_body_over(const CombinatorSpec& s, const std::vector<Var>& xs) {
    auto v = [&](std::size_t i) { return LTerm::var(xs[i]); };
    auto ap = [](const LTerm& f, const LTerm& a) { return LTerm::app(f, a); };
    LTerm body;
    switch (s.kind) {
        case CombKind::I: body = v(0); break;
        case CombKind::K: body = v(0); break;
        case CombKind::C: body = ap(ap(v(0), v(2)), v(1)); break;
        case CombKind::D: body = ap(ap(v(0), v(1)), LTerm::constant(*s.dardinal_const, s.type_params[1])); break;
        case CombKind::W: body = ap(ap(v(0), v(1)), v(1)); break;
        case CombKind::B: body = ap(v(0), ap(v(1), v(2))); break;
        case CombKind::S: body = ap(ap(v(0), v(2)), ap(v(1), v(2))); break;
    }
    return LTerm::lams(xs, body);
}

// Lowest indices per type, pairwise distinct.
inline std::vector<Var> canonical_binders(const std::vector<Type>& types) {
    std::vector<Var> out;
    for (const auto& t : types) {
        std::uint32_t idx = 0;
        for (const auto& v : out)
            if (v.type == t) ++idx;
        out.push_back(Var{t, idx});
    }
    return out;
}

inline LTerm mk_lambda_combinator(const CombinatorSpec& s, const Parameter& p, const Signature& sig) {
    check_side_conditions(s, p, sig);
    auto xs = canonical_binders(combinator_binder_types(s));
    for (const auto& x : xs)
        if (!p.budget(x.type).admits(x.index))
            throw Error(ErrorKind::SideConditionViolated, s.str() + ": not enough variables of type " + x.type.str());
    return combinator_body_over(s, xs);
}

// ---------------------------------------------------------------------------
// Derived Starling and Identity

// The seven combinators of B(B(BW)C)(BB) for S_{A,B,C}, in the order
// B1, B2, B3, W4, C5, B6, B7.
inline std::vector<CombinatorSpec> starling_table(const Type& a, const Type& b, const Type& c) {
    auto ar = [](Type x, Type y) { return Type::arrow(x, y); };
    Type ca = ar(c, a), cb = ar(c, b);
    Type cab = ar(c, ar(a, b));
    Type c_ca_cb = ar(c, ar(ca, cb));
    Type ca_cb = ar(ca, cb);
    Type ca_c_cb = ar(ca, ar(c, cb));
    return {
        comb_B(cab, c_ca_cb, ca_cb),         // 1
        comb_B(c_ca_cb, ca_c_cb, ca_cb),     // 2
        comb_B(ca, ar(c, cb), cb),           // 3
        comb_W(c, b),                        // 4
        comb_C(c, ca, cb),                   // 5
        comb_B(c, ar(a, b), ca_cb),          // 6
        comb_B(c, a, b),                     // 7
    };
}

// Assembles B1 (B2 (B3 W4) C5) (B6 B7) from seven leaves.
template <class T, class App>
T assemble_starling(const std::vector<T>& x, App app) {
    return app(app(x[0], app(app(x[1], app(x[2], x[3])), x[4])), app(x[5], x[6]));
}

inline LTerm derive_starling(const Type& a, const Type& b, const Type& c, const Parameter& p, const Signature& sig) {
    if (!a.is_regular() || !b.is_regular())
        throw Error(ErrorKind::SideConditionViolated, "derived starling requires its first and second types to be regular");
    std::vector<LTerm> leaves;
    for (const auto& s : starling_table(a, b, c)) leaves.push_back(mk_lambda_combinator(s, p, sig));
    return assemble_starling(leaves, [](const LTerm& f, const LTerm& x) { return LTerm::app(f, x); });
}

inline LTerm derive_identity(const Type& b, const Parameter& p, const Signature& sig) {
    if (!b.is_regular()) throw Error(ErrorKind::SideConditionViolated, "derived identity requires a regular type");
    Type bb = Type::arrow(b, b);
    LTerm s = derive_starling(bb, b, b, p, sig);
    return LTerm::app(LTerm::app(s, mk_lambda_combinator(comb_K(b, bb), p, sig)), mk_lambda_combinator(comb_K(b, b), p, sig));
}

// ---------------------------------------------------------------------------
// Behaviour

// The number of arguments the behaviour rule consumes.
inline std::size_t behaviour_arity(CombKind k) {
    switch (k) {
        case CombKind::I: return 1;
        case CombKind::K:
        case CombKind::D:
        case CombKind::W: return 2;
        default: return 3;
    }
}

inline std::vector<Type> behaviour_arg_types(const CombinatorSpec& s) {
    auto bt = combinator_binder_types(s);
    bt.resize(behaviour_arity(s.kind));
    return bt;
}

// The right-hand side of the behaviour rule for arguments P, Q, R.
inline LTerm behaviour_result(const CombinatorSpec& s, const std::vector<LTerm>& a) {
    auto ap = [](const LTerm& f, const LTerm& x) { return LTerm::app(f, x); };
    switch (s.kind) {
        case CombKind::I: return a[0];
        case CombKind::K: return a[0];
        case CombKind::C: return ap(ap(a[0], a[2]), a[1]);
        case CombKind::D: return ap(ap(a[0], a[1]), LTerm::constant(*s.dardinal_const, s.type_params[1]));
        case CombKind::W: return ap(ap(a[0], a[1]), a[1]);
        case CombKind::B: return ap(a[0], ap(a[1], a[2]));
        case CombKind::S: return ap(ap(a[0], a[2]), ap(a[1], a[2]));
    }
    return a[0];
}

// Free variables to serve as the arguments P, Q, R. Regular slots get
// distinct high indices; state slots cycle through the available indices.
inline std::vector<LTerm> generic_args(const CombinatorSpec& s, const Parameter& p) {
    std::vector<LTerm> out;
    std::map<Type, std::uint32_t> used;
    for (const auto& t : behaviour_arg_types(s)) {
        std::uint32_t k = used[t]++;
        std::uint32_t idx;
        if (t.is_state()) {
            Budget b = p.budget(t);
            idx = b.is_omega() ? k : k % b.count();
        } else {
            idx = 7 + k;
        }
        out.push_back(LTerm::var(Var{t, idx}));
    }
    return out;
}

namespace detail {
// Every α-variant of a combinator's λ form obtained by choosing state binder
// indices (within budget, at most `cap` choices), keeping binders distinct.
inline std::vector<LTerm> state_binder_variants(const CombinatorSpec& s, const Parameter& p, std::uint32_t cap = 3) {
    auto types = combinator_binder_types(s);
    auto base = canonical_binders(types);
    std::vector<LTerm> out;
    std::vector<Var> cur = base;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == types.size()) {
            out.push_back(combinator_body_over(s, cur));
            return;
        }
        if (!types[i].is_state()) {
            go(i + 1);
            return;
        }
        Budget b = p.budget(types[i]);
        std::uint32_t n = b.is_omega() ? cap : std::min(cap, b.count());
        for (std::uint32_t idx = 0; idx < n; ++idx) {
            bool clash = false;
            for (std::size_t j = 0; j < i; ++j)
                if (cur[j].type == types[i] && cur[j].index == idx) clash = true;
            if (clash) continue;
            cur[i].index = idx;
            go(i + 1);
        }
        cur[i] = base[i];
    };
    go(0);
    return out;
}
}  // namespace detail

// A chain of regular β steps of distance at most 2 from the combinator applied
// to `args` to its behaviour result. The chain may open with α steps that pick
// a suitable representative of the combinator.
inline Trace verify_combinator_behaviour(const CombinatorSpec& s, const std::vector<LTerm>& args, const Parameter& p,
                                         const Signature& sig) {
    LTerm canonical = mk_lambda_combinator(s, p, sig);
    auto want = behaviour_arg_types(s);
    if (args.size() != want.size()) throw Error(ErrorKind::TraceFailure, "wrong number of arguments for " + s.str());
    for (std::size_t i = 0; i < args.size(); ++i)
        if (!(args[i].type() == want[i])) throw Error(ErrorKind::IllTypedApplication, "argument type mismatch for " + s.str());
    LTerm start = LTerm::app(canonical, args);
    LTerm target = behaviour_result(s, args);
    ChainSearchOptions opt;
    opt.mode = ReductionMode::BetaR;
    opt.max_distance = 2;
    opt.max_depth = 12;
    opt.max_nodes = 5000;
    auto goal = [&](const LTerm& t) { return t == target; };
    for (const auto& variant : detail::state_binder_variants(s, p)) {
        std::vector<TraceStep> steps;
        if (!(variant == canonical)) steps.push_back(alpha_step(Path(args.size(), kFun), variant));
        LTerm from = LTerm::app(variant, args);
        if (auto found = search_chain(from, goal, opt)) {
            steps.insert(steps.end(), found->begin(), found->end());
            return replay(start, steps);
        }
    }
    throw Error(ErrorKind::TraceFailure, "no regular chain of distance at most 2 for " + s.str() + " applied to arguments");
}

// C_{A,B,C} P c reduces to D^c_{A,B,C} P by one β step of distance 1.
inline Trace verify_cardinal_to_dardinal(const Type& a, const Type& b, const Type& c, const std::string& cname,
                                         const LTerm& p_arg, const Parameter& p, const Signature& sig) {
    LTerm card = mk_lambda_combinator(comb_C(a, b, c), p, sig);
    LTerm dard = mk_lambda_combinator(comb_D(cname, a, b, c), p, sig);
    LTerm start = LTerm::app(LTerm::app(card, p_arg), LTerm::constant(cname, sig.at(cname)));
    LTerm target = LTerm::app(dard, p_arg);
    ChainSearchOptions opt;
    opt.max_depth = 4;
    auto found = bfs_chain(start, target, opt);
    if (!found) throw Error(ErrorKind::TraceFailure, "cardinal does not reduce to the dardinal");
    return replay(start, *found);
}

}  // namespace mltk
