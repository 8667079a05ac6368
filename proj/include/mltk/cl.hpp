#pragma once

#include "combinators.hpp"

namespace mltk {

// Immutable term of typed combinatory logic over the combinators B, C, D, K, W.
class CLTerm {
public:
    enum class Tag : std::uint8_t { Var, Const, Comb, App };

    CLTerm() = default;

    static CLTerm var(const Var& v) {
        auto n = std::make_shared<Node>();
        n->tag = Tag::Var;
        n->var = v;
        n->type = v.type;
        n->size = 1;
        n->hash = VarHash()(v) * 0x9e3779b1u + 11;
        return CLTerm(n);
    }

    static CLTerm constant(const std::string& name, const Type& type) {
        auto n = std::make_shared<Node>();
        n->tag = Tag::Const;
        n->name = name;
        n->type = type;
        n->size = 1;
        n->hash = std::hash<std::string>()(name) * 31 + type.hash() + 12;
        return CLTerm(n);
    }

    // A primitive combinator; S and I are not primitive here (see
    // derive_cl_starling / derive_cl_identity).
    static CLTerm comb(const CombinatorSpec& s, const Parameter& p, const Signature& sig) {
        if (s.kind == CombKind::S || s.kind == CombKind::I)
            throw Error(ErrorKind::SideConditionViolated, "S and I are derived in combinatory logic");
        check_side_conditions(s, p, sig);
        return comb_unchecked(s);
    }

    // Builds a combinator whose side conditions the caller has established.
    static CLTerm comb_unchecked(const CombinatorSpec& s) {
        auto n = std::make_shared<Node>();
        n->tag = Tag::Comb;
        n->spec = s;
        n->type = combinator_type(s);
        n->size = 1;
        std::size_t h = static_cast<std::size_t>(s.kind) * 1315423911u + 13;
        for (const auto& t : s.type_params) h = h * 1000003 + t.hash();
        if (s.dardinal_const) h ^= std::hash<std::string>()(*s.dardinal_const);
        n->hash = h;
        return CLTerm(n);
    }

    static CLTerm app(const CLTerm& f, const CLTerm& a) {
        const Type& ft = f.type();
        if (!ft.is_arrow() || !(ft.domain() == a.type()))
            throw Error(ErrorKind::IllTypedApplication,
                        "cannot apply a term of type " + ft.str() + " to an argument of type " + a.type().str());
        auto n = std::make_shared<Node>();
        n->tag = Tag::App;
        n->left = f.node_;
        n->right = a.node_;
        n->type = ft.codomain();
        n->size = 1 + f.size() + a.size();
        n->hash = (f.hash() * 1000003) ^ (a.hash() + 0x7ed55d16);
        return CLTerm(n);
    }

    static CLTerm app(const CLTerm& f, const std::vector<CLTerm>& args) {
        CLTerm t = f;
        for (const auto& a : args) t = app(t, a);
        return t;
    }

    bool valid() const { return node_ != nullptr; }
    Tag tag() const { return node_->tag; }
    bool is_var() const { return tag() == Tag::Var; }
    bool is_const() const { return tag() == Tag::Const; }
    bool is_comb() const { return tag() == Tag::Comb; }
    bool is_app() const { return tag() == Tag::App; }
    bool is_atomic() const { return tag() != Tag::App; }

    const Type& type() const { return node_->type; }
    const Var& var() const { return node_->var; }
    const std::string& name() const { return node_->name; }
    const CombinatorSpec& spec() const { return node_->spec; }
    CLTerm fun() const { return CLTerm(node_->left); }
    CLTerm arg() const { return CLTerm(node_->right); }
    std::size_t size() const { return node_->size; }
    std::size_t hash() const { return node_->hash; }
    const void* id() const { return node_.get(); }

    friend bool operator==(const CLTerm& a, const CLTerm& b) {
        if (a.node_ == b.node_) return true;
        if (!a.node_ || !b.node_) return false;
        if (a.hash() != b.hash() || a.tag() != b.tag() || a.size() != b.size()) return false;
        switch (a.tag()) {
            case Tag::Var: return a.var() == b.var();
            case Tag::Const: return a.name() == b.name() && a.type() == b.type();
            case Tag::Comb: return a.spec() == b.spec();
            case Tag::App: return a.fun() == b.fun() && a.arg() == b.arg();
        }
        return false;
    }

    std::string str() const {
        switch (tag()) {
            case Tag::Var: return var().token();
            case Tag::Const: return name();
            case Tag::Comb: return spec().str();
            case Tag::App: {
                std::string x = arg().str();
                if (arg().is_app()) x = "(" + x + ")";
                return fun().str() + " " + x;
            }
        }
        return "?";
    }

private:
    struct Node {
        Tag tag;
        Var var;
        std::string name;
        CombinatorSpec spec{CombKind::K, {}, std::nullopt};
        std::shared_ptr<const Node> left, right;
        Type type;
        std::size_t size;
        std::size_t hash;
    };
    explicit CLTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct CLTermHash {
    std::size_t operator()(const CLTerm& t) const { return t.hash(); }
};

inline std::pair<CLTerm, std::vector<CLTerm>> cl_spine(const CLTerm& t) {
    std::vector<CLTerm> args;
    CLTerm h = t;
    while (h.is_app()) {
        args.push_back(h.arg());
        h = h.fun();
    }
    std::reverse(args.begin(), args.end());
    return {h, args};
}

inline CLTerm cl_subterm_at(const CLTerm& t, const Path& p) {
    CLTerm cur = t;
    for (auto s : p) {
        if (!cur.is_app()) throw Error(ErrorKind::StaleRedex, "path " + path_str(p) + " does not exist");
        cur = s == kFun ? cur.fun() : cur.arg();
    }
    return cur;
}

inline CLTerm cl_replace_at(const CLTerm& t, const Path& p, const CLTerm& r, std::size_t i = 0) {
    if (i == p.size()) return r;
    if (!t.is_app()) throw Error(ErrorKind::StaleRedex, "path " + path_str(p) + " does not exist");
    if (p[i] == kFun) return CLTerm::app(cl_replace_at(t.fun(), p, r, i + 1), t.arg());
    return CLTerm::app(t.fun(), cl_replace_at(t.arg(), p, r, i + 1));
}

// Variables appearing in the term.
inline void cl_vars(const CLTerm& t, std::vector<Var>& out) {
    switch (t.tag()) {
        case CLTerm::Tag::Var:
            if (std::find(out.begin(), out.end(), t.var()) == out.end()) out.push_back(t.var());
            return;
        case CLTerm::Tag::App:
            cl_vars(t.fun(), out);
            cl_vars(t.arg(), out);
            return;
        default: return;
    }
}

inline std::vector<Var> cl_vars(const CLTerm& t) {
    std::vector<Var> out;
    cl_vars(t, out);
    return out;
}

inline bool cl_occurs(const Var& v, const CLTerm& t) {
    switch (t.tag()) {
        case CLTerm::Tag::Var: return t.var() == v;
        case CLTerm::Tag::App: return cl_occurs(v, t.fun()) || cl_occurs(v, t.arg());
        default: return false;
    }
}

inline void cl_constants(const CLTerm& t, std::set<std::string>& out) {
    switch (t.tag()) {
        case CLTerm::Tag::Const: out.insert(t.name()); return;
        case CLTerm::Tag::Comb:
            if (t.spec().dardinal_const) out.insert(*t.spec().dardinal_const);
            return;
        case CLTerm::Tag::App:
            cl_constants(t.fun(), out);
            cl_constants(t.arg(), out);
            return;
        default: return;
    }
}

// Membership in CL_υ: every combinator satisfies its side conditions under υ
// and every variable is within budget.
inline std::optional<Error> check_cl_term(const CLTerm& t, const Parameter& p, const Signature& sig) {
    switch (t.tag()) {
        case CLTerm::Tag::Var:
            if (!p.budget(t.var().type).admits(t.var().index))
                return Error(ErrorKind::VariableBudgetExceeded, t.var().str() + " exceeds its budget");
            return std::nullopt;
        case CLTerm::Tag::Const: {
            auto it = sig.find(t.name());
            if (it == sig.end()) return Error(ErrorKind::UnknownConstant, t.name());
            return std::nullopt;
        }
        case CLTerm::Tag::Comb:
            try {
                check_side_conditions(t.spec(), p, sig);
            } catch (const Error& e) {
                return e;
            }
            return std::nullopt;
        case CLTerm::Tag::App:
            if (auto e = check_cl_term(t.fun(), p, sig)) return e;
            return check_cl_term(t.arg(), p, sig);
    }
    return std::nullopt;
}

inline bool is_cl_term_of(const CLTerm& t, const Parameter& p, const Signature& sig) {
    return !check_cl_term(t, p, sig).has_value();
}

// ---------------------------------------------------------------------------
// Weak reduction

enum class WeakRule { K, C, D, W, B, CtoD };

inline const char* weak_rule_name(WeakRule r) {
    switch (r) {
        case WeakRule::K: return "K";
        case WeakRule::C: return "C";
        case WeakRule::D: return "D";
        case WeakRule::W: return "W";
        case WeakRule::B: return "B";
        case WeakRule::CtoD: return "C-to-D";
    }
    return "?";
}

struct WeakRedex {
    Path position;
    WeakRule rule;
    CombinatorSpec head;
    std::vector<CLTerm> components;  // P, Q, R as the rule consumes them
    CLTerm source;
};

// Classifies `t` as a redex at the root.
inline std::optional<WeakRedex> weak_redex_at(const CLTerm& t, const Path& pos = {}) {
    if (!t.is_app()) return std::nullopt;
    auto [h, args] = cl_spine(t);
    if (!h.is_comb()) return std::nullopt;
    const auto& s = h.spec();
    std::size_t m = args.size();
    std::optional<WeakRule> rule;
    switch (s.kind) {
        case CombKind::K:
            if (m == 2) rule = WeakRule::K;
            break;
        case CombKind::W:
            if (m == 2) rule = WeakRule::W;
            break;
        case CombKind::D:
            if (m == 2) rule = WeakRule::D;
            break;
        case CombKind::B:
            if (m == 3) rule = WeakRule::B;
            break;
        case CombKind::C:
            if (m == 3) rule = WeakRule::C;
            else if (m == 2 && args[1].is_const() && args[1].type().is_state()) rule = WeakRule::CtoD;
            break;
        default: break;
    }
    if (!rule) return std::nullopt;
    return WeakRedex{pos, *rule, s, args, t};
}

inline CLTerm weak_contractum(const WeakRedex& r) {
    const auto& a = r.components;
    auto ap = [](const CLTerm& f, const CLTerm& x) { return CLTerm::app(f, x); };
    switch (r.rule) {
        case WeakRule::K: return a[0];
        case WeakRule::C: return ap(ap(a[0], a[2]), a[1]);
        case WeakRule::D: return ap(ap(a[0], a[1]), CLTerm::constant(*r.head.dardinal_const, r.head.type_params[1]));
        case WeakRule::W: return ap(ap(a[0], a[1]), a[1]);
        case WeakRule::B: return ap(a[0], ap(a[1], a[2]));
        case WeakRule::CtoD: {
            const auto& tp = r.head.type_params;
            return ap(CLTerm::comb_unchecked(comb_D(a[1].name(), tp[0], tp[1], tp[2])), a[0]);
        }
    }
    return a[0];
}

namespace detail {
inline void find_weak_rec(const CLTerm& t, Path& pos, std::vector<WeakRedex>& out) {
    if (!t.is_app()) return;
    if (auto r = weak_redex_at(t, pos)) out.push_back(std::move(*r));
    pos.push_back(kFun);
    find_weak_rec(t.fun(), pos, out);
    pos.back() = kArg;
    find_weak_rec(t.arg(), pos, out);
    pos.pop_back();
}

inline std::optional<WeakRedex> first_weak_rec(const CLTerm& t, Path& pos) {
    if (!t.is_app()) return std::nullopt;
    if (auto r = weak_redex_at(t, pos)) return r;
    pos.push_back(kFun);
    if (auto r = first_weak_rec(t.fun(), pos)) return r;
    pos.back() = kArg;
    if (auto r = first_weak_rec(t.arg(), pos)) return r;
    pos.pop_back();
    return std::nullopt;
}
}  // namespace detail

// All weak redexes, outermost first, left to right.
inline std::vector<WeakRedex> find_weak_redexes(const CLTerm& t) {
    std::vector<WeakRedex> out;
    Path pos;
    detail::find_weak_rec(t, pos, out);
    return out;
}

inline std::optional<WeakRedex> first_weak_redex(const CLTerm& t) {
    Path pos;
    return detail::first_weak_rec(t, pos);
}

inline CLTerm contract_weak(const CLTerm& t, const WeakRedex& r) {
    CLTerm at = cl_subterm_at(t, r.position);
    if (!(at == r.source)) throw Error(ErrorKind::StaleRedex, "weak redex at " + path_str(r.position) + " no longer matches");
    return cl_replace_at(t, r.position, weak_contractum(r));
}

// Leftmost-outermost normalization; `trace` (when given) receives every term
// visited, starting with `t`.
inline CLTerm weak_normalize(const CLTerm& t, std::size_t fuel = kDefaultFuel, std::vector<CLTerm>* trace = nullptr) {
    CLTerm cur = t;
    if (trace) trace->push_back(cur);
    while (auto r = first_weak_redex(cur)) {
        if (fuel == 0) throw Error(ErrorKind::FuelExhausted, "weak normalization ran out of fuel");
        --fuel;
        cur = cl_replace_at(cur, r->position, weak_contractum(*r));
        if (trace) trace->push_back(cur);
    }
    return cur;
}

inline bool is_weak_normal(const CLTerm& t) { return !first_weak_redex(t).has_value(); }

inline std::optional<CLTerm> join(const CLTerm& a, const CLTerm& b, std::size_t fuel = kDefaultFuel) {
    CLTerm na = weak_normalize(a, fuel), nb = weak_normalize(b, fuel);
    if (na == nb) return na;
    return std::nullopt;
}

inline bool decide_weak_equal(const CLTerm& a, const CLTerm& b, std::size_t fuel = kDefaultFuel) {
    if (!(a.type() == b.type())) return false;
    return join(a, b, fuel).has_value();
}

// ---------------------------------------------------------------------------
// Parallel reduction and complete development

namespace detail {
inline bool app_shape(const CLTerm& n, std::size_t k, std::vector<CLTerm>& parts) {
    // n = h x1 ... xk with exactly k outer applications peeled
    parts.assign(k + 1, CLTerm());
    CLTerm cur = n;
    for (std::size_t i = k; i > 0; --i) {
        if (!cur.is_app()) return false;
        parts[i] = cur.arg();
        cur = cur.fun();
    }
    parts[0] = cur;
    return true;
}
}  // namespace detail

inline bool parallel_reduces(const CLTerm& m, const CLTerm& n) {
    if (m == n) return true;
    if (m.is_atomic()) return false;
    if (!(m.type() == n.type())) return false;
    if (n.is_app() && parallel_reduces(m.fun(), n.fun()) && parallel_reduces(m.arg(), n.arg())) return true;
    auto r = weak_redex_at(m);
    if (!r) return false;
    const auto& a = r->components;
    std::vector<CLTerm> x;
    switch (r->rule) {
        case WeakRule::K: return parallel_reduces(a[0], n);
        case WeakRule::C:  // P' R' Q'
            return detail::app_shape(n, 2, x) && parallel_reduces(a[0], x[0]) && parallel_reduces(a[2], x[1]) &&
                   parallel_reduces(a[1], x[2]);
        case WeakRule::D:  // P' R' c
            return detail::app_shape(n, 2, x) && x[2].is_const() && x[2].name() == *r->head.dardinal_const &&
                   parallel_reduces(a[0], x[0]) && parallel_reduces(a[1], x[1]);
        case WeakRule::W:  // P' Q' Q'
            return detail::app_shape(n, 2, x) && x[1] == x[2] && parallel_reduces(a[0], x[0]) &&
                   parallel_reduces(a[1], x[1]);
        case WeakRule::B:  // P' (Q' R')
            return detail::app_shape(n, 1, x) && x[1].is_app() && parallel_reduces(a[0], x[0]) &&
                   parallel_reduces(a[1], x[1].fun()) && parallel_reduces(a[2], x[1].arg());
        case WeakRule::CtoD: {  // D^c P'
            if (!detail::app_shape(n, 1, x)) return false;
            const auto& tp = r->head.type_params;
            return x[0] == CLTerm::comb_unchecked(comb_D(a[1].name(), tp[0], tp[1], tp[2])) && parallel_reduces(a[0], x[1]);
        }
    }
    return false;
}

inline CLTerm complete_development(const CLTerm& m) {
    if (m.is_atomic()) return m;
    auto r = weak_redex_at(m);
    if (!r) return CLTerm::app(complete_development(m.fun()), complete_development(m.arg()));
    std::vector<CLTerm> a;
    for (const auto& c : r->components) a.push_back(complete_development(c));
    WeakRedex starred = *r;
    starred.components = a;
    if (r->rule == WeakRule::CtoD) starred.components[1] = r->components[1];  // the constant itself
    return weak_contractum(starred);
}

// One random parallel step: every redex is independently contracted or kept,
// and subterms are reduced in parallel.
template <class Rng>
CLTerm random_parallel_step(const CLTerm& m, Rng& rng) {
    if (m.is_atomic()) return m;
    auto r = weak_redex_at(m);
    if (r && (rng() & 1)) {
        WeakRedex s = *r;
        for (auto& c : s.components) c = random_parallel_step(c, rng);
        if (r->rule == WeakRule::CtoD) s.components[1] = r->components[1];
        return weak_contractum(s);
    }
    return CLTerm::app(random_parallel_step(m.fun(), rng), random_parallel_step(m.arg(), rng));
}

// ---------------------------------------------------------------------------
// Substitution, permutation

inline CLTerm cl_substitute(const CLTerm& t, const std::map<Var, CLTerm>& bindings) {
    switch (t.tag()) {
        case CLTerm::Tag::Var: {
            auto it = bindings.find(t.var());
            if (it == bindings.end()) return t;
            if (!(it->second.type() == t.type()))
                throw Error(ErrorKind::IllTypedApplication, "substitution for " + t.var().str() + " has the wrong type");
            return it->second;
        }
        case CLTerm::Tag::App: {
            CLTerm f = cl_substitute(t.fun(), bindings), a = cl_substitute(t.arg(), bindings);
            if (f.id() == t.fun().id() && a.id() == t.arg().id()) return t;
            return CLTerm::app(f, a);
        }
        default: return t;
    }
}

inline CLTerm cl_apply_permutation(const CLTerm& t, const VarPermutation& pi) {
    switch (t.tag()) {
        case CLTerm::Tag::Var: return CLTerm::var(pi(t.var()));
        case CLTerm::Tag::App: return CLTerm::app(cl_apply_permutation(t.fun(), pi), cl_apply_permutation(t.arg(), pi));
        default: return t;
    }
}

// ---------------------------------------------------------------------------
// Derived combinators and bracket abstraction

inline CLTerm derive_cl_starling(const Type& a, const Type& b, const Type& c, const Parameter& p, const Signature& sig) {
    if (!a.is_regular() || !b.is_regular())
        throw Error(ErrorKind::SideConditionViolated, "derived starling requires its first and second types to be regular");
    std::vector<CLTerm> leaves;
    for (const auto& s : starling_table(a, b, c)) leaves.push_back(CLTerm::comb(s, p, sig));
    return assemble_starling(leaves, [](const CLTerm& f, const CLTerm& x) { return CLTerm::app(f, x); });
}

inline CLTerm derive_cl_identity(const Type& b, const Parameter& p, const Signature& sig) {
    if (!b.is_regular()) throw Error(ErrorKind::SideConditionViolated, "derived identity requires a regular type");
    Type bb = Type::arrow(b, b);
    CLTerm s = derive_cl_starling(bb, b, b, p, sig);
    return CLTerm::app(CLTerm::app(s, CLTerm::comb(comb_K(b, bb), p, sig)), CLTerm::comb(comb_K(b, b), p, sig));
}

// [v]M, by cases: v absent (K), M = v (I), state-typed argument (W, C, D),
// regular-typed argument (S).
inline CLTerm cl_bracket(const Var& v, const CLTerm& m, const Parameter& p, const Signature& sig) {
    const Type& a = v.type;
    const Type& b = m.type();
    if (b.is_state()) throw Error(ErrorKind::StateBodyAbstraction, "cannot abstract over a term of state type");
    if (!cl_occurs(v, m)) return CLTerm::app(CLTerm::comb(comb_K(b, a), p, sig), m);
    if (m.is_var()) return derive_cl_identity(a, p, sig);
    // m is an application in which v occurs
    const CLTerm& m0 = m.fun();
    const CLTerm& m1 = m.arg();
    const Type& c = m1.type();
    if (c.is_state()) {
        CLTerm abs0 = cl_bracket(v, m0, p, sig);
        if (m1.is_var() && m1.var() == v) return CLTerm::app(CLTerm::comb(comb_W(a, b), p, sig), abs0);
        if (m1.is_var()) return CLTerm::app(CLTerm::app(CLTerm::comb(comb_C(a, c, b), p, sig), abs0), m1);
        return CLTerm::app(CLTerm::comb(comb_D(m1.name(), a, c, b), p, sig), abs0);
    }
    CLTerm s = derive_cl_starling(c, b, a, p, sig);
    return CLTerm::app(CLTerm::app(s, cl_bracket(v, m0, p, sig)), cl_bracket(v, m1, p, sig));
}

}  // namespace mltk
