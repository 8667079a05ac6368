#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "type.hpp"

namespace mltk {

// A path into a term: 0 = function side, 1 = argument side, 2 = body of an abstraction.
using Path = std::vector<std::uint8_t>;
inline constexpr std::uint8_t kFun = 0, kArg = 1, kBody = 2;

inline std::string path_str(const Path& p) {
    std::string s;
    for (auto step : p) s += step == kFun ? 'f' : step == kArg ? 'a' : 'b';
    return s.empty() ? "." : s;
}

// Immutable λ-term. Nodes are shared; every node caches its type.
class LTerm {
public:
    enum class Tag : std::uint8_t { Var, Const, App, Lam };

    LTerm() = default;

    static LTerm var(const Var& v) {
        auto n = std::make_shared<Node>();
        n->tag = Tag::Var;
        n->var = v;
        n->type = v.type;
        n->size = 1;
        n->hash = VarHash()(v) * 0x9e3779b1u + 1;
        return LTerm(n);
    }

    static LTerm constant(const std::string& name, const Type& type) {
        auto n = std::make_shared<Node>();
        n->tag = Tag::Const;
        n->name = name;
        n->type = type;
        n->size = 1;
        n->hash = std::hash<std::string>()(name) * 31 + type.hash() + 2;
        return LTerm(n);
    }

    static LTerm app(const LTerm& f, const LTerm& a) {
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
        n->hash = (f.hash() * 1000003) ^ (a.hash() + 0x51ed27);
        return LTerm(n);
    }

    static LTerm app(const LTerm& f, const std::vector<LTerm>& args) {
        LTerm t = f;
        for (const auto& a : args) t = app(t, a);
        return t;
    }

    // The arrow type is formed without the modal codomain check, so the same
    // node type serves the unrestricted calculus; `check_term` enforces the
    // modal rules.
    static LTerm lam(const Var& v, const LTerm& body) {
        auto n = std::make_shared<Node>();
        n->tag = Tag::Lam;
        n->var = v;
        n->left = body.node_;
        n->type = Type::arrow_unchecked(v.type, body.type());
        n->size = 1 + body.size();
        n->hash = (VarHash()(v) * 7919) ^ (body.hash() * 31 + 3);
        return LTerm(n);
    }

    static LTerm lams(const std::vector<Var>& vs, const LTerm& body) {
        LTerm t = body;
        for (auto it = vs.rbegin(); it != vs.rend(); ++it) t = lam(*it, t);
        return t;
    }

    bool valid() const { return node_ != nullptr; }
    Tag tag() const { return node_->tag; }
    bool is_var() const { return tag() == Tag::Var; }
    bool is_const() const { return tag() == Tag::Const; }
    bool is_app() const { return tag() == Tag::App; }
    bool is_lam() const { return tag() == Tag::Lam; }

    const Type& type() const { return node_->type; }
    const Var& var() const { return node_->var; }       // Var node, or binder of Lam
    const Var& binder() const { return node_->var; }
    const std::string& name() const { return node_->name; }
    LTerm fun() const { return LTerm(node_->left); }
    LTerm arg() const { return LTerm(node_->right); }
    LTerm body() const { return LTerm(node_->left); }
    std::size_t size() const { return node_->size; }
    std::size_t hash() const { return node_->hash; }
    const void* id() const { return node_.get(); }

    friend bool operator==(const LTerm& a, const LTerm& b) {
        if (a.node_ == b.node_) return true;
        if (!a.node_ || !b.node_) return false;
        if (a.hash() != b.hash() || a.tag() != b.tag() || a.size() != b.size()) return false;
        switch (a.tag()) {
            case Tag::Var: return a.var() == b.var();
            case Tag::Const: return a.name() == b.name() && a.type() == b.type();
            case Tag::App: return a.fun() == b.fun() && a.arg() == b.arg();
            case Tag::Lam: return a.binder() == b.binder() && a.body() == b.body();
        }
        return false;
    }

    // Plain debugging form; the surface printer lives in syntax.hpp.
    std::string str() const {
        switch (tag()) {
            case Tag::Var: return var().token();
            case Tag::Const: return name();
            case Tag::App: {
                std::string f = fun().str();
                if (fun().is_lam()) f = "(" + f + ")";
                std::string x = arg().str();
                if (arg().is_app() || arg().is_lam()) x = "(" + x + ")";
                return f + " " + x;
            }
            case Tag::Lam: return "\\" + binder().token() + ":" + binder().type.str() + ". " + body().str();
        }
        return "?";
    }

private:
    struct Node {
        Tag tag;
        Var var;
        std::string name;
        std::shared_ptr<const Node> left, right;
        Type type;
        std::size_t size;
        std::size_t hash;
    };
    explicit LTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct LTermHash {
    std::size_t operator()(const LTerm& t) const { return t.hash(); }
};

// ---------------------------------------------------------------------------
// Spines

// Head and arguments of an application spine: h a1 ... an.
inline std::pair<LTerm, std::vector<LTerm>> spine(const LTerm& t) {
    std::vector<LTerm> args;
    LTerm h = t;
    while (h.is_app()) {
        args.push_back(h.arg());
        h = h.fun();
    }
    std::reverse(args.begin(), args.end());
    return {h, args};
}

// ---------------------------------------------------------------------------
// Paths

inline LTerm subterm_at(const LTerm& t, const Path& p, std::size_t from = 0) {
    LTerm cur = t;
    for (std::size_t i = from; i < p.size(); ++i) {
        switch (p[i]) {
            case kFun:
                if (!cur.is_app()) throw Error(ErrorKind::StaleRedex, "path " + path_str(p) + " does not exist");
                cur = cur.fun();
                break;
            case kArg:
                if (!cur.is_app()) throw Error(ErrorKind::StaleRedex, "path " + path_str(p) + " does not exist");
                cur = cur.arg();
                break;
            default:
                if (!cur.is_lam()) throw Error(ErrorKind::StaleRedex, "path " + path_str(p) + " does not exist");
                cur = cur.body();
        }
    }
    return cur;
}

inline LTerm replace_at(const LTerm& t, const Path& p, const LTerm& replacement, std::size_t i = 0) {
    if (i == p.size()) return replacement;
    switch (p[i]) {
        case kFun:
            if (!t.is_app()) throw Error(ErrorKind::StaleRedex, "path " + path_str(p) + " does not exist");
            return LTerm::app(replace_at(t.fun(), p, replacement, i + 1), t.arg());
        case kArg:
            if (!t.is_app()) throw Error(ErrorKind::StaleRedex, "path " + path_str(p) + " does not exist");
            return LTerm::app(t.fun(), replace_at(t.arg(), p, replacement, i + 1));
        default:
            if (!t.is_lam()) throw Error(ErrorKind::StaleRedex, "path " + path_str(p) + " does not exist");
            return LTerm::lam(t.binder(), replace_at(t.body(), p, replacement, i + 1));
    }
}

// Binders crossed on the way down a path, outermost first.
inline std::vector<Var> binders_along(const LTerm& t, const Path& p) {
    std::vector<Var> out;
    LTerm cur = t;
    for (auto s : p) {
        if (s == kBody) {
            out.push_back(cur.binder());
            cur = cur.body();
        } else {
            cur = s == kFun ? cur.fun() : cur.arg();
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Variables

namespace detail {
inline void free_vars_rec(const LTerm& t, std::vector<Var>& bound, std::vector<Var>& out, std::set<Var>& seen) {
    switch (t.tag()) {
        case LTerm::Tag::Var: {
            const Var& v = t.var();
            if (std::find(bound.begin(), bound.end(), v) == bound.end() && seen.insert(v).second) out.push_back(v);
            return;
        }
        case LTerm::Tag::Const: return;
        case LTerm::Tag::App:
            free_vars_rec(t.fun(), bound, out, seen);
            free_vars_rec(t.arg(), bound, out, seen);
            return;
        case LTerm::Tag::Lam:
            bound.push_back(t.binder());
            free_vars_rec(t.body(), bound, out, seen);
            bound.pop_back();
            return;
    }
}
}  // namespace detail

// Free variables in first-occurrence order.
inline std::vector<Var> free_vars(const LTerm& t) {
    std::vector<Var> bound, out;
    std::set<Var> seen;
    detail::free_vars_rec(t, bound, out, seen);
    return out;
}

inline bool occurs_free(const Var& v, const LTerm& t) {
    switch (t.tag()) {
        case LTerm::Tag::Var: return t.var() == v;
        case LTerm::Tag::Const: return false;
        case LTerm::Tag::App: return occurs_free(v, t.fun()) || occurs_free(v, t.arg());
        case LTerm::Tag::Lam: return !(t.binder() == v) && occurs_free(v, t.body());
    }
    return false;
}

// Every variable occurring anywhere, bound or free, including binders.
inline void all_vars(const LTerm& t, std::set<Var>& out) {
    switch (t.tag()) {
        case LTerm::Tag::Var: out.insert(t.var()); return;
        case LTerm::Tag::Const: return;
        case LTerm::Tag::App:
            all_vars(t.fun(), out);
            all_vars(t.arg(), out);
            return;
        case LTerm::Tag::Lam:
            out.insert(t.binder());
            all_vars(t.body(), out);
            return;
    }
}

inline std::set<Var> all_vars(const LTerm& t) {
    std::set<Var> s;
    all_vars(t, s);
    return s;
}

inline std::uint32_t max_index(const LTerm& t) {
    std::uint32_t m = 0;
    for (const auto& v : all_vars(t)) m = std::max(m, v.index);
    return m;
}

inline void constants_of(const LTerm& t, std::set<std::string>& out) {
    switch (t.tag()) {
        case LTerm::Tag::Var: return;
        case LTerm::Tag::Const: out.insert(t.name()); return;
        case LTerm::Tag::App:
            constants_of(t.fun(), out);
            constants_of(t.arg(), out);
            return;
        case LTerm::Tag::Lam: constants_of(t.body(), out); return;
    }
}

inline std::set<std::string> constants_of(const LTerm& t) {
    std::set<std::string> s;
    constants_of(t, s);
    return s;
}

// ---------------------------------------------------------------------------
// Free-for and substitution

namespace detail {
// Does a free occurrence of v in t lie under a binder from `danger`?
inline bool captured(const LTerm& t, const Var& v, const std::vector<Var>& danger, bool under) {
    switch (t.tag()) {
        case LTerm::Tag::Var: return under && t.var() == v;
        case LTerm::Tag::Const: return false;
        case LTerm::Tag::App: return captured(t.fun(), v, danger, under) || captured(t.arg(), v, danger, under);
        case LTerm::Tag::Lam: {
            if (t.binder() == v) return false;
            bool u = under || std::find(danger.begin(), danger.end(), t.binder()) != danger.end();
            return captured(t.body(), v, danger, u);
        }
    }
    return false;
}

inline LTerm subst_rec(const LTerm& t, const Var& v, const LTerm& n) {
    switch (t.tag()) {
        case LTerm::Tag::Var: return t.var() == v ? n : t;
        case LTerm::Tag::Const: return t;
        case LTerm::Tag::App: {
            LTerm f = subst_rec(t.fun(), v, n), a = subst_rec(t.arg(), v, n);
            if (f.id() == t.fun().id() && a.id() == t.arg().id()) return t;
            return LTerm::app(f, a);
        }
        case LTerm::Tag::Lam: {
            if (t.binder() == v) return t;
            LTerm b = subst_rec(t.body(), v, n);
            if (b.id() == t.body().id()) return t;
            return LTerm::lam(t.binder(), b);
        }
    }
    return t;
}
}  // namespace detail

// N is free for v in L: no free occurrence of v in L lies under a binder of a
// variable free in N.
inline bool is_free_for(const LTerm& n, const Var& v, const LTerm& l) {
    auto fv = free_vars(n);
    if (fv.empty()) return true;
    return !detail::captured(l, v, fv, false);
}

inline LTerm substitute(const LTerm& l, const Var& v, const LTerm& n) {
    if (!(n.type() == v.type))
        throw Error(ErrorKind::IllTypedApplication, "substituting a term of type " + n.type().str() + " for " + v.str());
    if (!is_free_for(n, v, l))
        throw Error(ErrorKind::CaptureError, n.str() + " is not free for " + v.str() + " in " + l.str());
    return detail::subst_rec(l, v, n);
}

// ---------------------------------------------------------------------------
// Permutations

class VarPermutation {
public:
    VarPermutation() = default;

    static VarPermutation swap(const Var& a, const Var& b) {
        VarPermutation p;
        if (!(a == b)) {
            p.map_[a] = b;
            p.map_[b] = a;
        }
        p.check();
        return p;
    }

    // Builds a permutation from a finite injective type-preserving map by
    // closing its partial cycles.
    static VarPermutation extend(const std::map<Var, Var>& partial) {
        VarPermutation p;
        std::set<Var> image;
        for (const auto& [a, b] : partial) {
            if (!(a.type == b.type)) throw Error(ErrorKind::IllTypedApplication, "permutation must preserve types");
            if (!image.insert(b).second) throw Error(ErrorKind::IllTypedApplication, "permutation must be injective");
        }
        for (const auto& [a, b] : partial)
            if (!(a == b)) p.map_[a] = b;
        // Close chains: follow each image not in the domain back to a chain start.
        for (const auto& [a, b] : partial) {
            if (partial.count(b)) continue;
            Var start = a;
            while (true) {
                bool found = false;
                for (const auto& [x, y] : partial)
                    if (y == start) {
                        start = x;
                        found = true;
                        break;
                    }
                if (!found) break;
            }
            if (!(b == start)) p.map_[b] = start;
        }
        p.check();
        return p;
    }

    Var operator()(const Var& v) const {
        auto it = map_.find(v);
        return it == map_.end() ? v : it->second;
    }

    VarPermutation inverse() const {
        VarPermutation p;
        for (const auto& [a, b] : map_) p.map_[b] = a;
        return p;
    }

    // (this ∘ other)(v) = this(other(v))
    VarPermutation compose(const VarPermutation& other) const {
        std::map<Var, Var> m;
        std::set<Var> dom;
        for (const auto& [a, _] : map_) dom.insert(a);
        for (const auto& [a, _] : other.map_) dom.insert(a);
        VarPermutation p;
        for (const auto& v : dom) {
            Var w = (*this)(other(v));
            if (!(w == v)) p.map_[v] = w;
        }
        return p;
    }

    const std::map<Var, Var>& support() const { return map_; }

private:
    void check() const {
        std::set<Var> img;
        for (const auto& [a, b] : map_) {
            if (!(a.type == b.type)) throw Error(ErrorKind::IllTypedApplication, "permutation must preserve types");
            img.insert(b);
        }
        std::set<Var> dom;
        for (const auto& [a, _] : map_) dom.insert(a);
        if (img != dom) throw Error(ErrorKind::IllTypedApplication, "permutation is not bijective on its support");
    }

    std::map<Var, Var> map_;
};

inline LTerm apply_permutation(const LTerm& t, const VarPermutation& pi) {
    switch (t.tag()) {
        case LTerm::Tag::Var: return LTerm::var(pi(t.var()));
        case LTerm::Tag::Const: return t;
        case LTerm::Tag::App: return LTerm::app(apply_permutation(t.fun(), pi), apply_permutation(t.arg(), pi));
        case LTerm::Tag::Lam: return LTerm::lam(pi(t.binder()), apply_permutation(t.body(), pi));
    }
    return t;
}

// ---------------------------------------------------------------------------
// α-equivalence

namespace detail {
inline bool align(const LTerm& m, const LTerm& n, std::map<Var, Var>& fwd, std::map<Var, Var>& bwd) {
    if (m.tag() != n.tag() || !(m.type() == n.type())) return false;
    auto bind = [&](const Var& a, const Var& b) {
        if (!(a.type == b.type)) return false;
        auto f = fwd.find(a);
        if (f != fwd.end()) return f->second == b;
        auto g = bwd.find(b);
        if (g != bwd.end()) return g->second == a;
        fwd[a] = b;
        bwd[b] = a;
        return true;
    };
    switch (m.tag()) {
        case LTerm::Tag::Var: return bind(m.var(), n.var());
        case LTerm::Tag::Const: return m.name() == n.name();
        case LTerm::Tag::App: return align(m.fun(), n.fun(), fwd, bwd) && align(m.arg(), n.arg(), fwd, bwd);
        case LTerm::Tag::Lam: return bind(m.binder(), n.binder()) && align(m.body(), n.body(), fwd, bwd);
    }
    return false;
}
}  // namespace detail

// A permutation π, identity on the free variables of M, with M^π = N. Every
// variable position of M forces its image, so the candidate is unique; any
// finite injective type-preserving map extends to a permutation within the
// budgets that contain both terms.
inline std::optional<VarPermutation> alpha_permutation(const LTerm& m, const LTerm& n) {
    std::map<Var, Var> fwd, bwd;
    if (!detail::align(m, n, fwd, bwd)) return std::nullopt;
    for (const auto& v : free_vars(m)) {
        auto it = fwd.find(v);
        if (it != fwd.end() && !(it->second == v)) return std::nullopt;
    }
    return VarPermutation::extend(fwd);
}

inline bool alpha_equal(const LTerm& m, const LTerm& n) {
    if (m == n) return true;
    return alpha_permutation(m, n).has_value();
}

namespace detail {
inline bool congruent(const LTerm& m, const LTerm& n, std::vector<std::pair<Var, Var>>& scope) {
    if (m.tag() != n.tag() || !(m.type() == n.type())) return false;
    switch (m.tag()) {
        case LTerm::Tag::Var: {
            for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
                bool a = it->first == m.var(), b = it->second == n.var();
                if (a || b) return a && b;
            }
            return m.var() == n.var();
        }
        case LTerm::Tag::Const: return m.name() == n.name();
        case LTerm::Tag::App: return congruent(m.fun(), n.fun(), scope) && congruent(m.arg(), n.arg(), scope);
        case LTerm::Tag::Lam: {
            scope.emplace_back(m.binder(), n.binder());
            bool r = congruent(m.body(), n.body(), scope);
            scope.pop_back();
            return r;
        }
    }
    return false;
}
}  // namespace detail

// The congruence generated by α: renamings may differ between binding sites.
// Used to validate α-steps applied at several places of a trace at once.
inline bool alpha_congruent(const LTerm& m, const LTerm& n) {
    std::vector<std::pair<Var, Var>> scope;
    return detail::congruent(m, n, scope);
}

// Canonical key of the α-congruence class (bound variables as binder depth).
inline std::string alpha_key(const LTerm& t) {
    std::string out;
    std::vector<Var> scope;
    std::function<void(const LTerm&)> go = [&](const LTerm& u) {
        switch (u.tag()) {
            case LTerm::Tag::Var: {
                for (std::size_t i = scope.size(); i-- > 0;)
                    if (scope[i] == u.var()) {
                        out += "#" + std::to_string(i) + " ";
                        return;
                    }
                out += u.var().str() + " ";
                return;
            }
            case LTerm::Tag::Const: out += "c:" + u.name() + " "; return;
            case LTerm::Tag::App:
                out += "(";
                go(u.fun());
                go(u.arg());
                out += ")";
                return;
            case LTerm::Tag::Lam:
                out += "L" + u.binder().type.str() + "[";
                scope.push_back(u.binder());
                go(u.body());
                scope.pop_back();
                out += "]";
                return;
        }
    };
    go(t);
    return out;
}

// ---------------------------------------------------------------------------
// Term-hood in λ_υ

// Checks that an already-built term belongs to λ_υ over `sig`: modal types,
// regular abstraction bodies, variables within budget, known constants.
// Returns a description of the first violation.
inline std::optional<Error> check_term(const LTerm& t, const Parameter& p, const Signature* sig = nullptr) {
    std::optional<Error> err;
    std::function<void(const LTerm&)> go = [&](const LTerm& u) {
        if (err) return;
        if (!u.type().is_modal()) {
            err = Error(ErrorKind::StateCodomain, "subterm " + u.str() + " has non-modal type " + u.type().str());
            return;
        }
        switch (u.tag()) {
            case LTerm::Tag::Var:
                if (!p.budget(u.var().type).admits(u.var().index))
                    err = Error(ErrorKind::VariableBudgetExceeded, u.var().str() + " exceeds its budget");
                return;
            case LTerm::Tag::Const:
                if (sig) {
                    auto it = sig->find(u.name());
                    if (it == sig->end()) err = Error(ErrorKind::UnknownConstant, u.name());
                    else if (!(it->second == u.type()))
                        err = Error(ErrorKind::IllTypedApplication, "constant " + u.name() + " used at the wrong type");
                }
                return;
            case LTerm::Tag::App:
                go(u.fun());
                go(u.arg());
                return;
            case LTerm::Tag::Lam:
                if (!p.budget(u.binder().type).admits(u.binder().index)) {
                    err = Error(ErrorKind::VariableBudgetExceeded, u.binder().str() + " exceeds its budget");
                    return;
                }
                if (u.body().type().is_state()) {
                    err = Error(ErrorKind::StateBodyAbstraction, "abstraction over a body of state type in " + u.str());
                    return;
                }
                go(u.body());
                return;
        }
    };
    go(t);
    return err;
}

inline bool is_term_of(const LTerm& t, const Parameter& p, const Signature* sig = nullptr) {
    return !check_term(t, p, sig).has_value();
}

}  // namespace mltk
