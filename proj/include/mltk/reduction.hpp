#pragma once

#include <variant>

#include "term.hpp"

namespace mltk {

enum class ReductionMode { Beta0, BetaR, Beta, Eta, Beta0Eta, BetaREta, BetaEta };

inline bool mode_has_beta(ReductionMode m) { return m != ReductionMode::Eta; }
inline bool mode_has_eta(ReductionMode m) {
    return m == ReductionMode::Eta || m == ReductionMode::Beta0Eta || m == ReductionMode::BetaREta ||
           m == ReductionMode::BetaEta;
}

inline const char* mode_name(ReductionMode m) {
    switch (m) {
        case ReductionMode::Beta0: return "beta0";
        case ReductionMode::BetaR: return "betar";
        case ReductionMode::Beta: return "beta";
        case ReductionMode::Eta: return "eta";
        case ReductionMode::Beta0Eta: return "beta0eta";
        case ReductionMode::BetaREta: return "betareta";
        case ReductionMode::BetaEta: return "betaeta";
    }
    return "?";
}

// (λx⃗.λv.L) M⃗ N at `position`.
struct BetaRedex {
    Path position;
    std::vector<Var> prefix_binders;
    Var inner_binder;
    LTerm body;
    std::vector<LTerm> args;
    LTerm operand;
    std::size_t distance = 0;
    bool regular = true;
    LTerm source;
};

// λx.M x at `position`.
struct EtaRedex {
    Path position;
    Var binder;
    LTerm head;
    LTerm source;
};

using Redex = std::variant<BetaRedex, EtaRedex>;

inline const Path& redex_position(const Redex& r) {
    return std::visit([](const auto& x) -> const Path& { return x.position; }, r);
}

namespace detail {

inline bool beta_admitted(ReductionMode m, const BetaRedex& r) {
    switch (m) {
        case ReductionMode::Beta0:
        case ReductionMode::Beta0Eta: return r.distance == 0;
        case ReductionMode::BetaR:
        case ReductionMode::BetaREta: return r.regular;
        case ReductionMode::Beta:
        case ReductionMode::BetaEta: return true;
        case ReductionMode::Eta: return false;
    }
    return false;
}

// Decomposes the application node `t` (whose spine has m arguments) as a
// distance m-1 redex, checking the side conditions.
inline std::optional<BetaRedex> beta_at(const LTerm& t, const Path& pos) {
    auto [head, args] = spine(t);
    if (!head.is_lam()) return std::nullopt;
    std::size_t m = args.size();
    std::vector<Var> binders;
    LTerm cur = head;
    for (std::size_t i = 0; i < m; ++i) {
        if (!cur.is_lam()) return std::nullopt;
        binders.push_back(cur.binder());
        cur = cur.body();
    }
    BetaRedex r;
    r.position = pos;
    r.distance = m - 1;
    r.prefix_binders.assign(binders.begin(), binders.end() - 1);
    r.inner_binder = binders.back();
    r.body = cur;
    r.args.assign(args.begin(), args.end() - 1);
    r.operand = args.back();
    r.source = t;
    // (3) pairwise distinct binders
    for (std::size_t i = 0; i < binders.size(); ++i)
        for (std::size_t j = i + 1; j < binders.size(); ++j)
            if (binders[i] == binders[j]) return std::nullopt;
    // (2) no prefix binder free in the operand
    for (const auto& x : r.prefix_binders)
        if (occurs_free(x, r.operand)) return std::nullopt;
    // (1) operand free for the inner binder in the body
    if (!is_free_for(r.operand, r.inner_binder, r.body)) return std::nullopt;
    r.regular = true;
    for (std::size_t i = 1; i < r.prefix_binders.size(); ++i)
        if (r.prefix_binders[i].type.is_state()) r.regular = false;
    return r;
}

inline std::optional<EtaRedex> eta_at(const LTerm& t, const Path& pos) {
    if (!t.is_lam() || !t.body().is_app()) return std::nullopt;
    const LTerm& a = t.body().arg();
    if (!a.is_var() || !(a.var() == t.binder())) return std::nullopt;
    if (occurs_free(t.binder(), t.body().fun())) return std::nullopt;
    return EtaRedex{pos, t.binder(), t.body().fun(), t};
}

inline void find_rec(const LTerm& t, Path& pos, ReductionMode mode, std::vector<Redex>& out) {
    switch (t.tag()) {
        case LTerm::Tag::Var:
        case LTerm::Tag::Const: return;
        case LTerm::Tag::App:
            if (mode_has_beta(mode)) {
                if (auto r = beta_at(t, pos); r && beta_admitted(mode, *r)) out.emplace_back(std::move(*r));
            }
            pos.push_back(kFun);
            find_rec(t.fun(), pos, mode, out);
            pos.back() = kArg;
            find_rec(t.arg(), pos, mode, out);
            pos.pop_back();
            return;
        case LTerm::Tag::Lam:
            if (mode_has_eta(mode)) {
                if (auto r = eta_at(t, pos)) out.emplace_back(std::move(*r));
            }
            pos.push_back(kBody);
            find_rec(t.body(), pos, mode, out);
            pos.pop_back();
            return;
    }
}

}  // namespace detail

// All redexes of the mode, outermost first, left to right. Along one spine the
// outer application node (larger distance) precedes the inner ones.
inline std::vector<Redex> find_redexes(const LTerm& t, const Parameter& /*υ*/, ReductionMode mode) {
    std::vector<Redex> out;
    Path pos;
    detail::find_rec(t, pos, mode, out);
    return out;
}

inline std::vector<BetaRedex> find_beta_redexes(const LTerm& t, ReductionMode mode = ReductionMode::Beta) {
    std::vector<BetaRedex> out;
    for (auto& r : find_redexes(t, Parameter(), mode))
        if (auto* b = std::get_if<BetaRedex>(&r)) out.push_back(std::move(*b));
    return out;
}

inline LTerm contractum(const BetaRedex& r) {
    LTerm inner = substitute(r.body, r.inner_binder, r.operand);
    return LTerm::app(LTerm::lams(r.prefix_binders, inner), r.args);
}

inline LTerm contract(const LTerm& t, const Redex& r) {
    const Path& pos = redex_position(r);
    LTerm at = subterm_at(t, pos);
    return std::visit(
        [&](const auto& x) -> LTerm {
            if (!(at == x.source)) throw Error(ErrorKind::StaleRedex, "redex at " + path_str(pos) + " no longer matches");
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, BetaRedex>) {
                return replace_at(t, pos, contractum(x));
            } else {
                return replace_at(t, pos, x.head);
            }
        },
        r);
}

enum class Strategy { LeftmostOutermost, IndexedChoice };

inline std::optional<LTerm> step(const LTerm& t, const Parameter& p, ReductionMode mode,
                                 Strategy strategy = Strategy::LeftmostOutermost, std::size_t choice = 0) {
    auto rs = find_redexes(t, p, mode);
    if (rs.empty()) return std::nullopt;
    std::size_t i = strategy == Strategy::LeftmostOutermost ? 0 : choice % rs.size();
    return contract(t, rs[i]);
}

// ---------------------------------------------------------------------------
// Traces

struct TraceStep {
    enum class Kind { Beta, Eta, Alpha } kind = Kind::Beta;
    Path position;
    LTerm replacement;  // Alpha only: the new subterm at `position`
    std::size_t distance = 0;
    bool regular = true;
    LTerm result;  // whole term after the step
};

struct Trace {
    LTerm start;
    std::vector<TraceStep> steps;

    const LTerm& end() const { return steps.empty() ? start : steps.back().result; }
};

// Re-executes the steps from `start`, checking each one: β and η steps must be
// genuine redexes at their positions, α steps must replace a subterm by an
// α-congruent one. Fills in results, distances and regularity.
inline Trace replay(const LTerm& start, const std::vector<TraceStep>& steps) {
    Trace tr;
    tr.start = start;
    LTerm cur = start;
    for (auto s : steps) {
        LTerm at = subterm_at(cur, s.position);
        switch (s.kind) {
            case TraceStep::Kind::Beta: {
                auto r = at.is_app() ? detail::beta_at(at, s.position) : std::nullopt;
                if (!r) throw Error(ErrorKind::TraceFailure, "no β redex at " + path_str(s.position) + " in " + cur.str());
                s.distance = r->distance;
                s.regular = r->regular;
                cur = replace_at(cur, s.position, contractum(*r));
                break;
            }
            case TraceStep::Kind::Eta: {
                auto r = detail::eta_at(at, s.position);
                if (!r) throw Error(ErrorKind::TraceFailure, "no η redex at " + path_str(s.position));
                cur = replace_at(cur, s.position, r->head);
                break;
            }
            case TraceStep::Kind::Alpha:
                if (!alpha_congruent(at, s.replacement))
                    throw Error(ErrorKind::TraceFailure, "α step at " + path_str(s.position) + " is not a renaming");
                cur = replace_at(cur, s.position, s.replacement);
                break;
        }
        s.result = cur;
        tr.steps.push_back(s);
    }
    return tr;
}

inline std::vector<TraceStep> prefixed(const std::vector<TraceStep>& steps, const Path& prefix) {
    std::vector<TraceStep> out;
    out.reserve(steps.size());
    for (auto s : steps) {
        Path p = prefix;
        p.insert(p.end(), s.position.begin(), s.position.end());
        s.position = std::move(p);
        out.push_back(std::move(s));
    }
    return out;
}

inline TraceStep beta_step(Path p) {
    TraceStep s;
    s.kind = TraceStep::Kind::Beta;
    s.position = std::move(p);
    return s;
}

inline TraceStep alpha_step(Path p, LTerm replacement) {
    TraceStep s;
    s.kind = TraceStep::Kind::Alpha;
    s.position = std::move(p);
    s.replacement = std::move(replacement);
    return s;
}

// ---------------------------------------------------------------------------
// Normalization in the unrestricted calculus

inline constexpr std::size_t kDefaultFuel = 100000;

namespace detail {

// Normalization by evaluation: β is performed by closure application, the
// result is read back with fresh binders, then η-contracted bottom-up.
class FullLambdaNormalizer {
public:
    FullLambdaNormalizer(std::uint32_t next_index, std::size_t fuel) : next_(next_index), fuel_(fuel) {}

    LTerm normalize(const LTerm& t) { return eta(quote(eval(t, nullptr))); }

private:
    struct Value;
    using ValuePtr = std::shared_ptr<const Value>;
    struct Env {
        Var var;
        ValuePtr value;
        std::shared_ptr<const Env> next;
    };
    using EnvPtr = std::shared_ptr<const Env>;
    struct Value {
        bool closure;
        // closure
        Var binder;
        LTerm body;
        EnvPtr env;
        // neutral
        LTerm head;
        std::vector<ValuePtr> args;
    };

    ValuePtr eval(const LTerm& t, const EnvPtr& env) {
        switch (t.tag()) {
            case LTerm::Tag::Var:
                for (const Env* e = env.get(); e; e = e->next.get())
                    if (e->var == t.var()) return e->value;
                return neutral(t);
            case LTerm::Tag::Const: return neutral(t);
            case LTerm::Tag::App: return apply(eval(t.fun(), env), eval(t.arg(), env));
            case LTerm::Tag::Lam: {
                auto v = std::make_shared<Value>();
                v->closure = true;
                v->binder = t.binder();
                v->body = t.body();
                v->env = env;
                return v;
            }
        }
        return nullptr;
    }

    static ValuePtr neutral(const LTerm& head) {
        auto v = std::make_shared<Value>();
        v->closure = false;
        v->head = head;
        return v;
    }

    ValuePtr apply(const ValuePtr& f, const ValuePtr& a) {
        if (f->closure) {
            if (fuel_ == 0) throw Error(ErrorKind::FuelExhausted, "full-λ normalization ran out of fuel");
            --fuel_;
            auto e = std::make_shared<Env>(Env{f->binder, a, f->env});
            return eval(f->body, e);
        }
        auto v = std::make_shared<Value>(*f);
        v->args.push_back(a);
        return v;
    }

    LTerm quote(const ValuePtr& v) {
        if (v->closure) {
            Var fresh{v->binder.type, next_++};
            return LTerm::lam(fresh, quote(apply(v, neutral(LTerm::var(fresh)))));
        }
        LTerm t = v->head;
        for (const auto& a : v->args) t = LTerm::app(t, quote(a));
        return t;
    }

    static LTerm eta(const LTerm& t) {
        switch (t.tag()) {
            case LTerm::Tag::Var:
            case LTerm::Tag::Const: return t;
            case LTerm::Tag::App: return LTerm::app(eta(t.fun()), eta(t.arg()));
            case LTerm::Tag::Lam: {
                LTerm b = eta(t.body());
                if (b.is_app() && b.arg().is_var() && b.arg().var() == t.binder() && !occurs_free(t.binder(), b.fun()))
                    return b.fun();
                return LTerm::lam(t.binder(), b);
            }
        }
        return t;
    }

    std::uint32_t next_;
    std::size_t fuel_;
};

}  // namespace detail

// βη-normal form in the unrestricted calculus. Bound variables of the result
// are fresh, pairwise distinct, and numbered from `first_fresh` (by default
// one above every index in the input).
inline LTerm normalize_full_lambda(const LTerm& t, std::size_t fuel = kDefaultFuel,
                                   std::optional<std::uint32_t> first_fresh = std::nullopt) {
    std::uint32_t start = first_fresh ? *first_fresh : max_index(t) + 1;
    return detail::FullLambdaNormalizer(start, fuel).normalize(t);
}

inline bool decide_beta_eta_equal(const LTerm& m, const LTerm& n, const Parameter& /*υ*/ = Parameter(),
                                  std::size_t fuel = kDefaultFuel) {
    if (!(m.type() == n.type())) return false;
    std::uint32_t start = std::max(max_index(m), max_index(n)) + 1;
    return alpha_equal(normalize_full_lambda(m, fuel, start), normalize_full_lambda(n, fuel, start));
}

}  // namespace mltk
