#pragma once

#include <random>

#include "cl.hpp"

namespace mltk {

// Shared configuration for the random term generators: a pool of types to draw
// argument types and combinator parameters from, a parameter, a signature.
struct GenConfig {
    std::vector<Type> pool;
    Parameter param;
    Signature sig;
    std::uint32_t regular_indices = 3;  // free/bound indices drawn for regular types
    double redex_bias = 0.35;           // chance to build an application with an abstraction head
    std::optional<Parameter> free_param;  // budgets for free variables, when tighter than `param`
};

// Montagovian atoms and a small pool over them.
struct Montague {
    Type s = Type::state("S");
    Type e = Type::entity("E");
    Type t = Type::entity("T");
    std::vector<Type> pool() const {
        auto ar = [](Type a, Type b) { return Type::arrow(a, b); };
        return {s, e, t, ar(s, t), ar(e, t), ar(s, e), ar(e, e), ar(s, ar(s, t)), ar(ar(s, t), t)};
    }
    Signature signature() const {
        auto ar = [](Type a, Type b) { return Type::arrow(a, b); };
        return {{"c", s}, {"j", e}, {"p", ar(s, t)}, {"f", ar(e, ar(s, t))}, {"g", ar(s, e)}};
    }
};

inline std::uint32_t pick_index(const Type& t, const GenConfig& cfg, std::mt19937_64& rng, bool free = false) {
    Budget b = (free && cfg.free_param ? *cfg.free_param : cfg.param).budget(t);
    std::uint32_t n = t.is_state() ? (b.is_omega() ? 3u : std::min<std::uint32_t>(b.count(), 3u)) : cfg.regular_indices;
    return std::uniform_int_distribution<std::uint32_t>(0, n - 1)(rng);
}

namespace detail {

inline bool coin(std::mt19937_64& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

template <class T>
const T& choose(const std::vector<T>& v, std::mt19937_64& rng) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

}  // namespace detail

// Random λ_υ terms. Leaves are variables (bound ones preferred) and constants.
class LambdaGenerator {
public:
    LambdaGenerator(GenConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg)), rng_(seed) {}

    std::mt19937_64& rng() { return rng_; }
    const GenConfig& config() const { return cfg_; }

    LTerm term(const Type& t, std::size_t max_size) {
        std::vector<Var> scope;
        return gen(t, std::max<std::size_t>(max_size, 1), scope);
    }

    LTerm term(std::size_t max_size) { return term(detail::choose(cfg_.pool, rng_), max_size); }

private:
    LTerm leaf(const Type& t, const std::vector<Var>& scope) {
        std::vector<LTerm> options;
        for (const auto& v : scope)
            if (v.type == t) options.push_back(LTerm::var(v));
        for (const auto& [name, ty] : cfg_.sig)
            if (ty == t) options.push_back(LTerm::constant(name, ty));
        if (options.empty() || detail::coin(rng_, 0.2)) {
            Var v{t, pick_index(t, cfg_, rng_, true)};
            // A fresh pick may coincide with a binder in scope and be captured.
            bool bound = std::find(scope.begin(), scope.end(), v) != scope.end();
            if (!bound || !cfg_.free_param) return LTerm::var(v);
            if (options.empty()) return LTerm::var(v);
        }
        // Innermost binder of an index wins, so drop shadowed candidates.
        LTerm pick = detail::choose(options, rng_);
        if (pick.is_var()) {
            for (auto it = scope.rbegin(); it != scope.rend(); ++it)
                if (it->type == t && it->index == pick.var().index) return LTerm::var(*it);
        }
        return pick;
    }

    std::vector<Type> arg_types_for(const Type& t) {
        std::vector<Type> out;
        for (const auto& a : cfg_.pool)
            if (Type::arrow_unchecked(a, t).is_modal() && Type::arrow_unchecked(a, t).size() <= 9) out.push_back(a);
        return out;
    }

    LTerm gen(const Type& t, std::size_t size, std::vector<Var>& scope) {
        if (size <= 1 || t.is_state()) return leaf(t, scope);
        double r = std::uniform_real_distribution<double>(0, 1)(rng_);
        if (t.is_arrow() && r < 0.35) {
            Var v{t.domain(), pick_index(t.domain(), cfg_, rng_)};
            scope.push_back(v);
            LTerm body = gen(t.codomain(), size - 1, scope);
            scope.pop_back();
            return LTerm::lam(v, body);
        }
        if (r < 0.85 && size >= 3) {
            auto args = arg_types_for(t);
            if (!args.empty()) {
                Type a = detail::choose(args, rng_);
                std::size_t left = std::uniform_int_distribution<std::size_t>(1, size - 2)(rng_);
                Type ft = Type::arrow(a, t);
                LTerm f;
                if (detail::coin(rng_, cfg_.redex_bias) && left >= 2) {
                    Var v{a, pick_index(a, cfg_, rng_)};
                    scope.push_back(v);
                    f = LTerm::lam(v, gen(t, left - 1, scope));
                    scope.pop_back();
                } else {
                    f = gen(ft, left, scope);
                }
                LTerm x = gen(a, size - 1 - left, scope);
                return LTerm::app(f, x);
            }
        }
        return leaf(t, scope);
    }

    GenConfig cfg_;
    std::mt19937_64 rng_;
};

// Random CL_υ terms built from heads (combinator instances over the pool,
// variables, constants) applied to enough arguments to reach the target type.
class CLGenerator {
public:
    CLGenerator(GenConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg)), rng_(seed) { index_heads(); }

    std::mt19937_64& rng() { return rng_; }

    CLTerm term(const Type& t, std::size_t max_size) { return gen(t, std::max<std::size_t>(max_size, 1)); }
    CLTerm term(std::size_t max_size) { return term(detail::choose(cfg_.pool, rng_), max_size); }

    std::size_t head_count() const { return heads_.size(); }

private:
    struct Head {
        CLTerm term;
        std::vector<Type> args;  // argument types up to the target
        std::size_t arity = 0;   // arguments needed for a redex
    };

    void index_heads() {
        const auto& ts = cfg_.pool;
        auto consider = [&](const CombinatorSpec& s) {
            try {
                check_side_conditions(s, cfg_.param, cfg_.sig);
                if (combinator_type(s).size() > 25) return;
                CLTerm c = CLTerm::comb(s, cfg_.param, cfg_.sig);
                std::vector<Type> args;
                Type t = c.type();
                std::size_t arity = behaviour_arity(s.kind);
                targets_[t].push_back({c, args, arity});
                while (t.is_arrow()) {
                    args.push_back(t.domain());
                    t = t.codomain();
                    targets_[t].push_back({c, args, arity});
                }
                heads_.push_back(c);
            } catch (const Error&) {
            }
        };
        for (const auto& a : ts)
            for (const auto& b : ts) {
                consider(comb_K(a, b));
                consider(comb_W(a, b));
                for (const auto& c : ts) {
                    consider(comb_C(a, b, c));
                    consider(comb_B(a, b, c));
                    if (b.is_state())
                        for (const auto& [name, ty] : cfg_.sig)
                            if (ty == b) consider(comb_D(name, a, b, c));
                }
            }
    }

    CLTerm atom(const Type& t) {
        std::vector<CLTerm> options;
        for (const auto& [name, ty] : cfg_.sig)
            if (ty == t) options.push_back(CLTerm::constant(name, ty));
        if (options.empty() || detail::coin(rng_, 0.6)) return CLTerm::var(Var{t, pick_index(t, cfg_, rng_, true)});
        return detail::choose(options, rng_);
    }

    // Never exceeds `size` nodes. Heads applied to at least their behaviour
    // arity are preferred so that terms carry redexes.
    CLTerm gen(const Type& t, std::size_t size) {
        auto it = targets_.find(t);
        if (size < 3 || t.is_state()) {
            if (!t.is_state() && it != targets_.end()) {
                std::vector<const Head*> bare;
                for (const auto& h : it->second)
                    if (h.args.empty()) bare.push_back(&h);
                if (!bare.empty() && detail::coin(rng_, 0.3)) return detail::choose(bare, rng_)->term;
            }
            return atom(t);
        }
        std::vector<const Head*> fit, redex;
        if (it != targets_.end())
            for (const auto& h : it->second)
                if (!h.args.empty() && 1 + 2 * h.args.size() <= size) {
                    fit.push_back(&h);
                    if (h.args.size() >= h.arity) redex.push_back(&h);
                }
        if (fit.empty() || detail::coin(rng_, 0.15)) {
            // variable or constant head with one argument
            std::vector<Type> args;
            for (const auto& a : cfg_.pool)
                if (Type::arrow_unchecked(a, t).is_modal()) args.push_back(a);
            if (args.empty()) return atom(t);
            Type a = detail::choose(args, rng_);
            return CLTerm::app(atom(Type::arrow(a, t)), gen(a, size - 2));
        }
        const Head& h = *detail::choose(!redex.empty() && detail::coin(rng_, 0.7) ? redex : fit, rng_);
        CLTerm out = h.term;
        std::size_t k = h.args.size();
        std::size_t budget = size - 1 - k;  // nodes left for the arguments
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t later = k - i - 1;
            std::size_t most = budget - later;
            std::size_t share = std::min(most, std::max<std::size_t>(1, 2 * budget / (k - i)));
            std::size_t s = std::uniform_int_distribution<std::size_t>(1, share)(rng_);
            CLTerm a = gen(h.args[i], s);
            out = CLTerm::app(out, a);
            budget -= a.size();
        }
        return out;
    }

    GenConfig cfg_;
    std::mt19937_64 rng_;
    std::map<Type, std::vector<Head>> targets_;
    std::vector<CLTerm> heads_;
};

// A random sequence of weak steps (uniform redex choice).
inline std::vector<CLTerm> random_weak_walk(const CLTerm& start, std::size_t max_steps, std::mt19937_64& rng) {
    std::vector<CLTerm> out{start};
    CLTerm cur = start;
    for (std::size_t i = 0; i < max_steps; ++i) {
        auto rs = find_weak_redexes(cur);
        if (rs.empty()) break;
        cur = contract_weak(cur, detail::choose(rs, rng));
        out.push_back(cur);
    }
    return out;
}

}  // namespace mltk
