#pragma once

#include <functional>
#include <unordered_set>

#include "reduction.hpp"

namespace mltk {

// Renames every regular-typed binder whose variable is bound at another site
// or also occurs free, using indices above every index in the term. The result
// is α-congruent to the input; state binders are never touched.
inline LTerm freshen_regular_binders(const LTerm& t) {
    std::map<Var, int> bind_count;
    std::function<void(const LTerm&)> count = [&](const LTerm& u) {
        switch (u.tag()) {
            case LTerm::Tag::Var:
            case LTerm::Tag::Const: return;
            case LTerm::Tag::App:
                count(u.fun());
                count(u.arg());
                return;
            case LTerm::Tag::Lam:
                ++bind_count[u.binder()];
                count(u.body());
                return;
        }
    };
    count(t);
    std::set<Var> free;
    for (const auto& v : free_vars(t)) free.insert(v);
    // A variable occurring free below a binder of the same variable elsewhere
    // is also a hazard; treat "bound somewhere and free somewhere" as bad.
    auto bad = [&](const Var& v) { return v.type.is_regular() && (bind_count[v] > 1 || free.count(v)); };
    bool any = false;
    for (const auto& [v, _] : bind_count)
        if (bad(v)) any = true;
    if (!any) return t;
    std::uint32_t next = max_index(t) + 1;
    std::function<LTerm(const LTerm&, std::map<Var, Var>&)> go = [&](const LTerm& u, std::map<Var, Var>& env) -> LTerm {
        switch (u.tag()) {
            case LTerm::Tag::Var: {
                auto it = env.find(u.var());
                return it == env.end() ? u : LTerm::var(it->second);
            }
            case LTerm::Tag::Const: return u;
            case LTerm::Tag::App: return LTerm::app(go(u.fun(), env), go(u.arg(), env));
            case LTerm::Tag::Lam: {
                const Var& b = u.binder();
                std::optional<Var> saved;
                if (auto it = env.find(b); it != env.end()) saved = it->second;
                Var nb = b;
                if (bad(b)) {
                    nb = Var{b.type, next++};
                    env[b] = nb;
                } else {
                    env.erase(b);
                }
                LTerm body = go(u.body(), env);
                if (saved) env[b] = *saved;
                else env.erase(b);
                return LTerm::lam(nb, body);
            }
        }
        return u;
    };
    std::map<Var, Var> env;
    return go(t, env);
}

// Like freshen_regular_binders, but state binders are renamed too when the
// budget has an index of that type that the term does not use.
inline LTerm freshen_binders(const LTerm& t, const Parameter& p) {
    LTerm r = freshen_regular_binders(t);
    std::set<Var> used = all_vars(r);
    std::set<Var> free;
    for (const auto& v : free_vars(r)) free.insert(v);
    std::function<LTerm(const LTerm&, std::map<Var, Var>&)> go = [&](const LTerm& u, std::map<Var, Var>& env) -> LTerm {
        switch (u.tag()) {
            case LTerm::Tag::Var: {
                auto it = env.find(u.var());
                return it == env.end() ? u : LTerm::var(it->second);
            }
            case LTerm::Tag::Const: return u;
            case LTerm::Tag::App: return LTerm::app(go(u.fun(), env), go(u.arg(), env));
            case LTerm::Tag::Lam: {
                const Var& b = u.binder();
                std::optional<Var> saved;
                if (auto it = env.find(b); it != env.end()) saved = it->second;
                Var nb = b;
                env.erase(b);
                if (b.type.is_state() && free.count(b)) {
                    Budget budget = p.budget(b.type);
                    for (std::uint32_t i = 0; budget.admits(i) && i <= b.index + used.size(); ++i)
                        if (!used.count(Var{b.type, i})) {
                            nb = Var{b.type, i};
                            used.insert(nb);
                            env[b] = nb;
                            break;
                        }
                }
                LTerm body = go(u.body(), env);
                if (saved) env[b] = *saved;
                else env.erase(b);
                return LTerm::lam(nb, body);
            }
        }
        return u;
    };
    std::map<Var, Var> env;
    return go(r, env);
}

struct ChainSearchOptions {
    ReductionMode mode = ReductionMode::Beta;
    std::size_t max_distance = static_cast<std::size_t>(-1);
    std::size_t max_depth = 64;
    std::size_t max_nodes = 20000;
    bool freshen_regular = true;
};

// Depth-first search for a reduction chain from `start` to a term satisfying
// `goal`, trying redexes outermost first and backtracking on dead ends.
// Regular binders are freshened (as α steps) whenever they could capture.
inline std::optional<std::vector<TraceStep>> search_chain(const LTerm& start,
                                                          const std::function<bool(const LTerm&)>& goal,
                                                          const ChainSearchOptions& opt = {}) {
    std::vector<TraceStep> steps;
    std::unordered_set<std::string> visited;
    std::size_t nodes = 0;
    std::function<bool(const LTerm&, std::size_t)> dfs = [&](const LTerm& t0, std::size_t depth) -> bool {
        if (goal(t0)) return true;
        if (depth >= opt.max_depth || ++nodes > opt.max_nodes) return false;
        LTerm t = t0;
        bool renamed = false;
        if (opt.freshen_regular) {
            LTerm f = freshen_regular_binders(t0);
            if (!(f == t0)) {
                steps.push_back(alpha_step({}, f));
                t = f;
                renamed = true;
                if (goal(t)) return true;
            }
        }
        if (!visited.insert(alpha_key(t)).second) {
            if (renamed) steps.pop_back();
            return false;
        }
        for (const auto& r : find_beta_redexes(t, opt.mode)) {
            if (r.distance > opt.max_distance) continue;
            LTerm next = replace_at(t, r.position, contractum(r));
            steps.push_back(beta_step(r.position));
            if (dfs(next, depth + 1)) return true;
            steps.pop_back();
        }
        if (renamed) steps.pop_back();
        return false;
    };
    if (dfs(start, 0)) return steps;
    return std::nullopt;
}

// Breadth-first search for a chain whose end is α-congruent to `target`.
inline std::optional<std::vector<TraceStep>> bfs_chain(const LTerm& start, const LTerm& target,
                                                       const ChainSearchOptions& opt = {}) {
    struct Node {
        LTerm term;
        std::vector<TraceStep> steps;
    };
    std::vector<Node> frontier{{start, {}}};
    std::unordered_set<std::string> visited{alpha_key(start)};
    std::size_t nodes = 0;
    for (std::size_t depth = 0; depth <= opt.max_depth; ++depth) {
        std::vector<Node> next;
        for (auto& n : frontier) {
            if (alpha_congruent(n.term, target)) {
                if (!(n.term == target)) n.steps.push_back(alpha_step({}, target));
                return n.steps;
            }
            LTerm t = n.term;
            auto steps = n.steps;
            if (opt.freshen_regular) {
                LTerm f = freshen_regular_binders(t);
                if (!(f == t)) {
                    steps.push_back(alpha_step({}, f));
                    t = f;
                }
            }
            for (const auto& r : find_beta_redexes(t, opt.mode)) {
                if (r.distance > opt.max_distance) continue;
                LTerm u = replace_at(t, r.position, contractum(r));
                if (!visited.insert(alpha_key(u)).second) continue;
                if (++nodes > opt.max_nodes) return std::nullopt;
                auto s2 = steps;
                s2.push_back(beta_step(r.position));
                next.push_back({u, std::move(s2)});
            }
        }
        if (next.empty()) break;
        frontier = std::move(next);
    }
    return std::nullopt;
}

}  // namespace mltk
