#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "combinators.hpp"

namespace mltk {

inline constexpr std::uint64_t kDefaultCarrierBound = 1'000'000;

// ---------------------------------------------------------------------------
// Values

// An element of a carrier: an atom index, or the table of a function listing
// its outputs for the domain carrier in canonical order. Structural order on
// values coincides with canonical carrier order, so tables compare as their
// sequences of output indices do.
class Value {
public:
    Value() = default;

    static Value atom(std::uint32_t i) {
        auto n = std::make_shared<Node>();
        n->atom = i;
        n->hash = 0x9e3779b97f4a7c15ULL ^ i;
        return Value(n);
    }

    static Value table(std::vector<Value> entries) {
        auto n = std::make_shared<Node>();
        n->is_table = true;
        std::size_t h = 0xcbf29ce484222325ULL + entries.size();
        for (const auto& e : entries) h = (h ^ e.hash()) * 0x100000001b3ULL;
        n->hash = h;
        n->entries = std::move(entries);
        return Value(n);
    }

    bool valid() const { return node_ != nullptr; }
    bool is_table() const { return node_->is_table; }
    std::uint32_t atom_index() const { return node_->atom; }
    const std::vector<Value>& entries() const { return node_->entries; }
    std::size_t hash() const { return node_->hash; }

    friend bool operator==(const Value& a, const Value& b) {
        if (a.node_ == b.node_) return true;
        if (!a.node_ || !b.node_ || a.hash() != b.hash() || a.is_table() != b.is_table()) return false;
        if (!a.is_table()) return a.atom_index() == b.atom_index();
        return a.entries() == b.entries();
    }

    friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
        if (a.node_ == b.node_) return std::strong_ordering::equal;
        if (a.is_table() != b.is_table()) return a.is_table() ? std::strong_ordering::greater : std::strong_ordering::less;
        if (!a.is_table()) return a.atom_index() <=> b.atom_index();
        const auto& x = a.entries();
        const auto& y = b.entries();
        for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
            auto c = x[i] <=> y[i];
            if (c != 0) return c;
        }
        return x.size() <=> y.size();
    }

    std::string str() const {
        if (!is_table()) return std::to_string(atom_index());
        std::string s = "[";
        for (std::size_t i = 0; i < entries().size(); ++i) s += (i ? "," : "") + entries()[i].str();
        return s + "]";
    }

private:
    struct Node {
        bool is_table = false;
        std::uint32_t atom = 0;
        std::vector<Value> entries;
        std::size_t hash = 0;
    };
    explicit Value(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct ValueHash {
    std::size_t operator()(const Value& v) const { return v.hash(); }
};

// ---------------------------------------------------------------------------
// Type universes

class TypeUniverse {
public:
    TypeUniverse() = default;

    static TypeUniverse closure(const std::vector<Type>& seeds) {
        TypeUniverse u;
        for (const auto& t : seeds) u.add(t);
        return u;
    }

    void add(const Type& t) {
        if (!types_.insert(t).second) return;
        if (t.is_arrow()) {
            add(t.domain());
            add(t.codomain());
        }
    }

    bool contains(const Type& t) const { return types_.count(t) > 0; }
    const std::set<Type>& types() const { return types_; }
    std::size_t size() const { return types_.size(); }

    std::set<std::string> atoms() const {
        std::set<std::string> out;
        for (const auto& t : types_)
            if (t.is_atom()) out.insert(t.name());
        return out;
    }

    // Types in order of increasing size; domains and codomains precede arrows.
    std::vector<Type> by_size() const {
        std::vector<Type> v(types_.begin(), types_.end());
        std::stable_sort(v.begin(), v.end(), [](const Type& a, const Type& b) { return a.size() < b.size(); });
        return v;
    }

private:
    std::set<Type> types_;
};

inline void collect_subterm_types(const LTerm& t, std::vector<Type>& out) {
    out.push_back(t.type());
    switch (t.tag()) {
        case LTerm::Tag::Var:
        case LTerm::Tag::Const: return;
        case LTerm::Tag::App:
            collect_subterm_types(t.fun(), out);
            collect_subterm_types(t.arg(), out);
            return;
        case LTerm::Tag::Lam:
            out.push_back(t.binder().type);
            collect_subterm_types(t.body(), out);
            return;
    }
}

inline TypeUniverse universe_of(const std::vector<LTerm>& terms) {
    std::vector<Type> types;
    for (const auto& t : terms) collect_subterm_types(t, types);
    return TypeUniverse::closure(types);
}

inline bool fits_universe(const LTerm& t, const TypeUniverse& u) {
    std::vector<Type> types;
    collect_subterm_types(t, types);
    return std::all_of(types.begin(), types.end(), [&](const Type& x) { return u.contains(x); });
}

// ---------------------------------------------------------------------------
// Frames

// A decorated frame over a finite universe. Atom carriers are 0..n-1. An arrow
// carrier is either the full function space ("standard") or an explicit sorted
// set of tables. Standard carriers are never materialized unless some
// operation has to enumerate them, and then only up to `bound` elements.
class Frame {
public:
    Frame() = default;
    Frame(TypeUniverse u, std::map<std::string, std::uint32_t> atom_sizes, std::uint64_t bound = kDefaultCarrierBound)
        : universe_(std::move(u)), atom_sizes_(std::move(atom_sizes)), bound_(bound) {
        for (const auto& a : universe_.atoms()) {
            auto it = atom_sizes_.find(a);
            if (it == atom_sizes_.end()) throw Error(ErrorKind::InvalidFrame, "no size for atom " + a);
            if (it->second == 0) throw Error(ErrorKind::InvalidFrame, "atom " + a + " has an empty carrier");
        }
        cache_ = std::make_shared<Cache>();
    }

    const TypeUniverse& universe() const { return universe_; }
    const std::map<std::string, std::uint32_t>& atom_sizes() const { return atom_sizes_; }
    const std::map<std::string, Value>& constants() const { return constants_; }
    std::uint64_t bound() const { return bound_; }

    // Replaces the carrier of an arrow type by an explicit set of tables.
    void set_explicit(const Type& t, std::vector<Value> tables) {
        require(t);
        if (!t.is_arrow()) throw Error(ErrorKind::InvalidFrame, "only arrow carriers can be explicit");
        std::sort(tables.begin(), tables.end());
        tables.erase(std::unique(tables.begin(), tables.end()), tables.end());
        if (tables.empty()) throw Error(ErrorKind::InvalidFrame, "empty carrier for " + t.str());
        explicit_[t] = std::move(tables);
        cache_ = std::make_shared<Cache>();
    }

    void set_constant(const std::string& name, const Type& t, const Value& v) {
        require(t);
        if (!contains(t, v)) throw Error(ErrorKind::InvalidFrame, "constant " + name + " lies outside the carrier of " + t.str());
        constants_[name] = v;
        constant_types_[name] = t;
    }

    std::optional<Type> constant_type(const std::string& name) const {
        auto it = constant_types_.find(name);
        if (it == constant_types_.end()) return std::nullopt;
        return it->second;
    }

    bool is_standard(const Type& t) const {
        require(t);
        return !t.is_arrow() || !explicit_.count(t);
    }

    // Arrow carriers listed explicitly (possibly also full function spaces).
    const std::map<Type, std::vector<Value>>& explicit_carriers() const { return explicit_; }

    // True when the carrier is the full function space, whether declared
    // standard or listed in full.
    bool is_full(const Type& t) const {
        if (is_standard(t)) return true;
        double full = std::pow(static_cast<double>(carrier_size(t.codomain())), static_cast<double>(carrier_size(t.domain())));
        return static_cast<double>(explicit_.at(t).size()) >= full;
    }

    // Saturates at UINT64_MAX.
    std::uint64_t carrier_size(const Type& t) const {
        require(t);
        if (t.is_atom()) return atom_sizes_.at(t.name());
        if (auto it = explicit_.find(t); it != explicit_.end()) return it->second.size();
        std::uint64_t base = carrier_size(t.codomain()), n = carrier_size(t.domain());
        std::uint64_t out = 1;
        for (std::uint64_t i = 0; i < n; ++i) {
            if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base) return std::numeric_limits<std::uint64_t>::max();
            out *= base;
        }
        return out;
    }

    bool contains(const Type& t, const Value& v) const {
        require(t);
        if (t.is_atom()) return !v.is_table() && v.atom_index() < atom_sizes_.at(t.name());
        if (!v.is_table()) return false;
        if (auto it = explicit_.find(t); it != explicit_.end())
            return std::binary_search(it->second.begin(), it->second.end(), v);
        std::uint64_t n = carrier_size(t.domain());
        if (v.entries().size() != n) return false;
        for (const auto& e : v.entries())
            if (!contains(t.codomain(), e)) return false;
        return true;
    }

    // Position of `v` in the canonical order of the carrier.
    std::optional<std::uint64_t> index_of(const Type& t, const Value& v) const {
        require(t);
        if (t.is_atom()) {
            if (v.is_table() || v.atom_index() >= atom_sizes_.at(t.name())) return std::nullopt;
            return v.atom_index();
        }
        if (!v.is_table()) return std::nullopt;
        if (auto it = explicit_.find(t); it != explicit_.end()) {
            auto pos = std::lower_bound(it->second.begin(), it->second.end(), v);
            if (pos == it->second.end() || !(*pos == v)) return std::nullopt;
            return static_cast<std::uint64_t>(pos - it->second.begin());
        }
        std::uint64_t size = carrier_size(t);
        if (size == std::numeric_limits<std::uint64_t>::max())
            throw Error(ErrorKind::UniverseTooLarge, "carrier of " + t.str() + " is too large to index");
        std::uint64_t base = carrier_size(t.codomain());
        if (v.entries().size() != carrier_size(t.domain())) return std::nullopt;
        std::uint64_t idx = 0;
        for (const auto& e : v.entries()) {
            auto d = index_of(t.codomain(), e);
            if (!d) return std::nullopt;
            idx = idx * base + *d;
        }
        return idx;
    }

    Value element_at(const Type& t, std::uint64_t i) const {
        require(t);
        if (i >= carrier_size(t)) throw Error(ErrorKind::InvalidFrame, "element index out of range for " + t.str());
        if (t.is_atom()) return Value::atom(static_cast<std::uint32_t>(i));
        if (auto it = explicit_.find(t); it != explicit_.end()) return it->second[i];
        std::uint64_t n = carrier_size(t.domain()), base = carrier_size(t.codomain());
        std::vector<Value> entries(n);
        for (std::uint64_t k = n; k-- > 0;) {
            entries[k] = element_at(t.codomain(), i % base);
            i /= base;
        }
        return Value::table(std::move(entries));
    }

    // The whole carrier in canonical order; throws UniverseTooLarge above the
    // bound. Cached.
    std::shared_ptr<const std::vector<Value>> enumerate(const Type& t) const {
        require(t);
        {
            std::lock_guard<std::mutex> lock(cache_->mu);
            auto it = cache_->carriers.find(t);
            if (it != cache_->carriers.end()) return it->second;
        }
        std::uint64_t n = carrier_size(t);
        if (n > bound_)
            throw Error(ErrorKind::UniverseTooLarge,
                        "carrier of " + t.str() + " has more than " + std::to_string(bound_) + " elements");
        auto out = std::make_shared<std::vector<Value>>();
        if (auto it = explicit_.find(t); it != explicit_.end()) {
            *out = it->second;
        } else {
            out->reserve(n);
            for (std::uint64_t i = 0; i < n; ++i) out->push_back(element_at(t, i));
        }
        std::lock_guard<std::mutex> lock(cache_->mu);
        cache_->carriers[t] = out;
        return out;
    }

    Value apply(const Type& fn_type, const Value& f, const Value& x) const {
        auto i = index_of(fn_type.domain(), x);
        if (!i || !f.is_table() || *i >= f.entries().size())
            throw Error(ErrorKind::InvalidFrame, "argument outside the domain carrier of " + fn_type.str());
        return f.entries()[*i];
    }

    void require(const Type& t) const {
        if (!universe_.contains(t)) throw Error(ErrorKind::TypeOutsideUniverse, t.str() + " is outside the universe");
    }

private:
    struct Cache {
        std::mutex mu;
        std::map<Type, std::shared_ptr<const std::vector<Value>>> carriers;
    };

    TypeUniverse universe_;
    std::map<std::string, std::uint32_t> atom_sizes_;
    std::map<Type, std::vector<Value>> explicit_;
    std::map<std::string, Value> constants_;
    std::map<std::string, Type> constant_types_;
    std::uint64_t bound_ = kDefaultCarrierBound;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// Standard frame with constants given by carrier index.
inline Frame enumerate_standard_frame(const TypeUniverse& u, const std::map<std::string, std::uint32_t>& atom_sizes,
                                      const Signature& sig,
                                      const std::map<std::string, std::uint64_t>& constant_assignment = {},
                                      std::uint64_t bound = kDefaultCarrierBound) {
    Frame f(u, atom_sizes, bound);
    for (const auto& [name, idx] : constant_assignment) {
        auto it = sig.find(name);
        if (it == sig.end()) throw Error(ErrorKind::UnknownConstant, name);
        f.set_constant(name, it->second, f.element_at(it->second, idx));
    }
    return f;
}

// ---------------------------------------------------------------------------
// Evaluation

using Assignment = std::map<Var, Value>;

namespace detail {

inline Value eval_rec(const LTerm& t, const Frame& fr, Assignment& env, Path& path) {
    fr.require(t.type());
    switch (t.tag()) {
        case LTerm::Tag::Var: {
            auto it = env.find(t.var());
            if (it != env.end()) return it->second;
            return fr.element_at(t.type(), 0);
        }
        case LTerm::Tag::Const: {
            auto it = fr.constants().find(t.name());
            if (it == fr.constants().end())
                throw Error(ErrorKind::UnknownConstant, "frame does not interpret constant " + t.name());
            return it->second;
        }
        case LTerm::Tag::App: {
            path.push_back(kFun);
            Value f = eval_rec(t.fun(), fr, env, path);
            path.back() = kArg;
            Value x = eval_rec(t.arg(), fr, env, path);
            path.pop_back();
            return fr.apply(t.fun().type(), f, x);
        }
        case LTerm::Tag::Lam: {
            const Var& v = t.binder();
            auto dom = fr.enumerate(v.type);
            std::optional<Value> saved;
            if (auto it = env.find(v); it != env.end()) saved = it->second;
            std::vector<Value> entries;
            entries.reserve(dom->size());
            path.push_back(kBody);
            for (const auto& x : *dom) {
                env[v] = x;
                entries.push_back(eval_rec(t.body(), fr, env, path));
            }
            path.pop_back();
            if (saved) env[v] = *saved;
            else env.erase(v);
            Value out = Value::table(std::move(entries));
            if (!fr.contains(t.type(), out))
                throw Error(ErrorKind::DenotationUndefined,
                            "abstraction at position " + path_str(path) + " denotes a function missing from the carrier of " +
                                t.type().str());
            return out;
        }
    }
    return Value();
}

}  // namespace detail

// Variables missing from `rho` take carrier element 0.
inline Value eval(const LTerm& t, const Frame& fr, const Assignment& rho = {}) {
    for (const auto& [v, x] : rho)
        if (fr.universe().contains(v.type) && !fr.contains(v.type, x))
            throw Error(ErrorKind::InvalidFrame, "assignment sends " + v.str() + " outside its carrier");
    Assignment env = rho;
    Path path;
    return detail::eval_rec(t, fr, env, path);
}

// Calls `f` on every assignment of the given variables; stops when it returns
// false. Throws UniverseTooLarge when the product exceeds the frame bound.
inline void for_each_assignment(const std::vector<Var>& vars, const Frame& fr,
                                const std::function<bool(const Assignment&)>& f) {
    std::vector<std::shared_ptr<const std::vector<Value>>> carriers;
    double total = 1;
    for (const auto& v : vars) {
        carriers.push_back(fr.enumerate(v.type));
        total *= static_cast<double>(carriers.back()->size());
    }
    if (total > static_cast<double>(fr.bound()))
        throw Error(ErrorKind::UniverseTooLarge, "too many assignments to enumerate");
    std::vector<std::size_t> idx(vars.size(), 0);
    Assignment rho;
    for (std::size_t i = 0; i < vars.size(); ++i) rho[vars[i]] = (*carriers[i])[0];
    while (true) {
        if (!f(rho)) return;
        std::size_t k = 0;
        while (k < vars.size()) {
            if (++idx[k] < carriers[k]->size()) {
                rho[vars[k]] = (*carriers[k])[idx[k]];
                break;
            }
            idx[k] = 0;
            rho[vars[k]] = (*carriers[k])[0];
            ++k;
        }
        if (k == vars.size()) return;
    }
}

struct EqualityVerdict {
    bool valid = true;
    std::optional<Assignment> counterexample;
};

inline EqualityVerdict check_equality(const LTerm& m, const LTerm& n, const Frame& fr) {
    if (!(m.type() == n.type())) throw Error(ErrorKind::IllTypedApplication, "equation between terms of different types");
    std::vector<Var> vars = free_vars(m);
    for (const auto& v : free_vars(n))
        if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    EqualityVerdict out;
    for_each_assignment(vars, fr, [&](const Assignment& rho) {
        if (eval(m, fr, rho) == eval(n, fr, rho)) return true;
        out.valid = false;
        out.counterexample = rho;
        return false;
    });
    return out;
}

inline bool validate_equality(const LTerm& m, const LTerm& n, const Frame& fr) { return check_equality(m, n, fr).valid; }

// ---------------------------------------------------------------------------
// Model checking

struct ModelVerdict {
    bool is_model = true;
    std::optional<LTerm> witness;
    std::optional<CombinatorSpec> witness_spec;
    std::string detail;
    std::size_t instances_checked = 0;
};

// Every combinator instance (B, C, D, K, W and the derived S, I) whose λ form
// has all subterm types in the universe and is legal under `p`.
inline std::vector<std::pair<CombinatorSpec, LTerm>> combinator_instances_in(const TypeUniverse& u, const Parameter& p,
                                                                              const Signature& sig) {
    std::vector<std::pair<CombinatorSpec, LTerm>> out;
    std::vector<Type> ts(u.types().begin(), u.types().end());
    auto consider = [&](const CombinatorSpec& s) {
        LTerm l;
        try {
            l = mk_lambda_combinator(s, p, sig);
        } catch (const Error&) {
            return;
        }
        if (fits_universe(l, u)) out.emplace_back(s, l);
    };
    for (const auto& a : ts) {
        consider(comb_I(a));
        for (const auto& b : ts) {
            consider(comb_K(a, b));
            consider(comb_W(a, b));
            for (const auto& c : ts) {
                consider(comb_C(a, b, c));
                consider(comb_B(a, b, c));
                consider(comb_S(a, b, c));
                if (b.is_state())
                    for (const auto& [name, ty] : sig)
                        if (ty == b) consider(comb_D(name, a, b, c));
            }
        }
    }
    return out;
}

// Universe-relative model check: all constants of the signature whose types lie
// in the universe must be interpreted, and every combinator instance that fits
// the universe must denote.
inline ModelVerdict check_model(const Frame& fr, const Parameter& p, const Signature& sig) {
    ModelVerdict v;
    for (const auto& [name, ty] : sig) {
        if (!fr.universe().contains(ty)) continue;
        if (!fr.constants().count(name)) {
            v.is_model = false;
            v.witness = LTerm::constant(name, ty);
            v.detail = "constant " + name + " is not interpreted";
            return v;
        }
    }
    for (const auto& [spec, lam] : combinator_instances_in(fr.universe(), p, sig)) {
        ++v.instances_checked;
        try {
            eval(lam, fr);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::DenotationUndefined) throw;
            v.is_model = false;
            v.witness = lam;
            v.witness_spec = spec;
            v.detail = e.what();
            return v;
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Generated non-standard models

inline std::size_t type_order(const Type& t) {
    if (t.is_atom()) return 0;
    return std::max(type_order(t.domain()) + 1, type_order(t.codomain()));
}

struct GeneratedModelOptions {
    std::size_t seeds = 2;          // random extra functions
    std::size_t max_elements = 200000;
};

// Builds a model by closing the standard denotations of all fitting combinator
// instances, the constants, and a few random functions of order at most 2
// under application, then restricting every function to the closed domains.
// Atom carriers stay full.
inline Frame generate_model(const TypeUniverse& u, const std::map<std::string, std::uint32_t>& atom_sizes,
                            const Parameter& p, const Signature& sig, std::mt19937_64& rng,
                            const GeneratedModelOptions& opt = {}) {
    Frame std_frame(u, atom_sizes);
    std::map<Type, std::set<Value>> g;
    std::vector<std::pair<Type, Value>> work;
    std::size_t total = 0;
    auto add = [&](const Type& t, const Value& x) {
        if (g[t].insert(x).second) {
            work.emplace_back(t, x);
            if (++total > opt.max_elements) throw Error(ErrorKind::UniverseTooLarge, "generated model grows too large");
        }
    };
    for (const auto& t : u.types())
        if (t.is_atom())
            for (std::uint32_t i = 0; i < atom_sizes.at(t.name()); ++i) add(t, Value::atom(i));
    std::map<std::string, Value> consts;
    for (const auto& [name, ty] : sig) {
        if (!u.contains(ty)) continue;
        Value c;
        if (type_order(ty) <= 2) {
            std::uint64_t n = std_frame.carrier_size(ty);
            c = std_frame.element_at(ty, std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng));
        } else {
            c = std_frame.element_at(ty, 0);
        }
        consts[name] = c;
        add(ty, c);
    }
    Frame with_consts = std_frame;
    for (const auto& [name, c] : consts) with_consts.set_constant(name, sig.at(name), c);
    for (const auto& [spec, lam] : combinator_instances_in(u, p, sig)) add(lam.type(), eval(lam, with_consts));
    std::vector<Type> seedable;
    for (const auto& t : u.types())
        if (t.is_arrow() && type_order(t) <= 2) seedable.push_back(t);
    for (std::size_t i = 0; i < opt.seeds && !seedable.empty(); ++i) {
        const Type& t = seedable[std::uniform_int_distribution<std::size_t>(0, seedable.size() - 1)(rng)];
        std::uint64_t n = std_frame.carrier_size(t);
        if (n == std::numeric_limits<std::uint64_t>::max()) continue;
        add(t, std_frame.element_at(t, std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng)));
    }
    // Close under application. An arrow carrier that stays empty gets a random
    // standard element when its order allows it, then the closure resumes.
    std::map<Type, std::vector<Type>> arrows_from;
    for (const auto& t : u.types())
        if (t.is_arrow()) arrows_from[t.domain()].push_back(t);
    for (;;) {
        while (!work.empty()) {
            auto [t, x] = work.back();
            work.pop_back();
            for (const auto& ft : arrows_from[t]) {
                std::vector<Value> fs(g[ft].begin(), g[ft].end());
                for (const auto& f : fs) add(ft.codomain(), std_frame.apply(ft, f, x));
            }
            if (t.is_arrow()) {
                std::vector<Value> xs(g[t.domain()].begin(), g[t.domain()].end());
                for (const auto& a : xs) add(t.codomain(), std_frame.apply(t, x, a));
            }
        }
        bool seeded = false;
        for (const auto& t : u.by_size()) {
            if (!t.is_arrow() || !g[t].empty() || type_order(t) > 2) continue;
            std::uint64_t n = std_frame.carrier_size(t);
            if (n == std::numeric_limits<std::uint64_t>::max()) continue;
            add(t, std_frame.element_at(t, std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng)));
            seeded = true;
            break;
        }
        if (!seeded) break;
    }
    for (const auto& t : u.types())
        if (g[t].empty()) throw Error(ErrorKind::InvalidFrame, "empty carrier for " + t.str());
    // Restrict.
    std::map<Type, std::map<Value, Value>> r;    // standard -> restricted
    std::map<Type, std::map<Value, Value>> pre;  // restricted -> a standard preimage
    Frame out(u, atom_sizes);
    for (const auto& t : u.by_size()) {
        if (t.is_atom()) {
            for (const auto& x : g[t]) r[t][x] = pre[t][x] = x;
            continue;
        }
        const Type &a = t.domain(), &b = t.codomain();
        std::vector<Value> dom;
        for (const auto& [rx, _] : pre[a]) dom.push_back(rx);
        std::vector<Value> tables;
        for (const auto& f : g[t]) {
            std::vector<Value> entries;
            for (const auto& rx : dom) entries.push_back(r[b].at(std_frame.apply(t, f, pre[a].at(rx))));
            Value rf = Value::table(std::move(entries));
            // The restriction must not depend on the chosen preimages.
            for (const auto& x : g[a])
                if (!(r[b].at(std_frame.apply(t, f, x)) ==
                      rf.entries()[std::lower_bound(dom.begin(), dom.end(), r[a].at(x)) - dom.begin()]))
                    throw Error(ErrorKind::InvalidFrame, "restriction is not well defined at " + t.str());
            r[t][f] = rf;
            pre[t].emplace(rf, f);
            tables.push_back(rf);
        }
        out.set_explicit(t, tables);
    }
    for (const auto& [name, c] : consts) out.set_constant(name, sig.at(name), r[sig.at(name)].at(c));
    return out;
}

// The universe {E, E->E} with the identity missing from the function carrier.
inline Frame punctured_frame(const Type& e, std::uint32_t size = 2) {
    Type ee = Type::arrow(e, e);
    Frame f(TypeUniverse::closure({ee}), {{e.name(), size}});
    auto all = f.enumerate(ee);
    std::vector<Value> kept;
    for (const auto& t : *all) {
        bool ident = true;
        for (std::uint32_t i = 0; i < size; ++i)
            if (t.entries()[i].atom_index() != i) ident = false;
        if (!ident) kept.push_back(t);
    }
    f.set_explicit(ee, kept);
    return f;
}

}  // namespace mltk
