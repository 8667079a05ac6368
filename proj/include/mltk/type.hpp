#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "error.hpp"

namespace mltk {

// Types are hash-consed: two structurally equal types share one node, so
// equality is pointer equality.
class Type {
public:
    enum class Tag : std::uint8_t { State, Entity, Arrow };

    Type() = default;

    static Type state(const std::string& name) { return intern(Tag::State, name, nullptr, nullptr); }
    static Type entity(const std::string& name) { return intern(Tag::Entity, name, nullptr, nullptr); }

    // Arrow of the modal calculus: the codomain must be regular.
    static Type arrow(const Type& dom, const Type& cod) {
        if (cod.is_state())
            throw Error(ErrorKind::StateCodomain,
                        "arrow " + dom.str() + " -> " + cod.str() + " has a state codomain");
        return arrow_unchecked(dom, cod);
    }

    // Arrow of the unrestricted calculus, where state atoms behave like entities.
    static Type arrow_unchecked(const Type& dom, const Type& cod) {
        return intern(Tag::Arrow, std::string(), dom.node_, cod.node_);
    }

    // A -> B -> ... -> R
    static Type arrows(const std::vector<Type>& doms, const Type& result) {
        Type t = result;
        for (auto it = doms.rbegin(); it != doms.rend(); ++it) t = arrow(*it, t);
        return t;
    }

    bool valid() const { return node_ != nullptr; }
    Tag tag() const { return node_->tag; }
    bool is_atom() const { return node_->tag != Tag::Arrow; }
    bool is_arrow() const { return node_->tag == Tag::Arrow; }
    bool is_state() const { return node_->tag == Tag::State; }
    bool is_entity() const { return node_->tag == Tag::Entity; }
    bool is_regular() const { return !is_state(); }

    const std::string& name() const { return node_->name; }
    Type domain() const { return Type(node_->dom); }
    Type codomain() const { return Type(node_->cod); }

    // True when no arrow anywhere inside has a state codomain.
    bool is_modal() const { return node_->modal; }
    std::size_t size() const { return node_->size; }
    std::size_t hash() const { return node_->hash; }

    // Number of arguments before a non-arrow result.
    std::size_t arity() const {
        std::size_t n = 0;
        for (Type t = *this; t.is_arrow(); t = t.codomain()) ++n;
        return n;
    }

    std::string str() const {
        if (!node_) return "<null>";
        if (is_atom()) return name();
        std::string d = domain().str();
        if (domain().is_arrow()) d = "(" + d + ")";
        return d + " -> " + codomain().str();
    }

    friend bool operator==(const Type& a, const Type& b) { return a.node_ == b.node_; }

    friend std::strong_ordering operator<=>(const Type& a, const Type& b) {
        if (a.node_ == b.node_) return std::strong_ordering::equal;
        if (!a.node_) return std::strong_ordering::less;
        if (!b.node_) return std::strong_ordering::greater;
        if (a.tag() != b.tag()) return a.tag() <=> b.tag();
        if (a.is_atom()) {
            int c = a.name().compare(b.name());
            return c < 0 ? std::strong_ordering::less
                         : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
        }
        auto c = a.domain() <=> b.domain();
        if (c != 0) return c;
        return a.codomain() <=> b.codomain();
    }

private:
    struct Node {
        Tag tag;
        std::string name;
        std::shared_ptr<const Node> dom, cod;
        std::size_t hash;
        std::size_t size;
        bool modal;
    };
    using NodePtr = std::shared_ptr<const Node>;

    explicit Type(NodePtr n) : node_(std::move(n)) {}

    struct Key {
        Tag tag;
        std::string name;
        const Node* dom;
        const Node* cod;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::size_t h = std::hash<std::string>()(k.name) ^ (static_cast<std::size_t>(k.tag) * 0x9e3779b97f4a7c15ULL);
            h ^= std::hash<const void*>()(k.dom) + 0x9e3779b9 + (h << 6) + (h >> 2);
            h ^= std::hash<const void*>()(k.cod) + 0x9e3779b9 + (h << 6) + (h >> 2);
            return h;
        }
    };

    static Type intern(Tag tag, const std::string& name, NodePtr dom, NodePtr cod) {
        static std::mutex mu;
        static std::unordered_map<Key, NodePtr, KeyHash> table;
        Key key{tag, name, dom.get(), cod.get()};
        std::lock_guard<std::mutex> lock(mu);
        auto it = table.find(key);
        if (it != table.end()) return Type(it->second);
        auto n = std::make_shared<Node>();
        n->tag = tag;
        n->name = name;
        n->dom = dom;
        n->cod = cod;
        if (tag == Tag::Arrow) {
            n->size = 1 + dom->size + cod->size;
            n->modal = dom->modal && cod->modal && cod->tag != Tag::State;
            n->hash = KeyHash()(Key{tag, "", nullptr, nullptr}) ^ (dom->hash * 31 + cod->hash * 1000003);
        } else {
            n->size = 1;
            n->modal = true;
            n->hash = std::hash<std::string>()(name) * 7 + static_cast<std::size_t>(tag);
        }
        table.emplace(key, n);
        return Type(n);
    }

    NodePtr node_;
};

struct TypeHash {
    std::size_t operator()(const Type& t) const { return t.hash(); }
};

// A variable budget: a positive count or omega.
class Budget {
public:
    static constexpr std::uint32_t kOmega = std::numeric_limits<std::uint32_t>::max();

    constexpr Budget() : n_(kOmega) {}
    constexpr explicit Budget(std::uint32_t n) : n_(n) {}
    static constexpr Budget omega() { return Budget(); }

    bool is_omega() const { return n_ == kOmega; }
    std::uint32_t count() const { return n_; }
    bool admits(std::uint32_t index) const { return is_omega() || index < n_; }

    std::string str() const { return is_omega() ? "omega" : std::to_string(n_); }

    friend auto operator<=>(const Budget&, const Budget&) = default;

private:
    std::uint32_t n_;
};

// Budget per state atom. Atoms without an explicit entry fall back to
// `fallback` when it is set.
class Parameter {
public:
    Parameter() = default;

    static Parameter uniform(Budget b) {
        Parameter p;
        p.fallback_ = b;
        return p;
    }
    static Parameter omega() { return uniform(Budget::omega()); }

    Parameter& set(const std::string& atom, Budget b) {
        budgets_[atom] = b;
        return *this;
    }

    bool has(const std::string& atom) const { return budgets_.count(atom) || fallback_.has_value(); }

    Budget budget_of_atom(const std::string& atom) const {
        auto it = budgets_.find(atom);
        if (it != budgets_.end()) return it->second;
        if (fallback_) return *fallback_;
        throw Error(ErrorKind::UnknownAtom, "no budget for state atom " + atom);
    }

    Budget budget(const Type& t) const {
        if (!t.is_state()) return Budget::omega();
        return budget_of_atom(t.name());
    }

    const std::map<std::string, Budget>& explicit_budgets() const { return budgets_; }
    const std::optional<Budget>& fallback() const { return fallback_; }

    std::string str() const {
        std::string s = "{";
        bool first = true;
        for (const auto& [k, v] : budgets_) {
            if (!first) s += ", ";
            first = false;
            s += k + ":" + v.str();
        }
        if (fallback_) s += std::string(first ? "" : ", ") + "*:" + fallback_->str();
        return s + "}";
    }

private:
    std::map<std::string, Budget> budgets_;
    std::optional<Budget> fallback_;
};

// υ ≤ υ′ pointwise over every atom either parameter names, plus the fallbacks.
inline bool param_leq(const Parameter& a, const Parameter& b) {
    auto get = [](const Parameter& p, const std::string& atom) -> std::optional<Budget> {
        if (p.has(atom)) return p.budget_of_atom(atom);
        return std::nullopt;
    };
    for (const auto* p : {&a, &b}) {
        for (const auto& [atom, _] : p->explicit_budgets()) {
            auto x = get(a, atom), y = get(b, atom);
            if (x && y && *x > *y) return false;
        }
    }
    if (a.fallback() && b.fallback() && *a.fallback() > *b.fallback()) return false;
    return true;
}

using Signature = std::map<std::string, Type>;

struct Var {
    Type type;
    std::uint32_t index = 0;

    friend bool operator==(const Var& a, const Var& b) { return a.index == b.index && a.type == b.type; }
    friend std::strong_ordering operator<=>(const Var& a, const Var& b) {
        auto c = a.type <=> b.type;
        if (c != 0) return c;
        return a.index <=> b.index;
    }

    std::string str() const { return "v" + std::to_string(index) + ":" + type.str(); }
    std::string token() const { return "v" + std::to_string(index); }
};

struct VarHash {
    std::size_t operator()(const Var& v) const { return v.type.hash() * 1000003 + v.index; }
};

}  // namespace mltk
