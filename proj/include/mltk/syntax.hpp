#pragma once

#include <cctype>
#include <sstream>

#include "cl.hpp"

namespace mltk {

// ---------------------------------------------------------------------------
// AST

struct SourcePos {
    int line = 1;
    int col = 1;
    std::string str() const { return std::to_string(line) + ":" + std::to_string(col); }
};

struct TypeAst {
    enum class Kind { Atom, Arrow } kind = Kind::Atom;
    std::string name;
    std::shared_ptr<const TypeAst> dom, cod;
    SourcePos pos;

    friend bool operator==(const TypeAst& a, const TypeAst& b) {
        if (a.kind != b.kind) return false;
        if (a.kind == Kind::Atom) return a.name == b.name;
        return *a.dom == *b.dom && *a.cod == *b.cod;
    }
};
using TypeAstPtr = std::shared_ptr<const TypeAst>;

struct TermAst {
    enum class Kind { Var, Ident, Lam, App, Comb } kind = Kind::Var;
    std::uint32_t index = 0;  // Var, Lam binder
    std::string name;         // Ident; Comb letter; Comb constant
    TypeAstPtr binder_type;   // Lam
    std::vector<TypeAstPtr> comb_types;
    std::optional<std::string> comb_const;
    std::shared_ptr<const TermAst> left, right;  // App: fun/arg, Lam: body in left
    SourcePos pos;

    friend bool operator==(const TermAst& a, const TermAst& b) {
        if (a.kind != b.kind) return false;
        switch (a.kind) {
            case Kind::Var: return a.index == b.index;
            case Kind::Ident: return a.name == b.name;
            case Kind::Lam: return a.index == b.index && *a.binder_type == *b.binder_type && *a.left == *b.left;
            case Kind::App: return *a.left == *b.left && *a.right == *b.right;
            case Kind::Comb: {
                if (a.name != b.name || a.comb_const != b.comb_const || a.comb_types.size() != b.comb_types.size())
                    return false;
                for (std::size_t i = 0; i < a.comb_types.size(); ++i)
                    if (!(*a.comb_types[i] == *b.comb_types[i])) return false;
                return true;
            }
        }
        return false;
    }
};
using TermAstPtr = std::shared_ptr<const TermAst>;

struct Decl {
    enum class Kind { State, Entity, Const, Free, Let } kind;
    std::string name;
    Budget budget;
    std::uint32_t index = 0;
    TypeAstPtr type;
    TermAstPtr term;
    SourcePos pos;
};

// ---------------------------------------------------------------------------
// Lexer

struct Token {
    enum class Kind { Ident, VarTok, Nat, Sym, End } kind;
    std::string text;
    SourcePos pos;
};

inline std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        SourcePos pos{line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
                ++j;
            std::string word = src.substr(i, j - i);
            bool vartok = word.size() > 1 && word[0] == 'v' &&
                          std::all_of(word.begin() + 1, word.end(), [](char d) { return std::isdigit(static_cast<unsigned char>(d)); });
            out.push_back({vartok ? Token::Kind::VarTok : Token::Kind::Ident, word, pos});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            out.push_back({Token::Kind::Nat, src.substr(i, j - i), pos});
            advance(j - i);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
            out.push_back({Token::Kind::Sym, "->", pos});
            advance(2);
            continue;
        }
        if (std::string("\\.:;=()[],").find(c) != std::string::npos) {
            out.push_back({Token::Kind::Sym, std::string(1, c), pos});
            advance(1);
            continue;
        }
        throw Error(ErrorKind::SyntaxError, pos.str() + ": unexpected character '" + std::string(1, c) + "'");
    }
    out.push_back({Token::Kind::End, "", {line, col}});
    return out;
}

// ---------------------------------------------------------------------------
// Parser

inline bool is_comb_letter(const std::string& s) { return s.size() == 1 && std::string("BCDKWSI").find(s[0]) != std::string::npos; }

class Parser {
public:
    explicit Parser(const std::string& src) : toks_(lex(src)) {}

    std::vector<Decl> program() {
        std::vector<Decl> out;
        while (!at_end()) out.push_back(decl());
        return out;
    }

    TypeAstPtr type_only() {
        auto t = type();
        expect_end();
        return t;
    }

    TermAstPtr term_only() {
        auto t = term();
        expect_end();
        return t;
    }

private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at_end() const { return peek().kind == Token::Kind::End; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool is_sym(const std::string& s, std::size_t k = 0) const {
        return peek(k).kind == Token::Kind::Sym && peek(k).text == s;
    }

    [[noreturn]] void fail(const std::string& what) const {
        const Token& t = peek();
        std::string got = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
        throw Error(ErrorKind::SyntaxError, t.pos.str() + ": expected " + what + ", got " + got);
    }

    void expect(const std::string& s) {
        if (!is_sym(s)) fail("'" + s + "'");
        next();
    }
    void expect_end() {
        if (!at_end()) fail("end of input");
    }
    std::string ident() {
        if (peek().kind != Token::Kind::Ident) fail("identifier");
        return next().text;
    }
    std::uint32_t vartok() {
        if (peek().kind != Token::Kind::VarTok) fail("variable token v<n>");
        return static_cast<std::uint32_t>(std::stoul(next().text.substr(1)));
    }

    Decl decl() {
        Decl d;
        d.pos = peek().pos;
        std::string kw = ident();
        if (kw == "state") {
            d.kind = Decl::Kind::State;
            d.name = ident();
            expect(":");
            if (peek().kind == Token::Kind::Nat) {
                auto n = std::stoul(next().text);
                if (n == 0) throw Error(ErrorKind::SyntaxError, d.pos.str() + ": a budget must be positive");
                d.budget = Budget(static_cast<std::uint32_t>(n));
            } else if (peek().kind == Token::Kind::Ident && peek().text == "omega") {
                next();
                d.budget = Budget::omega();
            } else {
                fail("a budget (natural number or omega)");
            }
        } else if (kw == "entity") {
            d.kind = Decl::Kind::Entity;
            d.name = ident();
        } else if (kw == "const") {
            d.kind = Decl::Kind::Const;
            d.name = ident();
            expect(":");
            d.type = type();
        } else if (kw == "free") {
            d.kind = Decl::Kind::Free;
            d.index = vartok();
            expect(":");
            d.type = type();
        } else if (kw == "let") {
            d.kind = Decl::Kind::Let;
            d.name = ident();
            expect("=");
            d.term = term();
        } else {
            throw Error(ErrorKind::SyntaxError, d.pos.str() + ": unknown declaration '" + kw + "'");
        }
        expect(";");
        return d;
    }

    TypeAstPtr type() {
        auto lhs = type_atom();
        if (is_sym("->")) {
            SourcePos p = peek().pos;
            next();
            auto rhs = type();
            auto t = std::make_shared<TypeAst>();
            t->kind = TypeAst::Kind::Arrow;
            t->dom = lhs;
            t->cod = rhs;
            t->pos = p;
            return t;
        }
        return lhs;
    }

    TypeAstPtr type_atom() {
        if (is_sym("(")) {
            next();
            auto t = type();
            expect(")");
            return t;
        }
        auto t = std::make_shared<TypeAst>();
        t->pos = peek().pos;
        t->name = ident();
        return t;
    }

    bool starts_atom() const {
        const Token& t = peek();
        return t.kind == Token::Kind::VarTok || t.kind == Token::Kind::Ident || (t.kind == Token::Kind::Sym && t.text == "(");
    }

    TermAstPtr term() {
        if (is_sym("\\")) {
            auto t = std::make_shared<TermAst>();
            t->pos = peek().pos;
            next();
            t->kind = TermAst::Kind::Lam;
            t->index = vartok();
            expect(":");
            t->binder_type = type();
            expect(".");
            t->left = term();
            return t;
        }
        auto head = term_atom();
        while (starts_atom() || is_sym("\\")) {
            auto a = std::make_shared<TermAst>();
            a->kind = TermAst::Kind::App;
            a->pos = head->pos;
            a->left = head;
            if (is_sym("\\")) {
                a->right = term();  // a trailing abstraction extends to the right
                return a;
            }
            a->right = term_atom();
            head = a;
        }
        return head;
    }

    TermAstPtr term_atom() {
        auto t = std::make_shared<TermAst>();
        t->pos = peek().pos;
        if (is_sym("(")) {
            next();
            auto inner = term();
            expect(")");
            return inner;
        }
        if (peek().kind == Token::Kind::VarTok) {
            t->kind = TermAst::Kind::Var;
            t->index = vartok();
            return t;
        }
        std::string name = ident();
        if (is_comb_letter(name) && is_sym("[")) {
            next();
            t->kind = TermAst::Kind::Comb;
            t->name = name;
            if (name == "D") {
                t->comb_const = ident();
                expect(";");
            }
            t->comb_types.push_back(type());
            while (is_sym(",")) {
                next();
                t->comb_types.push_back(type());
            }
            expect("]");
            return t;
        }
        t->kind = TermAst::Kind::Ident;
        t->name = name;
        return t;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

inline std::vector<Decl> parse_program(const std::string& src) { return Parser(src).program(); }
inline TermAstPtr parse_term_ast(const std::string& src) { return Parser(src).term_only(); }
inline TypeAstPtr parse_type_ast(const std::string& src) { return Parser(src).type_only(); }

// ---------------------------------------------------------------------------
// AST printing (inverse of the parser up to positions)

inline std::string print_type_ast(const TypeAst& t) {
    if (t.kind == TypeAst::Kind::Atom) return t.name;
    std::string d = print_type_ast(*t.dom);
    if (t.dom->kind == TypeAst::Kind::Arrow) d = "(" + d + ")";
    return d + " -> " + print_type_ast(*t.cod);
}

inline std::string print_term_ast(const TermAst& t) {
    switch (t.kind) {
        case TermAst::Kind::Var: return "v" + std::to_string(t.index);
        case TermAst::Kind::Ident: return t.name;
        case TermAst::Kind::Lam:
            return "\\v" + std::to_string(t.index) + ":" + print_type_ast(*t.binder_type) + ". " + print_term_ast(*t.left);
        case TermAst::Kind::App: {
            std::string f = print_term_ast(*t.left);
            if (t.left->kind == TermAst::Kind::Lam) f = "(" + f + ")";
            std::string a = print_term_ast(*t.right);
            if (t.right->kind == TermAst::Kind::App || t.right->kind == TermAst::Kind::Lam) a = "(" + a + ")";
            return f + " " + a;
        }
        case TermAst::Kind::Comb: {
            std::string s = t.name + "[";
            if (t.comb_const) s += *t.comb_const + ";";
            for (std::size_t i = 0; i < t.comb_types.size(); ++i) s += (i ? "," : "") + print_type_ast(*t.comb_types[i]);
            return s + "]";
        }
    }
    return "";
}

// ---------------------------------------------------------------------------
// Pretty-printing of elaborated terms

inline std::string print_type(const Type& t) { return t.str(); }

namespace detail {

// Renames binders whose token would capture a free variable of another type
// with the same index, so that the printed text resolves back to `t`.
// Does a free occurrence of `v` in `t` sit under a binder with the same token
// but another type?
inline bool token_shadowed(const LTerm& t, const Var& v, bool under) {
    switch (t.tag()) {
        case LTerm::Tag::Var: return under && t.var() == v;
        case LTerm::Tag::Const: return false;
        case LTerm::Tag::App: return token_shadowed(t.fun(), v, under) || token_shadowed(t.arg(), v, under);
        case LTerm::Tag::Lam:
            if (t.binder() == v) return false;
            return token_shadowed(t.body(), v, under || t.binder().index == v.index);
    }
    return false;
}

inline LTerm unclash(const LTerm& t, std::uint32_t& next) {
    switch (t.tag()) {
        case LTerm::Tag::Lam: {
            Var v = t.binder();
            LTerm body = t.body();
            // Regular binders have unbounded indices, so rename them rather
            // than an inner state binder that shadows them.
            if (v.type.is_regular() && token_shadowed(body, v, false)) {
                Var fresh{v.type, next++};
                body = substitute(body, v, LTerm::var(fresh));
                v = fresh;
            }
            for (const auto& w : free_vars(body))
                if (w.index == v.index && !(w.type == v.type)) {
                    Var fresh{v.type, next++};
                    body = substitute(body, v, LTerm::var(fresh));
                    v = fresh;
                    break;
                }
            return LTerm::lam(v, unclash(body, next));
        }
        case LTerm::Tag::App: return LTerm::app(unclash(t.fun(), next), unclash(t.arg(), next));
        default: return t;
    }
}

inline std::string print_plain(const LTerm& t) {
    switch (t.tag()) {
        case LTerm::Tag::Var: return t.var().token();
        case LTerm::Tag::Const: return t.name();
        case LTerm::Tag::Lam: return "\\" + t.binder().token() + ":" + t.binder().type.str() + ". " + print_plain(t.body());
        case LTerm::Tag::App: {
            std::string f = print_plain(t.fun());
            if (t.fun().is_lam()) f = "(" + f + ")";
            std::string a = print_plain(t.arg());
            if (t.arg().is_app() || t.arg().is_lam()) a = "(" + a + ")";
            return f + " " + a;
        }
    }
    return "";
}

}  // namespace detail

// Bound variables that would be captured by the textual scoping rule are
// renamed, so the output parses back to an α-congruent term.
inline std::string print_term(const LTerm& t) {
    std::uint32_t next = 0;
    for (const auto& v : all_vars(t)) next = std::max(next, v.index + 1);
    return detail::print_plain(detail::unclash(t, next));
}

inline std::string print_cl_term(const CLTerm& t) {
    switch (t.tag()) {
        case CLTerm::Tag::Var: return t.var().token();
        case CLTerm::Tag::Const: return t.name();
        case CLTerm::Tag::Comb: {
            const auto& s = t.spec();
            std::string out(1, comb_letter(s.kind));
            out += "[";
            if (s.dardinal_const) out += *s.dardinal_const + ";";
            for (std::size_t i = 0; i < s.type_params.size(); ++i) out += (i ? "," : "") + s.type_params[i].str();
            return out + "]";
        }
        case CLTerm::Tag::App: {
            std::string a = print_cl_term(t.arg());
            if (t.arg().is_app()) a = "(" + a + ")";
            return print_cl_term(t.fun()) + " " + a;
        }
    }
    return "";
}

// ---------------------------------------------------------------------------
// Workspace and elaboration

class Workspace {
public:
    Workspace() = default;

    static Workspace from_source(const std::string& src) {
        Workspace ws;
        for (const auto& d : parse_program(src)) ws.declare(d);
        return ws;
    }

    void declare(const Decl& d) {
        auto dup = [&](const std::string& what) {
            throw Error(ErrorKind::DuplicateDeclaration, d.pos.str() + ": " + what);
        };
        switch (d.kind) {
            case Decl::Kind::State:
            case Decl::Kind::Entity:
                if (atoms_.count(d.name)) dup("atom " + d.name + " declared twice");
                if (d.kind == Decl::Kind::State) {
                    atoms_[d.name] = Type::state(d.name);
                    param_.set(d.name, d.budget);
                } else {
                    atoms_[d.name] = Type::entity(d.name);
                }
                break;
            case Decl::Kind::Const: {
                if (sig_.count(d.name)) dup("constant " + d.name + " declared twice");
                if (lets_.count(d.name)) dup(d.name + " is already a let binding");
                Type t = elaborate_type(*d.type);
                sig_[d.name] = t;
                break;
            }
            case Decl::Kind::Free: {
                Type t = elaborate_type(*d.type);
                auto it = free_.find(d.index);
                if (it != free_.end()) {
                    if (!(it->second == t))
                        dup("v" + std::to_string(d.index) + " declared free at two different types");
                    break;
                }
                if (!param_.budget(t).admits(d.index))
                    throw Error(ErrorKind::VariableBudgetExceeded,
                                d.pos.str() + ": free v" + std::to_string(d.index) + " exceeds the budget of " + t.str());
                free_[d.index] = t;
                break;
            }
            case Decl::Kind::Let:
                if (lets_.count(d.name)) dup("let " + d.name + " declared twice");
                if (sig_.count(d.name)) dup(d.name + " is already a constant");
                lets_[d.name] = d.term;
                let_order_.push_back(d.name);
                break;
        }
    }

    const Parameter& parameter() const { return param_; }
    Parameter& parameter() { return param_; }
    const Signature& signature() const { return sig_; }
    const std::map<std::string, Type>& atoms() const { return atoms_; }
    const std::map<std::uint32_t, Type>& free_decls() const { return free_; }
    const std::vector<std::string>& let_names() const { return let_order_; }
    bool has_let(const std::string& n) const { return lets_.count(n) > 0; }
    TermAstPtr let_ast(const std::string& n) const {
        auto it = lets_.find(n);
        if (it == lets_.end()) throw Error(ErrorKind::UnknownConstant, "no let binding named " + n);
        return it->second;
    }

    Type elaborate_type(const TypeAst& t) const {
        if (t.kind == TypeAst::Kind::Atom) {
            auto it = atoms_.find(t.name);
            if (it == atoms_.end()) throw Error(ErrorKind::UnknownAtom, t.pos.str() + ": unknown atom " + t.name);
            return it->second;
        }
        Type d = elaborate_type(*t.dom), c = elaborate_type(*t.cod);
        try {
            return Type::arrow(d, c);
        } catch (const Error& e) {
            throw Error(e.kind(), t.pos.str() + ": " + e.what());
        }
    }

    Type parse_type(const std::string& src) const { return elaborate_type(*parse_type_ast(src)); }

    // Church-style typing of a λ term.
    LTerm typecheck(const TermAst& t) const {
        std::vector<Var> scope;
        std::vector<std::string> expanding;
        return elab(t, scope, expanding);
    }

    CLTerm cl_typecheck(const TermAst& t) const {
        std::vector<std::string> expanding;
        return cl_elab(t, expanding);
    }

    // A term argument: a let name or inline source.
    TermAstPtr resolve_ast(const std::string& arg) const {
        if (lets_.count(arg)) return lets_.at(arg);
        return parse_term_ast(arg);
    }
    LTerm term(const std::string& arg) const { return typecheck(*resolve_ast(arg)); }
    CLTerm cl_term(const std::string& arg) const { return cl_typecheck(*resolve_ast(arg)); }

    Var resolve_var_decl(std::uint32_t index, const Type& t, const SourcePos& pos) const {
        if (!param_.budget(t).admits(index))
            throw Error(ErrorKind::VariableBudgetExceeded,
                        pos.str() + ": v" + std::to_string(index) + " exceeds the budget of " + t.str());
        return Var{t, index};
    }

private:
    CombinatorSpec comb_spec(const TermAst& t) const {
        std::vector<Type> ts;
        for (const auto& a : t.comb_types) ts.push_back(elaborate_type(*a));
        CombKind k{};
        switch (t.name[0]) {
            case 'B': k = CombKind::B; break;
            case 'C': k = CombKind::C; break;
            case 'D': k = CombKind::D; break;
            case 'K': k = CombKind::K; break;
            case 'W': k = CombKind::W; break;
            case 'S': k = CombKind::S; break;
            case 'I': k = CombKind::I; break;
        }
        if (ts.size() != comb_param_count(k))
            throw Error(ErrorKind::SideConditionViolated, t.pos.str() + ": " + t.name + " takes " +
                                                              std::to_string(comb_param_count(k)) + " type parameters");
        return CombinatorSpec{k, ts, t.comb_const};
    }

    LTerm elab(const TermAst& t, std::vector<Var>& scope, std::vector<std::string>& expanding) const {
        auto at = [&](const Error& e) { return Error(e.kind(), t.pos.str() + ": " + e.what()); };
        switch (t.kind) {
            case TermAst::Kind::Var: {
                for (auto it = scope.rbegin(); it != scope.rend(); ++it)
                    if (it->index == t.index) return LTerm::var(*it);
                auto f = free_.find(t.index);
                if (f == free_.end())
                    throw Error(ErrorKind::UnknownVariable, t.pos.str() + ": v" + std::to_string(t.index) +
                                                                " is neither bound nor declared free");
                return LTerm::var(resolve_var_decl(t.index, f->second, t.pos));
            }
            case TermAst::Kind::Ident: {
                if (auto it = sig_.find(t.name); it != sig_.end()) return LTerm::constant(t.name, it->second);
                if (auto it = lets_.find(t.name); it != lets_.end()) {
                    if (std::find(expanding.begin(), expanding.end(), t.name) != expanding.end())
                        throw Error(ErrorKind::UnknownConstant, t.pos.str() + ": let " + t.name + " refers to itself");
                    expanding.push_back(t.name);
                    LTerm out = elab(*it->second, scope, expanding);
                    expanding.pop_back();
                    return out;
                }
                throw Error(ErrorKind::UnknownConstant, t.pos.str() + ": unknown constant " + t.name);
            }
            case TermAst::Kind::Lam: {
                Type bt = elaborate_type(*t.binder_type);
                Var v = resolve_var_decl(t.index, bt, t.pos);
                scope.push_back(v);
                LTerm body = elab(*t.left, scope, expanding);
                scope.pop_back();
                if (body.type().is_state())
                    throw Error(ErrorKind::StateBodyAbstraction, t.pos.str() + ": abstraction over a body of state type");
                return LTerm::lam(v, body);
            }
            case TermAst::Kind::App: {
                LTerm f = elab(*t.left, scope, expanding);
                LTerm a = elab(*t.right, scope, expanding);
                try {
                    return LTerm::app(f, a);
                } catch (const Error& e) {
                    throw at(e);
                }
            }
            case TermAst::Kind::Comb: {
                try {
                    return mk_lambda_combinator(comb_spec(t), param_, sig_);
                } catch (const Error& e) {
                    throw at(e);
                }
            }
        }
        return LTerm();
    }

    CLTerm cl_elab(const TermAst& t, std::vector<std::string>& expanding) const {
        auto at = [&](const Error& e) { return Error(e.kind(), t.pos.str() + ": " + e.what()); };
        switch (t.kind) {
            case TermAst::Kind::Var: {
                auto f = free_.find(t.index);
                if (f == free_.end())
                    throw Error(ErrorKind::UnknownVariable, t.pos.str() + ": v" + std::to_string(t.index) + " is not declared free");
                return CLTerm::var(resolve_var_decl(t.index, f->second, t.pos));
            }
            case TermAst::Kind::Ident: {
                if (auto it = sig_.find(t.name); it != sig_.end()) return CLTerm::constant(t.name, it->second);
                if (auto it = lets_.find(t.name); it != lets_.end()) {
                    if (std::find(expanding.begin(), expanding.end(), t.name) != expanding.end())
                        throw Error(ErrorKind::UnknownConstant, t.pos.str() + ": let " + t.name + " refers to itself");
                    expanding.push_back(t.name);
                    CLTerm out = cl_elab(*it->second, expanding);
                    expanding.pop_back();
                    return out;
                }
                throw Error(ErrorKind::UnknownConstant, t.pos.str() + ": unknown constant " + t.name);
            }
            case TermAst::Kind::Lam:
                throw Error(ErrorKind::SyntaxError, t.pos.str() + ": abstraction is not a combinatory term");
            case TermAst::Kind::App: {
                CLTerm f = cl_elab(*t.left, expanding);
                CLTerm a = cl_elab(*t.right, expanding);
                try {
                    return CLTerm::app(f, a);
                } catch (const Error& e) {
                    throw at(e);
                }
            }
            case TermAst::Kind::Comb: {
                try {
                    CombinatorSpec s = comb_spec(t);
                    const auto& p = s.type_params;
                    if (s.kind == CombKind::S) return derive_cl_starling(p[0], p[1], p[2], param_, sig_);
                    if (s.kind == CombKind::I) return derive_cl_identity(p[0], param_, sig_);
                    return CLTerm::comb(s, param_, sig_);
                } catch (const Error& e) {
                    throw at(e);
                }
            }
        }
        return CLTerm();
    }

    std::map<std::string, Type> atoms_;
    Parameter param_;
    Signature sig_;
    std::map<std::uint32_t, Type> free_;
    std::map<std::string, TermAstPtr> lets_;
    std::vector<std::string> let_order_;
};

}  // namespace mltk
