#include <gtest/gtest.h>

#include "mltk/mltk.hpp"

using namespace mltk;

namespace mltk {
inline void PrintTo(const LTerm& t, std::ostream* os) { *os << print_term(t); }
inline void PrintTo(const CLTerm& t, std::ostream* os) { *os << print_cl_term(t); }
}  // namespace mltk

namespace {

const Type S = Type::state("S");
const Type E = Type::entity("E");
const Type T = Type::entity("T");

Type ar(Type a, Type b) { return Type::arrow(a, b); }
LTerm var(Type t, std::uint32_t i) { return LTerm::var(Var{t, i}); }
LTerm con(const std::string& n, Type t) { return LTerm::constant(n, t); }
LTerm lam(Type t, std::uint32_t i, LTerm body) { return LTerm::lam(Var{t, i}, body); }
LTerm app(LTerm f, LTerm a) { return LTerm::app(f, a); }

const char* kMontague = R"(
state S : 2;
entity E;
entity T;
const c : S;
const j : E;
const p : S -> T;
const f : E -> S -> T;
const g : S -> E;
const b : S -> (S -> T) -> T;
const cc : S -> E -> T;
const d : S -> E;
free v5 : S -> T;
let dere = \v0:S. b v0 (\v1:S. cc v1 (d v0));
let ident = \v0:E. v0;
let twice = ident (ident j);
)";

ErrorKind kind_of(const std::function<void()>& f, std::string* msg = nullptr) {
    try {
        f();
    } catch (const Error& e) {
        if (msg) *msg = e.what();
        return e.kind();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorKind::TraceFailure;
}

}  // namespace

TEST(Parse, DeRe) {
    Workspace ws = Workspace::from_source(kMontague);
    LTerm t = ws.term("dere");
    LTerm b = con("b", ar(S, ar(ar(S, T), T))), cc = con("cc", ar(S, ar(E, T))), d = con("d", ar(S, E));
    EXPECT_EQ(t, lam(S, 0, app(app(b, var(S, 0)), lam(S, 1, app(app(cc, var(S, 1)), app(d, var(S, 0)))))));
    EXPECT_EQ(t.type(), ar(S, T));
    EXPECT_EQ(ws.let_names(), (std::vector<std::string>{"dere", "ident", "twice"}));
}

TEST(Parse, LetsAreInlined) {
    Workspace ws = Workspace::from_source(kMontague);
    LTerm id = lam(E, 0, var(E, 0));
    EXPECT_EQ(ws.term("twice"), app(id, app(id, con("j", E))));
    EXPECT_EQ(kind_of([] { Workspace::from_source("entity E; let a = a;").term("a"); }), ErrorKind::UnknownConstant);
}

TEST(Parse, VariableResolution) {
    Workspace ws = Workspace::from_source(kMontague);
    // Innermost binder with the token wins.
    EXPECT_EQ(ws.term("\\v0:S. \\v0:E. v0"), lam(S, 0, lam(E, 0, var(E, 0))));
    // Otherwise a free declaration.
    EXPECT_EQ(ws.term("\\v1:S. v5 v1"), lam(S, 1, app(var(ar(S, T), 5), var(S, 1))));
    EXPECT_EQ(kind_of([&] { ws.term("v9"); }), ErrorKind::UnknownVariable);
    EXPECT_EQ(kind_of([&] { ws.term("\\v2:S. p v2"); }), ErrorKind::VariableBudgetExceeded);
    EXPECT_EQ(kind_of([&] { ws.term("\\v0:E. c"); }), ErrorKind::StateBodyAbstraction);
    EXPECT_EQ(kind_of([&] { ws.term("p j"); }), ErrorKind::IllTypedApplication);
    EXPECT_EQ(kind_of([&] { ws.term("\\v0:Q. j"); }), ErrorKind::UnknownAtom);
}

TEST(Parse, Types) {
    Workspace ws = Workspace::from_source(kMontague);
    EXPECT_EQ(ws.parse_type("S -> (S -> T) -> T"), ar(S, ar(ar(S, T), T)));
    EXPECT_EQ(ws.parse_type("(S -> T) -> T").str(), "(S -> T) -> T");
    EXPECT_EQ(kind_of([&] { ws.parse_type("T -> S"); }), ErrorKind::StateCodomain);
}

TEST(Parse, CombinatorLiterals) {
    Workspace ws = Workspace::from_source(kMontague);
    EXPECT_EQ(ws.term("K[E,S]"), lam(E, 0, lam(S, 0, var(E, 0))));
    EXPECT_EQ(ws.term("D[c;E,S,T]").type(), ar(ar(E, ar(S, T)), ar(E, T)));
    CLTerm cl = ws.cl_term("C[E,S,T] f c");
    EXPECT_EQ(cl.type(), ar(E, T));
    // In combinatory terms I and S stand for their derived forms.
    EXPECT_EQ(ws.cl_term("I[E]"), derive_cl_identity(E, ws.parameter(), ws.signature()));
    EXPECT_EQ(kind_of([&] { ws.cl_term("\\v0:E. v0"); }), ErrorKind::SyntaxError);
    EXPECT_EQ(kind_of([] { Workspace::from_source("state S : 1; entity T; let x = C[S,S,T];").term("x"); }),
              ErrorKind::SideConditionViolated);
}

TEST(Parse, ErrorsCarryPositions) {
    std::string msg;
    EXPECT_EQ(kind_of([] { parse_program("entity E;\nlet x = \\v0:E. ;"); }, &msg), ErrorKind::SyntaxError);
    EXPECT_NE(msg.find("2:"), std::string::npos) << msg;
    EXPECT_EQ(kind_of([] { parse_program("entity E;\n  $"); }, &msg), ErrorKind::SyntaxError);
    EXPECT_NE(msg.find("2:3"), std::string::npos) << msg;
    Workspace ws = Workspace::from_source(kMontague);
    EXPECT_EQ(kind_of([&] { ws.term("\\v0:S.\n  p j"); }, &msg), ErrorKind::IllTypedApplication);
    EXPECT_NE(msg.find("2:"), std::string::npos) << msg;
}

TEST(Parse, DuplicateDeclarations) {
    EXPECT_EQ(kind_of([] { Workspace::from_source("entity E; entity E;"); }), ErrorKind::DuplicateDeclaration);
    EXPECT_EQ(kind_of([] { Workspace::from_source("entity E; const j : E; const j : E;"); }), ErrorKind::DuplicateDeclaration);
    EXPECT_EQ(kind_of([] { Workspace::from_source("entity E; entity T; free v0 : E; free v0 : T;"); }),
              ErrorKind::DuplicateDeclaration);
    EXPECT_EQ(kind_of([] { Workspace::from_source("entity E; const j : E; let j = j;"); }), ErrorKind::DuplicateDeclaration);
    EXPECT_NO_THROW(Workspace::from_source("entity E; free v0 : E; free v0 : E;"));
    EXPECT_EQ(kind_of([] { Workspace::from_source("state S : 1; free v1 : S;"); }), ErrorKind::VariableBudgetExceeded);
}

TEST(Print, ShadowedBindersAreRenamed) {
    // λv0:S.λv0:E. v0 mentions the outer S binder nowhere, so it prints as is.
    EXPECT_EQ(print_term(lam(S, 0, lam(E, 0, var(E, 0)))), "\\v0:S. \\v0:E. v0");
    // An inner E binder hiding an outer use of v0:S is renamed.
    LTerm t = lam(S, 0, app(lam(E, 0, app(con("p", ar(S, T)), var(S, 0))), con("j", E)));
    Workspace ws = Workspace::from_source(kMontague);
    EXPECT_TRUE(alpha_congruent(ws.term(print_term(t)), t)) << print_term(t);
}

TEST(Print, StateBinderWithoutToken) {
    // Both S tokens are taken by free variables of other types, so the binder
    // is printed with an index past the budget.
    LTerm t = lam(S, 1, app(var(ar(E, E), 0), app(var(ar(E, E), 1), con("j", E))));
    std::string printed = print_term(t);
    EXPECT_EQ(printed.find("\\v1:S"), std::string::npos) << printed;
    Workspace ws = Workspace::from_source("state S : 3; entity E; const j : E; free v0 : E -> E; free v1 : E -> E;");
    EXPECT_TRUE(alpha_congruent(ws.term(printed), t)) << printed;
}

// Properties: printing then parsing recovers the term, and the AST printer is
// a right inverse of the parser.
TEST(SyntaxProperties, PrintParseRoundtrip) {
    Montague m;
    Parameter p = Parameter().set("S", Budget(2));
    GenConfig cfg{m.pool(), p, m.signature()};
    LambdaGenerator gen(cfg, 71);
    std::size_t checked = 0;
    for (int i = 0; i < 600 && checked < 300; ++i) {
        LTerm t = gen.term(14);
        if (!is_term_of(t, p, &cfg.sig)) continue;
        // Free declarations are per index, so skip terms with clashing free indices.
        std::map<std::uint32_t, Type> frees;
        bool clash = false;
        for (const auto& v : free_vars(t))
            if (!frees.emplace(v.index, v.type).second) clash = true;
        // A state binder sharing its index with a free variable of another type
        // may have no in-budget token; see StateBinderWithoutToken.
        std::function<void(const LTerm&)> scan = [&](const LTerm& u) {
            if (u.is_lam()) {
                auto it = frees.find(u.binder().index);
                if (u.binder().type.is_state() && it != frees.end() && !(it->second == u.binder().type)) clash = true;
                scan(u.body());
            } else if (u.is_app()) {
                scan(u.fun());
                scan(u.arg());
            }
        };
        scan(t);
        if (clash) continue;
        std::string src = "state S : 2; entity E; entity T;";
        for (const auto& [name, ty] : cfg.sig) src += " const " + name + " : " + ty.str() + ";";
        for (const auto& [idx, ty] : frees) src += " free v" + std::to_string(idx) + " : " + ty.str() + ";";
        Workspace ws = Workspace::from_source(src);
        std::string printed = print_term(t);
        LTerm back = ws.term(printed);
        EXPECT_TRUE(alpha_congruent(back, t)) << printed;
        EXPECT_EQ(print_term(back), printed);
        TermAstPtr ast = parse_term_ast(printed);
        EXPECT_EQ(*parse_term_ast(print_term_ast(*ast)), *ast) << printed;
        ++checked;
    }
    EXPECT_GT(checked, 100u);
}

TEST(SyntaxProperties, ClPrintParseRoundtrip) {
    Montague m;
    Parameter p = Parameter().set("S", Budget(2));
    CLGenerator gen(GenConfig{m.pool(), p, m.signature()}, 72);
    std::size_t checked = 0;
    for (int i = 0; i < 400; ++i) {
        CLTerm t = gen.term(10);
        std::map<std::uint32_t, Type> frees;
        bool clash = false;
        for (const auto& v : cl_vars(t))
            if (!frees.emplace(v.index, v.type).second) clash = true;
        if (clash) continue;
        std::string src = "state S : 2; entity E; entity T;";
        for (const auto& [name, ty] : m.signature()) src += " const " + name + " : " + ty.str() + ";";
        for (const auto& [idx, ty] : frees) src += " free v" + std::to_string(idx) + " : " + ty.str() + ";";
        Workspace ws = Workspace::from_source(src);
        EXPECT_EQ(ws.cl_term(print_cl_term(t)), t) << print_cl_term(t);
        ++checked;
    }
    EXPECT_GT(checked, 100u);
}
