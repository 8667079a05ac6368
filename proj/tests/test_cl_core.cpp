#include <gtest/gtest.h>

#include "mltk/mltk.hpp"

using namespace mltk;

namespace mltk {
inline void PrintTo(const CLTerm& t, std::ostream* os) { *os << t.str(); }
}  // namespace mltk

namespace {

const Type S = Type::state("S");
const Type E = Type::entity("E");
const Type T = Type::entity("T");

Type ar(Type a, Type b) { return Type::arrow(a, b); }
CLTerm cv(Type t, std::uint32_t i) { return CLTerm::var(Var{t, i}); }
CLTerm cc(const std::string& n, Type t) { return CLTerm::constant(n, t); }
CLTerm ap(CLTerm f, CLTerm a) { return CLTerm::app(f, a); }
CLTerm ap(CLTerm f, CLTerm a, CLTerm b) { return ap(ap(f, a), b); }
CLTerm ap(CLTerm f, CLTerm a, CLTerm b, CLTerm c) { return ap(ap(ap(f, a), b), c); }
Parameter budget_s(std::uint32_t n) { return Parameter().set("S", Budget(n)); }

const Parameter kP = budget_s(2);
const Signature kSig = Montague().signature();

CLTerm comb(const CombinatorSpec& s) { return CLTerm::comb(s, kP, kSig); }

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorKind::TraceFailure;
}

CLTerm one_step(const CLTerm& t) {
    auto r = first_weak_redex(t);
    EXPECT_TRUE(r.has_value());
    return contract_weak(t, *r);
}

std::vector<CLTerm> random_cl_terms(std::uint64_t seed, std::size_t n, std::size_t size = 12) {
    Montague m;
    CLGenerator gen(GenConfig{m.pool(), kP, m.signature()}, seed);
    std::vector<CLTerm> out;
    while (out.size() < n) out.push_back(gen.term(size));
    return out;
}

}  // namespace

TEST(WeakRules, EachRule) {
    CLTerm a = cv(E, 0), b = cv(S, 0);
    EXPECT_EQ(one_step(ap(comb(comb_K(E, S)), a, b)), a);

    CLTerm f = cv(ar(E, ar(S, T)), 1);
    EXPECT_EQ(one_step(ap(comb(comb_C(E, S, T)), f, b, a)), ap(f, a, b));
    EXPECT_EQ(one_step(ap(comb(comb_D("c", E, S, T)), f, a)), ap(f, a, cc("c", S)));

    CLTerm g = cv(ar(S, ar(S, T)), 1);
    EXPECT_EQ(one_step(ap(comb(comb_W(S, T)), g, b)), ap(g, b, b));

    CLTerm h = cv(ar(E, T), 0), k = cv(ar(S, E), 0);
    EXPECT_EQ(one_step(ap(comb(comb_B(S, E, T)), h, k, b)), ap(h, ap(k, b)));
}

TEST(WeakRules, CardinalMeetsConstant) {
    CLTerm f = cv(ar(E, ar(S, T)), 1);
    CLTerm t = ap(comb(comb_C(E, S, T)), f, cc("c", S));
    auto r = weak_redex_at(t);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->rule, WeakRule::CtoD);
    EXPECT_EQ(weak_contractum(*r), ap(comb(comb_D("c", E, S, T)), f));
    // A variable in the same place is not a redex.
    EXPECT_FALSE(weak_redex_at(ap(comb(comb_C(E, S, T)), f, cv(S, 0))));
}

TEST(WeakRules, NoPrimitiveStarlingOrIdentity) {
    EXPECT_EQ(kind_of([] { CLTerm::comb(comb_I(E), kP, kSig); }), ErrorKind::SideConditionViolated);
    EXPECT_EQ(kind_of([] { CLTerm::comb(comb_S(E, T, S), kP, kSig); }), ErrorKind::SideConditionViolated);
    EXPECT_EQ(kind_of([] { ap(cv(E, 0), cv(E, 1)); }), ErrorKind::IllTypedApplication);
}

TEST(Derived, IdentityAndStarling) {
    CLTerm x = cv(E, 4);
    EXPECT_EQ(weak_normalize(ap(derive_cl_identity(E, kP, kSig), x)), x);
    CLTerm p = cv(ar(S, ar(E, T)), 1), q = cv(ar(S, E), 1), r = cv(S, 1);
    CLTerm s = derive_cl_starling(E, T, S, kP, kSig);
    EXPECT_EQ(weak_normalize(ap(s, p, q, r)), ap(p, r, ap(q, r)));
    EXPECT_TRUE(is_cl_term_of(s, budget_s(1), kSig));
}

TEST(Bracket, Cases) {
    Var v{S, 0}, w{S, 1};
    CLTerm u = cv(ar(S, T), 3);
    // v absent
    EXPECT_EQ(cl_bracket(v, u, kP, kSig), ap(comb(comb_K(ar(S, T), S)), u));
    // W case: [v](u v) = W (K u)
    EXPECT_EQ(cl_bracket(v, ap(u, cv(S, 0)), kP, kSig), ap(comb(comb_W(S, T)), ap(comb(comb_K(ar(S, T), S)), u)));
    // C case with a state variable argument
    CLTerm h = cv(ar(S, ar(S, T)), 3);
    CLTerm c_form = cl_bracket(v, ap(h, cv(S, 0), CLTerm::var(w)), kP, kSig);
    EXPECT_EQ(c_form.fun().fun(), comb(comb_C(S, S, T)));
    // D case with a state constant argument
    CLTerm d_form = cl_bracket(v, ap(h, cv(S, 0), cc("c", S)), kP, kSig);
    EXPECT_EQ(d_form.fun(), comb(comb_D("c", S, S, T)));
    // Identity
    EXPECT_EQ(cl_bracket(Var{E, 0}, cv(E, 0), kP, kSig), derive_cl_identity(E, kP, kSig));
    EXPECT_EQ(kind_of([&] { cl_bracket(Var{E, 0}, cv(S, 0), kP, kSig); }), ErrorKind::StateBodyAbstraction);
}

TEST(Substitution, Simultaneous) {
    CLTerm h = cv(ar(E, ar(E, T)), 0);
    CLTerm t = ap(h, cv(E, 0), cv(E, 1));
    std::map<Var, CLTerm> swap{{Var{E, 0}, cv(E, 1)}, {Var{E, 1}, cv(E, 0)}};
    EXPECT_EQ(cl_substitute(t, swap), ap(h, cv(E, 1), cv(E, 0)));
    EXPECT_EQ(kind_of([&] { cl_substitute(t, {{Var{E, 0}, cv(S, 0)}}); }), ErrorKind::IllTypedApplication);
}

// Properties over generated CL terms.

TEST(ClProperties, GeneratedTermsAreWellFormed) {
    for (const auto& t : random_cl_terms(41, 300)) EXPECT_TRUE(is_cl_term_of(t, kP, kSig)) << t.str();
}

TEST(ClProperties, SubjectReduction) {
    std::size_t steps = 0;
    for (const auto& t : random_cl_terms(42, 300))
        for (const auto& r : find_weak_redexes(t)) {
            CLTerm n = contract_weak(t, r);
            EXPECT_EQ(n.type(), t.type());
            EXPECT_TRUE(is_cl_term_of(n, kP, kSig)) << t.str() << " -> " << n.str();
            ++steps;
        }
    EXPECT_GT(steps, 100u);
}

TEST(ClProperties, RandomWalksAgree) {
    std::mt19937_64 rng(43);
    for (const auto& t : random_cl_terms(43, 300)) {
        auto w1 = random_weak_walk(t, 400, rng), w2 = random_weak_walk(t, 400, rng);
        if (!is_weak_normal(w1.back()) || !is_weak_normal(w2.back())) continue;
        EXPECT_EQ(w1.back(), w2.back()) << t.str();
        EXPECT_EQ(weak_normalize(t), w1.back());
    }
}

TEST(ClProperties, Takahashi) {
    std::mt19937_64 rng(44);
    for (const auto& t : random_cl_terms(44, 300)) {
        CLTerm star = complete_development(t);
        EXPECT_TRUE(parallel_reduces(t, star)) << t.str();
        for (int i = 0; i < 3; ++i) {
            CLTerm n = random_parallel_step(t, rng);
            EXPECT_TRUE(parallel_reduces(t, n)) << t.str() << " => " << n.str();
            EXPECT_TRUE(parallel_reduces(n, star)) << t.str() << " => " << n.str() << " =/=> " << star.str();
        }
        for (const auto& r : find_weak_redexes(t)) EXPECT_TRUE(parallel_reduces(t, contract_weak(t, r)));
    }
}

TEST(ClProperties, BracketBehaves) {
    std::size_t checked = 0;
    for (const auto& t : random_cl_terms(45, 400)) {
        if (t.type().is_state()) continue;
        for (const auto& v : cl_vars(t)) {
            CLTerm abs = cl_bracket(v, t, kP, kSig);
            EXPECT_FALSE(cl_occurs(v, abs));
            EXPECT_TRUE(is_cl_term_of(abs, kP, kSig));
            EXPECT_TRUE(decide_weak_equal(ap(abs, CLTerm::var(v)), t)) << v.str() << " in " << t.str();
            ++checked;
        }
    }
    EXPECT_GT(checked, 50u);
}

TEST(ClProperties, StepsCommuteWithSubstitutionAndPermutation) {
    auto terms = random_cl_terms(46, 300);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        auto vs = cl_vars(t);
        if (vs.empty()) continue;
        // Substitute each variable by a generated term of its type, when one is at hand.
        std::map<Var, CLTerm> sigma;
        for (const auto& v : vs)
            for (std::size_t j = 0; j < terms.size(); j += 7)
                if (terms[j].type() == v.type && !v.type.is_state()) {
                    sigma[v] = terms[j];
                    break;
                }
        // Swap indices 0 and 1 within every type that occurs.
        VarPermutation pi;
        for (const auto& v : vs)
            if (pi(Var{v.type, 0}) == Var{v.type, 0}) pi = pi.compose(VarPermutation::swap(Var{v.type, 0}, Var{v.type, 1}));
        for (const auto& r : find_weak_redexes(t)) {
            CLTerm n = contract_weak(t, r);
            EXPECT_TRUE(decide_weak_equal(cl_substitute(t, sigma), cl_substitute(n, sigma)));
            EXPECT_TRUE(decide_weak_equal(cl_apply_permutation(t, pi), cl_apply_permutation(n, pi)));
        }
    }
}
