#include <gtest/gtest.h>

#include <random>

#include "mltk/mltk.hpp"

using namespace mltk;

namespace {

const Type S = Type::state("S");
const Type E = Type::entity("E");
const Type T = Type::entity("T");

Type ar(Type a, Type b) { return Type::arrow(a, b); }
LTerm var(Type t, std::uint32_t i) { return LTerm::var(Var{t, i}); }
LTerm con(const std::string& n, Type t) { return LTerm::constant(n, t); }
LTerm lam(Type t, std::uint32_t i, LTerm body) { return LTerm::lam(Var{t, i}, body); }
LTerm app(LTerm f, LTerm a) { return LTerm::app(f, a); }
Parameter budget_s(std::uint32_t n) { return Parameter().set("S", Budget(n)); }

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorKind::TraceFailure;
}

void expect_regular_short(const Trace& tr) {
    for (const auto& s : tr.steps) {
        if (s.kind != TraceStep::Kind::Beta) continue;
        EXPECT_TRUE(s.regular);
        EXPECT_LE(s.distance, 2u);
    }
}

std::size_t max_beta_distance(const Trace& tr) {
    std::size_t m = 0;
    for (const auto& s : tr.steps)
        if (s.kind == TraceStep::Kind::Beta) m = std::max(m, s.distance);
    return m;
}

const Signature kSig{{"c", S}, {"j", E}};

}  // namespace

TEST(Combinators, KestrelForm) {
    LTerm k = mk_lambda_combinator(comb_K(E, S), budget_s(1), {});
    EXPECT_EQ(k, lam(E, 0, lam(S, 0, var(E, 0))));
    EXPECT_EQ(k.type(), ar(E, ar(S, E)));
    EXPECT_TRUE(is_term_of(k, budget_s(1)));
    EXPECT_EQ(kind_of([] { mk_lambda_combinator(comb_K(S, E), budget_s(1), {}); }), ErrorKind::SideConditionViolated);
}

TEST(Combinators, CardinalNeedsTwoStateVariables) {
    EXPECT_EQ(kind_of([] { mk_lambda_combinator(comb_C(S, S, T), budget_s(1), {}); }), ErrorKind::SideConditionViolated);
    LTerm c = mk_lambda_combinator(comb_C(S, S, T), budget_s(2), {});
    EXPECT_EQ(c.type(), ar(ar(S, ar(S, T)), ar(S, ar(S, T))));
    EXPECT_TRUE(is_term_of(c, budget_s(2)));
    // Over distinct types one variable of each suffices.
    EXPECT_TRUE(is_term_of(mk_lambda_combinator(comb_C(E, S, T), budget_s(1), {}), budget_s(1)));
}

TEST(Combinators, DardinalForm) {
    LTerm d = mk_lambda_combinator(comb_D("c", E, S, T), budget_s(1), kSig);
    Type x = ar(E, ar(S, T));
    EXPECT_EQ(d, lam(x, 0, lam(E, 0, app(app(var(x, 0), var(E, 0)), con("c", S)))));
    EXPECT_EQ(d.type(), ar(x, ar(E, T)));
    EXPECT_EQ(kind_of([] { mk_lambda_combinator(comb_D("j", E, S, T), budget_s(1), kSig); }),
              ErrorKind::SideConditionViolated);
    EXPECT_EQ(kind_of([] { mk_lambda_combinator(comb_D("c", E, E, T), budget_s(1), kSig); }),
              ErrorKind::SideConditionViolated);
}

TEST(Combinators, SideConditions) {
    EXPECT_EQ(kind_of([] { mk_lambda_combinator(comb_I(S), budget_s(1), {}); }), ErrorKind::SideConditionViolated);
    EXPECT_EQ(kind_of([] { mk_lambda_combinator(comb_W(S, S), budget_s(1), {}); }), ErrorKind::SideConditionViolated);
    EXPECT_EQ(kind_of([] { mk_lambda_combinator(comb_B(S, S, T), budget_s(1), {}); }), ErrorKind::SideConditionViolated);
    EXPECT_EQ(kind_of([] { mk_lambda_combinator(comb_S(S, T, E), budget_s(1), {}); }), ErrorKind::SideConditionViolated);
    EXPECT_NO_THROW(mk_lambda_combinator(comb_S(E, T, S), budget_s(1), {}));
}

TEST(Combinators, WarblerOnStates) {
    CombinatorSpec w = comb_W(S, T);
    Parameter p = budget_s(1);
    auto args = generic_args(w, p);
    Trace tr = verify_combinator_behaviour(w, args, p, {});
    EXPECT_EQ(tr.end(), behaviour_result(w, args));
    expect_regular_short(tr);
    // The state argument has to cross the binder of the same variable.
    EXPECT_GE(max_beta_distance(tr), 1u);
}

TEST(Combinators, CardinalOnStates) {
    CombinatorSpec c = comb_C(S, S, T);
    Parameter p = budget_s(2);
    auto args = generic_args(c, p);
    Trace tr = verify_combinator_behaviour(c, args, p, {});
    EXPECT_EQ(tr.end(), behaviour_result(c, args));
    expect_regular_short(tr);
}

TEST(Combinators, CardinalToDardinal) {
    Parameter p = budget_s(1);
    LTerm pa = var(ar(E, ar(S, T)), 9);
    Trace tr = verify_cardinal_to_dardinal(E, S, T, "c", pa, p, kSig);
    std::size_t betas = 0;
    for (const auto& s : tr.steps)
        if (s.kind == TraceStep::Kind::Beta) {
            ++betas;
            EXPECT_EQ(s.distance, 1u);
        }
    EXPECT_EQ(betas, 1u);
}

TEST(Combinators, DerivedStarling) {
    Parameter p = budget_s(1);
    LTerm s = derive_starling(E, T, S, p, {});
    EXPECT_TRUE(is_term_of(s, p));
    EXPECT_EQ(s.type(), combinator_type(comb_S(E, T, S)));
    LTerm direct = combinator_body_over(comb_S(E, T, S), canonical_binders(combinator_binder_types(comb_S(E, T, S))));
    EXPECT_TRUE(decide_beta_eta_equal(s, direct));
    EXPECT_EQ(kind_of([&] { derive_starling(S, T, E, p, {}); }), ErrorKind::SideConditionViolated);
}

TEST(Combinators, DerivedIdentity) {
    Parameter p = budget_s(1);
    for (Type b : {E, ar(S, T), ar(E, ar(S, E))}) {
        LTerm id = derive_identity(b, p, {});
        EXPECT_TRUE(is_term_of(id, p)) << b.str();
        EXPECT_TRUE(decide_beta_eta_equal(id, lam(b, 0, var(b, 0)))) << b.str();
    }
}

TEST(Combinatorial, ChainReplays) {
    Parameter p = budget_s(2);
    Signature sig{{"b", ar(S, ar(ar(S, T), T))}, {"cc", ar(S, ar(E, T))}, {"d", ar(S, E)}};
    LTerm dere = lam(S, 0, app(app(con("b", sig.at("b")), var(S, 0)),
                              lam(S, 1, app(app(con("cc", sig.at("cc")), var(S, 1)), app(con("d", sig.at("d")), var(S, 0))))));
    auto c = to_combinatorial(dere, p, sig);
    EXPECT_EQ(c.chain.start, c.term);
    EXPECT_EQ(c.chain.end(), dere);
    EXPECT_EQ(to_lambda(c.skeleton, p, sig), c.term);
    Trace again = replay(c.chain.start, c.chain.steps);
    EXPECT_EQ(again.end(), dere);
    for (const auto& s : c.chain.steps)
        if (s.kind == TraceStep::Kind::Beta) EXPECT_TRUE(s.regular);
}

TEST(Express, OmegaToUpsilon) {
    Parameter p = budget_s(1);
    Signature sig{{"c", S}};
    Type f = ar(S, ar(S, T));
    // λv0:S.λv1:S. v3 v1 v0 needs two state variables as written.
    LTerm n = lam(S, 0, lam(S, 1, app(app(var(f, 3), var(S, 1)), var(S, 0))));
    EXPECT_FALSE(is_term_of(n, p, &sig));
    LTerm out = express_omega_to_upsilon(n, p, sig);
    EXPECT_TRUE(is_term_of(out, p, &sig)) << print_term(out);
    EXPECT_TRUE(decide_beta_eta_equal(out, n));
    EXPECT_EQ(kind_of([&] { express_omega_to_upsilon(var(S, 1), p, sig); }), ErrorKind::IllegalFreeVariable);
}

TEST(Express, NiceCardinal) {
    Type b = Type::state("B"), c = Type::entity("C");
    Parameter one = Parameter().set("B", Budget(1)), two = Parameter().set("B", Budget(2));
    LTerm nice = nice_cardinal_replacement(b, c);
    EXPECT_TRUE(is_term_of(nice, one));
    EXPECT_TRUE(decide_beta_eta_equal(nice, mk_lambda_combinator(comb_C(b, b, c), two, {})));
    EXPECT_TRUE(cardinal_needs_replacement(comb_C(b, b, c), one));
    EXPECT_FALSE(cardinal_needs_replacement(comb_C(b, b, c), two));
}

TEST(Express, LambdaToMlt) {
    Type ss = Type::arrow_unchecked(S, S);
    LTerm p = con("p", ar(S, T));
    // (λf:S→S. λu:S. p (f u)) (λu:S. u)
    LTerm body = lam(S, 0, app(p, app(var(ss, 0), var(S, 0))));
    LTerm n = app(LTerm::lam(Var{ss, 0}, body), lam(S, 0, var(S, 0)));
    LTerm out = express_lambda_to_mlt(n);
    // The βη-normal form η-contracts λu. p u.
    EXPECT_EQ(out, p);
    EXPECT_TRUE(is_term_of(out, Parameter::omega()));
    EXPECT_EQ(kind_of([&] { express_lambda_to_mlt(var(ss, 0)); }), ErrorKind::IllegalFreeVariable);
}

// Behaviour holds for every combinator instance that passes its side
// conditions, over randomly chosen type parameters.
TEST(CombinatorProperties, BehaviourOverRandomTypes) {
    std::vector<Type> pool{S, E, T, ar(S, T), ar(E, T), ar(S, E), ar(E, ar(S, T))};
    Signature sig{{"c", S}};
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const CombKind kinds[] = {CombKind::I, CombKind::K, CombKind::C, CombKind::D, CombKind::W, CombKind::B};
    std::size_t checked = 0;
    for (int iter = 0; iter < 400; ++iter) {
        CombKind k = kinds[iter % 6];
        std::vector<Type> tp;
        for (std::size_t i = 0; i < comb_param_count(k); ++i) tp.push_back(pool[pick(rng)]);
        CombinatorSpec s{k, tp, k == CombKind::D ? std::optional<std::string>("c") : std::nullopt};
        Parameter p = budget_s(1 + iter % 2);
        try {
            check_side_conditions(s, p, sig);
        } catch (const Error&) {
            continue;
        }
        LTerm form = mk_lambda_combinator(s, p, sig);
        EXPECT_TRUE(is_term_of(form, p, &sig)) << s.str();
        EXPECT_EQ(form.type(), combinator_type(s)) << s.str();
        auto args = generic_args(s, p);
        Trace tr = verify_combinator_behaviour(s, args, p, sig);
        EXPECT_EQ(tr.end(), behaviour_result(s, args)) << s.str();
        expect_regular_short(tr);
        ++checked;
    }
    EXPECT_GT(checked, 100u);
}
