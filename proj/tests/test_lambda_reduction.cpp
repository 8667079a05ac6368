#include <gtest/gtest.h>

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

const LTerm b = con("b", ar(S, ar(ar(S, T), T)));
const LTerm cc = con("cc", ar(S, ar(E, T)));
const LTerm d = con("d", ar(S, E));
const LTerm u = var(S, 0);

// (λx:E.λu:S. b u (λv:S. cc v x)) (d u) u
LTerm de_re_inner() {
    LTerm l = app(app(b, u), lam(S, 1, app(app(cc, var(S, 1)), var(E, 0))));
    return app(app(lam(E, 0, lam(S, 0, l)), app(d, u)), u);
}

std::vector<LTerm> random_terms(std::uint64_t seed, std::size_t n, std::uint32_t budget = 2, double bias = 0.6) {
    Montague m;
    GenConfig cfg{m.pool(), budget_s(budget), m.signature()};
    cfg.redex_bias = bias;
    LambdaGenerator gen(cfg, seed);
    std::vector<LTerm> out;
    while (out.size() < n) {
        LTerm t = gen.term(16);
        if (is_term_of(t, cfg.param, &cfg.sig)) out.push_back(t);
    }
    return out;
}

std::set<std::string> redex_keys(const LTerm& t, ReductionMode m) {
    std::set<std::string> out;
    for (const auto& r : find_beta_redexes(t, m)) out.insert(path_str(r.position) + "/" + std::to_string(r.distance));
    return out;
}

}  // namespace

TEST(Redexes, DeReDistanceOne) {
    auto rs = find_beta_redexes(de_re_inner(), ReductionMode::Beta);
    std::size_t d0 = 0, d1 = 0;
    for (const auto& r : rs) (r.distance == 0 ? d0 : d1) += r.distance <= 1;
    EXPECT_EQ(d0, 0u);
    EXPECT_EQ(d1, 1u);
    const BetaRedex* one = nullptr;
    for (const auto& r : rs)
        if (r.distance == 1) one = &r;
    ASSERT_NE(one, nullptr);
    EXPECT_TRUE(one->regular);
    LTerm expect = app(lam(E, 0, app(app(b, u), lam(S, 1, app(app(cc, var(S, 1)), var(E, 0))))), app(d, u));
    EXPECT_EQ(contract(de_re_inner(), *one), expect);
    EXPECT_TRUE(find_beta_redexes(de_re_inner(), ReductionMode::Beta0).empty());
}

TEST(Redexes, LackOfVariables) {
    Type bb = Type::state("B"), c = Type::entity("C");
    Var big_v{ar(ar(bb, c), c), 0}, v{ar(bb, ar(bb, c)), 0};
    LTerm inner = lam(bb, 0, app(LTerm::var(big_v), app(LTerm::var(v), var(bb, 0))));
    LTerm op = lam(ar(bb, c), 0, app(var(ar(bb, c), 0), var(bb, 0)));
    LTerm t = app(LTerm::lam(big_v, inner), op);
    Parameter p = Parameter().set("B", Budget(1));
    EXPECT_TRUE(is_term_of(t, p));
    EXPECT_TRUE(find_redexes(t, p, ReductionMode::Beta).empty());
}

TEST(Redexes, Eta) {
    LTerm uf = var(ar(E, T), 0);
    LTerm t = lam(E, 0, app(uf, var(E, 0)));
    auto rs = find_redexes(t, Parameter::omega(), ReductionMode::Eta);
    ASSERT_EQ(rs.size(), 1u);
    EXPECT_TRUE(std::holds_alternative<EtaRedex>(rs[0]));
    EXPECT_TRUE(redex_position(rs[0]).empty());
    EXPECT_EQ(contract(t, rs[0]), uf);
    // The binder occurring in the head blocks η.
    LTerm f2 = var(ar(E, ar(E, T)), 0);
    EXPECT_TRUE(find_redexes(lam(E, 0, app(app(f2, var(E, 0)), var(E, 0))), Parameter::omega(), ReductionMode::Eta).empty());
}

TEST(Redexes, IdentityBird) {
    LTerm p = con("j", E);
    LTerm t = app(lam(E, 0, var(E, 0)), p);
    auto next = step(t, Parameter::omega(), ReductionMode::Beta0);
    ASSERT_TRUE(next);
    EXPECT_EQ(*next, p);
    EXPECT_FALSE(step(p, Parameter::omega(), ReductionMode::Beta0));
}

TEST(Redexes, CardinalToDardinal) {
    Parameter p = budget_s(2);
    LTerm card = mk_lambda_combinator(comb_C(E, S, T), p, {});
    LTerm pp = var(ar(E, ar(S, T)), 0);
    LTerm c = con("c", S);
    LTerm t = app(app(card, pp), c);
    auto next = step(t, p, ReductionMode::Beta);
    ASSERT_TRUE(next);
    // (λx.λz. x z c) P
    Var x{ar(E, ar(S, T)), 0}, z{E, 0};
    LTerm expect = app(LTerm::lams({x, z}, app(app(LTerm::var(x), LTerm::var(z)), c)), pp);
    EXPECT_TRUE(alpha_congruent(*next, expect)) << print_term(*next);
}

TEST(Redexes, StaleRedex) {
    auto rs = find_beta_redexes(de_re_inner(), ReductionMode::Beta);
    ASSERT_FALSE(rs.empty());
    EXPECT_THROW(contract(con("j", E), rs[0]), Error);
}

TEST(Normalization, DeRe) {
    LTerm src = lam(S, 0, de_re_inner());
    LTerm expect = lam(S, 0, app(app(b, u), lam(S, 1, app(app(cc, var(S, 1)), app(d, u)))));
    EXPECT_TRUE(alpha_equal(normalize_full_lambda(src), expect));
    EXPECT_TRUE(alpha_equal(normalize_full_lambda(expect), expect));
}

TEST(Normalization, DerivedStarlingRecoversIdentity) {
    Parameter p = budget_s(1);
    LTerm id = derive_identity(E, p, {});
    LTerm x = var(E, 5);
    EXPECT_TRUE(alpha_equal(normalize_full_lambda(app(id, x)), x));
}

TEST(Normalization, FuelExhausted) {
    LTerm t = lam(S, 0, de_re_inner());
    try {
        normalize_full_lambda(t, 0);
        FAIL() << "expected FuelExhausted";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::FuelExhausted);
    }
}

TEST(Equality, Decisions) {
    Parameter p = Parameter().set("B", Budget(2));
    Type bb = Type::state("B"), c = Type::entity("C");
    EXPECT_TRUE(decide_beta_eta_equal(mk_lambda_combinator(comb_C(bb, bb, c), p, {}), nice_cardinal_replacement(bb, c)));
    EXPECT_TRUE(decide_beta_eta_equal(lam(E, 0, var(E, 0)), lam(E, 1, var(E, 1))));
    EXPECT_FALSE(decide_beta_eta_equal(var(E, 0), var(E, 1)));
    EXPECT_TRUE(decide_beta_eta_equal(lam(E, 0, app(var(ar(E, T), 3), var(E, 0))), var(ar(E, T), 3)));
}

// Properties over generated terms.

TEST(ReductionProperties, SubjectReductionAndBudgets) {
    Parameter p = budget_s(2);
    Montague m;
    Signature sig = m.signature();
    std::size_t seen = 0;
    for (const auto& t : random_terms(21, 300)) {
        for (const auto& r : find_redexes(t, p, ReductionMode::BetaEta)) {
            ++seen;
            LTerm n = contract(t, r);
            EXPECT_EQ(n.type(), t.type());
            EXPECT_TRUE(is_term_of(n, p, &sig)) << print_term(t) << " -> " << print_term(n);
        }
    }
    EXPECT_GT(seen, 100u);
}

TEST(ReductionProperties, ModeInclusions) {
    for (const auto& t : random_terms(22, 300)) {
        auto b0 = redex_keys(t, ReductionMode::Beta0), br = redex_keys(t, ReductionMode::BetaR),
             bf = redex_keys(t, ReductionMode::Beta);
        EXPECT_TRUE(std::includes(br.begin(), br.end(), b0.begin(), b0.end()));
        EXPECT_TRUE(std::includes(bf.begin(), bf.end(), br.begin(), br.end()));
        for (const auto& r : find_beta_redexes(t, ReductionMode::Beta)) {
            EXPECT_EQ(r.distance, r.prefix_binders.size());
            EXPECT_EQ(r.distance, r.args.size());
        }
    }
}

TEST(ReductionProperties, StepsPreserveNormalForms) {
    Parameter p = budget_s(2);
    for (const auto& t : random_terms(23, 300)) {
        LTerm nf = normalize_full_lambda(t);
        for (const auto& r : find_redexes(t, p, ReductionMode::BetaEta)) {
            LTerm n = contract(t, r);
            EXPECT_TRUE(decide_beta_eta_equal(t, n)) << print_term(t) << " -> " << print_term(n);
        }
        EXPECT_TRUE(alpha_equal(normalize_full_lambda(nf), nf));
    }
}

TEST(ReductionProperties, EtaShrinks) {
    Parameter p = budget_s(2);
    for (const auto& t : random_terms(24, 300))
        for (const auto& r : find_redexes(t, p, ReductionMode::Eta)) EXPECT_LT(contract(t, r).size(), t.size());
}
