// mltk: command-line front end for the modal lambda calculus toolkit.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mltk/mltk.hpp"

using namespace mltk;

namespace {

enum Exit { kOk = 0, kNegative = 1, kInput = 2, kFuel = 3, kInternal = 4 };

int exit_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::FuelExhausted: return kFuel;
        case ErrorKind::TraceFailure:
        case ErrorKind::CaptureError:
        case ErrorKind::StaleRedex: return kInternal;
        default: return kInput;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::SyntaxError, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Workspace load_workspace(const std::string& path) { return Workspace::from_source(read_file(path)); }

std::optional<ReductionMode> parse_mode(const std::string& s) {
    static const std::map<std::string, ReductionMode> modes{
        {"beta0", ReductionMode::Beta0}, {"betar", ReductionMode::BetaR},        {"beta", ReductionMode::Beta},
        {"eta", ReductionMode::Eta},     {"beta0eta", ReductionMode::Beta0Eta}, {"betareta", ReductionMode::BetaREta},
        {"betaeta", ReductionMode::BetaEta}};
    auto it = modes.find(s);
    if (it == modes.end()) return std::nullopt;
    return it->second;
}

std::string describe(const Redex& r) {
    std::ostringstream out;
    if (const auto* b = std::get_if<BetaRedex>(&r))
        out << "beta distance " << b->distance << (b->regular ? " regular" : " irregular");
    else
        out << "eta";
    out << " at " << (redex_position(r).empty() ? std::string("root") : path_str(redex_position(r)));
    return out.str();
}

std::string describe(const TraceStep& s) {
    std::ostringstream out;
    switch (s.kind) {
        case TraceStep::Kind::Beta:
            out << "beta distance " << s.distance << (s.regular ? " regular" : " irregular");
            break;
        case TraceStep::Kind::Eta: out << "eta"; break;
        case TraceStep::Kind::Alpha: out << "alpha"; break;
    }
    out << " at " << (s.position.empty() ? std::string("root") : path_str(s.position));
    return out.str();
}

std::string describe(const Assignment& rho) {
    std::ostringstream out;
    bool first = true;
    for (const auto& [v, x] : rho) {
        out << (first ? "" : ", ") << v.token() << ":" << v.type.str() << " = " << x.str();
        first = false;
    }
    return first ? std::string("(no free variables)") : out.str();
}

Var parse_var_token(const std::string& tok, const Workspace& ws) {
    if (tok.size() < 2 || tok[0] != 'v' || tok.find_first_not_of("0123456789", 1) != std::string::npos)
        throw Error(ErrorKind::SyntaxError, "expected a variable token such as v0, got " + tok);
    std::uint32_t idx = static_cast<std::uint32_t>(std::stoul(tok.substr(1)));
    auto it = ws.free_decls().find(idx);
    if (it == ws.free_decls().end()) throw Error(ErrorKind::UnknownVariable, tok + " has no free declaration");
    return Var{it->second, idx};
}

// Copy of the workspace with every state atom at budget omega.
Workspace at_omega(const Workspace& ws) {
    Workspace w = ws;
    for (const auto& [name, t] : ws.atoms())
        if (t.is_state()) w.parameter().set(name, Budget::omega());
    return w;
}

// Runs weak walks and joins them; returns the number of failures.
int cr_search_cl(std::size_t iters, std::uint64_t seed, std::size_t max_size, std::uint32_t budget) {
    Montague m;
    Parameter p;
    p.set("S", Budget(budget));
    GenConfig cfg{m.pool(), p, m.signature()};
    CLGenerator gen(cfg, seed);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::size_t failures = 0, differing = 0;
    for (std::size_t i = 0; i < iters; ++i) {
        CLTerm t = gen.term(max_size);
        auto w1 = random_weak_walk(t, 20, rng);
        auto w2 = random_weak_walk(t, 20, rng);
        if (w1 != w2) ++differing;
        bool ok = false;
        try {
            ok = join(w1.back(), w2.back(), 2000).has_value();
        } catch (const Error&) {
        }
        if (!ok) {
            ++failures;
            std::cout << "unjoined: " << print_cl_term(t) << "\n";
        }
    }
    std::cout << iters << " terms, " << differing << " with differing walks, " << failures << " join failures\n";
    return failures ? kNegative : kOk;
}

// Drives two random β walks to normal form and reports distinct normal forms,
// which refute confluence outright.
int cr_search_mlt(std::size_t iters, std::uint64_t seed, std::size_t max_size, std::uint32_t budget) {
    Montague m;
    Parameter p;
    p.set("S", Budget(budget));
    GenConfig cfg{m.pool(), p, m.signature()};
    cfg.redex_bias = 0.6;
    LambdaGenerator gen(cfg, seed);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::size_t counted = 0, found = 0, unfinished = 0;
    auto walk = [&](LTerm t) -> std::optional<LTerm> {
        for (int i = 0; i < 500; ++i) {
            auto rs = find_redexes(t, p, ReductionMode::Beta);
            if (rs.empty()) return t;
            t = contract(t, rs[std::uniform_int_distribution<std::size_t>(0, rs.size() - 1)(rng)]);
        }
        return std::nullopt;
    };
    for (std::size_t tries = 0; counted < iters && tries < 50 * iters; ++tries) {
        LTerm t = gen.term(max_size);
        if (t.size() > max_size || !is_term_of(t, p, &cfg.sig)) continue;
        ++counted;
        auto a = walk(t), b = walk(t);
        if (!a || !b) {
            ++unfinished;
            continue;
        }
        if (!alpha_equal(*a, *b)) {
            ++found;
            std::cout << "counterexample: " << print_term(t) << "\n  normal form 1: " << print_term(*a)
                      << "\n  normal form 2: " << print_term(*b) << "\n";
        }
    }
    std::cout << counted << " terms, " << found << " with distinct normal forms, " << unfinished
              << " walks cut off\n";
    return found ? kNegative : kOk;
}

int selftest() {
    std::size_t failures = 0;
    auto report = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };
    Montague m;
    for (std::uint32_t budget : {1u, 2u}) {
        Parameter p;
        p.set("S", Budget(budget));
        Signature sig{{"c", m.s}};
        std::size_t bad = 0, n = 0;
        for (auto a : {m.s, m.e})
            for (auto b : {m.s, m.e})
                for (auto c : {m.s, m.e})
                    for (const auto& s : {comb_B(a, b, c), comb_C(a, b, c), comb_S(a, b, c), comb_D("c", a, b, c),
                                          comb_K(a, b), comb_W(a, b), comb_I(a)}) {
                        try {
                            check_side_conditions(s, p, sig);
                            mk_lambda_combinator(s, p, sig);
                        } catch (const Error&) {
                            continue;
                        }
                        ++n;
                        try {
                            auto args = generic_args(s, p);
                            if (!(verify_combinator_behaviour(s, args, p, sig).end() == behaviour_result(s, args))) ++bad;
                        } catch (const Error&) {
                            ++bad;
                        }
                    }
        report("combinator behaviour, budget " + std::to_string(budget) + " (" + std::to_string(n) + " checks)", bad == 0);
    }
    {
        Parameter p;
        p.set("S", Budget(2));
        GenConfig cfg{m.pool(), p, m.signature()};
        LambdaGenerator gen(cfg, 11);
        std::size_t bad = 0;
        for (int i = 0; i < 300; ++i) {
            LTerm t = gen.term(15);
            if (!is_term_of(t, p, &cfg.sig)) continue;
            if (!roundtrip_check(t, p, cfg.sig)) ++bad;
        }
        report("translation roundtrip (300 terms)", bad == 0);
        CLGenerator cgen(cfg, 12);
        std::mt19937_64 rng(13);
        bad = 0;
        for (int i = 0; i < 300; ++i) {
            CLTerm t = cgen.term(20);
            auto w1 = random_weak_walk(t, 20, rng), w2 = random_weak_walk(t, 20, rng);
            if (!join(w1.back(), w2.back(), 2000)) ++bad;
            if (!parallel_reduces(t, complete_development(t))) ++bad;
        }
        report("weak confluence and complete developments (300 terms)", bad == 0);
    }
    {
        Frame f = punctured_frame(m.e);
        report("punctured frame is rejected", !check_model(f, Parameter::omega(), {}).is_model);
    }
    return failures ? kInternal : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toolkit for the modal simply-typed lambda calculus and its combinatory logic"};
    app.require_subcommand(1);
    std::string file, frame_file, workspace_file, mode = "beta", strategy = "lo", target, var, system = "cl";
    std::vector<std::string> terms;
    std::size_t steps = 1000, iters = 1000, max_size = 20, fuel = kDefaultFuel;
    std::uint64_t seed = 1;
    std::uint32_t budget = 2;
    bool trace = false;

    auto with_file = [&](CLI::App* c, std::size_t n_terms, const std::string& what) {
        c->add_option("file", file, "workspace file")->required()->check(CLI::ExistingFile);
        auto* o = c->add_option("terms", terms, what);
        if (n_terms) o->required()->expected(static_cast<int>(n_terms));
        return c;
    };

    auto* check = app.add_subcommand("check", "type-check let bindings or given terms");
    check->add_option("file", file, "workspace file")->required()->check(CLI::ExistingFile);
    check->add_option("terms", terms, "terms or let names (default: all lets)");
    auto* reduce = with_file(app.add_subcommand("reduce", "reduce a λ term"), 1, "term or let name");
    reduce->add_option("--mode", mode, "beta0|betar|beta|eta|betaeta")->capture_default_str();
    reduce->add_option("--strategy", strategy, "lo (leftmost-outermost) or all (list one-step reducts)")
        ->check(CLI::IsMember({"lo", "all"}))
        ->capture_default_str();
    reduce->add_option("--steps", steps, "step limit")->capture_default_str();
    reduce->add_flag("--trace", trace, "print every step");
    auto* eq = with_file(app.add_subcommand("eq", "decide βη-equality"), 2, "two terms");
    auto* tocl = with_file(app.add_subcommand("tocl", "translate a λ term to CL"), 1, "λ term");
    auto* tolambda = with_file(app.add_subcommand("tolambda", "translate a CL term to λ"), 1, "CL term");
    auto* roundtrip = with_file(app.add_subcommand("roundtrip", "check (M^cl)^λ =βη M"), 1, "λ term");
    auto* express = with_file(app.add_subcommand("express", "re-express a term in a smaller calculus"), 1, "term");
    express->add_option("--to", target, "upsilon | mlt")->required()->check(CLI::IsMember({"upsilon", "mlt"}));
    auto* bracket = app.add_subcommand("bracket", "combinatory abstraction [v]M");
    bracket->add_option("var", var, "variable token with a free declaration")->required();
    with_file(bracket, 1, "CL term");
    auto* wnf = with_file(app.add_subcommand("wnf", "weak normal form"), 1, "CL term");
    wnf->add_flag("--trace", trace, "print every step");
    wnf->add_option("--fuel", fuel, "step limit")->capture_default_str();
    auto* weq = with_file(app.add_subcommand("weq", "decide weak equality"), 2, "two CL terms");
    auto* devel = with_file(app.add_subcommand("devel", "complete development"), 1, "CL term");
    auto* fverify = app.add_subcommand("frame-verify", "check that a frame is a model");
    fverify->add_option("frame", frame_file, "frame JSON")->required()->check(CLI::ExistingFile);
    fverify->add_option("--workspace", workspace_file, "workspace supplying atom kinds and signature")
        ->check(CLI::ExistingFile);
    auto* mcheck = app.add_subcommand("model-check", "evaluate a term or validate an equation in a frame");
    mcheck->add_option("frame", frame_file, "frame JSON")->required()->check(CLI::ExistingFile);
    mcheck->add_option("file", file, "workspace file")->required()->check(CLI::ExistingFile);
    mcheck->add_option("terms", terms, "one term, or two sides of an equation")->required()->expected(1, 2);
    auto* cr = app.add_subcommand("cr-search", "randomized confluence search");
    cr->add_option("--system", system, "cl | mlt")->check(CLI::IsMember({"cl", "mlt"}))->capture_default_str();
    cr->add_option("--iters", iters)->capture_default_str();
    cr->add_option("--seed", seed)->capture_default_str();
    cr->add_option("--max-size", max_size)->capture_default_str();
    cr->add_option("--budget", budget, "state budget for S")->capture_default_str();
    auto* self = app.add_subcommand("selftest", "run built-in consistency checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) {
            Workspace ws = load_workspace(file);
            std::vector<std::string> names = terms.empty() ? ws.let_names() : terms;
            for (const auto& n : names) std::cout << n << " : " << ws.term(n).type().str() << "\n";
            return kOk;
        }
        if (reduce->parsed()) {
            auto md = parse_mode(mode);
            if (!md) throw Error(ErrorKind::SyntaxError, "unknown mode " + mode);
            Workspace ws = load_workspace(file);
            LTerm t = ws.term(terms[0]);
            const Parameter& p = ws.parameter();
            if (strategy == "all") {
                auto rs = find_redexes(t, p, *md);
                if (rs.empty()) {
                    LTerm f = freshen_binders(t, p);
                    if (!(f == t) && !find_redexes(f, p, *md).empty()) {
                        t = f;
                        std::cout << "after renaming bound variables: " << print_term(t) << "\n";
                        rs = find_redexes(t, p, *md);
                    }
                }
                for (std::size_t i = 0; i < rs.size(); ++i)
                    std::cout << i << ": " << describe(rs[i]) << "\n   " << print_term(contract(t, rs[i])) << "\n";
                if (rs.empty()) std::cout << "normal form\n";
                return kOk;
            }
            for (std::size_t i = 0; i < steps; ++i) {
                auto rs = find_redexes(t, p, *md);
                if (rs.empty()) {
                    // A renaming of bound variables may unblock a redex.
                    LTerm f = freshen_binders(t, p);
                    if (!(f == t) && !find_redexes(f, p, *md).empty()) {
                        t = f;
                        if (trace) std::cout << "=  " << print_term(t) << "   [alpha]\n";
                        rs = find_redexes(t, p, *md);
                    }
                }
                if (rs.empty()) {
                    std::cout << print_term(t) << "\nnormal form after " << i << " steps\n";
                    return kOk;
                }
                t = contract(t, rs.front());
                if (trace) std::cout << "-> " << print_term(t) << "   [" << describe(rs.front()) << "]\n";
            }
            if (find_redexes(t, p, *md).empty() && find_redexes(freshen_binders(t, p), p, *md).empty()) {
                std::cout << print_term(t) << "\nnormal form after " << steps << " steps\n";
                return kOk;
            }
            std::cout << print_term(t) << "\nstep limit " << steps << " reached\n";
            return kFuel;
        }
        if (eq->parsed()) {
            Workspace ws = load_workspace(file);
            LTerm a = ws.term(terms[0]), b = ws.term(terms[1]);
            bool same = decide_beta_eta_equal(a, b, ws.parameter(), fuel);
            std::cout << (same ? "equal" : "unequal") << "\n";
            if (!same && a.type() == b.type())
                std::cout << "  normal form 1: " << print_term(normalize_full_lambda(a, fuel))
                          << "\n  normal form 2: " << print_term(normalize_full_lambda(b, fuel)) << "\n";
            if (!(a.type() == b.type())) std::cout << "  types differ: " << a.type().str() << " vs " << b.type().str() << "\n";
            return same ? kOk : kNegative;
        }
        if (tocl->parsed()) {
            Workspace ws = load_workspace(file);
            CLTerm c = to_cl(ws.term(terms[0]), ws.parameter(), ws.signature());
            std::cout << print_cl_term(c) << "\n  : " << c.type().str() << "\n";
            return kOk;
        }
        if (tolambda->parsed()) {
            Workspace ws = load_workspace(file);
            LTerm l = to_lambda(ws.cl_term(terms[0]), ws.parameter(), ws.signature());
            std::cout << print_term(l) << "\n  : " << l.type().str() << "\n";
            return kOk;
        }
        if (roundtrip->parsed()) {
            Workspace ws = load_workspace(file);
            LTerm t = ws.term(terms[0]);
            CLTerm c = to_cl(t, ws.parameter(), ws.signature());
            LTerm back = to_lambda(c, ws.parameter(), ws.signature());
            bool ok = decide_beta_eta_equal(back, t, ws.parameter(), fuel);
            std::cout << "cl:     " << print_cl_term(c) << "\nlambda: " << print_term(back) << "\n"
                      << (ok ? "roundtrip holds" : "roundtrip fails") << "\n";
            return ok ? kOk : kInternal;
        }
        if (express->parsed()) {
            Workspace ws = load_workspace(file);
            Workspace wide = at_omega(ws);
            LTerm t = wide.term(terms[0]);
            LTerm out = target == "upsilon" ? express_omega_to_upsilon(t, ws.parameter(), ws.signature())
                                            : express_lambda_to_mlt(t, fuel);
            std::cout << print_term(out) << "\n  : " << out.type().str() << "\n";
            return kOk;
        }
        if (bracket->parsed()) {
            Workspace ws = load_workspace(file);
            Var v = parse_var_token(var, ws);
            CLTerm c = cl_bracket(v, ws.cl_term(terms[0]), ws.parameter(), ws.signature());
            std::cout << print_cl_term(c) << "\n  : " << c.type().str() << "\n";
            return kOk;
        }
        if (wnf->parsed()) {
            Workspace ws = load_workspace(file);
            std::vector<CLTerm> steps_taken;
            CLTerm n = weak_normalize(ws.cl_term(terms[0]), fuel, trace ? &steps_taken : nullptr);
            if (trace)
                for (const auto& s : steps_taken) std::cout << "-> " << print_cl_term(s) << "\n";
            std::cout << print_cl_term(n) << "\n";
            return kOk;
        }
        if (weq->parsed()) {
            Workspace ws = load_workspace(file);
            CLTerm a = ws.cl_term(terms[0]), b = ws.cl_term(terms[1]);
            bool same = decide_weak_equal(a, b, fuel);
            std::cout << (same ? "weakly equal" : "not weakly equal") << "\n";
            return same ? kOk : kNegative;
        }
        if (devel->parsed()) {
            Workspace ws = load_workspace(file);
            std::cout << print_cl_term(complete_development(ws.cl_term(terms[0]))) << "\n";
            return kOk;
        }
        if (fverify->parsed()) {
            std::optional<Workspace> ws;
            if (!workspace_file.empty()) ws = load_workspace(workspace_file);
            LoadedFrame lf = load_frame_json(nlohmann::json::parse(read_file(frame_file)), ws ? &*ws : nullptr);
            ModelVerdict v = check_model(lf.frame, lf.param, lf.sig);
            if (v.is_model) {
                std::cout << "model (" << v.instances_checked << " combinator instances denote)\n";
                return kOk;
            }
            std::cout << "not a model\n";
            if (v.witness) std::cout << "  witness: " << print_term(*v.witness) << "\n";
            if (v.witness_spec) std::cout << "  combinator: " << v.witness_spec->str() << "\n";
            if (!v.detail.empty()) std::cout << "  " << v.detail << "\n";
            return kNegative;
        }
        if (mcheck->parsed()) {
            Workspace ws = load_workspace(file);
            LoadedFrame lf = load_frame_json(nlohmann::json::parse(read_file(frame_file)), &ws);
            LTerm a = ws.term(terms[0]);
            if (terms.size() == 1) {
                std::cout << eval(a, lf.frame).str() << "\n";
                return kOk;
            }
            LTerm b = ws.term(terms[1]);
            EqualityVerdict v = check_equality(a, b, lf.frame);
            if (v.valid) {
                std::cout << "valid\n";
                return kOk;
            }
            std::cout << "invalid\n  counterexample: " << describe(*v.counterexample) << "\n";
            return kNegative;
        }
        if (cr->parsed()) {
            return system == "cl" ? cr_search_cl(iters, seed, max_size, budget)
                                  : cr_search_mlt(iters, seed, max_size, budget);
        }
        if (self->parsed()) return selftest();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_for(e.kind());
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: InvalidFrame: " << e.what() << "\n";
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kOk;
}
