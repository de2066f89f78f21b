#include "support.hpp"

#include "inqkit/fo.hpp"
#include "inqkit/relational.hpp"
#include "inqkit/semantics.hpp"

#include <doctest.h>

using namespace inqkit;
using namespace inqkit::testing;

namespace {

const Var W{"w", Sort::world};
const Var S{"s", Sort::state};

// Random formula of quantifier rank at most q over the given bound variables.
FOFormula random_fo(Rng& rng, std::vector<Var>& scope, std::size_t q, std::size_t size)
{
    std::vector<Var> ws, ss;
    for (const Var& v : scope) (v.sort == Sort::world ? ws : ss).push_back(v);
    if (size == 0 || coin(rng, 0.2) || (q == 0 && coin(rng, 0.5))) {
        int pick = static_cast<int>(uniform(rng, 0, 4));
        if (pick == 0 && !ws.empty()) return fo::pred(coin(rng) ? "p0" : "p1", ws[uniform(rng, 0, ws.size() - 1)]);
        if (pick == 1 && !ws.empty() && !ss.empty())
            return fo::edge("a0", ws[uniform(rng, 0, ws.size() - 1)], ss[uniform(rng, 0, ss.size() - 1)]);
        if (pick == 2 && !ws.empty() && !ss.empty())
            return fo::member(ws[uniform(rng, 0, ws.size() - 1)], ss[uniform(rng, 0, ss.size() - 1)]);
        if (pick == 3 && ws.size() >= 2) return fo::eq(ws[0], ws[1]);
        if (pick == 4 && ss.size() >= 2) return fo::eq(ss[0], ss[1]);
        return coin(rng) ? fo::truth() : fo::falsum();
    }
    int op = static_cast<int>(uniform(rng, 0, q > 0 ? 4 : 2));
    if (op == 0) return fo::neg(random_fo(rng, scope, q, size - 1));
    if (op == 1) return fo::conj(random_fo(rng, scope, q, size - 1), random_fo(rng, scope, q, size - 1));
    if (op == 2) return fo::disj(random_fo(rng, scope, q, size - 1), random_fo(rng, scope, q, size - 1));
    Var v{"x" + std::to_string(scope.size()), coin(rng) ? Sort::world : Sort::state};
    scope.push_back(v);
    FOFormula body = random_fo(rng, scope, q - 1, size - 1);
    scope.pop_back();
    return op == 3 ? fo::forall(v, body) : fo::exists(v, body);
}

}   // namespace

TEST_CASE("translation clauses")
{
    CHECK(to_sexpr(standard_translate(parse_formula("p"), TranslationMode::world)) == "(P p w)");
    CHECK(to_sexpr(standard_translate(bottom(), TranslationMode::world)) == "false");
    CHECK(to_sexpr(standard_translate(parse_formula("p -> q"), TranslationMode::state)) ==
          "(forall (t S) (-> (sub t s) (-> (forall (w W) (-> (eps w t) (P p w))) (forall (w W) (-> (eps w t) (P q w))))))");
    CHECK(to_sexpr(standard_translate(parse_formula("[+a]p"), TranslationMode::world)) ==
          "(forall (s S) (-> (E a w s) (forall (w W) (-> (eps w s) (P p w)))))");
    CHECK(to_sexpr(standard_translate(parse_formula("[a]p"), TranslationMode::world)) ==
          "(forall (s S) (-> (e a w s) (forall (w W) (-> (eps w s) (P p w)))))");
    FOFormula st = standard_translate(parse_formula("[a]p & q"), TranslationMode::state);
    CHECK(free_variables(st) == std::set<Var>{S});
    CHECK(free_variables(standard_translate(parse_formula("[a]p"), TranslationMode::world)) == std::set<Var>{W});
}

TEST_CASE("macro expansion avoids capture")
{
    FOFormula e = expand_macros(fo::emap("a", Var{"v", Sort::world}, Var{"s", Sort::state}));
    CHECK(to_sexpr(e) == "(forall (v1 W) (<-> (eps v1 s) (exists (s1 S) (and (E a v s1) (eps v1 s1)))))");
    CHECK(quantifier_rank(fo::subset(S, Var{"t", Sort::state})) == 1);
    CHECK(quantifier_rank(fo::emap("a", W, S)) == 2);
}

TEST_CASE("s-expressions round trip")
{
    Rng rng(3);
    FormulaShape shape{{"p", "q"}, {"a", "b"}};
    for (int i = 0; i < 100; ++i) {
        Formula phi = random_formula(rng, shape, 2, 5);
        for (auto mode : {TranslationMode::world, TranslationMode::state}) {
            FOFormula f = standard_translate(phi, mode);
            FOFormula g = parse_fo(to_sexpr(f));
            CHECK(structurally_equal(f, g));
        }
    }
    CHECK_THROWS_AS(parse_fo("(forall (x W) (eps w x))"), ParseError);
    CHECK_THROWS_AS(parse_fo("(and (P p w))"), ParseError);
    CHECK_THROWS_AS(parse_fo("(P p w) extra"), ParseError);
}

TEST_CASE("evaluation errors")
{
    Structure s = encode_relational(ex1(), EncodeMode::minimal).structure();
    FOFormula f = parse_fo("(exists (s S) (eps w s))");
    CHECK_THROWS_AS(fo_eval(s, f, {}), FOError);
    CHECK_THROWS_AS(fo_eval(s, f, {{"w", 99}}), FOError);
    CHECK_THROWS_AS(fo_eval(s, parse_fo("(and (P p w) (eps v w))"), {{"w", 0}, {"v", 0}}), FOError);
    CHECK_THROWS_AS(fo_eval(s, parse_fo("(P r w)"), {{"w", 0}}), FOError);
}

TEST_CASE("example 1 through the encodings")
{
    InqModel m = ex1();
    Structure lf = encode_relational(m, EncodeMode::locally_full).structure();
    Structure mini = encode_relational(m, EncodeMode::minimal).structure();
    const std::size_t pq = m.world_index("w_pq");
    CHECK(fo_eval(lf, standard_translate(parse_formula("[+a]?q"), TranslationMode::world), {{"w", pq}}));
    CHECK(fo_eval(mini, standard_translate(parse_formula("p"), TranslationMode::world), {{"w", pq}}));
    FOFormula some = parse_fo("(exists (s S) (eps w s))");
    for (std::size_t w = 0; w < 4; ++w) CHECK(fo_eval(mini, some, {{"w", w}}));
}

TEST_CASE("translation agrees with support on locally full encodings")
{
    Rng rng(11);
    FormulaShape shape{{"p0", "p1"}, {"a0", "a1"}};
    FormulaShape boxfree{{"p0", "p1"}, {"a0", "a1"}, true, false, true};
    for (int i = 0; i < 150; ++i) {
        InqModel m = random_model(rng, uniform(rng, 1, 4), 2, uniform(rng, 1, 2));
        bool plain = m.agent_count() == 1;
        Formula phi = random_formula(rng, plain ? FormulaShape{{"p0", "p1"}, {"a0"}} : shape, 2, 5);
        Formula psi = random_formula(rng, plain ? FormulaShape{{"p0", "p1"}, {"a0"}, true, false, true} : boxfree, 2, 5);
        Structure lf = encode_relational(m, EncodeMode::locally_full).structure();
        Structure mini = encode_relational(m, EncodeMode::minimal).structure();
        SupportEvaluator sp(m, phi), sq(m, psi);
        FOEvaluator fw(lf, standard_translate(phi, TranslationMode::world));
        FOEvaluator fs(lf, standard_translate(phi, TranslationMode::state));
        FOEvaluator gw(mini, standard_translate(psi, TranslationMode::world));
        FOEvaluator gs(mini, standard_translate(psi, TranslationMode::state));
        for (std::size_t w = 0; w < m.world_count(); ++w) {
            CHECK(sp.truth(w) == fw.eval({{"w", w}}));
            CHECK(sq.truth(w) == gw.eval({{"w", w}}));
        }
        for (std::size_t k = 0; k < lf.states.size(); ++k) CHECK(sp.supports(lf.states[k]) == fs.eval({{"s", k}}));
        for (std::size_t k = 0; k < mini.states.size(); ++k) CHECK(sq.supports(mini.states[k]) == gs.eval({{"s", k}}));
    }
}

TEST_CASE("box diverges on an encoding that is not locally full")
{
    InqModel m = m1();
    Structure mini = encode_relational(m, EncodeMode::minimal).structure();
    Formula phi = parse_formula("[a]_|_");
    CHECK_FALSE(truth(m, 0, phi));
    CHECK(fo_eval(mini, standard_translate(phi, TranslationMode::world), {{"w", 0}}));
    Structure lf = encode_relational(m, EncodeMode::locally_full).structure();
    CHECK_FALSE(fo_eval(lf, standard_translate(phi, TranslationMode::world), {{"w", 0}}));
}

TEST_CASE("EF game examples")
{
    Structure a = drop_empty_state(encode_relational(m1(), EncodeMode::minimal).structure());
    Structure b = drop_empty_state(encode_relational(m2(), EncodeMode::minimal).structure());
    std::vector<Element> v{Element{Sort::world, 0}};
    CHECK(fo_ef_equiv(a, v, a, v, 3));
    CHECK(fo_ef_equiv(a, v, b, v, 1));
    CHECK_FALSE(fo_ef_equiv(a, v, b, v, 2));
    CHECK_FALSE(fo_ef_equiv(b, v, a, v, 2));

    Structure e = drop_empty_state(encode_relational(ex1(), EncodeMode::minimal).structure());
    Structure ee = drop_empty_state(disjoint_sum({{&encode_relational(ex1(), EncodeMode::minimal).structure(), 2}}));
    CHECK(fo_ef_equiv(e, {}, ee, {}, 1));

    CHECK_THROWS_AS(fo_ef_equiv(a, v, b, v, 4), FOError);
    EFOptions tight;
    tight.element_cap = 5;
    CHECK_THROWS_AS(fo_ef_equiv(a, v, b, v, 1, tight), FOError);
}

TEST_CASE("EF game properties and agreement with sentences")
{
    Rng rng(19);
    std::size_t agreements = 0;
    for (int i = 0; i < 60; ++i) {
        Structure a = drop_empty_state(encode_relational(random_model(rng, uniform(rng, 1, 3), 2, 1), EncodeMode::minimal).structure());
        Structure b = coin(rng, 0.3) ? a
                                     : drop_empty_state(encode_relational(random_model(rng, uniform(rng, 1, 3), 2, 1),
                                                                          EncodeMode::minimal).structure());
        if (a.element_count() + b.element_count() > 24) continue;
        CHECK(fo_ef_equiv(a, {}, a, {}, 2));
        for (std::size_t q = 0; q <= 2; ++q) {
            bool ab = fo_ef_equiv(a, {}, b, {}, q);
            CHECK(ab == fo_ef_equiv(b, {}, a, {}, q));
            if (q > 0 && ab) CHECK(fo_ef_equiv(a, {}, b, {}, q - 1));
            if (!ab) continue;
            for (int k = 0; k < 10; ++k) {
                std::vector<Var> scope;
                FOFormula f = random_fo(rng, scope, q, 6);
                CHECK(fo_eval(a, f, {}) == fo_eval(b, f, {}));
                ++agreements;
            }
        }
    }
    CHECK(agreements > 100);
}

TEST_CASE("neighbourhoods")
{
    InqModel m = ex1();
    Structure full = encode_relational(m, EncodeMode::full).structure();
    const std::size_t pq = m.world_index("w_pq");

    Neighbourhood n0 = neighbourhood(full, Element{Sort::world, pq}, 0);
    CHECK(n0.structure.worlds.size() == 1);
    CHECK(n0.structure.states.empty());

    Neighbourhood n2 = neighbourhood(full, Element{Sort::world, pq}, 2);
    CHECK(n2.structure.worlds.size() == 4);
    CHECK(n2.structure.states.size() < full.states.size());
    Neighbourhood n3 = neighbourhood(full, Element{Sort::world, pq}, 3);
    CHECK(n3.structure.element_count() == full.element_count());

    Structure mini = drop_empty_state(encode_relational(m, EncodeMode::minimal).structure());
    Neighbourhood d2 = neighbourhood(mini, Element{Sort::world, pq}, 2);
    CHECK(d2.structure.worlds == std::vector<std::string>{"w_pq", "w_pnq"});

    Structure with_empty = encode_relational(m, EncodeMode::minimal).structure();
    Neighbourhood k2 = neighbourhood(with_empty, Element{Sort::world, pq}, 2, DistanceMode::skip_empty);
    CHECK(k2.structure.worlds == std::vector<std::string>{"w_pq", "w_pnq"});
    CHECK(k2.structure.find_state(InfoState{}).has_value());
    CHECK(check_neighbourhood(k2, 2).ok);
    CHECK(k2.centre == Element{Sort::world, 0});

    auto dist = gaifman_distances(with_empty, Element{Sort::world, pq});
    for (std::size_t d : dist) CHECK(d <= 4);
}
