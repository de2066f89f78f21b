#include "support.hpp"

#include "inqkit/model_io.hpp"
#include "inqkit/relational.hpp"

#include <doctest.h>

#include <sstream>

using namespace inqkit;
using namespace inqkit::testing;

TEST_CASE("subset enumeration covers the powerset once")
{
    InfoState s(0b10110);
    auto subs = all_subsets(s);
    CHECK(subs.size() == 8);
    CHECK(subs.front().empty());
    CHECK(subs.back() == s);
    for (InfoState t : subs) CHECK(t.subset_of(s));
}

TEST_CASE("inquisitive states normalise to their maximal antichain")
{
    InqState st = InqState::from_generators({InfoState(0b011), InfoState(0b001), InfoState(0b100), InfoState(0b011)});
    CHECK(st.maximal() == std::vector<InfoState>{InfoState(0b011), InfoState(0b100)});
    CHECK(st.contains(InfoState(0b010)));
    CHECK_FALSE(st.contains(InfoState(0b110)));
    CHECK(st.union_state() == InfoState(0b111));
    CHECK(st.members().size() == 5);
    CHECK(InqState().is_trivial());
    CHECK(InqState::from_generators({}).is_trivial());
}

TEST_CASE("example 1 loads with the intended sigma")
{
    InqModel m = ex1();
    CHECK(m.world_count() == 4);
    std::size_t pq = m.world_index("w_pq"), pnq = m.world_index("w_pnq");
    std::size_t npq = m.world_index("w_npq"), npnq = m.world_index("w_npnq");
    CHECK(m.sigma(0, pq) == m.sigma(0, pnq));
    CHECK(m.sigma(0, pq).maximal().size() == 2);
    CHECK(m.knowledge(0, npq) == (InfoState::singleton(npq) | InfoState::singleton(npnq)));
    CHECK(m.sigma(0, npq).maximal().size() == 1);
}

TEST_CASE("build_model rejects bad input")
{
    ModelSpec spec;
    spec.agents = {"a"};
    spec.atoms = {"p"};
    spec.worlds = {{"w", {"p"}}, {"v", {}}};
    spec.sigma = {{"a", "w", {{"w"}}}};
    CHECK_THROWS_AS(build_model(spec), ModelError);   // v has no sigma
    spec.allow_trivial = true;
    InqModel m = build_model(spec);
    CHECK(m.sigma(0, 1).is_trivial());

    ModelSpec bad = spec;
    bad.sigma.push_back({"a", "v", {{"x"}}});
    CHECK_THROWS_AS(build_model(bad), ModelError);
    bad = spec;
    bad.worlds[0].true_atoms = {"q"};
    CHECK_THROWS_AS(build_model(bad), ModelError);
    bad = spec;
    bad.worlds.push_back({"w", {}});
    CHECK_THROWS_AS(build_model(bad), ModelError);
}

TEST_CASE("explicit empty state is the trivial inquisitive state")
{
    InqModel m = std::get<InqModel>(read_model_text("agents a\nworld w\nsigma a w : {}\n").model);
    CHECK(m.sigma(0, 0).is_trivial());
    CHECK_THROWS_AS(read_model_text("agents a\nworld w\n"), ModelError);
    CHECK_NOTHROW(read_model_text("agents a\nworld w\n", {true}));
}

TEST_CASE("Kripke reduct relates w to the union of Sigma(w)")
{
    InqModel m = ex1();
    KripkeModel k = kripke_reduct(m);
    for (std::size_t w = 0; w < m.world_count(); ++w) CHECK(k.successors[0][w] == m.knowledge(0, w));
}

TEST_CASE("model text round trip")
{
    InqModel m = ex1();
    std::ostringstream out;
    write_model(out, m, "ex1", Point{WorldPoint{2}});
    ModelFile back = read_model_text(out.str());
    CHECK(std::get<InqModel>(back.model) == m);
    CHECK(std::get<WorldPoint>(*back.point).world == 2);
    CHECK(back.name == "ex1");

    Rng rng(7);
    for (int i = 0; i < 30; ++i) {
        InqModel r = random_model(rng, uniform(rng, 1, 5), uniform(rng, 0, 2), uniform(rng, 1, 2));
        std::ostringstream o;
        write_model(o, r, "r");
        CHECK(std::get<InqModel>(read_model_text(o.str(), {true}).model) == r);
    }
}

TEST_CASE("parse errors carry line numbers")
{
    try {
        read_model_text("agents a\nworld w\nsigma a w : {w,}\n");
        FAIL("expected an error");
    } catch (const ModelError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(read_model_text("bogus line\n"), ModelError);
}

TEST_CASE("encodings of example 1")
{
    InqModel m = ex1();
    RelationalModel minimal = encode_relational(m, EncodeMode::minimal);
    CHECK(minimal.state_count() == 6);
    CHECK(drop_empty_state(minimal.structure()).states.size() == 5);
    RelationalModel lf = encode_relational(m, EncodeMode::locally_full);
    CHECK(lf.state_count() == 7);   // ℘{pq,pnq} ∪ ℘{npq,npnq}
    RelationalModel full = encode_relational(m, EncodeMode::full);
    CHECK(full.state_count() == 16);
    for (const RelationalModel* r : {&minimal, &lf, &full}) {
        CHECK(check_relational(r->structure()).ok);
        CHECK(decode_relational(*r) == m);
    }
    RelationalModel pointed = encode_relational(m, EncodeMode::minimal, InfoState(0b0101));
    CHECK(pointed.state_count() == 7);
}

TEST_CASE("encode then decode is the identity on random models")
{
    Rng rng(11);
    for (int i = 0; i < 60; ++i) {
        InqModel m = random_model(rng, uniform(rng, 1, 5), uniform(rng, 0, 2), uniform(rng, 1, 2));
        for (EncodeMode mode : {EncodeMode::minimal, EncodeMode::locally_full, EncodeMode::full}) {
            RelationalModel r = encode_relational(m, mode);
            CHECK(check_relational(r.structure()).ok);
            CHECK(decode_relational(r) == m);
        }
    }
}

TEST_CASE("each relational condition is detected")
{
    const Structure base = encode_relational(ex1(), EncodeMode::minimal).structure();
    const std::size_t pq = 0;

    Structure dup = base;
    dup.states.push_back(dup.states[1]);
    dup.state_labels.push_back("dup");
    Report r = check_relational(dup);
    CHECK_FALSE(r.ok);
    CHECK(r.witness.find("extensionality") != std::string::npos);

    Structure gap = base;
    std::size_t single = *gap.find_state(InfoState::singleton(pq));
    gap.states.erase(gap.states.begin() + static_cast<long>(single));
    gap.state_labels.clear();
    for (auto& row : gap.edges)
        for (auto& e : row) {
            std::vector<std::size_t> kept;
            for (std::size_t i : e)
                if (i != single) kept.push_back(i > single ? i - 1 : i);
            e = kept;
        }
    gap.states.push_back(InfoState(0b0011));
    r = check_relational(gap);
    CHECK_FALSE(r.ok);
    CHECK(r.witness.find("local powerset") != std::string::npos);

    Structure empty_edge = base;
    empty_edge.edges[0][pq].clear();
    r = check_relational(empty_edge);
    CHECK_FALSE(r.ok);
    CHECK(r.witness.find("non-emptiness") != std::string::npos);

    Structure not_down = base;
    std::size_t empty = *not_down.find_state(InfoState{});
    auto& e = not_down.edges[0][pq];
    e.erase(std::find(e.begin(), e.end(), empty));
    r = check_relational(not_down);
    CHECK_FALSE(r.ok);
    CHECK(r.witness.find("downward closure") != std::string::npos);

    CHECK_THROWS_AS(RelationalModel::from_structure(not_down), ModelError);
}

TEST_CASE("disjoint sums share one empty state")
{
    const Structure a = encode_relational(ex1(), EncodeMode::minimal).structure();
    Structure twice = disjoint_sum({{&a, 2}});
    CHECK(twice.worlds.size() == 8);
    CHECK(twice.states.size() == 2 * (a.states.size() - 1) + 1);
    CHECK(check_relational(twice).ok);
    Structure once = disjoint_sum({{&a, 1}});
    CHECK(once.states.size() == a.states.size());
    CHECK(decode_relational(RelationalModel::from_structure(once)) == ex1());

    Structure dropped = drop_empty_state(a);
    Structure sum = disjoint_sum({{&dropped, 2}});
    CHECK(sum.states.size() == 10);
    CHECK_FALSE(sum.find_state(InfoState{}));
}
