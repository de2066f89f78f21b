#include "support.hpp"

#include "inqkit/bisim.hpp"
#include "inqkit/epistemic.hpp"
#include "inqkit/transforms.hpp"

#include <doctest.h>

#include <set>

using namespace inqkit;
using namespace inqkit::testing;

namespace {

// One class list per agent; Sigma is the powerset of each class.
InqModel partition_model(std::size_t worlds, const std::vector<std::vector<InfoState>>& classes)
{
    std::vector<std::vector<InqState>> sigma(classes.size(), std::vector<InqState>(worlds));
    for (std::size_t a = 0; a < classes.size(); ++a)
        for (InfoState c : classes[a]) c.for_each([&](std::size_t w) { sigma[a][w] = InqState::from_generators({c}); });
    return InqModel(names("w", worlds), names("a", classes.size()), {}, std::move(sigma), {});
}

InfoState bits(std::uint64_t b) { return InfoState(b); }

}   // namespace

TEST_CASE("a-classes of example 1")
{
    InqModel m = ex1();
    CHECK(check_s5(m).ok);
    CHECK(a_class(m, 0, 0) == bits(0b0011));
    CHECK(a_class(m, 0, 1) == bits(0b0011));
    CHECK(a_class(m, 0, 3) == bits(0b1100));
    CHECK(a_classes(m, 0) == std::vector<InfoState>{bits(0b0011), bits(0b1100)});

    InqModel single({"w"}, {"a"}, {}, {{InqState::from_generators({bits(1)})}}, {});
    CHECK(a_class(single, 0, 0) == bits(1));
}

TEST_CASE("S5 violations are reported and refused")
{
    InqModel m = m1();   // u2 sees {v,u} but is not in it
    Report r = check_s5(m);
    CHECK_FALSE(r.ok);
    CHECK(r.witness.find("factivity") != std::string::npos);
    CHECK_THROWS_AS(a_class(m, 0, 0), ModelError);
    CHECK_FALSE(check_simple(m).ok);

    std::vector<std::vector<InqState>> sigma{{InqState::from_generators({bits(0b11)}), InqState::from_generators({bits(0b10)})}};
    InqModel bad({"x", "y"}, {"a"}, {}, sigma, {});
    r = check_s5(bad);
    CHECK_FALSE(r.ok);
    CHECK(r.witness.find("introspection") != std::string::npos);
}

TEST_CASE("local a-structures and their colourings")
{
    InqModel m = ex1();
    LocalAStructure ls = local_a_structure(m, 0, 0, Depth::of(0));
    CHECK(ls.carrier == bits(0b0011));
    CHECK(ls.inqstate == m.sigma(0, 0));
    REQUIRE(ls.colouring.size() == 2);
    CHECK(ls.colouring.at(0) != ls.colouring.at(1));

    Covering c = rich_cover(m, 2);
    LocalAStructure rs = local_a_structure(c.target, 0, 0);
    CHECK(rs.carrier.size() == 4);
    std::map<std::size_t, std::size_t> mult;
    for (auto [w, col] : rs.colouring) ++mult[col];
    CHECK(mult.size() == 2);
    for (auto [col, n] : mult) CHECK(n == 2);
}

TEST_CASE("colourings refine with granularity and are constant on classes")
{
    Rng rng(31);
    for (int i = 0; i < 60; ++i) {
        InqModel m = random_s5_model(rng, uniform(rng, 1, 6), uniform(rng, 0, 2), uniform(rng, 1, 2));
        for (std::size_t n = 0; n < 3; ++n) {
            auto fine = world_classes(m, Depth::of(n + 1)), coarse = world_classes(m, Depth::of(n));
            for (std::size_t u = 0; u < m.world_count(); ++u)
                for (std::size_t v = 0; v < m.world_count(); ++v)
                    if (fine[u] == fine[v]) CHECK(coarse[u] == coarse[v]);
        }
        for (std::size_t a = 0; a < m.agent_count(); ++a) {
            KripkeModel k = kripke_reduct(m);
            for (std::size_t w = 0; w < m.world_count(); ++w) {
                InfoState cls = a_class(m, a, w);
                CHECK(cls.contains(w));
                cls.for_each([&](std::size_t v) {
                    CHECK(m.sigma(a, v) == m.sigma(a, w));
                    CHECK(a_class(m, a, v) == cls);
                    CHECK(k.successors[a][v] == cls);
                });
            }
        }
        // Full bisimilarity fixes the colour profile of Sigma.
        auto colour = world_classes(m, Depth::full());
        for (std::size_t a = 0; a < m.agent_count(); ++a)
            for (std::size_t u = 0; u < m.world_count(); ++u)
                for (std::size_t v = 0; v < m.world_count(); ++v) {
                    if (colour[u] != colour[v]) continue;
                    std::set<std::uint64_t> pu, pv;
                    for (InfoState s : m.sigma(a, u).members()) pu.insert(colour_set(s, colour));
                    for (InfoState s : m.sigma(a, v).members()) pv.insert(colour_set(s, colour));
                    CHECK(pu == pv);
                }
    }
}

TEST_CASE("richness")
{
    InqModel m = ex1();
    CHECK(check_k_rich(m, 1).ok);
    Report r = check_k_rich(m, 2);
    CHECK_FALSE(r.ok);
    CHECK(r.witness.find("agent a") != std::string::npos);
    CHECK(check_k_rich(rich_cover(m, 2).target, 2).ok);
    CHECK_FALSE(check_k_rich(rich_cover(m, 2).target, 3).ok);

    // Two indistinguishable worlds, but Sigma only reaches one of them alone:
    // {0} extends to {0,1}, which holds the colour twice.
    InqModel twin({"u", "u2"}, {"a"}, {}, {{InqState::from_generators({bits(0b11)}), InqState::from_generators({bits(0b11)})}}, {});
    CHECK(check_k_rich(twin, 2).ok);
    CHECK_FALSE(check_k_rich(twin, 3).ok);
    InqModel split({"u", "u2"}, {"a"}, {}, {{InqState::from_generators({bits(1), bits(2)}), InqState::from_generators({bits(1), bits(2)})}}, {});
    CHECK_FALSE(check_k_rich(split, 2).ok);
}

TEST_CASE("simplicity")
{
    CHECK(check_simple(ex1()).ok);
    InqModel split({"u", "u2"}, {"a"}, {}, {{InqState::from_generators({bits(1), bits(2)}), InqState::from_generators({bits(1), bits(2)})}}, {});
    Report r = check_simple(split);
    CHECK_FALSE(r.ok);
    CHECK(r.witness.find("{u,u2}") != std::string::npos);
}

TEST_CASE("simple models are determined by their colour profile")
{
    Rng rng(77);
    int checked = 0;
    for (int i = 0; i < 80; ++i) {
        InqModel m = simplify(random_s5_model(rng, uniform(rng, 1, 6), uniform(rng, 0, 1)));
        REQUIRE(check_simple(m).ok);
        auto colour = world_classes(m, Depth::full());
        for (std::size_t w = 0; w < m.world_count(); ++w) {
            std::set<std::uint64_t> profile;
            for (InfoState s : m.sigma(0, w).members()) profile.insert(colour_set(s, colour));
            for_each_subset(a_class(m, 0, w), [&](InfoState s) {
                CHECK(m.sigma(0, w).contains(s) == (profile.count(colour_set(s, colour)) > 0));
                ++checked;
            });
        }
    }
    CHECK(checked > 500);
}

TEST_CASE("N-acyclicity")
{
    // a: {0,1},{2}   b: {1,2},{0}   c: {2,0},{1} make a triangle of classes.
    InqModel tri = partition_model(3, {{bits(0b011), bits(0b100)}, {bits(0b110), bits(0b001)}, {bits(0b101), bits(0b010)}});
    CHECK(check_n_acyclic(tri, 2).ok);
    Report r = check_n_acyclic(tri, 3);
    CHECK_FALSE(r.ok);
    CHECK(r.witness.find("cycle through 3 classes") != std::string::npos);

    InqModel path = partition_model(3, {{bits(0b011), bits(0b100)}, {bits(0b110), bits(0b001)}});
    CHECK(check_n_acyclic(path, 10).ok);

    InqModel overlap = partition_model(2, {{bits(0b11)}, {bits(0b11)}});
    r = check_n_acyclic(overlap, 0);
    CHECK_FALSE(r.ok);
    CHECK(r.witness.find("more than one world") != std::string::npos);

    // A square: four worlds, two agents, each class of size two.
    InqModel square = partition_model(4, {{bits(0b0011), bits(0b1100)}, {bits(0b0110), bits(0b1001)}});
    CHECK(check_n_acyclic(square, 3).ok);
    CHECK_FALSE(check_n_acyclic(square, 4).ok);
}

TEST_CASE("threshold equivalence")
{
    SetTuple p{5, {bits(0b00111)}};
    SetTuple q{6, {bits(0b001111)}};
    CHECK(threshold_equiv(p, q, 3));
    CHECK_FALSE(threshold_equiv(p, q, 4));
    CHECK(threshold_equiv(p, p, 0));
    CHECK(threshold_equiv(p, p, 9));
    CHECK_THROWS_AS(threshold_equiv(p, SetTuple{6, {}}, 1), ModelError);
    CHECK(threshold_equal(2, 2, 5));
    CHECK(threshold_equal(7, 5, 5));
    CHECK_FALSE(threshold_equal(4, 5, 5));
}

TEST_CASE("threshold equivalence against boolean terms, and monotonicity in d")
{
    Rng rng(404);
    for (int i = 0; i < 300; ++i) {
        std::size_t k = uniform(rng, 0, 3), u1 = uniform(rng, 0, 6), u2 = uniform(rng, 0, 6);
        SetTuple p{u1, {}}, q{u2, {}};
        for (std::size_t j = 0; j < k; ++j) {
            p.sets.push_back(random_subset(rng, InfoState::full(u1)));
            q.sets.push_back(random_subset(rng, InfoState::full(u2)));
        }
        std::size_t d = uniform(rng, 0, 4);
        bool got = threshold_equiv(p, q, d);
        CHECK(got == threshold_terms_oracle(u1, p.sets, u2, q.sets, d));
        if (got)
            for (std::size_t e = 0; e <= d; ++e) CHECK(threshold_equiv(p, q, e));
        if (d == 1) {
            bool same_nonempty = true;
            for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
                auto cell = [&](const SetTuple& t) {
                    InfoState c = InfoState::full(t.universe);
                    for (std::size_t j = 0; j < k; ++j) c = (mask >> j) & 1 ? c & t.sets[j] : c - t.sets[j];
                    return c.empty();
                };
                same_nonempty = same_nonempty && cell(p) == cell(q);
            }
            CHECK(got == same_nonempty);
        }
    }
}
