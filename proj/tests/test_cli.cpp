#include "support.hpp"

#include "cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace inqkit::testing;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result inqkit_run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = inqkit::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}   // namespace

TEST_CASE("cli: check, bisim and charform on the worked examples")
{
    Result r = inqkit_run({"check", data_path("ex1.model"), "[+a]?q", "--at", "w_pq"});
    CHECK(r.code == 0);
    CHECK(r.out == "true\n");
    r = inqkit_run({"check", data_path("ex1.model"), "[a]?q", "--at", "w_pq"});
    CHECK(r.code == 1);
    CHECK(r.out == "false\n");
    r = inqkit_run({"check", data_path("ex1.model"), "?p", "--at", "{w_pq,w_npq}"});
    CHECK(r.code == 1);

    r = inqkit_run({"bisim", data_path("m1.model"), "v", data_path("m2.model"), "v", "--depth", "1"});
    CHECK(r.code == 1);
    CHECK(r.out.starts_with("not 1-bisimilar\n"));
    CHECK(r.out.find("transcript verified") != std::string::npos);
    r = inqkit_run({"bisim", data_path("m1.model"), "v", data_path("m2.model"), "v", "--depth", "0"});
    CHECK(r.code == 0);
    CHECK(r.out == "0-bisimilar\n");

    r = inqkit_run({"charform", data_path("ex1.model"), "--world", "w_pq", "--n", "0"});
    CHECK(r.code == 0);
    CHECK(r.out == "p & q\n");
}

TEST_CASE("cli: first-order subcommands")
{
    Result r = inqkit_run({"translate", "p", "--mode", "world"});
    CHECK(r.out == "(P p w)\n");
    r = inqkit_run({"fo-eval", data_path("ex1.model"), "(forall (s S) (-> (E a w s) (forall (v W) (-> (eps v s) (P p v)))))",
                    "--assign", "w=w_pq"});
    CHECK(r.code == 0);
    r = inqkit_run({"fo-eval", data_path("ex1.model"), "(P p w)"});
    CHECK(r.code == 2);
    CHECK(r.err.find("unassigned") != std::string::npos);
    r = inqkit_run({"ef", data_path("m1.model"), data_path("m2.model"), "--q", "1", "--at1", "v", "--at2", "v", "--drop-empty"});
    CHECK(r.code == 0);
    r = inqkit_run({"ef", data_path("m1.model"), data_path("m2.model"), "--q", "2", "--at1", "v", "--at2", "v", "--drop-empty"});
    CHECK(r.code == 1);
}

TEST_CASE("cli: encode, transform, verify-cover, validate and epistemic")
{
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "inqkit_cli_test";
    fs::create_directories(dir);
    const std::string enc = (dir / "ex1.rel").string();
    Result r = inqkit_run({"encode", data_path("ex1.model"), "--mode", "full", "-o", enc});
    REQUIRE(r.code == 0);
    CHECK(inqkit_run({"validate", enc, "relational-valid"}).code == 0);
    CHECK(inqkit_run({"validate", enc, "s5"}).code == 0);

    const std::string strat = (dir / "ex1.strat").string();
    REQUIRE(inqkit_run({"transform", data_path("ex1.model"), "--op", "stratify", "-o", strat}).code == 0);
    r = inqkit_run({"validate", strat, "stratified(2)"});
    CHECK(r.code == 0);
    CHECK(r.out == "stratified(2): pass\n");
    CHECK(inqkit_run({"validate", enc, "stratified(2)"}).code == 1);

    const std::string target = (dir / "ex1x2.model").string(), cov = (dir / "ex1x2.cover").string();
    REQUIRE(inqkit_run({"transform", data_path("ex1.model"), "--op", "rich-cover", "--k", "2", "-o", target, "--covering", cov}).code == 0);
    r = inqkit_run({"verify-cover", cov});
    CHECK(r.code == 0);
    CHECK(r.out == "covering: pass\n");
    CHECK(inqkit_run({"validate", target, "K-rich(2)"}).code == 0);
    CHECK(inqkit_run({"epistemic", "check-rich", target, "--k", "2"}).code == 0);
    CHECK(inqkit_run({"epistemic", "check-rich", data_path("ex1.model"), "--k", "2"}).code == 1);
    CHECK(inqkit_run({"epistemic", "check-simple", data_path("ex1.model")}).code == 0);
    CHECK(inqkit_run({"epistemic", "check-acyclic", data_path("ex1.model"), "--n", "4"}).code == 0);
    r = inqkit_run({"epistemic", "classes", data_path("ex1.model")});
    CHECK(r.out == "a: {w_pq,w_pnq} {w_npq,w_npnq}\n");
    r = inqkit_run({"transform", data_path("m1.model"), "--op", "simplify"});
    CHECK(r.code == 2);
    CHECK(r.err.find("S5 violation") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("cli: errors and determinism")
{
    CHECK(inqkit_run({"check", "no-such.model", "p"}).code == 2);
    Result r = inqkit_run({"check", data_path("ex1.model"), "p & "});
    CHECK(r.code == 2);
    CHECK(r.err.find("position") != std::string::npos);
    CHECK(inqkit_run({"nonsense"}).code == 2);
    CHECK(inqkit_run({"check", data_path("ex1.model"), "r"}).code == 2);   // unknown atom
    CHECK(inqkit_run({"--help"}).code == 0);
    Result a = inqkit_run({"export-dot", data_path("ex1.model")});
    Result b = inqkit_run({"export-dot", data_path("ex1.model")});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("style=dashed") != std::string::npos);
    a = inqkit_run({"transform", data_path("ex1.model"), "--op", "rich-cover", "--k", "3"});
    b = inqkit_run({"transform", data_path("ex1.model"), "--op", "rich-cover", "--k", "3"});
    CHECK(a.out == b.out);
}
