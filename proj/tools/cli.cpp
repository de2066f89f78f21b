#include "cli.hpp"

#include "inqkit/bisim.hpp"
#include "inqkit/charform.hpp"
#include "inqkit/epistemic.hpp"
#include "inqkit/fo.hpp"
#include "inqkit/formula.hpp"
#include "inqkit/model_io.hpp"
#include "inqkit/relational.hpp"
#include "inqkit/semantics.hpp"
#include "inqkit/transforms.hpp"
#include "inqkit/validate.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace inqkit::cli {

namespace {

namespace fs = std::filesystem;

InqModel as_inq(const ModelFile& f)
{
    if (const auto* m = std::get_if<InqModel>(&f.model)) return *m;
    return decode_relational(RelationalModel::from_structure(std::get<Structure>(f.model)));
}

const std::vector<std::string>& world_labels(const ModelFile& f)
{
    if (const auto* m = std::get_if<InqModel>(&f.model)) return m->worlds();
    return std::get<Structure>(f.model).worlds;
}

Point parse_point(const std::string& text, const std::vector<std::string>& worlds)
{
    if (!text.empty() && text.front() == '{') return parse_state(text, worlds);
    auto it = std::find(worlds.begin(), worlds.end(), text);
    if (it == worlds.end()) throw ModelError("unknown world '" + text + "'");
    return WorldPoint{static_cast<std::size_t>(it - worlds.begin())};
}

Point point_of(const ModelFile& f, const std::string& at)
{
    if (!at.empty()) return parse_point(at, world_labels(f));
    if (f.point) return *f.point;
    throw ModelError("no point: pass --at or add a point line to the model file");
}

std::size_t parse_count(const std::string& s, const std::string& what)
{
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw ModelError("bad " + what + " '" + s + "'");
    return v;
}

Depth parse_depth(const std::string& s) { return s == "full" ? Depth::full() : Depth::of(parse_count(s, "depth")); }

std::string depth_name(Depth d) { return d.is_full() ? "fully" : std::to_string(*d.rounds) + "-"; }

void print_report(std::ostream& out, const Report& r)
{
    out << r.property << ": " << (r.ok ? "pass" : "fail") << "\n";
    if (!r.ok) out << "  " << r.witness << "\n";
}

Structure structure_of(const ModelFile& f, const std::string& encoding, bool drop, std::optional<InfoState> state_point = {})
{
    Structure s = f.relational() ? std::get<Structure>(f.model)
                                 : encode_relational(std::get<InqModel>(f.model), parse_encode_mode(encoding), state_point).structure();
    if (s.state_labels.size() != s.states.size()) s.default_state_labels();
    return drop ? drop_empty_state(s) : s;
}

std::size_t find_element(const Structure& s, Sort sort, const std::string& text)
{
    if (sort == Sort::world) {
        if (auto w = s.find_world(text)) return *w;
        throw ModelError("unknown world '" + text + "'");
    }
    auto i = !text.empty() && text.front() == '{' ? s.find_state(parse_state(text, s.worlds)) : s.find_state_label(text);
    if (!i) throw ModelError("no state '" + text + "' in the structure");
    return *i;
}

Element element_of(const Structure& s, const std::string& text)
{
    if (s.find_world(text)) return Element{Sort::world, *s.find_world(text)};
    return Element{Sort::state, find_element(s, Sort::state, text)};
}

std::optional<InfoState> state_point(const std::string& at, const ModelFile& f)
{
    if (at.empty() || at.front() != '{') return std::nullopt;
    return parse_state(at, world_labels(f));
}

void write_file_or(std::ostream& out, const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw ModelError("cannot write '" + path + "'");
    f << text;
}

Covering read_covering(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open '" + path + "'");
    const fs::path dir = fs::path(path).parent_path();
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? p : (dir / p).string(); };
    std::optional<InqModel> source, target;
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string kw, a, b;
        if (!(ls >> kw)) continue;
        if (kw == "source" && ls >> a) {
            source = as_inq(read_model_file(resolve(a)));
        } else if (kw == "target" && ls >> a) {
            target = as_inq(read_model_file(resolve(a)));
        } else if (kw == "project" && ls >> a >> b) {
            pairs.emplace_back(a, b);
        } else {
            throw ModelError("line " + std::to_string(no) + ": expected source, target or project");
        }
    }
    if (!source || !target) throw ModelError("covering file needs source and target lines");
    std::vector<std::size_t> proj(target->world_count(), static_cast<std::size_t>(-1));
    for (const auto& [t, s] : pairs) proj.at(target->world_index(t)) = source->world_index(s);
    for (std::size_t x = 0; x < proj.size(); ++x)
        if (proj[x] == static_cast<std::size_t>(-1)) throw ModelError("no projection for target world " + target->worlds()[x]);
    return Covering{*source, *target, proj};
}

std::string covering_text(const Covering& c, const std::string& source, const std::string& target)
{
    std::ostringstream o;
    o << "# inqkit " << version << "\n";
    o << "source " << source << "\ntarget " << target << "\n";
    for (std::size_t x = 0; x < c.projection.size(); ++x)
        o << "project " << c.target.worlds()[x] << ' ' << c.source.worlds()[c.projection[x]] << "\n";
    return o.str();
}

PiEnumeration parse_pi(const std::string& s)
{
    if (s == "antichains") return PiEnumeration::antichains;
    if (s == "drop-one") return PiEnumeration::drop_one;
    if (s == "literal") return PiEnumeration::literal;
    throw ModelError("unknown enumeration '" + s + "'");
}

Signature signature_of(const InqModel& m) { return Signature{m.agents(), m.atoms()}; }

}   // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Inquisitive modal logic toolkit", "inqkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("inqkit ") + version);
    bool trivial = false;
    app.add_flag("--allow-trivial", trivial, "read missing sigma lines as {∅}");

    std::string model, model2, text, at, at2, encoding = "minimal", output, bdepth = "full", tdepth = "2", property, action, agent;
    std::size_t n = 0, q = 1, k = 2, budget = 64;
    std::string granularity = "full", pi = "antichains", mode = "world", op, policy = "minimal", covering;
    bool drop = false, expand = false;
    std::vector<std::string> assigns;

    auto* check = app.add_subcommand("check", "truth or support of a formula at a point");
    check->add_option("model", model)->required();
    check->add_option("formula", text)->required();
    check->add_option("--at", at, "world label or {w,...}");

    auto* bisim = app.add_subcommand("bisim", "n-bisimilarity of two pointed models, with a distinguishing play");
    bisim->add_option("left", model)->required();
    bisim->add_option("left-point", at)->required();
    bisim->add_option("right", model2)->required();
    bisim->add_option("right-point", at2)->required();
    bisim->add_option("--depth", bdepth, "rounds, or full");

    auto* charform = app.add_subcommand("charform", "characteristic formula of a world or state");
    charform->add_option("model", model)->required();
    auto* cw = charform->add_option("--world", at);
    charform->add_option("--state", at2)->excludes(cw);
    charform->add_option("--n", n)->required();
    charform->add_option("--pi", pi, "antichains, drop-one or literal");

    auto* translate = app.add_subcommand("translate", "standard translation into two-sorted first-order logic");
    translate->add_option("formula", text)->required();
    translate->add_option("--mode", mode, "world or state");
    translate->add_flag("--expand", expand, "expand the sub and e macros");

    auto* foeval = app.add_subcommand("fo-eval", "evaluate an s-expression over a relational encoding");
    foeval->add_option("model", model)->required();
    foeval->add_option("formula", text)->required();
    foeval->add_option("--encoding", encoding, "minimal, locally-full or full");
    foeval->add_flag("--drop-empty", drop);
    foeval->add_option("--assign", assigns, "var=element, element a world label, state label or {w,...}");

    auto* ef = app.add_subcommand("ef", "q-round Ehrenfeucht-Fraisse game on two encodings");
    ef->add_option("left", model)->required();
    ef->add_option("right", model2)->required();
    ef->add_option("--q", q)->required();
    ef->add_option("--at1", at);
    ef->add_option("--at2", at2);
    ef->add_option("--encoding", encoding);
    ef->add_flag("--drop-empty", drop);

    auto* encode = app.add_subcommand("encode", "write a relational encoding");
    encode->add_option("model", model)->required();
    encode->add_option("--mode", encoding, "minimal, locally-full or full");
    encode->add_option("--at", at, "a state point {w,...} adds its powerset");
    encode->add_option("-o,--output", output);

    auto* transform = app.add_subcommand("transform", "stratify, rich-cover or simplify");
    transform->add_option("model", model)->required();
    transform->add_option("--op", op)->required()->check(CLI::IsMember({"stratify", "rich-cover", "simplify"}));
    transform->add_option("--depth", tdepth, "even depth, or unbounded");
    transform->add_option("--policy", policy, "minimal or locally-full");
    transform->add_option("--budget", budget);
    transform->add_option("--encoding", encoding);
    transform->add_option("--at", at);
    transform->add_option("--k", k);
    transform->add_option("--granularity", granularity);
    transform->add_option("-o,--output", output);
    transform->add_option("--covering", covering, "rich-cover: also write a covering file next to the output");

    auto* verify = app.add_subcommand("verify-cover", "check a covering file");
    verify->add_option("covering", model)->required();

    auto* val = app.add_subcommand("validate", "check a structural property");
    val->add_option("model", model)->required();
    val->add_option("property", property)->required();

    auto* epi = app.add_subcommand("epistemic", "S5 structure: classes, local, check-rich, check-simple, check-acyclic");
    epi->add_option("action", action)->required()->check(
        CLI::IsMember({"classes", "local", "check-rich", "check-simple", "check-acyclic"}));
    epi->add_option("model", model)->required();
    epi->add_option("--agent", agent);
    epi->add_option("--at", at);
    epi->add_option("--granularity", granularity);
    epi->add_option("--k", k);
    epi->add_option("--n", n);

    auto* dot = app.add_subcommand("export-dot", "Graphviz rendering");
    dot->add_option("model", model)->required();
    dot->add_option("-o,--output", output);

    std::vector<const char*> argv{"inqkit"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << "inqkit " << version << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    const ReadOptions ropts{trivial};
    try {
        if (check->parsed()) {
            ModelFile f = read_model_file(model, ropts);
            InqModel m = as_inq(f);
            Signature sig = signature_of(m);
            Formula phi = parse_formula(text, &sig);
            Point p = point_of(f, at);
            bool v = std::holds_alternative<WorldPoint>(p) ? truth(m, std::get<WorldPoint>(p).world, phi)
                                                           : supports(m, std::get<InfoState>(p), phi);
            out << (v ? "true" : "false") << "\n";
            return v ? 0 : 1;
        }
        if (bisim->parsed()) {
            ModelFile fl = read_model_file(model, ropts), fr = read_model_file(model2, ropts);
            InqModel l = as_inq(fl), r = as_inq(fr);
            PointedModel a{&l, parse_point(at, l.worlds())}, b{&r, parse_point(at2, r.worlds())};
            Depth d = parse_depth(bdepth);
            if (equiv(a, b, d)) {
                out << depth_name(d) << (d.is_full() ? " " : "") << "bisimilar\n";
                return 0;
            }
            out << "not " << depth_name(d) << (d.is_full() ? " " : "") << "bisimilar\n";
            if (auto play = distinguishing_play(a, b, d)) {
                out << render_transcript(*play, l, r);
                Report rep = verify_transcript(*play, a, b);
                out << "transcript " << (rep.ok ? "verified" : "INVALID: " + rep.witness) << "\n";
            }
            return 1;
        }
        if (charform->parsed()) {
            ModelFile f = read_model_file(model, ropts);
            InqModel m = as_inq(f);
            CharformOptions opts;
            opts.pi = parse_pi(pi);
            opts.depth_cap = std::max(opts.depth_cap, n);
            Formula phi;
            if (!at2.empty()) {
                phi = chi_state(m, parse_state(at2, m.worlds()), n, opts);
            } else {
                Point p = point_of(f, at);
                if (const auto* s = std::get_if<InfoState>(&p)) phi = chi_state(m, *s, n, opts);
                else phi = chi_world(m, std::get<WorldPoint>(p).world, n, opts);
            }
            out << to_string(phi) << "\n";
            return 0;
        }
        if (translate->parsed()) {
            if (mode != "world" && mode != "state") throw ModelError("mode must be world or state");
            FOFormula st = standard_translate(parse_formula(text), mode == "world" ? TranslationMode::world : TranslationMode::state);
            out << to_sexpr(expand ? expand_macros(st) : st) << "\n";
            return 0;
        }
        if (foeval->parsed()) {
            ModelFile f = read_model_file(model, ropts);
            Structure s = structure_of(f, encoding, drop);
            FOFormula phi = parse_fo(text);
            std::map<std::string, std::string> given;
            for (const auto& a : assigns) {
                auto eq = a.find('=');
                if (eq == std::string::npos) throw ModelError("assignment '" + a + "' lacks '='");
                given[a.substr(0, eq)] = a.substr(eq + 1);
            }
            Assignment asg;
            for (const Var& v : free_variables(phi)) {
                auto it = given.find(v.name);
                if (it == given.end()) throw ModelError("free variable '" + v.name + "' is unassigned");
                asg[v.name] = find_element(s, v.sort, it->second);
            }
            bool v = fo_eval(s, phi, asg);
            out << (v ? "true" : "false") << "\n";
            return v ? 0 : 1;
        }
        if (ef->parsed()) {
            ModelFile fl = read_model_file(model, ropts), fr = read_model_file(model2, ropts);
            Structure l = structure_of(fl, encoding, drop, state_point(at, fl));
            Structure r = structure_of(fr, encoding, drop, state_point(at2, fr));
            std::vector<Element> pa, pb;
            if (!at.empty()) pa.push_back(element_of(l, at));
            if (!at2.empty()) pb.push_back(element_of(r, at2));
            if (pa.size() != pb.size()) throw ModelError("give both --at1 and --at2 or neither");
            bool v = fo_ef_equiv(l, pa, r, pb, q);
            out << (v ? "equivalent" : "distinguished") << " at quantifier rank " << q << "\n";
            return v ? 0 : 1;
        }
        if (encode->parsed()) {
            ModelFile f = read_model_file(model, ropts);
            if (f.relational()) throw ModelError("input is already relational");
            std::optional<InfoState> sp = state_point(at, f);
            RelationalModel r = encode_relational(std::get<InqModel>(f.model), parse_encode_mode(encoding), sp);
            std::optional<Point> pt = sp ? std::optional<Point>(*sp) : f.point;
            std::ostringstream o;
            write_structure(o, r.structure(), f.name + "-" + encoding, pt);
            write_file_or(out, output, o.str());
            return 0;
        }
        if (transform->parsed()) {
            ModelFile f = read_model_file(model, ropts);
            std::ostringstream o;
            if (op == "stratify") {
                StratifyOptions so;
                so.policy = parse_stratify_policy(policy);
                so.budget = budget;
                if (tdepth == "unbounded") so.depth = std::nullopt;
                else so.depth = parse_count(tdepth, "depth");
                Point p = point_of(f, at);
                std::optional<InfoState> sp;
                if (const auto* s = std::get_if<InfoState>(&p)) sp = *s;
                RelationalModel r = f.relational()
                                        ? RelationalModel::from_structure(std::get<Structure>(f.model))
                                        : encode_relational(std::get<InqModel>(f.model), parse_encode_mode(encoding), sp);
                Stratified st = stratify(r, p, so);
                write_structure(o, st.model.structure(), f.name + "-stratified", st.point);
            } else if (op == "rich-cover") {
                Covering c = rich_cover(as_inq(f), k);
                write_model(o, c.target, f.name + "-x" + std::to_string(k), std::nullopt);
                if (!covering.empty()) {
                    if (output.empty() || output == "-") throw ModelError("--covering needs -o for the target model");
                    const fs::path base = fs::path(covering).parent_path();
                    std::ofstream cf(covering);
                    if (!cf) throw ModelError("cannot write '" + covering + "'");
                    cf << covering_text(c, fs::relative(fs::absolute(model), fs::absolute(base.empty() ? "." : base)).string(),
                                        fs::relative(fs::absolute(output), fs::absolute(base.empty() ? "." : base)).string());
                }
            } else {
                InqModel s = simplify(as_inq(f), parse_depth(granularity));
                write_model(o, s, f.name + "-simple", f.point);
            }
            write_file_or(out, output, o.str());
            return 0;
        }
        if (verify->parsed()) {
            Report r = verify_covering(read_covering(model));
            print_report(out, r);
            return r.ok ? 0 : 1;
        }
        if (val->parsed()) {
            ModelFile f = read_model_file(model, ropts);
            Property p = parse_property(property, world_labels(f));
            if (p.kind == PropertyKind::stratified && !p.point) p.point = f.point;
            Report r = f.relational() ? validate(std::get<Structure>(f.model), p) : validate(std::get<InqModel>(f.model), p);
            print_report(out, r);
            return r.ok ? 0 : 1;
        }
        if (epi->parsed()) {
            ModelFile f = read_model_file(model, ropts);
            InqModel m = as_inq(f);
            std::vector<std::size_t> agents;
            if (agent.empty())
                for (std::size_t a = 0; a < m.agent_count(); ++a) agents.push_back(a);
            else
                agents.push_back(m.agent_index(agent));
            Report r;
            if (action == "classes") {
                for (std::size_t a : agents) {
                    out << m.agents()[a] << ":";
                    for (InfoState c : a_classes(m, a)) out << ' ' << format_state(c, m.worlds());
                    out << "\n";
                }
                return 0;
            } else if (action == "local") {
                Point p = point_of(f, at);
                if (!std::holds_alternative<WorldPoint>(p)) throw ModelError("local structures need a world");
                for (std::size_t a : agents) {
                    LocalAStructure ls = local_a_structure(m, a, std::get<WorldPoint>(p).world, parse_depth(granularity));
                    out << m.agents()[a] << " carrier " << format_state(ls.carrier, m.worlds()) << "\n";
                    out << m.agents()[a] << " sigma " << format_inqstate(ls.inqstate, m.worlds()) << "\n";
                    out << m.agents()[a] << " colours";
                    for (auto [w, c] : ls.colouring) out << ' ' << m.worlds()[w] << '=' << c;
                    out << "\n";
                }
                return 0;
            } else if (action == "check-rich") {
                r = check_k_rich(m, k);
            } else if (action == "check-simple") {
                r = check_simple(m);
            } else {
                r = check_n_acyclic(m, n);
            }
            print_report(out, r);
            return r.ok ? 0 : 1;
        }
        if (dot->parsed()) {
            ModelFile f = read_model_file(model, ropts);
            write_file_or(out, output, export_dot(as_inq(f), f.name.empty() ? "model" : f.name));
            return 0;
        }
    } catch (const ParseError& e) {
        err << "parse error at position " << e.position() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}   // namespace inqkit::cli
