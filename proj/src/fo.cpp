#include "inqkit/fo.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <unordered_map>

namespace inqkit {

FOKind FOFormula::kind() const { return n_->kind; }

namespace fo {
namespace {

FOFormula make(FOKind k, std::string name, std::vector<Var> args, FOFormula l = {}, FOFormula r = {})
{
    return FOFormula(std::make_shared<const FONode>(FONode{k, std::move(name), std::move(args), std::move(l), std::move(r)}));
}

void want(const Var& v, Sort s, const char* where)
{
    if (v.sort != s)
        throw FOError(std::string("sort mismatch: ") + v.name + " in " + where + " must be a " +
                      (s == Sort::world ? "world" : "state") + " variable");
}

}   // namespace

FOFormula truth() { return make(FOKind::truth, {}, {}); }
FOFormula falsum() { return make(FOKind::falsum, {}, {}); }

FOFormula pred(const std::string& atom, const Var& w)
{
    want(w, Sort::world, "P");
    return make(FOKind::pred, atom, {w});
}

FOFormula edge(const std::string& agent, const Var& w, const Var& s)
{
    want(w, Sort::world, "E");
    want(s, Sort::state, "E");
    return make(FOKind::edge, agent, {w, s});
}

FOFormula member(const Var& w, const Var& s)
{
    want(w, Sort::world, "eps");
    want(s, Sort::state, "eps");
    return make(FOKind::member, {}, {w, s});
}

FOFormula eq(const Var& x, const Var& y)
{
    if (x.sort != y.sort) throw FOError("sort mismatch: " + x.name + " = " + y.name);
    return make(FOKind::eq, {}, {x, y});
}

FOFormula neg(const FOFormula& f) { return make(FOKind::neg, {}, {}, f); }
FOFormula conj(const FOFormula& a, const FOFormula& b) { return make(FOKind::conj, {}, {}, a, b); }
FOFormula disj(const FOFormula& a, const FOFormula& b) { return make(FOKind::disj, {}, {}, a, b); }
FOFormula implies(const FOFormula& a, const FOFormula& b) { return make(FOKind::implies, {}, {}, a, b); }
FOFormula iff(const FOFormula& a, const FOFormula& b) { return make(FOKind::iff, {}, {}, a, b); }
FOFormula forall(const Var& v, const FOFormula& body) { return make(FOKind::forall, {}, {v}, body); }
FOFormula exists(const Var& v, const FOFormula& body) { return make(FOKind::exists, {}, {v}, body); }

FOFormula subset(const Var& s, const Var& t)
{
    want(s, Sort::state, "sub");
    want(t, Sort::state, "sub");
    return make(FOKind::subset, {}, {s, t});
}

FOFormula emap(const std::string& agent, const Var& w, const Var& t)
{
    want(w, Sort::world, "e");
    want(t, Sort::state, "e");
    return make(FOKind::emap, agent, {w, t});
}

}   // namespace fo

namespace {

bool is_quantifier(FOKind k) { return k == FOKind::forall || k == FOKind::exists; }
bool is_binary(FOKind k)
{
    return k == FOKind::conj || k == FOKind::disj || k == FOKind::implies || k == FOKind::iff;
}

Var fresh(const std::string& base, Sort sort, const std::vector<Var>& avoid)
{
    Var v{base, sort};
    for (std::size_t i = 1; std::find(avoid.begin(), avoid.end(), v) != avoid.end(); ++i)
        v.name = base + std::to_string(i);
    return v;
}

FOFormula expand_rec(const FOFormula& f, std::unordered_map<const FONode*, FOFormula>& memo)
{
    if (auto it = memo.find(f.ptr()); it != memo.end()) return it->second;
    const FONode& n = f.node();
    FOFormula out;
    switch (n.kind) {
    case FOKind::subset: {
        Var w = fresh("w", Sort::world, n.args);
        out = fo::forall(w, fo::implies(fo::member(w, n.args[0]), fo::member(w, n.args[1])));
        break;
    }
    case FOKind::emap: {
        const Var& w = n.args[0];
        const Var& t = n.args[1];
        Var v = fresh("v", Sort::world, n.args);
        Var s = fresh("s", Sort::state, n.args);
        out = fo::forall(v, fo::iff(fo::member(v, t), fo::exists(s, fo::conj(fo::edge(n.name, w, s), fo::member(v, s)))));
        break;
    }
    case FOKind::neg: out = fo::neg(expand_rec(n.left, memo)); break;
    case FOKind::forall: out = fo::forall(n.args[0], expand_rec(n.left, memo)); break;
    case FOKind::exists: out = fo::exists(n.args[0], expand_rec(n.left, memo)); break;
    default:
        if (is_binary(n.kind)) {
            FOFormula l = expand_rec(n.left, memo), r = expand_rec(n.right, memo);
            out = FOFormula(std::make_shared<const FONode>(FONode{n.kind, {}, {}, l, r}));
        } else {
            out = f;
        }
    }
    memo.emplace(f.ptr(), out);
    return out;
}

const std::set<Var>& free_rec(const FOFormula& f, std::unordered_map<const FONode*, std::set<Var>>& memo)
{
    if (auto it = memo.find(f.ptr()); it != memo.end()) return it->second;
    const FONode& n = f.node();
    std::set<Var> out;
    if (is_quantifier(n.kind)) {
        out = free_rec(n.left, memo);
        out.erase(n.args[0]);
    } else if (n.kind == FOKind::neg) {
        out = free_rec(n.left, memo);
    } else if (is_binary(n.kind)) {
        out = free_rec(n.left, memo);
        const auto& r = free_rec(n.right, memo);
        out.insert(r.begin(), r.end());
    } else {
        out.insert(n.args.begin(), n.args.end());
    }
    return memo.emplace(f.ptr(), std::move(out)).first->second;
}

std::size_t rank_rec(const FOFormula& f, std::unordered_map<const FONode*, std::size_t>& memo)
{
    if (auto it = memo.find(f.ptr()); it != memo.end()) return it->second;
    const FONode& n = f.node();
    std::size_t r = 0;
    if (is_quantifier(n.kind)) r = 1 + rank_rec(n.left, memo);
    else if (n.kind == FOKind::neg) r = rank_rec(n.left, memo);
    else if (is_binary(n.kind)) r = std::max(rank_rec(n.left, memo), rank_rec(n.right, memo));
    memo.emplace(f.ptr(), r);
    return r;
}

}   // namespace

FOFormula expand_macros(const FOFormula& f)
{
    std::unordered_map<const FONode*, FOFormula> memo;
    return expand_rec(f, memo);
}

std::set<Var> free_variables(const FOFormula& f)
{
    std::unordered_map<const FONode*, std::set<Var>> memo;
    return free_rec(f, memo);
}

std::size_t quantifier_rank(const FOFormula& f)
{
    std::unordered_map<const FONode*, std::size_t> memo;
    return rank_rec(expand_macros(f), memo);
}

bool structurally_equal(const FOFormula& a, const FOFormula& b)
{
    if (a.ptr() == b.ptr()) return true;
    const FONode& x = a.node();
    const FONode& y = b.node();
    if (x.kind != y.kind || x.name != y.name || x.args != y.args) return false;
    if (x.left.valid() != y.left.valid() || x.right.valid() != y.right.valid()) return false;
    if (x.left.valid() && !structurally_equal(x.left, y.left)) return false;
    if (x.right.valid() && !structurally_equal(x.right, y.right)) return false;
    return true;
}

// ---------------------------------------------------------------- text

namespace {

const char* sort_tag(Sort s) { return s == Sort::world ? "W" : "S"; }

void print(const FOFormula& f, std::string& out)
{
    const FONode& n = f.node();
    auto args = [&] {
        for (const Var& v : n.args) out += " " + v.name;
    };
    switch (n.kind) {
    case FOKind::truth: out += "true"; return;
    case FOKind::falsum: out += "false"; return;
    case FOKind::pred: out += "(P " + n.name; args(); out += ")"; return;
    case FOKind::edge: out += "(E " + n.name; args(); out += ")"; return;
    case FOKind::member: out += "(eps"; args(); out += ")"; return;
    case FOKind::eq: out += "(="; args(); out += ")"; return;
    case FOKind::subset: out += "(sub"; args(); out += ")"; return;
    case FOKind::emap: out += "(e " + n.name; args(); out += ")"; return;
    case FOKind::neg: out += "(not "; print(n.left, out); out += ")"; return;
    case FOKind::forall:
    case FOKind::exists:
        out += n.kind == FOKind::forall ? "(forall (" : "(exists (";
        out += n.args[0].name + " " + sort_tag(n.args[0].sort) + ") ";
        print(n.left, out);
        out += ")";
        return;
    default: break;
    }
    const char* op = n.kind == FOKind::conj ? "and" : n.kind == FOKind::disj ? "or" : n.kind == FOKind::implies ? "->" : "<->";
    out += "(";
    out += op;
    out += " ";
    print(n.left, out);
    out += " ";
    print(n.right, out);
    out += ")";
}

struct SexprParser {
    const std::string& text;
    std::size_t pos = 0;
    std::vector<Var> scope;

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ParseError("fo: " + msg + " at offset " + std::to_string(pos), pos);
    }

    void skip()
    {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    std::string token()
    {
        skip();
        if (pos >= text.size()) fail("unexpected end of input");
        if (text[pos] == '(' || text[pos] == ')') return std::string(1, text[pos++]);
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) && text[pos] != '(' &&
               text[pos] != ')')
            ++pos;
        return text.substr(start, pos - start);
    }

    void expect(const std::string& t)
    {
        std::size_t at = pos;
        if (token() != t) {
            pos = at;
            fail("expected '" + t + "'");
        }
    }

    Var var(Sort sort)
    {
        std::string name = token();
        if (name == "(" || name == ")") fail("expected a variable");
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->name == name) {
                if (it->sort != sort) fail("sort mismatch for variable " + name);
                return *it;
            }
        return Var{name, sort};
    }

    // Sort of a variable in '=': from scope, else from its first letter.
    Var any_var()
    {
        std::size_t at = pos;
        std::string name = token();
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->name == name) return *it;
        if (name.empty() || name == "(" || name == ")") fail("expected a variable");
        char c = name[0];
        if (c == 'w' || c == 'v' || c == 'u') return Var{name, Sort::world};
        if (c == 's' || c == 't') return Var{name, Sort::state};
        pos = at;
        fail("cannot tell the sort of free variable " + name);
    }

    FOFormula formula()
    {
        std::string t = token();
        if (t == "true") return fo::truth();
        if (t == "false") return fo::falsum();
        if (t != "(") fail("expected '(' or a constant");
        std::string op = token();
        FOFormula out;
        if (op == "P") {
            std::string a = token();
            out = fo::pred(a, var(Sort::world));
        } else if (op == "E") {
            std::string a = token();
            Var w = var(Sort::world);
            out = fo::edge(a, w, var(Sort::state));
        } else if (op == "eps") {
            Var w = var(Sort::world);
            out = fo::member(w, var(Sort::state));
        } else if (op == "sub") {
            Var s = var(Sort::state);
            out = fo::subset(s, var(Sort::state));
        } else if (op == "e") {
            std::string a = token();
            Var w = var(Sort::world);
            out = fo::emap(a, w, var(Sort::state));
        } else if (op == "=") {
            Var x = any_var();
            Var y = any_var();
            if (x.sort != y.sort) fail("sort mismatch in =");
            out = fo::eq(x, y);
        } else if (op == "not") {
            out = fo::neg(formula());
        } else if (op == "and" || op == "or") {
            out = formula();
            skip();
            bool any = false;
            while (pos < text.size() && text[pos] != ')') {
                FOFormula r = formula();
                out = op == "and" ? fo::conj(out, r) : fo::disj(out, r);
                any = true;
                skip();
            }
            if (!any) fail(op + " needs two operands");
        } else if (op == "->" || op == "<->") {
            FOFormula l = formula();
            FOFormula r = formula();
            out = op == "->" ? fo::implies(l, r) : fo::iff(l, r);
        } else if (op == "forall" || op == "exists") {
            expect("(");
            std::string name = token();
            std::string tag = token();
            if (tag != "W" && tag != "S") fail("sort must be W or S");
            expect(")");
            Var v{name, tag == "W" ? Sort::world : Sort::state};
            scope.push_back(v);
            FOFormula body = formula();
            scope.pop_back();
            out = op == "forall" ? fo::forall(v, body) : fo::exists(v, body);
        } else {
            fail("unknown operator '" + op + "'");
        }
        expect(")");
        return out;
    }
};

}   // namespace

std::string to_sexpr(const FOFormula& f)
{
    std::string out;
    print(f, out);
    return out;
}

FOFormula parse_fo(const std::string& text)
{
    SexprParser p{text, 0, {}};
    FOFormula f;
    try {
        f = p.formula();
    } catch (const FOError& e) {
        throw ParseError(std::string("fo: ") + e.what(), p.pos);
    }
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    return f;
}

// ---------------------------------------------------------------- translation

namespace {

struct Translator {
    const Var w{"w", Sort::world};
    const Var s{"s", Sort::state};
    const Var t{"t", Sort::state};
    std::map<std::pair<const FormulaNode*, int>, FOFormula> memo;

    FOFormula world(const Formula& phi)
    {
        auto key = std::make_pair(phi.node(), 0);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        FOFormula out;
        switch (phi.kind()) {
        case FormulaKind::atom: out = fo::pred(phi.name(), w); break;
        case FormulaKind::bottom: out = fo::falsum(); break;
        case FormulaKind::conj: out = fo::conj(world(phi.left()), world(phi.right())); break;
        case FormulaKind::idisj: out = fo::disj(world(phi.left()), world(phi.right())); break;
        case FormulaKind::implies: out = fo::implies(world(phi.left()), world(phi.right())); break;
        case FormulaKind::boxplus: out = fo::forall(s, fo::implies(fo::edge(phi.name(), w, s), state(phi.body(), s))); break;
        case FormulaKind::box: out = fo::forall(s, fo::implies(fo::emap(phi.name(), w, s), state(phi.body(), s))); break;
        }
        memo.emplace(key, out);
        return out;
    }

    FOFormula state(const Formula& phi, const Var& x)
    {
        const Var& y = x.name == "s" ? t : s;
        auto key = std::make_pair(phi.node(), x.name == "s" ? 1 : 2);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        FOFormula out;
        switch (phi.kind()) {
        case FormulaKind::atom:
        case FormulaKind::bottom:
        case FormulaKind::box:
        case FormulaKind::boxplus:
            // The state clause of a modality quantifies over worlds of x and
            // asks for the world translation of the whole modal formula.
            out = fo::forall(w, fo::implies(fo::member(w, x), world(phi)));
            break;
        case FormulaKind::conj: out = fo::conj(state(phi.left(), x), state(phi.right(), x)); break;
        case FormulaKind::idisj: out = fo::disj(state(phi.left(), x), state(phi.right(), x)); break;
        case FormulaKind::implies:
            out = fo::forall(y, fo::implies(fo::subset(y, x), fo::implies(state(phi.left(), y), state(phi.right(), y))));
            break;
        }
        memo.emplace(key, out);
        return out;
    }
};

}   // namespace

FOFormula standard_translate(const Formula& phi, TranslationMode mode)
{
    Translator tr;
    return mode == TranslationMode::world ? tr.world(phi) : tr.state(phi, tr.s);
}

// ---------------------------------------------------------------- evaluation

struct FOEvaluator::Impl {
    struct Node {
        FOKind kind;
        std::size_t index = 0;         // atom or agent index; slot of the bound variable
        std::vector<std::size_t> args;   // argument slots
        int left = -1, right = -1;
        std::vector<std::size_t> free;   // slots of the free variables
        std::vector<std::size_t> radix;
        bool dense = false;
        std::vector<signed char> dense_memo;
        std::unordered_map<std::uint64_t, bool> sparse_memo;
    };

    const Structure& st;
    std::vector<Node> nodes;
    std::map<Var, std::size_t> slot_of;
    std::vector<Sort> slot_sort;
    std::vector<std::size_t> values;
    std::set<Var> free_vars;
    int root = -1;

    Impl(const Structure& s, const FOFormula& f) : st(s)
    {
        FOFormula e = expand_macros(f);
        std::unordered_map<const FONode*, std::set<Var>> fmemo;
        std::unordered_map<const FONode*, int> cmemo;
        root = compile(e, fmemo, cmemo);
        free_vars = free_rec(e, fmemo);
        values.assign(slot_sort.size(), 0);
    }

    std::size_t slot(const Var& v)
    {
        auto [it, fresh] = slot_of.emplace(v, slot_sort.size());
        if (fresh) slot_sort.push_back(v.sort);
        return it->second;
    }

    std::size_t domain(std::size_t sl) const
    {
        return slot_sort[sl] == Sort::world ? st.worlds.size() : st.states.size();
    }

    int compile(const FOFormula& f, std::unordered_map<const FONode*, std::set<Var>>& fmemo,
                std::unordered_map<const FONode*, int>& cmemo)
    {
        if (auto it = cmemo.find(f.ptr()); it != cmemo.end()) return it->second;
        const FONode& n = f.node();
        Node c;
        c.kind = n.kind;
        if (n.kind == FOKind::pred) {
            auto it = std::find(st.atoms.begin(), st.atoms.end(), n.name);
            if (it == st.atoms.end()) throw FOError("unknown predicate P " + n.name);
            c.index = static_cast<std::size_t>(it - st.atoms.begin());
        } else if (n.kind == FOKind::edge) {
            auto it = std::find(st.agents.begin(), st.agents.end(), n.name);
            if (it == st.agents.end()) throw FOError("unknown agent E " + n.name);
            c.index = static_cast<std::size_t>(it - st.agents.begin());
        }
        if (is_quantifier(n.kind)) {
            c.index = slot(n.args[0]);
        } else {
            for (const Var& v : n.args) c.args.push_back(slot(v));
        }
        if (n.left.valid()) c.left = compile(n.left, fmemo, cmemo);
        if (n.right.valid()) c.right = compile(n.right, fmemo, cmemo);
        if (is_quantifier(n.kind) || is_binary(n.kind) || n.kind == FOKind::neg) {
            for (const Var& v : free_rec(f, fmemo)) c.free.push_back(slot(v));
            constexpr std::size_t dense_cap = std::size_t{1} << 16;
            std::size_t cells = 1;
            for (std::size_t sl : c.free) {
                c.radix.push_back(domain(sl));
                cells = std::min(cells * std::max<std::size_t>(domain(sl), 1), dense_cap + 1);
            }
            c.dense = cells <= dense_cap;
            if (c.dense) c.dense_memo.assign(cells, -1);
        }
        nodes.push_back(std::move(c));
        int id = static_cast<int>(nodes.size()) - 1;
        cmemo.emplace(f.ptr(), id);
        return id;
    }

    bool eval(int id)
    {
        Node& n = nodes[static_cast<std::size_t>(id)];
        switch (n.kind) {
        case FOKind::truth: return true;
        case FOKind::falsum: return false;
        case FOKind::pred: return st.valuation[n.index].contains(values[n.args[0]]);
        case FOKind::edge: return st.edge(n.index, values[n.args[0]], values[n.args[1]]);
        case FOKind::member: return st.states[values[n.args[1]]].contains(values[n.args[0]]);
        case FOKind::eq: return values[n.args[0]] == values[n.args[1]];
        default: break;
        }
        std::uint64_t key = 0;
        for (std::size_t i = 0; i < n.free.size(); ++i) key = key * n.radix[i] + values[n.free[i]];
        if (n.dense) {
            if (n.dense_memo[key] >= 0) return n.dense_memo[key] != 0;
        } else if (auto it = n.sparse_memo.find(key); it != n.sparse_memo.end()) {
            return it->second;
        }
        bool r = false;
        switch (n.kind) {
        case FOKind::neg: r = !eval(n.left); break;
        case FOKind::conj: r = eval(n.left) && eval(n.right); break;
        case FOKind::disj: r = eval(n.left) || eval(n.right); break;
        case FOKind::implies: r = !eval(n.left) || eval(n.right); break;
        case FOKind::iff: r = eval(n.left) == eval(n.right); break;
        case FOKind::forall:
        case FOKind::exists: {
            const bool universal = n.kind == FOKind::forall;
            const std::size_t saved = values[n.index];
            const std::size_t dom = domain(n.index);
            const int body = n.left;
            r = universal;
            for (std::size_t x = 0; x < dom; ++x) {
                values[n.index] = x;
                if (eval(body) != universal) {
                    r = !universal;
                    break;
                }
            }
            values[n.index] = saved;
            break;
        }
        default: break;
        }
        if (n.dense) n.dense_memo[key] = r ? 1 : 0;
        else n.sparse_memo.emplace(key, r);
        return r;
    }
};

FOEvaluator::FOEvaluator(const Structure& s, const FOFormula& f) : impl_(std::make_unique<Impl>(s, f)) {}
FOEvaluator::~FOEvaluator() = default;

const std::set<Var>& FOEvaluator::free() const { return impl_->free_vars; }

bool FOEvaluator::eval(const Assignment& a)
{
    Impl& im = *impl_;
    std::map<std::string, Sort> seen;
    for (const Var& v : im.free_vars) {
        auto [it, fresh] = seen.emplace(v.name, v.sort);
        if (!fresh) throw FOError("sort mismatch: " + v.name + " occurs free as a world and as a state variable");
        auto val = a.find(v.name);
        if (val == a.end()) throw FOError("unbound variable " + v.name);
        const std::size_t sl = im.slot_of.at(v);
        if (val->second >= im.domain(sl))
            throw FOError("sort mismatch: " + v.name + " := " + std::to_string(val->second) + " is not a " +
                          (v.sort == Sort::world ? "world" : "state") + " of the structure");
        im.values[sl] = val->second;
    }
    return im.eval(im.root);
}

bool fo_eval(const Structure& s, const FOFormula& f, const Assignment& a)
{
    FOEvaluator ev(s, f);
    return ev.eval(a);
}

// ---------------------------------------------------------------- EF game

namespace {

struct EFSide {
    const Structure& s;
    std::vector<std::vector<bool>> atom_holds;   // [shared atom][world]
    std::vector<int> agent;                      // shared agent -> local index or -1

    bool edge(std::size_t ag, std::size_t w, std::size_t st) const
    {
        return agent[ag] >= 0 && s.edge(static_cast<std::size_t>(agent[ag]), w, st);
    }
    std::size_t count(Sort so) const { return so == Sort::world ? s.worlds.size() : s.states.size(); }
};

struct EFGame {
    EFSide a, b;
    std::size_t agents;
    std::map<std::pair<std::size_t, std::vector<std::uint64_t>>, bool> memo;

    static std::uint64_t pack(Element x, Element y)
    {
        return (std::uint64_t{x.sort == Sort::state} << 63) | (std::uint64_t{x.index} << 32) | y.index;
    }
    static std::pair<Element, Element> unpack(std::uint64_t k)
    {
        Sort so = (k >> 63) ? Sort::state : Sort::world;
        return {Element{so, (k >> 32) & 0x7fffffffu}, Element{so, k & 0xffffffffu}};
    }

    bool related(Element w, Element s, const EFSide& side, std::size_t ag) const { return side.edge(ag, w.index, s.index); }

    // Whether adding (x,y) to a partial isomorphism keeps it one.
    bool compatible(const std::vector<std::uint64_t>& pos, Element x, Element y) const
    {
        if (x.sort != y.sort) return false;
        if (x.sort == Sort::world)
            for (std::size_t p = 0; p < a.atom_holds.size(); ++p)
                if (a.atom_holds[p][x.index] != b.atom_holds[p][y.index]) return false;
        for (std::uint64_t k : pos) {
            auto [u, v] = unpack(k);
            if (u.sort == x.sort) {
                if ((u.index == x.index) != (v.index == y.index)) return false;
                continue;
            }
            Element wa = x.sort == Sort::world ? x : u, sa = x.sort == Sort::world ? u : x;
            Element wb = x.sort == Sort::world ? y : v, sb = x.sort == Sort::world ? v : y;
            if (a.s.states[sa.index].contains(wa.index) != b.s.states[sb.index].contains(wb.index)) return false;
            for (std::size_t ag = 0; ag < agents; ++ag)
                if (a.edge(ag, wa.index, sa.index) != b.edge(ag, wb.index, sb.index)) return false;
        }
        return true;
    }

    bool win(std::size_t q, const std::vector<std::uint64_t>& pos)
    {
        if (q == 0) return true;
        auto key = std::make_pair(q, pos);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        bool result = true;
        for (int side = 0; side < 2 && result; ++side) {
            const EFSide& from = side == 0 ? a : b;
            const EFSide& to = side == 0 ? b : a;
            for (Sort so : {Sort::world, Sort::state}) {
                for (std::size_t i = 0; i < from.count(so) && result; ++i) {
                    Element x{so, i};
                    bool pebbled = std::any_of(pos.begin(), pos.end(), [&](std::uint64_t k) {
                        auto [u, v] = unpack(k);
                        return (side == 0 ? u : v) == x;
                    });
                    if (pebbled) continue;
                    bool answered = false;
                    for (std::size_t j = 0; j < to.count(so) && !answered; ++j) {
                        Element y{so, j};
                        Element ea = side == 0 ? x : y, eb = side == 0 ? y : x;
                        if (!compatible(pos, ea, eb)) continue;
                        std::vector<std::uint64_t> next = pos;
                        next.insert(std::lower_bound(next.begin(), next.end(), pack(ea, eb)), pack(ea, eb));
                        next.erase(std::unique(next.begin(), next.end()), next.end());
                        answered = win(q - 1, next);
                    }
                    if (!answered) result = false;
                }
            }
        }
        memo.emplace(std::move(key), result);
        return result;
    }
};

EFSide make_side(const Structure& s, const std::vector<std::string>& atoms, const std::vector<std::string>& agents)
{
    EFSide side{s, {}, {}};
    for (const std::string& p : atoms) {
        std::vector<bool> holds(s.worlds.size(), false);
        auto it = std::find(s.atoms.begin(), s.atoms.end(), p);
        if (it != s.atoms.end()) {
            InfoState v = s.valuation[static_cast<std::size_t>(it - s.atoms.begin())];
            for (std::size_t w = 0; w < s.worlds.size(); ++w) holds[w] = v.contains(w);
        }
        side.atom_holds.push_back(std::move(holds));
    }
    for (const std::string& ag : agents) {
        auto it = std::find(s.agents.begin(), s.agents.end(), ag);
        side.agent.push_back(it == s.agents.end() ? -1 : static_cast<int>(it - s.agents.begin()));
    }
    return side;
}

}   // namespace

bool fo_ef_equiv(const Structure& a, const std::vector<Element>& at, const Structure& b,
                 const std::vector<Element>& bt, std::size_t q, EFOptions opts)
{
    if (q > opts.round_cap) throw FOError("EF game limited to " + std::to_string(opts.round_cap) + " rounds");
    if (a.element_count() + b.element_count() > opts.element_cap)
        throw FOError("EF game limited to " + std::to_string(opts.element_cap) + " elements in total");
    if (at.size() != bt.size()) throw FOError("EF game needs tuples of equal length");
    std::set<std::string> atoms(a.atoms.begin(), a.atoms.end()), agents(a.agents.begin(), a.agents.end());
    atoms.insert(b.atoms.begin(), b.atoms.end());
    agents.insert(b.agents.begin(), b.agents.end());
    std::vector<std::string> atom_list(atoms.begin(), atoms.end()), agent_list(agents.begin(), agents.end());
    EFGame game{make_side(a, atom_list, agent_list), make_side(b, atom_list, agent_list), agent_list.size(), {}};

    std::vector<std::uint64_t> pos;
    for (std::size_t i = 0; i < at.size(); ++i) {
        if (at[i].index >= game.a.count(at[i].sort) || bt[i].index >= game.b.count(bt[i].sort))
            throw FOError("EF tuple element out of range");
        if (!game.compatible(pos, at[i], bt[i])) return false;
        pos.push_back(EFGame::pack(at[i], bt[i]));
        std::sort(pos.begin(), pos.end());
        pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    }
    return game.win(q, pos);
}

// ---------------------------------------------------------------- locality

std::vector<std::size_t> gaifman_distances(const Structure& s, Element from, DistanceMode mode)
{
    const std::size_t nw = s.worlds.size(), ns = s.states.size();
    if (from.index >= (from.sort == Sort::world ? nw : ns)) throw ModelError("element out of range");
    std::vector<std::vector<std::size_t>> adj(nw + ns);
    for (std::size_t i = 0; i < ns; ++i) {
        for (std::size_t w = 0; w < nw; ++w) {
            bool linked = s.states[i].contains(w);
            for (std::size_t a = 0; a < s.agents.size() && !linked; ++a) linked = s.edge(a, w, i);
            if (!linked) continue;
            adj[w].push_back(nw + i);
            adj[nw + i].push_back(w);
        }
    }
    auto relays = [&](std::size_t node) {
        return mode == DistanceMode::plain || node < nw || !s.states[node - nw].empty();
    };
    std::vector<std::size_t> dist(nw + ns, unreachable);
    const std::size_t start = from.sort == Sort::world ? from.index : nw + from.index;
    dist[start] = 0;
    std::deque<std::size_t> queue{start};
    while (!queue.empty()) {
        std::size_t x = queue.front();
        queue.pop_front();
        if (!relays(x)) continue;
        for (std::size_t y : adj[x]) {
            if (dist[y] != unreachable) continue;
            dist[y] = dist[x] + 1;
            queue.push_back(y);
        }
    }
    return dist;
}

Neighbourhood neighbourhood(const Structure& s, Element x, std::size_t l, DistanceMode mode)
{
    const std::vector<std::size_t> dist = gaifman_distances(s, x, mode);
    const std::size_t nw = s.worlds.size();
    Neighbourhood out;
    Structure& r = out.structure;
    r.agents = s.agents;
    r.atoms = s.atoms;
    std::vector<std::size_t> world_map(nw, unreachable);
    for (std::size_t w = 0; w < nw; ++w) {
        if (dist[w] > l) continue;
        world_map[w] = out.worlds.size();
        out.worlds.push_back(w);
        r.worlds.push_back(s.worlds[w]);
    }
    std::vector<std::size_t> state_map(s.states.size(), unreachable);
    for (std::size_t i = 0; i < s.states.size(); ++i) {
        if (dist[nw + i] > l) continue;
        state_map[i] = out.states.size();
        out.states.push_back(i);
        InfoState ext;
        s.states[i].for_each([&](std::size_t w) {
            if (world_map[w] != unreachable) ext.insert(world_map[w]);
        });
        r.states.push_back(ext);
        r.state_labels.push_back(i < s.state_labels.size() ? s.state_labels[i] : "s" + std::to_string(i));
    }
    r.edges.assign(s.agents.size(), std::vector<std::vector<std::size_t>>(r.worlds.size()));
    for (std::size_t a = 0; a < s.agents.size(); ++a)
        for (std::size_t k = 0; k < out.worlds.size(); ++k)
            for (std::size_t i : s.edges[a][out.worlds[k]])
                if (state_map[i] != unreachable) r.edges[a][k].push_back(state_map[i]);
    for (std::size_t p = 0; p < s.atoms.size(); ++p) {
        InfoState v;
        for (std::size_t k = 0; k < out.worlds.size(); ++k)
            if (s.valuation[p].contains(out.worlds[k])) v.insert(k);
        r.valuation.push_back(v);
    }
    out.centre = x.sort == Sort::world ? Element{Sort::world, world_map[x.index]} : Element{Sort::state, state_map[x.index]};
    return out;
}

Report check_neighbourhood(const Neighbourhood& n, std::size_t l)
{
    if (l == 0 || l % 2 != 0 || n.centre.sort != Sort::world)
        return Report::pass("neighbourhood (no relational check for this radius)");
    Report r = check_relational(n.structure);
    r.property = "neighbourhood-relational";
    return r;
}

std::string distance_mode_name(DistanceMode m) { return m == DistanceMode::plain ? "plain" : "skip-empty"; }

}   // namespace inqkit
