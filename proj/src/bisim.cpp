#include "inqkit/bisim.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace inqkit {

namespace {

std::vector<InfoState> transpose(const WorldRelation& y, std::size_t right_count)
{
    std::vector<InfoState> cols(right_count);
    for (std::size_t l = 0; l < y.rows.size(); ++l) y.rows[l].for_each([&](std::size_t r) { cols[r].insert(l); });
    return cols;
}

// Every member of s has a partner (via rel) inside m.
bool covered(const std::vector<InfoState>& rel, InfoState s, InfoState m)
{
    bool ok = true;
    s.for_each([&](std::size_t u) { ok = ok && rel[u].intersects(m); });
    return ok;
}

bool some_maximal_covers(const std::vector<InfoState>& rel, InfoState s, const InqState& target)
{
    return std::any_of(target.maximal().begin(), target.maximal().end(),
                       [&](InfoState m) { return covered(rel, s, m); });
}

std::optional<std::string> atom_diff(const InqModel& l, std::size_t lw, const InqModel& r, std::size_t rw)
{
    std::set<std::string> names(l.atoms().begin(), l.atoms().end());
    names.insert(r.atoms().begin(), r.atoms().end());
    for (const auto& p : names) {
        auto li = l.find_atom(p);
        auto ri = r.find_atom(p);
        bool lv = li && l.holds(*li, lw);
        bool rv = ri && r.holds(*ri, rw);
        if (lv != rv) return p;
    }
    return std::nullopt;
}

}   // namespace

bool lifted(const WorldRelation& y, InfoState s, InfoState t)
{
    InfoState reach;
    bool forth = true;
    s.for_each([&](std::size_t u) {
        forth = forth && y.rows[u].intersects(t);
        reach |= y.rows[u];
    });
    return forth && t.subset_of(reach);
}

BisimLayers::BisimLayers(const InqModel& left, const InqModel& right, Depth depth) : left_(&left), right_(&right)
{
    if (std::set<std::string>(left.agents().begin(), left.agents().end()) !=
        std::set<std::string>(right.agents().begin(), right.agents().end()))
        throw ModelError("bisimulation needs models over the same agents");
    for (const auto& a : left.agents()) agent_map_.push_back(right.agent_index(a));

    WorldRelation y0;
    y0.rows.assign(left.world_count(), InfoState{});
    for (std::size_t l = 0; l < left.world_count(); ++l)
        for (std::size_t r = 0; r < right.world_count(); ++r)
            if (!atom_diff(left, l, right, r)) y0.rows[l].insert(r);
    layers_.push_back(std::move(y0));

    while (depth.is_full() || layers_.size() <= *depth.rounds) {
        WorldRelation next = step(layers_.back());
        if (next == layers_.back()) {
            stable_ = true;
            break;
        }
        layers_.push_back(std::move(next));
    }
}

WorldRelation BisimLayers::step(const WorldRelation& y) const
{
    const auto cols = transpose(y, right_->world_count());
    const WorldRelation& y0 = layers_.front();
    WorldRelation next;
    next.rows.assign(left_->world_count(), InfoState{});
    for (std::size_t l = 0; l < left_->world_count(); ++l) {
        y0.rows[l].for_each([&](std::size_t r) {
            if (!y.related(l, r)) return;
            for (std::size_t a = 0; a < left_->agent_count(); ++a) {
                const InqState& ls = left_->sigma(a, l);
                const InqState& rs = right_->sigma(agent_map_[a], r);
                for (InfoState m : ls.maximal())
                    if (!some_maximal_covers(y.rows, m, rs)) return;
                for (InfoState m : rs.maximal())
                    if (!some_maximal_covers(cols, m, ls)) return;
            }
            next.rows[l].insert(r);
        });
    }
    return next;
}

const WorldRelation& BisimLayers::layer(std::size_t n) const
{
    if (n < layers_.size()) return layers_[n];
    if (stable_) return layers_.back();
    throw ModelError("bisimulation layer " + std::to_string(n) + " was not computed");
}

const WorldRelation& BisimLayers::at(Depth d) const
{
    if (d.is_full()) {
        if (!stable_) throw ModelError("fixpoint was not computed");
        return layers_.back();
    }
    return layer(*d.rounds);
}

std::optional<std::string> BisimLayers::atom_difference(std::size_t l, std::size_t r) const
{
    return atom_diff(*left_, l, *right_, r);
}

bool equiv(const PointedModel& a, const PointedModel& b, Depth d)
{
    BisimLayers layers(*a.model, *b.model, d);
    const WorldRelation& y = layers.at(d);
    const auto* aw = std::get_if<WorldPoint>(&a.point);
    const auto* bw = std::get_if<WorldPoint>(&b.point);
    if (aw && bw) return y.related(aw->world, bw->world);
    if (!aw && !bw) return lifted(y, std::get<InfoState>(a.point), std::get<InfoState>(b.point));
    throw ModelError("cannot compare a world with a state");
}

std::vector<std::size_t> world_classes(const BisimLayers& self_layers, Depth d)
{
    const WorldRelation& y = self_layers.at(d);
    const std::size_t n = y.rows.size();
    std::vector<std::size_t> cls(n);
    std::size_t next = 0;
    for (std::size_t w = 0; w < n; ++w) {
        cls[w] = next;
        for (std::size_t v = 0; v < w; ++v) {
            if (y.related(v, w)) {
                cls[w] = cls[v];
                break;
            }
        }
        if (cls[w] == next) ++next;
    }
    return cls;
}

std::vector<std::size_t> world_classes(const InqModel& m, Depth d) { return world_classes(BisimLayers(m, m, d), d); }

namespace {

class PlayBuilder {
public:
    explicit PlayBuilder(const BisimLayers& layers) : ly_(layers) {}

    WorldPosition world(std::size_t l, std::size_t r, std::size_t k)
    {
        tick();
        WorldPosition pos;
        pos.left = l;
        pos.right = r;
        pos.rounds = k;
        if (auto diff = ly_.atom_difference(l, r)) {
            pos.mismatch = diff;
            return pos;
        }
        const WorldRelation& y = ly_.layer(k - 1);
        const auto cols = transpose(y, ly_.right().world_count());
        for (std::size_t a = 0; a < ly_.left().agent_count(); ++a) {
            const InqState& ls = ly_.left().sigma(a, l);
            const InqState& rs = ly_.right().sigma(ly_.right_agent(a), r);
            for (InfoState s : ls.members()) {
                if (some_maximal_covers(y.rows, s, rs)) continue;
                pos.agent = a;
                pos.side = Side::left;
                pos.challenge = s;
                for (InfoState t : rs.members()) pos.replies.push_back(state(s, t, k - 1));
                return pos;
            }
            for (InfoState t : rs.members()) {
                if (some_maximal_covers(cols, t, ls)) continue;
                pos.agent = a;
                pos.side = Side::right;
                pos.challenge = t;
                for (InfoState s : ls.members()) pos.replies.push_back(state(s, t, k - 1));
                return pos;
            }
        }
        throw ModelError("internal: no winning state move for player I");
    }

    StatePosition state(InfoState sl, InfoState sr, std::size_t k)
    {
        tick();
        StatePosition pos;
        pos.left = sl;
        pos.right = sr;
        pos.rounds = k;
        const WorldRelation& y = ly_.layer(k);
        const auto cols = transpose(y, ly_.right().world_count());
        std::optional<std::size_t> pick;
        sl.for_each([&](std::size_t u) {
            if (!pick && !y.rows[u].intersects(sr)) pick = u;
        });
        if (pick) {
            pos.side = Side::left;
            pos.challenge = *pick;
            sr.for_each([&](std::size_t x) { pos.replies.push_back(world(*pick, x, k)); });
            return pos;
        }
        sr.for_each([&](std::size_t v) {
            if (!pick && !cols[v].intersects(sl)) pick = v;
        });
        if (!pick) throw ModelError("internal: no winning world move for player I");
        pos.side = Side::right;
        pos.challenge = *pick;
        sl.for_each([&](std::size_t x) { pos.replies.push_back(world(x, *pick, k)); });
        return pos;
    }

private:
    void tick()
    {
        if (++nodes_ > transcript_node_cap) throw ModelError("distinguishing play exceeds node cap");
    }

    const BisimLayers& ly_;
    std::size_t nodes_ = 0;
};

}   // namespace

std::optional<Transcript> distinguishing_play(const PointedModel& a, const PointedModel& b, Depth d)
{
    BisimLayers layers(*a.model, *b.model, d);
    const auto* aw = std::get_if<WorldPoint>(&a.point);
    const auto* bw = std::get_if<WorldPoint>(&b.point);
    if (!aw != !bw) throw ModelError("cannot compare a world with a state");
    auto distinct_at = [&](std::size_t n) {
        const WorldRelation& y = layers.layer(n);
        return aw ? !y.related(aw->world, bw->world)
                  : !lifted(y, std::get<InfoState>(a.point), std::get<InfoState>(b.point));
    };
    std::size_t rounds = 0;
    if (d.is_full()) {
        const std::size_t last = layers.computed() - 1;
        if (!distinct_at(last)) return std::nullopt;
        while (!distinct_at(rounds)) ++rounds;
    } else {
        rounds = *d.rounds;
        if (!distinct_at(rounds)) return std::nullopt;
    }
    PlayBuilder builder(layers);
    if (aw) return Transcript{builder.world(aw->world, bw->world, rounds)};
    return Transcript{builder.state(std::get<InfoState>(a.point), std::get<InfoState>(b.point), rounds)};
}

namespace {

std::size_t max_rounds(const WorldPosition& p);
std::size_t max_rounds(const StatePosition& p)
{
    std::size_t r = p.rounds;
    for (const auto& c : p.replies) r = std::max(r, max_rounds(c));
    return r;
}
std::size_t max_rounds(const WorldPosition& p)
{
    std::size_t r = p.rounds;
    for (const auto& c : p.replies) r = std::max(r, max_rounds(c));
    return r;
}

class Verifier {
public:
    explicit Verifier(const BisimLayers& layers) : ly_(layers) {}

    std::string world(const WorldPosition& p)
    {
        const auto& L = ly_.left();
        const auto& R = ly_.right();
        const std::string here = "(" + L.worlds()[p.left] + " | " + R.worlds()[p.right] + ")";
        if (ly_.layer(p.rounds).related(p.left, p.right)) return here + " is related at depth " + std::to_string(p.rounds);
        if (p.mismatch) {
            if (ly_.atom_difference(p.left, p.right) != p.mismatch) return here + " does not differ on " + *p.mismatch;
            return {};
        }
        if (p.rounds == 0) return here + " claims a state move with no rounds left";
        const InqState& ls = L.sigma(p.agent, p.left);
        const InqState& rs = R.sigma(ly_.right_agent(p.agent), p.right);
        const InqState& own = p.side == Side::left ? ls : rs;
        const InqState& other = p.side == Side::left ? rs : ls;
        if (!own.contains(p.challenge)) return here + " challenge is not in the inquisitive state";
        const auto answers = other.members();
        if (answers.size() != p.replies.size()) return here + " does not list every answer of II";
        for (std::size_t i = 0; i < answers.size(); ++i) {
            const StatePosition& c = p.replies[i];
            InfoState mine = p.side == Side::left ? c.left : c.right;
            InfoState theirs = p.side == Side::left ? c.right : c.left;
            if (mine != p.challenge || theirs != answers[i] || c.rounds + 1 != p.rounds)
                return here + " reply does not match the challenge";
            if (auto e = state(c); !e.empty()) return e;
        }
        return {};
    }

    std::string state(const StatePosition& p)
    {
        const auto& L = ly_.left();
        const auto& R = ly_.right();
        const std::string here = "(" + format_state(p.left, L.worlds()) + " | " + format_state(p.right, R.worlds()) + ")";
        if (lifted(ly_.layer(p.rounds), p.left, p.right)) return here + " is related at depth " + std::to_string(p.rounds);
        InfoState own = p.side == Side::left ? p.left : p.right;
        InfoState other = p.side == Side::left ? p.right : p.left;
        if (!own.contains(p.challenge)) return here + " world challenge is outside the state";
        const auto answers = other.members();
        if (answers.size() != p.replies.size()) return here + " does not list every answer of II";
        for (std::size_t i = 0; i < answers.size(); ++i) {
            const WorldPosition& c = p.replies[i];
            std::size_t mine = p.side == Side::left ? c.left : c.right;
            std::size_t theirs = p.side == Side::left ? c.right : c.left;
            if (mine != p.challenge || theirs != answers[i] || c.rounds != p.rounds)
                return here + " reply does not match the challenge";
            if (auto e = world(c); !e.empty()) return e;
        }
        return {};
    }

private:
    const BisimLayers& ly_;
};

class Renderer {
public:
    Renderer(const InqModel& l, const InqModel& r) : l_(l), r_(r) {}

    void world(const WorldPosition& p, std::size_t indent)
    {
        const std::string at = "(" + l_.worlds()[p.left] + " | " + r_.worlds()[p.right] + ")";
        if (p.mismatch) {
            line(indent, at + " differ on atom " + *p.mismatch);
            return;
        }
        const auto& labels = p.side == Side::left ? l_.worlds() : r_.worlds();
        line(indent, at + " with " + std::to_string(p.rounds) + " round(s) left: I plays " +
                         format_state(p.challenge, labels) + " in Sigma_" + l_.agents()[p.agent] + " on the " +
                         side_name(p.side));
        for (const auto& c : p.replies) state(c, indent + 1);
    }

    void state(const StatePosition& p, std::size_t indent)
    {
        const auto& labels = p.side == Side::left ? l_.worlds() : r_.worlds();
        std::string head = "(" + format_state(p.left, l_.worlds()) + " | " + format_state(p.right, r_.worlds()) +
                           "): I plays world " + labels[p.challenge] + " on the " + side_name(p.side);
        if (p.replies.empty()) {
            line(indent, head + "; II cannot answer");
            return;
        }
        line(indent, head);
        for (const auto& c : p.replies) world(c, indent + 1);
    }

    std::ostringstream out;

private:
    static const char* side_name(Side s) { return s == Side::left ? "left" : "right"; }
    void line(std::size_t indent, const std::string& text) { out << std::string(2 * indent, ' ') << text << '\n'; }

    const InqModel& l_;
    const InqModel& r_;
};

}   // namespace

Report verify_transcript(const Transcript& t, const PointedModel& a, const PointedModel& b)
{
    const std::string prop = "transcript";
    std::size_t depth = std::visit([](const auto& p) { return max_rounds(p); }, t.root);
    BisimLayers layers(*a.model, *b.model, Depth::of(depth));
    Verifier v(layers);
    std::string err;
    if (const auto* w = std::get_if<WorldPosition>(&t.root)) {
        const auto* aw = std::get_if<WorldPoint>(&a.point);
        const auto* bw = std::get_if<WorldPoint>(&b.point);
        if (!aw || !bw || aw->world != w->left || bw->world != w->right) return Report::fail(prop, "root is not the given pair");
        err = v.world(*w);
    } else {
        const auto& s = std::get<StatePosition>(t.root);
        const auto* as = std::get_if<InfoState>(&a.point);
        const auto* bs = std::get_if<InfoState>(&b.point);
        if (!as || !bs || *as != s.left || *bs != s.right) return Report::fail(prop, "root is not the given pair");
        err = v.state(s);
    }
    return err.empty() ? Report::pass(prop) : Report::fail(prop, err);
}

std::string render_transcript(const Transcript& t, const InqModel& left, const InqModel& right)
{
    Renderer r(left, right);
    if (const auto* w = std::get_if<WorldPosition>(&t.root))
        r.world(*w, 0);
    else
        r.state(std::get<StatePosition>(t.root), 0);
    return r.out.str();
}

Report check_world_bisimulation(const InqModel& left, const InqModel& right, const WorldRelation& y)
{
    const std::string prop = "bisimulation";
    BisimLayers base(left, right, Depth::of(0));
    const auto cols = transpose(y, right.world_count());
    for (std::size_t l = 0; l < left.world_count(); ++l) {
        std::string err;
        y.rows[l].for_each([&](std::size_t r) {
            if (!err.empty()) return;
            const std::string pair = "(" + left.worlds()[l] + ", " + right.worlds()[r] + ")";
            if (auto d = base.atom_difference(l, r)) {
                err = pair + " differ on atom " + *d;
                return;
            }
            for (std::size_t a = 0; a < left.agent_count() && err.empty(); ++a) {
                const InqState& ls = left.sigma(a, l);
                const InqState& rs = right.sigma(base.right_agent(a), r);
                for (InfoState m : ls.maximal())
                    if (err.empty() && !some_maximal_covers(y.rows, m, rs))
                        err = pair + " forth fails for " + format_state(m, left.worlds());
                for (InfoState m : rs.maximal())
                    if (err.empty() && !some_maximal_covers(cols, m, ls))
                        err = pair + " back fails for " + format_state(m, right.worlds());
            }
        });
        if (!err.empty()) return Report::fail(prop, err);
    }
    return Report::pass(prop);
}

}   // namespace inqkit
