#include "inqkit/formula.hpp"

#include <algorithm>
#include <cctype>

namespace inqkit {

ParseError::ParseError(const std::string& msg, std::size_t pos)
    : std::runtime_error(msg + " at offset " + std::to_string(pos)), pos_(pos)
{
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

class Parser {
public:
    Parser(const std::string& text, const Signature* sig) : text_(text), sig_(sig) {}

    Formula parse()
    {
        Formula f = implication();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
        return f;
    }

private:
    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(const std::string& tok)
    {
        skip_ws();
        if (text_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    void expect(const std::string& tok)
    {
        if (!accept(tok)) throw ParseError("expected '" + tok + "'", pos_);
    }

    Formula implication()
    {
        Formula lhs = disjunction();
        if (accept("->")) return implies(lhs, implication());
        return lhs;
    }

    Formula disjunction()
    {
        Formula acc = conjunction();
        while (true) {
            if (accept("\\/"))
                acc = idisj(acc, conjunction());
            else if (peek_bar())
                acc = cdisj(acc, conjunction());
            else
                return acc;
        }
    }

    // A lone '|' is classical disjunction; "_|_" is handled as an atom-level token.
    bool peek_bar()
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '|') {
            ++pos_;
            return true;
        }
        return false;
    }

    Formula conjunction()
    {
        Formula acc = unary();
        while (accept("&")) acc = conj(acc, unary());
        return acc;
    }

    std::string identifier()
    {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ >= text_.size() || !ident_start(text_[pos_])) throw ParseError("expected identifier", pos_);
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
        return text_.substr(start, pos_ - start);
    }

    std::string agent_tag()
    {
        skip_ws();
        std::size_t at = pos_;
        if (pos_ < text_.size() && text_[pos_] == ']') {
            if (!sig_ || sig_->agents.size() != 1)
                throw ParseError("agent-free modality needs a signature with exactly one agent", at);
            return sig_->agents.front();
        }
        std::string a = identifier();
        if (sig_ && std::find(sig_->agents.begin(), sig_->agents.end(), a) == sig_->agents.end())
            throw ParseError("unknown agent tag '" + a + "'", at);
        return a;
    }

    Formula unary()
    {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of formula", pos_);
        if (accept("_|_")) return bottom();
        if (accept("!")) return neg(unary());
        if (accept("?")) return question(unary());
        if (accept("(")) {
            Formula f = implication();
            expect(")");
            return f;
        }
        if (accept("[")) {
            bool plus = accept("+");
            std::string a = agent_tag();
            expect("]");
            Formula body = unary();
            return plus ? boxplus(a, body) : box(a, body);
        }
        std::size_t at = pos_;
        std::string name = identifier();
        if (name == "T") return top();
        if (sig_ && !sig_->atoms.empty() && std::find(sig_->atoms.begin(), sig_->atoms.end(), name) == sig_->atoms.end())
            throw ParseError("unknown atom '" + name + "'", at);
        return atom(name);
    }

    const std::string& text_;
    const Signature* sig_;
    std::size_t pos_ = 0;
};

enum Level { lv_implies = 1, lv_disj = 2, lv_conj = 3, lv_prefix = 4 };

bool is_bottom(const Formula& f) { return f.kind() == FormulaKind::bottom; }
bool is_neg(const Formula& f) { return f.kind() == FormulaKind::implies && is_bottom(f.right()); }
bool is_top(const Formula& f) { return is_neg(f) && is_bottom(f.left()); }
bool is_cdisj(const Formula& f)
{
    return is_neg(f) && f.left().kind() == FormulaKind::conj && is_neg(f.left().left()) && is_neg(f.left().right());
}
bool is_question(const Formula& f)
{
    return f.kind() == FormulaKind::idisj && is_neg(f.right()) && f.right().left() == f.left();
}

class Printer {
public:
    explicit Printer(std::size_t cap) : cap_(cap) {}

    void print(const Formula& f, int need)
    {
        int lv = level(f);
        bool paren = lv < need;
        if (paren) emit("(");
        body(f);
        if (paren) emit(")");
    }

    std::string out;

private:
    static int level(const Formula& f)
    {
        switch (f.kind()) {
        case FormulaKind::atom:
        case FormulaKind::bottom:
        case FormulaKind::box:
        case FormulaKind::boxplus: return lv_prefix;
        case FormulaKind::conj: return lv_conj;
        case FormulaKind::idisj: return is_question(f) ? lv_prefix : lv_disj;
        case FormulaKind::implies:
            if (is_top(f)) return lv_prefix;
            if (is_cdisj(f)) return lv_disj;
            return is_neg(f) ? lv_prefix : lv_implies;
        }
        return lv_prefix;
    }

    void body(const Formula& f)
    {
        switch (f.kind()) {
        case FormulaKind::atom: emit(f.name()); return;
        case FormulaKind::bottom: emit("_|_"); return;
        case FormulaKind::box:
            emit("[" + f.name() + "]");
            print(f.body(), lv_prefix);
            return;
        case FormulaKind::boxplus:
            emit("[+" + f.name() + "]");
            print(f.body(), lv_prefix);
            return;
        case FormulaKind::conj:
            print(f.left(), lv_conj);
            emit(" & ");
            print(f.right(), lv_prefix);
            return;
        case FormulaKind::idisj:
            if (is_question(f)) {
                emit("?");
                print(f.left(), lv_prefix);
                return;
            }
            print(f.left(), lv_disj);
            emit(" \\/ ");
            print(f.right(), lv_conj);
            return;
        case FormulaKind::implies:
            if (is_top(f)) {
                emit("T");
                return;
            }
            if (is_cdisj(f)) {
                print(f.left().left().left(), lv_disj);
                emit(" | ");
                print(f.left().right().left(), lv_conj);
                return;
            }
            if (is_neg(f)) {
                emit("!");
                print(f.left(), lv_prefix);
                return;
            }
            print(f.left(), lv_disj);
            emit(" -> ");
            print(f.right(), lv_implies);
            return;
        }
    }

    void emit(const std::string& s)
    {
        if (out.size() + s.size() > cap_)
            throw FormulaTooLarge("formula text exceeds " + std::to_string(cap_) + " characters");
        out += s;
    }

    std::size_t cap_;
};

}   // namespace

Formula parse_formula(const std::string& text, const Signature* sig) { return Parser(text, sig).parse(); }

std::string to_string(const Formula& f, std::size_t char_cap)
{
    Printer p(char_cap);
    p.print(f, lv_implies);
    return p.out;
}

}   // namespace inqkit
