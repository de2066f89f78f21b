#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace inqkit {

enum class FormulaKind { atom, bottom, conj, implies, idisj, box, boxplus };

class Formula;

struct FormulaNode {
    FormulaKind kind;
    std::string name;   // atom name, or agent name for box and boxplus
    std::shared_ptr<const FormulaNode> left;
    std::shared_ptr<const FormulaNode> right;
    std::size_t hash;
};

// Immutable core-syntax formula.  Negation, classical disjunction, the
// question mark and T are abbreviations that never appear as nodes.
class Formula {
public:
    Formula() = default;
    explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}

    FormulaKind kind() const { return node_->kind; }
    const std::string& name() const { return node_->name; }
    Formula left() const { return Formula(node_->left); }
    Formula right() const { return Formula(node_->right); }
    Formula body() const { return Formula(node_->left); }
    const FormulaNode* node() const { return node_.get(); }
    const std::shared_ptr<const FormulaNode>& ptr() const { return node_; }
    std::size_t hash() const { return node_->hash; }
    bool valid() const { return node_ != nullptr; }

    friend bool operator==(const Formula& a, const Formula& b);

private:
    std::shared_ptr<const FormulaNode> node_;
};

Formula atom(const std::string& name);
Formula bottom();
Formula conj(const Formula& a, const Formula& b);
Formula implies(const Formula& a, const Formula& b);
Formula idisj(const Formula& a, const Formula& b);
Formula box(const std::string& agent, const Formula& f);
Formula boxplus(const std::string& agent, const Formula& f);

Formula neg(const Formula& f);
Formula top();
Formula cdisj(const Formula& a, const Formula& b);
Formula question(const Formula& f);

// Left-nested folds; empty conjunction is T, empty disjunctions are ⊥.
Formula conj_all(const std::vector<Formula>& fs);
Formula cdisj_all(const std::vector<Formula>& fs);
Formula idisj_all(const std::vector<Formula>& fs);

// Hash-consing builder: structurally equal formulas built through one store
// share a single node.
class FormulaStore {
public:
    Formula atom(const std::string& name);
    Formula bottom();
    Formula conj(const Formula& a, const Formula& b);
    Formula implies(const Formula& a, const Formula& b);
    Formula idisj(const Formula& a, const Formula& b);
    Formula box(const std::string& agent, const Formula& f);
    Formula boxplus(const std::string& agent, const Formula& f);

    Formula neg(const Formula& f) { return implies(f, bottom()); }
    Formula top() { return implies(bottom(), bottom()); }
    Formula cdisj(const Formula& a, const Formula& b) { return neg(conj(neg(a), neg(b))); }
    Formula conj_all(const std::vector<Formula>& fs);
    Formula cdisj_all(const std::vector<Formula>& fs);
    Formula idisj_all(const std::vector<Formula>& fs);

    std::size_t node_count() const { return table_.size(); }

private:
    Formula make(FormulaKind k, const std::string& name, const Formula& l, const Formula& r);
    struct Key {
        FormulaKind kind;
        std::string name;
        const FormulaNode* left;
        const FormulaNode* right;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const;
    };
    std::unordered_map<Key, Formula, KeyHash> table_;
};

std::size_t modal_depth(const Formula& f);
std::size_t tree_size(const Formula& f);   // saturates at SIZE_MAX
std::size_t dag_size(const Formula& f);
bool contains_kind(const Formula& f, FormulaKind k);
// Sufficient condition for truth-conditionality: no ⫾ reachable without passing
// through a modality or the antecedent of an implication.
bool is_syntactically_flat(const Formula& f);
std::set<std::string> atoms_of(const Formula& f);
std::set<std::string> agents_of(const Formula& f);

struct Signature {
    std::vector<std::string> agents;
    std::vector<std::string> atoms;   // empty means any atom is accepted
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos);
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

// Grammar: atoms, _|_, T, !f, ?f, [a]f, [+a]f, [] and [+] for a sole agent,
// & over \/ and | (left associative), -> loosest and right associative.
Formula parse_formula(const std::string& text, const Signature* sig = nullptr);

class FormulaTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t default_print_cap = 1u << 22;

// Re-sugars ¬, ∨, ? and T; parse_formula(to_string(f)) == f.
std::string to_string(const Formula& f, std::size_t char_cap = default_print_cap);

}   // namespace inqkit
