#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fixpoint::expr {

enum class NodeKind : std::uint8_t {
    Constant,
    Variable,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,  // covers both the ^ operator and the pow(u, v) call
    Call,
};

enum class Builtin : std::uint8_t { Sin, Cos, Exp, Log, Sqrt, Abs };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable expression node. Trees are shared freely; nothing mutates a node
/// after construction, so concurrent eval from multiple threads is safe.
struct Node {
    NodeKind kind;
    double value = 0.0;             // Constant
    int slot = -1;                  // Variable: index into the declared list
    Builtin fn = Builtin::Sin;      // Call
    NodePtr a;                      // unary operand / left / call argument
    NodePtr b;                      // right operand
};

struct ParseError : std::runtime_error {
    std::size_t offset;  // byte offset into the source string
    ParseError(const std::string& msg, std::size_t off)
        : std::runtime_error(msg), offset(off) {}
};

struct UnknownIdentifierError : ParseError {
    std::string name;
    UnknownIdentifierError(const std::string& msg, std::size_t off, std::string ident)
        : ParseError(msg, off), name(std::move(ident)) {}
};

/// eval hit a point where the expression has no finite real value
/// (division by zero, log of a nonpositive number, 0^negative, ...).
struct EvalDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// differentiate refused a node (abs: the derivative at the kink is
/// undefined and we flag rather than pick a sign).
struct DerivativeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed expression over a declared variable list. Evaluation binds values
/// by slot (positional, matching the declared list) or by name.
class ExprAst {
public:
    ExprAst() = default;

    /// Parse infix source over exactly these variables. Unknown identifiers,
    /// unknown functions, and syntax errors carry a byte offset. There is no
    /// implicit multiplication; ^ is right-associative and binds tighter
    /// than unary minus.
    static ExprAst parse(std::string_view source, std::vector<std::string> variables);

    /// Build the constant c (resp. the named variable) over a variable list.
    static ExprAst constant(double c, std::vector<std::string> variables);
    static ExprAst variable(std::string_view name, std::vector<std::string> variables);

    bool empty() const { return root_ == nullptr; }

    /// Evaluate with values[i] bound to variables()[i]. Returns exactly one
    /// finite double or throws EvalDomainError; never a silent NaN.
    double eval(std::span<const double> values) const;
    double eval(const std::map<std::string, double>& by_name) const;

    /// Symbolic partial derivative with respect to var. Output is lightly
    /// folded (constant subtrees, identity elements) but not simplified in
    /// any CAS sense.
    ExprAst differentiate(std::string_view var) const;

    /// Fully parenthesized round-trippable form: re-parsing yields a tree
    /// whose evaluation is bitwise identical (literals printed with 17
    /// significant digits).
    std::string pretty() const;

    const std::vector<std::string>& variables() const { return vars_; }
    bool depends_on(std::string_view var) const;

    /// Replace every occurrence of var by an expression over the same
    /// variable list.
    ExprAst substitute(std::string_view var, const ExprAst& replacement) const;

    /// Re-home the tree onto a new variable list; every variable used must
    /// appear in it.
    ExprAst rebind(std::vector<std::string> new_variables) const;

    const NodePtr& root() const { return root_; }

    // Combinators for programmatic construction (recentering, mirroring).
    // Both operands must share one variable list.
    friend ExprAst operator+(const ExprAst& a, const ExprAst& b);
    friend ExprAst operator-(const ExprAst& a, const ExprAst& b);
    friend ExprAst operator*(const ExprAst& a, const ExprAst& b);
    friend ExprAst operator-(const ExprAst& a);

    ExprAst(NodePtr root, std::vector<std::string> vars)
        : root_(std::move(root)), vars_(std::move(vars)) {}

private:
    NodePtr root_;
    std::vector<std::string> vars_;
};

}  // namespace fixpoint::expr
