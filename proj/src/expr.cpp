#include "fixpoint/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

namespace fixpoint::expr {

namespace {

constexpr int kMaxDepth = 256;  // nesting guard so fuzzed input cannot blow the stack

NodePtr make_const(double v) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Constant;
    n->value = v;
    return n;
}

NodePtr make_var(int slot) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Variable;
    n->slot = slot;
    return n;
}

NodePtr make_unary(NodeKind k, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    return n;
}

NodePtr make_binary(NodeKind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr make_call(Builtin fn, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Call;
    n->fn = fn;
    n->a = std::move(a);
    return n;
}

std::optional<Builtin> builtin_by_name(std::string_view s) {
    if (s == "sin") return Builtin::Sin;
    if (s == "cos") return Builtin::Cos;
    if (s == "exp") return Builtin::Exp;
    if (s == "log") return Builtin::Log;
    if (s == "sqrt") return Builtin::Sqrt;
    if (s == "abs") return Builtin::Abs;
    return std::nullopt;
}

const char* builtin_name(Builtin fn) {
    switch (fn) {
        case Builtin::Sin: return "sin";
        case Builtin::Cos: return "cos";
        case Builtin::Exp: return "exp";
        case Builtin::Log: return "log";
        case Builtin::Sqrt: return "sqrt";
        case Builtin::Abs: return "abs";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Tokenizer + recursive descent parser
// ---------------------------------------------------------------------------

enum class Tok : std::uint8_t { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    std::size_t offset;
    double number = 0.0;
    std::string_view text;
};

class Parser {
public:
    Parser(std::string_view src, const std::vector<std::string>& vars)
        : src_(src), vars_(vars) {
        advance();
    }

    NodePtr run() {
        NodePtr e = parse_expr(0);
        if (tok_.kind != Tok::End)
            throw ParseError("unexpected token; expected operator or end of input", tok_.offset);
        return e;
    }

private:
    std::string_view src_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
    Token tok_{};

    [[noreturn]] void fail(const std::string& msg, std::size_t off) const {
        throw ParseError(msg, off);
    }

    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        tok_.offset = pos_;
        if (pos_ >= src_.size()) {
            tok_.kind = Tok::End;
            return;
        }
        char c = src_[pos_];
        switch (c) {
            case '+': tok_.kind = Tok::Plus; ++pos_; return;
            case '-': tok_.kind = Tok::Minus; ++pos_; return;
            case '*': tok_.kind = Tok::Star; ++pos_; return;
            case '/': tok_.kind = Tok::Slash; ++pos_; return;
            case '^': tok_.kind = Tok::Caret; ++pos_; return;
            case '(': tok_.kind = Tok::LParen; ++pos_; return;
            case ')': tok_.kind = Tok::RParen; ++pos_; return;
            case ',': tok_.kind = Tok::Comma; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            tok_.kind = Tok::Ident;
            tok_.text = src_.substr(start, pos_ - start);
            return;
        }
        fail(std::string("unexpected character '") + c + "'", pos_);
    }

    void lex_number() {
        std::size_t start = pos_;
        bool saw_digit = false;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
            saw_digit = true;
        }
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                saw_digit = true;
            }
        }
        if (!saw_digit) fail("malformed number literal", start);
        // Exponent part is consumed only if complete; "1e" lexes as 1 then identifier e.
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = mark;
            }
        }
        std::string_view text = src_.substr(start, pos_ - start);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value))
            fail("malformed number literal", start);
        tok_.kind = Tok::Number;
        tok_.number = value;
    }

    void check_depth(int depth, std::size_t off) const {
        if (depth > kMaxDepth) fail("expression nested too deeply", off);
    }

    NodePtr parse_expr(int depth) {
        check_depth(depth, tok_.offset);
        NodePtr lhs = parse_term(depth + 1);
        while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
            NodeKind op = tok_.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub;
            advance();
            lhs = make_binary(op, std::move(lhs), parse_term(depth + 1));
        }
        return lhs;
    }

    NodePtr parse_term(int depth) {
        check_depth(depth, tok_.offset);
        NodePtr lhs = parse_unary(depth + 1);
        while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
            NodeKind op = tok_.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div;
            advance();
            lhs = make_binary(op, std::move(lhs), parse_unary(depth + 1));
        }
        return lhs;
    }

    // ^ binds tighter than unary minus: -x^2 parses as -(x^2).
    NodePtr parse_unary(int depth) {
        check_depth(depth, tok_.offset);
        if (tok_.kind == Tok::Minus) {
            advance();
            return make_unary(NodeKind::Neg, parse_unary(depth + 1));
        }
        return parse_power(depth + 1);
    }

    NodePtr parse_power(int depth) {
        check_depth(depth, tok_.offset);
        NodePtr base = parse_primary(depth + 1);
        if (tok_.kind == Tok::Caret) {
            advance();
            // Right-associative; the exponent may carry its own unary minus.
            return make_binary(NodeKind::Pow, std::move(base), parse_unary(depth + 1));
        }
        return base;
    }

    NodePtr parse_primary(int depth) {
        check_depth(depth, tok_.offset);
        switch (tok_.kind) {
            case Tok::Number: {
                double v = tok_.number;
                advance();
                return make_const(v);
            }
            case Tok::LParen: {
                advance();
                NodePtr e = parse_expr(depth + 1);
                expect(Tok::RParen, "expected ')'");
                return e;
            }
            case Tok::Ident: {
                std::string name(tok_.text);
                std::size_t off = tok_.offset;
                advance();
                if (tok_.kind == Tok::LParen) return parse_call(name, off, depth + 1);
                auto it = std::find(vars_.begin(), vars_.end(), name);
                if (it == vars_.end())
                    throw UnknownIdentifierError("unknown identifier '" + name + "'", off, name);
                return make_var(static_cast<int>(it - vars_.begin()));
            }
            default:
                fail("expected number, variable, function call, or '('", tok_.offset);
        }
    }

    NodePtr parse_call(const std::string& name, std::size_t off, int depth) {
        advance();  // consume '('
        if (name == "pow") {
            NodePtr a = parse_expr(depth + 1);
            expect(Tok::Comma, "pow expects two arguments separated by ','");
            NodePtr b = parse_expr(depth + 1);
            expect(Tok::RParen, "expected ')'");
            return make_binary(NodeKind::Pow, std::move(a), std::move(b));
        }
        auto fn = builtin_by_name(name);
        if (!fn) throw UnknownIdentifierError("unknown function '" + name + "'", off, name);
        NodePtr a = parse_expr(depth + 1);
        expect(Tok::RParen, "expected ')'");
        return make_call(*fn, std::move(a));
    }

    void expect(Tok k, const char* msg) {
        if (tok_.kind != k) fail(msg, tok_.offset);
        advance();
    }
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

[[noreturn]] void domain_error(const std::string& what) {
    throw EvalDomainError("domain error: " + what);
}

double checked(double v, const char* ctx) {
    if (!std::isfinite(v)) domain_error(std::string(ctx) + " produced a nonfinite value");
    return v;
}

// Best rational approximation p/q to w with q <= qmax (continued fractions).
bool rational_approx(double w, long qmax, long& p_out, long& q_out) {
    double x = w;
    long p0 = 1, q0 = 0;  // p_{-1}/q_{-1}
    long p1 = static_cast<long>(std::floor(x)), q1 = 1;
    double frac = x - std::floor(x);
    for (int i = 0; i < 40; ++i) {
        if (frac < 1e-15) break;
        x = 1.0 / frac;
        double a_f = std::floor(x);
        if (a_f > 1e15) break;
        long a = static_cast<long>(a_f);
        long p2 = a * p1 + p0;
        long q2 = a * q1 + q0;
        if (q2 > qmax) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        frac = x - a_f;
    }
    if (q1 < 1) return false;
    p_out = p1;
    q_out = q1;
    return true;
}

// Real power semantics: negative bases are allowed for integer exponents and
// for rationals p/q with small odd q (real root, e.g. y^(2/3) on y < 0).
double eval_pow(double u, double w) {
    if (u > 0.0) return checked(std::pow(u, w), "pow");
    if (u == 0.0) {
        if (w > 0.0) return 0.0;
        if (w == 0.0) return 1.0;
        domain_error("zero raised to a negative power");
    }
    // u < 0
    if (std::nearbyint(w) == w && std::fabs(w) < 9.0e15)
        return checked(std::pow(u, w), "pow");
    long p = 0, q = 0;
    if (rational_approx(w, 64, p, q) && (q % 2 != 0) &&
        std::fabs(w - static_cast<double>(p) / static_cast<double>(q)) <= 1e-12 * std::max(1.0, std::fabs(w))) {
        double mag = std::pow(-u, w);
        double r = (p % 2 == 0) ? mag : -mag;
        return checked(r, "pow");
    }
    domain_error("negative base raised to a non-integer power");
}

double eval_node(const Node& n, std::span<const double> values) {
    switch (n.kind) {
        case NodeKind::Constant:
            return n.value;
        case NodeKind::Variable:
            return values[static_cast<std::size_t>(n.slot)];
        case NodeKind::Neg:
            return -eval_node(*n.a, values);
        case NodeKind::Add:
            return checked(eval_node(*n.a, values) + eval_node(*n.b, values), "addition");
        case NodeKind::Sub:
            return checked(eval_node(*n.a, values) - eval_node(*n.b, values), "subtraction");
        case NodeKind::Mul:
            return checked(eval_node(*n.a, values) * eval_node(*n.b, values), "multiplication");
        case NodeKind::Div: {
            double num = eval_node(*n.a, values);
            double den = eval_node(*n.b, values);
            if (den == 0.0) domain_error("division by zero");
            return checked(num / den, "division");
        }
        case NodeKind::Pow:
            return eval_pow(eval_node(*n.a, values), eval_node(*n.b, values));
        case NodeKind::Call: {
            double x = eval_node(*n.a, values);
            switch (n.fn) {
                case Builtin::Sin: return std::sin(x);
                case Builtin::Cos: return std::cos(x);
                case Builtin::Exp: return checked(std::exp(x), "exp");
                case Builtin::Log:
                    if (x <= 0.0) domain_error("log of a nonpositive number");
                    return checked(std::log(x), "log");
                case Builtin::Sqrt:
                    if (x < 0.0) domain_error("sqrt of a negative number");
                    return std::sqrt(x);
                case Builtin::Abs: return std::fabs(x);
            }
            domain_error("unknown builtin");
        }
    }
    domain_error("malformed expression node");
}

// ---------------------------------------------------------------------------
// Local folding (identity elements and finite constant subtrees only)
// ---------------------------------------------------------------------------

bool is_const(const NodePtr& n, double v) {
    return n->kind == NodeKind::Constant && n->value == v;
}

NodePtr fold(NodePtr n) {
    if (!n->a) return n;
    const bool ca = n->a->kind == NodeKind::Constant;
    const bool cb = n->b && n->b->kind == NodeKind::Constant;
    if (ca && (!n->b || cb)) {
        // Fold only when evaluation succeeds and stays finite.
        try {
            double v = eval_node(*n, {});
            return make_const(v);
        } catch (const EvalDomainError&) {
            return n;
        }
    }
    switch (n->kind) {
        case NodeKind::Add:
            if (is_const(n->a, 0.0)) return n->b;
            if (is_const(n->b, 0.0)) return n->a;
            break;
        case NodeKind::Sub:
            if (is_const(n->b, 0.0)) return n->a;
            if (is_const(n->a, 0.0)) return make_unary(NodeKind::Neg, n->b);
            break;
        case NodeKind::Mul:
            if (is_const(n->a, 0.0) || is_const(n->b, 0.0)) return make_const(0.0);
            if (is_const(n->a, 1.0)) return n->b;
            if (is_const(n->b, 1.0)) return n->a;
            break;
        case NodeKind::Div:
            if (is_const(n->a, 0.0) && !is_const(n->b, 0.0)) return make_const(0.0);
            if (is_const(n->b, 1.0)) return n->a;
            break;
        case NodeKind::Pow:
            if (is_const(n->b, 1.0)) return n->a;
            if (is_const(n->b, 0.0)) return make_const(1.0);
            break;
        case NodeKind::Neg:
            if (n->a->kind == NodeKind::Neg) return n->a->a;
            break;
        default:
            break;
    }
    return n;
}

NodePtr add(NodePtr a, NodePtr b) { return fold(make_binary(NodeKind::Add, std::move(a), std::move(b))); }
NodePtr sub(NodePtr a, NodePtr b) { return fold(make_binary(NodeKind::Sub, std::move(a), std::move(b))); }
NodePtr mul(NodePtr a, NodePtr b) { return fold(make_binary(NodeKind::Mul, std::move(a), std::move(b))); }
NodePtr divide(NodePtr a, NodePtr b) { return fold(make_binary(NodeKind::Div, std::move(a), std::move(b))); }
NodePtr pown(NodePtr a, NodePtr b) { return fold(make_binary(NodeKind::Pow, std::move(a), std::move(b))); }
NodePtr neg(NodePtr a) { return fold(make_unary(NodeKind::Neg, std::move(a))); }

bool subtree_has_variable(const Node& n) {
    if (n.kind == NodeKind::Variable) return true;
    if (n.a && subtree_has_variable(*n.a)) return true;
    if (n.b && subtree_has_variable(*n.b)) return true;
    return false;
}

bool subtree_depends_on(const Node& n, int slot) {
    if (n.kind == NodeKind::Variable) return n.slot == slot;
    if (n.a && subtree_depends_on(*n.a, slot)) return true;
    if (n.b && subtree_depends_on(*n.b, slot)) return true;
    return false;
}

NodePtr derive(const NodePtr& n, int slot) {
    // Subtrees that never read the variable have derivative zero; this also
    // keeps abs() legal anywhere the variable does not reach.
    if (!subtree_depends_on(*n, slot)) return make_const(0.0);
    switch (n->kind) {
        case NodeKind::Constant:
            return make_const(0.0);
        case NodeKind::Variable:
            return make_const(n->slot == slot ? 1.0 : 0.0);
        case NodeKind::Neg:
            return neg(derive(n->a, slot));
        case NodeKind::Add:
            return add(derive(n->a, slot), derive(n->b, slot));
        case NodeKind::Sub:
            return sub(derive(n->a, slot), derive(n->b, slot));
        case NodeKind::Mul:
            return add(mul(derive(n->a, slot), n->b), mul(n->a, derive(n->b, slot)));
        case NodeKind::Div:
            // (u/v)' = (u'v - uv') / v^2
            return divide(sub(mul(derive(n->a, slot), n->b), mul(n->a, derive(n->b, slot))),
                          pown(n->b, make_const(2.0)));
        case NodeKind::Pow: {
            if (!subtree_has_variable(*n->b)) {
                // Constant exponent: power rule keeps negative bases legal.
                NodePtr vm1 = sub(n->b, make_const(1.0));
                return mul(mul(n->b, pown(n->a, std::move(vm1))), derive(n->a, slot));
            }
            // General case u^v * (v' log u + v u' / u); defined where u > 0.
            NodePtr lhs = mul(derive(n->b, slot), make_call(Builtin::Log, n->a));
            NodePtr rhs = divide(mul(n->b, derive(n->a, slot)), n->a);
            return mul(n, add(std::move(lhs), std::move(rhs)));
        }
        case NodeKind::Call: {
            NodePtr inner = derive(n->a, slot);
            switch (n->fn) {
                case Builtin::Sin:
                    return mul(make_call(Builtin::Cos, n->a), std::move(inner));
                case Builtin::Cos:
                    return neg(mul(make_call(Builtin::Sin, n->a), std::move(inner)));
                case Builtin::Exp:
                    return mul(n, std::move(inner));
                case Builtin::Log:
                    return divide(std::move(inner), n->a);
                case Builtin::Sqrt:
                    return divide(std::move(inner), mul(make_const(2.0), n));
                case Builtin::Abs:
                    throw DerivativeError(
                        "derivative of abs is undefined at the kink; refusing to pick a sign");
            }
            break;
        }
    }
    throw DerivativeError("malformed expression node");
}

void pretty_node(const Node& n, const std::vector<std::string>& vars, std::string& out) {
    switch (n.kind) {
        case NodeKind::Constant: {
            char buf[40];
            if (std::signbit(n.value)) {
                std::snprintf(buf, sizeof buf, "(-%.17g)", -n.value);
            } else {
                std::snprintf(buf, sizeof buf, "%.17g", n.value);
            }
            out += buf;
            return;
        }
        case NodeKind::Variable:
            out += vars[static_cast<std::size_t>(n.slot)];
            return;
        case NodeKind::Neg:
            out += "(-";
            pretty_node(*n.a, vars, out);
            out += ")";
            return;
        case NodeKind::Add:
        case NodeKind::Sub:
        case NodeKind::Mul:
        case NodeKind::Div:
        case NodeKind::Pow: {
            const char* op = n.kind == NodeKind::Add   ? " + "
                             : n.kind == NodeKind::Sub ? " - "
                             : n.kind == NodeKind::Mul ? " * "
                             : n.kind == NodeKind::Div ? " / "
                                                       : " ^ ";
            out += "(";
            pretty_node(*n.a, vars, out);
            out += op;
            pretty_node(*n.b, vars, out);
            out += ")";
            return;
        }
        case NodeKind::Call:
            out += builtin_name(n.fn);
            out += "(";
            pretty_node(*n.a, vars, out);
            out += ")";
            return;
    }
}

NodePtr rewrite(const NodePtr& n, const std::vector<NodePtr>& var_replacements) {
    switch (n->kind) {
        case NodeKind::Constant:
            return n;
        case NodeKind::Variable:
            return var_replacements[static_cast<std::size_t>(n->slot)];
        case NodeKind::Neg:
            return make_unary(NodeKind::Neg, rewrite(n->a, var_replacements));
        case NodeKind::Call: {
            auto c = make_call(n->fn, rewrite(n->a, var_replacements));
            return c;
        }
        default:
            return make_binary(n->kind, rewrite(n->a, var_replacements),
                               rewrite(n->b, var_replacements));
    }
}

void validate_variables(const std::vector<std::string>& vars) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].empty()) throw std::invalid_argument("empty variable name");
        if (builtin_by_name(vars[i]) || vars[i] == "pow")
            throw std::invalid_argument("variable name '" + vars[i] + "' shadows a builtin function");
        for (std::size_t j = i + 1; j < vars.size(); ++j)
            if (vars[i] == vars[j])
                throw std::invalid_argument("duplicate variable name '" + vars[i] + "'");
    }
}

int slot_of(const std::vector<std::string>& vars, std::string_view name) {
    auto it = std::find(vars.begin(), vars.end(), name);
    if (it == vars.end())
        throw std::invalid_argument("variable '" + std::string(name) + "' is not declared");
    return static_cast<int>(it - vars.begin());
}

}  // namespace

ExprAst ExprAst::parse(std::string_view source, std::vector<std::string> variables) {
    validate_variables(variables);
    Parser p(source, variables);
    NodePtr root = p.run();  // must finish before `variables` is moved out
    return ExprAst(std::move(root), std::move(variables));
}

ExprAst ExprAst::constant(double c, std::vector<std::string> variables) {
    validate_variables(variables);
    if (!std::isfinite(c)) throw std::invalid_argument("constant must be finite");
    return ExprAst(make_const(c), std::move(variables));
}

ExprAst ExprAst::variable(std::string_view name, std::vector<std::string> variables) {
    validate_variables(variables);
    int slot = slot_of(variables, name);
    return ExprAst(make_var(slot), std::move(variables));
}

double ExprAst::eval(std::span<const double> values) const {
    if (!root_) throw std::logic_error("evaluating an empty expression");
    if (values.size() != vars_.size())
        throw std::invalid_argument("eval: expected " + std::to_string(vars_.size()) +
                                    " values, got " + std::to_string(values.size()));
    return eval_node(*root_, values);
}

double ExprAst::eval(const std::map<std::string, double>& by_name) const {
    std::vector<double> values(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = by_name.find(vars_[i]);
        if (it == by_name.end())
            throw std::invalid_argument("eval: no value bound for variable '" + vars_[i] + "'");
        values[i] = it->second;
    }
    return eval(values);
}

ExprAst ExprAst::differentiate(std::string_view var) const {
    if (!root_) throw std::logic_error("differentiating an empty expression");
    int slot = slot_of(vars_, var);
    return ExprAst(derive(root_, slot), vars_);
}

std::string ExprAst::pretty() const {
    if (!root_) return "";
    std::string out;
    pretty_node(*root_, vars_, out);
    return out;
}

bool ExprAst::depends_on(std::string_view var) const {
    if (!root_) return false;
    return subtree_depends_on(*root_, slot_of(vars_, var));
}

ExprAst ExprAst::substitute(std::string_view var, const ExprAst& replacement) const {
    if (!root_) throw std::logic_error("substituting into an empty expression");
    if (replacement.vars_ != vars_)
        throw std::invalid_argument("substitute: replacement must share the variable list");
    int slot = slot_of(vars_, var);
    std::vector<NodePtr> repl(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i)
        repl[i] = static_cast<int>(i) == slot ? replacement.root_ : make_var(static_cast<int>(i));
    return ExprAst(rewrite(root_, repl), vars_);
}

ExprAst ExprAst::rebind(std::vector<std::string> new_variables) const {
    if (!root_) throw std::logic_error("rebinding an empty expression");
    validate_variables(new_variables);
    std::vector<NodePtr> repl(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = std::find(new_variables.begin(), new_variables.end(), vars_[i]);
        if (it != new_variables.end()) {
            repl[i] = make_var(static_cast<int>(it - new_variables.begin()));
        } else if (subtree_depends_on(*root_, static_cast<int>(i))) {
            throw std::invalid_argument("rebind: expression uses variable '" + vars_[i] +
                                        "' absent from the new list");
        } else {
            repl[i] = make_var(0);  // unused; never reached by rewrite
        }
    }
    return ExprAst(rewrite(root_, repl), std::move(new_variables));
}

ExprAst operator+(const ExprAst& a, const ExprAst& b) {
    if (a.vars_ != b.vars_) throw std::invalid_argument("operands declare different variables");
    return ExprAst(add(a.root_, b.root_), a.vars_);
}

ExprAst operator-(const ExprAst& a, const ExprAst& b) {
    if (a.vars_ != b.vars_) throw std::invalid_argument("operands declare different variables");
    return ExprAst(sub(a.root_, b.root_), a.vars_);
}

ExprAst operator*(const ExprAst& a, const ExprAst& b) {
    if (a.vars_ != b.vars_) throw std::invalid_argument("operands declare different variables");
    return ExprAst(mul(a.root_, b.root_), a.vars_);
}

ExprAst operator-(const ExprAst& a) { return ExprAst(neg(a.root_), a.vars_); }

}  // namespace fixpoint::expr
