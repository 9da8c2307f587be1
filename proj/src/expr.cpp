#include "tsde/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <utility>
#include <vector>

namespace tsde {

namespace {

constexpr std::string_view kVarNames[kVarCount] = {"x", "y", "z", "q", "u", "u1", "u2", "Hu"};

}  // namespace

std::optional<Var> var_from_name(std::string_view name) {
    for (int i = 0; i < kVarCount; ++i)
        if (name == kVarNames[i]) return static_cast<Var>(i);
    return std::nullopt;
}

std::string_view var_name(Var v) { return kVarNames[static_cast<int>(v)]; }

ParseError::ParseError(std::size_t offset, const std::string& what)
    : std::runtime_error("at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}

struct Expr::Node {
    enum class Op {
        Num, Variable, Neg,
        Add, Sub, Mul, Div, Pow,
        Sin, Cos, ExpFn, Abs, Sqrt,
        Min, Max
    };

    Op op;
    double num = 0.0;
    Var var = Var::X;
    std::shared_ptr<const Node> a, b;

    static std::shared_ptr<const Node> number(double v) {
        auto n = std::make_shared<Node>();
        n->op = Op::Num;
        n->num = v;
        return n;
    }
    static std::shared_ptr<const Node> variable(Var v) {
        auto n = std::make_shared<Node>();
        n->op = Op::Variable;
        n->var = v;
        return n;
    }
    static std::shared_ptr<const Node> unary(Op op, std::shared_ptr<const Node> a) {
        auto n = std::make_shared<Node>();
        n->op = op;
        n->a = std::move(a);
        return n;
    }
    static std::shared_ptr<const Node> binary(Op op, std::shared_ptr<const Node> a,
                                              std::shared_ptr<const Node> b) {
        auto n = std::make_shared<Node>();
        n->op = op;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }
};

namespace {

using Node = Expr::Node;
using Op = Node::Op;
using NodePtr = std::shared_ptr<const Node>;

struct FunctionInfo {
    std::string_view name;
    Op op;
    int arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"sin", Op::Sin, 1},  {"cos", Op::Cos, 1}, {"exp", Op::ExpFn, 1},
    {"abs", Op::Abs, 1},  {"sqrt", Op::Sqrt, 1},
    {"min", Op::Min, 2},  {"max", Op::Max, 2},
};

const FunctionInfo* find_function(std::string_view name) {
    for (const auto& f : kFunctions)
        if (f.name == name) return &f;
    return nullptr;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr run() {
        NodePtr e = expression();
        skip_space();
        if (pos_ != text_.size()) fail(pos_, "unexpected trailing input");
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(std::size_t at, const std::string& msg) { throw ParseError(at, msg); }

    void skip_space() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r' ||
                text_[pos_] == '\n'))
            ++pos_;
    }

    bool peek_char(char c) {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool consume_char(char c) {
        if (peek_char(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect_char(char c, const char* what) {
        if (!consume_char(c)) fail(pos_, std::string("expected ") + what);
    }

    NodePtr expression() {
        NodePtr lhs = term();
        for (;;) {
            if (consume_char('+'))
                lhs = Node::binary(Op::Add, lhs, term());
            else if (consume_char('-'))
                lhs = Node::binary(Op::Sub, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            if (consume_char('*'))
                lhs = Node::binary(Op::Mul, lhs, factor());
            else if (consume_char('/'))
                lhs = Node::binary(Op::Div, lhs, factor());
            else
                return lhs;
        }
    }

    NodePtr factor() {
        if (consume_char('-')) return Node::unary(Op::Neg, factor());
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (consume_char('^')) return Node::binary(Op::Pow, base, factor());
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ >= text_.size()) fail(pos_, "unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expression();
            expect_char(')', "')'");
            return inner;
        }
        if ((c >= '0' && c <= '9') || c == '.') return number();
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') return identifier();
        fail(pos_, std::string("unexpected character '") + c + "'");
    }

    NodePtr number() {
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        double value = 0.0;
        auto res = std::from_chars(begin, end, value, std::chars_format::general);
        if (res.ec == std::errc::result_out_of_range)
            fail(pos_, "numeric literal out of range");
        if (res.ec != std::errc() || res.ptr == begin) fail(pos_, "malformed number");
        pos_ += static_cast<std::size_t>(res.ptr - begin);
        return Node::number(value);
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            const bool ident = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                               (c >= '0' && c <= '9') || c == '_';
            if (!ident) break;
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);
        if (const FunctionInfo* fn = find_function(name)) {
            if (!consume_char('(')) fail(pos_, "expected '(' after function name");
            std::vector<NodePtr> args;
            args.push_back(expression());
            while (consume_char(',')) args.push_back(expression());
            expect_char(')', "')'");
            if (static_cast<int>(args.size()) != fn->arity)
                fail(start, std::string(name) + " expects " + std::to_string(fn->arity) +
                                " argument(s), got " + std::to_string(args.size()));
            if (fn->arity == 1) return Node::unary(fn->op, args[0]);
            return Node::binary(fn->op, args[0], args[1]);
        }
        if (auto v = var_from_name(name)) {
            if (peek_char('(')) fail(pos_, "'" + std::string(name) + "' is not a function");
            return Node::variable(*v);
        }
        fail(start, "unknown identifier '" + std::string(name) + "'");
    }
};

double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw EvalError(std::string(what) + " produced a non-finite value");
    return v;
}

double eval_node(const Node& n, const Env& env) {
    switch (n.op) {
        case Op::Num:
            return n.num;
        case Op::Variable:
            if (!env.has(n.var))
                throw EvalError("unbound variable '" + std::string(var_name(n.var)) + "'");
            return env.get(n.var);
        case Op::Neg:
            return -eval_node(*n.a, env);
        case Op::Add:
            return checked(eval_node(*n.a, env) + eval_node(*n.b, env), "addition");
        case Op::Sub:
            return checked(eval_node(*n.a, env) - eval_node(*n.b, env), "subtraction");
        case Op::Mul:
            return checked(eval_node(*n.a, env) * eval_node(*n.b, env), "multiplication");
        case Op::Div: {
            const double num = eval_node(*n.a, env);
            const double den = eval_node(*n.b, env);
            if (den == 0.0) throw EvalError("division by zero");
            return checked(num / den, "division");
        }
        case Op::Pow:
            return checked(std::pow(eval_node(*n.a, env), eval_node(*n.b, env)), "power");
        case Op::Sin:
            return checked(std::sin(eval_node(*n.a, env)), "sin");
        case Op::Cos:
            return checked(std::cos(eval_node(*n.a, env)), "cos");
        case Op::ExpFn:
            return checked(std::exp(eval_node(*n.a, env)), "exp");
        case Op::Abs:
            return std::abs(eval_node(*n.a, env));
        case Op::Sqrt: {
            const double v = eval_node(*n.a, env);
            if (v < 0.0) throw EvalError("sqrt of a negative value");
            return std::sqrt(v);
        }
        case Op::Min:
            return std::min(eval_node(*n.a, env), eval_node(*n.b, env));
        case Op::Max:
            return std::max(eval_node(*n.a, env), eval_node(*n.b, env));
    }
    throw EvalError("corrupt expression node");
}

void collect_vars(const Node& n, std::uint8_t& mask) {
    if (n.op == Op::Variable) mask |= std::uint8_t{1} << static_cast<int>(n.var);
    if (n.a) collect_vars(*n.a, mask);
    if (n.b) collect_vars(*n.b, mask);
}

// Printing precedence. Additive 1, multiplicative 2, unary minus 3,
// power 4, atoms 5.
int precedence(Op op) {
    switch (op) {
        case Op::Add:
        case Op::Sub:
            return 1;
        case Op::Mul:
        case Op::Div:
            return 2;
        case Op::Neg:
            return 3;
        case Op::Pow:
            return 4;
        default:
            return 5;
    }
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& child, int parent_prec, bool needs_paren_on_tie, std::string& out) {
    const int p = precedence(child.op);
    const bool paren = p < parent_prec || (p == parent_prec && needs_paren_on_tie);
    if (paren) out += '(';
    print_node(child, out);
    if (paren) out += ')';
}

void print_node(const Node& n, std::string& out) {
    switch (n.op) {
        case Op::Num: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n.num);
            out += buf;
            return;
        }
        case Op::Variable:
            out += var_name(n.var);
            return;
        case Op::Neg:
            out += '-';
            print_child(*n.a, precedence(Op::Neg), false, out);
            return;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: {
            const int p = precedence(n.op);
            print_child(*n.a, p, false, out);
            out += n.op == Op::Add ? " + " : n.op == Op::Sub ? " - "
                   : n.op == Op::Mul ? "*" : "/";
            print_child(*n.b, p, true, out);
            return;
        }
        case Op::Pow:
            print_child(*n.a, precedence(Op::Pow), true, out);
            out += '^';
            print_child(*n.b, precedence(Op::Pow), false, out);
            return;
        case Op::Sin: out += "sin("; break;
        case Op::Cos: out += "cos("; break;
        case Op::ExpFn: out += "exp("; break;
        case Op::Abs: out += "abs("; break;
        case Op::Sqrt: out += "sqrt("; break;
        case Op::Min: out += "min("; break;
        case Op::Max: out += "max("; break;
    }
    print_node(*n.a, out);
    if (n.b) {
        out += ", ";
        print_node(*n.b, out);
    }
    out += ')';
}

bool same_node(const Node& a, const Node& b) {
    if (a.op != b.op) return false;
    switch (a.op) {
        case Op::Num: {
            // Bit-level match so that -0.0 and 0.0 stay distinguishable.
            double x = a.num, y = b.num;
            return std::memcmp(&x, &y, sizeof x) == 0;
        }
        case Op::Variable:
            return a.var == b.var;
        default:
            break;
    }
    if ((a.a == nullptr) != (b.a == nullptr) || (a.b == nullptr) != (b.b == nullptr)) return false;
    if (a.a && !same_node(*a.a, *b.a)) return false;
    if (a.b && !same_node(*a.b, *b.b)) return false;
    return true;
}

}  // namespace

Expr Expr::parse(std::string_view text) {
    Parser parser(text);
    Expr e;
    e.root_ = parser.run();
    e.text_ = std::string(text);
    return e;
}

double Expr::eval(const Env& env) const {
    if (!root_) throw EvalError("empty expression");
    return eval_node(*root_, env);
}

std::uint8_t Expr::variables() const {
    std::uint8_t mask = 0;
    if (root_) collect_vars(*root_, mask);
    return mask;
}

std::string Expr::to_string() const {
    std::string out;
    if (root_) print_node(*root_, out);
    return out;
}

bool Expr::same_structure(const Expr& other) const {
    if (!root_ || !other.root_) return root_ == other.root_;
    return same_node(*root_, *other.root_);
}

}  // namespace tsde
