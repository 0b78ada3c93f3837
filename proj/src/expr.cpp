#include "fracocycle/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace fracocycle::expr {

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr leaf(Op op, double value = 0.0)
{
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = value;
    return n;
}

NodePtr unary(Op op, NodePtr a)
{
    auto n = std::make_shared<Node>();
    n->op = op;
    n->args = {std::move(a)};
    return n;
}

NodePtr binary(Op op, NodePtr a, NodePtr b)
{
    auto n = std::make_shared<Node>();
    n->op = op;
    n->args = {std::move(a), std::move(b)};
    return n;
}

NodePtr power(NodePtr a, int exponent)
{
    auto n = std::make_shared<Node>();
    n->op = Op::Pow;
    n->exponent = exponent;
    n->args = {std::move(a)};
    return n;
}

NodePtr weier(double alpha, double lambda, int terms, NodePtr arg)
{
    auto n = std::make_shared<Node>();
    n->op = Op::Weier;
    n->w_alpha = alpha;
    n->w_lambda = lambda;
    n->w_terms = terms;
    for (int k = 0; k <= terms; ++k) {
        n->w_amplitude.push_back(std::pow(lambda, -alpha * k));
        n->w_frequency.push_back(std::pow(lambda, k));
    }
    n->args = {std::move(arg)};
    return n;
}

struct Function {
    std::string_view name;
    Op op;
};

constexpr Function functions[] = {
    {"sin", Op::Sin}, {"cos", Op::Cos}, {"exp", Op::Exp}, {"abs", Op::Abs},
    {"re", Op::Re},   {"im", Op::Im},   {"conj", Op::Conj},
};

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    NodePtr parse_all()
    {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            if (pos_ >= s_.size()) fail(std::string("expected '") + c + "' but input ended");
            fail(std::string("expected '") + c + "'");
        }
    }

    NodePtr expr()
    {
        NodePtr left = term();
        while (true) {
            if (accept('+'))
                left = binary(Op::Add, left, term());
            else if (accept('-'))
                left = binary(Op::Sub, left, term());
            else
                return left;
        }
    }

    NodePtr term()
    {
        NodePtr left = unary_expr();
        while (true) {
            if (accept('*'))
                left = binary(Op::Mul, left, unary_expr());
            else if (accept('/'))
                left = binary(Op::Div, left, unary_expr());
            else
                return left;
        }
    }

    NodePtr unary_expr()
    {
        if (accept('-')) return unary(Op::Neg, unary_expr());
        return power_expr();
    }

    NodePtr power_expr()
    {
        NodePtr base = primary();
        while (accept('^')) {
            const bool negative = accept('-');
            skip_ws();
            const std::size_t start = pos_;
            const double v = number_literal();
            if (v != std::floor(v) || std::abs(v) > 1024.0) {
                pos_ = start;
                fail("exponent must be an integer literal");
            }
            base = power(base, static_cast<int>(negative ? -v : v));
        }
        return base;
    }

    bool at_number() const
    {
        return pos_ < s_.size() &&
               (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.');
    }

    double number_literal()
    {
        skip_ws();
        if (!at_number()) {
            if (pos_ >= s_.size()) fail("expected a number but input ended");
            fail("expected a number");
        }
        double v = 0.0;
        const char* first = s_.data() + pos_;
        const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), v);
        if (ec != std::errc()) fail("malformed number");
        pos_ += static_cast<std::size_t>(ptr - first);
        return v;
    }

    /// Signed numeric literal for weier parameters.
    double signed_literal()
    {
        const bool negative = accept('-');
        const double v = number_literal();
        return negative ? -v : v;
    }

    std::string identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    NodePtr primary()
    {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (at_number()) return leaf(Op::Number, number_literal());
        if (accept('(')) {
            NodePtr e = expr();
            expect(')');
            return e;
        }
        if (!std::isalpha(static_cast<unsigned char>(s_[pos_])))
            fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        const std::size_t start = pos_;
        const std::string name = identifier();
        if (name == "x") return leaf(Op::X);
        if (name == "y") return leaf(Op::Y);
        if (name == "z") return leaf(Op::Z);
        if (name == "pi") return leaf(Op::Pi);
        if (name == "i") return leaf(Op::I);
        if (name == "weier") {
            expect('(');
            skip_ws();
            std::size_t at = pos_;
            const double alpha = signed_literal();
            if (!(alpha > 0.0 && alpha <= 1.0)) {
                pos_ = at;
                fail("weier exponent must lie in (0, 1]");
            }
            expect(',');
            skip_ws();
            at = pos_;
            const double lambda = signed_literal();
            if (!(lambda > 1.0)) {
                pos_ = at;
                fail("weier base must exceed 1");
            }
            expect(',');
            skip_ws();
            at = pos_;
            const double k = signed_literal();
            if (k < 0.0 || k != std::floor(k) || k > 200.0) {
                pos_ = at;
                fail("weier term count must be an integer in [0, 200]");
            }
            expect(',');
            NodePtr arg = expr();
            expect(')');
            return weier(alpha, lambda, static_cast<int>(k), arg);
        }
        for (const auto& f : functions) {
            if (f.name == name) {
                expect('(');
                NodePtr arg = expr();
                expect(')');
                return unary(f.op, arg);
            }
        }
        pos_ = start;
        fail("unknown identifier '" + name + "'");
    }
};

Complex safe_divide(Complex a, Complex b)
{
    if (std::abs(b) < 1e-300) throw EvalError("division by a value of magnitude below 1e-300");
    return a / b;
}

Complex integer_power(Complex base, int n)
{
    Complex result(1.0, 0.0);
    Complex b = base;
    unsigned m = static_cast<unsigned>(n < 0 ? -n : n);
    while (m > 0) {
        if (m & 1u) result = cochain::mul(result, b);
        b = cochain::mul(b, b);
        m >>= 1u;
    }
    return n < 0 ? safe_divide(Complex(1.0, 0.0), result) : result;
}

Complex eval_node(const Node& n, geom::Point2 p)
{
    switch (n.op) {
    case Op::Number: return {n.value, 0.0};
    case Op::X: return {p.x, 0.0};
    case Op::Y: return {p.y, 0.0};
    case Op::Z: return {p.x, p.y};
    case Op::Pi: return {std::numbers::pi, 0.0};
    case Op::I: return {0.0, 1.0};
    case Op::Add: return eval_node(*n.args[0], p) + eval_node(*n.args[1], p);
    case Op::Sub: return eval_node(*n.args[0], p) - eval_node(*n.args[1], p);
    case Op::Mul: return cochain::mul(eval_node(*n.args[0], p), eval_node(*n.args[1], p));
    case Op::Div: return safe_divide(eval_node(*n.args[0], p), eval_node(*n.args[1], p));
    case Op::Neg: return -eval_node(*n.args[0], p);
    case Op::Pow: return integer_power(eval_node(*n.args[0], p), n.exponent);
    case Op::Sin: return std::sin(eval_node(*n.args[0], p));
    case Op::Cos: return std::cos(eval_node(*n.args[0], p));
    case Op::Exp: return std::exp(eval_node(*n.args[0], p));
    case Op::Abs: return {std::abs(eval_node(*n.args[0], p)), 0.0};
    case Op::Re: return {eval_node(*n.args[0], p).real(), 0.0};
    case Op::Im: return {eval_node(*n.args[0], p).imag(), 0.0};
    case Op::Conj: return std::conj(eval_node(*n.args[0], p));
    case Op::Weier: {
        const Complex t = eval_node(*n.args[0], p);
        Complex sum(0.0, 0.0);
        for (std::size_t k = 0; k < n.w_amplitude.size(); ++k) {
            const Complex c = t.imag() == 0.0 ? Complex(std::cos(n.w_frequency[k] * t.real()), 0.0)
                                              : std::cos(n.w_frequency[k] * t);
            sum += n.w_amplitude[k] * c;
        }
        return sum;
    }
    }
    throw EvalError("corrupt expression node");
}

double min_weier_alpha(const Node& n, double current)
{
    if (n.op == Op::Weier) current = std::min(current, n.w_alpha);
    for (const auto& a : n.args) current = min_weier_alpha(*a, current);
    return current;
}

std::string format_number(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, ptr);
    // "1e-05" style is parseable as is; only a bare leading '.' never occurs here
    return s;
}

void print_node(const Node& n, std::string& out)
{
    auto un = [&](const char* name) {
        out += name;
        out += '(';
        print_node(*n.args[0], out);
        out += ')';
    };
    auto bin = [&](const char* sym) {
        out += '(';
        print_node(*n.args[0], out);
        out += sym;
        print_node(*n.args[1], out);
        out += ')';
    };
    switch (n.op) {
    case Op::Number: out += format_number(n.value); return;
    case Op::X: out += 'x'; return;
    case Op::Y: out += 'y'; return;
    case Op::Z: out += 'z'; return;
    case Op::Pi: out += "pi"; return;
    case Op::I: out += 'i'; return;
    case Op::Add: bin(" + "); return;
    case Op::Sub: bin(" - "); return;
    case Op::Mul: bin(" * "); return;
    case Op::Div: bin(" / "); return;
    case Op::Neg:
        out += "(-";
        print_node(*n.args[0], out);
        out += ')';
        return;
    case Op::Pow:
        out += '(';
        print_node(*n.args[0], out);
        out += ")^" + std::to_string(n.exponent);
        return;
    case Op::Sin: un("sin"); return;
    case Op::Cos: un("cos"); return;
    case Op::Exp: un("exp"); return;
    case Op::Abs: un("abs"); return;
    case Op::Re: un("re"); return;
    case Op::Im: un("im"); return;
    case Op::Conj: un("conj"); return;
    case Op::Weier:
        out += "weier(" + format_number(n.w_alpha) + ", " + format_number(n.w_lambda) + ", " +
               std::to_string(n.w_terms) + ", ";
        print_node(*n.args[0], out);
        out += ')';
        return;
    }
}

bool same(const Node& a, const Node& b)
{
    if (a.op != b.op || a.args.size() != b.args.size()) return false;
    switch (a.op) {
    case Op::Number:
        if (a.value != b.value) return false;
        break;
    case Op::Pow:
        if (a.exponent != b.exponent) return false;
        break;
    case Op::Weier:
        if (a.w_alpha != b.w_alpha || a.w_lambda != b.w_lambda || a.w_terms != b.w_terms) return false;
        break;
    default: break;
    }
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!same(*a.args[i], *b.args[i])) return false;
    return true;
}

}  // namespace

Expr::Expr(std::shared_ptr<const Node> root) : root_(std::move(root))
{
    if (!root_) throw std::invalid_argument("Expr: null tree");
}

Complex Expr::eval(geom::Point2 p) const { return eval_node(*root_, p); }

double Expr::declared_alpha() const { return min_weier_alpha(*root_, 1.0); }

std::string Expr::print() const
{
    std::string out;
    print_node(*root_, out);
    return out;
}

bool operator==(const Expr& a, const Expr& b) { return same(*a.root_, *b.root_); }

Expr parse(std::string_view text)
{
    Parser p(text);
    return Expr(p.parse_all());
}

cochain::ScalarField to_field(const Expr& e, std::optional<double> alpha_override)
{
    const double alpha = alpha_override.value_or(e.declared_alpha());
    return cochain::ScalarField([e](geom::Point2 p) { return e.eval(p); }, alpha, e.print());
}

}  // namespace fracocycle::expr
