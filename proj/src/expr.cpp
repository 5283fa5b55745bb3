#include "scsip/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "scsip/errors.hpp"

namespace scsip {

enum class Op { number, var_x, var_y, neg, add, sub, mul, div, pow, sin, cos, exp };

struct Expr::Node {
    Op op = Op::number;
    double value = 0.0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0)
{
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->value = value;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

double eval_node(const Expr::Node& n, Point p)
{
    switch (n.op) {
    case Op::number: return n.value;
    case Op::var_x: return p.x;
    case Op::var_y: return p.y;
    case Op::neg: return -eval_node(*n.lhs, p);
    case Op::add: return eval_node(*n.lhs, p) + eval_node(*n.rhs, p);
    case Op::sub: return eval_node(*n.lhs, p) - eval_node(*n.rhs, p);
    case Op::mul: return eval_node(*n.lhs, p) * eval_node(*n.rhs, p);
    case Op::div: return eval_node(*n.lhs, p) / eval_node(*n.rhs, p);
    case Op::pow: return std::pow(eval_node(*n.lhs, p), eval_node(*n.rhs, p));
    case Op::sin: return std::sin(eval_node(*n.lhs, p));
    case Op::cos: return std::cos(eval_node(*n.lhs, p));
    case Op::exp: return std::exp(eval_node(*n.lhs, p));
    }
    return 0.0;
}

std::string format_number(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string print_node(const Expr::Node& n)
{
    auto bin = [&](const char* sym) { return "(" + print_node(*n.lhs) + sym + print_node(*n.rhs) + ")"; };
    switch (n.op) {
    case Op::number: return format_number(n.value);
    case Op::var_x: return "x";
    case Op::var_y: return "y";
    case Op::neg: return "(-" + print_node(*n.lhs) + ")";
    case Op::add: return bin("+");
    case Op::sub: return bin("-");
    case Op::mul: return bin("*");
    case Op::div: return bin("/");
    case Op::pow: return bin("^");
    case Op::sin: return "sin(" + print_node(*n.lhs) + ")";
    case Op::cos: return "cos(" + print_node(*n.lhs) + ")";
    case Op::exp: return "exp(" + print_node(*n.lhs) + ")";
    }
    return {};
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse()
    {
        auto root = sum();
        skip_space();
        if (pos_ != src_.size())
            throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
        return root;
    }

private:
    void skip_space()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c))
            throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    NodePtr sum()
    {
        auto lhs = product();
        for (;;) {
            if (accept('+'))
                lhs = make(Op::add, lhs, product());
            else if (accept('-'))
                lhs = make(Op::sub, lhs, product());
            else
                return lhs;
        }
    }

    NodePtr product()
    {
        auto lhs = unary();
        for (;;) {
            if (accept('*'))
                lhs = make(Op::mul, lhs, unary());
            else if (accept('/'))
                lhs = make(Op::div, lhs, unary());
            else
                return lhs;
        }
    }

    NodePtr unary()
    {
        if (accept('-'))
            return make(Op::neg, unary());
        if (accept('+'))
            return unary();
        return power();
    }

    NodePtr power()
    {
        auto base = primary();
        if (accept('^'))
            return make(Op::pow, base, unary());
        return base;
    }

    NodePtr primary()
    {
        skip_space();
        if (pos_ >= src_.size())
            throw ParseError("unexpected end of expression", pos_);
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            auto inner = sum();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return identifier();
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    NodePtr number()
    {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-'))
                ++look;
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                pos_ = look;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            }
        }
        double v = 0.0;
        auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
        if (res.ec != std::errc() || res.ptr != src_.data() + pos_)
            throw ParseError("malformed number", start);
        return make(Op::number, nullptr, nullptr, v);
    }

    NodePtr identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);
        if (name == "x")
            return make(Op::var_x);
        if (name == "y")
            return make(Op::var_y);
        if (name == "pi")
            return make(Op::number, nullptr, nullptr, std::numbers::pi);
        Op func;
        if (name == "sin")
            func = Op::sin;
        else if (name == "cos")
            func = Op::cos;
        else if (name == "exp")
            func = Op::exp;
        else
            throw ParseError("unknown identifier '" + std::string(name) + "'", start);
        expect('(');
        auto arg = sum();
        expect(')');
        return make(func, arg);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

} // namespace

double Expr::eval(Point p) const { return root_ ? eval_node(*root_, p) : 0.0; }

std::string Expr::to_string() const { return root_ ? print_node(*root_) : std::string{}; }

Expr parse_expr(std::string_view src) { return Expr(Parser(src).parse()); }

} // namespace scsip
