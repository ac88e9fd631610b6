#include "finsler/expr.hpp"

#include <cctype>
#include <cstdio>
#include <utility>

namespace finsler {

Expr Expr::number(double v) {
    Expr e;
    e.kind = Kind::Constant;
    e.constant = v;
    return e;
}

Expr Expr::variable(VarGroup g, int idx) {
    Expr e;
    e.kind = Kind::Variable;
    e.group = g;
    e.index = idx;
    return e;
}

Expr Expr::neg(Expr a) {
    Expr e;
    e.kind = Kind::Neg;
    e.kids.push_back(std::move(a));
    return e;
}

Expr Expr::binary(BinOp op, Expr a, Expr b) {
    Expr e;
    e.kind = Kind::Binary;
    e.bin = op;
    e.kids.push_back(std::move(a));
    e.kids.push_back(std::move(b));
    if (op == BinOp::Pow) e.foldedExponent = constantValue(e.kids[1]);
    return e;
}

Expr Expr::call(FuncId f, Expr a) {
    Expr e;
    e.kind = Kind::Call;
    e.func = f;
    e.kids.push_back(std::move(a));
    return e;
}

bool structurallyEqual(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.kids.size() != b.kids.size()) return false;
    switch (a.kind) {
        case Expr::Kind::Constant:
            if (a.constant != b.constant) return false;
            break;
        case Expr::Kind::Variable:
            if (a.group != b.group || a.index != b.index) return false;
            break;
        case Expr::Kind::Binary:
            if (a.bin != b.bin) return false;
            break;
        case Expr::Kind::Call:
            if (a.func != b.func) return false;
            break;
        case Expr::Kind::Neg:
            break;
    }
    for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (!structurallyEqual(a.kids[i], b.kids[i])) return false;
    return true;
}

int maxVarIndex(const Expr& e, VarGroup g) {
    int m = 0;
    if (e.kind == Expr::Kind::Variable && e.group == g) m = e.index;
    for (const Expr& k : e.kids) m = std::max(m, maxVarIndex(k, g));
    return m;
}

std::optional<double> constantValue(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Constant:
            return e.constant;
        case Expr::Kind::Variable:
            return std::nullopt;
        case Expr::Kind::Neg: {
            auto v = constantValue(e.kids[0]);
            if (v) return -*v;
            return std::nullopt;
        }
        case Expr::Kind::Binary: {
            auto a = constantValue(e.kids[0]);
            auto b = constantValue(e.kids[1]);
            if (!a || !b) return std::nullopt;
            switch (e.bin) {
                case BinOp::Add: return *a + *b;
                case BinOp::Sub: return *a - *b;
                case BinOp::Mul: return *a * *b;
                case BinOp::Div:
                    if (*b == 0.0) return std::nullopt;
                    return *a / *b;
                case BinOp::Pow: {
                    long long m;
                    if (detail::nearInteger(*b, m)) return detail::powIntScalar(*a, m);
                    if (*a <= 0.0) return std::nullopt;
                    return std::pow(*a, *b);
                }
            }
            return std::nullopt;
        }
        case Expr::Kind::Call: {
            auto a = constantValue(e.kids[0]);
            if (!a) return std::nullopt;
            switch (e.func) {
                case FuncId::Exp: return std::exp(*a);
                case FuncId::Log:
                    if (*a <= 0.0) return std::nullopt;
                    return std::log(*a);
                case FuncId::Sqrt:
                    if (*a < 0.0) return std::nullopt;
                    return std::sqrt(*a);
                case FuncId::Atan: return std::atan(*a);
                case FuncId::Sin: return std::sin(*a);
                case FuncId::Cos: return std::cos(*a);
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

namespace {

struct Token {
    enum class Type { Number, Ident, Op, LParen, RParen, End };
    Type type;
    double number = 0.0;
    std::string text;
    int column = 0;
};

class Lexer {
public:
    Lexer(const std::string& s, int line, int baseCol) : s_(s), line_(line), baseCol_(baseCol) {
        advance();
    }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg, const Token& at) const {
        throw ParseError(msg, line_, baseCol_ + at.column);
    }

private:
    void advance() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        tok_.column = static_cast<int>(pos_);
        if (pos_ >= s_.size()) {
            tok_.type = Token::Type::End;
            tok_.text = "<end of line>";
            return;
        }
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
                ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
                std::size_t mark = pos_;
                ++pos_;
                if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
                if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                        ++pos_;
                } else {
                    pos_ = mark;  // the 'e' belongs to the next token
                }
            }
            tok_.type = Token::Type::Number;
            tok_.text = s_.substr(start, pos_ - start);
            try {
                tok_.number = std::stod(tok_.text);
            } catch (const std::exception&) {
                throw ParseError("malformed number '" + tok_.text + "'", line_,
                                 baseCol_ + static_cast<int>(start));
            }
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                        s_[pos_] == '_'))
                ++pos_;
            tok_.type = Token::Type::Ident;
            tok_.text = s_.substr(start, pos_ - start);
            return;
        }
        if (c == '(') {
            tok_.type = Token::Type::LParen;
            tok_.text = "(";
            ++pos_;
            return;
        }
        if (c == ')') {
            tok_.type = Token::Type::RParen;
            tok_.text = ")";
            ++pos_;
            return;
        }
        if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
            tok_.type = Token::Type::Op;
            tok_.text = std::string(1, c);
            ++pos_;
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line_,
                         baseCol_ + static_cast<int>(pos_));
    }

    const std::string& s_;
    int line_;
    int baseCol_;
    std::size_t pos_ = 0;
    Token tok_;
};

std::optional<FuncId> funcByName(const std::string& name) {
    if (name == "exp") return FuncId::Exp;
    if (name == "log") return FuncId::Log;
    if (name == "sqrt") return FuncId::Sqrt;
    if (name == "atan") return FuncId::Atan;
    if (name == "sin") return FuncId::Sin;
    if (name == "cos") return FuncId::Cos;
    return std::nullopt;
}

// expr := term (('+'|'-') term)*
// term := factor (('*'|'/') factor)*
// factor := ('-'|'+') factor | power
// power := atom ('^' factor)?
class Parser {
public:
    explicit Parser(Lexer& lex) : lex_(lex) {}

    Expr parseExpr() {
        Expr e = parseTerm();
        while (isOp("+") || isOp("-")) {
            std::string op = lex_.take().text;
            Expr rhs = parseTerm();
            e = Expr::binary(op == "+" ? BinOp::Add : BinOp::Sub, std::move(e), std::move(rhs));
        }
        return e;
    }

private:
    bool isOp(const char* s) const {
        return lex_.peek().type == Token::Type::Op && lex_.peek().text == s;
    }

    Expr parseTerm() {
        Expr e = parseFactor();
        while (isOp("*") || isOp("/")) {
            std::string op = lex_.take().text;
            Expr rhs = parseFactor();
            e = Expr::binary(op == "*" ? BinOp::Mul : BinOp::Div, std::move(e), std::move(rhs));
        }
        return e;
    }

    Expr parseFactor() {
        if (isOp("-")) {
            lex_.take();
            return Expr::neg(parseFactor());
        }
        if (isOp("+")) {
            lex_.take();
            return parseFactor();
        }
        return parsePower();
    }

    Expr parsePower() {
        Expr base = parseAtom();
        if (isOp("^")) {
            lex_.take();
            Expr e = parseFactor();
            return Expr::binary(BinOp::Pow, std::move(base), std::move(e));
        }
        return base;
    }

    Expr parseAtom() {
        Token t = lex_.peek();
        switch (t.type) {
            case Token::Type::Number:
                lex_.take();
                return Expr::number(t.number);
            case Token::Type::LParen: {
                lex_.take();
                Expr e = parseExpr();
                if (lex_.peek().type != Token::Type::RParen)
                    lex_.fail("expected ')'", lex_.peek());
                lex_.take();
                return e;
            }
            case Token::Type::Ident: {
                lex_.take();
                if (auto f = funcByName(t.text)) {
                    if (lex_.peek().type != Token::Type::LParen)
                        lex_.fail("expected '(' after function '" + t.text + "'", lex_.peek());
                    lex_.take();
                    Expr arg = parseExpr();
                    if (lex_.peek().type != Token::Type::RParen)
                        lex_.fail("expected ')'", lex_.peek());
                    lex_.take();
                    return Expr::call(*f, std::move(arg));
                }
                if ((t.text[0] == 'x' || t.text[0] == 'y') && t.text.size() > 1) {
                    bool digits = true;
                    for (std::size_t i = 1; i < t.text.size(); ++i)
                        if (!std::isdigit(static_cast<unsigned char>(t.text[i]))) digits = false;
                    if (digits) {
                        int idx = std::stoi(t.text.substr(1));
                        return Expr::variable(t.text[0] == 'x' ? VarGroup::Base : VarGroup::Fiber,
                                              idx);
                    }
                }
                lex_.fail("unknown identifier '" + t.text + "'", t);
            }
            default:
                lex_.fail("unexpected token '" + t.text + "'", t);
        }
    }

    Lexer& lex_;
};

int precedence(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Binary:
            switch (e.bin) {
                case BinOp::Add:
                case BinOp::Sub: return 1;
                case BinOp::Mul:
                case BinOp::Div: return 2;
                case BinOp::Pow: return 4;
            }
            return 1;
        case Expr::Kind::Neg: return 3;
        default: return 5;
    }
}

void printRec(const Expr& e, std::string& out) {
    auto child = [&](const Expr& k, bool parens) {
        if (parens) out += '(';
        printRec(k, out);
        if (parens) out += ')';
    };
    switch (e.kind) {
        case Expr::Kind::Constant: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", e.constant);
            // negative literals only arise from programmatic trees; wrap them
            // so the output stays lexable
            if (e.constant < 0.0) out += '(';
            out += buf;
            if (e.constant < 0.0) out += ')';
            return;
        }
        case Expr::Kind::Variable:
            out += (e.group == VarGroup::Base ? 'x' : 'y');
            out += std::to_string(e.index);
            return;
        case Expr::Kind::Neg:
            out += '-';
            child(e.kids[0], precedence(e.kids[0]) < 3 || e.kids[0].kind == Expr::Kind::Neg);
            return;
        case Expr::Kind::Binary: {
            int p = precedence(e);
            const Expr& l = e.kids[0];
            const Expr& r = e.kids[1];
            if (e.bin == BinOp::Pow) {
                // '^' is right-associative; a parenthesized base keeps (a^b)^c
                // and -(x)^2 shapes faithful
                bool baseParens = !(l.kind == Expr::Kind::Constant && l.constant >= 0.0) &&
                                  l.kind != Expr::Kind::Variable && l.kind != Expr::Kind::Call;
                child(l, baseParens);
                out += '^';
                child(r, precedence(r) < 4 && r.kind != Expr::Kind::Neg);
                return;
            }
            child(l, precedence(l) < p);
            switch (e.bin) {
                case BinOp::Add: out += " + "; break;
                case BinOp::Sub: out += " - "; break;
                case BinOp::Mul: out += '*'; break;
                case BinOp::Div: out += '/'; break;
                default: break;
            }
            child(r, precedence(r) <= p);
            return;
        }
        case Expr::Kind::Call: {
            switch (e.func) {
                case FuncId::Exp: out += "exp"; break;
                case FuncId::Log: out += "log"; break;
                case FuncId::Sqrt: out += "sqrt"; break;
                case FuncId::Atan: out += "atan"; break;
                case FuncId::Sin: out += "sin"; break;
                case FuncId::Cos: out += "cos"; break;
            }
            out += '(';
            printRec(e.kids[0], out);
            out += ')';
            return;
        }
    }
}

}  // namespace

Expr parseExpression(const std::string& text, int line, int baseColumn) {
    Lexer lex(text, line, baseColumn);
    Parser p(lex);
    Expr e = p.parseExpr();
    if (lex.peek().type != Token::Type::End)
        lex.fail("unexpected trailing input '" + lex.peek().text + "'", lex.peek());
    return e;
}

std::string printExpression(const Expr& e) {
    std::string out;
    printRec(e, out);
    return out;
}

}  // namespace finsler
