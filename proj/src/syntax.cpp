#include "binet/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace binet {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string &message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line), column_(column) {}

std::string canonical_symbol(std::string_view spelling) {
    if (spelling == "->" || spelling == "\xE2\x86\x92") // →
        return "Abs";
    if (spelling == "@")
        return "App";
    if (spelling == "\xCE\xB5") // ε
        return "eps";
    if (spelling == "\xE2\x8A\xA5") // ⊥
        return "bot";
    return std::string(spelling);
}

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
    Ident,
    QIdent,   // ?name
    Reserved, // %name
    Caret,
    LParen,
    RParen,
    Bar,
    Comma,
    Minus,
    Arrow,
    Implies,
    ImpliesInactive,
    Colon,
    LBracket,
    RBracket,
    Equals,
    Semicolon,
    Newline,
    At,
    End,
};

const char *describe(Tok t) {
    switch (t) {
    case Tok::Ident:
        return "identifier";
    case Tok::QIdent:
        return "symbol metavariable";
    case Tok::Reserved:
        return "reserved label";
    case Tok::Caret:
        return "'^'";
    case Tok::LParen:
        return "'('";
    case Tok::RParen:
        return "')'";
    case Tok::Bar:
        return "'|'";
    case Tok::Comma:
        return "','";
    case Tok::Minus:
        return "'-'";
    case Tok::Arrow:
        return "'->'";
    case Tok::Implies:
        return "'=>'";
    case Tok::ImpliesInactive:
        return "'=>inactive'";
    case Tok::Colon:
        return "':'";
    case Tok::LBracket:
        return "'['";
    case Tok::RBracket:
        return "']'";
    case Tok::Equals:
        return "'='";
    case Tok::Semicolon:
        return "';'";
    case Tok::Newline:
        return "end of line";
    case Tok::At:
        return "'@'";
    case Tok::End:
        return "end of input";
    }
    return "?";
}

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

bool ident_char(unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '\'' || c >= 0x80;
}

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    int depth = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        std::size_t l = line, cc = col;
        auto push = [&](Tok t, std::string text, std::size_t n) {
            out.push_back({t, std::move(text), l, cc});
            advance(n);
        };
        if (c == '#') {
            while (i < src.size() && src[i] != '\n')
                advance(1);
            continue;
        }
        if (c == '\n') {
            if (depth == 0 && (out.empty() || out.back().kind != Tok::Newline))
                out.push_back({Tok::Newline, "", l, cc});
            advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (src.substr(i, 2) == "->") {
            push(Tok::Arrow, "->", 2);
            continue;
        }
        if (src.substr(i, 2) == "=>") {
            if (src.substr(i + 2, 8) == "inactive" &&
                (i + 10 >= src.size() || !ident_char(static_cast<unsigned char>(src[i + 10]))))
                push(Tok::ImpliesInactive, "=>inactive", 10);
            else
                push(Tok::Implies, "=>", 2);
            continue;
        }
        if (c == '?' || c == '%') {
            std::size_t j = i + 1;
            while (j < src.size() && ident_char(static_cast<unsigned char>(src[j])))
                ++j;
            if (j == i + 1)
                throw ParseError(l, cc, std::string("expected a name after '") + c + "'");
            std::string text(src.substr(c == '?' ? i + 1 : i, c == '?' ? j - i - 1 : j - i));
            push(c == '?' ? Tok::QIdent : Tok::Reserved, std::move(text), j - i);
            continue;
        }
        if (ident_char(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && ident_char(static_cast<unsigned char>(src[j])))
                ++j;
            push(Tok::Ident, std::string(src.substr(i, j - i)), j - i);
            continue;
        }
        switch (c) {
        case '^':
            push(Tok::Caret, "^", 1);
            break;
        case '(':
            ++depth;
            push(Tok::LParen, "(", 1);
            break;
        case ')':
            depth = std::max(0, depth - 1);
            push(Tok::RParen, ")", 1);
            break;
        case '[':
            ++depth;
            push(Tok::LBracket, "[", 1);
            break;
        case ']':
            depth = std::max(0, depth - 1);
            push(Tok::RBracket, "]", 1);
            break;
        case '|':
            push(Tok::Bar, "|", 1);
            break;
        case ',':
            push(Tok::Comma, ",", 1);
            break;
        case '-':
            push(Tok::Minus, "-", 1);
            break;
        case ':':
            push(Tok::Colon, ":", 1);
            break;
        case '=':
            push(Tok::Equals, "=", 1);
            break;
        case ';':
            push(Tok::Semicolon, ";", 1);
            break;
        case '@':
            push(Tok::At, "@", 1);
            break;
        default:
            throw ParseError(l, cc, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

class Cursor {
  public:
    explicit Cursor(std::string_view src) : toks_(lex(src)) {}

    const Token &peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    bool at(Tok t, std::size_t ahead = 0) const { return peek(ahead).kind == t; }
    bool at_ident(std::string_view text, std::size_t ahead = 0) const {
        return at(Tok::Ident, ahead) && peek(ahead).text == text;
    }
    Token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    bool accept(Tok t) {
        if (!at(t))
            return false;
        ++pos_;
        return true;
    }

    Token expect(Tok t, std::string_view what = {}) {
        if (!at(t))
            fail(std::string("expected ") + (what.empty() ? describe(t) : std::string(what)));
        return take();
    }

    void expect_ident(std::string_view text) {
        if (!at_ident(text))
            fail("expected '" + std::string(text) + "'");
        take();
    }

    void skip_newlines() {
        while (at(Tok::Newline))
            take();
    }

    [[noreturn]] void fail(const std::string &msg) const {
        const auto &t = peek();
        std::string got = t.kind == Tok::Ident ? "'" + t.text + "'" : describe(t.kind);
        throw ParseError(t.line, t.column, msg + ", got " + got);
    }

  private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

bool symbol_token(const Cursor &c, std::size_t ahead = 0) {
    return c.at(Tok::Ident, ahead) || c.at(Tok::Arrow, ahead) || c.at(Tok::At, ahead);
}

std::string take_symbol(Cursor &c) {
    if (!symbol_token(c))
        c.fail("expected an agent name");
    return canonical_symbol(c.take().text);
}

std::size_t take_count(Cursor &c) {
    auto t = c.expect(Tok::Ident, "a count");
    if (t.text.empty() || !std::all_of(t.text.begin(), t.text.end(),
                                       [](unsigned char ch) { return std::isdigit(ch); }))
        throw ParseError(t.line, t.column, "expected a count, got '" + t.text + "'");
    return std::stoul(t.text);
}

// sig Name(n,m), Name(n,m) ...
void parse_sig(Cursor &c, Signature &sig) {
    c.expect_ident("sig");
    do {
        c.skip_newlines();
        auto pos = c.peek();
        auto name = take_symbol(c);
        c.expect(Tok::LParen);
        Arity a;
        a.internal = take_count(c);
        c.expect(Tok::Comma);
        a.external = take_count(c);
        c.expect(Tok::RParen);
        auto [it, fresh] = sig.emplace(name, a);
        if (!fresh && it->second != a)
            throw ParseError(pos.line, pos.column, "conflicting declaration of " + name);
    } while (c.accept(Tok::Comma));
}

bool at_sig(const Cursor &c) { return c.at_ident("sig") && symbol_token(c, 1) && !c.at(Tok::Caret, 1); }

// ---------------------------------------------------------------------------
// Binet documents

class BinetParser {
  public:
    BinetParser(std::string_view src, const ParseOptions &opts) : c_(src), opts_(opts) {}

    Binet run() {
        while (!c_.at(Tok::End)) {
            if (c_.accept(Tok::Newline) || c_.accept(Tok::Comma) || c_.accept(Tok::Semicolon))
                continue;
            if (at_sig(c_)) {
                parse_sig(c_, net_.signature);
                continue;
            }
            if (symbol_token(c_) && c_.at(Tok::Caret, 1)) {
                net_.agents.push_back(agent());
                continue;
            }
            if ((c_.at(Tok::Ident) || c_.at(Tok::Reserved)) && c_.at(Tok::Minus, 1)) {
                Wire w;
                w.a = label();
                c_.expect(Tok::Minus);
                w.b = label();
                net_.wires.push_back(std::move(w));
                continue;
            }
            c_.fail("expected an agent, a wire or a sig declaration");
        }
        if (auto report = validate(net_); !report.empty())
            throw InvalidBinet(std::move(report));
        return std::move(net_);
    }

  private:
    Cursor c_;
    ParseOptions opts_;
    Binet net_;

    Label label() {
        if (c_.at(Tok::Reserved)) {
            if (!opts_.allow_reserved_labels) {
                const auto &t = c_.peek();
                throw ParseError(t.line, t.column,
                                 "label '" + t.text + "' uses the reserved '%' namespace");
            }
            return c_.take().text;
        }
        return c_.expect(Tok::Ident, "a port label").text;
    }

    std::vector<Label> labels() {
        std::vector<Label> out;
        if (c_.at(Tok::Bar) || c_.at(Tok::RParen))
            return out;
        do
            out.push_back(label());
        while (c_.accept(Tok::Comma));
        return out;
    }

    Agent agent() {
        auto pos = c_.peek();
        Agent a;
        a.symbol = take_symbol(c_);
        c_.expect(Tok::Caret);
        a.principal = label();
        c_.expect(Tok::LParen);
        a.external = labels();
        if (c_.accept(Tok::Bar)) {
            a.internal = labels();
            if (c_.accept(Tok::Bar) && !c_.at(Tok::RParen)) {
                do
                    a.children.push_back(agent());
                while (c_.accept(Tok::Comma));
            }
        }
        c_.expect(Tok::RParen);
        auto [it, fresh] = net_.signature.emplace(a.symbol, a.arity());
        if (!fresh && it->second != a.arity()) {
            std::ostringstream msg;
            msg << "arity mismatch: " << a.symbol << " used with (" << a.internal.size() << ","
                << a.external.size() << ") but declared (" << it->second.internal << ","
                << it->second.external << ")";
            throw ParseError(pos.line, pos.column, msg.str());
        }
        return a;
    }
};

void join(std::ostringstream &os, const std::vector<Label> &labels) {
    for (std::size_t i = 0; i < labels.size(); ++i)
        os << (i ? ", " : "") << labels[i];
}

// ---------------------------------------------------------------------------
// Rule documents

bool upper_initial(const std::string &s) {
    return !s.empty() && std::isupper(static_cast<unsigned char>(s.front()));
}

class RulesParser {
  public:
    explicit RulesParser(std::string_view src) : c_(src) {}

    RuleSet run() {
        RuleSet rs;
        while (!c_.at(Tok::End)) {
            if (c_.accept(Tok::Newline) || c_.accept(Tok::Semicolon))
                continue;
            if (at_sig(c_)) {
                parse_sig(c_, rs.signature);
                continue;
            }
            auto start = c_.peek();
            Rule r = rule(rs.size() + 1);
            for (const auto &v : check_rule(r)) {
                if (v.kind == RuleViolationKind::UnboundMetavariable ||
                    v.kind == RuleViolationKind::MetavariableConflict ||
                    v.kind == RuleViolationKind::MalformedRule)
                    throw ParseError(start.line, start.column, "rule " + r.id + ": " + v.message);
            }
            try {
                finalize_rule(r);
            } catch (const std::invalid_argument &e) {
                throw ParseError(start.line, start.column, e.what());
            }
            rs.add(std::move(r));
        }
        return rs;
    }

  private:
    Cursor c_;

    Rule rule(std::size_t ordinal) {
        Rule r;
        r.id = "r" + std::to_string(ordinal);
        if (c_.accept(Tok::LBracket)) {
            r.id = c_.expect(Tok::Ident, "a rule id").text;
            while (c_.at(Tok::Ident)) {
                auto key = c_.take();
                c_.expect(Tok::Equals);
                bool negative = c_.accept(Tok::Minus);
                auto value = c_.expect(Tok::Ident, "a number");
                if (key.text != "priority")
                    throw ParseError(key.line, key.column, "unknown rule attribute '" + key.text + "'");
                try {
                    r.priority = std::stoi(value.text) * (negative ? -1 : 1);
                } catch (const std::exception &) {
                    throw ParseError(value.line, value.column, "expected a number");
                }
            }
            c_.expect(Tok::RBracket);
        }
        do {
            c_.skip_newlines();
            r.lhs.push_back(pattern_agent());
        } while (c_.accept(Tok::Comma));
        if (c_.accept(Tok::ImpliesInactive))
            r.kind = RuleKind::Inactive;
        else if (c_.accept(Tok::Implies))
            r.kind = RuleKind::Active;
        else
            c_.fail("expected '=>' or '=>inactive'");
        if (!end_of_rule()) {
            do {
                c_.skip_newlines();
                rhs_item(r.rhs);
            } while (c_.accept(Tok::Comma));
        }
        if (!end_of_rule())
            c_.fail("expected end of rule");
        return r;
    }

    bool end_of_rule() const {
        return c_.at(Tok::Newline) || c_.at(Tok::Semicolon) || c_.at(Tok::End);
    }

    SymbolPattern symbol_pattern() {
        SymbolPattern s;
        if (c_.at(Tok::QIdent)) {
            std::string name = c_.take().text;
            auto us = name.rfind('_');
            if (us != std::string::npos && us > 0 && us + 1 < name.size()) {
                s.kind = SymbolPattern::Kind::Derived;
                s.name = name.substr(0, us);
                s.suffix = name.substr(us + 1);
            } else {
                s.kind = SymbolPattern::Kind::Variable;
                s.name = name;
            }
            return s;
        }
        s.kind = SymbolPattern::Kind::Concrete;
        s.name = take_symbol(c_);
        return s;
    }

    std::vector<Slot> slots() {
        std::vector<Slot> out;
        if (c_.at(Tok::Bar) || c_.at(Tok::RParen))
            return out;
        do {
            auto name = c_.expect(Tok::Ident, "a label variable").text;
            out.push_back({upper_initial(name) ? Slot::Kind::Vector : Slot::Kind::Label, name});
        } while (c_.accept(Tok::Comma));
        return out;
    }

    AgentPattern pattern_agent() {
        AgentPattern a;
        a.symbol = symbol_pattern();
        c_.expect(Tok::Caret);
        a.principal = c_.expect(Tok::Ident, "a principal label").text;
        c_.expect(Tok::LParen);
        a.external = slots();
        if (c_.accept(Tok::Bar)) {
            a.internal = slots();
            if (c_.accept(Tok::Bar) && !c_.at(Tok::RParen)) {
                if (c_.at(Tok::Ident) && !c_.at(Tok::Caret, 1)) {
                    auto t = c_.take();
                    if (!upper_initial(t.text))
                        throw ParseError(t.line, t.column,
                                         "subnet metavariables start with an upper-case letter");
                    a.children.kind = ChildrenPattern::Kind::Subnet;
                    a.children.subnet = t.text;
                } else {
                    a.children.kind = ChildrenPattern::Kind::Explicit;
                    do
                        a.children.agents.push_back(pattern_agent());
                    while (c_.accept(Tok::Comma));
                }
            }
        }
        c_.expect(Tok::RParen);
        return a;
    }

    bool at_agent() const {
        return (c_.at(Tok::QIdent) || symbol_token(c_)) && c_.at(Tok::Caret, 1);
    }

    void plain_item(std::vector<AgentPattern> &agents, std::vector<WireTemplate> &wires,
                    std::vector<std::string> *subnets) {
        if (at_agent()) {
            agents.push_back(pattern_agent());
            return;
        }
        if (c_.at(Tok::Ident) && c_.at(Tok::Minus, 1)) {
            WireTemplate w;
            w.a = c_.take().text;
            c_.expect(Tok::Minus);
            w.b = c_.expect(Tok::Ident, "a label").text;
            wires.push_back(std::move(w));
            return;
        }
        if (subnets && c_.at(Tok::Ident) && upper_initial(c_.peek().text)) {
            subnets->push_back(c_.take().text);
            return;
        }
        c_.fail("expected an agent, a wire or a subnet");
    }

    void rhs_item(Template &t) {
        if (!c_.at_ident("foreach")) {
            plain_item(t.agents, t.wires, &t.subnets);
            return;
        }
        c_.take();
        Generator g;
        g.var = c_.expect(Tok::Ident, "a generator variable").text;
        if (c_.at_ident("in")) {
            c_.take();
            g.kind = Generator::Kind::Interface;
            c_.expect_ident("I");
        } else if (c_.at_ident("unique") && c_.at(Tok::Minus, 1) && c_.at_ident("in", 2)) {
            c_.take();
            c_.take();
            c_.take();
            g.kind = Generator::Kind::Unique;
            c_.expect_ident("L");
        } else {
            c_.fail("expected 'in I(X)' or 'unique-in L(X)'");
        }
        c_.expect(Tok::LParen);
        g.subnet = c_.expect(Tok::Ident, "a subnet metavariable").text;
        c_.expect(Tok::RParen);
        c_.expect(Tok::Colon);
        c_.skip_newlines();
        plain_item(g.agents, g.wires, nullptr);
        while (c_.at(Tok::Comma) && !c_.at_ident("foreach", 1)) {
            c_.take();
            c_.skip_newlines();
            plain_item(g.agents, g.wires, nullptr);
        }
        t.generators.push_back(std::move(g));
    }
};

void print_symbol(std::ostringstream &os, const SymbolPattern &s) {
    switch (s.kind) {
    case SymbolPattern::Kind::Concrete:
        os << s.name;
        break;
    case SymbolPattern::Kind::Variable:
        os << "?" << s.name;
        break;
    case SymbolPattern::Kind::Derived:
        os << "?" << s.name << "_" << s.suffix;
        break;
    }
}

void print_slots(std::ostringstream &os, const std::vector<Slot> &slots) {
    for (std::size_t i = 0; i < slots.size(); ++i)
        os << (i ? ", " : "") << slots[i].name;
}

void print_pattern(std::ostringstream &os, const AgentPattern &a) {
    print_symbol(os, a.symbol);
    os << "^" << a.principal << "(";
    print_slots(os, a.external);
    if (!a.internal.empty() || a.children.kind != ChildrenPattern::Kind::Empty) {
        os << (a.external.empty() ? "|" : " |");
        if (!a.internal.empty()) {
            os << " ";
            print_slots(os, a.internal);
            os << " ";
        }
        os << "|";
        if (a.children.kind == ChildrenPattern::Kind::Subnet)
            os << " " << a.children.subnet;
        for (std::size_t i = 0; i < a.children.agents.size(); ++i) {
            os << (i ? ", " : " ");
            print_pattern(os, a.children.agents[i]);
        }
    }
    os << ")";
}

} // namespace

Binet parse_binet(std::string_view text, const ParseOptions &options) {
    return BinetParser(text, options).run();
}

std::string print_agent(const Agent &a) {
    std::ostringstream os;
    os << a.symbol << "^" << a.principal << "(";
    join(os, a.external);
    if (!a.internal.empty() || !a.children.empty()) {
        os << (a.external.empty() ? "|" : " |");
        if (!a.internal.empty()) {
            os << " ";
            join(os, a.internal);
            os << " ";
        }
        os << "|";
        std::vector<std::string> kids;
        for (const auto &c : a.children)
            kids.push_back(print_agent(c));
        std::sort(kids.begin(), kids.end());
        for (std::size_t i = 0; i < kids.size(); ++i)
            os << (i ? ", " : " ") << kids[i];
    }
    os << ")";
    return os.str();
}

std::string print_binet(const Binet &net) {
    std::ostringstream os;
    if (!net.signature.empty()) {
        os << "sig ";
        bool first = true;
        for (const auto &[name, a] : net.signature) {
            os << (first ? "" : ", ") << name << "(" << a.internal << "," << a.external << ")";
            first = false;
        }
        os << "\n";
    }
    std::vector<std::string> lines;
    for (const auto &a : net.agents)
        lines.push_back(print_agent(a));
    std::sort(lines.begin(), lines.end());
    std::vector<std::string> wires;
    for (const auto &w : net.wires)
        wires.push_back(std::min(w.a, w.b) + "-" + std::max(w.a, w.b));
    std::sort(wires.begin(), wires.end());
    for (const auto &l : lines)
        os << l << "\n";
    for (const auto &w : wires)
        os << w << "\n";
    return os.str();
}

RuleSet parse_rules(std::string_view text) { return RulesParser(text).run(); }

std::string print_rule(const Rule &rule) {
    std::ostringstream os;
    os << "[" << rule.id;
    if (rule.priority != 0)
        os << " priority=" << rule.priority;
    os << "] ";
    for (std::size_t i = 0; i < rule.lhs.size(); ++i) {
        if (i)
            os << ", ";
        print_pattern(os, rule.lhs[i]);
    }
    os << (rule.kind == RuleKind::Inactive ? " =>inactive" : " =>");
    bool first = true;
    auto sep = [&] {
        os << (first ? " " : ", ");
        first = false;
    };
    for (const auto &a : rule.rhs.agents) {
        sep();
        print_pattern(os, a);
    }
    for (const auto &x : rule.rhs.subnets) {
        sep();
        os << x;
    }
    for (const auto &w : rule.rhs.wires) {
        sep();
        os << w.a << "-" << w.b;
    }
    for (const auto &g : rule.rhs.generators) {
        sep();
        os << "foreach " << g.var
           << (g.kind == Generator::Kind::Interface ? " in I(" : " unique-in L(") << g.subnet
           << "): ";
        bool inner = true;
        for (const auto &a : g.agents) {
            os << (inner ? "" : ", ");
            inner = false;
            print_pattern(os, a);
        }
        for (const auto &w : g.wires) {
            os << (inner ? "" : ", ");
            inner = false;
            os << w.a << "-" << w.b;
        }
    }
    return os.str();
}

} // namespace binet
