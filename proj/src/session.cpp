#include "tcas/session.hpp"

#include <cctype>
#include <sstream>

#include "tcas/canonical.hpp"
#include "tcas/error.hpp"
#include "tcas/parse.hpp"
#include "tcas/rewrite.hpp"

namespace tcas {

namespace {

bool is_blank(const std::string& s) {
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

void expect_end(TokenStream& ts) {
    if (!ts.at_end()) ts.fail("unexpected trailing input");
}

// Reads `a, b, c` and returns the names.
std::vector<std::string> name_list(TokenStream& ts) {
    std::vector<std::string> names;
    names.push_back(ts.expect(Token::Type::Name, "name").text);
    while (ts.accept(Token::Type::Comma))
        names.push_back(ts.expect(Token::Type::Name, "name").text);
    return names;
}

bool has_double_colon(const TokenStream& ts) {
    for (size_t k = 0;; ++k) {
        const Token& t = ts.peek(k);
        if (t.type == Token::Type::End) return false;
        if (t.type == Token::Type::DoubleColon) return true;
    }
}

// "error: message" -> "message" (for re-wrapping with a statement index).
std::string strip_error_prefix(const std::string& what) {
    const std::string prefix = "error: ";
    if (what.rfind(prefix, 0) == 0) return what.substr(prefix.size());
    return what;
}

}  // namespace

std::vector<Statement> split_statements(const std::string& source, std::string* remainder) {
    std::vector<Statement> out;
    std::string buf;
    int line = 1, start_line = 1;
    int depth = 0;

    auto push = [&](Statement::Kind kind, std::string text) {
        out.push_back(Statement{kind, trim(std::move(text)), start_line});
        buf.clear();
    };

    for (size_t i = 0; i < source.size(); ++i) {
        char ch = source[i];
        if (ch == '#' && (i == 0 || std::isspace(static_cast<unsigned char>(source[i - 1])))) {
            while (i < source.size() && source[i] != '\n') ++i;
            --i;  // let the newline run through the loop
            continue;
        }
        if (ch == '\n') ++line;
        if (ch == '(' || ch == '{') ++depth;
        if (ch == ')' || ch == '}') --depth;
        if (depth <= 0) {
            if (ch == ';') {
                push(Statement::Kind::Semicolon, buf);
                continue;
            }
            if (ch == '.') {
                if (is_blank(buf) && i + 1 < source.size() &&
                    std::isalpha(static_cast<unsigned char>(source[i + 1]))) {
                    std::string word;
                    size_t j = i + 1;
                    while (j < source.size() &&
                           std::isalpha(static_cast<unsigned char>(source[j])))
                        word += source[j++];
                    start_line = line;
                    push(Statement::Kind::Module, "." + word);
                    i = j - 1;
                    continue;
                }
                push(Statement::Kind::Dot, buf);
                continue;
            }
        }
        if (is_blank(buf) && !std::isspace(static_cast<unsigned char>(ch))) start_line = line;
        buf += ch;
    }

    if (!is_blank(buf)) {
        if (remainder)
            *remainder = buf;
        else
            throw Error::parse("statement is missing its terminator", start_line);
    } else if (remainder) {
        remainder->clear();
    }
    return out;
}

Session::Session(SessionOptions options) : options_(std::move(options)) {
    ctx_.dimension = options_.dimension;
}

Session::Local* Session::find_local(const std::string& name) {
    for (auto& l : locals_)
        if (l.name == name) return &l;
    return nullptr;
}

std::string Session::execute(const Statement& st) {
    // Snapshot for rollback; the scalar symbol table is shared (interned
    // names are append-only and harmless to keep).
    Context ctx_copy = ctx_;
    auto locals_copy = locals_;
    auto steps_copy = module_steps_;
    bool print_copy = module_print_;
    int width_copy = form_width_;
    bool ended_copy = ended_;
    try {
        std::string out = execute_unchecked(st);
        transcript_.push_back(TranscriptEntry{st.text, out});
        return out;
    } catch (...) {
        ctx_ = std::move(ctx_copy);
        locals_ = std::move(locals_copy);
        module_steps_ = std::move(steps_copy);
        module_print_ = print_copy;
        form_width_ = width_copy;
        ended_ = ended_copy;
        throw;
    }
}

std::string Session::execute_unchecked(const Statement& st) {
    if (st.kind == Statement::Kind::Module) {
        if (st.text != ".sort" && st.text != ".end")
            throw Error::parse("unknown module terminator '" + st.text + "'", st.line);
        return run_module(st.text == ".end");
    }

    TokenStream ts(st.text, st.line);
    if (ts.at_end()) return "";  // empty statement
    bool echo = st.kind == Statement::Kind::Semicolon;

    if (ts.peek().type == Token::Type::At) return run_command(ts, st);

    if (has_double_colon(ts)) {
        parse_declaration(ctx_, ts);
        expect_end(ts);
        return "";
    }

    if (ts.peek().type == Token::Type::Name &&
        ts.peek(1).type == Token::Type::ColonEquals) {
        std::string label = ts.get().text;
        ts.get();  // :=
        ExprPtr lhs = parse_expression(ctx_, ts);
        if (ts.accept(Token::Type::Arrow)) {
            ExprPtr rhs = parse_expression(ctx_, ts);
            expect_end(ts);
            ctx_.rules[label] = Rule{label, lhs, rhs};
            if (!echo) return "";
            return label + ":= " + render(lhs, options_.render) + " -> " +
                   render(rhs, options_.render) + ";";
        }
        expect_end(ts);
        ctx_.named[label] = lhs;
        if (!echo) return "";
        return label + ":= " + render(lhs, options_.render) + ";";
    }

    if (ts.peek().type == Token::Type::Name) {
        const std::string& head = ts.peek().text;
        if (head == "Off" || head == "Format" || head == "Dimension" || head == "Indices" ||
            head == "Tensors" || head == "Symbols" || head == "Local" || head == "contract" ||
            head == "id" || head == "Print") {
            ts.get();
            return run_form_statement(ts, head);
        }
    }

    // Plain expression statement.
    ExprPtr e = parse_expression(ctx_, ts);
    expect_end(ts);
    return echo ? render(e, options_.render) + ";" : "";
}

std::string Session::run_form_statement(TokenStream& ts, const std::string& head) {
    if (head == "Off") return "";  // statistics and friends are never printed

    if (head == "Format") {
        Token t = ts.expect(Token::Type::Int, "line width");
        expect_end(ts);
        if (t.value < 8) throw Error::eval("Format width must be at least 8");
        form_width_ = static_cast<int>(t.value);
        return "";
    }
    if (head == "Dimension") {
        Token t = ts.expect(Token::Type::Int, "dimension");
        expect_end(ts);
        if (t.value < 1) throw Error::eval("Dimension must be positive");
        ctx_.dimension = static_cast<int>(t.value);
        return "";
    }
    if (head == "Indices") {
        std::vector<std::string> names = name_list(ts);
        expect_end(ts);
        ctx_.extend_family("indices", names, /*strict_variance=*/false);
        return "";
    }
    if (head == "Tensors") {
        for (const std::string& name : name_list(ts)) ctx_.declare_component_tensor(name);
        expect_end(ts);
        return "";
    }
    if (head == "Symbols") {
        for (const std::string& name : name_list(ts)) ctx_.declare_symbol(name);
        expect_end(ts);
        return "";
    }
    if (head == "Local") {
        std::string name = ts.expect(Token::Type::Name, "expression name").text;
        ts.expect(Token::Type::Equals, "'='");
        ExprPtr e = parse_expression(ctx_, ts, /*allow_equation=*/false);
        expect_end(ts);
        CompExpr terms = lower(ctx_, e);
        if (Local* existing = find_local(name))
            existing->terms = std::move(terms);
        else
            locals_.push_back(Local{name, std::move(terms)});
        return "";
    }
    if (head == "contract") {
        expect_end(ts);
        module_steps_.push_back(ModuleStep{true, {}});
        return "";
    }
    if (head == "id") {
        ExprPtr e = parse_expression(ctx_, ts);
        expect_end(ts);
        if (e->kind != ExprKind::Equation)
            throw Error::parse("id statement needs the form 'id lhs = rhs'");
        module_steps_.push_back(ModuleStep{false, make_id_rule(e->args[0], e->args[1])});
        return "";
    }
    // Print
    expect_end(ts);
    module_print_ = true;
    return "";
}

std::string Session::run_module(bool is_end) {
    for (Local& local : locals_) {
        CompExpr terms = std::move(local.terms);
        // Deferred statements run in source order; consecutive id rules act
        // as one first-match list.
        size_t i = 0;
        while (i < module_steps_.size()) {
            if (module_steps_[i].is_contract) {
                terms = contract_epsilon(ctx_, terms);
                ++i;
                continue;
            }
            std::vector<IdRule> rules;
            while (i < module_steps_.size() && !module_steps_[i].is_contract)
                rules.push_back(module_steps_[i++].rule);
            terms = apply_id_rules(ctx_, terms, rules);
        }
        terms = expand_dummies(ctx_, terms);
        local.terms = collect_terms(std::move(terms));
    }

    std::string out;
    if (module_print_) {
        for (const Local& local : locals_) {
            if (!out.empty()) out += "\n";
            out += render_form(local.name, local.terms, form_width_);
        }
    }
    module_steps_.clear();
    module_print_ = false;
    if (is_end) ended_ = true;
    return out;
}

std::string Session::run_command(TokenStream& ts, const Statement& st) {
    ts.expect(Token::Type::At, "'@'");
    std::string command = ts.expect(Token::Type::Name, "command name").text;
    // Underscores split names in the lexer; stitch `collect_terms` back up.
    while (ts.peek().type == Token::Type::Underscore &&
           ts.peek(1).type == Token::Type::Name) {
        ts.get();
        command += "_" + ts.get().text;
    }
    ts.expect(Token::Type::Bang, "'!'");
    ts.expect(Token::Type::LParen, "'('");
    std::string label = ts.expect(Token::Type::Name, "expression label").text;
    ts.expect(Token::Type::RParen, "')'");

    auto named = ctx_.named.find(label);
    if (named == ctx_.named.end())
        throw Error::eval("no expression is labeled '" + label + "'");

    if (command == "substitute") {
        ts.expect(Token::Type::LParen, "'('");
        ts.expect(Token::Type::At, "'@'");
        ts.expect(Token::Type::LParen, "'('");
        std::string rule_label = ts.expect(Token::Type::Name, "rule label").text;
        ts.expect(Token::Type::RParen, "')'");
        ts.expect(Token::Type::RParen, "')'");
        expect_end(ts);
        auto rule = ctx_.rules.find(rule_label);
        if (rule == ctx_.rules.end())
            throw Error::eval("no rule is labeled '" + rule_label + "'");
        named->second = substitute(ctx_, rule->second, named->second);
    } else if (command == "canonicalise") {
        expect_end(ts);
        named->second = canonicalize(ctx_, named->second);
    } else if (command == "collect_terms") {
        expect_end(ts);
        named->second = collect_terms(ctx_, named->second);
    } else {
        throw Error::parse("unknown command '@" + command + "!'", st.line);
    }

    if (st.kind != Statement::Kind::Semicolon) return "";
    return label + ":= " + render(named->second, options_.render) + ";";
}

std::string Session::describe_context() const {
    std::ostringstream out;
    out << "dimension: " << ctx_.dimension << "\n";
    for (const IndexFamily& f : ctx_.families()) {
        out << "indices " << f.name << ":";
        for (const std::string& m : f.members) out << " " << m;
        out << (f.strict_variance ? "  (strict variance)" : "  (component)");
        if (f.range_hi >= f.range_lo) out << "  range " << f.range_lo << ".." << f.range_hi;
        out << "\n";
    }
    for (const auto& [op, kind] : ctx_.derivatives())
        out << "derivative " << op << ": "
            << (kind == DerivativeKind::Partial ? "partial" : "covariant") << "\n";
    for (const auto& [head, decl] : ctx_.symmetries()) {
        out << "symmetry " << head << ":";
        for (const SymmetryGroup& grp : decl.groups) {
            out << (grp.antisymmetric ? "  anti{" : "  sym{");
            for (size_t i = 0; i < grp.slots.size(); ++i)
                out << (i ? "," : "") << grp.slots[i];
            out << "}";
        }
        out << "\n";
    }
    if (!ctx_.component_tensors().empty()) {
        out << "tensors:";
        for (const std::string& t : ctx_.component_tensors()) out << " " << t;
        out << "\n";
    }
    if (!ctx_.symbols().empty()) {
        out << "symbols:";
        for (const std::string& s : ctx_.symbols()) out << " " << s;
        out << "\n";
    }
    for (const auto& [label, rule] : ctx_.rules) out << "rule " << label << "\n";
    for (const auto& [label, e] : ctx_.named) out << "expression " << label << "\n";
    for (const Local& l : locals_) out << "local " << l.name << "\n";
    std::string text = out.str();
    if (!text.empty() && text.back() == '\n') text.pop_back();
    return text;
}

std::string Session::show_name(const std::string& name) const {
    auto named = ctx_.named.find(name);
    if (named != ctx_.named.end())
        return name + ":= " + render(named->second, options_.render) + ";";
    auto rule = ctx_.rules.find(name);
    if (rule != ctx_.rules.end())
        return name + ":= " + render(rule->second.lhs, options_.render) + " -> " +
               render(rule->second.rhs, options_.render) + ";";
    for (const Local& l : locals_)
        if (l.name == name) return render_form(l.name, l.terms, form_width_);
    return "error: nothing is named '" + name + "'";
}

ReplResult Session::repl_step(const std::string& line) {
    std::string text = trim(line);
    if (text.empty()) return {};

    if (text[0] == ':') {
        std::istringstream words(text.substr(1));
        std::string command, argument;
        words >> command >> argument;
        if (command == "quit") return ReplResult{"", true};
        if (command == "ctx") return ReplResult{describe_context(), false};
        if (command == "show") {
            if (argument.empty()) return ReplResult{"error: usage is ':show NAME'", false};
            return ReplResult{show_name(argument), false};
        }
        return ReplResult{"error: unknown command ':" + command + "'", false};
    }

    ReplResult result;
    try {
        std::string rest;
        std::vector<Statement> statements = split_statements(text, &rest);
        if (!is_blank(rest)) {
            // Interactive convenience: a missing terminator means "print it".
            for (const Statement& st : split_statements(rest + ";"))
                statements.push_back(st);
        }
        for (const Statement& st : statements) {
            std::string out = execute(st);
            if (!out.empty()) {
                if (!result.output.empty()) result.output += "\n";
                result.output += out;
            }
            if (ended_) result.quit = true;
        }
    } catch (const Error& e) {
        result.output = e.what();
    }
    return result;
}

Transcript run_script(const std::string& source, const SessionOptions& options) {
    Session session(options);
    std::vector<Statement> statements = split_statements(source);
    for (size_t i = 0; i < statements.size(); ++i) {
        try {
            session.execute(statements[i]);
        } catch (const Error& e) {
            if (e.kind() == Error::Kind::Parse) throw;
            throw Error::eval("statement " + std::to_string(i + 1) + ": " +
                              strip_error_prefix(e.what()));
        }
        if (session.ended()) break;
    }
    return session.transcript();
}

}  // namespace tcas
