#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tcas/comp.hpp"
#include "tcas/context.hpp"
#include "tcas/render.hpp"

namespace tcas {

// One source statement as carved out by split_statements.
struct Statement {
    enum class Kind {
        Semicolon,  // `;`-terminated: results are printed
        Dot,        // `.`-terminated: results are suppressed
        Module,     // `.sort` / `.end`
    };
    Kind kind = Kind::Semicolon;
    std::string text;  // without the terminator; ".sort"/".end" for modules
    int line = 1;
};

// Splits a script into statements. Terminators are `;` and `.` outside
// parentheses/braces; a line whose first non-blank character is `#` (or a
// `#` preceded by whitespace) is a comment to end of line, while `#` inside
// braces is the declaration placeholder. `.sort`/`.end` stand alone.
// Trailing unterminated text goes to *remainder when given, and is a parse
// error otherwise.
std::vector<Statement> split_statements(const std::string& source,
                                        std::string* remainder = nullptr);

struct TranscriptEntry {
    std::string statement;
    std::string output;  // empty when the statement prints nothing
};
using Transcript = std::vector<TranscriptEntry>;

struct SessionOptions {
    RenderOptions render;  // governs label echoes; component listings follow Format
    int dimension = 4;     // starting index range; a Dimension statement overrides
};

struct ReplResult {
    std::string output;
    bool quit = false;
};

// A single calculation stream: one declaration state, named expressions and
// rules, component-style locals, and the statement interpreter shared by
// batch scripts and the interactive loop.
class Session {
  public:
    explicit Session(SessionOptions options = {});

    // Executes one statement and appends it to the transcript. Returns the
    // printed output (empty when suppressed). Throws Error; on error the
    // session state is rolled back to before the statement.
    std::string execute(const Statement& st);

    // Executes one input line: statements, or a `:show NAME` / `:ctx` /
    // `:quit` meta-command. Never throws; errors come back as diagnostics.
    ReplResult repl_step(const std::string& line);

    const Transcript& transcript() const { return transcript_; }
    const Context& context() const { return ctx_; }
    Context& context() { return ctx_; }
    bool ended() const { return ended_; }

  private:
    struct Local {
        std::string name;
        CompExpr terms;
    };
    struct ModuleStep {
        bool is_contract = false;
        IdRule rule;  // when !is_contract
    };

    std::string execute_unchecked(const Statement& st);
    std::string run_module(bool is_end);
    std::string run_command(class TokenStream& ts, const Statement& st);
    std::string run_form_statement(class TokenStream& ts, const std::string& head);
    std::string describe_context() const;
    std::string show_name(const std::string& name) const;
    Local* find_local(const std::string& name);

    Context ctx_;
    SessionOptions options_;
    Transcript transcript_;
    std::vector<Local> locals_;
    std::vector<ModuleStep> module_steps_;
    bool module_print_ = false;
    int form_width_ = 80;
    bool ended_ = false;
};

// Runs a whole script in a fresh session and returns its transcript.
// Throws Error; evaluation errors are annotated with the statement index.
Transcript run_script(const std::string& source, const SessionOptions& options = {});

}  // namespace tcas
