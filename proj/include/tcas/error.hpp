#pragma once

#include <stdexcept>
#include <string>

namespace tcas {

// Parse errors carry source positions; evaluation errors usually do not.
// The CLI maps Parse -> exit 1 and Eval -> exit 2.
class Error : public std::runtime_error {
  public:
    enum class Kind { Parse, Eval };

    Error(Kind kind, std::string message, int line = -1, int column = -1)
        : std::runtime_error(format(kind, message, line, column)),
          kind_(kind),
          line_(line),
          column_(column) {}

    Kind kind() const { return kind_; }
    int line() const { return line_; }
    int column() const { return column_; }

    static Error parse(std::string message, int line = -1, int column = -1) {
        return Error(Kind::Parse, std::move(message), line, column);
    }
    static Error eval(std::string message) { return Error(Kind::Eval, std::move(message)); }

  private:
    static std::string format(Kind kind, const std::string& msg, int line, int col) {
        std::string out = kind == Kind::Parse ? "parse error" : "error";
        if (line >= 1) {
            out += " at " + std::to_string(line);
            if (col >= 1) out += ":" + std::to_string(col);
        }
        return out + ": " + msg;
    }

    Kind kind_;
    int line_, column_;
};

}  // namespace tcas
