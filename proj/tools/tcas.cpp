// Command-line front end: `run` executes a script file, `repl` starts the
// interactive loop, `cloak` prints invisibility-cloak medium parameters.
#include <CLI11.hpp>

#include <unistd.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tcas/error.hpp"
#include "tcas/geom.hpp"
#include "tcas/rational.hpp"
#include "tcas/session.hpp"

namespace {

using namespace tcas;

int run_file(const std::string& path, const std::string& format, int width, int dim) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open '" << path << "'\n";
        return 2;
    }
    std::ostringstream buf;
    buf << in.rdbuf();

    SessionOptions opts;
    opts.render.format = format == "latex" ? RenderFormat::Latex : RenderFormat::Plain;
    opts.render.width = width;
    opts.dimension = dim;
    for (const TranscriptEntry& entry : run_script(buf.str(), opts))
        if (!entry.output.empty()) std::cout << entry.output << "\n";
    return 0;
}

int run_repl(int width) {
    SessionOptions opts;
    opts.render.width = width;
    Session session(opts);
    bool tty = isatty(fileno(stdin)) != 0;
    if (tty)
        std::cout << "tcas interactive session; ':quit' leaves, ':ctx' lists declarations.\n";
    std::string line;
    while (true) {
        if (tty) std::cout << "tcas> " << std::flush;
        if (!std::getline(std::cin, line)) break;
        ReplResult r = session.repl_step(line);
        if (!r.output.empty()) std::cout << r.output << "\n";
        if (r.quit) break;
    }
    return 0;
}

struct CloakArgs {
    std::string geometry;
    std::string a_text, b_text;
    std::string sample;  // "r=<rational>", empty when absent
    std::string emit = "table";
};

Rational need_rational(const std::string& flag, const std::string& text) {
    if (auto v = parse_rational(text)) return *v;
    throw Error::parse(flag + " needs an exact rational, got '" + text + "'");
}

std::string latex_axis(const std::string& axis) {
    if (axis == "phi") return "\\phi";
    if (axis == "theta") return "\\theta";
    return axis;
}

std::string latex_math(const std::string& plain) {
    std::string out;
    for (char c : plain)
        if (c == '*')
            out += " \\cdot ";
        else
            out += c;
    return out;
}

int run_cloak(const CloakArgs& args) {
    Context ctx;
    CloakGeometry geometry =
        args.geometry == "spherical" ? CloakGeometry::Spherical : CloakGeometry::Cylindrical;
    Rational a_value = need_rational("--a", args.a_text);
    Rational b_value = need_rational("--b", args.b_text);

    bool sampled = !args.sample.empty();
    Rational r_value;
    if (sampled) {
        size_t eq = args.sample.find('=');
        if (eq == std::string::npos || args.sample.substr(0, eq) != "r")
            throw Error::parse("--sample needs the form r=<rational>");
        r_value = need_rational("--sample", args.sample.substr(eq + 1));
    }

    DiagonalMedium medium =
        cloak_parameters(ctx, geometry, RationalFunction(a_value, ctx.scalar_symbols),
                         RationalFunction(b_value, ctx.scalar_symbols));

    struct Row {
        std::string component;  // "eps_r", "mu_phi", ...
        std::string axis;
        bool is_eps;
        std::string expression;
        std::string value;  // empty when not sampled
    };
    std::vector<Row> rows;
    std::array<std::string, 3> axes = medium.axis_labels();
    auto add = [&](bool is_eps, size_t i, const RationalFunction& f) {
        Row row{(is_eps ? "eps_" : "mu_") + axes[i], axes[i], is_eps, f.str(), ""};
        if (sampled) {
            std::map<int, Rational> at{{ctx.scalar_symbols->find("r"), r_value}};
            row.value = to_string(f.eval(at));
        }
        rows.push_back(std::move(row));
    };
    for (size_t i = 0; i < 3; ++i) add(true, i, medium.eps[i]);
    for (size_t i = 0; i < 3; ++i) add(false, i, medium.mu[i]);

    if (args.emit == "csv") {
        std::cout << "geometry,component,expression,value-at-sample\n";
        for (const Row& row : rows)
            std::cout << args.geometry << "," << row.component << "," << row.expression << ","
                      << row.value << "\n";
        return 0;
    }

    if (args.emit == "latex") {
        std::cout << "\\begin{tabular}{lc" << (sampled ? "ll" : "l") << "}\n";
        for (const Row& row : rows) {
            std::cout << "  " << (row.is_eps ? "\\varepsilon" : "\\mu") << "_{"
                      << latex_axis(row.axis) << "} & = & " << latex_math(row.expression);
            if (sampled) std::cout << " & " << row.value;
            std::cout << " \\\\\n";
        }
        std::cout << "\\end{tabular}\n";
        return 0;
    }

    // Plain table.
    std::cout << args.geometry << " cloak: a = " << to_string(a_value)
              << ", b = " << to_string(b_value) << "\n";
    size_t name_width = std::string("component").size();
    size_t expr_width = std::string("expression").size();
    for (const Row& row : rows) {
        name_width = std::max(name_width, row.component.size());
        expr_width = std::max(expr_width, row.expression.size());
    }
    auto pad = [](const std::string& s, size_t w) { return s + std::string(w - s.size(), ' '); };
    std::cout << pad("component", name_width) << "  ";
    if (sampled)
        std::cout << pad("expression", expr_width) << "  r = " << to_string(r_value) << "\n";
    else
        std::cout << "expression\n";
    for (const Row& row : rows) {
        std::cout << pad(row.component, name_width) << "  ";
        if (sampled)
            std::cout << pad(row.expression, expr_width) << "  " << row.value << "\n";
        else
            std::cout << row.expression << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tensor workbench: batch scripts, an interactive loop, and cloak parameters"};
    app.require_subcommand(1);

    std::string path;
    std::string format = "text";
    int width = 80;
    int dim = 4;
    CLI::App* run = app.add_subcommand("run", "execute a script file and print its transcript");
    run->add_option("file", path, "script file (UTF-8; '#' starts a comment line)")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--format", format, "rendering of echoed expressions")
        ->check(CLI::IsMember({"text", "latex"}))
        ->capture_default_str();
    run->add_option("--width", width, "line width for echoed expressions")
        ->check(CLI::Range(20, 100000))
        ->capture_default_str();
    run->add_option("--dim", dim, "starting index dimension")
        ->check(CLI::Range(1, 64))
        ->capture_default_str();

    int repl_width = 80;
    CLI::App* repl = app.add_subcommand("repl", "interactive statement loop");
    repl->add_option("--width", repl_width, "line width for echoed expressions")
        ->check(CLI::Range(20, 100000))
        ->capture_default_str();

    CloakArgs cloak_args;
    CLI::App* cloak =
        app.add_subcommand("cloak", "medium parameters of an invisibility-cloak shell a < r < b");
    cloak->add_option("--geometry", cloak_args.geometry, "cloak geometry")
        ->required()
        ->check(CLI::IsMember({"cylindrical", "spherical"}));
    cloak->add_option("--a", cloak_args.a_text, "inner radius (exact rational)")->required();
    cloak->add_option("--b", cloak_args.b_text, "outer radius (exact rational)")->required();
    cloak->add_option("--sample", cloak_args.sample, "evaluate each parameter, e.g. r=3/2");
    cloak->add_option("--emit", cloak_args.emit, "output format")
        ->check(CLI::IsMember({"table", "csv", "latex"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (run->parsed()) return run_file(path, format, width, dim);
        if (repl->parsed()) return run_repl(repl_width);
        return run_cloak(cloak_args);
    } catch (const tcas::Error& e) {
        std::cerr << e.what() << "\n";
        return e.kind() == tcas::Error::Kind::Parse ? 1 : 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
