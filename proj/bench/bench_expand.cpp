// Times the dummy-expansion kernel: the threaded variant against the serial
// reference, on trace chains g(i0,i1) g(i1,i2) ... g(i_{L-1},i0) whose
// expansion fans out into dim^L concrete terms, plus the epsilon-pair
// contraction workload. Usage: bench_expand [repeats]
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "tcas/comp.hpp"
#include "tcas/context.hpp"
#include "tcas/parse.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace tcas;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool same_expr(const CompExpr& a, const CompExpr& b) {
    if (a.size() != b.size()) return false;
    for (size_t t = 0; t < a.size(); ++t) {
        if (a[t].coeff != b[t].coeff) return false;
        if (a[t].factors.size() != b[t].factors.size()) return false;
        for (size_t f = 0; f < a[t].factors.size(); ++f)
            if (a[t].factors[f].head != b[t].factors[f].head ||
                a[t].factors[f].indices != b[t].factors[f].indices)
                return false;
    }
    return true;
}

// g(i0,i1) g(i1,i2) ... g(i_{L-1},i0): every index is a dummy.
CompExpr trace_chain(const Context& ctx, int length) {
    CompTerm term;
    term.coeff = RationalFunction(Rational(1));
    for (int k = 0; k < length; ++k) {
        CompFactor f;
        f.head = "g";
        f.indices = {Index::abstract("i" + std::to_string(k)),
                     Index::abstract("i" + std::to_string((k + 1) % length))};
        term.factors.push_back(std::move(f));
    }
    return {term};
}

struct Workload {
    std::string name;
    CompExpr input;
};

struct Timing {
    double serial_ms = 0;
    double parallel_ms = 0;
    size_t terms = 0;
};

Timing measure(const Context& ctx, const CompExpr& input, int repeats) {
    Timing best;
    CompExpr serial_out, parallel_out;
    for (int rep = 0; rep < repeats; ++rep) {
        auto t0 = Clock::now();
        serial_out = expand_dummies_serial(ctx, input);
        double s = ms_since(t0);
        t0 = Clock::now();
        parallel_out = expand_dummies(ctx, input);
        double p = ms_since(t0);
        if (rep == 0 || s < best.serial_ms) best.serial_ms = s;
        if (rep == 0 || p < best.parallel_ms) best.parallel_ms = p;
    }
    if (!same_expr(serial_out, parallel_out)) {
        std::cerr << "MISMATCH between serial and parallel expansion\n";
        std::exit(1);
    }
    best.terms = serial_out.size();
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
    if (repeats < 1) repeats = 1;

#ifdef _OPENMP
    std::cout << "OpenMP threads: " << omp_get_max_threads() << "\n";
#else
    std::cout << "built without OpenMP; both columns run the serial kernel\n";
#endif

    Context ctx;
    ctx.declare_component_tensor("g");
    ctx.extend_family("indices",
                      {"i0", "i1", "i2", "i3", "i4", "i5", "i6", "i7", "i8", "i9", "j", "k", "l",
                       "m", "n", "p"},
                      /*strict_variance=*/false);

    std::vector<Workload> workloads;
    for (int length : {4, 6, 8, 9})
        workloads.push_back({"trace g^" + std::to_string(length), trace_chain(ctx, length)});
    workloads.push_back(
        {"e_ pair + frame", lower(ctx, parse_expression(ctx, "e_(0,1,2,3) * e_(i0,i1,i2,i3)"
                                                             " * g(0,i0) * g(1,i1)"
                                                             " * g(2,i2) * g(3,i3)"))});

    std::cout << "workload         terms        serial       parallel     speedup\n";
    for (const Workload& w : workloads) {
        Timing t = measure(ctx, w.input, repeats);
        char line[128];
        std::snprintf(line, sizeof line, "%-15s %9zu %10.2f ms %10.2f ms %9.2fx",
                      w.name.c_str(), t.terms, t.serial_ms, t.parallel_ms,
                      t.parallel_ms > 0 ? t.serial_ms / t.parallel_ms : 0.0);
        std::cout << line << "\n";
    }
    return 0;
}
