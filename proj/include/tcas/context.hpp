#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "tcas/expr.hpp"
#include "tcas/rewrite.hpp"
#include "tcas/symbols.hpp"

namespace tcas {

// Ordered family of abstract index names. Strict families pair dummies as
// one covariant + one contravariant occurrence (abstract-index style);
// non-strict families allow repetition at equal variance (component style).
struct IndexFamily {
    std::string name;
    std::vector<std::string> members;
    bool strict_variance = true;
    // Component range; hi < lo means "0 .. dimension-1 at time of use".
    int range_lo = 0;
    int range_hi = -1;
};

struct SymmetryGroup {
    std::vector<int> slots;  // 0-based
    bool antisymmetric = false;
};

struct SymmetryDecl {
    std::vector<SymmetryGroup> groups;
};

enum class DerivativeKind { Partial, Covariant };

// Shared declaration state for both calculation styles plus the named
// expression/rule store a session manipulates.
class Context {
  public:
    int dimension = 4;

    Context() : scalar_symbols(make_symbol_table()) {}

    // --- declarations -----------------------------------------------------
    void declare_family(IndexFamily family);
    // Appends to an existing family of the same name (component style).
    void extend_family(const std::string& name, const std::vector<std::string>& members,
                       bool strict_variance);
    void declare_symmetry(const std::string& head, SymmetryDecl decl);
    void declare_derivative(const std::string& op, DerivativeKind kind);
    void declare_component_tensor(const std::string& head);
    void declare_symbol(const std::string& name);

    // --- lookups ----------------------------------------------------------
    const IndexFamily* family_of(const std::string& index_name) const;
    bool is_strict(const std::string& index_name) const;
    // Inclusive component range for an index name; falls back to the full
    // dimension for names outside every family.
    std::pair<int, int> range_of(const std::string& index_name) const;
    const SymmetryDecl* symmetry_of(const std::string& head) const;
    bool is_derivative(const std::string& op) const;
    bool is_component_tensor(const std::string& head) const;
    bool is_symbol(const std::string& name) const;

    // First names of the family not present in `used`, in declaration order.
    std::vector<std::string> fresh_names(const IndexFamily& family,
                                         const std::set<std::string>& used, size_t count) const;

    const std::vector<IndexFamily>& families() const { return families_; }
    const std::map<std::string, SymmetryDecl>& symmetries() const { return symmetries_; }
    const std::map<std::string, DerivativeKind>& derivatives() const { return derivatives_; }
    const std::set<std::string>& component_tensors() const { return component_tensors_; }
    const std::set<std::string>& symbols() const { return symbols_; }

    // --- named items ------------------------------------------------------
    std::map<std::string, ExprPtr> named;
    std::map<std::string, Rule> rules;

    // Scalar symbol universe (declaration order = print order).
    SymbolTablePtr scalar_symbols;

    // Collected warnings (e.g. tensors used without a declaration).
    mutable std::vector<std::string> diagnostics;
    void diagnose(const std::string& message) const;

  private:
    std::vector<IndexFamily> families_;
    std::map<std::string, SymmetryDecl> symmetries_;
    std::map<std::string, DerivativeKind> derivatives_;
    std::set<std::string> component_tensors_;
    std::set<std::string> symbols_;
};

}  // namespace tcas
