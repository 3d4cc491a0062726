#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace tcas {

// Append-only universe of scalar symbol names. Polynomial monomials store
// exponent vectors indexed by symbol id, so ids must never be reused or
// reordered. Declaration order doubles as the print order inside monomials
// and drives the monomial significance order (later symbols dominate).
class SymbolTable {
  public:
    int intern(const std::string& name) {
        auto it = ids_.find(name);
        if (it != ids_.end()) return it->second;
        int id = static_cast<int>(names_.size());
        names_.push_back(name);
        ids_.emplace(name, id);
        return id;
    }

    // -1 when the name has not been interned.
    int find(const std::string& name) const {
        auto it = ids_.find(name);
        return it == ids_.end() ? -1 : it->second;
    }

    const std::string& name(int id) const { return names_.at(static_cast<size_t>(id)); }

    int size() const { return static_cast<int>(names_.size()); }

  private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> ids_;
};

using SymbolTablePtr = std::shared_ptr<SymbolTable>;

inline SymbolTablePtr make_symbol_table() { return std::make_shared<SymbolTable>(); }

}  // namespace tcas
