#include "tcas/context.hpp"

#include <algorithm>

#include "tcas/error.hpp"

namespace tcas {

void Context::declare_family(IndexFamily family) {
    for (auto& f : families_) {
        if (f.name == family.name) {
            f = std::move(family);
            return;
        }
    }
    families_.push_back(std::move(family));
}

void Context::extend_family(const std::string& name, const std::vector<std::string>& members,
                            bool strict_variance) {
    for (auto& f : families_) {
        if (f.name == name) {
            for (const auto& m : members)
                if (std::find(f.members.begin(), f.members.end(), m) == f.members.end())
                    f.members.push_back(m);
            return;
        }
    }
    IndexFamily f;
    f.name = name;
    f.members = members;
    f.strict_variance = strict_variance;
    families_.push_back(std::move(f));
}

void Context::declare_symmetry(const std::string& head, SymmetryDecl decl) {
    symmetries_[head] = std::move(decl);
}

void Context::declare_derivative(const std::string& op, DerivativeKind kind) {
    derivatives_[op] = kind;
}

void Context::declare_component_tensor(const std::string& head) {
    component_tensors_.insert(head);
}

void Context::declare_symbol(const std::string& name) {
    symbols_.insert(name);
    scalar_symbols->intern(name);
}

const IndexFamily* Context::family_of(const std::string& index_name) const {
    for (const auto& f : families_)
        if (std::find(f.members.begin(), f.members.end(), index_name) != f.members.end())
            return &f;
    return nullptr;
}

bool Context::is_strict(const std::string& index_name) const {
    const IndexFamily* f = family_of(index_name);
    return f && f->strict_variance;
}

std::pair<int, int> Context::range_of(const std::string& index_name) const {
    const IndexFamily* f = family_of(index_name);
    if (f && f->range_hi >= f->range_lo) return {f->range_lo, f->range_hi};
    return {0, dimension - 1};
}

const SymmetryDecl* Context::symmetry_of(const std::string& head) const {
    auto it = symmetries_.find(head);
    return it == symmetries_.end() ? nullptr : &it->second;
}

bool Context::is_derivative(const std::string& op) const { return derivatives_.count(op) > 0; }

bool Context::is_component_tensor(const std::string& head) const {
    return head == "e_" || head == "d_" || component_tensors_.count(head) > 0;
}

bool Context::is_symbol(const std::string& name) const { return symbols_.count(name) > 0; }

std::vector<std::string> Context::fresh_names(const IndexFamily& family,
                                              const std::set<std::string>& used,
                                              size_t count) const {
    std::vector<std::string> out;
    for (const auto& m : family.members) {
        if (out.size() == count) break;
        if (!used.count(m)) out.push_back(m);
    }
    if (out.size() < count)
        throw Error::eval("family '" + family.name + "' has no unused index name left");
    return out;
}

void Context::diagnose(const std::string& message) const {
    if (std::find(diagnostics.begin(), diagnostics.end(), message) == diagnostics.end())
        diagnostics.push_back(message);
}

}  // namespace tcas
