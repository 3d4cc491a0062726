#pragma once

#include <string>

namespace tcas {

enum class Variance { Covariant, Contravariant };
enum class IndexKind { Abstract, Concrete };

// One index slot. Abstract indices carry a name ("\alpha", "i"); concrete
// ones carry an integer component label. The wildcard flag marks pattern
// variables in component rules (written i? in rule sources).
struct Index {
    std::string name;
    Variance variance = Variance::Covariant;
    IndexKind kind = IndexKind::Abstract;
    int value = -1;
    bool wildcard = false;

    static Index abstract(std::string name, Variance v = Variance::Covariant) {
        Index i;
        i.name = std::move(name);
        i.variance = v;
        return i;
    }

    static Index concrete(int value, Variance v = Variance::Covariant) {
        Index i;
        i.kind = IndexKind::Concrete;
        i.value = value;
        i.variance = v;
        return i;
    }

    static Index pattern(std::string name) {
        Index i = abstract(std::move(name));
        i.wildcard = true;
        return i;
    }

    bool is_concrete() const { return kind == IndexKind::Concrete; }

    bool operator==(const Index& o) const {
        return name == o.name && variance == o.variance && kind == o.kind && value == o.value &&
               wildcard == o.wildcard;
    }
    bool operator!=(const Index& o) const { return !(*this == o); }

    // Label without variance: "\alpha", "2", "i?".
    std::string label() const {
        if (kind == IndexKind::Concrete) return std::to_string(value);
        return wildcard ? name + "?" : name;
    }
};

}  // namespace tcas
