#pragma once

#include <string>

#include "tcas/expr.hpp"

namespace tcas {

enum class RenderFormat { Plain, Latex };

struct RenderOptions {
    RenderFormat format = RenderFormat::Plain;
    int width = 80;  // minimum 20
};

// Renders an expression (or equation). Plain output re-parses to the same
// structure; LaTeX output is for display only. Lines are wrapped at
// opts.width with a four-space continuation indent, breaking between terms
// first and inside a term only when a single unit exceeds the width.
std::string render(const ExprPtr& e, const RenderOptions& opts = {});

}  // namespace tcas
