#pragma once

#include <string_view>

#include "padic/function.hpp"

namespace padic {

/// Parses the function DSL:
///
///   spec   := expr | ctor | "[" spec ("," spec)* "]"
///   ctor   := closed_ergodic(spec) | perturb(ell=U, r=U, u=spec)
///           | bseries(ints) | mahler2(ints) | compose(spec, spec)
///           | iterate(spec, U) | awrap(U, spec)
///   expr   := term (("+"|"-") term)*      term := factor ("*" factor)*
///   factor := atom ("^" U)?               atom := var | int | "(" expr ")" | bitop
///   bitop  := and|or|xor "(" expr "," expr ")" | not "(" expr ")"
///   var    := "x" | "x" U
///
/// Univariate expressions without bitwise operators are expanded into Poly.
/// Throws ParseError (with byte offset) or ArityError.
FunctionSpec parse(std::string_view text);

}  // namespace padic
