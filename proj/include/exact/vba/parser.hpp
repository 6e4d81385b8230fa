#pragma once

#include <string>
#include <string_view>

#include "exact/vba/ast.hpp"

namespace exact::vba {

/// Parses one module. Never throws on bad input: unparseable lines inside a
/// procedure become `Unknown` statements and every recovery leaves a
/// diagnostic at the offending line.
ModuleAst parse_module(std::string_view name, ModuleKind kind, std::string_view source);

/// Independent line scanner: counts logical lines that open a Sub or Function.
/// Shares no code with the lexer or parser so it can check them.
int count_procedures_oracle(std::string_view source);

}  // namespace exact::vba
