#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "valign/decimal.hpp"

namespace valign {

enum class VarType { boolean, integer, decimal };

inline const char* to_string(VarType type) {
    switch (type) {
    case VarType::boolean: return "bool";
    case VarType::integer: return "int";
    case VarType::decimal: return "decimal";
    }
    return "?";
}

/// A state variable value. The alternative mirrors VarType.
using VarValue = std::variant<bool, std::int64_t, Decimal>;

/// Variable assignment of one state, keyed by variable name (sorted).
using VarMap = std::map<std::string, VarValue>;

struct VarDecl {
    std::string name;
    VarType type = VarType::decimal;
    std::optional<Decimal> min;
    std::optional<Decimal> max;
};

/// Declares the uniform variable layout every state of a world follows.
struct Schema {
    std::vector<VarDecl> variables; // sorted by name, unique

    const VarDecl* find(std::string_view name) const;
    /// Checks type and declared range; throws SchemaMismatch / DomainOverflow.
    void check_value(const VarDecl& decl, const VarValue& value,
                     const std::string& context) const;
};

std::string to_string(const VarValue& value);

/// Numeric view of a value; bool raises SchemaMismatch.
Decimal to_decimal(const VarValue& value);

bool same_type(const VarValue& value, VarType type);

/// Canonical "name=value,..." rendering of an assignment. Used both as the
/// identity of a state and as the id of states minted by rewrites.
std::string assignment_key(const VarMap& vars);

} // namespace valign
