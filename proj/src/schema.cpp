#include "valign/schema.hpp"

#include <algorithm>

#include "valign/errors.hpp"

namespace valign {

const VarDecl* Schema::find(std::string_view name) const {
    auto it = std::lower_bound(variables.begin(), variables.end(), name,
                               [](const VarDecl& d, std::string_view n) { return d.name < n; });
    if (it == variables.end() || it->name != name) return nullptr;
    return &*it;
}

void Schema::check_value(const VarDecl& decl, const VarValue& value,
                         const std::string& context) const {
    if (!same_type(value, decl.type)) {
        raise(ErrorCode::schema_mismatch,
              context + ": variable '" + decl.name + "' expects type " +
                  std::string(to_string(decl.type)));
    }
    if (decl.type == VarType::boolean) return;
    const Decimal v = to_decimal(value);
    if (decl.min && v < *decl.min) {
        raise(ErrorCode::domain_overflow,
              context + ": variable '" + decl.name + "' value " + v.str() +
                  " below declared minimum " + decl.min->str());
    }
    if (decl.max && v > *decl.max) {
        raise(ErrorCode::domain_overflow,
              context + ": variable '" + decl.name + "' value " + v.str() +
                  " above declared maximum " + decl.max->str());
    }
}

std::string to_string(const VarValue& value) {
    if (const bool* b = std::get_if<bool>(&value)) return *b ? "true" : "false";
    if (const std::int64_t* i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
    return std::get<Decimal>(value).str();
}

Decimal to_decimal(const VarValue& value) {
    if (const std::int64_t* i = std::get_if<std::int64_t>(&value)) {
        return Decimal::from_int(*i);
    }
    if (const Decimal* d = std::get_if<Decimal>(&value)) return *d;
    raise(ErrorCode::schema_mismatch, "boolean value used where a number is required");
}

bool same_type(const VarValue& value, VarType type) {
    switch (type) {
    case VarType::boolean: return std::holds_alternative<bool>(value);
    case VarType::integer: return std::holds_alternative<std::int64_t>(value);
    case VarType::decimal: return std::holds_alternative<Decimal>(value);
    }
    return false;
}

std::string assignment_key(const VarMap& vars) {
    std::string key;
    for (const auto& [name, value] : vars) {
        if (!key.empty()) key += ',';
        key += name;
        key += '=';
        key += to_string(value);
    }
    return key;
}

} // namespace valign
