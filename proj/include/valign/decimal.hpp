#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace valign {

/// Fixed-precision decimal with six fractional digits, stored as an integer
/// count of millionths. State variables, utilities and rewrite arithmetic all
/// use this type so that state identity stays exact across norm applications.
///
/// Magnitude is capped at 1e8 so every representable value survives a
/// round-trip through a JSON double.
class Decimal {
public:
    static constexpr std::int64_t k_scale = 1'000'000;
    static constexpr std::int64_t k_max_micro = 100'000'000LL * k_scale;

    Decimal() = default;

    static Decimal from_micro(std::int64_t micro);
    static Decimal from_int(std::int64_t whole);
    static Decimal from_double(double value);
    static Decimal from_string(const std::string& text);

    std::int64_t micro() const { return micro_; }
    double to_double() const { return static_cast<double>(micro_) / k_scale; }
    bool is_integral() const { return micro_ % k_scale == 0; }
    std::int64_t whole_part() const { return micro_ / k_scale; }

    /// Canonical rendering: minus sign, integer part, fraction with trailing
    /// zeros trimmed ("140", "0.2", "-3.25").
    std::string str() const;

    Decimal operator-() const;
    Decimal operator+(Decimal other) const;
    Decimal operator-(Decimal other) const;
    /// Rounds half away from zero back to scale six.
    Decimal operator*(Decimal other) const;

    auto operator<=>(const Decimal&) const = default;

private:
    std::int64_t micro_ = 0;
};

} // namespace valign
