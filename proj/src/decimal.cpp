#include "valign/decimal.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "valign/errors.hpp"

namespace valign {

Decimal Decimal::from_micro(std::int64_t micro) {
    if (micro > k_max_micro || micro < -k_max_micro) {
        raise(ErrorCode::domain_overflow,
              "decimal magnitude exceeds the representable range");
    }
    Decimal d;
    d.micro_ = micro;
    return d;
}

Decimal Decimal::from_int(std::int64_t whole) {
    if (whole > k_max_micro / k_scale || whole < -(k_max_micro / k_scale)) {
        raise(ErrorCode::domain_overflow, "integer exceeds the decimal range");
    }
    return from_micro(whole * k_scale);
}

Decimal Decimal::from_double(double value) {
    if (!std::isfinite(value)) {
        raise(ErrorCode::parse_error, "non-finite number is not a valid decimal");
    }
    const double scaled = value * static_cast<double>(k_scale);
    if (scaled > static_cast<double>(k_max_micro) ||
        scaled < -static_cast<double>(k_max_micro)) {
        raise(ErrorCode::domain_overflow,
              "decimal magnitude exceeds the representable range");
    }
    return from_micro(std::llround(scaled));
}

Decimal Decimal::from_string(const std::string& text) {
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        ++pos;
    }
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
        raise(ErrorCode::parse_error, "malformed decimal literal '" + text + "'");
    }
    std::int64_t whole = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        whole = whole * 10 + (text[pos] - '0');
        if (whole > k_max_micro / k_scale) {
            raise(ErrorCode::domain_overflow,
                  "decimal literal '" + text + "' exceeds the representable range");
        }
        ++pos;
    }
    std::int64_t frac = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        int digits = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            if (++digits > 6) {
                raise(ErrorCode::parse_error,
                      "decimal literal '" + text + "' has more than six fractional digits");
            }
            frac = frac * 10 + (text[pos] - '0');
            ++pos;
        }
        if (digits == 0) {
            raise(ErrorCode::parse_error, "malformed decimal literal '" + text + "'");
        }
        for (; digits < 6; ++digits) frac *= 10;
    }
    if (pos != text.size()) {
        raise(ErrorCode::parse_error, "malformed decimal literal '" + text + "'");
    }
    const std::int64_t micro = whole * k_scale + frac;
    return from_micro(negative ? -micro : micro);
}

std::string Decimal::str() const {
    const bool negative = micro_ < 0;
    const std::int64_t abs = negative ? -micro_ : micro_;
    std::string out = negative ? "-" : "";
    out += std::to_string(abs / k_scale);
    std::int64_t frac = abs % k_scale;
    if (frac != 0) {
        std::string digits = std::to_string(frac);
        digits.insert(digits.begin(), 6 - digits.size(), '0');
        while (!digits.empty() && digits.back() == '0') digits.pop_back();
        out += '.';
        out += digits;
    }
    return out;
}

Decimal Decimal::operator-() const { return from_micro(-micro_); }

Decimal Decimal::operator+(Decimal other) const {
    return from_micro(micro_ + other.micro_);
}

Decimal Decimal::operator-(Decimal other) const {
    return from_micro(micro_ - other.micro_);
}

Decimal Decimal::operator*(Decimal other) const {
    __int128 product = static_cast<__int128>(micro_) * other.micro_;
    const __int128 half = k_scale / 2;
    if (product >= 0) {
        product += half;
    } else {
        product -= half;
    }
    product /= k_scale;
    if (product > k_max_micro || product < -k_max_micro) {
        raise(ErrorCode::domain_overflow, "decimal multiplication overflow");
    }
    return from_micro(static_cast<std::int64_t>(product));
}

} // namespace valign
