#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <string_view>

#include "restruct/errors.hpp"

namespace restruct {

/// Exact fixed-point amount with one fractional digit, stored as integer
/// tenths. All profit/weight/cost arithmetic in the library goes through
/// this type so feasibility and optimality comparisons never hit floating
/// point rounding.
class money {
public:
    constexpr money() = default;

    static constexpr money from_tenths(std::int64_t tenths) {
        money m;
        m.tenths_ = tenths;
        return m;
    }

    static constexpr money from_units(std::int64_t units) {
        return from_tenths(units * 10);
    }

    /// Parses "14", "13.8", "-0.5". At most one fractional digit.
    static money parse(std::string_view text) {
        const std::string s(text);
        if (s.empty()) throw parse_error("money: empty value");
        std::size_t i = 0;
        bool neg = false;
        if (s[i] == '+' || s[i] == '-') {
            neg = s[i] == '-';
            ++i;
        }
        if (i == s.size()) throw parse_error("money: sign without digits");
        std::int64_t units = 0;
        bool any = false;
        for (; i < s.size() && s[i] != '.'; ++i) {
            if (s[i] < '0' || s[i] > '9')
                throw parse_error("money: bad character in '" + s + "'");
            units = units * 10 + (s[i] - '0');
            any = true;
        }
        std::int64_t frac = 0;
        if (i < s.size()) { // at '.'
            ++i;
            if (i + 1 != s.size())
                throw parse_error("money: expected exactly one fractional digit in '" +
                                  s + "'");
            if (s[i] < '0' || s[i] > '9')
                throw parse_error("money: bad fractional digit in '" + s + "'");
            frac = s[i] - '0';
            any = true;
        }
        if (!any) throw parse_error("money: no digits in '" + s + "'");
        const std::int64_t t = units * 10 + frac;
        return from_tenths(neg ? -t : t);
    }

    /// Canonical form: always one fractional digit ("22.0", "-1.6").
    std::string str() const {
        const std::int64_t a = tenths_ < 0 ? -tenths_ : tenths_;
        std::string out = tenths_ < 0 ? "-" : "";
        out += std::to_string(a / 10);
        out += '.';
        out += static_cast<char>('0' + a % 10);
        return out;
    }

    constexpr std::int64_t tenths() const { return tenths_; }
    constexpr bool is_zero() const { return tenths_ == 0; }
    constexpr bool negative() const { return tenths_ < 0; }

    friend constexpr money operator+(money a, money b) {
        return from_tenths(a.tenths_ + b.tenths_);
    }
    friend constexpr money operator-(money a, money b) {
        return from_tenths(a.tenths_ - b.tenths_);
    }
    constexpr money operator-() const { return from_tenths(-tenths_); }
    money& operator+=(money o) {
        tenths_ += o.tenths_;
        return *this;
    }
    money& operator-=(money o) {
        tenths_ -= o.tenths_;
        return *this;
    }
    friend constexpr auto operator<=>(money, money) = default;
    friend constexpr bool operator==(money, money) = default;

    constexpr money abs() const { return from_tenths(tenths_ < 0 ? -tenths_ : tenths_); }

private:
    std::int64_t tenths_ = 0;
};

inline money abs_diff(money a, money b) { return (a - b).abs(); }

} // namespace restruct
