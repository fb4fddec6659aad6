#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"

namespace sfif {

// Eventually periodic code string over digits {1..M}. Textual grammar:
// "[preperiod](period)" with digits 1..9, e.g. "(12)" or "12(21)".
class CodeString {
public:
    CodeString() : period_{1} {}
    CodeString(std::vector<int> preperiod, std::vector<int> period)
        : pre_(std::move(preperiod)), period_(std::move(period)) {
        if (period_.empty())
            fail(errc::parse_error, "code string period must be nonempty");
        check_digits(pre_);
        check_digits(period_);
    }

    static CodeString parse(const std::string& text) {
        auto open = text.find('(');
        auto close = text.find(')');
        if (open == std::string::npos || close != text.size() - 1 ||
            close <= open + 1)
            fail(errc::parse_error,
                 "code string must look like [preperiod](period), got '" +
                     text + "'");
        std::vector<int> pre, per;
        for (std::size_t i = 0; i < open; ++i) pre.push_back(digit_at(text, i));
        for (std::size_t i = open + 1; i < close; ++i)
            per.push_back(digit_at(text, i));
        return CodeString(std::move(pre), std::move(per));
    }

    std::string to_string() const {
        std::string s;
        for (int d : pre_) s += static_cast<char>('0' + d);
        s += '(';
        for (int d : period_) s += static_cast<char>('0' + d);
        s += ')';
        return s;
    }

    // 1-based position; preperiod first, then the period repeated forever.
    int digit(long long j) const {
        if (j <= static_cast<long long>(pre_.size()))
            return pre_[static_cast<std::size_t>(j - 1)];
        long long off = (j - static_cast<long long>(pre_.size()) - 1) %
                        static_cast<long long>(period_.size());
        return period_[static_cast<std::size_t>(off)];
    }

    int max_digit() const {
        int m = 0;
        for (int d : pre_) m = std::max(m, d);
        for (int d : period_) m = std::max(m, d);
        return m;
    }

    const std::vector<int>& preperiod() const { return pre_; }
    const std::vector<int>& period() const { return period_; }

private:
    static int digit_at(const std::string& text, std::size_t i) {
        char c = text[i];
        if (c < '1' || c > '9')
            fail(errc::parse_error,
                 std::string("code string digit must be 1..9, got '") + c + "'");
        return c - '0';
    }
    static void check_digits(const std::vector<int>& ds) {
        for (int d : ds)
            if (d < 1 || d > 9)
                fail(errc::parse_error, "code string digit out of 1..9");
    }

    std::vector<int> pre_;
    std::vector<int> period_;
};

// Sum over positions j of |s_j - t_j| (M+1)^{-j}, evaluated in closed form:
// the aligned tail of both strings is periodic with period lcm(Ls, Lt), so
// its contribution is one superperiod scaled by the geometric factor.
inline double code_metric(const CodeString& s, const CodeString& t, int M) {
    if (M < 1) fail(errc::alphabet_mismatch, "pool size must be positive");
    if (s.max_digit() > M || t.max_digit() > M)
        fail(errc::alphabet_mismatch, "code string digit exceeds pool size " +
                                          std::to_string(M));
    long long P = static_cast<long long>(
        std::max(s.preperiod().size(), t.preperiod().size()));
    long long L = std::lcm(static_cast<long long>(s.period().size()),
                           static_cast<long long>(t.period().size()));
    double r = 1.0 / (M + 1);
    double head = 0.0, rj = 1.0;
    for (long long j = 1; j <= P; ++j) {
        rj *= r;
        head += std::abs(s.digit(j) - t.digit(j)) * rj;
    }
    double block = 0.0;
    for (long long j = P + 1; j <= P + L; ++j) {
        rj *= r;
        block += std::abs(s.digit(j) - t.digit(j)) * rj;
    }
    return head + block / (1.0 - std::pow(r, static_cast<double>(L)));
}

} // namespace sfif
