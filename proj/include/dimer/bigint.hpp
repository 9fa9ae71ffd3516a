#ifndef DIMER_BIGINT_HPP
#define DIMER_BIGINT_HPP

#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "dimer/common.hpp"

namespace dimer {

// Minimal arbitrary-precision signed integer: enough for fraction-free
// (Bareiss) elimination on Kasteleyn and graph-Laplacian matrices, where
// every division is exact.  Schoolbook arithmetic; operand sizes stay small
// (a few hundred bits) for every region the exact counter accepts in tests.
class BigInt {
  public:
    BigInt() = default;
    BigInt(int64_t v) {
        if (v < 0) {
            negative_ = true;
            // avoid overflow on INT64_MIN
            uint64_t mag = uint64_t(-(v + 1)) + 1;
            push_u64(mag);
        } else {
            push_u64(uint64_t(v));
        }
        trim();
    }

    bool is_zero() const { return limbs_.empty(); }
    bool is_negative() const { return negative_; }
    BigInt abs() const {
        BigInt r = *this;
        r.negative_ = false;
        return r;
    }
    BigInt negated() const {
        BigInt r = *this;
        if (!r.is_zero()) r.negative_ = !r.negative_;
        return r;
    }

    friend bool operator==(const BigInt& a, const BigInt& b) {
        return a.negative_ == b.negative_ && a.limbs_ == b.limbs_;
    }

    static int cmp_magnitude(const BigInt& a, const BigInt& b) {
        if (a.limbs_.size() != b.limbs_.size())
            return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
        for (size_t i = a.limbs_.size(); i-- > 0;) {
            if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
        }
        return 0;
    }

    friend bool operator<(const BigInt& a, const BigInt& b) {
        if (a.negative_ != b.negative_) return a.negative_;
        int c = cmp_magnitude(a, b);
        return a.negative_ ? c > 0 : c < 0;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.negative_ == b.negative_) {
            BigInt r = add_magnitude(a, b);
            r.negative_ = a.negative_;
            r.trim();
            return r;
        }
        int c = cmp_magnitude(a, b);
        if (c == 0) return BigInt();
        if (c > 0) {
            BigInt r = sub_magnitude(a, b);
            r.negative_ = a.negative_;
            r.trim();
            return r;
        }
        BigInt r = sub_magnitude(b, a);
        r.negative_ = b.negative_;
        r.trim();
        return r;
    }

    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + b.negated(); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        if (a.is_zero() || b.is_zero()) return BigInt();
        BigInt r;
        r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
        for (size_t i = 0; i < a.limbs_.size(); ++i) {
            uint64_t carry = 0;
            for (size_t j = 0; j < b.limbs_.size(); ++j) {
                uint64_t cur = uint64_t(a.limbs_[i]) * b.limbs_[j] + r.limbs_[i + j] + carry;
                r.limbs_[i + j] = uint32_t(cur);
                carry = cur >> 32;
            }
            r.limbs_[i + b.limbs_.size()] += uint32_t(carry);
        }
        r.negative_ = a.negative_ != b.negative_;
        r.trim();
        return r;
    }

    // Exact quotient; raises if the division leaves a remainder.
    static BigInt div_exact(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod_magnitude(a, b, q, r);
        if (!r.is_zero()) throw Error(ErrorKind::Internal, "BigInt::div_exact: inexact division");
        q.negative_ = !q.is_zero() && (a.negative_ != b.negative_);
        return q;
    }

    double to_double() const {
        double v = 0;
        for (size_t i = limbs_.size(); i-- > 0;) v = v * 4294967296.0 + double(limbs_[i]);
        return negative_ ? -v : v;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::vector<uint32_t> work = limbs_;
        std::string digits;
        while (!work.empty()) {
            uint64_t rem = 0;
            for (size_t i = work.size(); i-- > 0;) {
                uint64_t cur = (rem << 32) | work[i];
                work[i] = uint32_t(cur / 1000000000ULL);
                rem = cur % 1000000000ULL;
            }
            while (!work.empty() && work.back() == 0) work.pop_back();
            for (int d = 0; d < 9; ++d) {
                digits.push_back(char('0' + rem % 10));
                rem /= 10;
            }
        }
        while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
        std::string out;
        if (negative_) out.push_back('-');
        out.append(digits.rbegin(), digits.rend());
        return out;
    }

    static BigInt from_string(const std::string& s) {
        BigInt r;
        size_t i = 0;
        bool neg = false;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
        if (i >= s.size()) throw Error(ErrorKind::Io, "BigInt: empty literal");
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw Error(ErrorKind::Io, "BigInt: bad digit");
            r = r * BigInt(10) + BigInt(s[i] - '0');
        }
        r.negative_ = neg && !r.is_zero();
        return r;
    }

  private:
    void push_u64(uint64_t v) {
        limbs_.push_back(uint32_t(v));
        limbs_.push_back(uint32_t(v >> 32));
    }
    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
        if (limbs_.empty()) negative_ = false;
    }

    static BigInt add_magnitude(const BigInt& a, const BigInt& b) {
        BigInt r;
        const size_t n = std::max(a.limbs_.size(), b.limbs_.size());
        r.limbs_.assign(n + 1, 0);
        uint64_t carry = 0;
        for (size_t i = 0; i < n; ++i) {
            uint64_t cur = carry;
            if (i < a.limbs_.size()) cur += a.limbs_[i];
            if (i < b.limbs_.size()) cur += b.limbs_[i];
            r.limbs_[i] = uint32_t(cur);
            carry = cur >> 32;
        }
        r.limbs_[n] = uint32_t(carry);
        return r;
    }

    // requires |a| >= |b|
    static BigInt sub_magnitude(const BigInt& a, const BigInt& b) {
        BigInt r;
        r.limbs_ = a.limbs_;
        int64_t borrow = 0;
        for (size_t i = 0; i < r.limbs_.size(); ++i) {
            int64_t cur = int64_t(r.limbs_[i]) - borrow - (i < b.limbs_.size() ? b.limbs_[i] : 0);
            borrow = cur < 0;
            if (cur < 0) cur += (int64_t(1) << 32);
            r.limbs_[i] = uint32_t(cur);
        }
        return r;
    }

    // long division of magnitudes: a = q*b + r with 0 <= r < |b|
    static void divmod_magnitude(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
        if (b.is_zero()) throw Error(ErrorKind::Internal, "BigInt: division by zero");
        q = BigInt();
        r = BigInt();
        q.limbs_.assign(a.limbs_.size(), 0);
        for (size_t bit = a.limbs_.size() * 32; bit-- > 0;) {
            r = add_magnitude(r, r); // r <<= 1
            r.trim();
            if ((a.limbs_[bit / 32] >> (bit % 32)) & 1u) {
                r = add_magnitude(r, BigInt(1));
                r.trim();
            }
            if (cmp_magnitude(r, b) >= 0) {
                r = sub_magnitude(r, b);
                r.trim();
                q.limbs_[bit / 32] |= (1u << (bit % 32));
            }
        }
        q.trim();
    }

    std::vector<uint32_t> limbs_; // little-endian, base 2^32
    bool negative_ = false;
};

} // namespace dimer

#endif
