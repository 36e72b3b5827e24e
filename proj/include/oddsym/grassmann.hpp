#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oddsym/error.hpp"
#include "oddsym/rational.hpp"

namespace oddsym {

enum class Parity { Even, Odd, Mixed };

inline int parity_bit(Parity p) {
    return p == Parity::Odd ? 1 : 0;
}

inline Parity parity_from_bit(int b) {
    return (b & 1) ? Parity::Odd : Parity::Even;
}

/// Parity of the sign picked up when the generator product xi_A * xi_B is
/// reordered into ascending order.  Works for any pair of anticommuting
/// symbol sets encoded as bitmasks; this is the one sign routine everything
/// else defers to.  The masks must be disjoint.
inline int interleave_sign(std::uint32_t a, std::uint32_t b) {
    int inversions = 0;
    std::uint32_t rest = b;
    while (rest) {
        int t = std::countr_zero(rest);
        rest &= rest - 1;
        // elements of `a` strictly above position t must hop over b's element
        inversions += std::popcount(a >> (t + 1));
    }
    return inversions & 1;
}

/// Element of the finite Grassmann algebra on `generator_count` anticommuting
/// generators over exact rationals.  Terms map a generator subset (bitmask,
/// canonically ascending) to a nonzero coefficient; the representation is a
/// unique normal form.  Immutable value type.
class SuperNumber {
public:
    static constexpr int kMaxGenerators = 16;

    explicit SuperNumber(int generator_count) : gens_(generator_count) {
        check_generator_count(generator_count);
    }

    static SuperNumber scalar(int generator_count, Rational value) {
        SuperNumber a(generator_count);
        if (value != 0) a.terms_.emplace(0u, std::move(value));
        return a;
    }

    static SuperNumber monomial(int generator_count, std::uint32_t mask, Rational coeff) {
        check_generator_count(generator_count);
        if (mask >> generator_count)
            fail(ErrorKind::UnknownSymbol, "generator index out of range for this context");
        SuperNumber a(generator_count);
        if (coeff != 0) a.terms_.emplace(mask, std::move(coeff));
        return a;
    }

    /// The generator xi_{index+1}.
    static SuperNumber generator(int generator_count, int index) {
        if (index < 0 || index >= generator_count)
            fail(ErrorKind::UnknownSymbol, "generator index out of range");
        return monomial(generator_count, std::uint32_t{1} << index, 1);
    }

    int generator_count() const { return gens_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<std::uint32_t, Rational>& terms() const { return terms_; }

    /// Coefficient of the empty subset.
    Rational body() const {
        auto it = terms_.find(0u);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    SuperNumber soul() const {
        SuperNumber s(gens_);
        for (const auto& [mask, c] : terms_)
            if (mask != 0) s.terms_.emplace(mask, c);
        return s;
    }

    /// True iff the body vanishes; such elements power to zero.
    bool is_nilpotent() const { return terms_.find(0u) == terms_.end(); }

    Parity parity() const {
        if (terms_.empty()) return Parity::Even;
        int bit = std::popcount(terms_.begin()->first) & 1;
        for (const auto& [mask, c] : terms_)
            if ((std::popcount(mask) & 1) != bit) return Parity::Mixed;
        return parity_from_bit(bit);
    }

    /// The algebra automorphism xi_S -> (-1)^{|S|} xi_S.
    SuperNumber parity_flip() const {
        SuperNumber r(gens_);
        for (const auto& [mask, c] : terms_)
            r.terms_.emplace(mask, (std::popcount(mask) & 1) ? -c : c);
        return r;
    }

    SuperNumber operator-() const {
        SuperNumber r(gens_);
        for (const auto& [mask, c] : terms_) r.terms_.emplace(mask, -c);
        return r;
    }

    SuperNumber& operator+=(const SuperNumber& o) {
        require_same_context(o);
        for (const auto& [mask, c] : o.terms_) {
            auto [it, fresh] = terms_.try_emplace(mask, c);
            if (!fresh) {
                it->second += c;
                if (it->second == 0) terms_.erase(it);
            }
        }
        return *this;
    }

    SuperNumber& operator-=(const SuperNumber& o) { return *this += -o; }

    friend SuperNumber operator+(SuperNumber a, const SuperNumber& b) { return a += b; }
    friend SuperNumber operator-(SuperNumber a, const SuperNumber& b) { return a -= b; }

    friend SuperNumber operator*(const SuperNumber& a, const SuperNumber& b) {
        a.require_same_context(b);
        SuperNumber r(a.gens_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                if (ma & mb) continue; // repeated generator
                Rational c = ca * cb;
                if (interleave_sign(ma, mb)) c = -c;
                std::uint32_t m = ma | mb;
                auto [it, fresh] = r.terms_.try_emplace(m, c);
                if (!fresh) {
                    it->second += c;
                    if (it->second == 0) r.terms_.erase(it);
                }
            }
        }
        return r;
    }

    friend SuperNumber operator*(const SuperNumber& a, const Rational& s) {
        SuperNumber r(a.gens_);
        if (s == 0) return r;
        for (const auto& [mask, c] : a.terms_) r.terms_.emplace(mask, c * s);
        return r;
    }
    friend SuperNumber operator*(const Rational& s, const SuperNumber& a) { return a * s; }

    bool operator==(const SuperNumber& o) const {
        return gens_ == o.gens_ && terms_ == o.terms_;
    }
    bool operator!=(const SuperNumber& o) const { return !(*this == o); }

    SuperNumber pow(unsigned n) const {
        SuperNumber r = scalar(gens_, 1);
        for (unsigned i = 0; i < n; ++i) r = r * *this;
        return r;
    }

    /// Two-sided multiplicative inverse.  Requires a nonzero body; the soul
    /// contributes a terminating geometric series.
    SuperNumber inverse() const {
        Rational b = body();
        if (b == 0) fail(ErrorKind::ZeroBody, "inverse of an element with zero body");
        SuperNumber u = soul() * Rational(-1 / b); // -(soul)/body
        SuperNumber acc = scalar(gens_, 1);
        SuperNumber p = scalar(gens_, 1);
        for (int k = 1; k <= gens_; ++k) {
            p = p * u;
            if (p.is_zero()) break;
            acc += p;
        }
        return acc * (1 / b);
    }

    /// Square root of an even element.  The body must be a positive rational;
    /// in exact mode it must additionally be a perfect square.  The soul is
    /// handled by the terminating binomial series.
    SuperNumber sqrt(bool allow_float_body = false) const {
        if (parity() == Parity::Odd || parity() == Parity::Mixed)
            fail(ErrorKind::ParityViolation, "sqrt is defined for even elements only");
        Rational b = body();
        if (b < 0) fail(ErrorKind::NegativeBody, "sqrt of an element with negative body");
        if (b == 0) fail(ErrorKind::ZeroBody, "sqrt of a nilpotent element");
        Rational root;
        if (auto r = rational_sqrt_exact(b)) {
            root = *r;
        } else if (allow_float_body) {
            root = rational_sqrt_float(b);
        } else {
            fail(ErrorKind::NonSquareBody, "body " + to_string(b) + " has no rational sqrt");
        }
        // sqrt(b) * sum binom(1/2, k) (soul/b)^k
        SuperNumber u = soul() * (1 / b);
        SuperNumber acc = scalar(gens_, 1);
        SuperNumber p = scalar(gens_, 1);
        Rational binom = 1; // binom(1/2, k)
        for (int k = 1; k <= gens_; ++k) {
            binom *= Rational(3 - 2 * k, 2 * k); // (1/2 - (k-1)) / k
            p = p * u;
            if (p.is_zero()) break;
            acc += p * binom;
        }
        return acc * root;
    }

    /// Canonical text form, e.g. "3/2 + 1/4*g1*g3".
    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [mask, c] : terms_) {
            Rational mag = c < 0 ? Rational(-c) : c;
            if (first) {
                if (c < 0) os << "-";
                first = false;
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            bool need_coeff = (mag != 1) || mask == 0;
            if (need_coeff) os << mag;
            bool need_star = need_coeff;
            for (int g = 0; g < gens_; ++g) {
                if (mask & (std::uint32_t{1} << g)) {
                    if (need_star) os << "*";
                    os << "g" << (g + 1);
                    need_star = true;
                }
            }
        }
        return os.str();
    }

private:
    static void check_generator_count(int m) {
        if (m < 0 || m > kMaxGenerators)
            fail(ErrorKind::MismatchedContext,
                 "generator count must be between 0 and " + std::to_string(kMaxGenerators));
    }

    void require_same_context(const SuperNumber& o) const {
        if (gens_ != o.gens_)
            fail(ErrorKind::MismatchedContext, "operands built over different generator counts");
    }

    int gens_;
    std::map<std::uint32_t, Rational> terms_;
};

inline SuperNumber inverse(const SuperNumber& a) { return a.inverse(); }

} // namespace oddsym
