#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "oddsym/grassmann.hpp"

namespace oddsym {

/// Names and parities of the coordinates of one (super)space, plus the
/// generator count of the scalar algebra every coefficient lives in.
/// Coordinates are indexed even block first: 0..n_even-1 even, then odd.
struct CoordinateSystem {
    std::vector<std::string> even_names;
    std::vector<std::string> odd_names;
    int generator_count = 6;

    int even_count() const { return static_cast<int>(even_names.size()); }
    int odd_count() const { return static_cast<int>(odd_names.size()); }
    int size() const { return even_count() + odd_count(); }

    Parity parity_of(int index) const {
        return index < even_count() ? Parity::Even : Parity::Odd;
    }

    const std::string& name_of(int index) const {
        return index < even_count() ? even_names[index]
                                    : odd_names[index - even_count()];
    }

    /// Index of a named coordinate, or -1.
    int index_of(const std::string& name) const {
        for (int i = 0; i < even_count(); ++i)
            if (even_names[i] == name) return i;
        for (int j = 0; j < odd_count(); ++j)
            if (odd_names[j] == name) return even_count() + j;
        return -1;
    }

    bool operator==(const CoordinateSystem& o) const {
        return even_names == o.even_names && odd_names == o.odd_names &&
               generator_count == o.generator_count;
    }
};

using SystemPtr = std::shared_ptr<const CoordinateSystem>;

/// The standard chart on E^{n.n}: x1..xn, th1..thn.
inline SystemPtr make_superspace(int n, int generator_count) {
    CoordinateSystem s;
    s.generator_count = generator_count;
    for (int i = 1; i <= n; ++i) s.even_names.push_back("x" + std::to_string(i));
    for (int i = 1; i <= n; ++i) s.odd_names.push_back("th" + std::to_string(i));
    return std::make_shared<const CoordinateSystem>(std::move(s));
}

/// Parameter space of an embedded (k.k)-dimensional supersurface: xi1..xik, nu1..nuk.
inline SystemPtr make_parameter_space(int k, int generator_count) {
    CoordinateSystem s;
    s.generator_count = generator_count;
    for (int i = 1; i <= k; ++i) s.even_names.push_back("xi" + std::to_string(i));
    for (int i = 1; i <= k; ++i) s.odd_names.push_back("nu" + std::to_string(i));
    return std::make_shared<const CoordinateSystem>(std::move(s));
}

inline SystemPtr make_scalar_system(int generator_count) {
    CoordinateSystem s;
    s.generator_count = generator_count;
    return std::make_shared<const CoordinateSystem>(std::move(s));
}

inline void require_same_system(const SystemPtr& a, const SystemPtr& b) {
    if (a == b) return;
    if (!a || !b || !(*a == *b))
        fail(ErrorKind::MismatchedContext, "operands live on different coordinate systems");
}

/// Exponents of one monomial: an exponent per even coordinate and a subset of
/// the odd coordinates (each odd coordinate squares to zero).
struct Monomial {
    std::vector<std::uint16_t> even_exp;
    std::uint32_t odd_mask = 0;

    int total_degree() const {
        int d = std::accumulate(even_exp.begin(), even_exp.end(), 0);
        return d + std::popcount(odd_mask);
    }

    bool is_unit() const {
        return odd_mask == 0 &&
               std::all_of(even_exp.begin(), even_exp.end(), [](auto e) { return e == 0; });
    }

    auto operator<=>(const Monomial&) const = default;
};

class LambdaPoint;

/// Polynomial superfunction: polynomial in the even coordinates, multilinear
/// in the odd ones, with SuperNumber coefficients.  The canonical written
/// order of a term is  coefficient * x-part * theta-part,  with the
/// coefficient's generators standing to the left of every odd coordinate.
/// Immutable value type; all operations are exact.
class SuperPolynomial {
public:
    explicit SuperPolynomial(SystemPtr sys) : sys_(std::move(sys)) {}

    static SuperPolynomial zero(SystemPtr sys) { return SuperPolynomial(std::move(sys)); }

    static SuperPolynomial constant(SystemPtr sys, SuperNumber value) {
        SuperPolynomial p(std::move(sys));
        if (value.generator_count() != p.sys_->generator_count)
            fail(ErrorKind::MismatchedContext, "coefficient generator count mismatch");
        if (!value.is_zero()) p.terms_.emplace(p.unit_monomial(), std::move(value));
        return p;
    }

    static SuperPolynomial constant(SystemPtr sys, Rational value) {
        int m = sys->generator_count;
        return constant(std::move(sys), SuperNumber::scalar(m, std::move(value)));
    }

    static SuperPolynomial coordinate(SystemPtr sys, int index) {
        if (index < 0 || index >= sys->size())
            fail(ErrorKind::UnknownSymbol, "coordinate index out of range");
        SuperPolynomial p(sys);
        Monomial m = p.unit_monomial();
        if (index < sys->even_count())
            m.even_exp[index] = 1;
        else
            m.odd_mask = std::uint32_t{1} << (index - sys->even_count());
        p.terms_.emplace(std::move(m), SuperNumber::scalar(sys->generator_count, 1));
        return p;
    }

    static SuperPolynomial coordinate(SystemPtr sys, const std::string& name) {
        int idx = sys->index_of(name);
        if (idx < 0) fail(ErrorKind::UnknownSymbol, "unknown coordinate " + name);
        return coordinate(std::move(sys), idx);
    }

    const SystemPtr& system() const { return sys_; }
    const std::map<Monomial, SuperNumber>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
        return d;
    }

    /// Rational coefficient of the trivial monomial (no coordinates, no generators).
    Rational constant_body() const {
        auto it = terms_.find(unit_monomial());
        return it == terms_.end() ? Rational(0) : it->second.body();
    }

    /// Value at the origin (all coordinates zero).
    SuperNumber constant_part() const {
        auto it = terms_.find(unit_monomial());
        return it == terms_.end() ? SuperNumber(sys_->generator_count) : it->second;
    }

    /// Nilpotent iff every term carries odd content (odd coordinates or
    /// generators); pure even-coordinate terms never power to zero.
    bool is_nilpotent() const {
        for (const auto& [m, c] : terms_)
            if (m.odd_mask == 0 && !c.is_nilpotent()) return false;
        return true;
    }

    Parity parity_of() const {
        if (terms_.empty()) return Parity::Even;
        int bit = -1;
        for (const auto& [m, c] : terms_) {
            Parity cp = c.parity();
            if (cp == Parity::Mixed) return Parity::Mixed;
            int term_bit = (parity_bit(cp) + std::popcount(m.odd_mask)) & 1;
            if (bit < 0) bit = term_bit;
            else if (bit != term_bit) return Parity::Mixed;
        }
        return parity_from_bit(bit);
    }

    bool has_parity(Parity p) const {
        return is_zero() || parity_of() == p;
    }

    SuperPolynomial operator-() const {
        SuperPolynomial r(sys_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    SuperPolynomial& operator+=(const SuperPolynomial& o) {
        require_same_system(sys_, o.sys_);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    SuperPolynomial& operator-=(const SuperPolynomial& o) { return *this += -o; }

    friend SuperPolynomial operator+(SuperPolynomial a, const SuperPolynomial& b) { return a += b; }
    friend SuperPolynomial operator-(SuperPolynomial a, const SuperPolynomial& b) { return a -= b; }

    friend SuperPolynomial operator*(const SuperPolynomial& a, const SuperPolynomial& b) {
        require_same_system(a.sys_, b.sys_);
        SuperPolynomial r(a.sys_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                if (ma.odd_mask & mb.odd_mask) continue;
                // c_a xi_{Sa} X_a Th_a * c_b xi_{Sb} X_b Th_b: move every
                // generator of c_b left across Th_a, then merge masks.
                int theta_sign = interleave_sign(ma.odd_mask, mb.odd_mask);
                SuperNumber cb_adj = (std::popcount(ma.odd_mask) & 1) ? cb.parity_flip() : cb;
                SuperNumber c = ca * cb_adj;
                if (theta_sign) c = -c;
                if (c.is_zero()) continue;
                Monomial m;
                m.even_exp.resize(ma.even_exp.size());
                for (std::size_t i = 0; i < ma.even_exp.size(); ++i)
                    m.even_exp[i] = static_cast<std::uint16_t>(ma.even_exp[i] + mb.even_exp[i]);
                m.odd_mask = ma.odd_mask | mb.odd_mask;
                r.add_term(m, c);
            }
        }
        return r;
    }

    friend SuperPolynomial operator*(const SuperPolynomial& a, const SuperNumber& s) {
        return a * constant(a.sys_, s);
    }
    friend SuperPolynomial operator*(const SuperNumber& s, const SuperPolynomial& a) {
        return constant(a.sys_, s) * a;
    }
    friend SuperPolynomial operator*(const SuperPolynomial& a, const Rational& s) {
        SuperPolynomial r(a.sys_);
        if (s == 0) return r;
        for (const auto& [m, c] : a.terms_) r.terms_.emplace(m, c * s);
        return r;
    }
    friend SuperPolynomial operator*(const Rational& s, const SuperPolynomial& a) { return a * s; }

    bool operator==(const SuperPolynomial& o) const {
        return *sys_ == *o.sys_ && terms_ == o.terms_;
    }
    bool operator!=(const SuperPolynomial& o) const { return !(*this == o); }

    SuperPolynomial pow(unsigned n) const {
        SuperPolynomial r = constant(sys_, Rational(1));
        for (unsigned i = 0; i < n; ++i) r = r * *this;
        return r;
    }

    /// Left partial derivative.  For an odd coordinate the variable is
    /// anticommuted to the leftmost position -- across earlier odd
    /// coordinates and across the coefficient's generators -- and stripped.
    SuperPolynomial left_partial(int index) const {
        if (index < 0 || index >= sys_->size())
            fail(ErrorKind::UnknownSymbol, "coordinate index out of range");
        SuperPolynomial r(sys_);
        if (index < sys_->even_count()) {
            for (const auto& [m, c] : terms_) {
                int e = m.even_exp[index];
                if (e == 0) continue;
                Monomial d = m;
                d.even_exp[index] = static_cast<std::uint16_t>(e - 1);
                r.add_term(d, c * Rational(e));
            }
        } else {
            std::uint32_t bit = std::uint32_t{1} << (index - sys_->even_count());
            for (const auto& [m, c] : terms_) {
                if (!(m.odd_mask & bit)) continue;
                int hops = std::popcount(m.odd_mask & (bit - 1));
                SuperNumber cc = c.parity_flip(); // cross the coefficient's generators
                if (hops & 1) cc = -cc;
                Monomial d = m;
                d.odd_mask = m.odd_mask & ~bit;
                r.add_term(d, cc);
            }
        }
        return r;
    }

    SuperPolynomial left_partial(const std::string& name) const {
        int idx = sys_->index_of(name);
        if (idx < 0) fail(ErrorKind::UnknownSymbol, "unknown coordinate " + name);
        return left_partial(idx);
    }

    /// Ring homomorphism: replace coordinate i by images[i] (all over one
    /// target system).  Images must match the parities of the coordinates
    /// they replace.
    SuperPolynomial substitute(const std::vector<SuperPolynomial>& images) const {
        if (static_cast<int>(images.size()) != sys_->size())
            fail(ErrorKind::MissingAssignment, "substitution must cover every coordinate");
        SystemPtr target = images.empty() ? sys_ : images.front().system();
        for (int i = 0; i < sys_->size(); ++i) {
            require_same_system(target, images[i].system());
            if (!images[i].has_parity(sys_->parity_of(i)))
                fail(ErrorKind::ParityViolation,
                     "substitution image for " + sys_->name_of(i) + " has wrong parity");
        }
        SuperPolynomial acc(target);
        for (const auto& [m, c] : terms_) {
            SuperPolynomial t = constant(target, c);
            for (std::size_t i = 0; i < m.even_exp.size(); ++i)
                for (int e = 0; e < m.even_exp[i]; ++e) t = t * images[i];
            for (int j = 0; j < sys_->odd_count(); ++j)
                if (m.odd_mask & (std::uint32_t{1} << j))
                    t = t * images[sys_->even_count() + j];
            acc += t;
        }
        return acc;
    }

    SuperNumber evaluate(const LambdaPoint& pt) const;

    /// Drop every term of total coordinate degree above `max_degree`.
    SuperPolynomial truncate(int max_degree) const {
        SuperPolynomial r(sys_);
        for (const auto& [m, c] : terms_)
            if (m.total_degree() <= max_degree) r.terms_.emplace(m, c);
        return r;
    }

    /// Exact inverse, defined for unit-plus-nilpotent polynomials (constant
    /// invertible body, all other terms carrying odd content).
    SuperPolynomial inverse_exact() const {
        Rational b = constant_body();
        if (b == 0) fail(ErrorKind::ZeroBody, "inverse of polynomial with zero constant body");
        SuperPolynomial nil = *this - constant(sys_, b);
        if (!nil.is_nilpotent())
            fail(ErrorKind::NotNilpotent,
                 "polynomial is not unit-plus-nilpotent; no exact polynomial inverse");
        return inverse_series(nil, b, -1);
    }

    /// Inverse modulo terms of degree above `max_degree`; requires an
    /// invertible constant body.
    SuperPolynomial inverse_truncated(int max_degree) const {
        Rational b = constant_body();
        if (b == 0) fail(ErrorKind::ZeroBody, "inverse of polynomial with zero constant body");
        SuperPolynomial nil = (*this - constant(sys_, b)).truncate(max_degree);
        return inverse_series(nil, b, max_degree);
    }

    std::string str() const;

private:
    Monomial unit_monomial() const {
        Monomial m;
        m.even_exp.assign(sys_->even_count(), 0);
        return m;
    }

    void add_term(const Monomial& m, const SuperNumber& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    /// (b + nil)^{-1} = b^{-1} sum (-nil/b)^k, stopping when the powers die
    /// out (nilpotency) or exceed the truncation degree.
    SuperPolynomial inverse_series(const SuperPolynomial& nil, const Rational& b,
                                   int max_degree) const {
        SuperPolynomial u = nil * Rational(-1 / b);
        SuperPolynomial acc = constant(sys_, Rational(1));
        SuperPolynomial p = acc;
        int cap = sys_->generator_count + sys_->odd_count() +
                  (max_degree >= 0 ? max_degree : 0) + 2;
        for (int k = 1; k <= cap; ++k) {
            p = p * u;
            if (max_degree >= 0) p = p.truncate(max_degree);
            if (p.is_zero()) break;
            acc += p;
        }
        return acc * (1 / b);
    }

    SystemPtr sys_;
    std::map<Monomial, SuperNumber> terms_;
};

/// Assignment of a SuperNumber to every coordinate of a system, even values
/// to even coordinates and odd values to odd ones.
class LambdaPoint {
public:
    LambdaPoint(SystemPtr sys, std::vector<SuperNumber> values)
        : sys_(std::move(sys)), values_(std::move(values)) {
        if (static_cast<int>(values_.size()) != sys_->size())
            fail(ErrorKind::MissingAssignment, "point must assign every coordinate");
        for (int i = 0; i < sys_->size(); ++i) {
            if (values_[i].generator_count() != sys_->generator_count)
                fail(ErrorKind::MismatchedContext, "point value generator count mismatch");
            if (!values_[i].is_zero() && values_[i].parity() != sys_->parity_of(i))
                fail(ErrorKind::ParityViolation,
                     "value assigned to " + sys_->name_of(i) + " has wrong parity");
        }
    }

    static LambdaPoint origin(SystemPtr sys) {
        std::vector<SuperNumber> v(sys->size(), SuperNumber(sys->generator_count));
        return LambdaPoint(std::move(sys), std::move(v));
    }

    const SystemPtr& system() const { return sys_; }
    const SuperNumber& value(int index) const { return values_[index]; }
    const std::vector<SuperNumber>& values() const { return values_; }

private:
    SystemPtr sys_;
    std::vector<SuperNumber> values_;
};

inline SuperNumber SuperPolynomial::evaluate(const LambdaPoint& pt) const {
    require_same_system(sys_, pt.system());
    int gens = sys_->generator_count;
    SuperNumber acc(gens);
    for (const auto& [m, c] : terms_) {
        SuperNumber t = c;
        for (std::size_t i = 0; i < m.even_exp.size(); ++i)
            for (int e = 0; e < m.even_exp[i]; ++e) t = t * pt.value(static_cast<int>(i));
        for (int j = 0; j < sys_->odd_count(); ++j)
            if (m.odd_mask & (std::uint32_t{1} << j))
                t = t * pt.value(sys_->even_count() + j);
        acc += t;
    }
    return acc;
}

inline std::string SuperPolynomial::str() const {
    if (terms_.empty()) return "0";
    // flatten into (monomial, generator-mask, rational) triples for printing
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        for (const auto& [gmask, q] : c.terms()) {
            Rational mag = q < 0 ? Rational(-q) : q;
            if (first) {
                if (q < 0) os << "-";
                first = false;
            } else {
                os << (q < 0 ? " - " : " + ");
            }
            std::vector<std::string> factors;
            for (int g = 0; g < sys_->generator_count; ++g)
                if (gmask & (std::uint32_t{1} << g)) factors.push_back("g" + std::to_string(g + 1));
            for (int i = 0; i < sys_->even_count(); ++i) {
                if (m.even_exp[i] == 0) continue;
                std::string f = sys_->even_names[i];
                if (m.even_exp[i] > 1) f += "^" + std::to_string(m.even_exp[i]);
                factors.push_back(std::move(f));
            }
            for (int j = 0; j < sys_->odd_count(); ++j)
                if (m.odd_mask & (std::uint32_t{1} << j)) factors.push_back(sys_->odd_names[j]);
            if (factors.empty()) {
                os << mag;
            } else {
                if (mag != 1) os << mag << "*";
                for (std::size_t k = 0; k < factors.size(); ++k) {
                    if (k) os << "*";
                    os << factors[k];
                }
            }
        }
    }
    return os.str();
}

/// Vector field with one polynomial component per coordinate and a declared
/// parity; component parities must be consistent with it.
struct VectorField {
    SystemPtr sys;
    Parity parity = Parity::Even;
    std::vector<SuperPolynomial> components;

    static VectorField zero(SystemPtr s, Parity p) {
        VectorField f;
        f.sys = s;
        f.parity = p;
        f.components.assign(s->size(), SuperPolynomial::zero(s));
        return f;
    }

    /// The coordinate derivation along coordinate `index`.
    static VectorField basis(SystemPtr s, int index) {
        VectorField f = zero(s, s->parity_of(index));
        f.components[index] = SuperPolynomial::constant(s, Rational(1));
        return f;
    }

    void validate() const {
        if (static_cast<int>(components.size()) != sys->size())
            fail(ErrorKind::ShapeMismatch, "vector field needs one component per coordinate");
        for (int a = 0; a < sys->size(); ++a) {
            require_same_system(sys, components[a].system());
            Parity want = parity_from_bit(parity_bit(parity) ^ parity_bit(sys->parity_of(a)));
            if (!components[a].has_parity(want))
                fail(ErrorKind::ParityViolation,
                     "component along " + sys->name_of(a) + " breaks the field parity");
        }
    }

    std::vector<SuperNumber> evaluate(const LambdaPoint& pt) const {
        std::vector<SuperNumber> v;
        v.reserve(components.size());
        for (const auto& c : components) v.push_back(c.evaluate(pt));
        return v;
    }

    VectorField operator+(const VectorField& o) const {
        require_same_system(sys, o.sys);
        VectorField r = *this;
        for (std::size_t i = 0; i < components.size(); ++i) r.components[i] += o.components[i];
        return r;
    }

    VectorField scaled(const SuperPolynomial& s) const {
        VectorField r = *this;
        int sbit = parity_bit(s.parity_of());
        r.parity = parity_from_bit(parity_bit(parity) ^ sbit);
        for (auto& c : r.components) c = s * c;
        return r;
    }
};

/// Whether some component along an odd coordinate is non-nilpotent; the
/// invariant nondegeneracy condition on odd normal fields.
inline bool is_nondegenerate(const VectorField& f) {
    for (int a = f.sys->even_count(); a < f.sys->size(); ++a)
        if (!f.components[a].is_nilpotent()) return true;
    return false;
}

} // namespace oddsym
