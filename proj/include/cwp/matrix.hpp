#pragma once

#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "cwp/error.hpp"
#include "cwp/ints.hpp"
#include "cwp/quadint.hpp"

namespace cwp {

// ---------------------------------------------------------------------------
// Unitriangular integer matrices UT_d(Z)
// ---------------------------------------------------------------------------

class UTMatrix {
  public:
    explicit UTMatrix(int d) : d_(d), e_(static_cast<size_t>(d) * d, Int(0)) {
        if (d < 1) fail(Code::BadIndex, "dimension must be >= 1");
        for (int i = 0; i < d; ++i) at(i, i) = 1;
    }

    static UTMatrix identity(int d) { return UTMatrix(d); }

    int dim() const { return d_; }

    Int& at(int i, int j) { return e_[static_cast<size_t>(i) * d_ + j]; }
    const Int& at(int i, int j) const { return e_[static_cast<size_t>(i) * d_ + j]; }

    bool operator==(const UTMatrix& o) const = default;

    bool is_identity() const {
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j < d_; ++j)
                if (at(i, j) != (i == j ? 1 : 0)) return false;
        return true;
    }

    // Unitriangular shape: 1s on the diagonal, 0s below.
    bool well_formed() const {
        for (int i = 0; i < d_; ++i) {
            if (at(i, i) != 1) return false;
            for (int j = 0; j < i; ++j)
                if (at(i, j) != 0) return false;
        }
        return true;
    }

    UTMatrix operator*(const UTMatrix& o) const {
        if (d_ != o.d_) fail(Code::DimensionMismatch, "UT product of unequal dimensions");
        UTMatrix r(d_);
        for (int i = 0; i < d_; ++i) {
            for (int j = i; j < d_; ++j) {
                Int s = 0;
                for (int k = i; k <= j; ++k) s += at(i, k) * o.at(k, j);
                r.at(i, j) = s;
            }
        }
        return r;
    }

    // A = I + N with N strictly upper triangular, so A^-1 = I + sum_{k=1}^{d-1} (-N)^k.
    UTMatrix inverse() const {
        auto idx = [this](int i, int j) { return static_cast<size_t>(i) * d_ + j; };
        std::vector<Int> neg_n(static_cast<size_t>(d_) * d_, Int(0));
        for (int i = 0; i < d_; ++i)
            for (int j = i + 1; j < d_; ++j) neg_n[idx(i, j)] = -at(i, j);

        UTMatrix acc(d_);
        std::vector<Int> power = neg_n;  // (-N)^k, zero diagonal throughout
        for (int k = 1; k < d_; ++k) {
            for (int i = 0; i < d_; ++i)
                for (int j = i + 1; j < d_; ++j) acc.at(i, j) += power[idx(i, j)];
            if (k + 1 == d_) break;
            std::vector<Int> next(static_cast<size_t>(d_) * d_, Int(0));
            for (int i = 0; i < d_; ++i)
                for (int j = i + 1; j < d_; ++j) {
                    Int s = 0;
                    for (int l = i + 1; l < j; ++l) s += power[idx(i, l)] * neg_n[idx(l, j)];
                    next[idx(i, j)] = s;
                }
            power = std::move(next);
        }
        return acc;
    }

    std::string str() const {
        std::string s = "[";
        for (int i = 0; i < d_; ++i) {
            s += i ? ",[" : "[";
            for (int j = 0; j < d_; ++j) {
                if (j) s += ",";
                s += at(i, j).str();
            }
            s += "]";
        }
        s += "]";
        return s;
    }

  private:
    int d_;
    std::vector<Int> e_;
};

inline std::ostream& operator<<(std::ostream& os, const UTMatrix& m) { return os << m.str(); }

inline UTMatrix ut_mul(const UTMatrix& a, const UTMatrix& b) { return a * b; }
inline UTMatrix ut_inv(const UTMatrix& a) { return a.inverse(); }

// T_{i,i+1}^sign, the elementary generator from Gamma_d.
inline UTMatrix ut_generator(int d, int i, int sign) {
    if (i < 1 || i >= d) fail(Code::BadIndex, "generator index " + std::to_string(i) + " out of range for d=" + std::to_string(d));
    if (sign != 1 && sign != -1) fail(Code::BadIndex, "sign must be +1 or -1");
    UTMatrix m(d);
    m.at(i - 1, i) = sign;
    return m;
}

// T_{i,j}^a for arbitrary 1 <= i < j <= d.
inline UTMatrix ut_transvection(int d, int i, int j, const Int& a) {
    if (i < 1 || j <= i || j > d) fail(Code::BadIndex, "transvection indices out of range");
    UTMatrix m(d);
    m.at(i - 1, j - 1) = a;
    return m;
}

// ---------------------------------------------------------------------------
// 2x2 matrices over an exact ring (Rat, QuadInt, Int)
// ---------------------------------------------------------------------------

template <class R>
struct Ring;  // zero/one/inv per coefficient ring

template <>
struct Ring<Int> {
    static Int zero() { return 0; }
    static Int one() { return 1; }
    static Int inv(const Int& x) {
        if (x == 1 || x == -1) return x;
        fail(Code::NotInvertible, "integer " + x.str() + " is not a unit");
    }
    static std::string str(const Int& x) { return x.str(); }
};

template <>
struct Ring<Rat> {
    static Rat zero() { return 0; }
    static Rat one() { return 1; }
    static Rat inv(const Rat& x) {
        if (x == 0) fail(Code::NotInvertible, "division by zero");
        return Rat(1) / x;
    }
    static std::string str(const Rat& x) { return x.str(); }
};

template <>
struct Ring<QuadInt> {
    static QuadInt zero() { return QuadInt::zero(); }
    static QuadInt one() { return QuadInt::one(); }
    static QuadInt inv(const QuadInt& x) { return x.inv(); }
    static std::string str(const QuadInt& x) { return x.str(); }
};

template <class R>
struct Matrix2 {
    R a{Ring<R>::one()}, b{Ring<R>::zero()}, c{Ring<R>::zero()}, d{Ring<R>::one()};

    static Matrix2 identity() { return Matrix2{}; }
    static Matrix2 of(R a_, R b_, R c_, R d_) { return Matrix2{std::move(a_), std::move(b_), std::move(c_), std::move(d_)}; }

    bool operator==(const Matrix2& o) const = default;

    bool is_identity() const { return *this == identity(); }

    Matrix2 operator*(const Matrix2& o) const {
        return Matrix2{a * o.a + b * o.c, a * o.b + b * o.d,
                       c * o.a + d * o.c, c * o.b + d * o.d};
    }

    R det() const { return a * d - b * c; }

    Matrix2 inverse() const {
        R di = Ring<R>::inv(det());
        return Matrix2{d * di, (-b) * di, (-c) * di, a * di};
    }

    std::string str() const {
        return "[[" + Ring<R>::str(a) + "," + Ring<R>::str(b) + "],[" + Ring<R>::str(c) + "," +
               Ring<R>::str(d) + "]]";
    }
};

using QuadMatrix = Matrix2<QuadInt>;
using RatMatrix = Matrix2<Rat>;
using IntMatrix2 = Matrix2<Int>;

template <class R>
Matrix2<R> quad_mat_mul(const Matrix2<R>& a, const Matrix2<R>& b) { return a * b; }

template <class R>
Matrix2<R> quad_mat_inv(const Matrix2<R>& m) { return m.inverse(); }

template <class R>
Matrix2<R> mat2_pow(Matrix2<R> base, Int e) {
    if (e < 0) {
        base = base.inverse();
        e = -e;
    }
    Matrix2<R> r = Matrix2<R>::identity();
    while (e > 0) {
        if (boost::multiprecision::bit_test(e, 0)) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

// [x, y] = x^-1 y^-1 x y
template <class M>
M commutator(const M& x, const M& y) {
    return x.inverse() * y.inverse() * x * y;
}

inline UTMatrix ut_pow(UTMatrix base, Int e) {
    if (e < 0) {
        base = base.inverse();
        e = -e;
    }
    UTMatrix r = UTMatrix::identity(base.dim());
    while (e > 0) {
        if (boost::multiprecision::bit_test(e, 0)) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Group alphabets: letters paired with inverses plus a matrix interpretation
// ---------------------------------------------------------------------------

inline std::string inverse_letter(const std::string& a) {
    static const std::string suffix = "^-1";
    if (a.size() > suffix.size() && a.compare(a.size() - suffix.size(), suffix.size(), suffix) == 0)
        return a.substr(0, a.size() - suffix.size());
    return a + suffix;
}

template <class M>
struct GroupAlphabet {
    std::vector<std::string> letters;                // all letters, inverses included
    std::map<std::string, std::string> inverse_of;   // letter -> partner
    std::map<std::string, M> interp;

    void add_pair(const std::string& a, const M& ma, const M& ma_inv) {
        const std::string ai = inverse_letter(a);
        if (!(ma * ma_inv == ma_inv * ma) || !(ma * ma_inv).is_identity())
            fail(Code::NotInvertible, "interpretation of " + a + " and " + ai + " are not inverse");
        letters.push_back(a);
        letters.push_back(ai);
        inverse_of[a] = ai;
        inverse_of[ai] = a;
        interp.emplace(a, ma);
        interp.emplace(ai, ma_inv);
    }

    const M& value_of(const std::string& letter) const {
        auto it = interp.find(letter);
        if (it == interp.end()) fail(Code::UnknownLetter, "letter " + letter + " has no interpretation");
        return it->second;
    }

    bool has(const std::string& letter) const { return interp.count(letter) != 0; }
};

// Gamma_d letter name for T_{i,i+1}^sign; i is 1-based.
inline std::string ut_letter(int i, int sign = 1) {
    std::string s = "T(" + std::to_string(i) + "," + std::to_string(i + 1) + ")";
    return sign == 1 ? s : s + "^-1";
}

// Generating set Gamma_d = { T_{i,i+1} | 1 <= i < d } with inverses.
inline GroupAlphabet<UTMatrix> make_ut_alphabet(int d) {
    if (d < 1) fail(Code::BadIndex, "dimension must be >= 1");
    GroupAlphabet<UTMatrix> g;
    for (int i = 1; i < d; ++i)
        g.add_pair(ut_letter(i), ut_generator(d, i, 1), ut_generator(d, i, -1));
    return g;
}

// Parse "T(i,j)" / "T(i,j)^-1" with j = i + 1; returns (i, sign).
inline std::pair<int, int> parse_ut_letter(const std::string& letter, int d) {
    std::string base = letter;
    int sign = 1;
    if (base.size() > 3 && base.compare(base.size() - 3, 3, "^-1") == 0) {
        sign = -1;
        base = base.substr(0, base.size() - 3);
    }
    int i = 0, j = 0;
    if (std::sscanf(base.c_str(), "T(%d,%d)", &i, &j) != 2 || j != i + 1 || i < 1 || j > d)
        fail(Code::BadLetter, "not a Gamma_" + std::to_string(d) + " letter: " + letter);
    return {i, sign};
}

// The two 2x2 generators of G_a: g = diag(a, 1) is a stretch, h a shear.
inline GroupAlphabet<RatMatrix> make_ga_int_alphabet(long long a) {
    if (a < 2) fail(Code::BadBase, "integer base must be >= 2, got " + std::to_string(a));
    GroupAlphabet<RatMatrix> g;
    RatMatrix ga = RatMatrix::of(Rat(a), 0, 0, 1);
    RatMatrix h = RatMatrix::of(1, 1, 0, 1);
    g.add_pair("g", ga, ga.inverse());
    g.add_pair("h", h, h.inverse());
    return g;
}

inline GroupAlphabet<QuadMatrix> make_ga_sqrt2_alphabet() {
    GroupAlphabet<QuadMatrix> g;
    QuadMatrix ga = QuadMatrix::of(QuadInt{1, 1}, QuadInt::zero(), QuadInt::zero(), QuadInt::one());
    QuadMatrix h = QuadMatrix::of(QuadInt::one(), QuadInt::one(), QuadInt::zero(), QuadInt::one());
    g.add_pair("g", ga, ga.inverse());
    g.add_pair("h", h, h.inverse());
    return g;
}

}  // namespace cwp
