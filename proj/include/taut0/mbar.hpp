#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "taut0/errors.hpp"
#include "taut0/linalg.hpp"
#include "taut0/rational.hpp"

// Rational Picard group of the moduli space of stable n-pointed genus-zero
// curves, in the basis of irreducible boundary divisors.  A boundary divisor
// is an unordered 2-part partition A|B of the markings {1..n} with both
// parts of size >= 2; we store the side containing marking 1 as a bitmask
// (bit k = marking k+1).  Everything here is elementary combinatorics plus
// exact linear algebra, which is the point: this layer is computed from
// first principles so it can act as an independent check on the symbolic
// engine, and the two must never be collapsed into one code path.

namespace taut0 {

inline void check_mbar_n(int n) {
    if (n < 4 || n > 16) throw input_error("marking count n must be in [4,16]");
}

inline uint32_t mbar_full_mask(int n) { return (n == 32) ? ~0u : ((1u << n) - 1u); }

inline uint32_t mbar_canonical_side(int n, uint32_t m) {
    return (m & 1u) ? m : (mbar_full_mask(n) & ~m);
}

inline bool mbar_is_boundary(int n, uint32_t m) {
    if (!(m & 1u)) return false;
    int a = __builtin_popcount(m);
    return a >= 2 && n - a >= 2;
}

// All boundary divisors, as canonical masks in increasing order.
inline std::vector<uint32_t> mbar_basis(int n) {
    check_mbar_n(n);
    std::vector<uint32_t> basis;
    for (uint32_t m = 1; m <= mbar_full_mask(n); m += 2)
        if (mbar_is_boundary(n, m)) basis.push_back(m);
    return basis;
}

inline std::string mbar_side_label(int n, uint32_t m) {
    std::string a, b;
    for (int k = 0; k < n; ++k) {
        std::string& side = (m >> k & 1u) ? a : b;
        if (!side.empty()) side += ',';
        side += std::to_string(k + 1);
    }
    return a + "|" + b;
}

class MbarSpace;

// A divisor class as exact coefficients over the boundary basis.
struct MbarVector {
    int n = 0;
    std::vector<Rat> c;

    MbarVector() = default;
    MbarVector(int n_, size_t dim) : n(n_), c(dim) {}

    MbarVector& operator+=(const MbarVector& o) {
        for (size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
        return *this;
    }
    MbarVector& operator-=(const MbarVector& o) {
        for (size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
        return *this;
    }
    MbarVector& operator*=(const Rat& s) {
        for (Rat& x : c) x *= s;
        return *this;
    }
    friend MbarVector operator+(MbarVector a, const MbarVector& b) { return a += b; }
    friend MbarVector operator-(MbarVector a, const MbarVector& b) { return a -= b; }
    friend MbarVector operator*(const Rat& s, MbarVector a) { return a *= s; }
    bool operator==(const MbarVector& o) const = default;
};

// An F-curve: a partition of the markings into exactly four nonempty parts,
// stored with parts ordered by their smallest element.
using FCurve = std::array<uint32_t, 4>;

inline std::vector<FCurve> mbar_fcurves(int n) {
    check_mbar_n(n);
    std::vector<FCurve> out;
    // Assign each marking a block id in restricted-growth form; keeping ids
    // in first-occurrence order makes each partition appear exactly once.
    std::vector<int> block(n, 0);
    auto rec = [&](auto&& self, int k, int used) -> void {
        if (n - k < 4 - used) return;
        if (k == n) {
            if (used == 4) {
                FCurve f{0, 0, 0, 0};
                for (int i = 0; i < n; ++i) f[block[i]] |= 1u << i;
                out.push_back(f);
            }
            return;
        }
        int top = used < 4 ? used + 1 : 4;
        for (int b = 0; b < top; ++b) {
            block[k] = b;
            self(self, k + 1, b == used ? used + 1 : used);
        }
    };
    rec(rec, 0, 0);
    return out;
}

// Intersection number of an F-curve with one boundary divisor: +1 when one
// side of the partition is a union of exactly two of the four parts, -1 when
// a side coincides with a single part, 0 otherwise.
inline int fcurve_pair_basis(int n, const FCurve& f, uint32_t mask) {
    uint32_t a = mask, b = mbar_full_mask(n) & ~mask;
    for (int i = 0; i < 4; ++i)
        if (a == f[i] || b == f[i]) return -1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (a == (f[i] | f[j])) return 1;
    return 0;
}

// Caches the basis, the span of the defining relations of Pic, and the
// F-curve list for one n.  The relation span is generated, for every
// 4-subset {i,j,k,l} of markings, by the two differences
//   sum[ij|kl] - sum[ik|jl]   and   sum[ij|kl] - sum[il|jk],
// where sum[ij|kl] adds all boundary divisors separating {i,j} from {k,l}.
class MbarSpace {
public:
    explicit MbarSpace(int n) : n_(n), basis_(mbar_basis(n)), keel_(basis_.size()) {
        for (size_t i = 0; i < basis_.size(); ++i) index_[basis_[i]] = i;
        for (const auto& row : keel_kernel_rows()) keel_.insert(row);
        fcurves_ = mbar_fcurves(n);
    }

    int n() const { return n_; }
    const std::vector<uint32_t>& basis() const { return basis_; }
    const std::vector<FCurve>& fcurves() const { return fcurves_; }
    size_t dim() const { return basis_.size(); }
    size_t relation_rank() const { return keel_.rank(); }

    size_t index_of(uint32_t mask) const {
        uint32_t m = mbar_canonical_side(n_, mask);
        if (!mbar_is_boundary(n_, m)) throw input_error("not a boundary divisor mask");
        return index_.at(m);
    }

    MbarVector zero() const { return MbarVector(n_, dim()); }

    MbarVector boundary(uint32_t mask) const {
        MbarVector v = zero();
        v.c[index_of(mask)] = 1;
        return v;
    }

    // Sum of all boundary divisors separating {i,j} from {k,l} (markings 1-based).
    MbarVector separating_sum(int i, int j, int k, int l) const {
        MbarVector v = zero();
        uint32_t bi = 1u << (i - 1), bj = 1u << (j - 1), bk = 1u << (k - 1), bl = 1u << (l - 1);
        for (size_t t = 0; t < basis_.size(); ++t) {
            uint32_t m = basis_[t];
            bool ij_in = (m & bi) && (m & bj) && !(m & bk) && !(m & bl);
            bool kl_in = !(m & bi) && !(m & bj) && (m & bk) && (m & bl);
            if (ij_in || kl_in) v.c[t] = 1;
        }
        return v;
    }

    std::vector<std::vector<Rat>> keel_kernel_rows() const {
        std::vector<std::vector<Rat>> rows;
        for (int i = 1; i <= n_; ++i)
            for (int j = i + 1; j <= n_; ++j)
                for (int k = j + 1; k <= n_; ++k)
                    for (int l = k + 1; l <= n_; ++l) {
                        MbarVector base = separating_sum(i, j, k, l);
                        rows.push_back((base - separating_sum(i, k, j, l)).c);
                        rows.push_back((base - separating_sum(i, l, j, k)).c);
                    }
        return rows;
    }

    // Cotangent-line class at marking i, expanded through the auxiliary
    // markings j,k: the sum of all boundary divisors with i on one side and
    // j,k together on the other.  Any admissible choice of (j,k) gives the
    // same class modulo the relation span.
    MbarVector psi(int i, int j, int k) const {
        if (i < 1 || j < 1 || k < 1 || i > n_ || j > n_ || k > n_ || i == j || i == k || j == k)
            throw input_error("psi expansion needs three distinct markings in range");
        MbarVector v = zero();
        uint32_t bi = 1u << (i - 1), bj = 1u << (j - 1), bk = 1u << (k - 1);
        for (size_t t = 0; t < basis_.size(); ++t) {
            uint32_t m = basis_[t];
            bool fwd = (m & bi) && !(m & bj) && !(m & bk);
            bool rev = !(m & bi) && (m & bj) && (m & bk);
            if (fwd || rev) v.c[t] = 1;
        }
        return v;
    }

    // Default expansion: auxiliary markings are the two smallest != i.
    MbarVector psi(int i) const {
        int j = (i == 1) ? 2 : 1;
        int k = j + 1;
        while (k == i || k == j) ++k;
        return psi(i, j, k);
    }

    std::vector<Rat> reduce(const MbarVector& v) const { return keel_.reduce(v.c); }
    bool is_zero_mod_relations(const MbarVector& v) const { return is_zero_vector(reduce(v)); }

    Rat fcurve_pair(const FCurve& f, const MbarVector& v) const {
        Rat s = 0;
        for (size_t t = 0; t < basis_.size(); ++t)
            if (v.c[t] != 0) s += v.c[t] * fcurve_pair_basis(n_, f, basis_[t]);
        return s;
    }

private:
    int n_;
    std::vector<uint32_t> basis_;
    std::map<uint32_t, size_t> index_;
    RowSpace<Rat> keel_;
    std::vector<FCurve> fcurves_;
};

// Dual-route zero test.  The two checks are independent by construction:
// one reduces against the relation span, the other pairs with every
// F-curve.  A class is reported zero only when both agree.
struct MbarZeroReport {
    bool relation_zero = false;
    bool fcurve_zero = false;
    std::string witness;  // first failing residual entry or pairing, if any

    bool zero_class() const { return relation_zero && fcurve_zero; }
};

inline MbarZeroReport mbar_verify_zero(const MbarSpace& sp, const MbarVector& v) {
    MbarZeroReport rep;
    std::vector<Rat> res = sp.reduce(v);
    rep.relation_zero = is_zero_vector(res);
    if (!rep.relation_zero) {
        for (size_t t = 0; t < res.size(); ++t)
            if (res[t] != 0) {
                rep.witness = "residual " + rat_str(res[t]) + " on " +
                              mbar_side_label(sp.n(), sp.basis()[t]);
                break;
            }
    }
    rep.fcurve_zero = true;
    for (const FCurve& f : sp.fcurves()) {
        Rat p = sp.fcurve_pair(f, v);
        if (p != 0) {
            rep.fcurve_zero = false;
            if (rep.witness.empty())
                rep.witness = "pairing " + rat_str(p) + " with F-curve " +
                              mbar_side_label(sp.n(), f[0]) + " parts";
            break;
        }
    }
    return rep;
}

}  // namespace taut0
