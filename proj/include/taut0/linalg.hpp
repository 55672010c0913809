#pragma once

#include <cstddef>
#include <vector>

#include "taut0/rational.hpp"

namespace taut0 {

// Incremental reduced row echelon form over an exact field.
//
// Rows are kept fully reduced (each pivot is 1 and is the only nonzero entry
// in its column) with pivot columns strictly increasing.  Pivots are always
// chosen at the smallest available column index, so the stored basis, and
// hence every residual, is deterministic and independent of insertion order
// of the spanning set.  Intended for the small dense systems that show up
// here (dozens of columns); no effort is made to be clever about sparsity.
template <typename T>
class RowSpace {
public:
    explicit RowSpace(size_t cols) : cols_(cols) {}

    size_t cols() const { return cols_; }
    size_t rank() const { return rows_.size(); }

    // Returns v minus its projection onto the span; zero iff v is in the span.
    std::vector<T> reduce(std::vector<T> v) const {
        for (size_t r = 0; r < rows_.size(); ++r) {
            const T& c = v[pivot_[r]];
            if (c != 0) {
                T f = c;  // copy: v mutates below
                for (size_t j = pivot_[r]; j < cols_; ++j) v[j] -= f * rows_[r][j];
            }
        }
        return v;
    }

    // Adds v to the spanning set.  Returns true if the rank grew.
    bool insert(std::vector<T> v) {
        v = reduce(std::move(v));
        size_t p = 0;
        while (p < cols_ && v[p] == 0) ++p;
        if (p == cols_) return false;
        T inv = v[p];
        for (size_t j = p; j < cols_; ++j) v[j] /= inv;
        // Clear column p in existing rows, then keep rows sorted by pivot.
        for (size_t r = 0; r < rows_.size(); ++r) {
            const T c = rows_[r][p];
            if (c != 0)
                for (size_t j = p; j < cols_; ++j) rows_[r][j] -= c * v[j];
        }
        size_t at = 0;
        while (at < pivot_.size() && pivot_[at] < p) ++at;
        rows_.insert(rows_.begin() + at, std::move(v));
        pivot_.insert(pivot_.begin() + at, p);
        return true;
    }

    bool contains(std::vector<T> v) const {
        v = reduce(std::move(v));
        for (const T& x : v)
            if (x != 0) return false;
        return true;
    }

private:
    size_t cols_;
    std::vector<std::vector<T>> rows_;
    std::vector<size_t> pivot_;
};

inline bool is_zero_vector(const std::vector<Rat>& v) {
    for (const Rat& x : v)
        if (x != 0) return false;
    return true;
}

}  // namespace taut0
