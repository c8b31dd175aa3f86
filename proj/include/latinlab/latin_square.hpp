#pragma once

#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "latinlab/cycles.hpp"
#include "latinlab/error.hpp"

namespace latinlab {

/// A k x n Latin rectangle: every row is a permutation of the n symbols and
/// no column repeats a symbol. Symbols are 0..n-1 here; the text and JSON
/// formats use 1..n.
///
/// Two lookup tables are kept in step with the cells:
///   column_of(i, s) - the column holding s in row i (total, rows are permutations)
///   row_of(x, s)    - the row holding s in column x, or -1 when k < n and s is absent
class LatinRectangle {
public:
    LatinRectangle() = default;

    explicit LatinRectangle(const std::vector<std::vector<int>>& rows) {
        const int k = static_cast<int>(rows.size());
        const int n = k == 0 ? 0 : static_cast<int>(rows.front().size());
        std::vector<int> cells;
        cells.reserve(static_cast<std::size_t>(k) * static_cast<std::size_t>(n));
        for (int i = 0; i < k; ++i) {
            const auto& r = rows[static_cast<std::size_t>(i)];
            if (static_cast<int>(r.size()) != n) {
                throw ShapeError("ragged row: expected " + std::to_string(n) + " entries, found " + std::to_string(r.size()),
                                 i + 1, std::min(static_cast<int>(r.size()), n) + 1);
            }
            cells.insert(cells.end(), r.begin(), r.end());
        }
        *this = from_cells(k, n, std::move(cells));
    }

    /// Validating constructor from row-major cells.
    static LatinRectangle from_cells(int k, int n, std::vector<int> cells) {
        if (k < 1 || n < 1) throw ShapeError("empty array", 1, 1);
        if (k > n) throw ShapeError("more rows (" + std::to_string(k) + ") than symbols (" + std::to_string(n) + ")", k, 1);
        if (cells.size() != static_cast<std::size_t>(k) * static_cast<std::size_t>(n)) throw ShapeError("cell count mismatch", 1, 1);
        LatinRectangle r;
        r.k_ = k;
        r.n_ = n;
        r.cells_ = std::move(cells);
        r.col_of_.assign(static_cast<std::size_t>(k) * static_cast<std::size_t>(n), -1);
        r.row_of_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), -1);
        for (int i = 0; i < k; ++i) {
            for (int x = 0; x < n; ++x) {
                const int s = r.cells_[r.cell_index(i, x)];
                if (s < 0 || s >= n) throw SymbolError("symbol " + std::to_string(s + 1) + " outside 1.." + std::to_string(n), i + 1, x + 1);
                int& c = r.col_of_[r.col_index(i, s)];
                if (c != -1) throw RepeatError("symbol " + std::to_string(s + 1) + " repeated in row", i + 1, x + 1);
                c = x;
                int& w = r.row_of_[r.row_index(x, s)];
                if (w != -1) throw RepeatError("symbol " + std::to_string(s + 1) + " repeated in column", i + 1, x + 1);
                w = i;
            }
        }
        return r;
    }

    int rows() const noexcept { return k_; }
    int order() const noexcept { return n_; }
    bool is_square() const noexcept { return k_ == n_; }

    int at(int i, int x) const { return cells_[cell_index(i, x)]; }
    std::span<const int> row(int i) const { return {cells_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)}; }
    const std::vector<int>& cells() const noexcept { return cells_; }

    int column_of(int i, int symbol) const { return col_of_[col_index(i, symbol)]; }
    int row_of(int x, int symbol) const { return row_of_[row_index(x, symbol)]; }

    std::vector<std::vector<int>> to_rows() const {
        std::vector<std::vector<int>> out;
        for (int i = 0; i < k_; ++i) out.emplace_back(row(i).begin(), row(i).end());
        return out;
    }

    /// Compact byte key for hashing and set membership (n <= 255).
    std::string key() const {
        std::string s(cells_.size(), '\0');
        for (std::size_t c = 0; c < cells_.size(); ++c) s[c] = static_cast<char>(cells_[c]);
        return s;
    }

    void check_row(int i) const {
        if (i < 0 || i >= k_) throw IndexError("row " + std::to_string(i + 1) + " outside 1.." + std::to_string(k_));
    }
    void check_column(int x) const {
        if (x < 0 || x >= n_) throw IndexError("column " + std::to_string(x + 1) + " outside 1.." + std::to_string(n_));
    }

    /// Swaps the contents of rows i and j in the given columns. The swap is
    /// applied only if the result is still a Latin rectangle, which holds
    /// exactly when both rows carry the same symbol set on those columns.
    bool exchange_rows(int i, int j, std::span<const int> columns) {
        check_row(i);
        check_row(j);
        std::vector<int> balance(static_cast<std::size_t>(n_), 0);
        for (int x : columns) {
            check_column(x);
            ++balance[static_cast<std::size_t>(at(i, x))];
            --balance[static_cast<std::size_t>(at(j, x))];
        }
        for (int b : balance) {
            if (b != 0) return false;
        }
        for (int x : columns) {
            const int a = at(i, x);
            const int b = at(j, x);
            put(i, x, b);
            put(j, x, a);
        }
        return true;
    }

    /// Swaps the entries of columns x and y in the given rows, if the result
    /// keeps both columns repeat-free.
    bool exchange_columns(int x, int y, std::span<const int> rows) {
        check_column(x);
        check_column(y);
        std::vector<char> in_set(static_cast<std::size_t>(k_), 0);
        for (int r : rows) {
            check_row(r);
            in_set[static_cast<std::size_t>(r)] = 1;
        }
        std::vector<char> seen_x(static_cast<std::size_t>(n_), 0), seen_y(static_cast<std::size_t>(n_), 0);
        for (int r = 0; r < k_; ++r) {
            const bool sw = in_set[static_cast<std::size_t>(r)] != 0;
            const int nx = sw ? at(r, y) : at(r, x);
            const int ny = sw ? at(r, x) : at(r, y);
            if (seen_x[static_cast<std::size_t>(nx)]++ || seen_y[static_cast<std::size_t>(ny)]++) return false;
        }
        for (int r : rows) {
            const int a = at(r, x);
            const int b = at(r, y);
            put(r, x, b);
            put(r, y, a);
        }
        return true;
    }

    friend bool operator==(const LatinRectangle& a, const LatinRectangle& b) {
        return a.k_ == b.k_ && a.n_ == b.n_ && a.cells_ == b.cells_;
    }

    /// Recomputes both lookup tables from the cells and compares.
    bool lookups_consistent() const {
        for (int i = 0; i < k_; ++i) {
            for (int x = 0; x < n_; ++x) {
                const int s = at(i, x);
                if (column_of(i, s) != x || row_of(x, s) != i) return false;
            }
        }
        for (int x = 0; x < n_; ++x) {
            for (int s = 0; s < n_; ++s) {
                const int r = row_of(x, s);
                if (r != -1 && (r >= k_ || at(r, x) != s)) return false;
            }
        }
        return true;
    }

protected:
    std::size_t cell_index(int i, int x) const noexcept { return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(x); }
    std::size_t col_index(int i, int s) const noexcept { return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(s); }
    std::size_t row_index(int x, int s) const noexcept { return static_cast<std::size_t>(x) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(s); }

private:
    // Writes one cell; the stale row_of entry is cleared only if it still
    // points at this cell, so paired writes inside a swap stay consistent.
    void put(int i, int x, int s) {
        const int old = at(i, x);
        if (row_of_[row_index(x, old)] == i) row_of_[row_index(x, old)] = -1;
        cells_[cell_index(i, x)] = s;
        col_of_[col_index(i, s)] = x;
        row_of_[row_index(x, s)] = i;
    }

    int k_ = 0;
    int n_ = 0;
    std::vector<int> cells_;
    std::vector<int> col_of_;
    std::vector<int> row_of_;
};

/// A Latin rectangle with k = n; every column is then a permutation too.
class LatinSquare : public LatinRectangle {
public:
    LatinSquare() = default;

    explicit LatinSquare(LatinRectangle r) : LatinRectangle(std::move(r)) {
        if (!is_square()) {
            throw ShapeError("expected a square, got " + std::to_string(rows()) + " rows of " + std::to_string(order()), rows(), 1);
        }
    }

    explicit LatinSquare(const std::vector<std::vector<int>>& rows) : LatinSquare(LatinRectangle(rows)) {}

    /// L[i][x] = (i + x) mod n.
    static LatinSquare cyclic(int n) {
        std::vector<int> cells(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            for (int x = 0; x < n; ++x) cells[static_cast<std::size_t>(i * n + x)] = (i + x) % n;
        }
        return LatinSquare(LatinRectangle::from_cells(n, n, std::move(cells)));
    }

    /// Square whose row r is row perm[r] of `source`.
    static LatinSquare with_rows_permuted(const LatinSquare& source, std::span<const int> perm) {
        const int n = source.order();
        std::vector<int> cells;
        cells.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
        for (int r = 0; r < n; ++r) {
            const auto src = source.row(perm[static_cast<std::size_t>(r)]);
            cells.insert(cells.end(), src.begin(), src.end());
        }
        return LatinSquare(LatinRectangle::from_cells(n, n, std::move(cells)));
    }

    LatinSquare transposed() const {
        const int n = order();
        std::vector<int> cells(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            for (int x = 0; x < n; ++x) cells[static_cast<std::size_t>(x * n + i)] = at(i, x);
        }
        return LatinSquare(LatinRectangle::from_cells(n, n, std::move(cells)));
    }

    /// Applies symbol s -> rename[s] everywhere.
    LatinSquare with_symbols_renamed(std::span<const int> rename) const {
        std::vector<int> cells = this->cells();
        for (int& s : cells) s = rename[static_cast<std::size_t>(s)];
        return LatinSquare(LatinRectangle::from_cells(order(), order(), std::move(cells)));
    }

    bool columns_are_permutations() const {
        for (int x = 0; x < order(); ++x) {
            for (int s = 0; s < order(); ++s) {
                if (row_of(x, s) < 0) return false;
            }
        }
        return true;
    }
};

/// sigma_{i,j}: column x maps to the column y with L[i][y] = L[j][x].
inline CycleStructure sigma_row_pair(const LatinRectangle& L, int i, int j) {
    L.check_row(i);
    L.check_row(j);
    if (i == j) throw IndexError("row pair needs two distinct rows");
    std::vector<int> perm(static_cast<std::size_t>(L.order()));
    for (int x = 0; x < L.order(); ++x) perm[static_cast<std::size_t>(x)] = L.column_of(i, L.at(j, x));
    return CycleStructure::of(std::move(perm));
}

/// tau_{x,y}: row i maps to the row j with L[j][x] = L[i][y].
inline CycleStructure tau_column_pair(const LatinSquare& L, int x, int y) {
    L.check_column(x);
    L.check_column(y);
    if (x == y) throw IndexError("column pair needs two distinct columns");
    std::vector<int> perm(static_cast<std::size_t>(L.order()));
    for (int i = 0; i < L.rows(); ++i) perm[static_cast<std::size_t>(i)] = L.row_of(x, L.at(i, y));
    return CycleStructure::of(std::move(perm));
}

} // namespace latinlab
