#ifndef TIH_INT_MATRIX_HPP
#define TIH_INT_MATRIX_HPP

#include <map>
#include <vector>

#include "tih/numbers.hpp"

namespace tih {

// Sparse integer matrix with arbitrary-precision entries.
// Rows are kept as ordered column->value maps; zero entries are absent.
class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {}

    static IntMatrix identity(int n) {
        IntMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.set(i, i, 1);
        return m;
    }
    static IntMatrix from_rows(const std::vector<std::vector<Int>>& rows) {
        int r = static_cast<int>(rows.size());
        int c = r ? static_cast<int>(rows[0].size()) : 0;
        IntMatrix m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                if (rows[i][j] != 0) m.data_[i][j] = rows[i][j];
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int get(int i, int j) const {
        auto it = data_[i].find(j);
        return it == data_[i].end() ? Int(0) : it->second;
    }
    void set(int i, int j, Int v) {
        if (v == 0)
            data_[i].erase(j);
        else
            data_[i][j] = std::move(v);
    }
    void add_to(int i, int j, const Int& v) {
        if (v == 0) return;
        auto [it, inserted] = data_[i].emplace(j, v);
        if (!inserted) {
            it->second += v;
            if (it->second == 0) data_[i].erase(it);
        }
    }

    const std::map<int, Int>& row(int i) const { return data_[i]; }
    std::map<int, Int>& row_mut(int i) { return data_[i]; }
    void clear_row(int i) { data_[i].clear(); }

    size_t nnz() const {
        size_t n = 0;
        for (const auto& r : data_) n += r.size();
        return n;
    }
    bool is_zero() const { return nnz() == 0; }

    void swap_rows(int i, int j) { std::swap(data_[i], data_[j]); }
    void negate_row(int i) {
        for (auto& [c, v] : data_[i]) v = -v;
    }
    // row_i += c * row_j
    void add_row_multiple(int i, int j, const Int& c) {
        if (c == 0) return;
        for (const auto& [col, v] : data_[j]) add_to(i, col, c * v);
    }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[i]) t.data_[j][i] = v;
        return t;
    }

    IntMatrix operator*(const IntMatrix& other) const {
        IntMatrix out(rows_, other.cols_);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [k, v] : data_[i])
                for (const auto& [j, w] : other.data_[k]) out.add_to(i, j, v * w);
        return out;
    }
    bool operator==(const IntMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

    std::vector<Int> dense_row(int i) const {
        std::vector<Int> out(cols_, 0);
        for (const auto& [j, v] : data_[i]) out[j] = v;
        return out;
    }

    // Appends a row given as a dense vector.
    void push_row(const std::vector<Int>& r) {
        data_.emplace_back();
        for (int j = 0; j < static_cast<int>(r.size()); ++j)
            if (r[j] != 0) data_.back()[j] = r[j];
        ++rows_;
    }

private:
    int rows_, cols_;
    std::vector<std::map<int, Int>> data_;
};

}  // namespace tih

#endif
