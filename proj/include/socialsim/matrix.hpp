#pragma once

#include <cstddef>
#include <vector>

#include "socialsim/errors.hpp"

namespace socialsim {

// Dense row-major matrix of doubles.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0)
        : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

    static Matrix from_rows(const std::vector<std::vector<double>>& rows_in) {
        Matrix m;
        m.rows = static_cast<int>(rows_in.size());
        m.cols = rows_in.empty() ? 0 : static_cast<int>(rows_in.front().size());
        m.data.reserve(static_cast<std::size_t>(m.rows) * m.cols);
        for (const auto& row : rows_in) {
            if (static_cast<int>(row.size()) != m.cols)
                throw ShapeMismatchError("matrix rows have unequal lengths");
            m.data.insert(m.data.end(), row.begin(), row.end());
        }
        return m;
    }

    static Matrix identity(int n) {
        Matrix m(n, n, 0.0);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(int r, int c) {
        return data[static_cast<std::size_t>(r) * cols + c];
    }
    double operator()(int r, int c) const {
        return data[static_cast<std::size_t>(r) * cols + c];
    }
};

}  // namespace socialsim
