#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ltr {

/// Row-major dense matrix, one row per list.
template <typename T>
class Grid {
  public:
    Grid() = default;
    Grid(std::size_t rows, std::size_t cols, T fill = T{})
        : m_rows(rows), m_cols(cols), m_data(rows * cols, fill)
    {}

    [[nodiscard]] std::size_t rows() const noexcept { return m_rows; }
    [[nodiscard]] std::size_t cols() const noexcept { return m_cols; }

    T& operator()(std::size_t r, std::size_t c) { return m_data[r * m_cols + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return m_data[r * m_cols + c]; }

    [[nodiscard]] std::vector<T>& data() noexcept { return m_data; }
    [[nodiscard]] const std::vector<T>& data() const noexcept { return m_data; }

    [[nodiscard]] bool same_shape(std::size_t rows, std::size_t cols) const noexcept
    {
        return m_rows == rows && m_cols == cols;
    }

  private:
    std::size_t m_rows = 0;
    std::size_t m_cols = 0;
    std::vector<T> m_data;
};

using Matrix = Grid<double>;
using Mask = Grid<std::uint8_t>;

enum class LossKind { PointwiseSigmoidCE, PairwiseLogistic, ListwiseSoftmax };

/// Accepts "pointwise", "pairwise" or "softmax"; throws std::invalid_argument otherwise.
[[nodiscard]] LossKind parse_loss_kind(std::string_view name);
[[nodiscard]] std::string to_string(LossKind kind);

/// Scores, labels and mask for a batch of fixed-size lists. A mask value of 0
/// marks padding, which contributes nothing to loss or gradient.
struct ListBatch {
    Matrix scores;
    Matrix labels;
    Mask mask;

    /// All-true mask of the scores' shape.
    static ListBatch unmasked(Matrix scores, Matrix labels);
};

struct LossResult {
    double loss = 0.0;
    Matrix grad;  ///< d loss / d score, same shape as the batch
};

/// Mean sigmoid cross-entropy over unmasked entries. Labels are binarized (> 0 is relevant).
[[nodiscard]] LossResult pointwise_sigmoid_ce(const ListBatch& batch);

/// Mean of log(1 + exp(-(s_j - s_k))) over all unmasked pairs with y_j > y_k in the same list.
[[nodiscard]] LossResult pairwise_logistic(const ListBatch& batch);

/// Softmax cross-entropy against labels normalized per list, averaged over lists
/// with positive label mass. Lists without label mass get zero loss and gradient.
[[nodiscard]] LossResult listwise_softmax(const ListBatch& batch);

[[nodiscard]] LossResult compute_loss(LossKind kind, const ListBatch& batch);

}  // namespace ltr
