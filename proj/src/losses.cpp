#include "ltr/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ltr {
namespace {

constexpr double kProbFloor = 1e-12;

void check_shape(const ListBatch& batch)
{
    const auto rows = batch.scores.rows();
    const auto cols = batch.scores.cols();
    if (!batch.labels.same_shape(rows, cols) || !batch.mask.same_shape(rows, cols)) {
        throw std::invalid_argument("ListBatch: scores, labels and mask must share one shape");
    }
}

double sigmoid(double x)
{
    if (x >= 0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// log(1 + exp(-delta)) without overflow
double logistic_loss(double delta)
{
    return std::log1p(std::exp(-std::abs(delta))) + std::max(0.0, -delta);
}

}  // namespace

LossKind parse_loss_kind(std::string_view name)
{
    if (name == "pointwise") {
        return LossKind::PointwiseSigmoidCE;
    }
    if (name == "pairwise") {
        return LossKind::PairwiseLogistic;
    }
    if (name == "softmax") {
        return LossKind::ListwiseSoftmax;
    }
    throw std::invalid_argument("unknown loss '" + std::string(name)
                                + "' (valid: pointwise, pairwise, softmax)");
}

std::string to_string(LossKind kind)
{
    switch (kind) {
    case LossKind::PointwiseSigmoidCE: return "pointwise";
    case LossKind::PairwiseLogistic: return "pairwise";
    case LossKind::ListwiseSoftmax: return "softmax";
    }
    return "unknown";
}

ListBatch ListBatch::unmasked(Matrix scores, Matrix labels)
{
    Mask mask(scores.rows(), scores.cols(), 1);
    return {std::move(scores), std::move(labels), std::move(mask)};
}

LossResult pointwise_sigmoid_ce(const ListBatch& batch)
{
    check_shape(batch);
    const auto rows = batch.scores.rows();
    const auto cols = batch.scores.cols();
    LossResult out{0.0, Matrix(rows, cols)};

    std::size_t count = 0;
    for (auto m : batch.mask.data()) {
        count += m ? 1 : 0;
    }
    if (count == 0) {
        return out;
    }
    const double inv = 1.0 / static_cast<double>(count);

    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (!batch.mask(i, j)) {
                continue;
            }
            const double y = batch.labels(i, j) > 0 ? 1.0 : 0.0;
            const double p = sigmoid(batch.scores(i, j));
            const double pc = std::clamp(p, kProbFloor, 1.0 - kProbFloor);
            out.loss -= y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc);
            out.grad(i, j) = (p - y) * inv;
        }
    }
    out.loss *= inv;
    return out;
}

LossResult pairwise_logistic(const ListBatch& batch)
{
    check_shape(batch);
    const auto rows = batch.scores.rows();
    const auto cols = batch.scores.cols();
    LossResult out{0.0, Matrix(rows, cols)};

    std::size_t pairs = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            for (std::size_t k = 0; k < cols; ++k) {
                if (batch.mask(i, j) && batch.mask(i, k) && batch.labels(i, j) > batch.labels(i, k)) {
                    ++pairs;
                }
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(std::max<std::size_t>(pairs, 1));

    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (!batch.mask(i, j)) {
                continue;
            }
            for (std::size_t k = 0; k < cols; ++k) {
                if (!batch.mask(i, k) || !(batch.labels(i, j) > batch.labels(i, k))) {
                    continue;
                }
                const double delta = batch.scores(i, j) - batch.scores(i, k);
                out.loss += logistic_loss(delta);
                // d/d delta of log(1 + exp(-delta)) = -sigmoid(-delta)
                const double g = sigmoid(-delta) * inv;
                out.grad(i, j) -= g;
                out.grad(i, k) += g;
            }
        }
    }
    out.loss *= inv;
    return out;
}

LossResult listwise_softmax(const ListBatch& batch)
{
    check_shape(batch);
    const auto rows = batch.scores.rows();
    const auto cols = batch.scores.cols();
    LossResult out{0.0, Matrix(rows, cols)};

    std::vector<std::size_t> contributing;
    for (std::size_t i = 0; i < rows; ++i) {
        double mass = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            if (batch.mask(i, j)) {
                mass += batch.labels(i, j);
            }
        }
        if (mass > 0) {
            contributing.push_back(i);
        }
    }
    if (contributing.empty()) {
        return out;
    }
    const double inv_lists = 1.0 / static_cast<double>(contributing.size());

    std::vector<double> prob(cols);
    for (auto i : contributing) {
        double max_score = -std::numeric_limits<double>::infinity();
        double mass = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            if (batch.mask(i, j)) {
                max_score = std::max(max_score, batch.scores(i, j));
                mass += batch.labels(i, j);
            }
        }
        double denom = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            prob[j] = batch.mask(i, j) ? std::exp(batch.scores(i, j) - max_score) : 0.0;
            denom += prob[j];
        }
        const double log_denom = std::log(denom);
        double list_loss = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            if (!batch.mask(i, j)) {
                continue;
            }
            const double target = batch.labels(i, j) / mass;
            const double log_prob = batch.scores(i, j) - max_score - log_denom;
            list_loss -= target * log_prob;
            out.grad(i, j) = (prob[j] / denom - target) * inv_lists;
        }
        out.loss += list_loss;
    }
    out.loss *= inv_lists;
    return out;
}

LossResult compute_loss(LossKind kind, const ListBatch& batch)
{
    switch (kind) {
    case LossKind::PointwiseSigmoidCE: return pointwise_sigmoid_ce(batch);
    case LossKind::PairwiseLogistic: return pairwise_logistic(batch);
    case LossKind::ListwiseSoftmax: return listwise_softmax(batch);
    }
    throw std::invalid_argument("unhandled loss kind");
}

}  // namespace ltr
