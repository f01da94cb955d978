#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ltr/core.hpp"
#include "ltr/data.hpp"
#include "ltr/losses.hpp"

namespace ltr {

enum class Architecture : std::uint32_t { Linear = 0, Mlp = 1 };

[[nodiscard]] Architecture parse_architecture(std::string_view name);
[[nodiscard]] std::string to_string(Architecture arch);

/// Parameters of the ranking head, stored flat so the optimizer can treat them uniformly.
///
/// Layout of `values`:
///   linear: w[d], b
///   mlp:    W1[h x d] (row per hidden unit), b1[h], w2[h], b2
class ScorerParams {
  public:
    ScorerParams() = default;
    ScorerParams(Architecture arch, std::size_t input_dim, std::size_t hidden_dim);

    /// Linear scorer w.x + b.
    static ScorerParams linear(std::vector<double> weights, double bias);

    /// Seeded uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases.
    static ScorerParams initialize(Architecture arch, std::size_t input_dim, std::size_t hidden_dim,
                                   std::uint64_t seed);

    [[nodiscard]] Architecture architecture() const noexcept { return m_arch; }
    [[nodiscard]] std::size_t input_dim() const noexcept { return m_input_dim; }
    [[nodiscard]] std::size_t hidden_dim() const noexcept { return m_hidden_dim; }
    [[nodiscard]] std::span<const double> values() const noexcept { return m_values; }
    [[nodiscard]] std::span<double> values() noexcept { return m_values; }
    [[nodiscard]] bool all_finite() const;

    /// Throws std::invalid_argument on a dimension mismatch.
    [[nodiscard]] double score(std::span<const double> features) const;

    /// Adds upstream * d score / d params into `grad` (same layout as values()).
    void accumulate_gradient(std::span<const double> features, double upstream, std::span<double> grad) const;

    bool operator==(const ScorerParams&) const = default;

  private:
    static std::size_t parameter_count(Architecture arch, std::size_t input_dim, std::size_t hidden_dim);

    Architecture m_arch = Architecture::Linear;
    std::size_t m_input_dim = 0;
    std::size_t m_hidden_dim = 0;
    std::vector<double> m_values;
};

[[nodiscard]] inline double score(const ScorerParams& params, std::span<const double> features)
{
    return params.score(features);
}

struct TrainConfig {
    LossKind loss = LossKind::ListwiseSoftmax;
    Architecture architecture = Architecture::Linear;
    std::size_t hidden_dim = 64;
    std::size_t list_size = 12;
    std::size_t batch_size = 32;
    std::size_t steps = 1000;
    double learning_rate = 1e-3;
    std::uint64_t seed = 0;
    std::size_t checkpoint_every = 50000;
};

struct TrainHooks {
    std::function<void(std::size_t step, double loss)> on_step;
    std::function<void(std::size_t step, const ScorerParams& params)> on_checkpoint;
};

/// Non-finite loss or parameters during training.
class TrainingError : public std::runtime_error {
  public:
    TrainingError(std::size_t step, const std::string& what);

    [[nodiscard]] std::size_t step() const noexcept { return m_step; }

  private:
    std::size_t m_step;
};

/// Adam on the configured loss. Each step consumes batch_size lists of
/// list_size items, cycling through `data` in a seeded order reshuffled every
/// pass. on_checkpoint fires every checkpoint_every steps and once at the end.
[[nodiscard]] ScorerParams train(std::span<const TrainingList> data, const TrainConfig& config,
                                 const TrainHooks& hooks = {});

/// Scores every document of every group. Throws DataError naming the query on a
/// feature dimension mismatch.
[[nodiscard]] RankedRun rerank(const ScorerParams& params, std::span<const QueryGroup> groups);

/// Binary layout (little-endian): magic "LTRCKPT\0", u32 version (1), u32
/// architecture, u64 input_dim, u64 hidden_dim, u64 value count, f64 values.
void save_checkpoint(const ScorerParams& params, const std::filesystem::path& path);

/// Rejects unknown versions and, when `expected_dim` is given, a different input dimension.
[[nodiscard]] ScorerParams load_checkpoint(const std::filesystem::path& path,
                                           std::optional<std::size_t> expected_dim = std::nullopt);

}  // namespace ltr
