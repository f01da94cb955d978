#include "ltr/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "ltr/binary_io.hpp"
#include "ltr/random.hpp"

namespace ltr {
namespace {

constexpr char kCheckpointMagic[8] = {'L', 'T', 'R', 'C', 'K', 'P', 'T', '\0'};
constexpr std::uint32_t kCheckpointVersion = 1;

struct Adam {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::vector<double> m;
    std::vector<double> v;
    std::size_t t = 0;

    explicit Adam(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

    void step(std::span<double> params, std::span<const double> grad, double lr)
    {
        ++t;
        const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
        const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
        for (std::size_t i = 0; i < params.size(); ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
            params[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + epsilon);
        }
    }
};

}  // namespace

Architecture parse_architecture(std::string_view name)
{
    if (name == "linear") {
        return Architecture::Linear;
    }
    if (name == "mlp") {
        return Architecture::Mlp;
    }
    throw std::invalid_argument("unknown architecture '" + std::string(name) + "' (valid: linear, mlp)");
}

std::string to_string(Architecture arch)
{
    return arch == Architecture::Linear ? "linear" : "mlp";
}

std::size_t ScorerParams::parameter_count(Architecture arch, std::size_t input_dim, std::size_t hidden_dim)
{
    if (arch == Architecture::Linear) {
        return input_dim + 1;
    }
    return hidden_dim * input_dim + 2 * hidden_dim + 1;
}

ScorerParams::ScorerParams(Architecture arch, std::size_t input_dim, std::size_t hidden_dim)
    : m_arch(arch),
      m_input_dim(input_dim),
      m_hidden_dim(arch == Architecture::Linear ? 0 : hidden_dim),
      m_values(parameter_count(arch, input_dim, hidden_dim), 0.0)
{
    if (input_dim == 0) {
        throw std::invalid_argument("scorer input dimension must be >= 1");
    }
    if (arch == Architecture::Mlp && hidden_dim == 0) {
        throw std::invalid_argument("mlp hidden width must be >= 1");
    }
}

ScorerParams ScorerParams::linear(std::vector<double> weights, double bias)
{
    ScorerParams p(Architecture::Linear, weights.size(), 0);
    std::copy(weights.begin(), weights.end(), p.m_values.begin());
    p.m_values.back() = bias;
    return p;
}

ScorerParams ScorerParams::initialize(Architecture arch, std::size_t input_dim, std::size_t hidden_dim,
                                      std::uint64_t seed)
{
    ScorerParams p(arch, input_dim, hidden_dim);
    Rng rng(seed);
    const double in_bound = 1.0 / std::sqrt(static_cast<double>(input_dim));
    if (arch == Architecture::Linear) {
        for (std::size_t i = 0; i < input_dim; ++i) {
            p.m_values[i] = rng.uniform(-in_bound, in_bound);
        }
        return p;
    }
    const auto h = p.m_hidden_dim;
    for (std::size_t i = 0; i < h * input_dim; ++i) {
        p.m_values[i] = rng.uniform(-in_bound, in_bound);
    }
    const double hidden_bound = 1.0 / std::sqrt(static_cast<double>(h));
    const auto w2 = h * input_dim + h;
    for (std::size_t u = 0; u < h; ++u) {
        p.m_values[w2 + u] = rng.uniform(-hidden_bound, hidden_bound);
    }
    return p;
}

bool ScorerParams::all_finite() const
{
    return std::all_of(m_values.begin(), m_values.end(), [](double v) { return std::isfinite(v); });
}

double ScorerParams::score(std::span<const double> x) const
{
    if (x.size() != m_input_dim) {
        throw std::invalid_argument("feature dimension " + std::to_string(x.size())
                                    + " does not match scorer input dimension " + std::to_string(m_input_dim));
    }
    const auto d = m_input_dim;
    if (m_arch == Architecture::Linear) {
        return std::inner_product(x.begin(), x.end(), m_values.begin(), m_values[d]);
    }
    const auto h = m_hidden_dim;
    const double* w1 = m_values.data();
    const double* b1 = w1 + h * d;
    const double* w2 = b1 + h;
    double out = w2[h];
    for (std::size_t u = 0; u < h; ++u) {
        const double pre = std::inner_product(x.begin(), x.end(), w1 + u * d, b1[u]);
        if (pre > 0) {
            out += w2[u] * pre;
        }
    }
    return out;
}

void ScorerParams::accumulate_gradient(std::span<const double> x, double upstream, std::span<double> grad) const
{
    const auto d = m_input_dim;
    if (m_arch == Architecture::Linear) {
        for (std::size_t i = 0; i < d; ++i) {
            grad[i] += upstream * x[i];
        }
        grad[d] += upstream;
        return;
    }
    const auto h = m_hidden_dim;
    const double* w1 = m_values.data();
    const double* b1 = w1 + h * d;
    const double* w2 = b1 + h;
    double* g_w1 = grad.data();
    double* g_b1 = g_w1 + h * d;
    double* g_w2 = g_b1 + h;
    g_w2[h] += upstream;
    for (std::size_t u = 0; u < h; ++u) {
        const double pre = std::inner_product(x.begin(), x.end(), w1 + u * d, b1[u]);
        if (pre <= 0) {
            continue;
        }
        g_w2[u] += upstream * pre;
        const double back = upstream * w2[u];
        g_b1[u] += back;
        for (std::size_t i = 0; i < d; ++i) {
            g_w1[u * d + i] += back * x[i];
        }
    }
}

TrainingError::TrainingError(std::size_t step, const std::string& what)
    : std::runtime_error("step " + std::to_string(step) + ": " + what), m_step(step)
{}

ScorerParams train(std::span<const TrainingList> data, const TrainConfig& config, const TrainHooks& hooks)
{
    if (data.empty()) {
        throw DataError("no training lists");
    }
    if (config.list_size == 0 || config.batch_size == 0 || config.checkpoint_every == 0) {
        throw std::invalid_argument("list_size, batch_size and checkpoint_every must be positive");
    }
    if (!(config.learning_rate > 0)) {
        throw std::invalid_argument("learning rate must be positive");
    }
    const auto dim = data.front().items.empty() ? 0 : data.front().items.front().features.size();
    for (const auto& list : data) {
        if (list.items.size() != config.list_size) {
            throw DataError("training list for '" + list.query_key + "' has " + std::to_string(list.items.size())
                            + " items, expected " + std::to_string(config.list_size));
        }
        for (const auto& item : list.items) {
            if (item.features.size() != dim) {
                throw DataError("inconsistent feature dimension in training list for '" + list.query_key + "'");
            }
        }
    }

    auto params = ScorerParams::initialize(config.architecture, dim, config.hidden_dim, derive_seed(config.seed, 0));
    if (config.steps == 0) {
        if (hooks.on_checkpoint) {
            hooks.on_checkpoint(0, params);
        }
        return params;
    }

    Rng order_rng(derive_seed(config.seed, 1));
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    order_rng.shuffle(order);
    std::size_t cursor = 0;

    Adam adam(params.values().size());
    std::vector<double> grad(params.values().size());
    ListBatch batch{Matrix(config.batch_size, config.list_size), Matrix(config.batch_size, config.list_size),
                    Mask(config.batch_size, config.list_size)};
    std::vector<const TrainingList*> lists(config.batch_size);

    for (std::size_t step = 1; step <= config.steps; ++step) {
        for (std::size_t r = 0; r < config.batch_size; ++r) {
            if (cursor == order.size()) {
                order_rng.shuffle(order);
                cursor = 0;
            }
            lists[r] = &data[order[cursor++]];
            for (std::size_t c = 0; c < config.list_size; ++c) {
                const auto& item = lists[r]->items[c];
                batch.mask(r, c) = item.real ? 1 : 0;
                batch.labels(r, c) = item.real ? item.label : 0.0;
                batch.scores(r, c) = item.real ? params.score(item.features) : 0.0;
            }
        }

        const auto result = compute_loss(config.loss, batch);
        if (!std::isfinite(result.loss)) {
            throw TrainingError(step, "loss is not finite");
        }

        std::fill(grad.begin(), grad.end(), 0.0);
        for (std::size_t r = 0; r < config.batch_size; ++r) {
            for (std::size_t c = 0; c < config.list_size; ++c) {
                if (batch.mask(r, c) && result.grad(r, c) != 0.0) {
                    params.accumulate_gradient(lists[r]->items[c].features, result.grad(r, c), grad);
                }
            }
        }
        adam.step(params.values(), grad, config.learning_rate);
        if (!params.all_finite()) {
            throw TrainingError(step, "parameters became non-finite");
        }

        if (hooks.on_step) {
            hooks.on_step(step, result.loss);
        }
        if (hooks.on_checkpoint && (step % config.checkpoint_every == 0 || step == config.steps)) {
            hooks.on_checkpoint(step, params);
        }
    }
    return params;
}

RankedRun rerank(const ScorerParams& params, std::span<const QueryGroup> groups)
{
    RankedRun run;
    for (const auto& group : groups) {
        group.validate();
        if (!group.items.empty() && group.feature_dim() != params.input_dim()) {
            throw DataError("query " + group.query_id + ": feature dimension " + std::to_string(group.feature_dim())
                            + " does not match scorer input dimension " + std::to_string(params.input_dim()));
        }
        RankedRun::List scored;
        scored.reserve(group.items.size());
        for (const auto& item : group.items) {
            scored.push_back({item.doc_id, params.score(item.features)});
        }
        if (run.find(group.query_id) != nullptr) {
            throw DataError("query " + group.query_id + " supplied twice");
        }
        run.set(group.query_id, std::move(scored));
    }
    return run;
}

void save_checkpoint(const ScorerParams& params, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write checkpoint " + path.string());
    }
    out.write(kCheckpointMagic, sizeof kCheckpointMagic);
    binary::write_le<std::uint32_t>(out, kCheckpointVersion);
    binary::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(params.architecture()));
    binary::write_le<std::uint64_t>(out, params.input_dim());
    binary::write_le<std::uint64_t>(out, params.hidden_dim());
    binary::write_le<std::uint64_t>(out, params.values().size());
    for (double v : params.values()) {
        binary::write_le<double>(out, v);
    }
    if (!out) {
        throw DataError("failed writing checkpoint " + path.string());
    }
}

ScorerParams load_checkpoint(const std::filesystem::path& path, std::optional<std::size_t> expected_dim)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open checkpoint " + path.string());
    }
    char magic[sizeof kCheckpointMagic];
    if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + sizeof magic, kCheckpointMagic)) {
        throw DataError(path.string() + " is not a scorer checkpoint");
    }
    if (auto version = binary::read_le<std::uint32_t>(in); version != kCheckpointVersion) {
        throw DataError("unsupported checkpoint version " + std::to_string(version));
    }
    const auto arch_tag = binary::read_le<std::uint32_t>(in);
    if (arch_tag > static_cast<std::uint32_t>(Architecture::Mlp)) {
        throw DataError("unknown architecture tag " + std::to_string(arch_tag) + " in checkpoint");
    }
    const auto arch = static_cast<Architecture>(arch_tag);
    const auto input_dim = binary::read_le<std::uint64_t>(in);
    const auto hidden_dim = binary::read_le<std::uint64_t>(in);
    const auto count = binary::read_le<std::uint64_t>(in);
    if (expected_dim && *expected_dim != input_dim) {
        throw DataError("checkpoint input dimension " + std::to_string(input_dim) + " does not match data dimension "
                        + std::to_string(*expected_dim));
    }
    ScorerParams params;
    try {
        params = ScorerParams(arch, input_dim, hidden_dim);
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("corrupt checkpoint: ") + e.what());
    }
    if (count != params.values().size()) {
        throw DataError("checkpoint parameter count does not match its dimensions");
    }
    for (auto& v : params.values()) {
        v = binary::read_le<double>(in);
    }
    return params;
}

}  // namespace ltr
