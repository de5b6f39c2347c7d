#include "spce/engine.hpp"

#include "spce/error.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <numbers>
#include <thread>

namespace spce {

namespace {

/// Runs body(0) .. body(runs-1), striding run indices across workers.
/// Output slots are owned per index, so scheduling never affects results;
/// the first failing run index (in run order) is the one rethrown.
void for_each_run(std::int64_t runs, int workers,
                  const std::function<void(std::int64_t)>& body) {
    if (runs <= 0) {
        return;
    }
    int w = workers < 1 ? 1 : static_cast<int>(std::min<std::int64_t>(workers, runs));
    if (w == 1) {
        for (std::int64_t j = 0; j < runs; ++j) {
            body(j);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(runs));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(w));
    for (int t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            for (std::int64_t j = t; j < runs; j += w) {
                try {
                    body(j);
                } catch (...) {
                    errors[static_cast<std::size_t>(j)] = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    for (const auto& err : errors) {
        if (err) {
            std::rethrow_exception(err);
        }
    }
}

bool analyzers_match(const AnalyzerSpec& x, const AnalyzerSpec& y) {
    return x.orientation() == y.orientation() && x.kind() == y.kind() &&
           x.epsilon() == y.epsilon() && x.efficiency() == y.efficiency();
}

bool is_sharp_unit_efficiency(const AnalyzerSpec& spec) {
    bool sharp = spec.kind() == SmearingKind::Delta || spec.epsilon() == 0.0;
    return sharp && spec.efficiency() >= 1.0;
}

/// Mean and stderr of a sample of +/-1 products given their sum and count.
void pm1_mean_stderr(std::int64_t sum, std::int64_t count, double& mean,
                     double& stderr_out) {
    mean = static_cast<double>(sum) / static_cast<double>(count);
    stderr_out = count > 1
        ? std::sqrt(std::max(0.0, 1.0 - mean * mean) /
                    static_cast<double>(count - 1))
        : 0.0;
}

const SpinFunctionModel& require_counterfactual(const PairOutcomeSampler& model,
                                                const std::array<SettingPair, 4>& pairs) {
    const auto* spin = dynamic_cast<const SpinFunctionModel*>(&model);
    if (spin == nullptr) {
        throw CounterfactualUnsupportedError(
            "shared-sample evaluation needs a deterministic spin-function model; '" +
            model.name() + "' has no per-lambda outcomes to reuse across settings");
    }
    for (const SettingPair& pair : pairs) {
        if (!is_sharp_unit_efficiency(pair.first) ||
            !is_sharp_unit_efficiency(pair.second)) {
            throw UnsupportedConfigurationError(
                "shared-sample evaluation needs sharp, fully efficient analyzers: "
                "smearing or detection losses break the common-sample construction");
        }
    }
    return *spin;
}

/// One shared-sample run: a single lambda sample evaluated counterfactually
/// at all four settings. Every pair is a coincidence (eta = 1 enforced by
/// the caller).
std::array<RunResult, 4> shared_sample_run(const SpinFunctionModel& model,
                                           const std::array<SettingPair, 4>& pairs,
                                           std::int64_t n, RandomStream& rng,
                                           bool keep_records) {
    const Direction dir_a = pairs[0].first.orientation();
    const Direction dir_ap = pairs[2].first.orientation();
    const Direction dir_b = pairs[0].second.orientation();
    const Direction dir_bp = pairs[1].second.orientation();

    std::array<std::int64_t, 4> sums{};
    std::array<RunResult, 4> out;
    if (keep_records) {
        for (auto& r : out) {
            r.records.reserve(static_cast<std::size_t>(n));
        }
    }
    for (std::int64_t i = 0; i < n; ++i) {
        Lambda lambda = model.sample_lambda(rng);
        int s_a = model.spin(lambda, dir_a);
        int s_ap = model.spin(lambda, dir_ap);
        int o_b = -model.spin(lambda, dir_b);
        int o_bp = -model.spin(lambda, dir_bp);
        sums[0] += s_a * o_b;
        sums[1] += s_a * o_bp;
        sums[2] += s_ap * o_bp;
        sums[3] += s_ap * o_b;
        if (keep_records) {
            const std::array<std::pair<int, int>, 4> outcomes{
                {{s_a, o_b}, {s_a, o_bp}, {s_ap, o_bp}, {s_ap, o_b}}};
            for (std::size_t k = 0; k < 4; ++k) {
                out[k].records.push_back({pairs[k].first.orientation(),
                                          pairs[k].second.orientation(),
                                          outcomes[k].first, outcomes[k].second,
                                          true, true});
            }
        }
    }
    for (std::size_t k = 0; k < 4; ++k) {
        pm1_mean_stderr(sums[k], n, out[k].r_n, out[k].stderr_r);
        out[k].r_unconditional = out[k].r_n;
        out[k].stderr_unconditional = out[k].stderr_r;
        out[k].coincidence_count = n;
        out[k].total_pairs = n;
    }
    return out;
}

/// M x K matrix of run results. Run j draws only from root.substream(j, .),
/// so the matrix is a pure function of (root key, arguments) whatever the
/// worker count.
std::vector<std::vector<RunResult>> run_matrix(const PairOutcomeSampler& model,
                                               const std::vector<SettingPair>& settings,
                                               const ChshSettings* quad,
                                               std::int64_t n_pairs, std::int64_t runs,
                                               SamplingMode mode, const RandomStream& root,
                                               int workers, bool keep_records) {
    std::vector<std::vector<RunResult>> matrix(
        static_cast<std::size_t>(runs),
        std::vector<RunResult>(settings.size()));
    if (mode == SamplingMode::SharedSample) {
        const std::array<SettingPair, 4> pairs = quad->setting_pairs();
        const SpinFunctionModel& spin = require_counterfactual(model, pairs);
        for_each_run(runs, workers, [&](std::int64_t j) {
            RandomStream rs = root.substream(static_cast<std::uint64_t>(j));
            auto row = shared_sample_run(spin, pairs, n_pairs, rs, keep_records);
            matrix[static_cast<std::size_t>(j)]
                .assign(std::make_move_iterator(row.begin()),
                        std::make_move_iterator(row.end()));
        });
    } else {
        for_each_run(runs, workers, [&](std::int64_t j) {
            for (std::size_t k = 0; k < settings.size(); ++k) {
                RandomStream rs = root.substream(static_cast<std::uint64_t>(j),
                                                 static_cast<std::uint64_t>(k));
                matrix[static_cast<std::size_t>(j)][k] =
                    run_experiment(model, settings[k], n_pairs, rs, keep_records);
            }
        });
    }
    return matrix;
}

ChshResult assemble_chsh(const std::vector<std::vector<RunResult>>& matrix) {
    ChshResult res;
    const std::size_t m = matrix.size();
    res.per_run_e.reserve(m);
    res.per_run_s.reserve(m);
    for (const auto& row : matrix) {
        std::array<double, 4> e{row[0].r_n, row[1].r_n, row[2].r_n, row[3].r_n};
        res.per_run_e.push_back(e);
        res.per_run_s.push_back(chsh_statistic(e));
    }
    if (m > 1) {
        std::vector<double> column(m);
        for (std::size_t k = 0; k < 4; ++k) {
            for (std::size_t j = 0; j < m; ++j) {
                column[j] = res.per_run_e[j][k];
            }
            EstimateWithError est = mean_stderr(column);
            res.e_hat[k] = est.value;
            res.e_stderr[k] = est.stderr_;
        }
    } else {
        for (std::size_t k = 0; k < 4; ++k) {
            res.e_hat[k] = matrix[0][k].r_n;
            res.e_stderr[k] = matrix[0][k].stderr_r;
        }
    }
    res.s = chsh_statistic(res.e_hat);
    double ss = 0.0;
    for (double se : res.e_stderr) {
        ss += se * se;
    }
    res.stderr_s = std::sqrt(ss);
    if (m > 1) {
        EstimateWithError est = mean_stderr(res.per_run_s);
        res.mean_s = est.value;
        res.stderr_mean_s = est.stderr_;
    } else {
        res.mean_s = res.s;
        res.stderr_mean_s = res.stderr_s;
    }
    return res;
}

} // namespace

SamplingMode parse_sampling_mode(const std::string& name) {
    if (name == "shared") {
        return SamplingMode::SharedSample;
    }
    if (name == "fresh") {
        return SamplingMode::FreshSample;
    }
    throw ConfigError("unknown sampling mode '" + name + "', expected shared or fresh");
}

const char* sampling_mode_name(SamplingMode mode) {
    return mode == SamplingMode::SharedSample ? "shared" : "fresh";
}

bool RunConfig::effective_record_pairs() const {
    if (record_pairs.has_value()) {
        return *record_pairs;
    }
    return runs <= 64 && pairs_per_run <= 64 && runs * pairs_per_run <= 64;
}

void RunConfig::validate() const {
    if (pairs_per_run < 1) {
        throw ConfigError("pairs_per_run must be >= 1");
    }
    if (runs < 1) {
        throw ConfigError("runs must be >= 1");
    }
    if (settings.empty()) {
        throw ConfigError("at least one setting pair is required");
    }
    if (workers < 1) {
        throw ConfigError("workers must be >= 1");
    }
}

ChshSettings ChshSettings::sharp(const Direction& a, const Direction& a_prime,
                                 const Direction& b, const Direction& b_prime) {
    auto make = [](const Direction& d) {
        return AnalyzerSpec(d, SmearingKind::Delta, 0.0, 1.0);
    };
    return ChshSettings{make(a), make(a_prime), make(b), make(b_prime)};
}

std::array<SettingPair, 4> ChshSettings::setting_pairs() const {
    return {SettingPair{a, b}, SettingPair{a, b_prime},
            SettingPair{a_prime, b_prime}, SettingPair{a_prime, b}};
}

ChshSettings chsh_settings_from_pairs(const std::vector<SettingPair>& pairs) {
    if (pairs.size() != 4) {
        throw ConfigError(
            "CHSH experiments need exactly four setting pairs in the order "
            "(A,B), (A,B'), (A',B'), (A',B); got " + std::to_string(pairs.size()));
    }
    const AnalyzerSpec& a = pairs[0].first;
    const AnalyzerSpec& b = pairs[0].second;
    const AnalyzerSpec& b_prime = pairs[1].second;
    const AnalyzerSpec& a_prime = pairs[2].first;
    if (!analyzers_match(pairs[1].first, a) || !analyzers_match(pairs[2].second, b_prime) ||
        !analyzers_match(pairs[3].first, a_prime) || !analyzers_match(pairs[3].second, b)) {
        throw ConfigError(
            "settings list does not form a CHSH quad in the order "
            "(A,B), (A,B'), (A',B'), (A',B)");
    }
    return ChshSettings{a, a_prime, b, b_prime};
}

RunResult run_experiment(const PairOutcomeSampler& model, const SettingPair& setting,
                         std::int64_t n_pairs, RandomStream& rng, bool keep_records) {
    if (n_pairs < 1) {
        throw ConfigError("run_experiment: n_pairs must be >= 1");
    }
    const double eta1 = setting.first.efficiency();
    const double eta2 = setting.second.efficiency();
    RunResult out;
    if (keep_records) {
        out.records.reserve(static_cast<std::size_t>(n_pairs));
    }
    std::int64_t sum = 0;
    std::int64_t coincidences = 0;
    for (std::int64_t i = 0; i < n_pairs; ++i) {
        Direction micro_a = sample_direction(setting.first.smearing(), rng);
        Direction micro_b = sample_direction(setting.second.smearing(), rng);
        OutcomePair o = model.sample_pair(micro_a, micro_b, rng);
        // eta >= 1 skips the detection draw entirely so that ideal runs
        // consume exactly the model's randomness.
        bool det1 = eta1 >= 1.0 || rng.bernoulli(eta1);
        bool det2 = eta2 >= 1.0 || rng.bernoulli(eta2);
        if (det1 && det2) {
            sum += static_cast<std::int64_t>(o.first) * o.second;
            ++coincidences;
        }
        if (keep_records) {
            out.records.push_back({micro_a, micro_b, det1 ? o.first : 0,
                                   det2 ? o.second : 0, det1, det2});
        }
    }
    if (coincidences == 0) {
        throw DegenerateRunError(
            "run_experiment: no coincident pairs (efficiency or n_pairs too small)",
            0, n_pairs);
    }
    pm1_mean_stderr(sum, coincidences, out.r_n, out.stderr_r);
    const double n = static_cast<double>(n_pairs);
    out.r_unconditional = static_cast<double>(sum) / n;
    if (n_pairs > 1) {
        // Per-pair values are in {-1, 0, +1}; the sum of squares is the
        // coincidence count.
        double var = (static_cast<double>(coincidences) -
                      n * out.r_unconditional * out.r_unconditional) /
                     static_cast<double>(n_pairs - 1);
        out.stderr_unconditional = std::sqrt(std::max(0.0, var) / n);
    }
    out.coincidence_count = coincidences;
    out.total_pairs = n_pairs;
    return out;
}

RunResult run_experiment(const RunConfig& config, const SettingPair& setting,
                         RandomStream& rng) {
    auto model = make_model(config.model);
    return run_experiment(*model, setting, config.pairs_per_run, rng,
                          config.effective_record_pairs());
}

double chsh_statistic(double e1, double e2, double e3, double e4) {
    for (double e : {e1, e2, e3, e4}) {
        if (!(std::abs(e) <= 1.0)) {
            throw DomainError("chsh_statistic: correlations must lie in [-1, 1]");
        }
    }
    return std::abs(e1 - e2) + std::abs(e3 + e4);
}

double chsh_statistic(const std::array<double, 4>& e) {
    return chsh_statistic(e[0], e[1], e[2], e[3]);
}

ChshResult shared_sample_chsh(const PairOutcomeSampler& model,
                              const ChshSettings& settings, std::int64_t n_pairs,
                              const RandomStream& rng) {
    return chsh_experiment(model, settings, n_pairs, 1, SamplingMode::SharedSample,
                           rng, 1);
}

ChshResult fresh_sample_chsh(const PairOutcomeSampler& model,
                             const ChshSettings& settings, std::int64_t n_pairs,
                             std::int64_t runs, const RandomStream& rng, int workers) {
    return chsh_experiment(model, settings, n_pairs, runs, SamplingMode::FreshSample,
                           rng, workers);
}

ChshResult chsh_experiment(const PairOutcomeSampler& model,
                           const ChshSettings& settings, std::int64_t n_pairs,
                           std::int64_t runs, SamplingMode mode,
                           const RandomStream& rng, int workers) {
    if (n_pairs < 1) {
        throw ConfigError("chsh_experiment: n_pairs must be >= 1");
    }
    if (runs < 1) {
        throw ConfigError("chsh_experiment: runs must be >= 1");
    }
    const std::array<SettingPair, 4> pairs = settings.setting_pairs();
    std::vector<SettingPair> as_vector(pairs.begin(), pairs.end());
    auto matrix = run_matrix(model, as_vector, &settings, n_pairs, runs, mode, rng,
                             workers, false);
    return assemble_chsh(matrix);
}

std::vector<HerbertResult> herbert_scan(const PairOutcomeSampler& model,
                                        const std::vector<double>& thetas,
                                        std::int64_t n_pairs, const RandomStream& rng) {
    if (n_pairs < 1) {
        throw ConfigError("herbert_scan: n_pairs must be >= 1");
    }
    bool anti_correlated = dynamic_cast<const ContextualSampler*>(&model) != nullptr ||
                           dynamic_cast<const SpinFunctionModel*>(&model) != nullptr;
    if (!anti_correlated) {
        throw UnsupportedModelError(
            "herbert_scan: model '" + model.name() +
            "' is not perfectly anti-correlated at equal settings, so its outcomes "
            "do not encode a message");
    }
    const Direction side1(0.0, 0.0, 1.0);
    std::vector<HerbertResult> results;
    results.reserve(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        const double theta = thetas[i];
        if (!(theta >= 0.0) || !(2.0 * theta <= std::numbers::pi + 1e-12)) {
            throw DomainError("herbert_scan: theta must lie in [0, pi/2], got " +
                              std::to_string(theta));
        }
        HerbertResult h;
        h.theta = theta;
        h.pairs = n_pairs;
        for (int leg = 0; leg < 2; ++leg) {
            const double angle = std::min(leg == 0 ? theta : 2.0 * theta,
                                          std::numbers::pi);
            const Direction side2 = Direction::from_spherical(angle, 0.0);
            RandomStream rs = rng.substream(static_cast<std::uint64_t>(i),
                                            static_cast<std::uint64_t>(leg));
            std::int64_t disagreements = 0;
            for (std::int64_t p = 0; p < n_pairs; ++p) {
                OutcomePair o = model.sample_pair(side1, side2, rs);
                // Message bits are o1 and -o2; they disagree exactly when
                // the raw outcomes coincide.
                if (o.first == o.second) {
                    ++disagreements;
                }
            }
            const double rate = static_cast<double>(disagreements) /
                                static_cast<double>(n_pairs);
            const double se = std::sqrt(rate * (1.0 - rate) /
                                        static_cast<double>(n_pairs));
            if (leg == 0) {
                h.d_theta = rate;
                h.stderr_theta = se;
                h.disagree_theta = disagreements;
            } else {
                h.d_2theta = rate;
                h.stderr_2theta = se;
                h.disagree_2theta = disagreements;
            }
        }
        const double sigma = std::sqrt(h.stderr_2theta * h.stderr_2theta +
                                       4.0 * h.stderr_theta * h.stderr_theta);
        h.satisfied = h.d_2theta <= 2.0 * h.d_theta + 4.0 * sigma;
        results.push_back(h);
    }
    return results;
}

ExperimentReport reproduce(const RunConfig& config) {
    config.validate();
    auto model = make_model(config.model);
    std::optional<ChshSettings> quad;
    if (config.settings.size() == 4) {
        try {
            quad = chsh_settings_from_pairs(config.settings);
        } catch (const ConfigError&) {
            // Four settings that do not form a quad still run per setting.
        }
    }
    if (config.mode == SamplingMode::SharedSample && !quad.has_value()) {
        throw ConfigError(
            "shared mode requires settings forming a CHSH quad "
            "(A,B), (A,B'), (A',B'), (A',B)");
    }
    RandomStream root(config.seed);
    auto matrix = run_matrix(*model, config.settings,
                             quad.has_value() ? &*quad : nullptr,
                             config.pairs_per_run, config.runs, config.mode, root,
                             config.workers, config.effective_record_pairs());
    ExperimentReport report{config, model->name(), {}, std::nullopt};
    report.settings.reserve(config.settings.size());
    const std::size_t m = matrix.size();
    for (std::size_t k = 0; k < config.settings.size(); ++k) {
        SettingSummary summary{config.settings[k], {}, {}};
        summary.runs.reserve(m);
        for (std::size_t j = 0; j < m; ++j) {
            summary.runs.push_back(matrix[j][k]);
        }
        if (m > 1) {
            std::vector<double> values(m);
            for (std::size_t j = 0; j < m; ++j) {
                values[j] = matrix[j][k].r_n;
            }
            summary.pooled = mean_stderr(values);
        } else {
            summary.pooled = EstimateWithError{matrix[0][k].r_n, matrix[0][k].stderr_r,
                                               matrix[0][k].coincidence_count};
        }
        report.settings.push_back(std::move(summary));
    }
    if (quad.has_value()) {
        report.chsh = assemble_chsh(matrix);
    }
    return report;
}

} // namespace spce
