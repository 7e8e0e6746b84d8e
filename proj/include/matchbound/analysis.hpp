#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "matchbound/io.hpp"
#include "matchbound/market.hpp"
#include "matchbound/rng.hpp"
#include "matchbound/solvers.hpp"

namespace matchbound {

/// Exact ratio; normalized so den > 0 and gcd(num, den) = 1.
struct Rational {
    long long num = 0;
    long long den = 1;

    static Rational of(long long num, long long den) {
        if (den == 0) throw MarketError("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const long long g = std::gcd(num < 0 ? -num : num, den);
        return Rational{g ? num / g : num, g ? den / g : den};
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend bool operator<(const Rational& a, const Rational& b) {
        return a.num * b.den < b.num * a.den;
    }
};

/// Stable size versus maximum size for one market. `tight` marks markets
/// where the stable size sits exactly at the half-size floor ceil(max/2).
struct BoundReport {
    int stable_size = 0;
    int maximum_size = 0;
    Rational ratio;
    bool tight = false;
};

inline BoundReport check_bound(const Market& m) {
    const int stable = deferred_acceptance(m, SolveSide::WorkerProposing).size();
    const int maximum = maximum_matching(m).size();
    if (maximum == 0) throw MarketError("market has no acceptable pairs");
    return BoundReport{stable, maximum, Rational::of(stable, maximum),
                       stable == (maximum + 1) / 2};
}

/// Stable matching size over the number of workers.
inline Rational employment_rate(const Market& m) {
    if (m.worker_count() == 0) throw MarketError("market has no workers");
    return Rational::of(deferred_acceptance(m, SolveSide::WorkerProposing).size(),
                        m.worker_count());
}

struct MonteCarloConfig {
    int workers = 8;
    int firms = 8;
    double acceptability_probability = 0.5;
    int trials = 100;
    std::uint64_t seed = 0;
    /// Where a bound-violating instance would be serialized before aborting.
    std::string quarantine_dir = "quarantine";
};

struct TrialRecord {
    int trial = 0;
    int workers = 0;
    int firms = 0;
    BoundReport report;
};

struct MonteCarloSummary {
    Rational min_ratio;
    double mean_ratio = 0.0;
    int tight_count = 0;
    int degenerate_trials = 0;
};

struct MonteCarloResult {
    std::vector<TrialRecord> table;
    MonteCarloSummary summary;
};

/// Raised when a trial contradicts the half-size bound. The instance is
/// serialized first; this firing means a bug, not a market property.
class BoundViolationError : public MarketError {
public:
    BoundViolationError(const std::string& message, std::string market_text)
        : MarketError(message), market_text(std::move(market_text)) {}

    std::string market_text;
};

/// Serializes a suspect instance into `dir`, named by seed and trial so the
/// run can be replayed. Returns the file path.
inline std::filesystem::path write_quarantine(const std::string& dir, std::uint64_t seed,
                                              int trial, const std::string& market_text) {
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / ("violation_seed" + std::to_string(seed) +
                                                    "_trial" + std::to_string(trial) + ".market");
    std::ofstream out(path);
    if (!out) throw MarketError("cannot write '" + path.string() + "'");
    out << market_text;
    return path;
}

/// Random market: each worker/firm pair is acceptable independently with the
/// given probability, preference orders are uniform seeded shuffles, and
/// agents left with no acceptable partner are dropped (labels keep their
/// original numbering). May return an empty market.
inline Market random_market(std::mt19937_64& rng, int workers, int firms,
                            double acceptability_probability) {
    std::vector<std::vector<int>> accepts(workers);
    std::vector<std::vector<int>> accepted_by(firms);
    for (int w = 0; w < workers; ++w) {
        for (int f = 0; f < firms; ++f) {
            if (chance(rng, acceptability_probability)) {
                accepts[w].push_back(f);
                accepted_by[f].push_back(w);
            }
        }
    }
    std::vector<int> worker_map(workers, -1);
    std::vector<int> firm_map(firms, -1);
    MarketData data;
    for (int w = 0; w < workers; ++w) {
        if (accepts[w].empty()) continue;
        worker_map[w] = static_cast<int>(data.worker_labels.size());
        data.worker_labels.push_back("w" + std::to_string(w + 1));
    }
    for (int f = 0; f < firms; ++f) {
        if (accepted_by[f].empty()) continue;
        firm_map[f] = static_cast<int>(data.firm_labels.size());
        data.firm_labels.push_back("f" + std::to_string(f + 1));
    }
    for (int w = 0; w < workers; ++w) {
        if (worker_map[w] < 0) continue;
        std::vector<int> prefs;
        for (int f : accepts[w]) prefs.push_back(firm_map[f]);
        shuffle_in_place(prefs, rng);
        data.worker_prefs.push_back(std::move(prefs));
    }
    for (int f = 0; f < firms; ++f) {
        if (firm_map[f] < 0) continue;
        std::vector<int> prefs;
        for (int w : accepted_by[f]) prefs.push_back(worker_map[w]);
        shuffle_in_place(prefs, rng);
        data.firm_prefs.push_back(std::move(prefs));
    }
    return Market::from_data(std::move(data), Mutuality::Require);
}

/// Seeded random trials of check_bound. Trials whose market ends up with no
/// acceptable pairs are skipped and counted as degenerate; if no trial
/// survives, that is an error. A ratio below 1/2 anywhere aborts the run
/// with the counterexample serialized into `quarantine_dir`.
inline MonteCarloResult monte_carlo(const MonteCarloConfig& cfg) {
    if (cfg.workers <= 0 || cfg.firms <= 0 || cfg.trials <= 0) {
        throw MarketError("workers, firms, and trials must all be positive");
    }
    if (cfg.acceptability_probability < 0.0 || cfg.acceptability_probability > 1.0) {
        throw MarketError("acceptability probability must lie in [0, 1]");
    }

    MonteCarloResult result;
    double ratio_sum = 0.0;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        std::mt19937_64 rng(splitmix64(cfg.seed + static_cast<std::uint64_t>(trial)));
        const Market m = random_market(rng, cfg.workers, cfg.firms, cfg.acceptability_probability);
        if (m.acceptable_pairs().empty()) {
            ++result.summary.degenerate_trials;
            continue;
        }
        const BoundReport report = check_bound(m);
        if (2 * report.stable_size < report.maximum_size) {
            const std::string text = serialize_market(
                m, {"bound violation: stable " + std::to_string(report.stable_size) +
                        " < ceil(" + std::to_string(report.maximum_size) + "/2)",
                    "seed " + std::to_string(cfg.seed) + " trial " + std::to_string(trial)});
            const auto path = write_quarantine(cfg.quarantine_dir, cfg.seed, trial, text);
            throw BoundViolationError("stable matching below half the maximum at trial " +
                                          std::to_string(trial) + "; instance saved to " +
                                          path.string(),
                                      text);
        }
        ratio_sum += report.ratio.value();
        if (report.tight) ++result.summary.tight_count;
        if (result.table.empty() || report.ratio < result.summary.min_ratio) {
            result.summary.min_ratio = report.ratio;
        }
        result.table.push_back({trial, m.worker_count(), m.firm_count(), report});
    }
    if (result.table.empty()) {
        throw MarketError("every trial was degenerate (no acceptable pairs)");
    }
    result.summary.mean_ratio = ratio_sum / static_cast<double>(result.table.size());
    return result;
}

namespace detail {
inline std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}
}  // namespace detail

/// CSV table, one row per surviving trial, with the summary appended as a
/// commented block. Byte-identical across runs for a fixed config.
inline std::string to_csv(const MonteCarloResult& result) {
    std::ostringstream out;
    out << "trial,workers,firms,stable,maximum,ratio,tight\n";
    for (const TrialRecord& record : result.table) {
        out << record.trial << ',' << record.workers << ',' << record.firms << ','
            << record.report.stable_size << ',' << record.report.maximum_size << ','
            << detail::format_double(record.report.ratio.value()) << ','
            << (record.report.tight ? 1 : 0) << '\n';
    }
    out << "# trials=" << result.table.size()
        << " degenerate=" << result.summary.degenerate_trials << '\n';
    out << "# min_ratio=" << detail::format_double(result.summary.min_ratio.value()) << '\n';
    out << "# mean_ratio=" << detail::format_double(result.summary.mean_ratio) << '\n';
    out << "# tight=" << result.summary.tight_count << '\n';
    return out.str();
}

}  // namespace matchbound
