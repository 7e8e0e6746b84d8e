#pragma once

#include <string>
#include <vector>

#include "matchbound/market.hpp"
#include "matchbound/solvers.hpp"

namespace matchbound {

struct RemovedAgent {
    AgentId id;
    std::string reason;
};

/// Result of reducing a market to its normal form: the balanced sub-market
/// of participants matched in every stable matching. `core` worker `i` is
/// the original worker `kept_workers[i]`, and likewise for firms.
struct ReductionReport {
    std::vector<int> kept_workers;
    std::vector<int> kept_firms;
    std::vector<RemovedAgent> removed;
    Market core;
};

/// Strips every participant that appears in no stable matching. By the rural
/// hospitals property the matched participants are the same in every stable
/// matching, so one deferred-acceptance run identifies them; no enumeration
/// is needed.
///
/// Kept lists are truncated just above each agent's best-ranked removed
/// partner. In any stable matching every kept agent is matched above all of
/// its removed partners (a preferred unmatched partner would block), so the
/// cut drops nothing reachable, and keeping entries below it would let the
/// core accept matchings the removed agents actually blocked. With the cut,
/// the core's stable matchings are exactly the original's. The core is
/// always balanced, and a core is its own normal form.
inline ReductionReport normal_form(const Market& m) {
    const Matching mu = deferred_acceptance(m, SolveSide::WorkerProposing);

    ReductionReport report;
    std::vector<int> worker_map(m.worker_count(), -1);
    std::vector<int> firm_map(m.firm_count(), -1);
    for (int w = 0; w < m.worker_count(); ++w) {
        if (mu.firm_for(w)) {
            worker_map[w] = static_cast<int>(report.kept_workers.size());
            report.kept_workers.push_back(w);
        } else {
            report.removed.push_back({{Side::Worker, w}, "unmatched in every stable matching"});
        }
    }
    for (int f = 0; f < m.firm_count(); ++f) {
        if (mu.worker_for(f)) {
            firm_map[f] = static_cast<int>(report.kept_firms.size());
            report.kept_firms.push_back(f);
        } else {
            report.removed.push_back({{Side::Firm, f}, "unmatched in every stable matching"});
        }
    }

    // Everything ranked above the first removed entry is a kept agent, so
    // truncation subsumes filtering to kept agents.
    auto truncate = [](const std::vector<int>& prefs, const std::vector<int>& opposite_map) {
        std::vector<int> out;
        for (int partner : prefs) {
            if (opposite_map[partner] < 0) break;
            out.push_back(opposite_map[partner]);
        }
        return out;
    };

    MarketData data;
    for (int w : report.kept_workers) {
        data.worker_labels.push_back(m.worker_label(w));
        data.worker_prefs.push_back(truncate(m.worker_prefs(w), firm_map));
    }
    for (int f : report.kept_firms) {
        data.firm_labels.push_back(m.firm_label(f));
        data.firm_prefs.push_back(truncate(m.firm_prefs(f), worker_map));
    }
    report.core = Market::from_data(std::move(data), Mutuality::Prune);
    return report;
}

/// The pairs that appear in at least one stable matching. Acceptable pairs
/// among kept agents that are missing here can never be part of a stable
/// matching. Enumeration-backed, so subject to `cap`.
inline std::vector<Pair> stable_pairs(const Market& m, int cap = kDefaultEnumerationCap) {
    std::vector<Pair> result;
    for (const Matching& mu : enumerate_stable(m, cap)) {
        result.insert(result.end(), mu.pairs().begin(), mu.pairs().end());
    }
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
}

}  // namespace matchbound
