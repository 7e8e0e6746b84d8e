#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "matchbound/market.hpp"

namespace matchbound {

enum class ArcTag { WorkerArc, FirmArc };

struct Arc {
    int from;
    int to;
    ArcTag tag;

    friend bool operator==(const Arc&, const Arc&) = default;
    friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// The matching digraph of a market: one vertex per acceptable pair and an
/// arc from a pair to every pair the shared agent strictly prefers. Within a
/// worker's row (or a firm's column) the arcs form a transitive tournament;
/// the full closure is stored so stability checks need no rank arithmetic.
class MatchingDigraph {
public:
    const std::vector<Pair>& vertices() const { return vertices_; }
    int vertex_count() const { return static_cast<int>(vertices_.size()); }

    std::optional<int> vertex_index(const Pair& p) const {
        if (p.worker < 0 || p.worker >= workers_ || p.firm < 0 || p.firm >= firms_) {
            return std::nullopt;
        }
        const int v = index_[static_cast<std::size_t>(p.worker) * firms_ + p.firm];
        return v >= 0 ? std::optional<int>(v) : std::nullopt;
    }

    /// All arcs, sorted by (from, to).
    const std::vector<Arc>& arcs() const { return arcs_; }

    const std::vector<int>& out_neighbors(int v) const { return out_.at(v); }

    int worker_count() const { return workers_; }
    int firm_count() const { return firms_; }

private:
    friend MatchingDigraph build_digraph(const Market& m);

    std::vector<Pair> vertices_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<int>> out_;
    std::vector<int> index_;
    int workers_ = 0;
    int firms_ = 0;
};

inline MatchingDigraph build_digraph(const Market& m) {
    MatchingDigraph d;
    d.workers_ = m.worker_count();
    d.firms_ = m.firm_count();
    d.vertices_ = m.acceptable_pairs();
    d.index_.assign(static_cast<std::size_t>(d.workers_) * d.firms_, -1);
    for (int v = 0; v < d.vertex_count(); ++v) {
        d.index_[static_cast<std::size_t>(d.vertices_[v].worker) * d.firms_ +
                 d.vertices_[v].firm] = v;
    }

    auto at = [&](int w, int f) {
        return d.index_[static_cast<std::size_t>(w) * d.firms_ + f];
    };

    // Rows: for a worker with acceptable firms f_0 > f_1 > ... (preference
    // order) every less-preferred vertex points at every more-preferred one.
    for (int w = 0; w < d.workers_; ++w) {
        const auto& prefs = m.worker_prefs(w);
        for (std::size_t better = 0; better < prefs.size(); ++better) {
            for (std::size_t worse = better + 1; worse < prefs.size(); ++worse) {
                d.arcs_.push_back({at(w, prefs[worse]), at(w, prefs[better]), ArcTag::WorkerArc});
            }
        }
    }
    for (int f = 0; f < d.firms_; ++f) {
        const auto& prefs = m.firm_prefs(f);
        for (std::size_t better = 0; better < prefs.size(); ++better) {
            for (std::size_t worse = better + 1; worse < prefs.size(); ++worse) {
                d.arcs_.push_back({at(prefs[worse], f), at(prefs[better], f), ArcTag::FirmArc});
            }
        }
    }
    std::sort(d.arcs_.begin(), d.arcs_.end());

    d.out_.assign(d.vertex_count(), {});
    for (const Arc& a : d.arcs_) d.out_[a.from].push_back(a.to);
    return d;
}

/// Stability in digraph form: `s` must be an independent set (no two
/// vertices share a worker or firm) and every vertex must be in `s` or have
/// an out-neighbor in `s`.
inline bool is_stable_vertex_set(const MatchingDigraph& d, const std::vector<int>& s) {
    std::vector<bool> in_set(d.vertex_count(), false);
    std::vector<bool> worker_used(d.worker_count(), false);
    std::vector<bool> firm_used(d.firm_count(), false);
    for (int v : s) {
        if (v < 0 || v >= d.vertex_count()) {
            throw MarketError("vertex index out of range");
        }
        if (in_set[v]) continue;
        in_set[v] = true;
        const Pair& p = d.vertices()[v];
        if (worker_used[p.worker] || firm_used[p.firm]) return false;  // not independent
        worker_used[p.worker] = true;
        firm_used[p.firm] = true;
    }
    for (int v = 0; v < d.vertex_count(); ++v) {
        if (in_set[v]) continue;
        bool dominated = false;
        for (int u : d.out_neighbors(v)) {
            if (in_set[u]) {
                dominated = true;
                break;
            }
        }
        if (!dominated) return false;
    }
    return true;
}

/// Vertex indices of a matching's pairs; pairs must be acceptable.
inline std::vector<int> vertex_set_of(const MatchingDigraph& d, const Matching& mu) {
    std::vector<int> s;
    s.reserve(mu.pairs().size());
    for (const Pair& p : mu.pairs()) {
        const auto v = d.vertex_index(p);
        if (!v) throw MarketError("matching contains a pair that is not a digraph vertex");
        s.push_back(*v);
    }
    return s;
}

/// Only the covering arcs (consecutive ranks) per row and column: the
/// drawing view with transitively implied arcs omitted. Per row and column
/// this is the unique transitive reduction of the stored tournament.
inline std::vector<Arc> reduced_view(const MatchingDigraph& d) {
    // Within a row the arcs form a transitive tournament, so the number of
    // same-row out-neighbors recovers the rank: most preferred has 0.
    std::vector<std::vector<int>> rows(d.worker_count());
    std::vector<std::vector<int>> columns(d.firm_count());
    for (int v = 0; v < d.vertex_count(); ++v) {
        rows[d.vertices()[v].worker].push_back(v);
        columns[d.vertices()[v].firm].push_back(v);
    }
    auto chain = [&](std::vector<int>& group, auto same_group, ArcTag tag,
                     std::vector<Arc>& arcs) {
        auto degree = [&](int v) {
            int deg = 0;
            for (int u : d.out_neighbors(v)) {
                if (same_group(u, v)) ++deg;
            }
            return deg;
        };
        std::sort(group.begin(), group.end(),
                  [&](int a, int b) { return degree(a) > degree(b); });
        for (std::size_t i = 0; i + 1 < group.size(); ++i) {
            arcs.push_back({group[i], group[i + 1], tag});
        }
    };
    std::vector<Arc> arcs;
    for (auto& row : rows) {
        chain(row, [&](int u, int v) { return d.vertices()[u].worker == d.vertices()[v].worker; },
              ArcTag::WorkerArc, arcs);
    }
    for (auto& column : columns) {
        chain(column, [&](int u, int v) { return d.vertices()[u].firm == d.vertices()[v].firm; },
              ArcTag::FirmArc, arcs);
    }
    std::sort(arcs.begin(), arcs.end());
    return arcs;
}

/// A named vertex set to render with a distinct node style.
struct Highlight {
    std::string name;
    std::vector<int> vertices;
};

/// Deterministic DOT export. Vertices are laid out on the worker-row /
/// firm-column grid (pin positions for neato renderers); highlight sets are
/// filled with a fixed palette in the order given, first set winning on
/// overlap.
inline std::string export_dot(const MatchingDigraph& d,
                              const std::vector<Highlight>& highlights = {},
                              bool reduced = false) {
    static constexpr const char* kPalette[] = {"gold", "tomato", "skyblue", "palegreen", "plum"};
    std::vector<int> style(d.vertex_count(), -1);
    for (std::size_t h = 0; h < highlights.size(); ++h) {
        for (int v : highlights[h].vertices) {
            if (v < 0 || v >= d.vertex_count()) {
                throw MarketError("highlight set '" + highlights[h].name +
                                  "' references an unknown vertex");
            }
            if (style[v] < 0) style[v] = static_cast<int>(h);
        }
    }

    std::ostringstream out;
    out << "digraph matching_digraph {\n";
    out << "  node [shape=circle fontsize=10 fixedsize=true width=0.6];\n";
    for (std::size_t h = 0; h < highlights.size(); ++h) {
        out << "  // " << highlights[h].name << ": "
            << kPalette[h % (sizeof(kPalette) / sizeof(kPalette[0]))] << "\n";
    }
    for (int v = 0; v < d.vertex_count(); ++v) {
        const Pair& p = d.vertices()[v];
        const double y = -1.2 * p.worker + 0.0;  // +0.0 normalizes -0
        out << "  \"(" << p.worker + 1 << ',' << p.firm + 1 << ")\" [pos=\"" << 1.2 * p.firm << ','
            << y << "!\"";
        if (style[v] >= 0) {
            out << " style=filled fillcolor="
                << kPalette[style[v] % (sizeof(kPalette) / sizeof(kPalette[0]))];
        }
        out << "];\n";
    }
    const std::vector<Arc> arcs = reduced ? reduced_view(d) : d.arcs();
    for (const Arc& a : arcs) {
        const Pair& u = d.vertices()[a.from];
        const Pair& v = d.vertices()[a.to];
        out << "  \"(" << u.worker + 1 << ',' << u.firm + 1 << ")\" -> \"(" << v.worker + 1 << ','
            << v.firm + 1 << ")\";\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace matchbound
