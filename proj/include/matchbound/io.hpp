#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "matchbound/market.hpp"

namespace matchbound {

/// Syntax error in a market file; line and column are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(column) +
                             ": " + message),
          line(line),
          column(column) {}

    int line;
    int column;
};

struct ParseOptions {
    Mutuality mutuality = Mutuality::Prune;
};

namespace detail {

struct Token {
    std::string text;
    int column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        if (line[i] == '#') break;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != '#') {
            ++i;
        }
        tokens.push_back({std::string(line.substr(start, i - start)), static_cast<int>(start) + 1});
    }
    return tokens;
}

}  // namespace detail

/// Parses the line-oriented market format:
///
///     workers: w1 w2
///     firms: f1 f2
///     pref w1: f2 f1      # descending preference; omitted firms unacceptable
///     pref f1: w1 w2
///
/// `#` starts a comment, blank lines are ignored, and every declared agent
/// must have a `pref` line. Non-mutual entries are pruned with a diagnostic
/// per entry (or rejected under `Mutuality::Require`).
inline Market parse_market(std::string_view text, const ParseOptions& options = {},
                           std::vector<std::string>* diagnostics = nullptr) {
    MarketData data;
    std::unordered_map<std::string, AgentId> agents;
    std::vector<bool> worker_has_prefs;
    std::vector<bool> firm_has_prefs;
    bool seen_workers = false;
    bool seen_firms = false;

    auto declare = [&](const detail::Token& token, Side side, int line) {
        if (agents.count(token.text)) {
            throw ParseError(line, token.column, "duplicate agent label '" + token.text + "'");
        }
        if (side == Side::Worker) {
            agents.emplace(token.text, AgentId{side, static_cast<int>(data.worker_labels.size())});
            data.worker_labels.push_back(token.text);
        } else {
            agents.emplace(token.text, AgentId{side, static_cast<int>(data.firm_labels.size())});
            data.firm_labels.push_back(token.text);
        }
    };

    int line_number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        const std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_number;

        const auto tokens = detail::tokenize(line);
        if (tokens.empty()) continue;

        const detail::Token& head = tokens.front();
        if (head.text == "workers:") {
            if (seen_workers) throw ParseError(line_number, head.column, "duplicate 'workers:' line");
            seen_workers = true;
            for (std::size_t i = 1; i < tokens.size(); ++i) declare(tokens[i], Side::Worker, line_number);
        } else if (head.text == "firms:") {
            if (seen_firms) throw ParseError(line_number, head.column, "duplicate 'firms:' line");
            seen_firms = true;
            for (std::size_t i = 1; i < tokens.size(); ++i) declare(tokens[i], Side::Firm, line_number);
        } else if (head.text == "pref") {
            if (tokens.size() < 2 || tokens[1].text.empty() || tokens[1].text.back() != ':') {
                throw ParseError(line_number, head.column, "expected 'pref <agent>: <list>'");
            }
            const std::string owner_label = tokens[1].text.substr(0, tokens[1].text.size() - 1);
            const auto it = agents.find(owner_label);
            if (it == agents.end()) {
                throw ParseError(line_number, tokens[1].column,
                                 "preference line for undeclared agent '" + owner_label + "'");
            }
            const AgentId owner = it->second;
            if (worker_has_prefs.size() != data.worker_labels.size()) {
                worker_has_prefs.resize(data.worker_labels.size(), false);
                data.worker_prefs.resize(data.worker_labels.size());
            }
            if (firm_has_prefs.size() != data.firm_labels.size()) {
                firm_has_prefs.resize(data.firm_labels.size(), false);
                data.firm_prefs.resize(data.firm_labels.size());
            }
            std::vector<bool>& seen_side =
                owner.side == Side::Worker ? worker_has_prefs : firm_has_prefs;
            if (seen_side[owner.index]) {
                throw ParseError(line_number, tokens[1].column,
                                 "duplicate preference line for '" + owner_label + "'");
            }
            seen_side[owner.index] = true;
            auto& list = owner.side == Side::Worker ? data.worker_prefs[owner.index]
                                                    : data.firm_prefs[owner.index];
            for (std::size_t i = 2; i < tokens.size(); ++i) {
                const auto partner = agents.find(tokens[i].text);
                if (partner == agents.end()) {
                    throw ParseError(line_number, tokens[i].column,
                                     "undeclared agent '" + tokens[i].text + "' in preference list");
                }
                if (partner->second.side == owner.side) {
                    throw ParseError(line_number, tokens[i].column,
                                     "'" + tokens[i].text + "' is on the same side as '" +
                                         owner_label + "'");
                }
                if (std::find(list.begin(), list.end(), partner->second.index) != list.end()) {
                    throw ParseError(line_number, tokens[i].column,
                                     "duplicate preference entry '" + tokens[i].text + "'");
                }
                list.push_back(partner->second.index);
            }
        } else {
            throw ParseError(line_number, head.column,
                             "expected 'workers:', 'firms:', or 'pref', got '" + head.text + "'");
        }
    }

    data.worker_prefs.resize(data.worker_labels.size());
    data.firm_prefs.resize(data.firm_labels.size());
    worker_has_prefs.resize(data.worker_labels.size(), false);
    firm_has_prefs.resize(data.firm_labels.size(), false);
    for (std::size_t w = 0; w < worker_has_prefs.size(); ++w) {
        if (!worker_has_prefs[w]) {
            throw ParseError(line_number, 1, "missing 'pref' line for '" + data.worker_labels[w] + "'");
        }
    }
    for (std::size_t f = 0; f < firm_has_prefs.size(); ++f) {
        if (!firm_has_prefs[f]) {
            throw ParseError(line_number, 1, "missing 'pref' line for '" + data.firm_labels[f] + "'");
        }
    }

    return Market::from_data(std::move(data), options.mutuality, diagnostics);
}

/// Canonical serialization: agents and preference lines in index order,
/// workers before firms. Optional comment lines are emitted first.
inline std::string serialize_market(const Market& m,
                                    const std::vector<std::string>& header_comments = {}) {
    std::ostringstream out;
    for (const auto& comment : header_comments) out << "# " << comment << '\n';
    out << "workers:";
    for (int w = 0; w < m.worker_count(); ++w) out << ' ' << m.worker_label(w);
    out << '\n';
    out << "firms:";
    for (int f = 0; f < m.firm_count(); ++f) out << ' ' << m.firm_label(f);
    out << '\n';
    for (int w = 0; w < m.worker_count(); ++w) {
        out << "pref " << m.worker_label(w) << ':';
        for (int f : m.worker_prefs(w)) out << ' ' << m.firm_label(f);
        out << '\n';
    }
    for (int f = 0; f < m.firm_count(); ++f) {
        out << "pref " << m.firm_label(f) << ':';
        for (int w : m.firm_prefs(f)) out << ' ' << m.worker_label(w);
        out << '\n';
    }
    return out.str();
}

inline Market load_market(const std::filesystem::path& path, const ParseOptions& options = {},
                          std::vector<std::string>* diagnostics = nullptr) {
    std::ifstream in(path);
    if (!in) throw MarketError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_market(buffer.str(), options, diagnostics);
}

inline void save_market(const Market& m, const std::filesystem::path& path,
                        const std::vector<std::string>& header_comments = {}) {
    std::ofstream out(path);
    if (!out) throw MarketError("cannot write '" + path.string() + "'");
    out << serialize_market(m, header_comments);
}

}  // namespace matchbound
