#pragma once

// Text formats. Line-oriented, '#' starts a comment, tokens are
// whitespace-separated.
//
// model file:        domain kappa|possibility|kappa_product <K>
//                    states <id>+
//                    init <id>
//                    trans <from> <to> <value>     (omitted pairs are bottom)
//
// constraint file:   states <id>+
//                    init <id>
//                    impossible <from> <to>
//                    order <f1> <t1> <|<=|= <f2> <t2>
//
// observation file:  obs <id>+ | obs *             (one line per time step,
//                                                   starting at time 1)
//
// Value literals: kappa ranks are decimal naturals or `inf`; possibility
// degrees are exact rationals `P/Q` (or `0`/`1`); kappa_product values are
// comma-separated rank literals of the declared width.

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmb/constraints.hpp"
#include "qmb/model.hpp"

namespace qmb {

namespace io_detail {

struct line {
  int number = 0;
  std::vector<std::string> tokens;
};

inline std::vector<line> tokenize(std::string_view text) {
  std::vector<line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos)
      raw = raw.substr(0, hash);
    line l{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r'))
        ++i;
      std::size_t start = i;
      while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t' && raw[i] != '\r')
        ++i;
      if (i > start) l.tokens.emplace_back(raw.substr(start, i - start));
    }
    if (!l.tokens.empty()) lines.push_back(std::move(l));
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return lines;
}

inline std::optional<std::uint64_t> parse_nat(std::string_view tok) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) return std::nullopt;
  return v;
}

inline std::optional<extended_nat> parse_rank(std::string_view tok) {
  if (tok == "inf") return extended_nat::infinity();
  if (auto v = parse_nat(tok)) return extended_nat(*v);
  return std::nullopt;
}

inline std::optional<rational> parse_unit_rational(std::string_view tok) {
  auto slash = tok.find('/');
  std::int64_t num = 0, den = 1;
  if (slash == std::string_view::npos) {
    auto v = parse_nat(tok);
    if (!v || *v > 1) return std::nullopt;
    num = static_cast<std::int64_t>(*v);
  } else {
    auto p = parse_nat(tok.substr(0, slash));
    auto q = parse_nat(tok.substr(slash + 1));
    if (!p || !q || *q == 0) return std::nullopt;
    if (*p > 1'000'000'000 || *q > 1'000'000'000) return std::nullopt;
    num = static_cast<std::int64_t>(*p);
    den = static_cast<std::int64_t>(*q);
  }
  rational r(num, den);
  if (rational(1, 1) < r) return std::nullopt;
  return r;
}

}  // namespace io_detail

inline plaus_value parse_plaus_value(domain_kind kind, std::string_view tok,
                                     int line = 0) {
  switch (kind.tag) {
    case domain_tag::kappa: {
      auto r = io_detail::parse_rank(tok);
      if (!r) throw parse_error(line, "bad kappa literal: " + std::string(tok));
      return plaus_value::kappa(*r);
    }
    case domain_tag::possibility: {
      auto r = io_detail::parse_unit_rational(tok);
      if (!r)
        throw parse_error(line,
                          "bad possibility literal: " + std::string(tok));
      return plaus_value::possibility(*r);
    }
    case domain_tag::kappa_product: {
      std::vector<extended_nat> coords;
      std::size_t pos = 0;
      std::string s(tok);
      while (true) {
        auto comma = s.find(',', pos);
        auto piece = s.substr(pos, comma == std::string::npos
                                       ? std::string::npos
                                       : comma - pos);
        auto r = io_detail::parse_rank(piece);
        if (!r)
          throw parse_error(line, "bad kappa literal in product: " + piece);
        coords.push_back(*r);
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      if (static_cast<int>(coords.size()) != kind.width)
        throw parse_error(line, "product literal has width " +
                                    std::to_string(coords.size()) +
                                    ", expected " + std::to_string(kind.width));
      return plaus_value::kappa_product(std::move(coords));
    }
  }
  throw parse_error(line, "bad domain kind");
}

inline transition_model parse_model(std::string_view text) {
  std::optional<domain_kind> kind;
  std::optional<std::vector<std::string>> states;
  std::optional<std::string> init;
  struct entry {
    int line;
    std::string from, to, value;
  };
  std::vector<entry> entries;

  for (const auto& l : io_detail::tokenize(text)) {
    const auto& kw = l.tokens.front();
    if (kw == "domain") {
      if (kind) throw parse_error(l.number, "domain already declared");
      if (l.tokens.size() < 2) throw parse_error(l.number, "domain needs a name");
      const auto& name = l.tokens[1];
      if (name == "kappa" && l.tokens.size() == 2)
        kind = domain_kind::kappa();
      else if (name == "possibility" && l.tokens.size() == 2)
        kind = domain_kind::possibility();
      else if (name == "kappa_product" && l.tokens.size() == 3) {
        auto w = io_detail::parse_nat(l.tokens[2]);
        if (!w || *w < 1)
          throw parse_error(l.number, "bad kappa_product width");
        kind = domain_kind::kappa_product(static_cast<int>(*w));
      } else {
        throw parse_error(l.number, "bad domain declaration");
      }
    } else if (kw == "states") {
      if (states) throw parse_error(l.number, "states already declared");
      if (l.tokens.size() < 2)
        throw parse_error(l.number, "states needs at least one identifier");
      states = std::vector<std::string>(l.tokens.begin() + 1, l.tokens.end());
    } else if (kw == "init") {
      // runs have a unique initial state; a second init is rejected, not merged
      if (init)
        throw parse_error(l.number,
                          "init already declared (runs share one initial state)");
      if (l.tokens.size() != 2)
        throw parse_error(l.number, "init needs exactly one identifier");
      init = l.tokens[1];
    } else if (kw == "trans") {
      if (l.tokens.size() != 4)
        throw parse_error(l.number, "trans needs: from to value");
      entries.push_back({l.number, l.tokens[1], l.tokens[2], l.tokens[3]});
    } else {
      throw parse_error(l.number, "unknown directive: " + kw);
    }
  }

  if (!kind) throw parse_error(0, "missing domain");
  if (!states) throw parse_error(0, "missing states");
  if (!init) throw parse_error(0, "missing init");

  transition_model m(state_space(*states, *init), *kind);
  for (const auto& e : entries) {
    auto from = m.space().index_of(e.from);
    if (!from) throw parse_error(e.line, "unknown state: " + e.from);
    auto to = m.space().index_of(e.to);
    if (!to) throw parse_error(e.line, "unknown state: " + e.to);
    m.set(*from, *to, parse_plaus_value(*kind, e.value, e.line));
  }
  return m;
}

inline constraint_set parse_constraints(std::string_view text) {
  std::optional<std::vector<std::string>> states;
  std::optional<std::string> init;
  struct imp_entry {
    int line;
    std::string from, to;
  };
  struct order_entry {
    int line;
    std::string f1, t1, rel, f2, t2;
  };
  std::vector<imp_entry> imps;
  std::vector<order_entry> orders;

  for (const auto& l : io_detail::tokenize(text)) {
    const auto& kw = l.tokens.front();
    if (kw == "states") {
      if (states) throw parse_error(l.number, "states already declared");
      if (l.tokens.size() < 2)
        throw parse_error(l.number, "states needs at least one identifier");
      states = std::vector<std::string>(l.tokens.begin() + 1, l.tokens.end());
    } else if (kw == "init") {
      if (init)
        throw parse_error(l.number,
                          "init already declared (runs share one initial state)");
      if (l.tokens.size() != 2)
        throw parse_error(l.number, "init needs exactly one identifier");
      init = l.tokens[1];
    } else if (kw == "impossible") {
      if (l.tokens.size() != 3)
        throw parse_error(l.number, "impossible needs: from to");
      imps.push_back({l.number, l.tokens[1], l.tokens[2]});
    } else if (kw == "order") {
      if (l.tokens.size() != 6)
        throw parse_error(l.number, "order needs: f1 t1 <|<=|= f2 t2");
      orders.push_back(
          {l.number, l.tokens[1], l.tokens[2], l.tokens[3], l.tokens[4],
           l.tokens[5]});
    } else {
      throw parse_error(l.number, "unknown directive: " + kw);
    }
  }

  if (!states) throw parse_error(0, "missing states");
  if (!init) throw parse_error(0, "missing init");
  state_space sp(*states, *init);

  auto var_at = [&](int line, const std::string& from,
                    const std::string& to) -> transition_var {
    auto f = sp.index_of(from);
    if (!f) throw parse_error(line, "unknown state: " + from);
    auto t = sp.index_of(to);
    if (!t) throw parse_error(line, "unknown state: " + to);
    return {*f, *t};
  };

  std::vector<transition_var> impossible;
  for (const auto& e : imps) impossible.push_back(var_at(e.line, e.from, e.to));

  std::vector<constraint> relations;
  for (const auto& e : orders) {
    constraint_rel rel;
    if (e.rel == "<")
      rel = constraint_rel::lt;
    else if (e.rel == "<=")
      rel = constraint_rel::le;
    else if (e.rel == "=")
      rel = constraint_rel::eq;
    else
      throw parse_error(e.line, "bad relation: " + e.rel);
    relations.push_back(
        {var_at(e.line, e.f1, e.t1), rel, var_at(e.line, e.f2, e.t2)});
  }

  return constraint_set(sp, relations, impossible);
}

inline evidence parse_observations(std::string_view text,
                                   const state_space& sp) {
  evidence out;
  for (const auto& l : io_detail::tokenize(text)) {
    if (l.tokens.front() != "obs")
      throw parse_error(l.number, "unknown directive: " + l.tokens.front());
    if (l.tokens.size() < 2)
      throw parse_error(l.number, "obs needs at least one state or *");
    if (l.tokens.size() == 2 && l.tokens[1] == "*") {
      out.push_back(proposition::full(sp.size()));
      continue;
    }
    proposition o(sp.size());
    for (std::size_t i = 1; i < l.tokens.size(); ++i) {
      auto idx = sp.index_of(l.tokens[i]);
      if (!idx) throw parse_error(l.number, "unknown state: " + l.tokens[i]);
      o.add(*idx);
    }
    out.push_back(std::move(o));
  }
  return out;
}

inline std::vector<int> parse_prefix(const state_space& sp,
                                     std::string_view text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto sep = text.find('>', pos);
    auto piece = text.substr(
        pos, sep == std::string_view::npos ? std::string_view::npos : sep - pos);
    out.push_back(sp.require_index(piece));
    if (sep == std::string_view::npos) break;
    pos = sep + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// rendering

inline std::string format_prefix(const state_space& sp,
                                 const std::vector<int>& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += ">";
    out += sp.name(path[i]);
  }
  return out;
}

// one line per time step: tab-separated state=value pairs in state order
inline std::string format_state_vector(const state_space& sp,
                                       const std::vector<plaus_value>& vec) {
  std::string out;
  for (int s = 0; s < sp.size(); ++s) {
    if (s) out += "\t";
    out += sp.name(s) + "=" + vec[s].to_string();
  }
  return out;
}

// a reparsable model file; bottom entries are omitted
inline std::string format_model(const transition_model& m) {
  std::string out = "domain " + m.kind().name() + "\nstates";
  for (const auto& name : m.space().names()) out += " " + name;
  out += "\ninit " + m.space().name(m.space().init_index()) + "\n";
  const plaus_value bot = bottom(m.kind());
  for (int s = 0; s < m.space().size(); ++s)
    for (int s2 = 0; s2 < m.space().size(); ++s2)
      if (!(m.at(s, s2) == bot))
        out += "trans " + m.space().name(s) + " " + m.space().name(s2) + " " +
               m.at(s, s2).to_string() + "\n";
  return out;
}

inline std::string format_validation(const validation_report& report,
                                     const state_space& sp) {
  std::string out;
  for (const auto& r : report.rows) {
    if (!r.normalized)
      out += "row " + sp.name(r.state) + " sums to " + r.row_sum.to_string() +
             ", expected top\n";
  }
  for (int s : report.unreachable)
    out += "state " + sp.name(s) + " is unreachable from init\n";
  return out;
}

}  // namespace qmb
