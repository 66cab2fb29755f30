#pragma once

// Text formats: ITG (imprecise terrain graph), IGR (imprecise grid) and the
// result formats written by the command-line tool. All writers are
// byte-deterministic; numbers use the shortest round-trip decimal form.

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "iflow/core.hpp"
#include "iflow/regular.hpp"

namespace iflow::io {

class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, std::size_t col, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what),
        line_(line),
        col_(col) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return col_; }

 private:
  std::size_t line_, col_;
};

inline std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

namespace detail {

struct Token {
  std::string_view text;
  std::size_t col;
};

// Splits input into lines of whitespace-separated tokens. Blank lines are
// dropped but line numbers are kept.
class Lexer {
 public:
  explicit Lexer(std::string_view text) {
    std::size_t lineno = 0, pos = 0;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      std::vector<Token> toks;
      std::size_t i = 0;
      while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t b = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > b) toks.push_back({line.substr(b, i - b), b + 1});
      }
      if (!toks.empty()) lines_.push_back({lineno, std::move(toks)});
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
    last_line_ = lineno;
  }

  bool done() const { return at_ >= lines_.size(); }
  std::size_t line_number() const { return done() ? last_line_ : lines_[at_].first; }

  // Next line, which must have exactly `count` tokens.
  const std::vector<Token>& next(std::size_t count, const char* what) {
    if (done()) throw ParseError(last_line_, 1, std::string("unexpected end of input, expected ") + what);
    const auto& [ln, toks] = lines_[at_++];
    if (toks.size() != count)
      throw ParseError(ln, toks.size() < count ? toks.back().col : toks[count].col,
                       "expected " + std::to_string(count) + " fields for " + what + ", found " +
                           std::to_string(toks.size()));
    current_ = ln;
    return toks;
  }

  std::size_t current() const { return current_; }

  void keyword(const Token& tok, std::string_view kw) const {
    if (tok.text != kw) throw ParseError(current_, tok.col, "expected '" + std::string(kw) + "'");
  }

  double number(const Token& tok) const {
    double x = 0.0;
    auto [p, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), x);
    if (ec != std::errc() || p != tok.text.data() + tok.text.size() || !std::isfinite(x))
      throw ParseError(current_, tok.col, "invalid number '" + std::string(tok.text) + "'");
    return x;
  }

  std::uint64_t integer(const Token& tok) const {
    std::uint64_t x = 0;
    auto [p, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), x);
    if (ec != std::errc() || p != tok.text.data() + tok.text.size())
      throw ParseError(current_, tok.col, "invalid integer '" + std::string(tok.text) + "'");
    return x;
  }

  void expect_end() const {
    if (!done()) throw ParseError(lines_[at_].first, 1, "unexpected trailing content");
  }

 private:
  std::vector<std::pair<std::size_t, std::vector<Token>>> lines_;
  std::size_t at_ = 0, current_ = 0, last_line_ = 0;
};

}  // namespace detail

inline ImpreciseTerrain parse_itg(std::string_view text) {
  detail::Lexer lx(text);
  auto h = lx.next(2, "header");
  lx.keyword(h[0], "itg");
  lx.keyword(h[1], "1");
  auto nl = lx.next(2, "node count");
  lx.keyword(nl[0], "nodes");
  auto n = lx.integer(nl[1]);
  if (n > std::numeric_limits<NodeId>::max() - 1) throw ParseError(lx.current(), nl[1].col, "too many nodes");
  std::vector<Point2> pos;
  std::vector<ElevationInterval> iv;
  for (std::uint64_t i = 0; i < n; ++i) {
    auto f = lx.next(5, "node line");
    if (lx.integer(f[0]) != i)
      throw ParseError(lx.current(), f[0].col, "expected node id " + std::to_string(i));
    pos.push_back({lx.number(f[1]), lx.number(f[2])});
    iv.push_back({lx.number(f[3]), lx.number(f[4])});
  }
  auto el = lx.next(2, "edge count");
  lx.keyword(el[0], "edges");
  auto m = lx.integer(el[1]);
  std::vector<Edge> edges;
  for (std::uint64_t i = 0; i < m; ++i) {
    auto f = lx.next(2, "edge line");
    auto u = lx.integer(f[0]), v = lx.integer(f[1]);
    if (u >= n) throw ParseError(lx.current(), f[0].col, "edge endpoint " + std::to_string(u) + " does not exist");
    if (v >= n) throw ParseError(lx.current(), f[1].col, "edge endpoint " + std::to_string(v) + " does not exist");
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  lx.expect_end();
  ImpreciseTerrain t(std::move(pos), std::move(iv), std::move(edges));
  require_valid(t);
  return t;
}

inline std::string write_itg(const ImpreciseTerrain& t) {
  std::string s = "itg 1\nnodes " + std::to_string(t.size()) + "\n";
  for (NodeId v = 0; v < t.size(); ++v) {
    s += std::to_string(v) + ' ' + format_number(t.position(v).x) + ' ' + format_number(t.position(v).y) + ' ' +
         format_number(t.low(v)) + ' ' + format_number(t.high(v)) + '\n';
  }
  s += "edges " + std::to_string(t.edges().size()) + "\n";
  for (const auto& e : t.edges()) s += std::to_string(e.u) + ' ' + std::to_string(e.v) + '\n';
  return s;
}

struct GridSpec {
  std::size_t ncols = 0;
  std::size_t nrows = 0;
  double cellsize = 1.0;
  std::vector<double> low;   // row-major, north to south
  std::vector<double> high;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

inline GridSpec parse_igr(std::string_view text) {
  detail::Lexer lx(text);
  auto h = lx.next(2, "header");
  lx.keyword(h[0], "igr");
  lx.keyword(h[1], "1");
  auto d = lx.next(6, "grid dimensions");
  lx.keyword(d[0], "ncols");
  lx.keyword(d[2], "nrows");
  lx.keyword(d[4], "cellsize");
  GridSpec g;
  g.ncols = lx.integer(d[1]);
  g.nrows = lx.integer(d[3]);
  g.cellsize = lx.number(d[5]);
  if (g.ncols == 0 || g.nrows == 0) throw ParseError(lx.current(), d[1].col, "grid dimensions must be positive");
  if (!(g.cellsize > 0.0)) throw ParseError(lx.current(), d[5].col, "cellsize must be positive");
  if (g.ncols * g.nrows > std::numeric_limits<NodeId>::max() - 1)
    throw ParseError(lx.current(), d[1].col, "grid too large");
  auto raster = [&](const char* name, std::vector<double>& out) {
    lx.keyword(lx.next(1, name)[0], name);
    out.reserve(g.ncols * g.nrows);
    for (std::size_t r = 0; r < g.nrows; ++r) {
      auto row = lx.next(g.ncols, "raster row");
      for (const auto& tok : row) out.push_back(lx.number(tok));
    }
  };
  raster("low", g.low);
  raster("high", g.high);
  lx.expect_end();
  for (std::size_t i = 0; i < g.low.size(); ++i)
    if (g.low[i] > g.high[i])
      throw ValidationError("node " + std::to_string(i) + " (row " + std::to_string(i / g.ncols) + ", column " +
                            std::to_string(i % g.ncols) + ") has low > high");
  return g;
}

inline std::string write_igr(const GridSpec& g) {
  std::string s = "igr 1\nncols " + std::to_string(g.ncols) + " nrows " + std::to_string(g.nrows) + " cellsize " +
                  format_number(g.cellsize) + "\n";
  auto raster = [&](const char* name, const std::vector<double>& v) {
    s += name;
    s += '\n';
    for (std::size_t r = 0; r < g.nrows; ++r) {
      for (std::size_t c = 0; c < g.ncols; ++c) {
        if (c) s += ' ';
        s += format_number(v[r * g.ncols + c]);
      }
      s += '\n';
    }
  };
  raster("low", g.low);
  raster("high", g.high);
  return s;
}

// D8 grid graph: node id = row * ncols + col, orthogonal edges of length
// cellsize, diagonal edges of length sqrt2 * cellsize.
inline ImpreciseTerrain grid_terrain(const GridSpec& g) {
  if (g.low.size() != g.ncols * g.nrows || g.high.size() != g.ncols * g.nrows)
    throw ValidationError("raster size does not match grid dimensions");
  const double C = g.cellsize, D = std::numbers::sqrt2 * g.cellsize;
  std::vector<Point2> pos;
  std::vector<ElevationInterval> iv;
  pos.reserve(g.low.size());
  iv.reserve(g.low.size());
  for (std::size_t r = 0; r < g.nrows; ++r)
    for (std::size_t c = 0; c < g.ncols; ++c) {
      pos.push_back({static_cast<double>(c) * C, static_cast<double>(g.nrows - 1 - r) * C});
      iv.push_back({g.low[r * g.ncols + c], g.high[r * g.ncols + c]});
    }
  std::vector<Edge> edges;
  std::vector<double> len;
  auto id = [&](std::size_t r, std::size_t c) { return static_cast<NodeId>(r * g.ncols + c); };
  for (std::size_t r = 0; r < g.nrows; ++r)
    for (std::size_t c = 0; c < g.ncols; ++c) {
      if (c + 1 < g.ncols) edges.push_back({id(r, c), id(r, c + 1)}), len.push_back(C);
      if (r + 1 < g.nrows) {
        if (c > 0) edges.push_back({id(r, c), id(r + 1, c - 1)}), len.push_back(D);
        edges.push_back({id(r, c), id(r + 1, c)}), len.push_back(C);
        if (c + 1 < g.ncols) edges.push_back({id(r, c), id(r + 1, c + 1)}), len.push_back(D);
      }
    }
  ImpreciseTerrain t(std::move(pos), std::move(iv), std::move(edges), std::move(len));
  require_valid(t);
  return t;
}

inline std::string write_nodeset(const NodeSet& s) {
  std::string out = "nodeset " + std::to_string(s.size()) + "\n";
  for (NodeId v : s) out += std::to_string(v) + '\n';
  return out;
}

inline std::string write_realization(const Realization& r) {
  std::string out = "realization " + std::to_string(r.size()) + "\n";
  for (NodeId v = 0; v < r.size(); ++v) out += std::to_string(v) + ' ' + format_number(r[v]) + '\n';
  return out;
}

inline Realization parse_realization(std::string_view text) {
  detail::Lexer lx(text);
  auto h = lx.next(2, "header");
  lx.keyword(h[0], "realization");
  auto n = lx.integer(h[1]);
  Realization r;
  for (std::uint64_t i = 0; i < n; ++i) {
    auto f = lx.next(2, "realization line");
    if (lx.integer(f[0]) != i) throw ParseError(lx.current(), f[0].col, "expected node id " + std::to_string(i));
    r.elevation.push_back(lx.number(f[1]));
  }
  lx.expect_end();
  return r;
}

inline std::string write_minima(const MinimaReport& rep) {
  std::string out = "minima " + std::to_string(rep.minima.size()) + "\n";
  for (std::size_t i = 0; i < rep.minima.size(); ++i) {
    out += "proxy " + std::to_string(rep.proxy[i]) + " : members";
    for (NodeId v : rep.minima[i]) out += ' ' + std::to_string(v);
    out += '\n';
  }
  return out;
}

inline std::string write_mask(std::size_t ncols, std::size_t nrows, const NodeSet& s) {
  auto m = s.mask(ncols * nrows);
  std::string out = "mask " + std::to_string(ncols) + " " + std::to_string(nrows) + "\n";
  for (std::size_t r = 0; r < nrows; ++r) {
    for (std::size_t c = 0; c < ncols; ++c) {
      if (c) out += ' ';
      out += m[r * ncols + c] ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

}  // namespace iflow::io
