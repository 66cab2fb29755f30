// iflow: command-line front end for the imprecise-terrain flow library.
//
// Exit codes: 0 success, 1 usage, 2 data or validation error, 3 violated
// precondition (for example a non-regular terrain passed to `ridge`).

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "iflow/iflow.hpp"

namespace {

using namespace iflow;

enum Exit { kOk = 0, kUsage = 1, kData = 2, kPrecondition = 3 };

struct Input {
  ImpreciseTerrain terrain;
  std::optional<io::GridSpec> grid;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
  if (!out) throw ValidationError("cannot write " + path);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Input load(const std::string& path, const std::string& format) {
  std::string fmt = format;
  if (fmt.empty()) fmt = ends_with(path, ".igr") ? "igr" : "itg";
  std::string text = read_file(path);
  try {
    if (fmt == "igr") {
      auto g = io::parse_igr(text);
      auto t = io::grid_terrain(g);
      return {std::move(t), std::move(g)};
    }
    return {io::parse_itg(text), std::nullopt};
  } catch (const io::ParseError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

NodeSet ids(const ImpreciseTerrain& t, const std::vector<NodeId>& v) {
  NodeSet s(v);
  require_nodes(t, s);
  return s;
}

struct Common {
  std::string terrain;
  std::string format;
  std::string mask;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--terrain", c.terrain, "terrain file (.itg or .igr)")->required();
  sub->add_option("--format", c.format, "input format, overrides the file extension")
      ->check(CLI::IsMember({"itg", "igr"}));
  sub->add_option("--mask", c.mask, "also write a 0/1 raster of the result (grid terrains only)");
}

// Prints a node set and writes the optional mask.
void emit(const Input& in, const Common& c, const NodeSet& s) {
  std::cout << io::write_nodeset(s);
  if (c.mask.empty()) return;
  if (!in.grid) throw ValidationError("--mask requires a grid terrain");
  write_file(c.mask, io::write_mask(in.grid->ncols, in.grid->nrows, s));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Water flow on imprecise terrains"};
  app.require_subcommand(1);

  Common common;
  std::vector<NodeId> targets, avoid, sources;
  std::string realization_path, canonical_path, out_path;
  bool auto_regularize = false;

  auto* flow = app.add_subcommand("flow", "watershed of the targets on one realization");
  add_common(flow, common);
  flow->add_option("--realization", realization_path, "realization file")->required();
  flow->add_option("--targets", targets, "target node ids")->required()->delimiter(',');

  auto* pows = app.add_subcommand("powershed", "potential watershed and its canonical realization");
  add_common(pows, common);
  pows->add_option("--targets", targets, "target node ids")->required()->delimiter(',');
  pows->add_option("--avoid", avoid, "nodes whose paths are discarded")->delimiter(',');
  pows->add_option("--canonical", canonical_path, "write the canonical realization here");

  auto* down = app.add_subcommand("downstream", "potential downstream area");
  add_common(down, common);
  down->add_option("--sources", sources, "source node ids")->required()->delimiter(',');

  auto* pers = app.add_subcommand("persistent", "persistent watershed");
  add_common(pers, common);
  pers->add_option("--targets", targets, "target node ids")->required()->delimiter(',');

  auto* minima = app.add_subcommand("minima", "imprecise minima, proxies and the raised lower bounds");
  add_common(minima, common);

  auto* reg = app.add_subcommand("regularize", "write the regularized terrain");
  add_common(reg, common);
  reg->add_option("--out", out_path, "output file (default: standard output)");

  auto* bound = app.add_subcommand("boundary", "fuzzy watershed boundary area");
  add_common(bound, common);
  bound->add_option("--targets", targets, "target node ids")->required()->delimiter(',');

  auto* ridge = app.add_subcommand("ridge", "fuzzy ridge between the imprecise minima");
  add_common(ridge, common);
  ridge->add_flag("--auto-regularize", auto_regularize, "regularize non-regular input first");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    Input in = load(common.terrain, common.format);
    const auto& t = in.terrain;

    if (*flow) {
      auto r = io::parse_realization(read_file(realization_path));
      require_valid_realization(t, r);
      emit(in, common, watershed(t, r, ids(t, targets)));
    } else if (*pows) {
      SlopeIndex idx(t);
      auto Q = ids(t, targets);
      auto res = avoid.empty() ? potential_watershed(idx, Q) : avoiding_potential_watershed(idx, ids(t, avoid), Q);
      emit(in, common, res.members);
      if (!canonical_path.empty()) write_file(canonical_path, io::write_realization(canonical_realization(t, res)));
    } else if (*down) {
      emit(in, common, potential_downstream(t, ids(t, sources)).members);
    } else if (*pers) {
      emit(in, common, persistent_watershed(t, ids(t, targets)));
    } else if (*minima) {
      auto rep = regularize_sweep(t);
      std::cout << io::write_minima(rep) << io::write_realization(rep.M);
    } else if (*reg) {
      auto rep = regularize_sweep(t);
      std::string text;
      if (in.grid) {
        auto g = *in.grid;
        g.low = rep.M.elevation;
        text = io::write_igr(g);
      } else {
        text = io::write_itg(regularized_terrain(t, rep));
      }
      if (out_path.empty())
        std::cout << text;
      else
        write_file(out_path, text);
    } else if (*bound) {
      emit(in, common, fuzzy_boundary_area(t, ids(t, targets)));
    } else if (*ridge) {
      const ImpreciseTerrain* use = &t;
      ImpreciseTerrain regularized;
      if (auto m = irregular_minimum(t)) {
        if (!auto_regularize) throw NonRegularError(*m);
        regularized = regularized_terrain(t);
        use = &regularized;
        std::cerr << "notice: terrain is not regular; ridge computed on the regularized terrain\n";
      }
      auto r = fuzzy_ridge(*use);
      if (r.minima.proxy.size() < 2)
        std::cerr << "notice: fewer than two imprecise minima; the fuzzy ridge is empty\n";
      emit(in, common, r.ridge);
    }
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  std::cout.flush();
  return kOk;
}
