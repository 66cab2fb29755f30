#include <gtest/gtest.h>

#include "iflow/iflow.hpp"
#include "support/cli.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace iflow;

namespace {

const char* kChain =
    "itg 1\n"
    "nodes 3\n"
    "0 0 0 5 5\n"
    "1 1 0 2 4\n"
    "2 2 0 0 1\n"
    "edges 2\n"
    "0 1\n"
    "1 2\n";

std::string nodeset(std::initializer_list<NodeId> ids) { return io::write_nodeset(NodeSet(ids)); }

}  // namespace

TEST(Itg, ParsesChain) {
  auto t = io::parse_itg(kChain);
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.edges().size(), 2u);
  EXPECT_EQ(t, fixtures::chain::terrain());
}

TEST(Itg, WriteIsExactInverse) {
  EXPECT_EQ(io::write_itg(io::parse_itg(kChain)), kChain);
}

TEST(Itg, AcceptsCrlfAndNormalizesEdges) {
  std::string crlf = "itg 1\r\nnodes 2\r\n0 0 0 0 1\r\n1 1 0 0 1\r\n\r\nedges 1\r\n1 0\r\n";
  auto t = io::parse_itg(crlf);
  EXPECT_EQ(io::write_itg(t), "itg 1\nnodes 2\n0 0 0 0 1\n1 1 0 0 1\nedges 1\n0 1\n");
}

TEST(Itg, InvertedIntervalNamesNode) {
  std::string bad = "itg 1\nnodes 2\n0 0 0 0 1\n1 1 0 3 1\nedges 1\n0 1\n";
  try {
    io::parse_itg(bad);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("node 1"), std::string::npos) << e.what();
  }
}

TEST(Itg, ParseErrorsCarryPosition) {
  try {
    io::parse_itg("itg 1\nnodes 2\n0 0 0 0 1\n1 1 0 x 1\nedges 0\n");
    FAIL();
  } catch (const io::ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_EQ(e.column(), 7u);
  }
  EXPECT_THROW(io::parse_itg("itg 2\n"), io::ParseError);
  EXPECT_THROW(io::parse_itg("itg 1\nnodes 1\n1 0 0 0 0\nedges 0\n"), io::ParseError);
  EXPECT_THROW(io::parse_itg("itg 1\nnodes 1\n0 0 0 0 0\nedges 1\n0 3\n"), io::ParseError);
  EXPECT_THROW(io::parse_itg("itg 1\nnodes 1\n0 0 0 0 0\nedges 0\nextra\n"), io::ParseError);
  EXPECT_THROW(io::parse_itg("itg 1\nnodes 2\n0 0 0 0 0\n1 1 0 0 0\nedges 2\n0 1\n1 0\n"), ValidationError);
}

TEST(Igr, GridShapes) {
  auto flat = [](std::size_t w, std::size_t h) {
    return io::GridSpec{w, h, 1.0, std::vector<double>(w * h, 0.0), std::vector<double>(w * h, 1.0)};
  };
  auto t22 = io::grid_terrain(flat(2, 2));
  EXPECT_EQ(t22.size(), 4u);
  EXPECT_EQ(t22.edges().size(), 6u);
  EXPECT_EQ(io::grid_terrain(flat(3, 1)).edges().size(), 2u);
  EXPECT_EQ(io::grid_terrain(flat(3, 3)).degree(4), 8u);
}

TEST(Igr, DiagonalLengthIsSqrt2TimesCellsize) {
  io::GridSpec g{2, 2, 2.5, {0, 0, 0, 0}, {1, 1, 1, 1}};
  auto t = io::grid_terrain(g);
  EXPECT_EQ(t.distance(0, 1), 2.5);
  EXPECT_EQ(t.distance(0, 2), 2.5);
  EXPECT_EQ(t.distance(0, 3), std::numbers::sqrt2 * 2.5);
  EXPECT_EQ(t.distance(1, 2), std::numbers::sqrt2 * 2.5);
}

TEST(Igr, ParseRoundTripAndErrors) {
  auto text = cli::slurp(cli::fixture("two_pit.igr"));
  auto g = io::parse_igr(text);
  EXPECT_EQ(g, fixtures::two_pit::grid());
  EXPECT_EQ(io::write_igr(g), text);
  EXPECT_THROW(io::parse_igr("igr 1\nncols 2 nrows 1 cellsize 1\nlow\n0\nhigh\n0 0\n"), io::ParseError);
  EXPECT_THROW(io::parse_igr("igr 1\nncols 1 nrows 1 cellsize 0\nlow\n0\nhigh\n0\n"), io::ParseError);
  EXPECT_THROW(io::parse_igr("igr 1\nncols 1 nrows 1 cellsize 1\nlow\n2\nhigh\n1\n"), ValidationError);
}

TEST(Outputs, Formats) {
  EXPECT_EQ(nodeset({2, 0}), "nodeset 2\n0\n2\n");
  EXPECT_EQ(io::write_realization({{0.5, 2, -1e-3}}), "realization 3\n0 0.5\n1 2\n2 -0.001\n");
  auto rep = regularize_sweep(fixtures::w_chain::terrain());
  EXPECT_EQ(io::write_minima(rep), "minima 2\nproxy 1 : members 1\nproxy 3 : members 3\n");
  EXPECT_EQ(io::write_mask(3, 2, {0, 4}), "mask 3 2\n1 0 0\n0 1 0\n");
  auto r = io::parse_realization("realization 2\n0 1.25\n1 3\n");
  EXPECT_EQ(r.elevation, (std::vector<double>{1.25, 3}));
}

TEST(IoProperties, RandomRoundTrips) {
  gen::Rng rng(91);
  for (int it = 0; it < 200; ++it) {
    auto t = gen::random_graph(rng, static_cast<std::size_t>(gen::uniform_int(rng, 1, 30)));
    // Perturb to non-lattice values so shortest round-trip formatting matters.
    std::vector<ElevationInterval> iv;
    for (NodeId v = 0; v < t.size(); ++v) {
      double a = t.low(v) + gen::uniform(rng, 0, 1) / 3.0;
      iv.push_back({a, a + (t.high(v) - t.low(v)) * 1.1});
    }
    auto u = t.with_intervals(iv);
    auto text = io::write_itg(u);
    auto back = io::parse_itg(text);
    EXPECT_EQ(back, u);
    EXPECT_EQ(io::write_itg(back), text);
    auto g = gen::random_grid_spec(rng, static_cast<std::size_t>(gen::uniform_int(rng, 1, 7)),
                                   static_cast<std::size_t>(gen::uniform_int(rng, 1, 7)));
    EXPECT_EQ(io::parse_igr(io::write_igr(g)), g);
  }
}

TEST(Cli, PowershedChainWithCanonical) {
  auto out = cli::scratch_dir() / "canon.txt";
  auto r = cli::run("powershed --terrain " + cli::fixture("chain.itg") + " --targets 2 --canonical " + out.string());
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, nodeset({0, 1, 2}));
  EXPECT_EQ(cli::slurp(out), "realization 3\n0 5\n1 2\n2 0\n");
}

TEST(Cli, RidgeSinglePitIsEmptyWithNotice) {
  auto r = cli::run("ridge --terrain " + cli::fixture("chain.itg"));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "nodeset 0\n");
  EXPECT_NE(r.err.find("notice"), std::string::npos);
}

TEST(Cli, RidgeNonRegularExitsThree) {
  auto r = cli::run("ridge --terrain " + cli::fixture("valley.itg"));
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.err.find("{0}"), std::string::npos) << r.err;
  auto ok = cli::run("ridge --auto-regularize --terrain " + cli::fixture("valley.itg"));
  EXPECT_EQ(ok.status, 0);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli::run("").status, 1);
  EXPECT_EQ(cli::run("powershed --terrain " + cli::fixture("chain.itg")).status, 1);
  EXPECT_EQ(cli::run("bogus").status, 1);
  EXPECT_EQ(cli::run("powershed --terrain /nonexistent.itg --targets 0").status, 2);
  EXPECT_EQ(cli::run("powershed --terrain " + cli::fixture("chain.itg") + " --targets 7").status, 2);
  EXPECT_EQ(cli::run("powershed --terrain " + cli::fixture("chain.itg") + " --targets 0 --mask /tmp/x").status, 2);
  EXPECT_EQ(cli::run("--help").status, 0);
}

TEST(Cli, GridMaskAndFormatOverride) {
  auto mask = cli::scratch_dir() / "mask.txt";
  auto r = cli::run("ridge --terrain " + cli::fixture("two_pit.igr") + " --mask " + mask.string());
  ASSERT_EQ(r.status, 0) << r.err;
  auto t = fixtures::two_pit::terrain();
  auto ridge = fuzzy_ridge(t).ridge;
  EXPECT_EQ(r.out, io::write_nodeset(ridge));
  EXPECT_EQ(cli::slurp(mask), io::write_mask(5, 3, ridge));
  auto copy = cli::scratch_dir() / "grid.txt";
  std::filesystem::copy_file(cli::fixture("two_pit.igr"), copy, std::filesystem::copy_options::overwrite_existing);
  auto f = cli::run("minima --format igr --terrain " + copy.string());
  ASSERT_EQ(f.status, 0) << f.err;
  auto rep = regularize_sweep(t);
  EXPECT_EQ(f.out, io::write_minima(rep) + io::write_realization(rep.M));
}

// Every command's node-set output equals the corresponding library call.
TEST(Cli, MatchesLibraryOnFixtures) {
  auto t = fixtures::detour::terrain();
  auto path = cli::fixture("detour.itg");
  for (NodeId q = 0; q < t.size(); ++q) {
    auto id = std::to_string(q);
    EXPECT_EQ(cli::run("powershed --terrain " + path + " --targets " + id).out,
              io::write_nodeset(potential_watershed(t, {q}).members));
    EXPECT_EQ(cli::run("powershed --terrain " + path + " --targets " + id + " --avoid 3").out,
              io::write_nodeset(avoiding_potential_watershed(t, {3}, {q}).members));
    EXPECT_EQ(cli::run("downstream --terrain " + path + " --sources " + id).out,
              io::write_nodeset(potential_downstream(t, {q}).members));
    EXPECT_EQ(cli::run("persistent --terrain " + path + " --targets " + id).out,
              io::write_nodeset(persistent_watershed(t, {q})));
    EXPECT_EQ(cli::run("boundary --terrain " + path + " --targets " + id).out,
              io::write_nodeset(fuzzy_boundary_area(t, {q})));
  }
  EXPECT_EQ(cli::run("flow --terrain " + cli::fixture("chain.itg") + " --realization " +
                     cli::fixture("chain_pit.realization") + " --targets 1,2")
                .out,
            nodeset({0, 1, 2}));
  auto vt = fixtures::valley::terrain();
  EXPECT_EQ(cli::run("regularize --terrain " + cli::fixture("valley.itg")).out, io::write_itg(regularized_terrain(vt)));
  auto out = cli::scratch_dir() / "reg.igr";
  ASSERT_EQ(cli::run("regularize --terrain " + cli::fixture("tilted.igr") + " --out " + out.string()).status, 0);
  auto g = io::parse_igr(cli::slurp(cli::fixture("tilted.igr")));
  auto reg = io::parse_igr(cli::slurp(out));
  EXPECT_EQ(io::grid_terrain(reg), regularized_terrain(io::grid_terrain(g)));
}
